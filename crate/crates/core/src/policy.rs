//! Merge policies as pure decision procedures over a [`StackView`].
//!
//! A policy never sees the run stack directly. It asks the view for run
//! lengths by depth (`R1` is the top run), passing a *budget*: the largest
//! length that could still make the comparison it is about to evaluate come
//! out true. A view that would have to work to learn a length (walking back
//! over the array, say) may stop once the budget is exceeded and answer
//! [`ProbeResult::ExceedsBudget`]; every policy below reads that answer as
//! "the comparison is false". Budgets carry one cell of slack.
//!
//! Conditions are evaluated in the same order as the textbook formulations of
//! each policy, because the engines' walking cost depends on that order.
//! Stack-size guards (`|S| > 3` and friends) are checked after the length
//! comparison whenever the comparison itself already locates the deeper run,
//! which gives the same decisions for less walking.

use std::fmt;
use std::str::FromStr;

use crate::runs::RunEntry;

/// Answer to a bounded length probe.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ProbeResult {
    Known(usize),
    ExceedsBudget,
}

/// The next action a policy asks for.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PolicyDecision {
    /// Merge `R(depth + 1)` into `R(depth)`: `MergeAt(2)` merges `R3` with
    /// `R2`, `MergeAt(1)` merges `R2` with `R1`.
    MergeAt(usize),
    Stop,
}

/// Read access to the top of a run stack.
///
/// Depths are 1-based from the top. `probe` returns `None` when the stack
/// holds fewer than `depth` runs.
pub trait StackView {
    /// Length of the array region being sorted.
    fn region_len(&self) -> usize;

    /// The top run. Its length and position are always known.
    fn top(&self) -> RunEntry;

    fn probe(&mut self, depth: usize, budget: usize) -> Option<ProbeResult>;

    /// Whether the stack holds at least `depth` runs.
    fn exists(&mut self, depth: usize) -> bool;

    /// Cached metadata of the run at `depth`, if that run is currently held.
    fn aux(&self, depth: usize) -> Option<u32>;

    fn set_aux(&mut self, depth: usize, value: u32);

    /// Exact length of the run at `depth`, however far that takes.
    fn require(&mut self, depth: usize) -> Option<usize> {
        match self.probe(depth, usize::MAX) {
            Some(ProbeResult::Known(len)) => Some(len),
            Some(ProbeResult::ExceedsBudget) => unreachable!("unbounded probe exceeded its budget"),
            None => None,
        }
    }
}

/// Power of the boundary between two neighbouring runs.
///
/// Midpoints are passed doubled (`2 * start + len`) so they stay integral.
/// Conceptually a perfect binary tree is laid over `[0, n]`; the result is
/// the smallest depth of a tree node strictly right of `mid_left_x2 / 2` and
/// at or left of `mid_right_x2 / 2`. The root has depth 0.
///
/// This equals the number of leading bits shared by the binary fractions
/// `mid_left_x2 / 2n` and `mid_right_x2 / 2n`.
pub fn node_power(mid_left_x2: usize, mid_right_x2: usize, n: usize) -> u32 {
    debug_assert!(mid_left_x2 < mid_right_x2 && mid_right_x2 < 2 * n);
    let scale = 2 * n as u128;
    let a = (((mid_left_x2 as u128) << 64) / scale) as u64;
    let b = (((mid_right_x2 as u128) << 64) / scale) as u64;
    (a ^ b).leading_zeros()
}

/// Power between two adjacent runs of a region of length `n`.
pub fn run_pair_power(left: RunEntry, right: RunEntry, n: usize) -> u32 {
    debug_assert_eq!(left.end(), right.start);
    node_power(2 * left.start + left.len, 2 * right.start + right.len, n)
}

/// `floor(log2(r / c))`, negative when `r < c`.
pub fn shivers_level(r: usize, c: f64) -> i32 {
    debug_assert!(r >= 1 && c > 0.0);
    if c == 1.0 {
        return r.ilog2() as i32;
    }
    (r as f64 / c).log2().floor() as i32
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Policy {
    PowerSort,
    CAdaptiveShivers { c: f64 },
    Shivers,
    AlphaStack { alpha: f64 },
    TwoMerge,
    AlphaMerge { alpha: f64 },
    TimSort,
    OriginalTimSort,
}

impl Policy {
    /// Every policy with its default parameter.
    pub const ALL: [Policy; 8] = [
        Policy::PowerSort,
        Policy::CAdaptiveShivers { c: 1.0 },
        Policy::Shivers,
        Policy::AlphaStack { alpha: 2.0 },
        Policy::TwoMerge,
        Policy::AlphaMerge { alpha: 1.8 },
        Policy::TimSort,
        Policy::OriginalTimSort,
    ];

    /// Policies whose walk-back cost stays within a constant factor of their
    /// merge cost.
    pub const WALKABLE: [Policy; 6] = [
        Policy::PowerSort,
        Policy::CAdaptiveShivers { c: 1.0 },
        Policy::Shivers,
        Policy::AlphaStack { alpha: 2.0 },
        Policy::TwoMerge,
        Policy::OriginalTimSort,
    ];

    /// Number of top runs a shallow stack keeps for this policy.
    pub fn capacity(&self) -> usize {
        match self {
            Policy::PowerSort | Policy::CAdaptiveShivers { .. } | Policy::TwoMerge => 3,
            Policy::Shivers | Policy::AlphaStack { .. } => 2,
            Policy::AlphaMerge { .. } | Policy::TimSort | Policy::OriginalTimSort => 4,
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            Policy::PowerSort => "powersort",
            Policy::CAdaptiveShivers { .. } => "c-adaptive-shivers",
            Policy::Shivers => "shivers",
            Policy::AlphaStack { .. } => "alpha-stack",
            Policy::TwoMerge => "two-merge",
            Policy::AlphaMerge { .. } => "alpha-merge",
            Policy::TimSort => "timsort",
            Policy::OriginalTimSort => "original-timsort",
        }
    }

    /// Decides the next merge, or [`PolicyDecision::Stop`] once the policy's
    /// invariant holds. The top run must exist.
    pub fn step<V: StackView + ?Sized>(&self, view: &mut V) -> PolicyDecision {
        match *self {
            Policy::PowerSort => powersort(view),
            Policy::CAdaptiveShivers { c } => c_adaptive_shivers(view, c),
            Policy::Shivers => shivers(view),
            Policy::AlphaStack { alpha } => alpha_stack(view, alpha),
            Policy::TwoMerge => two_merge(view),
            Policy::AlphaMerge { alpha } => alpha_merge(view, alpha),
            Policy::TimSort => timsort(view, true),
            Policy::OriginalTimSort => timsort(view, false),
        }
    }
}

impl fmt::Display for Policy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Policy::CAdaptiveShivers { c } if *c != 1.0 => write!(f, "{}:{c}", self.name()),
            Policy::AlphaStack { alpha } if *alpha != 2.0 => write!(f, "{}:{alpha}", self.name()),
            Policy::AlphaMerge { alpha } if *alpha != 1.8 => write!(f, "{}:{alpha}", self.name()),
            _ => f.write_str(self.name()),
        }
    }
}

impl FromStr for Policy {
    type Err = String;

    /// Accepts a policy name optionally followed by `:<parameter>`, e.g.
    /// `alpha-merge:1.7`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let (name, param) = match s.split_once(':') {
            Some((n, p)) => {
                let p: f64 = p.parse().map_err(|_| format!("bad parameter in `{s}`"))?;
                (n, Some(p))
            }
            None => (s, None),
        };
        let policy = match name {
            "powersort" => Policy::PowerSort,
            "c-adaptive-shivers" | "adaptive-shivers" => {
                let c = param.unwrap_or(1.0);
                if c <= 0.0 {
                    return Err(format!("c must be positive, got {c}"));
                }
                Policy::CAdaptiveShivers { c }
            }
            "shivers" => Policy::Shivers,
            "alpha-stack" => Policy::AlphaStack {
                alpha: alpha_param(param, 2.0)?,
            },
            "two-merge" | "2-merge" => Policy::TwoMerge,
            "alpha-merge" => Policy::AlphaMerge {
                alpha: alpha_param(param, 1.8)?,
            },
            "timsort" => Policy::TimSort,
            "original-timsort" => Policy::OriginalTimSort,
            _ => return Err(format!("unknown policy `{name}`")),
        };
        if param.is_some()
            && !matches!(
                policy,
                Policy::CAdaptiveShivers { .. } | Policy::AlphaStack { .. } | Policy::AlphaMerge { .. }
            )
        {
            return Err(format!("policy `{name}` takes no parameter"));
        }
        Ok(policy)
    }
}

fn alpha_param(param: Option<f64>, default: f64) -> Result<f64, String> {
    let alpha = param.unwrap_or(default);
    if alpha <= 1.0 {
        return Err(format!("alpha must exceed 1, got {alpha}"));
    }
    Ok(alpha)
}

fn known(p: Option<ProbeResult>) -> Option<usize> {
    match p {
        Some(ProbeResult::Known(len)) => Some(len),
        _ => None,
    }
}

fn scaled_budget(factor: f64, r: usize) -> usize {
    (factor * r as f64).ceil() as usize + 1
}

fn less_than_scaled(x: usize, factor: f64, r: usize) -> bool {
    (x as f64) < factor * r as f64
}

fn powersort<V: StackView + ?Sized>(view: &mut V) -> PolicyDecision {
    let n = view.region_len();
    let top = view.top();
    let Some(r2) = view.require(2) else {
        return PolicyDecision::Stop;
    };
    let s2 = top.start - r2;
    let p2 = node_power(2 * s2 + r2, 2 * top.start + top.len, n);
    let p3 = match view.aux(3) {
        Some(p) => Some(p),
        None => {
            // A third run of length >= n / 2^p2 cannot have a larger power.
            let budget = n.div_ceil(1usize << p2) + 1;
            known(view.probe(3, budget)).map(|r3| node_power(2 * (s2 - r3) + r3, 2 * s2 + r2, n))
        }
    };
    match p3 {
        Some(p3) if p3 > p2 => PolicyDecision::MergeAt(2),
        _ => {
            view.set_aux(2, p2);
            PolicyDecision::Stop
        }
    }
}

fn c_adaptive_shivers<V: StackView + ?Sized>(view: &mut V, c: f64) -> PolicyDecision {
    let r1 = view.top().len;
    let Some(r2) = view.require(2) else {
        return PolicyDecision::Stop;
    };
    // r3 > 2 max(r1, r2) forces level(r3) > max(level(r1), level(r2)).
    let budget = 2 * r1.max(r2) + 1;
    let Some(r3) = known(view.probe(3, budget)) else {
        return PolicyDecision::Stop;
    };
    let level = |r| shivers_level(r, c);
    if level(r3) <= level(r1).max(level(r2)) {
        PolicyDecision::MergeAt(2)
    } else {
        PolicyDecision::Stop
    }
}

fn shivers<V: StackView + ?Sized>(view: &mut V) -> PolicyDecision {
    let r1 = view.top().len;
    match known(view.probe(2, 2 * r1 + 1)) {
        Some(r2) if (1usize << r2.ilog2()) <= r1 => PolicyDecision::MergeAt(1),
        _ => PolicyDecision::Stop,
    }
}

fn alpha_stack<V: StackView + ?Sized>(view: &mut V, alpha: f64) -> PolicyDecision {
    let r1 = view.top().len;
    match known(view.probe(2, scaled_budget(alpha, r1))) {
        Some(r2) if less_than_scaled(r2, alpha, r1) => PolicyDecision::MergeAt(1),
        _ => PolicyDecision::Stop,
    }
}

fn two_merge<V: StackView + ?Sized>(view: &mut V) -> PolicyDecision {
    let r1 = view.top().len;
    let Some(r2) = known(view.probe(2, 2 * r1 + 1)) else {
        return PolicyDecision::Stop;
    };
    if r2 >= 2 * r1 || !view.exists(3) {
        return PolicyDecision::Stop;
    }
    if known(view.probe(3, r1 + 1)).is_some_and(|r3| r3 < r1) {
        PolicyDecision::MergeAt(2)
    } else {
        PolicyDecision::MergeAt(1)
    }
}

fn alpha_merge<V: StackView + ?Sized>(view: &mut V, alpha: f64) -> PolicyDecision {
    let r1 = view.top().len;
    let Some(first) = view.probe(2, scaled_budget(alpha, r1)) else {
        return PolicyDecision::Stop;
    };
    let upper = matches!(first, ProbeResult::Known(r2) if less_than_scaled(r2, alpha, r1));
    let violated = upper || {
        let r2 = view.require(2).expect("second run exists");
        known(view.probe(3, scaled_budget(alpha, r2))).is_some_and(|r3| less_than_scaled(r3, alpha, r2))
    };
    if !violated {
        return PolicyDecision::Stop;
    }
    if known(view.probe(3, r1 + 1)).is_some_and(|r3| r3 < r1) {
        PolicyDecision::MergeAt(2)
    } else {
        PolicyDecision::MergeAt(1)
    }
}

/// TimSort's merge cascade. `with_fourth` adds the fourth condition that
/// repaired the original invariant.
fn timsort<V: StackView + ?Sized>(view: &mut V, with_fourth: bool) -> PolicyDecision {
    let r1 = view.top().len;
    // #1: |S| > 3 and r1 > r3
    if let Some(r3) = known(view.probe(3, r1 + 1)) {
        if r1 > r3 && view.exists(4) {
            return PolicyDecision::MergeAt(2);
        }
    }
    // #2: |S| > 2 and r1 >= r2
    let Some(r2) = view.require(2) else {
        return PolicyDecision::Stop;
    };
    if r1 >= r2 && view.exists(3) {
        return PolicyDecision::MergeAt(1);
    }
    // #3: |S| > 3 and r1 + r2 >= r3
    if let Some(r3) = known(view.probe(3, r1 + r2 + 1)) {
        if r1 + r2 >= r3 && view.exists(4) {
            return PolicyDecision::MergeAt(1);
        }
    }
    // #4: |S| > 4 and r2 + r3 >= r4
    if with_fourth {
        if let Some(r3) = view.require(3) {
            if let Some(r4) = known(view.probe(4, r2 + r3 + 1)) {
                if r2 + r3 >= r4 && view.exists(5) {
                    return PolicyDecision::MergeAt(1);
                }
            }
        }
    }
    PolicyDecision::Stop
}

#[cfg(test)]
mod tests {
    use super::*;

    /// A fully known stack given bottom-to-top by run lengths. With a
    /// `budgeted` flag it hides every length above the probe budget, which is
    /// what a walking view may do.
    struct LengthStack {
        runs: Vec<RunEntry>,
        n: usize,
        budgeted: bool,
    }

    impl LengthStack {
        fn new(lengths: &[usize], budgeted: bool) -> Self {
            let mut runs = Vec::new();
            let mut start = 0;
            for &len in lengths {
                runs.push(RunEntry::new(start, len));
                start += len;
            }
            Self {
                runs,
                n: start,
                budgeted,
            }
        }

        fn at(&self, depth: usize) -> Option<&RunEntry> {
            self.runs.len().checked_sub(depth).map(|i| &self.runs[i])
        }
    }

    impl StackView for LengthStack {
        fn region_len(&self) -> usize {
            self.n
        }
        fn top(&self) -> RunEntry {
            *self.runs.last().unwrap()
        }
        fn probe(&mut self, depth: usize, budget: usize) -> Option<ProbeResult> {
            let r = self.at(depth)?;
            if self.budgeted && r.len > budget {
                Some(ProbeResult::ExceedsBudget)
            } else {
                Some(ProbeResult::Known(r.len))
            }
        }
        fn exists(&mut self, depth: usize) -> bool {
            self.runs.len() >= depth
        }
        fn aux(&self, _depth: usize) -> Option<u32> {
            None
        }
        fn set_aux(&mut self, _depth: usize, _value: u32) {}
    }

    fn decide(policy: Policy, lengths: &[usize]) -> PolicyDecision {
        policy.step(&mut LengthStack::new(lengths, false))
    }

    /// Explicit superimposed tree: node j at depth d sits at doubled position
    /// (2j + 1) * 2n / 2^(d + 1). For every unit cell (c - 1, c] of doubled
    /// positions, record the shallowest node inside it.
    fn cell_depths(n: usize) -> Vec<u32> {
        let span = 2 * n as u128;
        let mut cells = vec![u32::MAX; 2 * n + 1];
        let mut depth = 0u32;
        loop {
            let nodes = 1u128 << depth;
            let denom = nodes * 2;
            for j in 0..nodes {
                let num = (2 * j + 1) * span;
                let cell = num.div_ceil(denom) as usize;
                cells[cell] = cells[cell].min(depth);
            }
            // Node spacing below one cell: every cell now holds a node.
            if denom > 2 * span {
                break;
            }
            depth += 1;
        }
        cells
    }

    #[test]
    fn node_power_matches_tree_oracle_exhaustively() {
        for n in 1..=512usize {
            let cells = cell_depths(n);
            for a in 0..2 * n {
                let mut best = u32::MAX;
                for (b, &depth) in cells.iter().enumerate().take(2 * n).skip(a + 1) {
                    best = best.min(depth);
                    let got = node_power(a, b, n);
                    assert_eq!(got, best, "n={n} a={a} b={b}");
                    // Neighbouring runs have doubled midpoints at least 2 apart.
                    if b >= a + 2 {
                        assert!(got <= n.ilog2());
                    }
                }
            }
        }
    }

    #[test]
    fn node_power_examples() {
        // n = 7, runs (0, 2) and (2, 5).
        assert_eq!(node_power(2, 9, 7), 0);
        // n = 7, runs (0, 2) and (2, 2).
        assert_eq!(node_power(2, 6, 7), 1);
        // Midpoints straddling the centre meet the root.
        assert_eq!(node_power(10, 30, 20), 0);
    }

    #[test]
    fn shivers_levels() {
        assert_eq!(shivers_level(5, 1.0), 2);
        assert_eq!(shivers_level(5, 2.0), 1);
        assert_eq!(shivers_level(3, 3.0), 0);
        assert_eq!(shivers_level(1, 4.0), -2);
    }

    #[test]
    fn timsort_second_condition() {
        assert_eq!(decide(Policy::TimSort, &[9, 3, 5]), PolicyDecision::MergeAt(1));
    }

    #[test]
    fn timsort_stage_collapse_uses_second_condition() {
        let n = 256;
        assert_eq!(
            decide(Policy::TimSort, &[n / 2, n / 4, n / 8, 2, 2]),
            PolicyDecision::MergeAt(1)
        );
    }

    #[test]
    fn timsort_stops_on_decreasing_powers_of_two() {
        for policy in [Policy::TimSort, Policy::OriginalTimSort] {
            assert_eq!(decide(policy, &[64, 32, 16, 8, 4, 2]), PolicyDecision::Stop);
            assert_eq!(decide(policy, &[1024, 512, 256, 2]), PolicyDecision::Stop);
        }
    }

    #[test]
    fn c_adaptive_shivers_levels_decide() {
        let p = Policy::CAdaptiveShivers { c: 1.0 };
        assert_eq!(decide(p, &[2, 2, 2]), PolicyDecision::MergeAt(2));
        assert_eq!(decide(p, &[4, 2, 2]), PolicyDecision::Stop);
    }

    #[test]
    fn two_merge_prefers_lower_pair_when_r3_short() {
        assert_eq!(decide(Policy::TwoMerge, &[2, 3, 4]), PolicyDecision::MergeAt(2));
        assert_eq!(decide(Policy::TwoMerge, &[5, 3, 4]), PolicyDecision::MergeAt(1));
        assert_eq!(decide(Policy::TwoMerge, &[3, 4]), PolicyDecision::Stop);
    }

    #[test]
    fn single_run_always_stops() {
        for p in Policy::ALL {
            assert_eq!(decide(p, &[10]), PolicyDecision::Stop, "{p}");
        }
    }

    #[test]
    fn parse_round_trip() {
        for p in Policy::ALL {
            assert_eq!(p.to_string().parse::<Policy>().unwrap(), p);
        }
        assert_eq!(
            "alpha-merge:1.7".parse::<Policy>().unwrap(),
            Policy::AlphaMerge { alpha: 1.7 }
        );
        assert!("alpha-merge:0.5".parse::<Policy>().is_err());
        assert!("timsort:2".parse::<Policy>().is_err());
        assert!("quicksort".parse::<Policy>().is_err());
    }

    /// Budgets are sound: hiding every length above the budget never changes
    /// a decision.
    #[test]
    fn budgets_never_flip_decisions() {
        use rand::{Rng, SeedableRng};
        use rand_chacha::ChaCha8Rng;
        let mut rng = ChaCha8Rng::seed_from_u64(17);
        for _ in 0..200_000 {
            let depth = rng.gen_range(1..=6);
            let spread = rng.gen_range(1..=200);
            let lengths: Vec<usize> = (0..depth).map(|_| rng.gen_range(1..=spread)).collect();
            for p in Policy::ALL {
                let full = p.step(&mut LengthStack::new(&lengths, false));
                let bounded = p.step(&mut LengthStack::new(&lengths, true));
                assert_eq!(full, bounded, "{p} {lengths:?}");
            }
        }
    }
}

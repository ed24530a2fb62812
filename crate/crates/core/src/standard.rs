//! The reference engine: an unbounded run stack with every length known.

use crate::merge::{merge_adjacent, MergeKind};
use crate::metrics::{MergeStep, Recorder};
use crate::policy::{run_pair_power, Policy, PolicyDecision, ProbeResult, StackView};
use crate::runs::{next_run_end, normalize_runs, RunEntry};

struct FullStack<'a> {
    runs: &'a mut Vec<RunEntry>,
    n: usize,
}

impl StackView for FullStack<'_> {
    fn region_len(&self) -> usize {
        self.n
    }

    fn top(&self) -> RunEntry {
        *self.runs.last().expect("stack is never empty during a step")
    }

    fn probe(&mut self, depth: usize, _budget: usize) -> Option<ProbeResult> {
        let i = self.runs.len().checked_sub(depth)?;
        Some(ProbeResult::Known(self.runs[i].len))
    }

    fn exists(&mut self, depth: usize) -> bool {
        self.runs.len() >= depth
    }

    // Powers are always recomputed here; the entries' aux slots belong to
    // the invariant check.
    fn aux(&self, _depth: usize) -> Option<u32> {
        None
    }

    fn set_aux(&mut self, _depth: usize, _value: u32) {}
}

/// Sorts `v` with `policy` over a full run stack.
///
/// With [`Recorder::power_violations`] enabled and `policy` PowerSort, every
/// run remembers the power it had when it first got a neighbour above it,
/// and after each main-loop merge all powers are recomputed and compared.
pub fn sort_standard<T, F>(v: &mut [T], mut is_less: F, policy: Policy, kind: MergeKind, rec: &mut Recorder)
where
    T: Copy,
    F: FnMut(&T, &T) -> bool,
{
    let n = v.len();
    normalize_runs(v, &mut is_less, &mut rec.metrics);
    let check_powers = rec.power_violations.is_some() && policy == Policy::PowerSort;
    let mut stack: Vec<RunEntry> = Vec::new();
    let mut scratch = Vec::new();
    let mut processed = 0;

    while processed < n {
        let end = next_run_end(v, processed, n, &mut is_less, &mut rec.metrics);
        let run = RunEntry::new(processed, end - processed);
        processed = end;
        if check_powers {
            if let Some(below) = stack.last_mut() {
                below.aux.get_or_insert(run_pair_power(*below, run, n));
            }
        }
        stack.push(run);
        rec.metrics.pushes += 1;
        rec.metrics.observe_depth(stack.len());
        loop {
            let decision = policy.step(&mut FullStack { runs: &mut stack, n });
            let PolicyDecision::MergeAt(depth) = decision else {
                break;
            };
            merge_at(v, &mut stack, depth, kind, &mut is_less, rec, &mut scratch);
            if check_powers {
                let violations = stack
                    .windows(2)
                    .filter(|w| w[0].aux.is_some_and(|p| p != run_pair_power(w[0], w[1], n)))
                    .count();
                *rec.power_violations.as_mut().unwrap() += violations as u64;
            }
        }
    }
    while stack.len() > 1 {
        merge_at(v, &mut stack, 1, kind, &mut is_less, rec, &mut scratch);
    }
}

fn merge_at<T, F>(
    v: &mut [T],
    stack: &mut Vec<RunEntry>,
    depth: usize,
    kind: MergeKind,
    is_less: &mut F,
    rec: &mut Recorder,
    scratch: &mut Vec<T>,
) where
    T: Copy,
    F: FnMut(&T, &T) -> bool,
{
    let upper_idx = stack.len() - depth;
    let (left, right) = (stack[upper_idx - 1], stack[upper_idx]);
    rec.record_merge(MergeStep {
        left_start: left.start,
        left_len: left.len,
        right_len: right.len,
    });
    let mut merged = merge_adjacent(v, left, right, kind, is_less, &mut rec.metrics, scratch);
    // The merged run takes the place, and the cached power, of the upper run.
    merged.aux = right.aux;
    stack[upper_idx - 1] = merged;
    stack.remove(upper_idx);
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run(input: &[i32], policy: Policy) -> (Vec<i32>, Recorder) {
        let mut v = input.to_vec();
        let mut rec = Recorder::new().with_trace();
        sort_standard(&mut v, |a, b| a < b, policy, MergeKind::Buffered, &mut rec);
        (v, rec)
    }

    #[test]
    fn sorted_input_needs_no_merges() {
        for policy in Policy::ALL {
            let (v, rec) = run(&[1, 2, 3, 4, 5], policy);
            assert_eq!(v, [1, 2, 3, 4, 5]);
            assert!(rec.trace().is_empty());
            assert_eq!(rec.metrics.merge_cost, 0);
        }
    }

    #[test]
    fn timsort_stage_merges_the_two_small_runs_first() {
        // Runs of lengths 32, 16, 8, 2, 2 separated by descents.
        let mut input = Vec::new();
        for (len, base) in [(32, 1000), (16, 800), (8, 600), (2, 400), (2, 200)] {
            input.extend((0..len).map(|i| base + i));
        }
        let (v, rec) = run(&input, Policy::TimSort);
        assert!(v.windows(2).all(|w| w[0] <= w[1]));
        assert_eq!(
            rec.trace()[0],
            MergeStep {
                left_start: 56,
                left_len: 2,
                right_len: 2
            }
        );
    }

    #[test]
    fn powersort_keeps_powers_through_merges() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(3);
        for _ in 0..50 {
            let mut v: Vec<u32> = (0..2000).map(|_| rng.gen_range(0..50)).collect();
            let mut rec = Recorder::new().with_power_check();
            sort_standard(&mut v, |a, b| a < b, Policy::PowerSort, MergeKind::Buffered, &mut rec);
            assert_eq!(rec.power_violations, Some(0));
        }
    }
}

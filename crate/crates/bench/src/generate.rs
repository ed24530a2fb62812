//! Deterministic input families.

use std::fmt;
use std::str::FromStr;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use shallowsort::{detect_runs, RunProfile};

use crate::BenchError;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Family {
    /// A shuffle of `0..n`.
    UniformRandom,
    Sorted,
    /// `n - 1` down to `0`.
    Reversed,
    /// Uniform draws from `0..alphabet`.
    FewDistinct(u64),
    /// Runs with exactly these lengths, left to right. Every run except the
    /// last must have length at least 2.
    RunProfile(RunProfile),
    /// Runs of `n/2, n/4, n/8` followed by `n/16` runs of length 2.
    CounterexampleA,
    /// Runs of `n/2, n/4, n/8`, then `c = floor(n / (16 ceil(log2 n)))` runs
    /// of length 2, then one run holding the remaining `n/8 - 2c` elements.
    CounterexampleB,
}

impl Family {
    /// The run profile a counterexample family takes for `n`.
    pub fn counterexample_profile(&self, n: usize) -> Result<Vec<usize>, BenchError> {
        match self {
            Family::CounterexampleA => {
                if n == 0 || !n.is_multiple_of(16) {
                    return Err(BenchError::Config(format!(
                        "counterexample-a needs n divisible by 16, got {n}"
                    )));
                }
                let mut p = vec![n / 2, n / 4, n / 8];
                p.extend(std::iter::repeat_n(2, n / 16));
                Ok(p)
            }
            Family::CounterexampleB => {
                if n < 16 || !n.is_multiple_of(8) {
                    return Err(BenchError::Config(format!(
                        "counterexample-b needs n divisible by 8 and at least 16, got {n}"
                    )));
                }
                let log = n.next_power_of_two().trailing_zeros() as usize;
                let pairs = n / (16 * log);
                let mut p = vec![n / 2, n / 4, n / 8];
                p.extend(std::iter::repeat_n(2, pairs));
                p.push(n / 8 - 2 * pairs);
                Ok(p)
            }
            _ => Err(BenchError::Config(format!("{self} is not a counterexample family"))),
        }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Family::UniformRandom => f.write_str("uniform"),
            Family::Sorted => f.write_str("sorted"),
            Family::Reversed => f.write_str("reversed"),
            Family::FewDistinct(k) => write!(f, "few-distinct:{k}"),
            Family::RunProfile(p) => {
                f.write_str("runs:")?;
                let parts: Vec<String> = p.lengths().iter().map(|r| r.to_string()).collect();
                f.write_str(&parts.join("/"))
            }
            Family::CounterexampleA => f.write_str("counterexample-a"),
            Family::CounterexampleB => f.write_str("counterexample-b"),
        }
    }
}

impl FromStr for Family {
    type Err = BenchError;

    /// Parses the names printed by `Display`, e.g. `few-distinct:4` or
    /// `runs:2/1/1`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || BenchError::Config(format!("unknown input family `{s}`"));
        let (name, arg) = match s.split_once(':') {
            Some((a, b)) => (a, Some(b)),
            None => (s, None),
        };
        let family = match (name, arg) {
            ("uniform", None) => Family::UniformRandom,
            ("sorted", None) => Family::Sorted,
            ("reversed", None) => Family::Reversed,
            ("few-distinct", Some(k)) => {
                let k: u64 = k.parse().map_err(|_| bad())?;
                if k == 0 {
                    return Err(BenchError::Config(
                        "few-distinct needs an alphabet of at least 1".into(),
                    ));
                }
                Family::FewDistinct(k)
            }
            ("runs", Some(list)) => {
                let lengths = list
                    .split('/')
                    .map(|x| x.parse::<usize>())
                    .collect::<Result<Vec<_>, _>>()
                    .map_err(|_| bad())?;
                Family::RunProfile(RunProfile::new(lengths).ok_or_else(bad)?)
            }
            ("counterexample-a", None) => Family::CounterexampleA,
            ("counterexample-b", None) => Family::CounterexampleB,
            _ => return Err(bad()),
        };
        Ok(family)
    }
}

/// One generated input: a family at a size, from a seed.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InputSpec {
    pub family: Family,
    pub n: usize,
    pub seed: u64,
}

impl InputSpec {
    pub fn new(family: Family, n: usize, seed: u64) -> Self {
        Self { family, n, seed }
    }
}

/// Builds the input described by `spec`. The same spec always yields the
/// same array.
pub fn generate(spec: &InputSpec) -> Result<Vec<i64>, BenchError> {
    let n = spec.n;
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let v = match &spec.family {
        Family::UniformRandom => {
            let mut v: Vec<i64> = (0..n as i64).collect();
            v.shuffle(&mut rng);
            v
        }
        Family::Sorted => (0..n as i64).collect(),
        Family::Reversed => (0..n as i64).rev().collect(),
        Family::FewDistinct(k) => (0..n).map(|_| rng.gen_range(0..*k) as i64).collect(),
        Family::RunProfile(profile) => {
            if profile.n() != n {
                return Err(BenchError::Config(format!(
                    "run profile sums to {} but n is {n}",
                    profile.n()
                )));
            }
            with_profile(profile.lengths(), &mut rng)?
        }
        Family::CounterexampleA | Family::CounterexampleB => {
            let profile = spec.family.counterexample_profile(n)?;
            with_profile(&profile, &mut rng)?
        }
    };
    Ok(v)
}

/// Random run lengths summing to `n` with about `runs` runs, every run but
/// possibly the last of length at least 2, so the profile is realizable.
pub fn random_profile<R: Rng>(rng: &mut R, n: usize, runs: usize) -> RunProfile {
    assert!(n > 0);
    let runs = runs.clamp(1, (n / 2).max(1));
    let spare = n.saturating_sub(2 * runs);
    let mut cuts: Vec<usize> = (0..runs - 1).map(|_| rng.gen_range(0..=spare)).collect();
    cuts.sort_unstable();
    let mut lengths = Vec::with_capacity(runs);
    let mut prev = 0;
    for c in cuts {
        lengths.push(2 + c - prev);
        prev = c;
    }
    lengths.push(n - lengths.iter().sum::<usize>());
    RunProfile::new(lengths).expect("lengths are positive")
}

/// Distinct values arranged into sorted runs of the given lengths, with a
/// strict descent between neighbours.
fn with_profile(lengths: &[usize], rng: &mut ChaCha8Rng) -> Result<Vec<i64>, BenchError> {
    if lengths[..lengths.len() - 1].contains(&1) {
        // Neighbouring strict descents would form a decreasing run, which
        // run detection flips and joins to its neighbours.
        return Err(BenchError::Config(
            "only the last run of a profile may have length 1".into(),
        ));
    }
    let n: usize = lengths.iter().sum();
    let mut v: Vec<i64> = (0..n as i64).collect();
    v.shuffle(rng);
    let mut start = 0;
    for &len in lengths {
        v[start..start + len].sort_unstable();
        start += len;
    }
    // Swapping a boundary pair that ascends keeps both runs sorted and
    // leaves the other boundaries of runs of length >= 2 alone.
    let mut end = 0;
    for &len in &lengths[..lengths.len() - 1] {
        end += len;
        if v[end - 1] < v[end] {
            v.swap(end - 1, end);
        }
    }
    let mut check = v.clone();
    let found: Vec<usize> = detect_runs(&mut check, |a, b| a < b).iter().map(|r| r.len).collect();
    if found != lengths {
        return Err(BenchError::Config(format!(
            "generated runs {found:?} differ from requested {lengths:?}"
        )));
    }
    Ok(v)
}

//! The experiment grid and its CSV report.

use std::path::Path;
use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use shallowsort::{
    detect_runs, run_entropy, verify_sorted_permutation, Engine, MergeKind, Policy, Recorder, RunProfile,
};

use crate::generate::{generate, InputSpec};
use crate::BenchError;

/// One sort of one input.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TrialRecord {
    pub algorithm: String,
    pub engine: String,
    pub kernel: String,
    pub family: String,
    pub n: usize,
    pub seed: u64,
    pub comparisons: u64,
    pub moves: u64,
    pub walkback_steps: u64,
    pub encode_ops: u64,
    pub decode_ops: u64,
    pub max_stack_depth: u64,
    pub merge_cost: u64,
    pub wall_ns: u64,
    pub entropy: f64,
    pub run_count: usize,
}

/// Everything [`run_experiment`] crosses.
#[derive(Clone, Debug)]
pub struct Grid {
    pub specs: Vec<InputSpec>,
    pub policies: Vec<Policy>,
    pub engines: Vec<Engine>,
    pub kinds: Vec<MergeKind>,
    /// Each repetition draws a fresh input with seed `spec.seed + rep`.
    pub repetitions: u64,
    /// Timed sorts per trial; 0 leaves `wall_ns` at 0 so reports are reproducible.
    pub timing_runs: usize,
}

/// Sorts one generated input and checks the result.
///
/// Counters come from one instrumented sort. `wall_ns` is the median of
/// `timing_runs` further sorts of fresh copies, or 0 when `timing_runs` is 0.
pub fn run_trial(
    spec: &InputSpec,
    policy: Policy,
    engine: Engine,
    kind: MergeKind,
    timing_runs: usize,
) -> Result<TrialRecord, BenchError> {
    let input = generate(spec)?;
    let (entropy, run_count) = run_stats(&input);
    let mut v = input.clone();
    let mut rec = Recorder::new();
    engine.sort_with(&mut v, |a, b| a < b, policy, kind, &mut rec);
    let wall_ns = median_wall_ns(&input, policy, engine, kind, timing_runs);
    if !verify_sorted_permutation(&input, &v, |a, b| a < b) || rec.capacity_violations > 0 {
        return Err(BenchError::Verification {
            spec: format!("{} n={}", spec.family, spec.n),
            policy: policy.to_string(),
            engine: engine.to_string(),
            kernel: kind.to_string(),
            seed: spec.seed,
        });
    }
    let m = rec.metrics;
    Ok(TrialRecord {
        algorithm: policy.to_string(),
        engine: engine.to_string(),
        kernel: kind.to_string(),
        family: spec.family.to_string(),
        n: spec.n,
        seed: spec.seed,
        comparisons: m.comparisons,
        moves: m.moves,
        walkback_steps: m.walkback_steps,
        encode_ops: m.encode_ops,
        decode_ops: m.decode_ops,
        max_stack_depth: m.max_stack_depth,
        merge_cost: m.merge_cost,
        wall_ns,
        entropy,
        run_count,
    })
}

fn median_wall_ns(input: &[i64], policy: Policy, engine: Engine, kind: MergeKind, runs: usize) -> u64 {
    let mut times: Vec<u64> = (0..runs)
        .map(|_| {
            let mut v = input.to_vec();
            let mut rec = Recorder::new();
            let started = Instant::now();
            engine.sort_with(&mut v, |a, b| a < b, policy, kind, &mut rec);
            started.elapsed().as_nanos() as u64
        })
        .collect();
    times.sort_unstable();
    times.get(runs / 2).copied().unwrap_or(0)
}

/// Run-based entropy and run count of `input`.
pub fn run_stats(input: &[i64]) -> (f64, usize) {
    let mut w = input.to_vec();
    let runs = detect_runs(&mut w, |a, b| a < b);
    match RunProfile::from_runs(&runs) {
        Some(p) => (run_entropy(&p), p.run_count()),
        None => (0.0, 0),
    }
}

/// Runs every cell of `grid` in parallel. Records come back ordered by spec,
/// repetition, policy, engine and kernel; the first failing trial aborts
/// the run.
pub fn run_experiment(grid: &Grid) -> Result<Vec<TrialRecord>, BenchError> {
    let mut cells = Vec::new();
    for spec in &grid.specs {
        for rep in 0..grid.repetitions {
            let spec = InputSpec::new(spec.family.clone(), spec.n, spec.seed.wrapping_add(rep));
            for &policy in &grid.policies {
                for &engine in &grid.engines {
                    for &kind in &grid.kinds {
                        cells.push((spec.clone(), policy, engine, kind));
                    }
                }
            }
        }
    }
    cells
        .par_iter()
        .map(|(spec, policy, engine, kind)| run_trial(spec, *policy, *engine, *kind, grid.timing_runs))
        .collect()
}

/// Writes `records` as CSV with a header row.
pub fn report_csv(records: &[TrialRecord], path: &Path) -> Result<(), BenchError> {
    if records.is_empty() {
        return Err(BenchError::Empty);
    }
    let csv_err = |source| BenchError::Csv {
        path: path.to_path_buf(),
        source,
    };
    let mut w = csv::Writer::from_path(path).map_err(csv_err)?;
    for r in records {
        w.serialize(r).map_err(csv_err)?;
    }
    w.flush().map_err(|source| BenchError::Io {
        path: path.to_path_buf(),
        source,
    })
}

/// Reads a report written by [`report_csv`].
pub fn read_csv(path: &Path) -> Result<Vec<TrialRecord>, BenchError> {
    let csv_err = |source| BenchError::Csv {
        path: path.to_path_buf(),
        source,
    };
    let mut r = csv::Reader::from_path(path).map_err(csv_err)?;
    r.deserialize().collect::<Result<_, _>>().map_err(csv_err)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generate::Family;

    #[test]
    fn grid_cardinality_and_order() {
        let grid = Grid {
            specs: vec![InputSpec::new(Family::UniformRandom, 500, 7)],
            policies: vec![Policy::PowerSort],
            engines: Engine::ALL.to_vec(),
            kinds: vec![MergeKind::Buffered],
            repetitions: 3,
            timing_runs: 1,
        };
        let records = run_experiment(&grid).unwrap();
        assert_eq!(records.len(), 9);
        let keys: Vec<_> = records.iter().map(|r| (r.seed, r.engine.as_str())).collect();
        assert_eq!(keys[..3], [(7, "standard"), (7, "walkback"), (7, "jumpback")]);
        assert_eq!(keys[8], (9, "jumpback"));
    }

    #[test]
    fn bad_spec_is_a_config_error() {
        let spec = InputSpec::new(Family::CounterexampleA, 17, 0);
        let err = run_trial(&spec, Policy::TimSort, Engine::Standard, MergeKind::Buffered, 0).unwrap_err();
        assert!(matches!(err, BenchError::Config(_)));
    }
}

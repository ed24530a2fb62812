//! The jump-back engine.

use crate::encoding::{find_markers, Lambda};
use crate::merge::{merge_adjacent, plain_mergesort, MergeKind};
use crate::metrics::{Metrics, Recorder};
use crate::partition::partition_short_runs;
use crate::policy::Policy;
use crate::runs::{normalize_runs, RunEntry};
use crate::shallow::{Recall, ShallowEngine};

/// Normalizes `v` and moves every run of length at most `3λ` behind the
/// long runs. Returns the length of the long-run prefix, or 0 (leaving `v`
/// untouched) when `v` is too short for length tags to pay off.
pub fn prepare_long_region<T, F>(v: &mut [T], is_less: &mut F, metrics: &mut Metrics) -> usize
where
    F: FnMut(&T, &T) -> bool,
{
    let lambda = Lambda::for_len(v.len());
    if v.len() <= 8 * lambda.lambda {
        return 0;
    }
    normalize_runs(v, is_less, metrics);
    partition_short_runs(v, lambda.short_threshold, is_less, metrics).long_region_len
}

/// Sorts `v` in place with `policy`, holding at most `policy.capacity()`
/// runs in memory and writing the lengths of the others into the runs.
///
/// Short runs are split off and sorted with a plain mergesort, the long runs
/// are sorted with the policy, and the two parts are merged at the end. Not
/// stable.
pub fn sort_jumpback<T, F>(v: &mut [T], mut is_less: F, policy: Policy, kind: MergeKind, rec: &mut Recorder)
where
    T: Copy,
    F: FnMut(&T, &T) -> bool,
{
    let n = v.len();
    rec.long_region_len = Some(0);
    let Some(markers) = find_markers(v, &mut is_less, &mut rec.metrics) else {
        return;
    };
    let lambda = Lambda::for_len(n).lambda;
    let mut scratch = Vec::new();
    let long = prepare_long_region(v, &mut is_less, &mut rec.metrics);
    rec.long_region_len = Some(long);
    if long == 0 {
        plain_mergesort(v, kind, &mut is_less, &mut rec.metrics, &mut scratch);
        return;
    }
    plain_mergesort(&mut v[long..], kind, &mut is_less, &mut rec.metrics, &mut scratch);
    let recall = Recall::JumpBack { lambda, markers };
    ShallowEngine::new(&mut v[..long], &mut is_less, rec, kind, recall, policy.capacity()).sort(policy);
    if long < n {
        merge_adjacent(
            v,
            RunEntry::new(0, long),
            RunEntry::new(long, n - long),
            kind,
            &mut is_less,
            &mut rec.metrics,
            &mut scratch,
        );
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn all_equal_input_is_left_alone() {
        let mut v = [7u8; 500];
        let mut rec = Recorder::new();
        sort_jumpback(&mut v, |a, b| a < b, Policy::PowerSort, MergeKind::Buffered, &mut rec);
        assert_eq!(rec.metrics.moves, 0);
    }

    #[test]
    fn short_runs_only_fall_back_to_plain_mergesort() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let mut v: Vec<u32> = (0..5000).map(|_| rng.gen()).collect();
        let mut rec = Recorder::new();
        sort_jumpback(
            &mut v,
            |a, b| a < b,
            Policy::TimSort,
            MergeKind::InPlaceRotation,
            &mut rec,
        );
        assert!(v.windows(2).all(|w| w[0] <= w[1]));
        assert_eq!(rec.long_region_len, Some(0));
        assert_eq!(rec.metrics.encode_ops, 0);
    }

    #[test]
    fn long_runs_get_encoded_and_decoded() {
        // 40 descending blocks of 100 ascending values.
        let mut v: Vec<u32> = (0..40u32)
            .rev()
            .flat_map(|b| (0..100).map(move |i| b * 100 + i))
            .collect();
        let mut rec = Recorder::new();
        sort_jumpback(&mut v, |a, b| a < b, Policy::TimSort, MergeKind::Buffered, &mut rec);
        assert_eq!(v, (0..4000).collect::<Vec<_>>());
        assert_eq!(rec.long_region_len, Some(4000));
        assert!(rec.metrics.encode_ops > 0);
        assert!(rec.metrics.decode_ops > 0);
        assert_eq!(rec.metrics.walkback_steps, 0);
    }
}

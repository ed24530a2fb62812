//! The walk-back engine.

use crate::merge::MergeKind;
use crate::metrics::Recorder;
use crate::policy::Policy;
use crate::runs::normalize_runs;
use crate::shallow::{Recall, ShallowEngine};

/// Sorts `v` in place with `policy`, holding at most `policy.capacity()`
/// runs in memory and recovering deeper runs by scanning left.
///
/// Makes exactly the merges [`sort_standard`](crate::sort_standard) makes on
/// the same input.
pub fn sort_walkback<T, F>(v: &mut [T], mut is_less: F, policy: Policy, kind: MergeKind, rec: &mut Recorder)
where
    T: Copy,
    F: FnMut(&T, &T) -> bool,
{
    normalize_runs(v, &mut is_less, &mut rec.metrics);
    ShallowEngine::new(v, &mut is_less, rec, kind, Recall::WalkBack, policy.capacity()).sort(policy);
}

/// Merges a region made of consecutive sorted runs, right to left, until it
/// is one run. Only the last run's start is needed; every other run is found
/// by scanning. `top_start` must be the start of the last run.
pub fn collapse_walkback<T, F>(
    v: &mut [T],
    top_start: usize,
    capacity: usize,
    mut is_less: F,
    kind: MergeKind,
    rec: &mut Recorder,
) where
    T: Copy,
    F: FnMut(&T, &T) -> bool,
{
    ShallowEngine::with_top(v, &mut is_less, rec, kind, Recall::WalkBack, capacity, top_start).collapse();
}

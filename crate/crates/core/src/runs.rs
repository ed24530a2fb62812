//! Run detection, run profiles and backward run scans.

use crate::metrics::Metrics;

#[inline]
pub(crate) fn lt<T, F>(is_less: &mut F, metrics: &mut Metrics, a: &T, b: &T) -> bool
where
    F: FnMut(&T, &T) -> bool,
{
    metrics.comparisons += 1;
    is_less(a, b)
}

/// A run's location plus one slot of policy-private metadata.
///
/// While an entry is live in an engine, `v[start..start + len]` is
/// non-decreasing.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct RunEntry {
    pub start: usize,
    pub len: usize,
    /// PowerSort caches the power of the run relative to the run above it.
    pub aux: Option<u32>,
}

impl RunEntry {
    pub fn new(start: usize, len: usize) -> Self {
        Self { start, len, aux: None }
    }

    pub fn end(&self) -> usize {
        self.start + self.len
    }
}

/// Ordered run lengths of an array; every length is at least one.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RunProfile(Vec<usize>);

impl RunProfile {
    /// Returns `None` if the profile is empty or contains a zero length.
    pub fn new(lengths: Vec<usize>) -> Option<Self> {
        if lengths.is_empty() || lengths.contains(&0) {
            return None;
        }
        Some(Self(lengths))
    }

    pub fn from_runs(runs: &[RunEntry]) -> Option<Self> {
        Self::new(runs.iter().map(|r| r.len).collect())
    }

    pub fn lengths(&self) -> &[usize] {
        &self.0
    }

    pub fn n(&self) -> usize {
        self.0.iter().sum()
    }

    pub fn run_count(&self) -> usize {
        self.0.len()
    }
}

/// Reverses every maximal strictly decreasing run in place.
///
/// Reversal keeps the sort stable because a strictly decreasing run holds no
/// equal elements.
pub fn normalize_runs<T, F>(v: &mut [T], is_less: &mut F, metrics: &mut Metrics)
where
    F: FnMut(&T, &T) -> bool,
{
    let n = v.len();
    let mut i = 0;
    while i + 1 < n {
        let mut j = i + 1;
        if lt(is_less, metrics, &v[j], &v[j - 1]) {
            while j + 1 < n && lt(is_less, metrics, &v[j + 1], &v[j]) {
                j += 1;
            }
            v[i..=j].reverse();
            metrics.moves += ((j + 1 - i) / 2 * 2) as u64;
            i = j + 1;
        } else {
            while j + 1 < n && !lt(is_less, metrics, &v[j + 1], &v[j]) {
                j += 1;
            }
            i = j + 1;
        }
    }
}

/// End (exclusive) of the maximal non-decreasing run starting at `start`,
/// never extending past `limit`.
pub fn next_run_end<T, F>(v: &[T], start: usize, limit: usize, is_less: &mut F, metrics: &mut Metrics) -> usize
where
    F: FnMut(&T, &T) -> bool,
{
    debug_assert!(start < limit && limit <= v.len());
    let mut end = start + 1;
    while end < limit && !lt(is_less, metrics, &v[end], &v[end - 1]) {
        end += 1;
    }
    end
}

/// Normalizes `v` (see [`normalize_runs`]) and returns its maximal
/// non-decreasing runs, left to right.
///
/// Consecutive runs are separated by a strict descent. An empty slice has no
/// runs.
pub fn detect_runs<T, F>(v: &mut [T], mut is_less: F) -> Vec<RunEntry>
where
    F: FnMut(&T, &T) -> bool,
{
    let mut metrics = Metrics::default();
    normalize_runs(v, &mut is_less, &mut metrics);
    collect_runs(v, &mut is_less, &mut metrics)
}

pub(crate) fn collect_runs<T, F>(v: &[T], is_less: &mut F, metrics: &mut Metrics) -> Vec<RunEntry>
where
    F: FnMut(&T, &T) -> bool,
{
    let mut runs = Vec::new();
    let mut start = 0;
    while start < v.len() {
        let end = next_run_end(v, start, v.len(), is_less, metrics);
        runs.push(RunEntry::new(start, end - start));
        start = end;
    }
    runs
}

/// Outcome of a bounded backward scan.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ScanOutcome {
    Found(usize),
    /// The run is longer than the budget. Nothing about the scan is kept.
    Exceeded,
}

/// Scans left from `end_exclusive - 1` for the start of the run ending there.
///
/// At most `budget` elements are inspected; each inspection adds one to
/// `walkback_steps`. The run start is the array start or the first strict
/// descent.
pub fn scan_run_leftward<T, F>(
    v: &[T],
    end_exclusive: usize,
    budget: usize,
    is_less: &mut F,
    metrics: &mut Metrics,
) -> ScanOutcome
where
    F: FnMut(&T, &T) -> bool,
{
    debug_assert!(end_exclusive >= 1 && end_exclusive <= v.len());
    let mut i = end_exclusive - 1;
    let mut inspected: usize = 0;
    loop {
        if inspected == budget {
            metrics.walkback_steps += inspected as u64;
            return ScanOutcome::Exceeded;
        }
        inspected += 1;
        if i == 0 || lt(is_less, metrics, &v[i], &v[i - 1]) {
            metrics.walkback_steps += inspected as u64;
            return ScanOutcome::Found(end_exclusive - i);
        }
        i -= 1;
    }
}

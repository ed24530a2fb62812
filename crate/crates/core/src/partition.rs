//! In-place segregation of short runs to the end of an array.

use crate::metrics::Metrics;
use crate::runs::lt;

/// Counters reported by [`partition_short_runs`].
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct PartitionOutcome {
    /// Elements of long runs now occupy `[0, long_region_len)`.
    pub long_region_len: usize,
    /// Element reads; every comparison reads two elements.
    pub reads: u64,
    pub swaps: u64,
}

/// Two-pointer stable partition of 0-cells before 1-cells.
///
/// The 0-cells keep their relative order; the 1-cells do not. Returns the
/// number of 0-cells.
pub fn partition_zeros_first<T, P>(v: &mut [T], mut is_one: P) -> usize
where
    P: FnMut(&T) -> bool,
{
    let n = v.len();
    let mut i = 0;
    while i < n && !is_one(&v[i]) {
        i += 1;
    }
    let mut j = i + 1;
    loop {
        while j < n && is_one(&v[j]) {
            j += 1;
        }
        if j >= n {
            return i;
        }
        v.swap(i, j);
        i += 1;
        j += 1;
    }
}

/// Moves every element of a run of length `<= threshold` behind all elements
/// of longer runs.
///
/// Runs are the maximal non-decreasing runs of `v`. Long runs keep their
/// contents and relative order; the order inside the short-run suffix is
/// unspecified. Runs are classified during the sweep, so each run is scanned
/// at most twice and no run table is built.
pub fn partition_short_runs<T, F>(
    v: &mut [T],
    threshold: usize,
    is_less: &mut F,
    metrics: &mut Metrics,
) -> PartitionOutcome
where
    F: FnMut(&T, &T) -> bool,
{
    let n = v.len();
    let before = *metrics;
    let (mut i, mut j) = (0, 0);
    while j < n {
        // Classify the run at j, looking at no more than threshold + 1 cells.
        let mut len = 1;
        let mut complete = false;
        loop {
            if j + len == n {
                complete = true;
                break;
            }
            if len > threshold {
                break;
            }
            if lt(is_less, metrics, &v[j + len], &v[j + len - 1]) {
                complete = true;
                break;
            }
            len += 1;
        }
        if complete && len <= threshold {
            j += len;
            continue;
        }
        // Long run: stream it down to i. The previous run element always
        // sits at i - 1 once moved.
        loop {
            if i != j {
                v.swap(i, j);
                metrics.moves += 2;
            }
            i += 1;
            j += 1;
            if j == n || lt(is_less, metrics, &v[j], &v[i - 1]) {
                break;
            }
        }
    }
    PartitionOutcome {
        long_region_len: i,
        reads: 2 * (metrics.comparisons - before.comparisons),
        swaps: (metrics.moves - before.moves) / 2,
    }
}

//! Merge kernels for two adjacent sorted runs.
//!
//! Both kernels are stable. The buffered kernel does a linear two-finger merge
//! through a scratch copy of the shorter side. The rotation kernel uses no
//! element storage at all: it splits the longer side at its middle, binary
//! searches the matching cut in the shorter side, swaps the middle blocks with
//! a three-reversal rotation and recurses. Recursion only descends into the
//! smaller half and loops on the larger one, so its depth stays below
//! `log2(len)` frames of a few indices each.

use std::fmt;
use std::str::FromStr;

use crate::metrics::Metrics;
use crate::runs::RunEntry;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum MergeKind {
    Buffered,
    InPlaceRotation,
}

impl MergeKind {
    pub const ALL: [MergeKind; 2] = [MergeKind::Buffered, MergeKind::InPlaceRotation];

    pub fn name(self) -> &'static str {
        match self {
            MergeKind::Buffered => "buffered",
            MergeKind::InPlaceRotation => "rotation",
        }
    }
}

impl fmt::Display for MergeKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for MergeKind {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "buffered" => Ok(MergeKind::Buffered),
            "rotation" | "inplace" | "in-place" => Ok(MergeKind::InPlaceRotation),
            _ => Err(format!("unknown merge kernel `{s}` (expected buffered or rotation)")),
        }
    }
}

#[inline]
fn mlt<T, F>(is_less: &mut F, metrics: &mut Metrics, a: &T, b: &T) -> bool
where
    F: FnMut(&T, &T) -> bool,
{
    metrics.comparisons += 1;
    metrics.merge_comparisons += 1;
    is_less(a, b)
}

/// Merges the adjacent sorted runs `left` and `right` and returns the run
/// spanning both. `scratch` is only used by [`MergeKind::Buffered`].
pub fn merge_adjacent<T, F>(
    v: &mut [T],
    left: RunEntry,
    right: RunEntry,
    kind: MergeKind,
    is_less: &mut F,
    metrics: &mut Metrics,
    scratch: &mut Vec<T>,
) -> RunEntry
where
    T: Copy,
    F: FnMut(&T, &T) -> bool,
{
    debug_assert_eq!(left.end(), right.start, "runs must be adjacent");
    let (lo, mid, hi) = (left.start, right.start, right.end());
    debug_assert!(hi <= v.len());
    match kind {
        MergeKind::Buffered => merge_buffered(&mut v[lo..hi], mid - lo, is_less, metrics, scratch),
        MergeKind::InPlaceRotation => merge_rotation(&mut v[lo..hi], mid - lo, is_less, metrics),
    }
    metrics.merge_cost += (hi - lo) as u64;
    RunEntry::new(lo, hi - lo)
}

/// Linear stable merge of `v[..mid]` and `v[mid..]` using a copy of the
/// shorter side. At most `len - 1` comparisons.
pub fn merge_buffered<T, F>(v: &mut [T], mid: usize, is_less: &mut F, metrics: &mut Metrics, scratch: &mut Vec<T>)
where
    T: Copy,
    F: FnMut(&T, &T) -> bool,
{
    let len = v.len();
    if mid == 0 || mid == len {
        return;
    }
    scratch.clear();
    if mid <= len - mid {
        scratch.extend_from_slice(&v[..mid]);
        metrics.moves += mid as u64;
        let (mut i, mut j, mut k) = (0, mid, 0);
        while i < mid && j < len {
            if mlt(is_less, metrics, &v[j], &scratch[i]) {
                v[k] = v[j];
                j += 1;
            } else {
                v[k] = scratch[i];
                i += 1;
            }
            k += 1;
        }
        let rest = mid - i;
        v[k..k + rest].copy_from_slice(&scratch[i..mid]);
        metrics.moves += (k + rest) as u64;
    } else {
        let r = len - mid;
        scratch.extend_from_slice(&v[mid..]);
        metrics.moves += r as u64;
        let (mut i, mut j, mut k) = (mid, r, len);
        let mut writes = 0u64;
        while i > 0 && j > 0 {
            if mlt(is_less, metrics, &scratch[j - 1], &v[i - 1]) {
                v[k - 1] = v[i - 1];
                i -= 1;
            } else {
                v[k - 1] = scratch[j - 1];
                j -= 1;
            }
            k -= 1;
            writes += 1;
        }
        v[..j].copy_from_slice(&scratch[..j]);
        metrics.moves += writes + j as u64;
    }
}

/// Stable merge of `v[..mid]` and `v[mid..]` with no element storage.
pub fn merge_rotation<T, F>(v: &mut [T], mid: usize, is_less: &mut F, metrics: &mut Metrics)
where
    F: FnMut(&T, &T) -> bool,
{
    let (mut lo, mut mid, mut hi) = (0, mid, v.len());
    loop {
        let (l, r) = (mid - lo, hi - mid);
        if l == 0 || r == 0 || !mlt(is_less, metrics, &v[mid], &v[mid - 1]) {
            return;
        }
        if l.min(r) <= LINEAR_MERGE_MAX {
            merge_linear_rotation(&mut v[lo..hi], mid - lo, is_less, metrics);
            return;
        }
        let (cut_l, cut_r) = if l >= r {
            let cut_l = lo + l / 2;
            // Right-side elements strictly below the pivot move ahead of it.
            let cut_r = mid + partition_point(&v[mid..hi], |x| mlt(is_less, metrics, x, &v[cut_l]));
            (cut_l, cut_r)
        } else {
            let cut_r = mid + r / 2;
            // Left-side elements strictly above the pivot move behind it.
            let cut_l = lo + partition_point(&v[lo..mid], |x| !mlt(is_less, metrics, &v[cut_r], x));
            (cut_l, cut_r)
        };
        rotate(&mut v[cut_l..cut_r], mid - cut_l, metrics);
        let new_mid = cut_l + (cut_r - mid);
        // Recurse into the smaller subproblem, iterate on the larger.
        if new_mid - lo <= hi - new_mid {
            merge_rotation(&mut v[lo..new_mid], cut_l - lo, is_less, metrics);
            lo = new_mid;
            mid = cut_r;
        } else {
            merge_rotation(&mut v[new_mid..hi], cut_r - new_mid, is_less, metrics);
            hi = new_mid;
            mid = cut_l;
        }
    }
}

/// Below this size of the shorter side the rotation kernel merges with a
/// linear scan, trading `O(l * r)` moves on tiny runs for fewer comparisons.
const LINEAR_MERGE_MAX: usize = 16;

/// Two-finger merge that rotates each block of right-side elements into
/// place. At most `len - 1` comparisons.
fn merge_linear_rotation<T, F>(v: &mut [T], mid: usize, is_less: &mut F, metrics: &mut Metrics)
where
    F: FnMut(&T, &T) -> bool,
{
    let (mut lo, mut mid, hi) = (0, mid, v.len());
    while lo < mid && mid < hi {
        // Skip left elements that already precede v[mid].
        while lo < mid && !mlt(is_less, metrics, &v[mid], &v[lo]) {
            lo += 1;
        }
        if lo == mid {
            return;
        }
        // v[mid] < v[lo]: gather the right elements below v[lo].
        let mut j = mid + 1;
        while j < hi && mlt(is_less, metrics, &v[j], &v[lo]) {
            j += 1;
        }
        rotate(&mut v[lo..j], mid - lo, metrics);
        lo += j - mid + 1;
        mid = j;
    }
}

/// First index whose element fails `pred`, for a slice partitioned by `pred`.
fn partition_point<T, P>(s: &[T], mut pred: P) -> usize
where
    P: FnMut(&T) -> bool,
{
    let (mut lo, mut hi) = (0, s.len());
    while lo < hi {
        let m = lo + (hi - lo) / 2;
        if pred(&s[m]) {
            lo = m + 1;
        } else {
            hi = m;
        }
    }
    lo
}

/// Rotates `s` left by `k` with three reversals (about `2 * len` writes).
pub fn rotate<T>(s: &mut [T], k: usize, metrics: &mut Metrics) {
    if k == 0 || k == s.len() {
        return;
    }
    s[..k].reverse();
    s[k..].reverse();
    s.reverse();
    let swaps = k / 2 + (s.len() - k) / 2 + s.len() / 2;
    metrics.moves += 2 * swaps as u64;
}

/// Bottom-up mergesort over doubling block widths.
pub fn plain_mergesort<T, F>(v: &mut [T], kind: MergeKind, is_less: &mut F, metrics: &mut Metrics, scratch: &mut Vec<T>)
where
    T: Copy,
    F: FnMut(&T, &T) -> bool,
{
    let n = v.len();
    let mut width = 1;
    while width < n {
        let mut lo = 0;
        while lo + width < n {
            let hi = (lo + 2 * width).min(n);
            merge_adjacent(
                v,
                RunEntry::new(lo, width),
                RunEntry::new(lo + width, hi - lo - width),
                kind,
                is_less,
                metrics,
                scratch,
            );
            lo = hi;
        }
        width *= 2;
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    /// Two-finger merge into a fresh vector, the reference for both kernels.
    fn oracle_merge<T: Copy, F: FnMut(&T, &T) -> bool>(a: &[T], b: &[T], mut is_less: F) -> Vec<T> {
        let (mut i, mut j) = (0, 0);
        let mut out = Vec::with_capacity(a.len() + b.len());
        while i < a.len() && j < b.len() {
            if is_less(&b[j], &a[i]) {
                out.push(b[j]);
                j += 1;
            } else {
                out.push(a[i]);
                i += 1;
            }
        }
        out.extend_from_slice(&a[i..]);
        out.extend_from_slice(&b[j..]);
        out
    }

    fn run_kernel(v: &mut [(u32, u32)], mid: usize, kind: MergeKind) -> Metrics {
        let mut m = Metrics::default();
        let mut scratch = Vec::new();
        let n = v.len();
        merge_adjacent(
            v,
            RunEntry::new(0, mid),
            RunEntry::new(mid, n - mid),
            kind,
            &mut |a: &(u32, u32), b: &(u32, u32)| a.0 < b.0,
            &mut m,
            &mut scratch,
        );
        m
    }

    #[test]
    fn small_merge() {
        for kind in MergeKind::ALL {
            let mut v = [1, 3, 2, 4];
            let mut m = Metrics::default();
            merge_adjacent(
                &mut v,
                RunEntry::new(0, 2),
                RunEntry::new(2, 2),
                kind,
                &mut |a: &i32, b: &i32| a < b,
                &mut m,
                &mut Vec::new(),
            );
            assert_eq!(v, [1, 2, 3, 4]);
            assert_eq!(m.merge_cost, 4);
        }
    }

    #[test]
    fn equal_elements_keep_left_first() {
        for kind in MergeKind::ALL {
            let mut v = [(1, 0), (1, 1), (1, 2), (1, 3)];
            run_kernel(&mut v, 2, kind);
            assert_eq!(v, [(1, 0), (1, 1), (1, 2), (1, 3)], "{kind}");
        }
    }

    #[test]
    fn rotate_three_reversals() {
        let mut m = Metrics::default();
        let mut s = [1, 2, 3, 4, 5];
        rotate(&mut s, 2, &mut m);
        assert_eq!(s, [3, 4, 5, 1, 2]);
        assert!(m.moves <= 2 * 5);
    }

    #[test]
    fn kernels_match_oracle_on_random_pairs() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for iter in 0..10_000u32 {
            let (l, r) = if iter == 0 {
                (7, 9)
            } else {
                (rng.gen_range(0..=512), rng.gen_range(0..=512))
            };
            let alphabet = if iter % 2 == 0 { 4 } else { 1 << 20 };
            let mut a: Vec<(u32, u32)> = (0..l).map(|_| (rng.gen_range(0..alphabet), 0)).collect();
            let mut b: Vec<(u32, u32)> = (0..r).map(|_| (rng.gen_range(0..alphabet), 0)).collect();
            a.sort();
            b.sort();
            for (tag, x) in a.iter_mut().chain(b.iter_mut()).enumerate() {
                x.1 = tag as u32;
            }
            let want = oracle_merge(&a, &b, |x, y| x.0 < y.0);
            for kind in MergeKind::ALL {
                let mut v = a.clone();
                v.extend_from_slice(&b);
                let m = run_kernel(&mut v, l, kind);
                assert_eq!(v, want, "{kind} l={l} r={r}");
                if kind == MergeKind::Buffered && l > 0 && r > 0 {
                    assert!(m.merge_comparisons < (l + r) as u64);
                }
            }
        }
    }

    #[test]
    fn buffered_comparisons_at_most_len_minus_one() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..2000 {
            let (l, r) = (rng.gen_range(1..100), rng.gen_range(1..100));
            let mut a: Vec<(u32, u32)> = (0..l).map(|_| (rng.gen_range(0..50), 0)).collect();
            let mut b: Vec<(u32, u32)> = (0..r).map(|_| (rng.gen_range(0..50), 0)).collect();
            a.sort();
            b.sort();
            a.extend_from_slice(&b);
            let m = run_kernel(&mut a, l, MergeKind::Buffered);
            assert!(
                m.merge_comparisons <= (l + r - 1) as u64,
                "l={l} r={r} c={}",
                m.merge_comparisons
            );
        }
    }

    #[test]
    fn rotation_is_linear_when_one_side_is_short() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        for _ in 0..2000 {
            let l = rng.gen_range(1..=LINEAR_MERGE_MAX);
            let r = rng.gen_range(1..300);
            let mut a: Vec<(u32, u32)> = (0..l).map(|_| (rng.gen_range(0..50), 0)).collect();
            let mut b: Vec<(u32, u32)> = (0..r).map(|_| (rng.gen_range(0..50), 1)).collect();
            a.sort();
            b.sort();
            a.extend_from_slice(&b);
            let m = run_kernel(&mut a, l, MergeKind::InPlaceRotation);
            assert!(
                m.merge_comparisons <= (l + r) as u64,
                "l={l} r={r} c={}",
                m.merge_comparisons
            );
        }
    }

    #[test]
    fn plain_mergesort_sorts() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for kind in MergeKind::ALL {
            for n in [0usize, 1, 2, 3, 17, 64, 1000] {
                let mut v: Vec<u16> = (0..n).map(|_| rng.gen_range(0..30)).collect();
                let mut want = v.clone();
                want.sort();
                plain_mergesort(
                    &mut v,
                    kind,
                    &mut |a: &u16, b: &u16| a < b,
                    &mut Metrics::default(),
                    &mut Vec::new(),
                );
                assert_eq!(v, want);
            }
        }
    }
}

//! Writing a run's length into the run itself.
//!
//! A run of length greater than `3λ` is viewed as `F | M | p | L`: `F` is its
//! first `λ` cells, `p` the pivot cell at offset `len - λ - 1`, `L` its last
//! `λ` cells and `M` everything in between (at least `λ` cells). The tag
//! stores `λ` bits in `L`, read back uniformly as `bit i = L[i] >= p`:
//! bits `1..λ-1` hold the run length, most significant first, and bit `λ`
//! says which scheme wrote them.
//!
//! * Pivot scheme, usable when `F[λ-1] < p`: for every zero bit, swap `L[i]`
//!   with `F[i]`. Swapping again undoes it.
//! * Marker scheme, used when `F[λ-1] == p` and so all of `M` equals `p`:
//!   park `L` in the first `λ` cells of `M`, write `L[i]` as one of two
//!   global markers `m1 < m2`, and set `p = m2`. Undoing restores `L` and
//!   refills the borrowed cells with `F[λ-1]`.
//!
//! The marker scheme overwrites cells with copies of equivalent values, so
//! the round trip is exact whenever equivalent elements are identical.

use thiserror::Error;

use crate::metrics::Metrics;
use crate::runs::{lt, RunEntry};

/// Largest `λ` an index type can need.
const MAX_LAMBDA: usize = usize::BITS as usize + 1;

/// Bit budget for an array of length `n`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Lambda {
    /// `ceil(log2 n) + 1`.
    pub lambda: usize,
    /// Runs of at most this length are never encoded.
    pub short_threshold: usize,
}

impl Lambda {
    pub fn for_len(n: usize) -> Self {
        let lambda = n.max(1).next_power_of_two().trailing_zeros() as usize + 1;
        Self {
            lambda,
            short_threshold: 3 * lambda,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Scheme {
    Pivot,
    Marker,
}

/// Two values with `low < high`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct MarkerPair<T> {
    pub low: T,
    pub high: T,
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum EncodingError {
    #[error("no tag fits in the {available} cells before index {end}")]
    NoRoom { end: usize, available: usize },
    #[error("tag before index {end} decodes to impossible run length {len}")]
    Corrupt { end: usize, len: usize },
}

/// The first two distinct values of `v` in scan order, ordered. `None` iff
/// every element is equivalent to the first.
pub fn find_markers<T, F>(v: &[T], is_less: &mut F, metrics: &mut Metrics) -> Option<MarkerPair<T>>
where
    T: Copy,
    F: FnMut(&T, &T) -> bool,
{
    let first = *v.first()?;
    for &x in &v[1..] {
        if lt(is_less, metrics, &x, &first) {
            return Some(MarkerPair { low: x, high: first });
        }
        if lt(is_less, metrics, &first, &x) {
            return Some(MarkerPair { low: first, high: x });
        }
    }
    None
}

/// Whether the pivot scheme can encode `run`: its `λ`-th cell is strictly
/// below the pivot cell.
pub fn is_pivotable<T, F>(v: &[T], run: RunEntry, lambda: usize, is_less: &mut F, metrics: &mut Metrics) -> bool
where
    F: FnMut(&T, &T) -> bool,
{
    debug_assert!(run.len > 3 * lambda);
    let f_last = run.start + lambda - 1;
    let pivot = run.end() - lambda - 1;
    lt(is_less, metrics, &v[f_last], &v[pivot])
}

/// Bit `i` (0-based) of the tag for a run of length `len`.
fn tag_bit(len: usize, scheme: Scheme, lambda: usize, i: usize) -> bool {
    if i + 1 == lambda {
        scheme == Scheme::Marker
    } else {
        (len >> (lambda - 2 - i)) & 1 == 1
    }
}

fn tag_bits(len: usize, scheme: Scheme, lambda: usize) -> [bool; MAX_LAMBDA] {
    let mut bits = [false; MAX_LAMBDA];
    for (i, bit) in bits.iter_mut().enumerate().take(lambda) {
        *bit = tag_bit(len, scheme, lambda, i);
    }
    bits
}

/// Writes arbitrary tag bits into `run` (the run's own cells). The marker
/// scheme needs `markers`.
pub fn write_tag<T: Copy>(
    run: &mut [T],
    bits: &[bool],
    scheme: Scheme,
    markers: Option<&MarkerPair<T>>,
    metrics: &mut Metrics,
) {
    let lambda = bits.len();
    let len = run.len();
    debug_assert!(len > 3 * lambda);
    let l0 = len - lambda;
    match scheme {
        Scheme::Pivot => {
            for (i, &bit) in bits.iter().enumerate() {
                if !bit {
                    run.swap(i, l0 + i);
                    metrics.moves += 2;
                }
            }
        }
        Scheme::Marker => {
            let m = markers.expect("marker scheme needs markers");
            run.copy_within(l0.., lambda);
            for (i, &bit) in bits.iter().enumerate() {
                run[l0 + i] = if bit { m.high } else { m.low };
            }
            run[l0 - 1] = m.high;
            metrics.moves += 2 * lambda as u64 + 1;
        }
    }
}

/// Reads the `λ` tag bits stored in the `λ + 1` cells ending at `end`.
pub fn read_tag<T, F>(
    v: &[T],
    end: usize,
    lambda: usize,
    is_less: &mut F,
    metrics: &mut Metrics,
) -> Result<[bool; MAX_LAMBDA], EncodingError>
where
    F: FnMut(&T, &T) -> bool,
{
    if end > v.len() || end < lambda + 1 {
        return Err(EncodingError::NoRoom {
            end,
            available: end.min(v.len()),
        });
    }
    let l0 = end - lambda;
    let pivot = &v[l0 - 1];
    let mut bits = [false; MAX_LAMBDA];
    for (i, bit) in bits.iter_mut().enumerate().take(lambda) {
        *bit = !lt(is_less, metrics, &v[l0 + i], pivot);
    }
    Ok(bits)
}

/// Encodes the length of `run` into its cells, choosing the pivot scheme
/// when possible. Returns the scheme used.
pub fn encode_run_length<T, F>(
    v: &mut [T],
    run: RunEntry,
    lambda: usize,
    markers: &MarkerPair<T>,
    is_less: &mut F,
    metrics: &mut Metrics,
) -> Scheme
where
    T: Copy,
    F: FnMut(&T, &T) -> bool,
{
    debug_assert!(run.len > 3 * lambda && run.len < (1 << (lambda - 1)) - 1);
    let scheme = if is_pivotable(v, run, lambda, is_less, metrics) {
        Scheme::Pivot
    } else {
        Scheme::Marker
    };
    let bits = tag_bits(run.len, scheme, lambda);
    write_tag(
        &mut v[run.start..run.end()],
        &bits[..lambda],
        scheme,
        Some(markers),
        metrics,
    );
    metrics.encode_ops += 1;
    scheme
}

/// Decodes the length and scheme of the encoded run ending at `end`.
///
/// The all-ones pattern never encodes a run, so decoding a run that is not
/// encoded (a sorted run reads as all ones) is reported as corruption.
pub fn decode_run_length<T, F>(
    v: &[T],
    end: usize,
    lambda: usize,
    is_less: &mut F,
    metrics: &mut Metrics,
) -> Result<(usize, Scheme), EncodingError>
where
    F: FnMut(&T, &T) -> bool,
{
    let bits = read_tag(v, end, lambda, is_less, metrics)?;
    metrics.decode_ops += 1;
    let len = bits[..lambda - 1]
        .iter()
        .fold(0usize, |acc, &b| (acc << 1) | b as usize);
    let scheme = if bits[lambda - 1] {
        Scheme::Marker
    } else {
        Scheme::Pivot
    };
    if len <= 3 * lambda || len > end || len >= (1 << (lambda - 1)) - 1 {
        return Err(EncodingError::Corrupt { end, len });
    }
    Ok((len, scheme))
}

/// Restores the cells of an encoded run to their exact pre-encoding values.
pub fn reverse_encoding<T: Copy>(
    v: &mut [T],
    start: usize,
    len: usize,
    scheme: Scheme,
    lambda: usize,
    metrics: &mut Metrics,
) {
    let run = &mut v[start..start + len];
    let l0 = len - lambda;
    match scheme {
        Scheme::Pivot => {
            for i in 0..lambda {
                if !tag_bit(len, scheme, lambda, i) {
                    run.swap(i, l0 + i);
                    metrics.moves += 2;
                }
            }
        }
        Scheme::Marker => {
            run.copy_within(lambda..2 * lambda, l0);
            let fill = run[lambda - 1];
            run[lambda..2 * lambda].fill(fill);
            run[l0 - 1] = fill;
            metrics.moves += 2 * lambda as u64 + 1;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn less(a: &i32, b: &i32) -> bool {
        a < b
    }

    #[test]
    fn lambda_values() {
        assert_eq!(Lambda::for_len(1).lambda, 1);
        assert_eq!(Lambda::for_len(2).lambda, 2);
        assert_eq!(Lambda::for_len(8).lambda, 4);
        assert_eq!(Lambda::for_len(9).lambda, 5);
        assert_eq!(Lambda::for_len(1 << 16).short_threshold, 51);
    }

    #[test]
    fn pivot_tag_example() {
        let mut run: Vec<i32> = (1..=13).collect();
        let mut m = Metrics::default();
        assert!(is_pivotable(&run, RunEntry::new(0, 13), 4, &mut less, &mut m));
        let bits = [true, false, false, true];
        write_tag(&mut run, &bits, Scheme::Pivot, None, &mut m);
        assert_eq!(&run[..4], [1, 11, 12, 4]);
        assert_eq!(&run[9..], [10, 2, 3, 13]);
        let read = read_tag(&run, 13, 4, &mut less, &mut m).unwrap();
        assert_eq!(&read[..4], bits);
    }

    #[test]
    fn marker_tag_example() {
        let mut run = vec![1, 1, 1, 5, 5, 5, 5, 5, 5, 6, 7, 8, 9];
        let mut m = Metrics::default();
        assert!(!is_pivotable(&run, RunEntry::new(0, 13), 4, &mut less, &mut m));
        let bits = [true, false, true, true];
        let markers = MarkerPair { low: 1, high: 5 };
        write_tag(&mut run, &bits, Scheme::Marker, Some(&markers), &mut m);
        assert_eq!(run, [1, 1, 1, 5, 6, 7, 8, 9, 5, 5, 1, 5, 5]);
        let read = read_tag(&run, 13, 4, &mut less, &mut m).unwrap();
        assert_eq!(&read[..4], bits);
    }

    #[test]
    fn all_ones_pivot_tag_swaps_nothing() {
        let mut run: Vec<i32> = (1..=13).collect();
        write_tag(&mut run, &[true; 4], Scheme::Pivot, None, &mut Metrics::default());
        assert_eq!(run, (1..=13).collect::<Vec<_>>());
    }

    #[test]
    fn markers_found_in_scan_order() {
        let mut m = Metrics::default();
        assert_eq!(
            find_markers(&[5, 5, 3, 9], &mut less, &mut m),
            Some(MarkerPair { low: 3, high: 5 })
        );
        assert_eq!(
            find_markers(&[1, 2], &mut less, &mut m),
            Some(MarkerPair { low: 1, high: 2 })
        );
        assert_eq!(find_markers(&[4, 4, 4], &mut less, &mut m), None);
        assert_eq!(find_markers::<i32, _>(&[], &mut less, &mut m), None);
    }

    #[test]
    fn round_trip_both_schemes() {
        let lambda = 6;
        let markers = MarkerPair { low: -1, high: 0 };
        let pivot_run: Vec<i32> = (0..25).collect();
        let marker_run: Vec<i32> = [1, 2, 3]
            .into_iter()
            .chain(std::iter::repeat_n(7, 19))
            .chain([8, 9, 10])
            .collect();
        for (original, want) in [(pivot_run, Scheme::Pivot), (marker_run, Scheme::Marker)] {
            let mut v = original.clone();
            let mut m = Metrics::default();
            let run = RunEntry::new(0, v.len());
            assert_eq!(
                encode_run_length(&mut v, run, lambda, &markers, &mut less, &mut m),
                want
            );
            let (len, scheme) = decode_run_length(&v, v.len(), lambda, &mut less, &mut m).unwrap();
            assert_eq!((len, scheme), (original.len(), want));
            reverse_encoding(&mut v, 0, len, scheme, lambda, &mut m);
            assert_eq!(v, original);
            assert_eq!((m.encode_ops, m.decode_ops), (1, 1));
            // A second decode sees a sorted run, which no tag produces.
            assert!(matches!(
                decode_run_length(&v, v.len(), lambda, &mut less, &mut m),
                Err(EncodingError::Corrupt { .. })
            ));
        }
    }

    #[test]
    fn decode_without_room_is_an_error() {
        let v = [1, 2, 3];
        let err = decode_run_length(&v, 3, 4, &mut less, &mut Metrics::default()).unwrap_err();
        assert_eq!(err, EncodingError::NoRoom { end: 3, available: 3 });
    }
}

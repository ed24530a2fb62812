/// True iff `after` is non-decreasing under `is_less` and holds exactly the
/// same multiset of values as `before`.
pub fn verify_sorted_permutation<T, F>(before: &[T], after: &[T], mut is_less: F) -> bool
where
    T: Ord + Clone,
    F: FnMut(&T, &T) -> bool,
{
    if before.len() != after.len() {
        return false;
    }
    if after.windows(2).any(|w| is_less(&w[1], &w[0])) {
        return false;
    }
    let mut oracle = before.to_vec();
    oracle.sort();
    let mut got = after.to_vec();
    got.sort();
    oracle == got
}

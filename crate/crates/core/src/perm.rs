//! Finite permutation patterns of shifts and of value sequences.
//!
//! The pattern of n pairwise-distinct items is the vector of their ranks:
//! entry i holds the position (1-based) of item i in sorted order. Patterns
//! are extracted with a comparison that is allowed to fail — lexicographic
//! shift comparison can exhaust its depth, ball arithmetic can be too
//! coarse — so sorting here is fallible end to end, and two equal items are
//! always detected rather than silently tie-broken: in a bottom-up merge
//! sort, any two equal items are compared against each other directly
//! before either could be emitted past the other.

use std::cmp::Ordering;
use std::collections::HashSet;
use std::fmt;

use crate::error::{Error, Result};
use crate::scalar::Scalar;
use crate::word::{compare_shifts_resolved, WordStream};

/// The rank pattern of finitely many pairwise-distinct items.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct FinitePermutation {
    ranks: Vec<usize>,
}

impl FinitePermutation {
    /// Wraps a rank vector, checking it is a permutation of 1..=n.
    ///
    /// # Errors
    ///
    /// [`Error::InvalidPermutation`] if some rank is out of range or
    /// repeated.
    pub fn new(ranks: Vec<usize>) -> Result<Self> {
        let n = ranks.len();
        let mut seen = vec![false; n];
        for (i, &r) in ranks.iter().enumerate() {
            if r < 1 || r > n {
                return Err(Error::InvalidPermutation(format!(
                    "rank {r} at index {i} is outside 1..={n}"
                )));
            }
            if seen[r - 1] {
                return Err(Error::InvalidPermutation(format!("rank {r} appears twice")));
            }
            seen[r - 1] = true;
        }
        Ok(FinitePermutation { ranks })
    }

    /// Builds the pattern from a sorted index vector: `sorted[r]` is the
    /// item of rank r + 1.
    fn from_sorted(sorted: &[usize]) -> Self {
        let mut ranks = vec![0usize; sorted.len()];
        for (r, &i) in sorted.iter().enumerate() {
            ranks[i] = r + 1;
        }
        FinitePermutation { ranks }
    }

    /// Number of items.
    pub fn len(&self) -> usize {
        self.ranks.len()
    }

    /// True for the empty pattern.
    pub fn is_empty(&self) -> bool {
        self.ranks.is_empty()
    }

    /// The rank (1-based) of item i.
    pub fn rank(&self, i: usize) -> usize {
        self.ranks[i]
    }

    /// The full rank vector.
    pub fn ranks(&self) -> &[usize] {
        &self.ranks
    }

    /// The pattern of the first k items, re-ranked to 1..=k.
    ///
    /// # Panics
    ///
    /// If k exceeds the length.
    pub fn prefix_pattern(&self, k: usize) -> FinitePermutation {
        assert!(k <= self.ranks.len(), "prefix length exceeds pattern length");
        let head = &self.ranks[..k];
        let mut order: Vec<usize> = (0..k).collect();
        order.sort_by_key(|&i| head[i]);
        FinitePermutation::from_sorted(&order)
    }
}

impl fmt::Display for FinitePermutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (k, r) in self.ranks.iter().enumerate() {
            if k > 0 {
                write!(f, ",")?;
            }
            write!(f, "{r}")?;
        }
        write!(f, ")")
    }
}

/// Sorts the indices 0..n by a fallible strict comparison.
///
/// Bottom-up merge sort; any `Equal` outcome aborts with
/// [`Error::DuplicateValue`] naming the offending pair. Equal items cannot
/// slip through undetected: items equal to each other in one run were
/// compared when that run was merged together, and across runs the merge
/// front reaches both before either passes the other.
pub fn sort_indices_by<F>(n: usize, mut cmp: F) -> Result<Vec<usize>>
where
    F: FnMut(usize, usize) -> Result<Ordering>,
{
    let mut cur: Vec<usize> = (0..n).collect();
    if n < 2 {
        return Ok(cur);
    }
    let mut buf = vec![0usize; n];
    let mut width = 1;
    while width < n {
        let mut lo = 0;
        while lo < n {
            let mid = (lo + width).min(n);
            let hi = (lo + 2 * width).min(n);
            let (mut a, mut b, mut o) = (lo, mid, lo);
            while a < mid && b < hi {
                match cmp(cur[a], cur[b])? {
                    Ordering::Less => {
                        buf[o] = cur[a];
                        a += 1;
                    }
                    Ordering::Greater => {
                        buf[o] = cur[b];
                        b += 1;
                    }
                    Ordering::Equal => {
                        return Err(Error::DuplicateValue { i: cur[a], j: cur[b] })
                    }
                }
                o += 1;
            }
            buf[o..o + (mid - a)].copy_from_slice(&cur[a..mid]);
            o += mid - a;
            buf[o..o + (hi - b)].copy_from_slice(&cur[b..hi]);
            lo = hi;
        }
        std::mem::swap(&mut cur, &mut buf);
        width *= 2;
    }
    Ok(cur)
}

/// The rank pattern of a slice of scalar values.
///
/// # Errors
///
/// [`Error::DuplicateValue`] if two values are equal;
/// [`Error::UnresolvableComparison`] if the scalar type cannot separate two
/// values at its working precision.
pub fn permutation_from_values<S: Scalar>(values: &[S]) -> Result<FinitePermutation> {
    let sorted = sort_indices_by(values.len(), |i, j| values[i].try_cmp(&values[j]))?;
    Ok(FinitePermutation::from_sorted(&sorted))
}

/// The rank pattern of the shifts T⁰u, …, T^{n-1}u under lexicographic
/// order, with comparisons escalated up to `cap` letters.
///
/// # Errors
///
/// [`Error::ComparisonExhausted`] if two shifts agree through `cap` letters.
pub fn valid_permutation_prefix(
    stream: &mut WordStream,
    n: usize,
    cap: usize,
) -> Result<FinitePermutation> {
    let sorted = sort_indices_by(n, |i, j| compare_shifts_resolved(stream, i, j, cap))?;
    Ok(FinitePermutation::from_sorted(&sorted))
}

/// Counts distinct rank patterns among windows with a caller-supplied
/// fallible comparison on absolute item indices.
///
/// Window s covers items s, s+1, …, s+window−1, for s in 0..starts.
///
/// # Panics
///
/// If `window` is 0.
pub fn permutation_complexity_by<F>(starts: usize, window: usize, mut cmp: F) -> Result<usize>
where
    F: FnMut(usize, usize) -> Result<Ordering>,
{
    assert!(window >= 1, "window must be at least 1");
    let mut seen: HashSet<FinitePermutation> = HashSet::new();
    for s in 0..starts {
        let sorted = sort_indices_by(window, |a, b| cmp(s + a, s + b))?;
        seen.insert(FinitePermutation::from_sorted(&sorted));
    }
    Ok(seen.len())
}

/// Counts distinct patterns among all length-`window` windows of a value
/// slice.
pub fn value_complexity<S: Scalar>(values: &[S], window: usize) -> Result<usize> {
    let starts = values.len().saturating_sub(window - 1);
    permutation_complexity_by(starts, window, |i, j| values[i].try_cmp(&values[j]))
}

/// Counts distinct patterns among the shift windows
/// (T^s u, …, T^{s+window−1} u) for s in 0..sample.
pub fn shift_complexity(
    stream: &mut WordStream,
    window: usize,
    sample: usize,
    cap: usize,
) -> Result<usize> {
    permutation_complexity_by(sample, window, |i, j| {
        compare_shifts_resolved(stream, i, j, cap)
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::Rational;
    use crate::word::{Morphism, DEFAULT_DEPTH_CAP};

    fn ratio(n: i64, d: i64) -> Rational {
        Rational::new(n.into(), d.into())
    }

    fn thue_morse_stream() -> WordStream {
        let m = Morphism::new(vec![vec![0, 1], vec![1, 0]]).unwrap();
        WordStream::new(m, 0).unwrap()
    }

    fn fibonacci_stream() -> WordStream {
        let m = Morphism::new(vec![vec![0, 1], vec![0]]).unwrap();
        WordStream::new(m, 0).unwrap()
    }

    #[test]
    fn construction_validates_ranks() {
        assert!(FinitePermutation::new(vec![2, 4, 3, 1]).is_ok());
        assert!(matches!(
            FinitePermutation::new(vec![1, 1]),
            Err(Error::InvalidPermutation(_))
        ));
        assert!(matches!(
            FinitePermutation::new(vec![0, 1]),
            Err(Error::InvalidPermutation(_))
        ));
        assert!(matches!(
            FinitePermutation::new(vec![1, 3]),
            Err(Error::InvalidPermutation(_))
        ));
    }

    #[test]
    fn display_and_prefix_restriction() {
        let p = FinitePermutation::new(vec![2, 4, 3, 1]).unwrap();
        assert_eq!(p.to_string(), "(2,4,3,1)");
        assert_eq!(p.prefix_pattern(2).ranks(), &[1, 2]);
        assert_eq!(p.prefix_pattern(3).ranks(), &[1, 3, 2]);
        assert_eq!(p.prefix_pattern(4), p);
        assert_eq!(p.prefix_pattern(0).ranks(), &[] as &[usize]);
    }

    #[test]
    fn equal_items_are_always_caught() {
        let values = [ratio(1, 1), ratio(2, 1), ratio(1, 1)];
        assert_eq!(
            permutation_from_values(&values),
            Err(Error::DuplicateValue { i: 0, j: 2 })
        );
        // Duplicates inside a longer slice, positioned so naive sampling
        // could miss them.
        let values: Vec<Rational> =
            [5, 1, 4, 2, 8, 2, 7, 3].iter().map(|&n| ratio(n, 1)).collect();
        assert!(matches!(
            permutation_from_values(&values),
            Err(Error::DuplicateValue { i: 3, j: 5 })
        ));
    }

    #[test]
    fn value_patterns_rank_correctly() {
        let values = [ratio(1, 2), ratio(1, 1), ratio(3, 4), ratio(1, 4)];
        let p = permutation_from_values(&values).unwrap();
        assert_eq!(p.ranks(), &[2, 4, 3, 1]);
    }

    #[test]
    fn valid_prefixes_of_known_words() {
        let mut tm = thue_morse_stream();
        let p = valid_permutation_prefix(&mut tm, 4, DEFAULT_DEPTH_CAP).unwrap();
        assert_eq!(p.ranks(), &[2, 4, 3, 1]);

        let mut fib = fibonacci_stream();
        let p = valid_permutation_prefix(&mut fib, 5, DEFAULT_DEPTH_CAP).unwrap();
        assert_eq!(p.ranks(), &[2, 4, 1, 3, 5]);
    }

    #[test]
    fn shift_complexity_of_thue_morse() {
        let mut tm = thue_morse_stream();
        let got: Vec<usize> = (2..=8)
            .map(|n| shift_complexity(&mut tm, n, 4096, DEFAULT_DEPTH_CAP).unwrap())
            .collect();
        assert_eq!(got, vec![2, 6, 8, 14, 16, 18, 20]);
    }

    #[test]
    fn value_complexity_matches_shift_complexity() {
        // Dyadic encodings of the first Thue–Morse shifts order the same
        // way the shifts do, so window patterns agree.
        let mut tm = thue_morse_stream();
        let n = 64;
        let values: Vec<Rational> = {
            let prefix: Vec<u8> = tm.prefix(n + 64).to_vec();
            (0..n)
                .map(|s| {
                    let mut acc = Rational::new(0.into(), 1.into());
                    let mut scale = Rational::new(1.into(), 2.into());
                    for &b in &prefix[s..s + 64] {
                        if b == 1 {
                            acc += scale.clone();
                        }
                        scale /= Rational::new(2.into(), 1.into());
                    }
                    acc
                })
                .collect()
        };
        let sample = 50;
        for window in 2..=5 {
            let by_values =
                value_complexity(&values[..sample + window - 1], window).unwrap();
            let by_shifts =
                shift_complexity(&mut tm, window, sample, DEFAULT_DEPTH_CAP).unwrap();
            assert_eq!(by_values, by_shifts, "window {window}");
        }
    }
}

//! Substitutions and their infinite fixed points.
//!
//! A [`Morphism`] sends each letter of the alphabet {0, …, q−1} to a
//! nonempty word over the same alphabet. When the image of a seed letter b
//! starts with b and has length at least two, iterating the substitution on
//! b converges to a unique infinite fixed point; [`WordStream`] materializes
//! prefixes of it lazily in amortized O(1) per letter by re-expanding its own
//! output: the buffer starts as the image of the seed, and the letter at the
//! expansion cursor is repeatedly appended as its image.
//!
//! Shifted copies of the fixed point are compared lexicographically with an
//! explicit depth budget; [`ShiftOrder::Unresolved`] is an honest outcome,
//! and [`compare_shifts_resolved`] layers doubling escalation with a hard
//! cap on top of it.

use std::cmp::Ordering;

use crate::error::{Error, Result};

/// Depth cap used by comparison escalation when callers have no better bound.
pub const DEFAULT_DEPTH_CAP: usize = 1 << 20;

/// A substitution on the alphabet {0, …, q−1}.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Morphism {
    images: Vec<Vec<u8>>,
}

impl Morphism {
    /// Builds a substitution from the images of 0, 1, …, q−1.
    ///
    /// # Errors
    ///
    /// [`Error::InvalidMorphism`] if there are no images, more than 256, an
    /// image is empty, or an image contains a letter outside the alphabet.
    pub fn new(images: Vec<Vec<u8>>) -> Result<Self> {
        let q = images.len();
        if q == 0 {
            return Err(Error::InvalidMorphism("alphabet is empty".to_string()));
        }
        if q > 256 {
            return Err(Error::InvalidMorphism(format!(
                "alphabet has {q} letters; at most 256 are supported"
            )));
        }
        for (letter, image) in images.iter().enumerate() {
            if image.is_empty() {
                return Err(Error::InvalidMorphism(format!(
                    "image of letter {letter} is empty"
                )));
            }
            if let Some(&bad) = image.iter().find(|&&c| usize::from(c) >= q) {
                return Err(Error::InvalidMorphism(format!(
                    "image of letter {letter} contains letter {bad}, outside 0..{q}"
                )));
            }
        }
        Ok(Self { images })
    }

    /// Number of letters in the alphabet.
    pub fn alphabet_size(&self) -> usize {
        self.images.len()
    }

    /// The image of a single letter.
    ///
    /// # Panics
    ///
    /// Panics if `letter` is outside the alphabet.
    pub fn image(&self, letter: u8) -> &[u8] {
        &self.images[usize::from(letter)]
    }

    /// All images, indexed by letter.
    pub fn images(&self) -> &[Vec<u8>] {
        &self.images
    }

    /// Applies the substitution to a finite word.
    pub fn apply(&self, word: &[u8]) -> Vec<u8> {
        let mut out = Vec::with_capacity(word.len());
        for &c in word {
            out.extend_from_slice(self.image(c));
        }
        out
    }

    /// The k-th compositional power (k ≥ 1).
    ///
    /// # Errors
    ///
    /// [`Error::InvalidMorphism`] if `k == 0`.
    pub fn power(&self, k: usize) -> Result<Self> {
        if k == 0 {
            return Err(Error::InvalidMorphism(
                "power must be at least 1".to_string(),
            ));
        }
        let mut images = self.images.clone();
        for _ in 1..k {
            images = images.iter().map(|w| self.apply(w)).collect();
        }
        Ok(Self { images })
    }

    /// Whether `seed` generates an infinite fixed point: its image must
    /// start with `seed` and have length at least two.
    pub fn extends_from(&self, seed: u8) -> bool {
        usize::from(seed) < self.alphabet_size() && {
            let img = self.image(seed);
            img.len() >= 2 && img[0] == seed
        }
    }
}

/// Lazily grown prefix of the infinite fixed point of a substitution.
#[derive(Debug, Clone)]
pub struct WordStream {
    morphism: Morphism,
    seed: u8,
    buffer: Vec<u8>,
    expanded: usize,
}

impl WordStream {
    /// Starts the fixed point of `morphism` at `seed`.
    ///
    /// # Errors
    ///
    /// [`Error::NonExtensible`] unless the image of `seed` starts with
    /// `seed` and has length at least two.
    pub fn new(morphism: Morphism, seed: u8) -> Result<Self> {
        if !morphism.extends_from(seed) {
            return Err(Error::NonExtensible { seed });
        }
        let buffer = morphism.image(seed).to_vec();
        Ok(Self { morphism, seed, buffer, expanded: 1 })
    }

    /// The substitution whose fixed point this is.
    pub fn morphism(&self) -> &Morphism {
        &self.morphism
    }

    /// The seed letter.
    pub fn seed(&self) -> u8 {
        self.seed
    }

    fn ensure_len(&mut self, n: usize) {
        while self.buffer.len() < n {
            let next = self.buffer[self.expanded];
            self.expanded += 1;
            let image = self.morphism.image(next);
            self.buffer.extend_from_slice(image);
        }
    }

    /// The first `n` letters of the fixed point.
    pub fn prefix(&mut self, n: usize) -> &[u8] {
        self.ensure_len(n);
        &self.buffer[..n]
    }

    /// The letter at position `i` (0-based).
    pub fn letter(&mut self, i: usize) -> u8 {
        self.ensure_len(i + 1);
        self.buffer[i]
    }

    /// Looks for a period p ≤ `max_period` such that the first `window`
    /// letters equal the same window shifted by p. A hit strongly suggests
    /// the fixed point is ultimately periodic, which makes all shifted
    /// copies pairwise comparable only up to that redundancy; callers use
    /// this as a screening diagnostic, not a proof.
    pub fn periodicity_hint(&mut self, max_period: usize, window: usize) -> Option<usize> {
        self.ensure_len(max_period + window);
        (1..=max_period)
            .find(|&p| (0..window).all(|i| self.buffer[i] == self.buffer[i + p]))
    }
}

/// Outcome of a depth-bounded lexicographic comparison of two shifts.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ShiftOrder {
    /// The first shift is lexicographically smaller.
    Less,
    /// The first shift is lexicographically greater.
    Greater,
    /// The shifts agree on every compared position.
    Unresolved {
        /// Number of positions compared (all equal).
        agreed: usize,
    },
}

/// Compares the shifts T^i u and T^j u letter-by-letter up to `depth`.
///
/// # Errors
///
/// [`Error::IdenticalShifts`] if `i == j` (a shift always equals itself;
/// asking is a caller bug this crate refuses to paper over).
pub fn compare_shifts(
    stream: &mut WordStream,
    i: usize,
    j: usize,
    depth: usize,
) -> Result<ShiftOrder> {
    if i == j {
        return Err(Error::IdenticalShifts { index: i });
    }
    stream.ensure_len(i.max(j) + depth);
    for t in 0..depth {
        match stream.buffer[i + t].cmp(&stream.buffer[j + t]) {
            Ordering::Less => return Ok(ShiftOrder::Less),
            Ordering::Greater => return Ok(ShiftOrder::Greater),
            Ordering::Equal => {}
        }
    }
    Ok(ShiftOrder::Unresolved { agreed: depth })
}

/// Compares two shifts to a definite order, escalating the depth.
///
/// Starts at depth 64 (or `cap`, if smaller) and doubles until the
/// comparison resolves or the depth would exceed `cap`.
///
/// # Errors
///
/// [`Error::IdenticalShifts`] if `i == j`;
/// [`Error::ComparisonExhausted`] if the shifts agree through depth `cap`.
pub fn compare_shifts_resolved(
    stream: &mut WordStream,
    i: usize,
    j: usize,
    cap: usize,
) -> Result<Ordering> {
    let mut depth = 64.min(cap).max(1);
    loop {
        match compare_shifts(stream, i, j, depth)? {
            ShiftOrder::Less => return Ok(Ordering::Less),
            ShiftOrder::Greater => return Ok(Ordering::Greater),
            ShiftOrder::Unresolved { .. } => {
                if depth >= cap {
                    return Err(Error::ComparisonExhausted { i, j, depth });
                }
                depth = (depth * 2).min(cap);
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    pub(crate) fn thue_morse() -> Morphism {
        Morphism::new(vec![vec![0, 1], vec![1, 0]]).unwrap()
    }

    pub(crate) fn fibonacci() -> Morphism {
        Morphism::new(vec![vec![0, 1], vec![0]]).unwrap()
    }

    #[test]
    fn rejects_malformed_substitutions() {
        assert!(matches!(
            Morphism::new(vec![]),
            Err(Error::InvalidMorphism(_))
        ));
        assert!(matches!(
            Morphism::new(vec![vec![0], vec![]]),
            Err(Error::InvalidMorphism(_))
        ));
        assert!(matches!(
            Morphism::new(vec![vec![0, 2], vec![0]]),
            Err(Error::InvalidMorphism(_))
        ));
    }

    #[test]
    fn fixed_point_prefixes() {
        let mut tm = WordStream::new(thue_morse(), 0).unwrap();
        assert_eq!(
            tm.prefix(16),
            &[0, 1, 1, 0, 1, 0, 0, 1, 1, 0, 0, 1, 0, 1, 1, 0]
        );

        let mut fib = WordStream::new(fibonacci(), 0).unwrap();
        assert_eq!(
            fib.prefix(24),
            &[0, 1, 0, 0, 1, 0, 1, 0, 0, 1, 0, 0, 1, 0, 1, 0, 0, 1, 0, 1, 0, 0, 1, 0]
        );
    }

    #[test]
    fn prefix_growth_is_self_consistent() {
        // Growing in small steps and in one large step must agree.
        let mut a = WordStream::new(thue_morse(), 0).unwrap();
        let mut b = WordStream::new(thue_morse(), 0).unwrap();
        let mut piecewise = Vec::new();
        for n in (1..=512).step_by(7) {
            piecewise = a.prefix(n).to_vec();
        }
        assert_eq!(&piecewise[..], &b.prefix(512)[..piecewise.len()]);
    }

    #[test]
    fn seed_must_extend() {
        // In the Fibonacci substitution, 1 ↦ 0 does not start with 1.
        assert!(matches!(
            WordStream::new(fibonacci(), 1),
            Err(Error::NonExtensible { seed: 1 })
        ));
        // 0 ↦ 0 alone is too short to generate anything infinite.
        let stunted = Morphism::new(vec![vec![0]]).unwrap();
        assert!(matches!(
            WordStream::new(stunted, 0),
            Err(Error::NonExtensible { seed: 0 })
        ));
    }

    #[test]
    fn powers_compose() {
        let tm = thue_morse();
        let tm2 = tm.power(2).unwrap();
        assert_eq!(tm2.image(0), &[0, 1, 1, 0]);
        assert_eq!(tm2.image(1), &[1, 0, 0, 1]);
        // The fixed point is the same word.
        let mut u = WordStream::new(tm, 0).unwrap();
        let mut v = WordStream::new(tm2.clone(), 0).unwrap();
        assert_eq!(u.prefix(256), v.prefix(256));
        assert!(tm2.power(0).is_err() && thue_morse().power(1).is_ok());
    }

    #[test]
    fn shift_comparisons_resolve() {
        let mut tm = WordStream::new(thue_morse(), 0).unwrap();
        // u = 0110…: T⁰ starts 01…, T¹ starts 11…, so T⁰ < T¹ at depth 1.
        assert_eq!(compare_shifts(&mut tm, 0, 1, 8).unwrap(), ShiftOrder::Less);
        assert_eq!(compare_shifts(&mut tm, 1, 0, 8).unwrap(), ShiftOrder::Greater);
        // T¹ = 110100… and T² = 101001…: differ at offset 1.
        assert_eq!(compare_shifts(&mut tm, 1, 2, 8).unwrap(), ShiftOrder::Greater);
        // T⁰ = 011010… and T³ = 010011… agree for two letters, then differ.
        assert_eq!(
            compare_shifts(&mut tm, 0, 3, 2).unwrap(),
            ShiftOrder::Unresolved { agreed: 2 }
        );
        assert_eq!(
            compare_shifts_resolved(&mut tm, 0, 3, 64).unwrap(),
            Ordering::Greater
        );
        assert!(matches!(
            compare_shifts(&mut tm, 3, 3, 8),
            Err(Error::IdenticalShifts { index: 3 })
        ));
    }

    #[test]
    fn escalation_reports_exhaustion_on_periodic_words() {
        // 0 ↦ 01, 1 ↦ 01 fixes (01)^ω, where T⁰ and T² coincide.
        let periodic = Morphism::new(vec![vec![0, 1], vec![0, 1]]).unwrap();
        let mut w = WordStream::new(periodic, 0).unwrap();
        match compare_shifts_resolved(&mut w, 0, 2, 1 << 10) {
            Err(Error::ComparisonExhausted { i: 0, j: 2, depth }) => {
                assert_eq!(depth, 1 << 10);
            }
            other => panic!("expected exhaustion, got {other:?}"),
        }
        assert_eq!(w.periodicity_hint(8, 64), Some(2));

        let mut tm = WordStream::new(thue_morse(), 0).unwrap();
        assert_eq!(tm.periodicity_hint(256, 4096), None);
    }
}

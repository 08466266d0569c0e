//! Empirical frequency analysis of symbolic prefixes.
//!
//! Unique ergodicity of the underlying system shows up combinatorially as
//! *uniform* convergence of factor frequencies: every factor occurs in every
//! long enough window with nearly the same density. The tools here measure
//! that on finite prefixes: sliding-window frequency envelopes per factor,
//! a verdict scan over all short factors, a frequency-sum bracket that
//! recovers a canonical value from counting alone, and a scan for the
//! extremal shifts a prefix can certify.
//!
//! Everything in this module works on plain letter slices and exact
//! rational counts — no eigendata involved — which is exactly what makes it
//! usable as an independent cross-check of the interval construction.

use std::collections::{BTreeMap, BTreeSet};

use crate::error::{Error, Result};
use crate::scalar::Rational;

fn ratio(n: usize, d: usize) -> Rational {
    Rational::new((n as i64).into(), (d as i64).into())
}

/// Start positions of every occurrence of `factor` in `word`.
pub fn occurrence_positions(word: &[u8], factor: &[u8]) -> Vec<usize> {
    assert!(!factor.is_empty(), "empty factor");
    if word.len() < factor.len() {
        return Vec::new();
    }
    (0..=word.len() - factor.len())
        .filter(|&i| &word[i..i + factor.len()] == factor)
        .collect()
}

/// Extremes of a factor's occurrence count over all complete windows.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FrequencyEnvelope {
    /// The factor scanned for.
    pub factor: Vec<u8>,
    /// Window length.
    pub window: usize,
    /// Number of windows scanned.
    pub windows_scanned: usize,
    /// Fewest occurrences lying wholly inside one window.
    pub min_count: usize,
    /// Most occurrences lying wholly inside one window.
    pub max_count: usize,
}

impl FrequencyEnvelope {
    /// Lower frequency bound, min_count / window.
    pub fn min_freq(&self) -> Rational {
        ratio(self.min_count, self.window)
    }

    /// Upper frequency bound, max_count / window.
    pub fn max_freq(&self) -> Rational {
        ratio(self.max_count, self.window)
    }

    /// Envelope width, (max_count − min_count) / window.
    pub fn width(&self) -> Rational {
        ratio(self.max_count - self.min_count, self.window)
    }

    /// Envelope midpoint, (min_count + max_count) / (2·window).
    pub fn midpoint(&self) -> Rational {
        ratio(self.min_count + self.max_count, 2 * self.window)
    }
}

/// Slides every complete length-`window` window across `word` and records
/// the extreme counts of occurrences of `factor` lying wholly inside the
/// window. Frequencies are counts divided by the window length.
///
/// # Errors
///
/// [`Error::FactorAbsent`] if the factor never occurs in `word` at all.
///
/// # Panics
///
/// If the factor is empty, the window is zero, or the word is shorter than
/// the window.
pub fn factor_frequency_envelope(
    word: &[u8],
    factor: &[u8],
    window: usize,
) -> Result<FrequencyEnvelope> {
    assert!(!factor.is_empty(), "empty factor");
    assert!(window >= 1, "zero window");
    assert!(word.len() >= window, "word shorter than the window");

    let starts = occurrence_positions(word, factor);
    if starts.is_empty() {
        let digits: String = factor.iter().map(|b| (b'0' + b) as char).collect();
        return Err(Error::FactorAbsent { factor: digits });
    }

    // Prefix sums over the occurrence indicator; occurrence i fits wholly
    // inside window [s, s+window) iff s ≤ i ≤ s + window − |factor|.
    let slots = word.len() - factor.len() + 1;
    let mut pre = vec![0usize; slots + 1];
    {
        let mut it = starts.iter().peekable();
        for i in 0..slots {
            let here = usize::from(it.peek() == Some(&&i));
            if here == 1 {
                it.next();
            }
            pre[i + 1] = pre[i] + here;
        }
    }
    let span = window.saturating_sub(factor.len() - 1);
    let mut min_count = usize::MAX;
    let mut max_count = 0usize;
    let windows_scanned = word.len() - window + 1;
    for s in 0..windows_scanned {
        let hi = (s + span).min(slots);
        let count = if hi > s { pre[hi] - pre[s] } else { 0 };
        min_count = min_count.min(count);
        max_count = max_count.max(count);
    }
    Ok(FrequencyEnvelope {
        factor: factor.to_vec(),
        window,
        windows_scanned,
        min_count,
        max_count,
    })
}

/// Outcome of sweeping all short factors for frequency uniformity.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ErgodicityVerdict {
    /// Every factor's envelope is narrower than the tolerance.
    Consistent {
        /// How many factors were scanned.
        factors_checked: usize,
        /// The widest envelope seen.
        worst_width: Rational,
        /// The factor attaining it (first in scan order).
        worst_factor: Vec<u8>,
    },
    /// Some factor's envelope is wider than the tolerance — the prefix
    /// does not look uniquely ergodic at this scale.
    Suspect {
        /// The offending factor.
        factor: Vec<u8>,
        /// Its envelope.
        envelope: FrequencyEnvelope,
    },
    /// A factor occurs in the prefix but in no complete window (possible
    /// only when the window is shorter than the factor).
    ZeroFrequency {
        /// The factor that no window captures.
        factor: Vec<u8>,
    },
}

/// Sweeps all factors of length 1..=max_len occurring in `word`, in
/// (length, lexicographic) order, and compares each frequency envelope
/// width against `tolerance`.
///
/// # Panics
///
/// If `max_len` is zero or `word` is shorter than `window + max_len`.
pub fn ergodic_word_verdict(
    word: &[u8],
    max_len: usize,
    window: usize,
    tolerance: &Rational,
) -> Result<ErgodicityVerdict> {
    assert!(max_len >= 1, "max_len must be at least 1");
    assert!(
        word.len() >= window + max_len,
        "word too short for the window and factor lengths"
    );
    let mut factors_checked = 0usize;
    let mut worst: Option<(Rational, Vec<u8>)> = None;
    for len in 1..=max_len {
        let mut seen: BTreeSet<Vec<u8>> = BTreeSet::new();
        for i in 0..=word.len() - len {
            seen.insert(word[i..i + len].to_vec());
        }
        for factor in seen {
            let envelope = factor_frequency_envelope(word, &factor, window)?;
            if envelope.max_count == 0 {
                return Ok(ErgodicityVerdict::ZeroFrequency { factor });
            }
            let width = envelope.width();
            if width > *tolerance {
                return Ok(ErgodicityVerdict::Suspect { factor, envelope });
            }
            factors_checked += 1;
            if worst.as_ref().is_none_or(|(w, _)| width > *w) {
                worst = Some((width, factor));
            }
        }
    }
    let (worst_width, worst_factor) = worst.expect("at least one factor");
    Ok(ErgodicityVerdict::Consistent { factors_checked, worst_width, worst_factor })
}

/// Two-sided counting estimate of a canonical value.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ValueBracket {
    /// Total empirical frequency of the factors lexicographically below
    /// the reference factor.
    pub below: Rational,
    /// The same sum including the reference factor itself.
    pub through: Rational,
    /// The reference factor w = word[k..k+len].
    pub factor: Vec<u8>,
}

/// Estimates the canonical value of position k from factor frequencies
/// alone.
///
/// The canonical value of position k is the measure of the set of shifts
/// below T^k u. Truncating to factor length `len`: every shift starting
/// with a factor v < w (where w is T^k u's own length-`len` prefix) is
/// certainly below, and shifts starting with w itself can fall on either
/// side. Summing empirical frequencies therefore brackets the value:
/// below ≤ c(k) ≲ through, with the gap equal to w's own frequency.
///
/// # Panics
///
/// If `len` is zero or `k + len` exceeds the word length.
pub fn canonical_value_estimate(word: &[u8], k: usize, len: usize) -> ValueBracket {
    assert!(len >= 1, "empty factor");
    assert!(k + len <= word.len(), "reference factor outside the prefix");
    let w = &word[k..k + len];
    let slots = word.len() - len + 1;
    let mut counts: BTreeMap<&[u8], usize> = BTreeMap::new();
    for i in 0..slots {
        *counts.entry(&word[i..i + len]).or_insert(0) += 1;
    }
    let mut below = 0usize;
    let mut at = 0usize;
    for (v, c) in &counts {
        match (*v).cmp(w) {
            std::cmp::Ordering::Less => below += c,
            std::cmp::Ordering::Equal => at = *c,
            std::cmp::Ordering::Greater => break,
        }
    }
    ValueBracket {
        below: ratio(below, slots),
        through: ratio(below + at, slots),
        factor: w.to_vec(),
    }
}

/// One side of a max/min shift scan.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SideReport {
    /// The extremal shift found.
    pub shift: usize,
    /// Whether the winner appeared in the first half of the scan — a
    /// heuristic for "the prefix was long enough to settle this side".
    pub stable: bool,
}

/// Extremal shifts of a prefix at a fixed comparison depth.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct MaxMinScan {
    /// Letters compared per shift.
    pub depth: usize,
    /// Number of shifts scanned (all with `depth` letters available).
    pub scanned: usize,
    /// The lexicographically greatest shift.
    pub max: SideReport,
    /// The lexicographically least shift.
    pub min: SideReport,
}

/// Finds the lexicographically greatest shift among those starting with
/// `max_start`, and the least among those starting with `min_start`,
/// comparing `depth` letters per shift. An empty start word places no
/// constraint on its side. Ties keep the earlier shift.
///
/// For a shift orbit closure, at most one of the two can be attained in
/// the orbit itself: the other side's winner keeps escaping to later and
/// later shifts as the prefix grows, which the `stable` flags expose.
///
/// # Errors
///
/// [`Error::FactorAbsent`] if no scanned shift starts with one of the
/// given words.
///
/// # Panics
///
/// If `depth` is zero or exceeds the word length.
pub fn maxmin_scan(
    word: &[u8],
    max_start: &[u8],
    min_start: &[u8],
    depth: usize,
) -> Result<MaxMinScan> {
    assert!(depth >= 1, "zero depth");
    assert!(depth <= word.len(), "depth exceeds the prefix");
    let scanned = word.len() - depth + 1;
    let admissible = |s: usize, start: &[u8]| {
        s + start.len() <= word.len() && word[s..s + start.len()] == *start
    };
    let mut max_shift: Option<usize> = None;
    let mut min_shift: Option<usize> = None;
    for s in 0..scanned {
        let cand = &word[s..s + depth];
        if admissible(s, max_start)
            && max_shift.is_none_or(|m| cand > &word[m..m + depth])
        {
            max_shift = Some(s);
        }
        if admissible(s, min_start)
            && min_shift.is_none_or(|m| cand < &word[m..m + depth])
        {
            min_shift = Some(s);
        }
    }
    let absent = |start: &[u8]| Error::FactorAbsent {
        factor: start.iter().map(|l| l.to_string()).collect(),
    };
    let max_shift = max_shift.ok_or_else(|| absent(max_start))?;
    let min_shift = min_shift.ok_or_else(|| absent(min_start))?;
    let side = |shift: usize| SideReport { shift, stable: 2 * shift <= scanned };
    Ok(MaxMinScan { depth, scanned, max: side(max_shift), min: side(min_shift) })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::Scalar;
    use crate::word::{Morphism, WordStream};

    fn thue_morse_prefix(n: usize) -> Vec<u8> {
        let m = Morphism::new(vec![vec![0, 1], vec![1, 0]]).unwrap();
        let mut s = WordStream::new(m, 0).unwrap();
        s.prefix(n).to_vec()
    }

    fn fibonacci_prefix(n: usize) -> Vec<u8> {
        let m = Morphism::new(vec![vec![0, 1], vec![0]]).unwrap();
        let mut s = WordStream::new(m, 0).unwrap();
        s.prefix(n).to_vec()
    }

    #[test]
    fn occurrences_are_found_exactly() {
        let w = [0, 0, 1, 0, 0, 1, 0, 1, 1];
        assert_eq!(occurrence_positions(&w, &[0, 0]), vec![0, 3]);
        assert_eq!(occurrence_positions(&w, &[0, 1]), vec![1, 4, 6]);
        assert_eq!(occurrence_positions(&w, &[1, 1]), vec![7]);
        assert_eq!(occurrence_positions(&w, &[2]), Vec::<usize>::new());
    }

    #[test]
    fn double_zero_envelope_of_thue_morse() {
        let w = thue_morse_prefix(1 << 16);
        let env = factor_frequency_envelope(&w, &[0, 0], 1 << 12).unwrap();
        assert_eq!(env.min_freq(), Rational::new(341.into(), 2048.into()));
        assert_eq!(env.max_freq(), Rational::new(683.into(), 4096.into()));
        // The envelope brackets the limit frequency 1/6, tightly.
        let sixth = Rational::new(1.into(), 6.into());
        assert!(env.min_freq() <= sixth && sixth <= env.max_freq());
        assert!(env.width() < Rational::new(1.into(), 50.into()));
    }

    #[test]
    fn letter_envelopes_tighten_with_prefix_length() {
        let mut widths = Vec::new();
        for exp in 12..=16 {
            let n = 1usize << exp;
            let w = thue_morse_prefix(n);
            let env = factor_frequency_envelope(&w, &[0], n / 16).unwrap();
            assert_eq!(
                env.midpoint(),
                Rational::new(1.into(), 2.into()),
                "midpoint at prefix 2^{exp}"
            );
            widths.push(env.width());
        }
        let expect: Vec<Rational> = [128i64, 256, 512, 1024, 2048]
            .iter()
            .map(|&d| Rational::new(1.into(), d.into()))
            .collect();
        assert_eq!(widths, expect);
    }

    #[test]
    fn absent_factors_are_an_error() {
        let w = thue_morse_prefix(1 << 10);
        // Thue–Morse is cube-free: 000 never occurs.
        assert_eq!(
            factor_frequency_envelope(&w, &[0, 0, 0], 64),
            Err(Error::FactorAbsent { factor: "000".to_string() })
        );
    }

    #[test]
    fn zero_frequency_needs_window_below_factor_length() {
        let w = thue_morse_prefix(1 << 10);
        let env = factor_frequency_envelope(&w, &[0, 1], 1).unwrap();
        assert_eq!(env.max_count, 0);
        // In a verdict sweep with a permissive tolerance, the length-1
        // factors pass and the first length-2 factor trips the branch.
        let verdict =
            ergodic_word_verdict(&w, 2, 1, &Rational::new(1.into(), 1.into())).unwrap();
        assert_eq!(verdict, ErgodicityVerdict::ZeroFrequency { factor: vec![0, 0] });
    }

    #[test]
    fn thue_morse_sweep_is_consistent() {
        let w = thue_morse_prefix(1 << 14);
        let verdict =
            ergodic_word_verdict(&w, 4, 1 << 11, &Rational::new(1.into(), 10.into()))
                .unwrap();
        match verdict {
            ErgodicityVerdict::Consistent { factors_checked, worst_width, .. } => {
                // Factor counts of this word at lengths 1..=4: 2, 4, 6, 10.
                assert_eq!(factors_checked, 22);
                assert!(worst_width < Rational::new(1.into(), 10.into()));
                assert!(worst_width > Rational::new(0.into(), 1.into()));
            }
            other => panic!("expected consistent, got {other:?}"),
        }
    }

    #[test]
    fn drifting_word_is_suspect() {
        // Half zeros, then alternation: the '0' frequency drifts 1 → 1/2.
        let mut w = vec![0u8; 2048];
        for i in 0..1024 {
            w.push((i % 2) as u8);
        }
        let verdict =
            ergodic_word_verdict(&w, 1, 512, &Rational::new(1.into(), 10.into())).unwrap();
        match verdict {
            ErgodicityVerdict::Suspect { factor, envelope } => {
                assert_eq!(factor, vec![0]);
                assert_eq!(envelope.max_count, 512);
                assert!(envelope.width() >= Rational::new(1.into(), 4.into()));
            }
            other => panic!("expected suspect, got {other:?}"),
        }
    }

    #[test]
    fn value_bracket_for_thue_morse_start() {
        let w = thue_morse_prefix(1 << 17);
        let b = canonical_value_estimate(&w, 0, 12);
        assert_eq!(b.factor.len(), 12);
        let half = Rational::new(1.into(), 2.into());
        assert!(b.below <= half && half <= b.through);
        assert!((b.below.approx_f64() - 0.458336).abs() < 1e-6);
        assert!((b.through.approx_f64() - 0.500004).abs() < 1e-6);
    }

    #[test]
    fn value_bracket_for_fibonacci_start() {
        let w = fibonacci_prefix(1 << 16);
        let b = canonical_value_estimate(&w, 0, 14);
        // c(0) = (3 − √5)/2 ≈ 0.3819660112501051.
        let c0 = 0.3819660112501051;
        assert!(b.below.approx_f64() <= c0 && c0 <= b.through.approx_f64());
        assert!((b.below.approx_f64() - 0.326237).abs() < 1e-6);
        assert!((b.through.approx_f64() - 0.416419).abs() < 1e-6);
    }

    #[test]
    fn maxmin_candidates_at_fixed_depth() {
        let w = thue_morse_prefix(1 << 12);
        let scan = maxmin_scan(&w, &[1], &[0], 256).unwrap();
        assert_eq!(scan.max.shift, 1);
        assert!(scan.max.stable);
        assert_eq!(scan.min.shift, 513);
        // Unconstrained sides find the same winners: the greatest shift
        // starts with the greatest letter, the least with the least.
        let free = maxmin_scan(&w, &[], &[], 256).unwrap();
        assert_eq!(free.max.shift, scan.max.shift);
        assert_eq!(free.min.shift, scan.min.shift);
    }

    #[test]
    fn min_side_escapes_as_depth_scales() {
        // The first shift is the lexicographic maximum among shifts
        // starting with 1 and stays put; the minimum among shifts starting
        // with 0 keeps escaping to later positions as the prefix grows —
        // at most one side is attained, never both.
        let mut min_shifts = Vec::new();
        for exp in 12..=15 {
            let n = 1usize << exp;
            let w = thue_morse_prefix(n);
            let scan = maxmin_scan(&w, &[1], &[0], n / 8).unwrap();
            assert_eq!(scan.max.shift, 1, "max side at prefix 2^{exp}");
            assert!(scan.max.stable, "max side at prefix 2^{exp}");
            min_shifts.push(scan.min.shift);
        }
        assert_eq!(min_shifts, vec![1025, 2049, 4097, 8193]);
    }

    #[test]
    fn absent_start_words_are_reported() {
        let w = thue_morse_prefix(1 << 8);
        match maxmin_scan(&w, &[2], &[0], 16) {
            Err(Error::FactorAbsent { factor }) => assert_eq!(factor, "2"),
            other => panic!("expected FactorAbsent, got {other:?}"),
        }
        // Cube-free: no 000 anywhere, on either side.
        match maxmin_scan(&w, &[1], &[0, 0, 0], 16) {
            Err(Error::FactorAbsent { factor }) => assert_eq!(factor, "000"),
            other => panic!("expected FactorAbsent, got {other:?}"),
        }
    }
}

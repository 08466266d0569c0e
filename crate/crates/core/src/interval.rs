//! The interval self-map induced by a substitution, and its canonical orbit.
//!
//! Given a primitive substitution φ with dominant eigenvalue θ and letter
//! frequency vector μ (Σμ = 1), the unit interval splits twice over:
//!
//! * *letter intervals* I_a of length μ_a, laid out in letter order, and
//! * *type intervals* J_{a,p} of length μ_a/θ — one per position type —
//!   laid out in the shift order ⪯ of the types.
//!
//! The tiling theorem connecting the two: the types whose occurrences carry
//! letter b (that is, φ(a)[p] = b) sit consecutively in ⪯ order, and their
//! J intervals tile I_b exactly. [`IntervalLayout::new`] verifies this
//! identity instead of assuming it.
//!
//! On top of the layout, each type (a, p) gets the orientation-preserving
//! affine contraction ψ_{a,p} : I_a → J_{a,p} with slope 1/θ. Expanding the
//! fixed point u = φ(u) position by position and applying the matching map
//! yields the *canonical value sequence* c(0), c(1), …: exact real numbers
//! whose relative order reproduces the lexicographic order of the shifts
//! T^n u, and whose distribution is the Lebesgue measure. The sequence is
//! generated self-referentially ([`CanonicalSequence`]): c(0) is the fixed
//! point of ψ_{seed,1}, and the values of the positions inside φ(u[k]) are
//! the images of c(k) under the maps of φ(u[k])'s types.

use std::cmp::Ordering;
use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::order::{all_types, position_types, PositionType, Separability, TypeTable};
use crate::perm::{permutation_from_values, valid_permutation_prefix};
use crate::scalar::{Rational, Scalar};
use crate::spectral::SpectralData;
use crate::word::{Morphism, WordStream};

/// Which endpoints of each interval belong to it during classification.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Orientation {
    /// Intervals are (lo, hi] — values sit on right endpoints.
    HalfOpenLeft,
    /// Intervals are [lo, hi) — values sit on left endpoints.
    HalfOpenRight,
    /// Intervals are open; no generated value ever hits an endpoint.
    Interior,
}

impl std::fmt::Display for Orientation {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s = match self {
            Orientation::HalfOpenLeft => "half-open-left",
            Orientation::HalfOpenRight => "half-open-right",
            Orientation::Interior => "interior",
        };
        f.write_str(s)
    }
}

/// An increasing affine map x ↦ (x − x0)·slope + y0.
#[derive(Debug, Clone, PartialEq)]
pub struct AffineMap<S> {
    /// Left endpoint of the domain interval.
    pub x0: S,
    /// Left endpoint of the image interval.
    pub y0: S,
    /// Contraction ratio (1/θ here).
    pub slope: S,
}

impl<S: Scalar> AffineMap<S> {
    /// Applies the map.
    pub fn apply(&self, x: &S) -> S {
        (x.clone() - self.x0.clone()) * self.slope.clone() + self.y0.clone()
    }

    /// The unique fixed point (x − x0)·slope + y0 = x; requires slope ≠ 1.
    pub fn fixed_point(&self) -> S {
        let num = self.y0.clone() - self.x0.clone() * self.slope.clone();
        let den = S::one() - self.slope.clone();
        num / den
    }
}

/// The two nested partitions of [0, 1] derived from the eigendata.
#[derive(Debug, Clone, PartialEq)]
pub struct IntervalLayout<S> {
    letter_bounds: Vec<S>,
    ordered_types: Vec<PositionType>,
    type_bounds: Vec<S>,
    contraction: S,
}

/// Locates `x` among the intervals cut by `bounds` under `orientation`.
///
/// `bounds` must be increasing; interval i is delimited by bounds[i] and
/// bounds[i+1]. Errors with [`Error::EndpointHit`] when x sits on an
/// excluded endpoint or outside the covered range, and propagates
/// unresolvable comparisons from enclosure scalars.
fn classify_in<S: Scalar>(bounds: &[S], x: &S, orientation: Orientation) -> Result<usize> {
    let cells = bounds.len() - 1;
    let hit = |x: &S| Error::EndpointHit(format!("value {x} is not in any cell"));
    match orientation {
        Orientation::HalfOpenLeft => {
            // Smallest i with x ≤ bounds[i+1]; minimality gives x > bounds[i].
            if !x.try_cmp(&bounds[0]).map(|o| o == Ordering::Greater)? {
                return Err(hit(x));
            }
            if x.try_cmp(&bounds[cells])? == Ordering::Greater {
                return Err(hit(x));
            }
            let (mut lo, mut hi) = (0usize, cells - 1);
            while lo < hi {
                let mid = (lo + hi) / 2;
                if x.try_cmp(&bounds[mid + 1])? != Ordering::Greater {
                    hi = mid;
                } else {
                    lo = mid + 1;
                }
            }
            Ok(lo)
        }
        Orientation::HalfOpenRight => {
            // Largest i with bounds[i] ≤ x; maximality gives x < bounds[i+1].
            if x.try_cmp(&bounds[0])? == Ordering::Less {
                return Err(hit(x));
            }
            if x.try_cmp(&bounds[cells])? != Ordering::Less {
                return Err(hit(x));
            }
            let (mut lo, mut hi) = (0usize, cells - 1);
            while lo < hi {
                let mid = (lo + hi).div_ceil(2);
                if bounds[mid].try_cmp(x)? != Ordering::Greater {
                    lo = mid;
                } else {
                    hi = mid - 1;
                }
            }
            Ok(lo)
        }
        Orientation::Interior => {
            match x.try_cmp(&bounds[0])? {
                Ordering::Greater => {}
                _ => return Err(hit(x)),
            }
            match x.try_cmp(&bounds[cells])? {
                Ordering::Less => {}
                _ => return Err(hit(x)),
            }
            // Smallest i with x < bounds[i+1]; then x ≥ bounds[i] by
            // minimality, and equality must be rejected.
            let (mut lo, mut hi) = (0usize, cells - 1);
            while lo < hi {
                let mid = (lo + hi) / 2;
                if x.try_cmp(&bounds[mid + 1])? == Ordering::Less {
                    hi = mid;
                } else {
                    lo = mid + 1;
                }
            }
            if lo > 0 && x.try_cmp(&bounds[lo])? == Ordering::Equal {
                return Err(Error::EndpointHit(format!(
                    "value {x} hit an interior-layout endpoint"
                )));
            }
            Ok(lo)
        }
    }
}

impl<S: Scalar> IntervalLayout<S> {
    /// Builds and verifies the two partitions.
    ///
    /// # Errors
    ///
    /// [`Error::NotSeparable`] unless the table's verdict is separable;
    /// [`Error::TilingMismatch`] if interval lengths fail the tiling
    /// identity (total mass, consecutive letter groups, aligned group
    /// boundaries). For enclosure scalars the identities are checked up to
    /// the enclosure width.
    pub fn new(m: &Morphism, spectral: &SpectralData<S>, table: &TypeTable) -> Result<Self> {
        match &table.verdict {
            Separability::Separable => {}
            Separability::Inseparable { witness } => {
                return Err(Error::NotSeparable(format!(
                    "type order contradicted by shifts ({}, {}, {})",
                    witness.0, witness.1, witness.2
                )));
            }
            Separability::UnknownAtDepth { left, right } => {
                return Err(Error::NotSeparable(format!(
                    "types {left} and {right} not separated at depth {}",
                    table.depth
                )));
            }
        }
        let q = m.alphabet_size();
        if spectral.mu.len() != q {
            return Err(Error::TilingMismatch(format!(
                "eigenvector has {} entries for {} letters",
                spectral.mu.len(),
                q
            )));
        }

        let mut letter_bounds = Vec::with_capacity(q + 1);
        letter_bounds.push(S::zero());
        for a in 0..q {
            let prev = letter_bounds[a].clone();
            letter_bounds.push(prev + spectral.mu[a].clone());
        }
        let total = letter_bounds[q].clone() - S::one();
        if !total.admits_zero() {
            return Err(Error::TilingMismatch(
                "letter frequencies do not sum to 1".to_string(),
            ));
        }

        let contraction = S::one() / spectral.theta.clone();
        let mut type_bounds = Vec::with_capacity(table.types.len() + 1);
        type_bounds.push(S::zero());
        for t in &table.types {
            let len = spectral.mu[usize::from(t.letter)].clone() * contraction.clone();
            let prev = type_bounds.last().unwrap().clone();
            type_bounds.push(prev + len);
        }

        // Tiling identity: walking the types in shift order, the letter
        // carried at each type's occurrences (φ(a)[p]) must step through
        // 0, 1, …, q−1 in blocks, and at every step from letter b to b+1
        // the accumulated type mass must equal the letter bound.
        let mut current: Option<u8> = None;
        for (k, t) in table.types.iter().enumerate() {
            let carried = m.image(t.letter)[t.index - 1];
            match current {
                None => {
                    if carried != 0 {
                        return Err(Error::TilingMismatch(format!(
                            "first type {t} carries letter {carried}, expected 0"
                        )));
                    }
                }
                Some(b) if carried == b => {}
                Some(b) if carried == b + 1 => {
                    let gap = type_bounds[k].clone()
                        - letter_bounds[usize::from(carried)].clone();
                    if !gap.admits_zero() {
                        return Err(Error::TilingMismatch(format!(
                            "group boundary before type {t} misses the \
                             letter-{carried} bound"
                        )));
                    }
                }
                Some(b) => {
                    return Err(Error::TilingMismatch(format!(
                        "type {t} carries letter {carried} after letter {b}"
                    )));
                }
            }
            current = Some(carried);
        }
        if current != Some((q - 1) as u8) {
            return Err(Error::TilingMismatch(
                "type groups do not reach the last letter".to_string(),
            ));
        }
        let last_gap = type_bounds.last().unwrap().clone() - S::one();
        if !last_gap.admits_zero() {
            return Err(Error::TilingMismatch(
                "type lengths do not sum to 1".to_string(),
            ));
        }

        Ok(IntervalLayout {
            letter_bounds,
            ordered_types: table.types.clone(),
            type_bounds,
            contraction,
        })
    }

    /// Alphabet size.
    pub fn alphabet_size(&self) -> usize {
        self.letter_bounds.len() - 1
    }

    /// Endpoints (lo, hi) of the letter interval I_a.
    pub fn letter_interval(&self, a: u8) -> (S, S) {
        let a = usize::from(a);
        (self.letter_bounds[a].clone(), self.letter_bounds[a + 1].clone())
    }

    /// The types in shift order.
    pub fn ordered_types(&self) -> &[PositionType] {
        &self.ordered_types
    }

    /// Endpoints (lo, hi) of the type interval J_t, if t exists.
    pub fn type_interval(&self, t: PositionType) -> Option<(S, S)> {
        let k = self.ordered_types.iter().position(|&u| u == t)?;
        Some((self.type_bounds[k].clone(), self.type_bounds[k + 1].clone()))
    }

    /// The contraction ratio 1/θ.
    pub fn contraction(&self) -> &S {
        &self.contraction
    }
}

/// The full interval system: layout, one affine map per type, and the
/// starting value with its orientation.
#[derive(Debug, Clone, PartialEq)]
pub struct IntervalMorphism<S> {
    morphism: Morphism,
    seed: u8,
    layout: IntervalLayout<S>,
    /// Maps in canonical (letter, index) type order.
    maps: Vec<AffineMap<S>>,
    /// First map index of each letter in `maps`.
    offsets: Vec<usize>,
    orientation: Orientation,
    start: S,
}

/// Assembles the interval system of a substitution fixed point.
///
/// The affine map of type (a, p) sends I_a onto J_{a,p} with slope 1/θ;
/// the starting value is the fixed point of ψ_{seed,1}, and the layout's
/// orientation is read off from where that value sits in J_{seed,1}: on
/// the right endpoint, on the left endpoint, or strictly inside.
///
/// # Errors
///
/// Everything [`IntervalLayout::new`] raises, plus
/// [`Error::UnresolvableComparison`] when enclosure arithmetic cannot place
/// the starting value, and [`Error::TilingMismatch`] if the starting value
/// escapes its own type interval or classifies to a letter other than the
/// seed.
pub fn build_interval_morphism<S: Scalar>(
    m: &Morphism,
    seed: u8,
    spectral: &SpectralData<S>,
    table: &TypeTable,
) -> Result<IntervalMorphism<S>> {
    let layout = IntervalLayout::new(m, spectral, table)?;
    let canonical = all_types(m);
    let position: HashMap<PositionType, usize> = layout
        .ordered_types
        .iter()
        .enumerate()
        .map(|(k, &t)| (t, k))
        .collect();

    let mut maps = Vec::with_capacity(canonical.len());
    let mut offsets = Vec::with_capacity(m.alphabet_size());
    for t in &canonical {
        if t.index == 1 {
            offsets.push(maps.len());
        }
        let k = position[t];
        maps.push(AffineMap {
            x0: layout.letter_bounds[usize::from(t.letter)].clone(),
            y0: layout.type_bounds[k].clone(),
            slope: layout.contraction.clone(),
        });
    }

    let seed_type = PositionType { letter: seed, index: 1 };
    let seed_map = &maps[offsets[usize::from(seed)]];
    let start = seed_map.fixed_point();
    let (j_lo, j_hi) = layout.type_interval(seed_type).expect("seed type exists");

    let orientation = match start.try_cmp(&j_hi)? {
        Ordering::Equal => Orientation::HalfOpenLeft,
        Ordering::Greater => {
            return Err(Error::TilingMismatch(
                "starting value escapes its type interval".to_string(),
            ))
        }
        Ordering::Less => match start.try_cmp(&j_lo)? {
            Ordering::Equal => Orientation::HalfOpenRight,
            Ordering::Less => {
                return Err(Error::TilingMismatch(
                    "starting value escapes its type interval".to_string(),
                ))
            }
            Ordering::Greater => Orientation::Interior,
        },
    };

    let im = IntervalMorphism {
        morphism: m.clone(),
        seed,
        layout,
        maps,
        offsets,
        orientation,
        start,
    };
    if im.classify_letter(&im.start)? != seed {
        return Err(Error::TilingMismatch(
            "starting value does not classify to the seed letter".to_string(),
        ));
    }
    Ok(im)
}

impl<S: Scalar> IntervalMorphism<S> {
    /// The underlying substitution.
    pub fn morphism(&self) -> &Morphism {
        &self.morphism
    }

    /// The seed letter.
    pub fn seed(&self) -> u8 {
        self.seed
    }

    /// The verified layout.
    pub fn layout(&self) -> &IntervalLayout<S> {
        &self.layout
    }

    /// The affine map of a type.
    ///
    /// # Panics
    ///
    /// If the type does not belong to this substitution.
    pub fn map(&self, t: PositionType) -> &AffineMap<S> {
        assert!(
            usize::from(t.letter) < self.offsets.len()
                && t.index >= 1
                && t.index <= self.morphism.image(t.letter).len(),
            "no such type"
        );
        &self.maps[self.offsets[usize::from(t.letter)] + t.index - 1]
    }

    /// Endpoint convention in force.
    pub fn orientation(&self) -> Orientation {
        self.orientation
    }

    /// The canonical starting value c(0).
    pub fn start(&self) -> &S {
        &self.start
    }

    /// The letter whose interval contains x.
    ///
    /// # Errors
    ///
    /// [`Error::EndpointHit`] per the orientation; unresolvable enclosure
    /// comparisons propagate.
    pub fn classify_letter(&self, x: &S) -> Result<u8> {
        classify_in(&self.layout.letter_bounds, x, self.orientation).map(|i| i as u8)
    }

    /// The type whose interval contains x.
    ///
    /// # Errors
    ///
    /// Same conditions as [`IntervalMorphism::classify_letter`].
    pub fn classify_type(&self, x: &S) -> Result<PositionType> {
        classify_in(&self.layout.type_bounds, x, self.orientation)
            .map(|k| self.layout.ordered_types[k])
    }
}

/// Lazily generated canonical values c(0), c(1), ….
///
/// Works exactly like the fixed point's own expansion queue: position k's
/// value, once known, produces the values of the positions covered by
/// φ(u[k]) — where u[k] is recovered by *classifying* c(k), not by reading
/// the word, so the generation exercises the interval system end to end.
pub struct CanonicalSequence<'a, S: Scalar> {
    im: &'a IntervalMorphism<S>,
    vals: Vec<S>,
    expanded: usize,
}

impl<'a, S: Scalar> CanonicalSequence<'a, S> {
    /// Seeds the queue with the expansion of c(0).
    ///
    /// # Errors
    ///
    /// Classification failures on the starting value propagate.
    pub fn new(im: &'a IntervalMorphism<S>) -> Result<Self> {
        let mut seq = CanonicalSequence { im, vals: Vec::new(), expanded: 0 };
        seq.expand(im.start().clone())?;
        seq.expanded = 1;
        Ok(seq)
    }

    fn expand(&mut self, x: S) -> Result<()> {
        let a = self.im.classify_letter(&x)?;
        for p in 1..=self.im.morphism().image(a).len() {
            let t = PositionType { letter: a, index: p };
            self.vals.push(self.im.map(t).apply(&x));
        }
        Ok(())
    }

    /// Grows the queue to at least n values and returns the first n.
    ///
    /// # Errors
    ///
    /// Classification failures propagate.
    pub fn values(&mut self, n: usize) -> Result<&[S]> {
        while self.vals.len() < n {
            let x = self.vals[self.expanded].clone();
            self.expand(x)?;
            self.expanded += 1;
        }
        Ok(&self.vals[..n])
    }
}

/// The first n canonical values of the system.
///
/// # Errors
///
/// Classification failures propagate.
pub fn canonical_prefix<S: Scalar>(im: &IntervalMorphism<S>, n: usize) -> Result<Vec<S>> {
    let mut seq = CanonicalSequence::new(im)?;
    Ok(seq.values(n)?.to_vec())
}

/// Compares the rank pattern of the first n canonical values against the
/// rank pattern of the first n shifts; returns the first index where the
/// ranks disagree, or None if they coincide.
///
/// # Errors
///
/// Value generation, value comparison, and shift comparison failures all
/// propagate.
pub fn verify_against_shifts<S: Scalar>(
    im: &IntervalMorphism<S>,
    stream: &mut WordStream,
    n: usize,
    cap: usize,
) -> Result<Option<usize>> {
    let vals = canonical_prefix(im, n)?;
    let by_values = permutation_from_values(&vals)?;
    let by_shifts = valid_permutation_prefix(stream, n, cap)?;
    Ok(by_values
        .ranks()
        .iter()
        .zip(by_shifts.ranks())
        .position(|(a, b)| a != b))
}

/// Outcome of checking values against their predicted type intervals.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CanonicalityReport {
    /// How many values were checked.
    pub checked: usize,
    /// How many fell outside their type interval.
    pub violations: usize,
    /// The first violating index, if any.
    pub first_violation: Option<usize>,
}

/// Checks that each value v(n) lies in J_{τ(n)}, the type interval of the
/// n-th position of the fixed point.
///
/// # Errors
///
/// Unresolvable enclosure comparisons propagate; an [`Error::EndpointHit`]
/// counts as a violation rather than an error, since it means the value is
/// *not* inside the half-open interval.
pub fn canonicality_report<S: Scalar>(
    im: &IntervalMorphism<S>,
    stream: &mut WordStream,
    values: &[S],
) -> Result<CanonicalityReport> {
    let tys = position_types(stream, values.len());
    let mut violations = 0usize;
    let mut first = None;
    for (n, v) in values.iter().enumerate() {
        let ok = match im.classify_type(v) {
            Ok(t) => t == tys[n],
            Err(Error::EndpointHit(_)) => false,
            Err(e) => return Err(e),
        };
        if !ok {
            violations += 1;
            if first.is_none() {
                first = Some(n);
            }
        }
    }
    Ok(CanonicalityReport { checked: values.len(), violations, first_violation: first })
}

/// Largest deviation of the empirical distribution of `values` from the
/// uniform one, over the 2^level dyadic cells of [0, 1].
///
/// Counting is exact; the result is the exact rational
/// max_i |count_i/n − 2^−level|.
///
/// # Errors
///
/// Classification failures propagate (a value on an excluded dyadic
/// endpoint, or an unresolvable enclosure comparison).
pub fn dyadic_deviation<S: Scalar>(
    values: &[S],
    level: u32,
    orientation: Orientation,
) -> Result<Rational> {
    assert!(!values.is_empty(), "deviation of an empty sample");
    assert!(level >= 1 && level <= 24, "level out of supported range");
    let cells = 1usize << level;
    let denom = Rational::from_integer((cells as i64).into());
    let bounds: Vec<S> = (0..=cells)
        .map(|i| {
            S::from_rational(Rational::from_integer((i as i64).into()) / denom.clone())
        })
        .collect();
    let mut counts = vec![0usize; cells];
    for v in values {
        counts[classify_in(&bounds, v, orientation)?] += 1;
    }
    let n = Rational::from_integer((values.len() as i64).into());
    let uniform = Rational::from_integer(1.into()) / denom;
    let mut worst = Rational::from_integer(0.into());
    for c in counts {
        let mut dev =
            Rational::from_integer((c as i64).into()) / n.clone() - uniform.clone();
        if dev < Rational::from_integer(0.into()) {
            dev = -dev;
        }
        if dev > worst {
            worst = dev;
        }
    }
    Ok(worst)
}

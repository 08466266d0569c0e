//! Circle rotations, their orbits, and the golden-rotation cross-check.
//!
//! The orbit β_n = {ρ + n·σ} of an irrational rotation is the prototype of
//! a uniquely ergodic system, and it is where the interval construction can
//! be checked against an entirely independent formula: for the square of
//! the golden-mean substitution (0 ↦ 010, 1 ↦ 01), the canonical value
//! sequence *equals* the rotation orbit with σ = ρ = (3 − √5)/2, value for
//! value, in exact arithmetic.
//!
//! Everything here is exact: orbits are generated by iterated addition
//! with wraparound (never by floating-point multiples), the doubling
//! identity β_{2n} = {2β_n − ρ} provides an internal consistency check,
//! sorted orbit points exhibit the three-distance phenomenon, and the
//! cross-check compares values and rank patterns against the substitution
//! pipeline.

use crate::error::{Error, Result};
use crate::interval::{build_interval_morphism, canonical_prefix};
use crate::order::type_order;
use crate::perm::{permutation_from_values, sort_indices_by, valid_permutation_prefix};
use crate::scalar::{Quadratic, Scalar, DEFAULT_PRECISION_BITS};
use crate::spectral::{perron_data, IncidenceMatrix, PerronData};
use crate::word::{Morphism, WordStream};

/// Validated parameters of the rotation x ↦ {x + σ} started at ρ.
#[derive(Debug, Clone, PartialEq)]
pub struct SturmianParams<S> {
    sigma: S,
    rho: S,
}

impl<S: Scalar> SturmianParams<S> {
    /// Checks 0 < σ < 1, 0 ≤ ρ < 1, and that σ is irrational.
    ///
    /// # Errors
    ///
    /// [`Error::InvalidRotation`] for range violations,
    /// [`Error::RationalSigma`] when σ is provably rational (the orbit of a
    /// rational rotation is finite and periodic — none of the analyses here
    /// apply to it).
    pub fn new(sigma: S, rho: S) -> Result<Self> {
        let in_unit = |x: &S, allow_zero: bool| -> Result<bool> {
            let lo_ok = match x.try_sign()? {
                std::cmp::Ordering::Greater => true,
                std::cmp::Ordering::Equal => allow_zero,
                std::cmp::Ordering::Less => false,
            };
            Ok(lo_ok && x.try_lt(&S::one())?)
        };
        if !in_unit(&sigma, false)? {
            return Err(Error::InvalidRotation(format!(
                "step {sigma} outside (0, 1)"
            )));
        }
        if !in_unit(&rho, true)? {
            return Err(Error::InvalidRotation(format!(
                "start {rho} outside [0, 1)"
            )));
        }
        if sigma.as_rational().is_some() {
            return Err(Error::RationalSigma);
        }
        Ok(SturmianParams { sigma, rho })
    }

    /// The rotation step σ.
    pub fn sigma(&self) -> &S {
        &self.sigma
    }

    /// The starting point ρ.
    pub fn rho(&self) -> &S {
        &self.rho
    }
}

/// Wraps a value from (−1, 2) into [0, 1).
fn wrap_unit<S: Scalar>(x: S) -> Result<S> {
    match x.try_sign()? {
        std::cmp::Ordering::Less => Ok(x + S::one()),
        _ => {
            if x.try_lt(&S::one())? {
                Ok(x)
            } else {
                Ok(x - S::one())
            }
        }
    }
}

/// The orbit β_0, …, β_{n−1} with β_k = {ρ + k·σ}, by iterated exact
/// addition (one wraparound test per step, since σ < 1).
///
/// # Errors
///
/// Unresolvable enclosure comparisons propagate.
pub fn rotation_sequence<S: Scalar>(params: &SturmianParams<S>, n: usize) -> Result<Vec<S>> {
    let mut out = Vec::with_capacity(n);
    let mut x = params.rho.clone();
    for _ in 0..n {
        out.push(x.clone());
        x = wrap_unit(x + params.sigma.clone())?;
    }
    Ok(out)
}

/// One doubling step: from β_k, the pair (β_{2k}, β_{2k+1}) via
/// β_{2k} = {2β_k − ρ} and β_{2k+1} = {β_{2k} + σ}.
///
/// # Errors
///
/// Unresolvable enclosure comparisons propagate.
pub fn doubling_step<S: Scalar>(params: &SturmianParams<S>, x: &S) -> Result<(S, S)> {
    let two = S::from_integer(2);
    let even = wrap_unit(two * x.clone() - params.rho.clone())?;
    let odd = wrap_unit(even.clone() + params.sigma.clone())?;
    Ok((even, odd))
}

/// The orbit prefix computed entirely through doubling steps: β_0 = ρ, and
/// every β_k for k ≥ 1 is obtained from β_{⌊k/2⌋}. Agreement with
/// [`rotation_sequence`] is a nontrivial identity on the exact arithmetic.
///
/// # Errors
///
/// Unresolvable enclosure comparisons propagate.
pub fn doubling_expansion<S: Scalar>(params: &SturmianParams<S>, n: usize) -> Result<Vec<S>> {
    let mut out: Vec<S> = Vec::with_capacity(n);
    if n == 0 {
        return Ok(out);
    }
    out.push(params.rho.clone());
    for k in 1..n {
        let (even, odd) = doubling_step(params, &out[k / 2])?;
        out.push(if k % 2 == 0 { even } else { odd });
    }
    Ok(out)
}

/// The distinct circular gap lengths between adjacent orbit points of a
/// sorted sample — the three-distance theorem bounds their number by 3 for
/// any rotation orbit.
///
/// # Errors
///
/// [`Error::DuplicateValue`] if two points coincide (impossible for an
/// irrational rotation); comparison failures propagate.
pub fn three_distance_gaps<S: Scalar>(points: &[S]) -> Result<Vec<S>> {
    assert!(points.len() >= 2, "need at least two points");
    let order = sort_indices_by(points.len(), |i, j| points[i].try_cmp(&points[j]))?;
    let mut gaps: Vec<S> = Vec::new();
    let push_distinct = |g: S, gaps: &mut Vec<S>| -> Result<()> {
        for h in gaps.iter() {
            if g.try_cmp(h)? == std::cmp::Ordering::Equal {
                return Ok(());
            }
        }
        let mut at = gaps.len();
        for (i, h) in gaps.iter().enumerate() {
            if g.try_lt(h)? {
                at = i;
                break;
            }
        }
        gaps.insert(at, g);
        Ok(())
    };
    for w in order.windows(2) {
        let g = points[w[1]].clone() - points[w[0]].clone();
        push_distinct(g, &mut gaps)?;
    }
    // The wraparound gap closes the circle.
    let first = &points[order[0]];
    let last = &points[order[order.len() - 1]];
    let g = S::one() - last.clone() + first.clone();
    push_distinct(g, &mut gaps)?;
    Ok(gaps)
}

/// Outcome of checking a rotation orbit against the golden substitution
/// pipeline.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RotationCrossCheck {
    /// Number of positions compared.
    pub n: usize,
    /// First index where the orbit value differs from the canonical value,
    /// if any.
    pub value_mismatch: Option<usize>,
    /// First index where the orbit's rank pattern differs from the shifts'
    /// rank pattern, if any.
    pub rank_mismatch: Option<usize>,
}

/// Compares a rotation orbit against the canonical values of the squared
/// golden-mean substitution 0 ↦ 010, 1 ↦ 01.
///
/// With σ = ρ = (3 − √5)/2 both comparisons come out empty: the orbit *is*
/// the canonical value sequence, exactly. Any other parameters mismatch
/// immediately, which makes this a sharp end-to-end test of the pipeline.
///
/// # Errors
///
/// Construction and comparison errors from the pipeline propagate.
pub fn golden_cross_check(
    params: &SturmianParams<Quadratic>,
    n: usize,
    cap: usize,
) -> Result<RotationCrossCheck> {
    let fib2 = Morphism::new(vec![vec![0, 1], vec![0]])?.power(2)?;
    let a = IncidenceMatrix::from_morphism(&fib2);
    let spectral = match perron_data(&a, DEFAULT_PRECISION_BITS)? {
        PerronData::Quadratic(s) => s,
        other => {
            panic!("golden-mean dominant root must be quadratic, got {}", {
                other.arithmetic_name()
            })
        }
    };
    let mut stream = WordStream::new(fib2.clone(), 0)?;
    let table = type_order(&mut stream, 1 << 12, 1 << 10)?;
    let im = build_interval_morphism(&fib2, 0, &spectral, &table)?;

    let canon = canonical_prefix(&im, n)?;
    let orbit = rotation_sequence(params, n)?;
    let value_mismatch = (0..n).find(|&i| canon[i] != orbit[i]);

    let by_orbit = permutation_from_values(&orbit)?;
    let by_shifts = valid_permutation_prefix(&mut stream, n, cap)?;
    let rank_mismatch = by_orbit
        .ranks()
        .iter()
        .zip(by_shifts.ranks())
        .position(|(a, b)| a != b);

    Ok(RotationCrossCheck { n, value_mismatch, rank_mismatch })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::perm::value_complexity;
    use crate::scalar::Rational;
    use crate::word::DEFAULT_DEPTH_CAP;
    use num_traits::{One, Zero};

    fn ratio(n: i64, d: i64) -> Rational {
        Rational::new(n.into(), d.into())
    }

    /// σ = ρ = (3 − √5)/2, the parameters matching the squared golden
    /// substitution.
    fn golden_params() -> SturmianParams<Quadratic> {
        let v = Quadratic::new(ratio(3, 2), ratio(-1, 2), 5);
        SturmianParams::new(v.clone(), v).unwrap()
    }

    #[test]
    fn parameters_are_validated() {
        let half = Quadratic::new(ratio(1, 2), ratio(0, 1), 5);
        let golden = Quadratic::new(ratio(-1, 2), ratio(1, 2), 5); // (√5−1)/2
        assert_eq!(
            SturmianParams::new(half.clone(), half.clone()),
            Err(Error::RationalSigma)
        );
        let too_big = Quadratic::new(ratio(-1, 1), ratio(1, 1), 5); // √5−1 > 1
        assert!(matches!(
            SturmianParams::new(too_big, half.clone()),
            Err(Error::InvalidRotation(_))
        ));
        let negative = Quadratic::new(ratio(1, 2), ratio(-1, 2), 5); // (1−√5)/2 < 0
        assert!(matches!(
            SturmianParams::new(golden.clone(), negative),
            Err(Error::InvalidRotation(_))
        ));
        // ρ = 0 is allowed.
        assert!(SturmianParams::new(golden, half * Quadratic::zero()).is_ok());
    }

    #[test]
    fn orbit_starts_with_the_known_values() {
        let orbit = rotation_sequence(&golden_params(), 3).unwrap();
        assert_eq!(orbit[0], Quadratic::new(ratio(3, 2), ratio(-1, 2), 5));
        assert_eq!(orbit[1], Quadratic::new(ratio(3, 1), ratio(-1, 1), 5));
        assert_eq!(orbit[2], Quadratic::new(ratio(7, 2), ratio(-3, 2), 5));
        for b in &orbit {
            assert!(b.try_sign().unwrap() != std::cmp::Ordering::Less);
            assert!(b.try_lt(&Quadratic::one()).unwrap());
        }
    }

    #[test]
    fn doubling_reproduces_the_iterative_orbit() {
        let params = golden_params();
        let by_steps = rotation_sequence(&params, 100).unwrap();
        let by_doubling = doubling_expansion(&params, 100).unwrap();
        assert_eq!(by_steps, by_doubling);
    }

    #[test]
    fn three_distance_theorem_shows_at_most_three_gaps() {
        // A different rotation: σ = (√5 − 1)/2, ρ = 1/3.
        let sigma = Quadratic::new(ratio(-1, 2), ratio(1, 2), 5);
        let rho = Quadratic::new(ratio(1, 3), ratio(0, 1), 5);
        let params = SturmianParams::new(sigma, rho).unwrap();
        for n in [64usize, 100, 256] {
            let orbit = rotation_sequence(&params, n).unwrap();
            let gaps = three_distance_gaps(&orbit).unwrap();
            assert_eq!(gaps.len(), 3, "n = {n}");
            // Distinct, ascending.
            assert!(gaps[0].try_lt(&gaps[1]).unwrap());
            assert!(gaps[1].try_lt(&gaps[2]).unwrap());
        }
    }

    #[test]
    fn orbit_window_patterns_count_n() {
        let sigma = Quadratic::new(ratio(-1, 2), ratio(1, 2), 5);
        let rho = Quadratic::new(ratio(1, 3), ratio(0, 1), 5);
        let params = SturmianParams::new(sigma, rho).unwrap();
        let sample = 10_000usize;
        let orbit = rotation_sequence(&params, sample + 7).unwrap();
        for window in 3..=8usize {
            let got = value_complexity(&orbit[..sample + window - 1], window).unwrap();
            assert_eq!(got, window, "window {window}");
        }
    }

    #[test]
    fn golden_orbit_equals_canonical_values() {
        let check = golden_cross_check(&golden_params(), 500, DEFAULT_DEPTH_CAP).unwrap();
        assert_eq!(check.value_mismatch, None);
        assert_eq!(check.rank_mismatch, None);
    }

    #[test]
    fn wrong_parameters_mismatch_at_the_start() {
        let golden = Quadratic::new(ratio(-1, 2), ratio(1, 2), 5); // (√5−1)/2
        let params = SturmianParams::new(golden.clone(), golden).unwrap();
        let check = golden_cross_check(&params, 100, DEFAULT_DEPTH_CAP).unwrap();
        assert_eq!(check.value_mismatch, Some(0));
    }
}

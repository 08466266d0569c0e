//! Certified rational enclosures ("balls") for non-quadratic algebraic data.
//!
//! A [`Ball`] is a closed interval `[center − radius, center + radius]` with
//! exact rational endpoints, guaranteed to contain the real number it stands
//! for. Arithmetic produces a ball containing every possible result; after
//! each operation the center is rounded to the nearest multiple of
//! 2^−precision (the rounding error is absorbed into the radius) and the
//! radius is rounded *up* at a finer granularity, so coefficient growth stays
//! bounded at the cost of controlled widening.
//!
//! Comparisons succeed only when the balls are disjoint (or both exact and
//! equal); otherwise they fail with
//! [`crate::Error::UnresolvableComparison`], and the caller is expected to
//! rebuild the analysis at doubled precision. Division by a ball that
//! contains zero does not panic: it *poisons* the result with an enormous
//! radius, so the failure surfaces as an unresolvable comparison downstream
//! and enters the same retry path.
//!
//! `precision == 0` means "no rounding": exact rationals embedded into ball
//! arithmetic stay exact until they meet a rounded operand.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use super::{Rational, Scalar};
use crate::error::{Error, Result};

/// Default working precision for enclosure arithmetic, in bits.
pub const DEFAULT_PRECISION_BITS: u32 = 256;
/// Hard cap for precision escalation, in bits.
pub const MAX_PRECISION_BITS: u32 = 4096;

/// Extra bits of granularity used when rounding radii upward.
const RADIUS_GUARD_BITS: u32 = 16;

/// A rational center-radius enclosure of a real number.
#[derive(Clone, Debug)]
pub struct Ball {
    center: Rational,
    radius: Rational,
    precision: u32,
}

fn pow2(bits: u32) -> Rational {
    Rational::from_integer(BigInt::one() << bits)
}

impl Ball {
    /// An exact (zero-radius, unrounded) ball.
    pub fn exact(value: Rational) -> Self {
        Self { center: value, radius: Rational::zero(), precision: 0 }
    }

    /// Builds an explicit enclosure.
    ///
    /// # Panics
    ///
    /// Panics if `radius` is negative.
    pub fn with_radius(center: Rational, radius: Rational, precision: u32) -> Self {
        assert!(!radius.is_negative(), "ball radius must be nonnegative");
        Self { center, radius, precision }.rounded()
    }

    /// Returns the same value rounded at `bits` of working precision.
    pub fn with_precision(mut self, bits: u32) -> Self {
        self.precision = bits;
        self.rounded()
    }

    /// Center of the enclosure.
    pub fn center(&self) -> &Rational {
        &self.center
    }

    /// Radius of the enclosure.
    pub fn radius(&self) -> &Rational {
        &self.radius
    }

    /// Working precision in bits (0 = unrounded).
    pub fn precision(&self) -> u32 {
        self.precision
    }

    /// A certified enclosure of √d at roughly `bits` bits.
    ///
    /// Uses the integer square root of d·4^bits, which brackets √d between
    /// consecutive dyadics of denominator 2^bits.
    pub fn sqrt_of(d: u64, bits: u32) -> Self {
        let scaled = BigInt::from(d) << (2 * bits);
        let lo = scaled.sqrt();
        // lo/2^bits ≤ √d < (lo+1)/2^bits; take the midpoint.
        let denom = BigInt::one() << (bits + 1);
        let center = Rational::new((&lo << 1) + BigInt::one(), denom.clone());
        let radius = Rational::new(BigInt::one(), denom);
        Self { center, radius, precision: bits }.rounded()
    }

    fn rounded(mut self) -> Self {
        if self.precision == 0 {
            return self;
        }
        let scale = pow2(self.precision);
        let snapped = (&self.center * &scale).round().to_integer();
        let snapped = Rational::new(snapped, scale.to_integer());
        let drift = (&snapped - &self.center).abs();
        self.center = snapped;
        let r_scale = pow2(self.precision + RADIUS_GUARD_BITS);
        let bumped = ((self.radius + drift) * &r_scale).ceil().to_integer();
        self.radius = Rational::new(bumped, r_scale.to_integer());
        self
    }

    /// Marks a result whose value could not be bounded (division by a ball
    /// containing zero). Any comparison against it is unresolvable.
    fn poisoned(precision: u32) -> Self {
        Self {
            center: Rational::zero(),
            radius: Rational::from_integer(BigInt::one() << 64),
            precision,
        }
    }

    fn join_precision(&self, other: &Self) -> u32 {
        self.precision.max(other.precision)
    }
}

/// Equality of enclosures compares the interval, not the precision knob.
impl PartialEq for Ball {
    fn eq(&self, other: &Self) -> bool {
        self.center == other.center && self.radius == other.radius
    }
}

impl Add for Ball {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        let precision = self.join_precision(&rhs);
        Self { center: self.center + rhs.center, radius: self.radius + rhs.radius, precision }
            .rounded()
    }
}

impl Sub for Ball {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        self + (-rhs)
    }
}

impl Neg for Ball {
    type Output = Self;
    fn neg(self) -> Self {
        Self { center: -self.center, radius: self.radius, precision: self.precision }
    }
}

impl Mul for Ball {
    type Output = Self;
    fn mul(self, rhs: Self) -> Self {
        let precision = self.join_precision(&rhs);
        let radius = self.center.abs() * &rhs.radius
            + rhs.center.abs() * &self.radius
            + &self.radius * &rhs.radius;
        Self { center: self.center * rhs.center, radius, precision }.rounded()
    }
}

impl Div for Ball {
    type Output = Self;
    fn div(self, rhs: Self) -> Self {
        let precision = self.join_precision(&rhs);
        let denom_mag = rhs.center.abs();
        if denom_mag <= rhs.radius {
            // Divisor may be zero: poison rather than panic, so the failure
            // reaches the precision-escalation loop as an unresolvable
            // comparison instead of aborting the process.
            return Self::poisoned(precision);
        }
        let center = &self.center / &rhs.center;
        // |x/y − c₁/c₂| ≤ (r₁|c₂| + r₂|c₁|) / (|c₂|·(|c₂| − r₂))
        let numer = &self.radius * &denom_mag + &rhs.radius * self.center.abs();
        let radius = numer / (&denom_mag * (&denom_mag - &rhs.radius));
        Self { center, radius, precision }.rounded()
    }
}

impl Zero for Ball {
    fn zero() -> Self {
        Self::exact(Rational::zero())
    }
    fn is_zero(&self) -> bool {
        self.center.is_zero() && self.radius.is_zero()
    }
}

impl One for Ball {
    fn one() -> Self {
        Self::exact(Rational::one())
    }
}

impl fmt::Display for Ball {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.radius.is_zero() {
            write!(f, "{}", self.center)
        } else {
            write!(f, "{}±{}", self.center, self.radius)
        }
    }
}

impl FromStr for Ball {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let parse_rat = |t: &str| {
            Rational::from_str(t.trim())
                .map_err(|e| Error::ParseScalar(format!("{t:?}: {e}")))
        };
        match s.split_once('±') {
            None => Ok(Self::exact(parse_rat(s)?)),
            Some((c, r)) => {
                let radius = parse_rat(r)?;
                if radius.is_negative() {
                    return Err(Error::ParseScalar(format!("negative radius in {s:?}")));
                }
                Ok(Self { center: parse_rat(c)?, radius, precision: 0 })
            }
        }
    }
}

impl Scalar for Ball {
    fn from_rational(r: Rational) -> Self {
        Self::exact(r)
    }

    fn try_cmp(&self, other: &Self) -> Result<Ordering> {
        if self.radius.is_zero() && other.radius.is_zero() {
            return Ok(self.center.cmp(&other.center));
        }
        let gap = (&self.center - &other.center).abs();
        let spread = &self.radius + &other.radius;
        if gap > spread {
            Ok(self.center.cmp(&other.center))
        } else {
            Err(Error::UnresolvableComparison {
                precision_bits: self.join_precision(other),
            })
        }
    }

    fn as_rational(&self) -> Option<Rational> {
        if self.radius.is_zero() {
            Some(self.center.clone())
        } else {
            None
        }
    }

    fn approx_f64(&self) -> f64 {
        use num_traits::ToPrimitive;
        self.center.to_f64().unwrap_or(f64::NAN)
    }

    fn admits_zero(&self) -> bool {
        self.center.abs() <= self.radius
    }
}

//! Exact scalar arithmetic.
//!
//! Every numeric quantity in this crate — eigenvalues, eigenvector entries,
//! interval endpoints, generated sequence values — is carried by a type
//! implementing [`Scalar`]. The trait demands a field's worth of operations
//! plus a *fallible* comparison: exact representations always resolve, while
//! enclosure-based ones may report that the inputs are too coarse to order.
//!
//! Three implementations are provided, chosen per analysis by the algebraic
//! degree of the dominant eigenvalue:
//!
//! * [`Rational`] — arbitrary-precision rationals (degree 1),
//! * [`Quadratic`] — numbers a + b·√d with a, b rational (degree 2),
//! * [`Ball`] — a rational center with a rational error radius, rounded to
//!   a configurable number of dyadic bits (any degree; comparisons may fail
//!   and callers retry at doubled precision).

mod ball;
mod expr;
mod quadratic;
mod rational;

pub use ball::{Ball, DEFAULT_PRECISION_BITS, MAX_PRECISION_BITS};
pub use expr::parse_scalar;
pub use quadratic::Quadratic;
pub use rational::Rational;

use std::cmp::Ordering;
use std::fmt::{Debug, Display};
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_traits::{One, Zero};

use crate::error::Result;

/// An exact (or certified-enclosure) scalar usable throughout the pipeline.
///
/// Implementors form a field under the std ops bounds. Comparison is
/// fallible: [`Scalar::try_cmp`] returns an order when the representation
/// can certify one and an error otherwise, so algorithms built on it are
/// forced to handle the undecided case instead of silently misordering.
pub trait Scalar:
    Clone
    + PartialEq
    + Debug
    + Display
    + Zero
    + One
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
{
    /// Embeds an exact rational.
    fn from_rational(r: Rational) -> Self;

    /// Certified three-way comparison.
    ///
    /// # Errors
    ///
    /// [`crate::Error::UnresolvableComparison`] when the representation
    /// cannot separate the two values (only possible for enclosures).
    fn try_cmp(&self, other: &Self) -> Result<Ordering>;

    /// Returns the value as an exact rational if it provably is one.
    fn as_rational(&self) -> Option<Rational>;

    /// Nearest double, for human-readable output only.
    fn approx_f64(&self) -> f64;

    /// Whether the value is consistent with being exactly zero.
    ///
    /// Exact types answer `self == 0`; enclosures answer whether zero lies
    /// inside the ball. Used for invariant checks that must not fail merely
    /// because an enclosure is fuzzy.
    fn admits_zero(&self) -> bool {
        self.is_zero()
    }

    /// Embeds an integer.
    fn from_integer(n: i64) -> Self {
        Self::from_rational(Rational::from_integer(n.into()))
    }

    /// Embeds the rational `num/den`.
    ///
    /// # Panics
    ///
    /// Panics if `den == 0`.
    fn from_ratio(num: i64, den: i64) -> Self {
        Self::from_rational(Rational::new(num.into(), den.into()))
    }

    /// Certified strict less-than.
    ///
    /// # Errors
    ///
    /// Propagates [`Scalar::try_cmp`] failures.
    fn try_lt(&self, other: &Self) -> Result<bool> {
        Ok(self.try_cmp(other)? == Ordering::Less)
    }

    /// Certified less-or-equal.
    ///
    /// # Errors
    ///
    /// Propagates [`Scalar::try_cmp`] failures.
    fn try_le(&self, other: &Self) -> Result<bool> {
        Ok(self.try_cmp(other)? != Ordering::Greater)
    }

    /// Certified sign of the value.
    ///
    /// # Errors
    ///
    /// Propagates [`Scalar::try_cmp`] failures.
    fn try_sign(&self) -> Result<Ordering> {
        self.try_cmp(&Self::zero())
    }
}

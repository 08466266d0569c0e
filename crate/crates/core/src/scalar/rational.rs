//! Arbitrary-precision rational scalar.

use std::cmp::Ordering;

use num_traits::ToPrimitive;

use super::Scalar;
use crate::error::Result;

/// Exact rational number; the degree-one scalar.
pub type Rational = num_rational::BigRational;

impl Scalar for Rational {
    fn from_rational(r: Rational) -> Self {
        r
    }

    fn try_cmp(&self, other: &Self) -> Result<Ordering> {
        Ok(self.cmp(other))
    }

    fn as_rational(&self) -> Option<Rational> {
        Some(self.clone())
    }

    fn approx_f64(&self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }
}

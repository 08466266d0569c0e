//! Scalars of the form a + b·√d with a, b rational.
//!
//! Values are kept normalized: the radicand `d` is squarefree and at least 2
//! whenever the radical coefficient `b` is nonzero, and `d == 0` serves as
//! the marker for purely rational values. With `d` squarefree, √d is
//! irrational, so equality of the `(a, b, d)` triple coincides with equality
//! of the represented real number, and the sign of a + b·√d is decidable by
//! comparing a² with b²·d. All operations are exact.
//!
//! Values from *different* quadratic fields cannot be combined; the
//! arithmetic operators panic if asked to (see `unify`). Code paths that mix
//! user-supplied radicals check first and report
//! [`crate::Error::MixedRadicals`] instead.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_traits::{One, Signed, Zero};

use super::{Rational, Scalar};
use crate::error::Result;

/// An exact element of a real quadratic field ℚ(√d).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Quadratic {
    a: Rational,
    b: Rational,
    d: u64,
}

/// Splits `n` into `(f, r)` with `n = f²·r` and `r` squarefree.
fn squarefree_split(n: u64) -> (u64, u64) {
    let mut rest = n;
    let mut square = 1u64;
    let mut p = 2u64;
    while p.saturating_mul(p) <= rest {
        while rest % (p * p) == 0 {
            rest /= p * p;
            square *= p;
        }
        p += 1;
    }
    (square, rest)
}

impl Quadratic {
    /// Builds a + b·√d, normalizing the radicand.
    ///
    /// Square factors of `d` are folded into `b`; perfect squares (and
    /// `b == 0`, and `d ∈ {0, 1}`) collapse to a purely rational value.
    pub fn new(a: Rational, b: Rational, d: u64) -> Self {
        if b.is_zero() || d == 0 {
            return Self { a, b: Rational::zero(), d: 0 };
        }
        let (f, r) = squarefree_split(d);
        let b = b * Rational::from_integer(f.into());
        if r == 1 {
            Self { a: a + b, b: Rational::zero(), d: 0 }
        } else {
            Self { a, b, d: r }
        }
    }

    /// The square root of a nonnegative integer.
    pub fn sqrt_of(d: u64) -> Self {
        Self::new(Rational::zero(), Rational::one(), d)
    }

    /// Rational part.
    pub fn rational_part(&self) -> &Rational {
        &self.a
    }

    /// Coefficient of √d.
    pub fn radical_part(&self) -> &Rational {
        &self.b
    }

    /// The (squarefree) radicand, or 0 for purely rational values.
    pub fn radicand(&self) -> u64 {
        self.d
    }

    /// The common radicand for an operation, panicking on a genuine mix.
    fn unify(&self, other: &Self) -> u64 {
        match (self.d, other.d) {
            (0, y) => y,
            (x, 0) => x,
            (x, y) if x == y => x,
            (x, y) => panic!("cannot combine sqrt({x}) and sqrt({y}) exactly"),
        }
    }

    /// Sign of the represented real number.
    fn sign(&self) -> Ordering {
        if self.b.is_zero() {
            return self.a.cmp(&Rational::zero());
        }
        if self.a.is_zero() {
            return self.b.cmp(&Rational::zero());
        }
        let a_pos = self.a.is_positive();
        let b_pos = self.b.is_positive();
        if a_pos == b_pos {
            return if a_pos { Ordering::Greater } else { Ordering::Less };
        }
        // Signs differ: a + b·√d has the sign of the larger of a² and b²·d,
        // attributed to the term that carries it.
        let a_sq = self.a.clone() * self.a.clone();
        let bd_sq = self.b.clone() * self.b.clone() * Rational::from_integer(self.d.into());
        match a_sq.cmp(&bd_sq) {
            Ordering::Greater => {
                if a_pos {
                    Ordering::Greater
                } else {
                    Ordering::Less
                }
            }
            Ordering::Less => {
                if b_pos {
                    Ordering::Greater
                } else {
                    Ordering::Less
                }
            }
            // a² = b²·d with a, b nonzero is impossible for squarefree d ≥ 2.
            Ordering::Equal => unreachable!("radicand must be squarefree"),
        }
    }
}

impl Add for Quadratic {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        let d = self.unify(&rhs);
        Self::new(self.a + rhs.a, self.b + rhs.b, d)
    }
}

impl Sub for Quadratic {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        self + (-rhs)
    }
}

impl Neg for Quadratic {
    type Output = Self;
    fn neg(self) -> Self {
        Self { a: -self.a, b: -self.b, d: self.d }
    }
}

impl Mul for Quadratic {
    type Output = Self;
    fn mul(self, rhs: Self) -> Self {
        let d = self.unify(&rhs);
        let rad = Rational::from_integer(d.into());
        let a = self.a.clone() * rhs.a.clone() + self.b.clone() * rhs.b.clone() * rad;
        let b = self.a * rhs.b + self.b * rhs.a;
        Self::new(a, b, d)
    }
}

impl Div for Quadratic {
    type Output = Self;
    fn div(self, rhs: Self) -> Self {
        let d = self.unify(&rhs);
        let rad = Rational::from_integer(d.into());
        // Rationalize: norm(x + y√d) = x² − y²·d, zero only for x = y = 0.
        let norm = rhs.a.clone() * rhs.a.clone() - rhs.b.clone() * rhs.b.clone() * rad;
        assert!(!norm.is_zero(), "division by zero quadratic value");
        let conj = Self { a: rhs.a, b: -rhs.b, d };
        let prod = self * conj;
        Self::new(prod.a / norm.clone(), prod.b / norm, d)
    }
}

impl Zero for Quadratic {
    fn zero() -> Self {
        Self { a: Rational::zero(), b: Rational::zero(), d: 0 }
    }
    fn is_zero(&self) -> bool {
        self.a.is_zero() && self.b.is_zero()
    }
}

impl One for Quadratic {
    fn one() -> Self {
        Self { a: Rational::one(), b: Rational::zero(), d: 0 }
    }
}

impl fmt::Display for Quadratic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.b.is_zero() {
            return write!(f, "{}", self.a);
        }
        let mag = self.b.abs();
        let radical = if mag.is_one() {
            format!("sqrt({})", self.d)
        } else {
            format!("{}*sqrt({})", mag, self.d)
        };
        if self.a.is_zero() {
            if self.b.is_negative() {
                write!(f, "-{radical}")
            } else {
                write!(f, "{radical}")
            }
        } else if self.b.is_negative() {
            write!(f, "{}-{radical}", self.a)
        } else {
            write!(f, "{}+{radical}", self.a)
        }
    }
}

impl Scalar for Quadratic {
    fn from_rational(r: Rational) -> Self {
        Self { a: r, b: Rational::zero(), d: 0 }
    }

    fn try_cmp(&self, other: &Self) -> Result<Ordering> {
        Ok((self.clone() - other.clone()).sign())
    }

    fn as_rational(&self) -> Option<Rational> {
        if self.b.is_zero() {
            Some(self.a.clone())
        } else {
            None
        }
    }

    fn approx_f64(&self) -> f64 {
        use num_traits::ToPrimitive;
        let a = self.a.to_f64().unwrap_or(f64::NAN);
        let b = self.b.to_f64().unwrap_or(f64::NAN);
        a + b * (self.d as f64).sqrt()
    }
}

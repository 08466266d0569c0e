//! Exact univariate polynomial helpers for eigenvalue isolation.
//!
//! Polynomials are coefficient vectors, constant term first, with no
//! trailing zeros (the zero polynomial is the empty vector). Integer
//! polynomials come out of the characteristic-polynomial computation; the
//! Sturm machinery works over rationals. Everything here is exact — root
//! *isolation* is exact interval arithmetic even when the root itself is
//! irrational.

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::scalar::Rational;

pub(crate) type IPoly = Vec<BigInt>;
pub(crate) type RPoly = Vec<Rational>;

fn trim_r(p: &mut RPoly) {
    while p.last().is_some_and(Zero::is_zero) {
        p.pop();
    }
}

fn trim_i(p: &mut IPoly) {
    while p.last().is_some_and(Zero::is_zero) {
        p.pop();
    }
}

pub(crate) fn degree(p: &RPoly) -> usize {
    p.len().saturating_sub(1)
}

pub(crate) fn to_rational(p: &IPoly) -> RPoly {
    p.iter().map(|c| Rational::from_integer(c.clone())).collect()
}

pub(crate) fn eval_i(p: &IPoly, x: &Rational) -> Rational {
    let mut acc = Rational::zero();
    for c in p.iter().rev() {
        acc = acc * x + Rational::from_integer(c.clone());
    }
    acc
}

pub(crate) fn eval_r(p: &RPoly, x: &Rational) -> Rational {
    let mut acc = Rational::zero();
    for c in p.iter().rev() {
        acc = acc * x + c;
    }
    acc
}

pub(crate) fn derivative(p: &RPoly) -> RPoly {
    let mut out: RPoly = p
        .iter()
        .enumerate()
        .skip(1)
        .map(|(k, c)| c * Rational::from_integer(k.into()))
        .collect();
    trim_r(&mut out);
    out
}

/// Remainder of `a` divided by `b` (b nonzero).
fn poly_rem(a: &RPoly, b: &RPoly) -> RPoly {
    assert!(!b.is_empty(), "division by zero polynomial");
    let mut r = a.clone();
    let db = degree(b);
    let lead = b[db].clone();
    while r.len() > db && !r.is_empty() {
        let dr = degree(&r);
        let factor = r[dr].clone() / lead.clone();
        let shift = dr - db;
        for (k, c) in b.iter().enumerate() {
            let t = factor.clone() * c;
            r[k + shift] -= t;
        }
        trim_r(&mut r);
        if r.len() <= db {
            break;
        }
    }
    r
}

/// Monic greatest common divisor.
fn poly_gcd(a: &RPoly, b: &RPoly) -> RPoly {
    let (mut x, mut y) = (a.clone(), b.clone());
    trim_r(&mut x);
    trim_r(&mut y);
    while !y.is_empty() {
        let r = poly_rem(&x, &y);
        x = y;
        y = r;
    }
    if let Some(lead) = x.last().cloned() {
        for c in &mut x {
            *c /= lead.clone();
        }
    }
    x
}

/// Exact quotient of `a` by `b`; panics if the division is not exact.
fn poly_div_exact(a: &RPoly, b: &RPoly) -> RPoly {
    assert!(!b.is_empty(), "division by zero polynomial");
    let mut r = a.clone();
    let db = degree(b);
    let lead = b[db].clone();
    let mut q = vec![Rational::zero(); a.len().saturating_sub(db)];
    while r.len() > db {
        let dr = degree(&r);
        let factor = r[dr].clone() / lead.clone();
        let shift = dr - db;
        q[shift] = factor.clone();
        for (k, c) in b.iter().enumerate() {
            let t = factor.clone() * c;
            r[k + shift] -= t;
        }
        trim_r(&mut r);
    }
    assert!(r.is_empty(), "inexact polynomial division");
    trim_r(&mut q);
    q
}

/// The squarefree part p / gcd(p, p′), monic input assumed nonconstant.
pub(crate) fn squarefree_part(p: &RPoly) -> RPoly {
    let g = poly_gcd(p, &derivative(p));
    if degree(&g) == 0 {
        p.clone()
    } else {
        poly_div_exact(p, &g)
    }
}

/// Sturm chain of a squarefree polynomial.
pub(crate) fn sturm_chain(p: &RPoly) -> Vec<RPoly> {
    let mut chain = vec![p.clone(), derivative(p)];
    loop {
        let n = chain.len();
        if chain[n - 1].is_empty() {
            chain.pop();
            break;
        }
        if degree(&chain[n - 1]) == 0 {
            break;
        }
        let mut r = poly_rem(&chain[n - 2], &chain[n - 1]);
        for c in &mut r {
            *c = -c.clone();
        }
        chain.push(r);
    }
    chain
}

fn sign_variations(chain: &[RPoly], x: &Rational) -> usize {
    let mut variations = 0;
    let mut last: Option<bool> = None;
    for p in chain {
        let v = eval_r(p, x);
        if v.is_zero() {
            continue;
        }
        let pos = v.is_positive();
        if let Some(prev) = last {
            if prev != pos {
                variations += 1;
            }
        }
        last = Some(pos);
    }
    variations
}

/// Number of distinct real roots in (lo, hi], assuming the chain's head
/// does not vanish at either endpoint.
pub(crate) fn count_roots(chain: &[RPoly], lo: &Rational, hi: &Rational) -> usize {
    debug_assert!(!eval_r(&chain[0], lo).is_zero());
    debug_assert!(!eval_r(&chain[0], hi).is_zero());
    sign_variations(chain, lo) - sign_variations(chain, hi)
}

/// Characteristic polynomial of a square nonnegative integer matrix,
/// constant term first, monic. Uses the trace-based recurrence whose
/// divisions are exact over the integers.
pub(crate) fn char_poly(a: &[Vec<u64>]) -> IPoly {
    let q = a.len();
    let big: Vec<Vec<BigInt>> = a
        .iter()
        .map(|row| row.iter().map(|&x| BigInt::from(x)).collect())
        .collect();
    let mut coeffs = vec![BigInt::zero(); q + 1];
    coeffs[q] = BigInt::one();
    // m holds A·(M_{k-1} + c_{q-k+1} I) at step k; c_{q-k} = -tr(m)/k.
    let mut m = big.clone();
    for k in 1..=q {
        let tr: BigInt = (0..q).map(|i| m[i][i].clone()).sum();
        coeffs[q - k] = -tr / BigInt::from(k);
        if k == q {
            break;
        }
        let mut shifted = m.clone();
        for (i, row) in shifted.iter_mut().enumerate() {
            row[i] += &coeffs[q - k];
        }
        let mut next = vec![vec![BigInt::zero(); q]; q];
        for i in 0..q {
            for j in 0..q {
                for (l, s_row) in shifted.iter().enumerate() {
                    next[i][j] += &big[i][l] * &s_row[j];
                }
            }
        }
        m = next;
    }
    coeffs
}

/// Divides out every factor of x, returning the deflated polynomial.
pub(crate) fn deflate_zero_roots(mut p: IPoly) -> IPoly {
    trim_i(&mut p);
    let zeros = p.iter().take_while(|c| c.is_zero()).count();
    p.drain(..zeros);
    p
}

/// Strips all roots equal to integers in 1..=bound, returning the reduced
/// polynomial and the extracted roots (with multiplicity, ascending).
pub(crate) fn extract_integer_roots(mut p: IPoly, bound: u64) -> (IPoly, Vec<u64>) {
    let mut roots = Vec::new();
    for t in 1..=bound {
        let r = Rational::from_integer(t.into());
        while p.len() > 1 && eval_i(&p, &r).is_zero() {
            // Synthetic division by (x − t), exact for a root.
            let t_big = BigInt::from(t);
            let mut out = vec![BigInt::zero(); p.len() - 1];
            let mut carry = BigInt::zero();
            for k in (0..p.len() - 1).rev() {
                let c = &p[k + 1] + &carry;
                carry = &c * &t_big;
                out[k] = c;
            }
            debug_assert!((&p[0] + &carry).is_zero());
            p = out;
            roots.push(t);
        }
    }
    (p, roots)
}

/// Tests whether x² + bx + c divides `p` exactly.
pub(crate) fn divides_by_quadratic(p: &IPoly, b: &BigInt, c: &BigInt) -> bool {
    if p.len() < 3 {
        return false;
    }
    // Reduce in place: repeatedly cancel the leading term against the
    // monic divisor. What survives below degree 2 is the remainder.
    let mut rem = p.to_vec();
    for k in (2..rem.len()).rev() {
        let factor = std::mem::take(&mut rem[k]);
        if factor.is_zero() {
            continue;
        }
        let bf = b * &factor;
        let cf = c * &factor;
        rem[k - 1] -= bf;
        rem[k - 2] -= cf;
    }
    rem[0].is_zero() && rem[1].is_zero()
}

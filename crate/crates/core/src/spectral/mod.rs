//! Incidence matrices and their dominant eigendata, exactly.
//!
//! The incidence matrix of a substitution counts, in entry (i, j), the
//! occurrences of letter i in the image of letter j. For a primitive matrix
//! (some power strictly positive) the dominant eigenvalue θ is real, simple,
//! and exceeds the modulus of every other eigenvalue, and it has a strictly
//! positive eigenvector μ, normalized here to Σμ = 1. The pair (θ, μ) drives
//! the entire interval construction, so it is computed *exactly*:
//!
//! * θ rational (necessarily an integer, the matrix being integral and the
//!   characteristic polynomial monic) → [`Rational`] arithmetic;
//! * θ of degree two → [`Quadratic`] arithmetic in ℚ(√d);
//! * anything else → [`Ball`] enclosures at a requested precision.
//!
//! The classification is certified: the dominant root is isolated by Sturm
//! bisection, integer roots are stripped symbolically, and a candidate
//! quadratic factor is accepted only if it divides the characteristic
//! polynomial exactly and its root lies in the isolating interval.

mod poly;

use std::cmp::Ordering;

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::scalar::{Ball, Quadratic, Rational, Scalar};
use crate::word::Morphism;

/// Letter-occurrence counts of a substitution: entry (i, j) is the number
/// of times letter i occurs in the image of letter j.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IncidenceMatrix {
    counts: Vec<Vec<u64>>,
}

/// Outcome of the primitivity test.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Primitivity {
    /// Whether some power of the matrix is strictly positive.
    pub primitive: bool,
    /// The least such power, when one exists within the search bound
    /// (q − 1)² + 1, which is sufficient for every primitive matrix.
    pub witness: Option<usize>,
}

impl IncidenceMatrix {
    /// Counts letter occurrences across the images of `m`.
    pub fn from_morphism(m: &Morphism) -> Self {
        let q = m.alphabet_size();
        let mut counts = vec![vec![0u64; q]; q];
        for j in 0..q {
            for &c in m.image(j as u8) {
                counts[usize::from(c)][j] += 1;
            }
        }
        Self { counts }
    }

    /// Alphabet size q.
    pub fn alphabet_size(&self) -> usize {
        self.counts.len()
    }

    /// Occurrences of letter `i` in the image of letter `j`.
    pub fn entry(&self, i: usize, j: usize) -> u64 {
        self.counts[i][j]
    }

    /// Column sums, i.e. the image lengths of each letter.
    pub fn column_sums(&self) -> Vec<u64> {
        let q = self.alphabet_size();
        (0..q)
            .map(|j| (0..q).map(|i| self.counts[i][j]).sum())
            .collect()
    }

    /// Decides primitivity by powering the boolean support matrix up to
    /// the universal bound (q − 1)² + 1.
    pub fn primitivity(&self) -> Primitivity {
        let q = self.alphabet_size();
        let bound = (q - 1) * (q - 1) + 1;
        let support: Vec<Vec<bool>> = self
            .counts
            .iter()
            .map(|row| row.iter().map(|&c| c > 0).collect())
            .collect();
        let mut power = support.clone();
        for n in 1..=bound {
            if power.iter().all(|row| row.iter().all(|&b| b)) {
                return Primitivity { primitive: true, witness: Some(n) };
            }
            let mut next = vec![vec![false; q]; q];
            for i in 0..q {
                for l in 0..q {
                    if power[i][l] {
                        for j in 0..q {
                            if support[l][j] {
                                next[i][j] = true;
                            }
                        }
                    }
                }
            }
            power = next;
        }
        Primitivity { primitive: false, witness: None }
    }

    /// Coefficients of det(xI − A), constant term first, monic.
    pub fn characteristic_polynomial(&self) -> Vec<BigInt> {
        poly::char_poly(&self.counts)
    }
}

/// Dominant eigenvalue θ and its positive eigenvector μ with Σμ = 1.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectralData<S> {
    /// Dominant eigenvalue.
    pub theta: S,
    /// Positive eigenvector, normalized to sum 1, indexed by letter.
    pub mu: Vec<S>,
}

/// Exact dominant eigendata in the cheapest sufficient arithmetic.
#[derive(Debug, Clone, PartialEq)]
pub enum PerronData {
    /// θ is an integer; everything stays rational.
    Rational(SpectralData<Rational>),
    /// θ has degree two; everything lives in one real quadratic field.
    Quadratic(SpectralData<Quadratic>),
    /// θ has degree three or more (or its discriminant overflows);
    /// certified enclosures at the precision used to build them.
    Ball(SpectralData<Ball>),
}

impl PerronData {
    /// The dominant eigenvalue as a double, for display.
    pub fn theta_approx(&self) -> f64 {
        match self {
            PerronData::Rational(s) => s.theta.approx_f64(),
            PerronData::Quadratic(s) => s.theta.approx_f64(),
            PerronData::Ball(s) => s.theta.approx_f64(),
        }
    }

    /// A short label for the arithmetic in use.
    pub fn arithmetic_name(&self) -> &'static str {
        match self {
            PerronData::Rational(_) => "rational",
            PerronData::Quadratic(_) => "quadratic",
            PerronData::Ball(_) => "ball",
        }
    }
}

/// How the dominant root was classified, before eigenvector extraction.
enum ThetaValue {
    Rational(Rational),
    Quadratic(Quadratic),
    /// Isolating interval (lo, hi) for a root of degree ≥ 3, along with the
    /// squarefree polynomial it is the unique root of in that interval.
    Isolated { lo: Rational, hi: Rational, sf: poly::RPoly },
}

fn half(x: &Rational) -> Rational {
    x / Rational::from_integer(2.into())
}

/// Bisects the sign-changing interval (lo, hi) of `sf` until its width is
/// at most `eps`. Requires sf(lo) and sf(hi) to have opposite signs.
fn bisect_to(sf: &poly::RPoly, lo: &mut Rational, hi: &mut Rational, eps: &Rational) {
    let lo_neg = poly::eval_r(sf, lo).is_negative();
    while &(&*hi - &*lo) > eps {
        let mid = half(&(&*lo + &*hi));
        let v = poly::eval_r(sf, &mid);
        debug_assert!(!v.is_zero(), "bisection landed on a rational root");
        if v.is_negative() == lo_neg {
            *lo = mid;
        } else {
            *hi = mid;
        }
    }
}

/// Classifies the dominant eigenvalue of a primitive matrix exactly.
fn classify_theta(a: &IncidenceMatrix) -> ThetaValue {
    let cp = a.characteristic_polynomial();
    let max_col = a.column_sums().into_iter().max().unwrap_or(1).max(1);
    let reduced = poly::deflate_zero_roots(cp);
    let (reduced, int_roots) = poly::extract_integer_roots(reduced, max_col);
    let best_int = int_roots.last().copied();

    let isolated = if reduced.len() <= 1 {
        None
    } else {
        // After integer-root extraction a monic integer polynomial has no
        // rational roots at all, so every rational endpoint below is safe.
        let sf = poly::squarefree_part(&poly::to_rational(&reduced));
        let chain = poly::sturm_chain(&sf);
        let mut lo = <Rational as Scalar>::from_ratio(1, 2);
        let mut hi = Rational::from_integer(BigInt::from(max_col) + BigInt::one());
        if poly::count_roots(&chain, &lo, &hi) == 0 {
            None
        } else {
            // Narrow (lo, hi) until it contains exactly the largest root.
            while poly::count_roots(&chain, &lo, &hi) > 1 {
                let mid = half(&(&lo + &hi));
                if poly::count_roots(&chain, &mid, &hi) >= 1 {
                    lo = mid;
                } else {
                    hi = mid;
                }
            }
            Some((lo, hi, sf))
        }
    };

    let (mut lo, mut hi, sf) = match (isolated, best_int) {
        (None, Some(m)) => return ThetaValue::Rational(Rational::from_integer(m.into())),
        (None, None) => {
            unreachable!("a primitive matrix has a real dominant eigenvalue ≥ 1")
        }
        (Some((lo, hi, sf)), None) => (lo, hi, sf),
        (Some((mut lo, mut hi, sf)), Some(m)) => {
            // Decide whether the integer root or the isolated irrational
            // root is larger; the two can never be equal.
            let m_rat = Rational::from_integer(m.into());
            loop {
                if hi <= m_rat {
                    return ThetaValue::Rational(m_rat);
                }
                if lo >= m_rat {
                    break (lo, hi, sf);
                }
                let eps = half(&(&hi - &lo));
                bisect_to(&sf, &mut lo, &mut hi, &eps);
            }
        }
    };

    // Try to recognize a quadratic root: refine until the conjugate data is
    // pinned, then recover the unique integer candidate (b, c) with
    // θ² + bθ + c = 0 and test exact divisibility.
    let b_bound = (BigInt::from(2) * hi.ceil().to_integer()).to_i64().unwrap_or(0);
    let eps = Rational::new(BigInt::one(), BigInt::from(16) * hi.ceil().to_integer().pow(2));
    bisect_to(&sf, &mut lo, &mut hi, &eps);
    let mid = half(&(&lo + &hi));
    for b in -b_bound..=b_bound {
        let b_big = BigInt::from(b);
        let c_exact = -(&mid * &mid) - Rational::from_integer(b_big.clone()) * &mid;
        let c_big = c_exact.round().to_integer();
        if !poly::divides_by_quadratic(&reduced, &b_big, &c_big) {
            continue;
        }
        let disc = &b_big * &b_big - BigInt::from(4) * &c_big;
        let Some(d) = disc.to_u64() else { continue };
        let root = Quadratic::new(
            Rational::new(-b_big, BigInt::from(2)),
            <Rational as Scalar>::from_ratio(1, 2),
            d,
        );
        if root.as_rational().is_some() {
            continue; // Perfect-square discriminant: not a new field.
        }
        let lo_q = Quadratic::from_rational(lo.clone());
        let hi_q = Quadratic::from_rational(hi.clone());
        let in_range = root.try_cmp(&lo_q).map(|o| o == Ordering::Greater).unwrap_or(false)
            && root.try_cmp(&hi_q).map(|o| o == Ordering::Less).unwrap_or(false);
        if in_range {
            return ThetaValue::Quadratic(root);
        }
    }

    ThetaValue::Isolated { lo, hi, sf }
}

/// Solves for the eigenvector of θ with Σμ = 1.
///
/// Because the left dominant eigenvector is strictly positive, every row of
/// A − θI lies in the span of the others, so dropping the last row loses
/// nothing; replacing it with the normalization row (1, …, 1) = 1 yields a
/// nonsingular square system whose unique solution is μ. Solving a square
/// system with certified-nonzero pivots keeps enclosure arithmetic sound:
/// the interval result contains the point solution without any rank
/// decisions on fuzzy entries.
///
/// # Errors
///
/// [`Error::SingularSystem`] if a pivot is provably zero or the result is
/// not strictly positive; [`Error::UnresolvableComparison`] from enclosure
/// entries too coarse to certify a pivot (retry with more precision).
pub fn eigenvector<S: Scalar>(a: &IncidenceMatrix, theta: &S) -> Result<Vec<S>> {
    let q = a.alphabet_size();
    let mut m: Vec<Vec<S>> = (0..q)
        .map(|i| {
            (0..q)
                .map(|j| {
                    if i == q - 1 {
                        return S::one();
                    }
                    let entry = S::from_integer(
                        i64::try_from(a.entry(i, j)).expect("entry fits in i64"),
                    );
                    if i == j {
                        entry - theta.clone()
                    } else {
                        entry
                    }
                })
                .collect()
        })
        .collect();
    let mut rhs: Vec<S> = (0..q)
        .map(|i| if i == q - 1 { S::one() } else { S::zero() })
        .collect();

    for col in 0..q {
        let mut best: Option<(usize, f64)> = None;
        let mut undecided: Option<Error> = None;
        for (r, row) in m.iter().enumerate().skip(col) {
            match row[col].try_sign() {
                Ok(Ordering::Equal) => {}
                Ok(_) => {
                    let score = row[col].approx_f64().abs();
                    if best.is_none_or(|(_, s)| score > s) {
                        best = Some((r, score));
                    }
                }
                Err(e) => undecided = Some(e),
            }
        }
        let Some((r, _)) = best else {
            return Err(undecided.unwrap_or(Error::SingularSystem));
        };
        m.swap(col, r);
        rhs.swap(col, r);
        for below in col + 1..q {
            let factor = m[below][col].clone() / m[col][col].clone();
            for c in col + 1..q {
                let t = factor.clone() * m[col][c].clone();
                m[below][c] = m[below][c].clone() - t;
            }
            let t = factor * rhs[col].clone();
            rhs[below] = rhs[below].clone() - t;
        }
    }

    let mut mu = vec![S::zero(); q];
    for i in (0..q).rev() {
        let mut acc = rhs[i].clone();
        for j in i + 1..q {
            acc = acc - m[i][j].clone() * mu[j].clone();
        }
        mu[i] = acc / m[i][i].clone();
    }

    for v in &mu {
        match v.try_sign() {
            Ok(Ordering::Greater) => {}
            Ok(_) => return Err(Error::SingularSystem),
            Err(e) => return Err(e),
        }
    }
    // Residual check: every row of Aμ − θμ must be consistent with zero.
    for i in 0..q {
        let mut acc = S::zero();
        for (j, v) in mu.iter().enumerate() {
            let entry =
                S::from_integer(i64::try_from(a.entry(i, j)).expect("entry fits in i64"));
            acc = acc + entry * v.clone();
        }
        let residual = acc - theta.clone() * mu[i].clone();
        if !residual.admits_zero() {
            return Err(Error::SingularSystem);
        }
    }
    Ok(mu)
}

/// Computes exact dominant eigendata for a primitive matrix, selecting the
/// cheapest sufficient arithmetic.
///
/// `precision_bits` only matters when the eigenvalue is neither rational
/// nor quadratic and enclosures must be built.
///
/// # Errors
///
/// [`Error::NotPrimitive`] if the matrix is not primitive;
/// [`Error::UnresolvableComparison`] if enclosure arithmetic at
/// `precision_bits` cannot certify the eigenvector (retry with more bits);
/// [`Error::SingularSystem`] on violated rank expectations.
pub fn perron_data(a: &IncidenceMatrix, precision_bits: u32) -> Result<PerronData> {
    if !a.primitivity().primitive {
        return Err(Error::NotPrimitive);
    }
    match classify_theta(a) {
        ThetaValue::Rational(theta) => {
            let mu = eigenvector(a, &theta)?;
            Ok(PerronData::Rational(SpectralData { theta, mu }))
        }
        ThetaValue::Quadratic(theta) => {
            let mu = eigenvector(a, &theta)?;
            Ok(PerronData::Quadratic(SpectralData { theta, mu }))
        }
        ThetaValue::Isolated { lo, hi, sf } => {
            let data = ball_data_from_interval(a, lo, hi, &sf, precision_bits)?;
            Ok(PerronData::Ball(data))
        }
    }
}

/// Computes dominant eigendata in enclosure arithmetic regardless of the
/// eigenvalue's degree. Useful for cross-checking the exact paths.
///
/// # Errors
///
/// As for [`perron_data`].
pub fn perron_ball(a: &IncidenceMatrix, precision_bits: u32) -> Result<SpectralData<Ball>> {
    if !a.primitivity().primitive {
        return Err(Error::NotPrimitive);
    }
    match classify_theta(a) {
        ThetaValue::Rational(theta) => {
            let theta = Ball::exact(theta).with_precision(precision_bits);
            let mu = eigenvector(a, &theta)?;
            Ok(SpectralData { theta, mu })
        }
        ThetaValue::Quadratic(q) => {
            let radical = Ball::sqrt_of(q.radicand(), precision_bits)
                * Ball::exact(q.radical_part().clone());
            let theta = (Ball::exact(q.rational_part().clone()) + radical)
                .with_precision(precision_bits);
            let mu = eigenvector(a, &theta)?;
            Ok(SpectralData { theta, mu })
        }
        ThetaValue::Isolated { lo, hi, sf } => {
            ball_data_from_interval(a, lo, hi, sf.as_slice(), precision_bits)
        }
    }
}

fn ball_data_from_interval(
    a: &IncidenceMatrix,
    mut lo: Rational,
    mut hi: Rational,
    sf: &[Rational],
    precision_bits: u32,
) -> Result<SpectralData<Ball>> {
    let sf = sf.to_vec();
    let eps = Rational::new(BigInt::one(), BigInt::one() << (precision_bits + 2));
    bisect_to(&sf, &mut lo, &mut hi, &eps);
    let center = half(&(&lo + &hi));
    let radius = half(&(&hi - &lo));
    let theta = Ball::with_radius(center, radius, precision_bits);
    let mu = eigenvector(a, &theta)?;
    Ok(SpectralData { theta, mu })
}

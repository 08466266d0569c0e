//! Exact interval dynamics of primitive substitutions.
//!
//! A primitive substitution φ on a finite alphabet fixes an infinite word
//! u = φ(u). When the shifts of u are pairwise comparable in the
//! lexicographic order, ranking the first n of them defines a permutation
//! of {1, …, n} for every n — an infinite permutation generated by the
//! word. This crate computes that object exactly and studies it from four
//! directions:
//!
//! - [`word`] grows fixed points lazily and compares shifts
//!   letter-by-letter to arbitrary (capped) depth.
//! - [`spectral`] finds the Perron–Frobenius root θ and left eigenvector μ
//!   of the incidence matrix in the cheapest exact arithmetic that holds
//!   them: rational, real quadratic, or ball enclosures of the algebraic
//!   root.
//! - [`order`] sorts the position types (a, p) — "the letter at this
//!   position is letter p of φ(a)" — by the lexicographic order of the
//!   shifts starting there, decides whether that order is well defined,
//!   and checks the morphism's monotonicity on infinite words.
//! - [`interval`] builds the induced interval system: letter intervals of
//!   lengths μ_a, type subintervals of lengths μ_a/θ arranged in the type
//!   order, and the contracting affine maps between them. Iterating the
//!   maps from the construction's fixed point yields one canonical real
//!   value per shift whose relative order reproduces the permutation —
//!   values are certificates, ranks are the theorem.
//! - [`perm`] turns value sequences or shift comparisons into explicit
//!   finite permutations (duplicates are detected, never tolerated) and
//!   counts distinct window patterns.
//! - [`ergodic`] bounds factor frequencies by sliding-window envelopes and
//!   brackets canonical values by frequency sums, the quantitative face of
//!   unique ergodicity.
//! - [`sturmian`] generates exact circle-rotation orbits and cross-checks
//!   the golden-mean pipeline against the rotation formula, value for
//!   value.
//!
//! Everything is exact: no float enters any comparison. The scalar
//! backends live in [`scalar`] behind the [`Scalar`] trait, and every
//! comparison is fallible — ball arithmetic reports when its precision
//! cannot resolve an ordering instead of guessing.
//!
//! # Example
//!
//! Rank the first eight shifts of the Thue–Morse word both ways:
//!
//! ```
//! use permulex_core::interval::{build_interval_morphism, canonical_prefix};
//! use permulex_core::order::type_order;
//! use permulex_core::perm::{permutation_from_values, valid_permutation_prefix};
//! use permulex_core::spectral::{perron_data, IncidenceMatrix, PerronData};
//! use permulex_core::word::{Morphism, WordStream, DEFAULT_DEPTH_CAP};
//!
//! let m = Morphism::new(vec![vec![0, 1], vec![1, 0]]).unwrap();
//! let mut stream = WordStream::new(m.clone(), 0).unwrap();
//!
//! // Directly, by comparing shifts of the fixed point.
//! let by_shifts = valid_permutation_prefix(&mut stream, 8, DEFAULT_DEPTH_CAP).unwrap();
//!
//! // Through the interval construction, by ranking canonical values.
//! let spectral = match perron_data(&IncidenceMatrix::from_morphism(&m), 256).unwrap() {
//!     PerronData::Rational(s) => s,
//!     _ => unreachable!("Thue–Morse has rational spectral data"),
//! };
//! let table = type_order(&mut stream, 1 << 10, 1 << 10).unwrap();
//! let im = build_interval_morphism(&m, 0, &spectral, &table).unwrap();
//! let values = canonical_prefix(&im, 8).unwrap();
//! let by_values = permutation_from_values(&values).unwrap();
//!
//! assert_eq!(by_shifts, by_values);
//! ```

pub mod ergodic;
pub mod error;
pub mod interval;
pub mod order;
pub mod perm;
pub mod scalar;
pub mod spectral;
pub mod sturmian;
pub mod word;

pub use error::{Error, Result};
pub use scalar::{Ball, Quadratic, Rational, Scalar};

/// Interval system over exact rationals (integer Perron root).
pub type RationalIntervals = interval::IntervalMorphism<Rational>;
/// Interval system over a real quadratic field ℚ(√d).
pub type QuadraticIntervals = interval::IntervalMorphism<Quadratic>;
/// Interval system over ball enclosures (any algebraic Perron root).
pub type BallIntervals = interval::IntervalMorphism<Ball>;

//! Crate-wide error type.
//!
//! Every fallible operation in this crate returns [`Error`]. The variants
//! split into three families: structural rejections (bad morphism, seed that
//! does not extend), honest "could not decide" outcomes (comparison depth
//! exhausted, ball arithmetic too coarse), and violated preconditions
//! detected at runtime (missing type, duplicate value).

use std::fmt;

/// Errors produced by constructions and decision procedures in this crate.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Error {
    /// The substitution is structurally invalid: wrong number of images,
    /// an empty image, or a letter outside the alphabet.
    InvalidMorphism(String),
    /// The seed letter does not generate an infinite fixed point
    /// (its image must start with the seed and have length at least two).
    NonExtensible { seed: u8 },
    /// A shift was compared against itself.
    IdenticalShifts { index: usize },
    /// Two shifted sequences agreed letter-for-letter up to the depth cap.
    ComparisonExhausted { i: usize, j: usize, depth: usize },
    /// The incidence matrix is not primitive, so no Perron data exists.
    NotPrimitive,
    /// A total order on position types could not be established.
    NotSeparable(String),
    /// A position type has no occurrence within the examined prefix.
    TypeMissing { letter: u8, index: usize },
    /// Two values compared equal where distinct values were required.
    DuplicateValue { i: usize, j: usize },
    /// A rank vector is not a permutation of 1..=n.
    InvalidPermutation(String),
    /// Ball arithmetic could not resolve a comparison at this precision.
    UnresolvableComparison { precision_bits: u32 },
    /// A linear system expected to have a one-dimensional kernel did not.
    SingularSystem,
    /// The interval lengths derived from the eigenvector do not tile the
    /// unit interval consistently with the type order.
    TilingMismatch(String),
    /// A value landed exactly on an interval endpoint that the layout's
    /// orientation excludes, or outside the layout's range entirely.
    EndpointHit(String),
    /// The requested factor does not occur in the scanned prefix.
    FactorAbsent { factor: String },
    /// Rotation parameters require an irrational step.
    RationalSigma,
    /// Rotation parameters outside their ranges (0 < σ < 1, 0 ≤ ρ < 1).
    InvalidRotation(String),
    /// An expression mixes two distinct radicals, which this scalar type
    /// cannot represent.
    MixedRadicals { left: u64, right: u64 },
    /// A scalar expression failed to parse.
    ParseScalar(String),
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::InvalidMorphism(msg) => write!(f, "invalid morphism: {msg}"),
            Error::NonExtensible { seed } => write!(
                f,
                "seed letter {seed} does not extend to an infinite fixed point"
            ),
            Error::IdenticalShifts { index } => {
                write!(f, "shift {index} compared against itself")
            }
            Error::ComparisonExhausted { i, j, depth } => write!(
                f,
                "shifts {i} and {j} agree to depth {depth}; comparison exhausted"
            ),
            Error::NotPrimitive => write!(f, "incidence matrix is not primitive"),
            Error::NotSeparable(msg) => write!(f, "type order unavailable: {msg}"),
            Error::TypeMissing { letter, index } => write!(
                f,
                "position type ({letter},{index}) does not occur in the examined prefix"
            ),
            Error::DuplicateValue { i, j } => {
                write!(f, "values at indices {i} and {j} are equal")
            }
            Error::InvalidPermutation(msg) => write!(f, "invalid permutation: {msg}"),
            Error::UnresolvableComparison { precision_bits } => write!(
                f,
                "comparison unresolvable at {precision_bits} bits of precision"
            ),
            Error::SingularSystem => {
                write!(f, "eigenvector system does not have a one-dimensional kernel")
            }
            Error::TilingMismatch(msg) => write!(f, "interval tiling mismatch: {msg}"),
            Error::EndpointHit(msg) => write!(f, "interval endpoint hit: {msg}"),
            Error::FactorAbsent { factor } => {
                write!(f, "factor \"{factor}\" does not occur in the scanned prefix")
            }
            Error::RationalSigma => write!(f, "rotation step must be irrational"),
            Error::InvalidRotation(msg) => write!(f, "invalid rotation: {msg}"),
            Error::MixedRadicals { left, right } => write!(
                f,
                "cannot combine sqrt({left}) with sqrt({right}) in one quadratic value"
            ),
            Error::ParseScalar(msg) => write!(f, "cannot parse scalar: {msg}"),
        }
    }
}

impl std::error::Error for Error {}

/// Convenience alias used across the crate.
pub type Result<T> = std::result::Result<T, Error>;

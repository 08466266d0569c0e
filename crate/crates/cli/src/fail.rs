//! Abnormal exits with stable codes and machine-readable reasons.
//!
//! Every failure path funnels into a [`Failure`]: an exit code from the
//! fixed contract below, a short reason slug, and structured detail. The
//! binary prints the JSON rendering to stderr and exits with the code, so
//! scripts can branch on either.

use permulex_core::Error;
use serde_json::{json, Value};

/// Rejected input: unreadable/invalid spec files, bad parameters.
pub const EXIT_VALIDATION: i32 = 2;
/// The construction provably does not apply to this morphism.
pub const EXIT_REJECTION: i32 = 3;
/// A verification check found a mismatch.
pub const EXIT_VERIFICATION: i32 = 4;
/// Arithmetic gave out: precision or comparison depth exhausted.
pub const EXIT_EXHAUSTION: i32 = 5;

/// One abnormal exit: code, stable reason slug, structured detail.
#[derive(Debug)]
pub struct Failure {
    pub code: i32,
    pub reason: String,
    pub detail: Value,
    /// Whether retrying at higher precision could change the outcome.
    pub retryable: bool,
}

impl Failure {
    pub fn validation(reason: &str, detail: Value) -> Self {
        Failure { code: EXIT_VALIDATION, reason: reason.to_string(), detail, retryable: false }
    }

    pub fn rejection(reason: &str, detail: Value) -> Self {
        Failure { code: EXIT_REJECTION, reason: reason.to_string(), detail, retryable: false }
    }

    pub fn exhaustion(reason: &str, detail: Value) -> Self {
        Failure { code: EXIT_EXHAUSTION, reason: reason.to_string(), detail, retryable: false }
    }

    pub fn verification(reason: &str, detail: Value) -> Self {
        Failure { code: EXIT_VERIFICATION, reason: reason.to_string(), detail, retryable: false }
    }

    /// The single-line JSON printed to stderr.
    pub fn render(&self) -> String {
        json!({ "error": self.reason, "detail": self.detail }).to_string()
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let message = e.to_string();
        match e {
            Error::InvalidMorphism(_) => {
                Failure::validation("invalid-morphism", json!({ "message": message }))
            }
            Error::NonExtensible { seed } => Failure::validation(
                "non-extensible-seed",
                json!({ "seed": seed, "message": message }),
            ),
            Error::ParseScalar(_) => {
                Failure::validation("invalid-scalar", json!({ "message": message }))
            }
            Error::MixedRadicals { left, right } => Failure::validation(
                "mixed-radicals",
                json!({ "left": left, "right": right, "message": message }),
            ),
            Error::InvalidRotation(_) => {
                Failure::validation("invalid-rotation", json!({ "message": message }))
            }
            Error::RationalSigma => {
                Failure::validation("rational-sigma", json!({ "message": message }))
            }
            Error::TypeMissing { letter, index } => Failure::validation(
                "prefix-too-short",
                json!({ "letter": letter, "index": index, "message": message }),
            ),
            Error::FactorAbsent { factor } => {
                Failure::validation("factor-absent", json!({ "factor": factor }))
            }
            Error::NotPrimitive => {
                Failure::rejection("not-primitive", json!({ "message": message }))
            }
            Error::NotSeparable(_) => {
                Failure::rejection("inseparable", json!({ "message": message }))
            }
            Error::IdenticalShifts { index } => Failure::rejection(
                "identical-shifts",
                json!({ "index": index, "message": message }),
            ),
            Error::DuplicateValue { i, j } => Failure::rejection(
                "duplicate-values",
                json!({ "first": i, "second": j, "message": message }),
            ),
            Error::ComparisonExhausted { i, j, depth } => Failure::exhaustion(
                "depth-exhausted",
                json!({ "left": i, "right": j, "depth": depth }),
            ),
            Error::UnresolvableComparison { precision_bits } => Failure {
                code: EXIT_EXHAUSTION,
                reason: "precision-exhausted".to_string(),
                detail: json!({ "precision_bits": precision_bits }),
                retryable: true,
            },
            Error::SingularSystem
            | Error::EndpointHit(_)
            | Error::InvalidPermutation(_)
            | Error::TilingMismatch(_) => {
                Failure::exhaustion("internal", json!({ "message": message }))
            }
        }
    }
}

//! Morphism spec files: a small JSON format naming a substitution by its
//! images over a digit alphabet.
//!
//! ```json
//! { "name": "thue-morse", "alphabet_size": 2,
//!   "images": ["01", "10"], "seed": 0 }
//! ```
//!
//! Letters are the digits `0..alphabet_size`; an optional `"power": k`
//! replaces the morphism by its k-th iterate before any analysis.

use std::fs;
use std::path::Path;

use permulex_core::word::Morphism;
use serde::{Deserialize, Serialize};
use serde_json::json;

use crate::fail::Failure;

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MorphismSpec {
    pub name: String,
    pub alphabet_size: usize,
    pub images: Vec<String>,
    pub seed: u8,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub power: Option<usize>,
}

impl MorphismSpec {
    /// Reads, parses, and validates a spec file.
    pub fn load(path: &Path) -> Result<Self, Failure> {
        let text = fs::read_to_string(path).map_err(|e| {
            Failure::validation(
                "unreadable-spec",
                json!({ "path": path.display().to_string(), "message": e.to_string() }),
            )
        })?;
        let spec: MorphismSpec = serde_json::from_str(&text).map_err(|e| {
            Failure::validation(
                "invalid-spec",
                json!({
                    "path": path.display().to_string(),
                    "line": e.line(),
                    "column": e.column(),
                    "message": e.to_string(),
                }),
            )
        })?;
        spec.validate()?;
        Ok(spec)
    }

    /// Structural checks beyond JSON shape: alphabet within digits, one
    /// image per letter over that alphabet, seed and power in range.
    pub fn validate(&self) -> Result<(), Failure> {
        let fail = |field: &str, message: String| {
            Err(Failure::validation(
                "invalid-spec",
                json!({ "field": field, "message": message }),
            ))
        };
        if !(1..=10).contains(&self.alphabet_size) {
            return fail(
                "alphabet_size",
                format!("{} is outside 1..=10 (letters are digits)", self.alphabet_size),
            );
        }
        if self.images.len() != self.alphabet_size {
            return fail(
                "images",
                format!("expected {} images, found {}", self.alphabet_size, self.images.len()),
            );
        }
        for (a, image) in self.images.iter().enumerate() {
            if image.is_empty() {
                return fail("images", format!("image of {a} is empty"));
            }
            for c in image.chars() {
                match c.to_digit(10) {
                    Some(d) if (d as usize) < self.alphabet_size => {}
                    _ => {
                        return fail(
                            "images",
                            format!(
                                "image of {a} contains {c:?}; letters are digits below {}",
                                self.alphabet_size
                            ),
                        )
                    }
                }
            }
        }
        if (self.seed as usize) >= self.alphabet_size {
            return fail(
                "seed",
                format!("seed {} is not a letter below {}", self.seed, self.alphabet_size),
            );
        }
        if self.power == Some(0) {
            return fail("power", "power must be at least 1".to_string());
        }
        Ok(())
    }

    /// The morphism exactly as written, without the power applied.
    pub fn base_morphism(&self) -> Result<Morphism, Failure> {
        let images = self
            .images
            .iter()
            .map(|image| image.chars().map(|c| c.to_digit(10).unwrap() as u8).collect())
            .collect();
        Morphism::new(images).map_err(Failure::from)
    }

    /// The morphism with the spec's power applied, and that power.
    pub fn effective_morphism(&self) -> Result<(Morphism, usize), Failure> {
        let base = self.base_morphism()?;
        let power = self.power.unwrap_or(1);
        Ok((base.power(power).map_err(Failure::from)?, power))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fail::EXIT_VALIDATION;

    fn parse(text: &str) -> Result<MorphismSpec, Failure> {
        let spec: MorphismSpec = serde_json::from_str(text)
            .map_err(|e| Failure::validation("invalid-spec", json!({ "message": e.to_string() })))?;
        spec.validate()?;
        Ok(spec)
    }

    #[test]
    fn a_complete_spec_parses() {
        let spec = parse(
            r#"{"name":"thue-morse","alphabet_size":2,"images":["01","10"],"seed":0}"#,
        )
        .unwrap();
        assert_eq!(spec.name, "thue-morse");
        let (m, power) = spec.effective_morphism().unwrap();
        assert_eq!(power, 1);
        assert_eq!(m.image(0), &[0, 1]);
        assert_eq!(m.image(1), &[1, 0]);
    }

    #[test]
    fn power_is_applied() {
        let spec = parse(
            r#"{"name":"fib2","alphabet_size":2,"images":["01","0"],"seed":0,"power":2}"#,
        )
        .unwrap();
        let (m, power) = spec.effective_morphism().unwrap();
        assert_eq!(power, 2);
        assert_eq!(m.image(0), &[0, 1, 0]);
        assert_eq!(m.image(1), &[0, 1]);
    }

    #[test]
    fn structural_mistakes_are_validation_failures() {
        let cases = [
            // Missing one image.
            r#"{"name":"x","alphabet_size":2,"images":["01"],"seed":0}"#,
            // Letter outside the alphabet.
            r#"{"name":"x","alphabet_size":2,"images":["01","20"],"seed":0}"#,
            // Empty image.
            r#"{"name":"x","alphabet_size":2,"images":["01",""],"seed":0}"#,
            // Seed outside the alphabet.
            r#"{"name":"x","alphabet_size":2,"images":["01","10"],"seed":2}"#,
            // Zero power.
            r#"{"name":"x","alphabet_size":2,"images":["01","10"],"seed":0,"power":0}"#,
            // Alphabet too large for digit letters.
            r#"{"name":"x","alphabet_size":11,"images":[],"seed":0}"#,
            // Unknown field.
            r#"{"name":"x","alphabet_size":2,"images":["01","10"],"seed":0,"extra":1}"#,
            // Missing required fields.
            r#"{"alphabet_size":2,"images":["01","10"]}"#,
        ];
        for text in cases {
            let failure = parse(text).unwrap_err();
            assert_eq!(failure.code, EXIT_VALIDATION, "{text}");
        }
    }
}

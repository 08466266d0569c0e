//! Checks behind `permulex verify`: oracle comparison, canonicality,
//! distribution statistics, ergodicity envelopes, and the optional
//! rotation cross-check.

use std::collections::HashMap;

use serde::Serialize;

use permulex_core::ergodic::{ergodic_word_verdict, ErgodicityVerdict};
use permulex_core::interval::{canonical_prefix, canonicality_report, verify_against_shifts};
use permulex_core::perm::{permutation_from_values, valid_permutation_prefix};
use permulex_core::scalar::parse_scalar;
use permulex_core::sturmian::{rotation_sequence, SturmianParams};
use permulex_core::{Quadratic, Rational, Scalar};

use crate::args::VerifyArgs;
use crate::fail::Failure;
use crate::pipeline::{AnySystem, BuiltSystem};

/// Shift-oracle comparison: every canonical value ranked against the
/// lexicographic order of the corresponding shifts.
#[derive(Debug, Serialize)]
pub struct OracleBlock {
    pub depth: usize,
    pub first_mismatch: Option<usize>,
    pub pass: bool,
}

/// Membership of every canonical value in the interval its position type owns.
#[derive(Debug, Serialize)]
pub struct CanonicalityBlock {
    pub checked: usize,
    pub violations: usize,
    pub first_violation: Option<usize>,
    pub pass: bool,
}

/// Empirical letter and type frequencies against the interval lengths.
#[derive(Debug, Serialize)]
pub struct DistributionBlock {
    pub letter_deviation: f64,
    pub type_deviation: f64,
    pub unclassified: usize,
    pub tolerance: f64,
    pub pass: bool,
}

/// Factor-frequency envelopes over sliding windows of the symbolic word.
#[derive(Debug, Serialize)]
pub struct ErgodicityBlock {
    pub verdict: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub factors_checked: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub worst_width: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness_factor: Option<String>,
    pub max_len: usize,
    pub window: usize,
    pub prefix: usize,
    pub tolerance: f64,
    pub pass: bool,
}

/// Cross-check of the canonical values against a circle-rotation orbit.
#[derive(Debug, Serialize)]
pub struct SturmianBlock {
    pub sigma: String,
    pub rho: String,
    pub values_compared: bool,
    pub value_mismatch: Option<usize>,
    pub rank_mismatch: Option<usize>,
    pub pass: bool,
}

/// Everything `permulex verify` reports, with one overall verdict.
#[derive(Debug, Serialize)]
pub struct VerifySummary {
    pub tool: &'static str,
    pub version: &'static str,
    pub name: String,
    pub arithmetic: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub precision_bits: Option<u32>,
    pub n: usize,
    pub oracle: OracleBlock,
    pub canonicality: CanonicalityBlock,
    pub distribution: DistributionBlock,
    pub ergodicity: ErgodicityBlock,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub sturmian: Option<SturmianBlock>,
    pub pass: bool,
}

/// Parses the two `--sturmian` tokens, accepting optional `sigma=` / `rho=`
/// prefixes in either order of convenience.
pub fn parse_rotation(tokens: &[String]) -> Result<SturmianParams<Quadratic>, Failure> {
    let strip = |raw: &str, tag: &str| raw.strip_prefix(tag).unwrap_or(raw).to_string();
    let sigma = parse_scalar(&strip(&tokens[0], "sigma="))?;
    let rho = parse_scalar(&strip(&tokens[1], "rho="))?;
    Ok(SturmianParams::new(sigma, rho)?)
}

/// Runs every check against a built system and folds the results into one
/// summary.
pub fn verify(
    sys: &AnySystem,
    name: &str,
    vargs: &VerifyArgs,
    rotation: Option<&SturmianParams<Quadratic>>,
) -> Result<VerifySummary, Failure> {
    match sys {
        AnySystem::Rational(b) => verify_typed(b, sys, name, vargs, rotation, None),
        AnySystem::Quadratic(b) => {
            let eq = |v: &Quadratic, o: &Quadratic| v == o;
            verify_typed(b, sys, name, vargs, rotation, Some(&eq))
        }
        AnySystem::Ball(b) => verify_typed(b, sys, name, vargs, rotation, None),
    }
}

#[allow(clippy::type_complexity)]
fn verify_typed<S: Scalar>(
    b: &BuiltSystem<S>,
    sys: &AnySystem,
    name: &str,
    vargs: &VerifyArgs,
    rotation: Option<&SturmianParams<Quadratic>>,
    value_eq: Option<&dyn Fn(&S, &Quadratic) -> bool>,
) -> Result<VerifySummary, Failure> {
    let n = vargs.n;
    let mut stream = b.stream();
    let values = canonical_prefix(&b.im, n)?;

    let first_mismatch = verify_against_shifts(&b.im, &mut stream, n, vargs.depth)?;
    let oracle = OracleBlock {
        depth: vargs.depth,
        first_mismatch,
        pass: first_mismatch.is_none(),
    };

    let report = canonicality_report(&b.im, &mut stream, &values)?;
    let canonicality = CanonicalityBlock {
        checked: report.checked,
        violations: report.violations,
        first_violation: report.first_violation,
        pass: report.violations == 0,
    };

    let distribution = distribution_block(b, &values, vargs.tolerance)?;
    let ergodicity = ergodicity_block(b, vargs)?;

    let sturmian = match rotation {
        None => None,
        Some(params) => {
            let orbit = rotation_sequence(params, n)?;
            let by_orbit = permutation_from_values(&orbit)?;
            let by_shifts = valid_permutation_prefix(&mut stream, n, vargs.depth)?;
            let rank_mismatch = by_orbit
                .ranks()
                .iter()
                .zip(by_shifts.ranks())
                .position(|(a, c)| a != c);
            let (values_compared, value_mismatch) = match value_eq {
                Some(eq) => (true, (0..n).find(|&i| !eq(&values[i], &orbit[i]))),
                None => (false, None),
            };
            let pass = rank_mismatch.is_none() && (!values_compared || value_mismatch.is_none());
            Some(SturmianBlock {
                sigma: params.sigma().to_string(),
                rho: params.rho().to_string(),
                values_compared,
                value_mismatch,
                rank_mismatch,
                pass,
            })
        }
    };

    let pass = oracle.pass
        && canonicality.pass
        && distribution.pass
        && ergodicity.pass
        && sturmian.as_ref().is_none_or(|s| s.pass);
    Ok(VerifySummary {
        tool: "permulex",
        version: env!("CARGO_PKG_VERSION"),
        name: name.to_string(),
        arithmetic: sys.arithmetic(),
        precision_bits: sys.precision_bits(),
        n,
        oracle,
        canonicality,
        distribution,
        ergodicity,
        sturmian,
        pass,
    })
}

/// Classifies each canonical value to the type interval containing it, then
/// compares letter and type frequencies with the interval lengths.  A value
/// sitting exactly on an interval endpoint is counted as unclassified rather
/// than failing the whole run; canonicality has already flagged it.
fn distribution_block<S: Scalar>(
    b: &BuiltSystem<S>,
    values: &[S],
    tolerance: f64,
) -> Result<DistributionBlock, Failure> {
    use permulex_core::Error;

    let layout = b.im.layout();
    let q = layout.alphabet_size();
    let types = layout.ordered_types().to_vec();
    let slot: HashMap<_, _> = types.iter().enumerate().map(|(i, t)| (*t, i)).collect();

    let mut letter_counts = vec![0usize; q];
    let mut type_counts = vec![0usize; types.len()];
    let mut unclassified = 0usize;
    for v in values {
        match b.im.classify_type(v) {
            Ok(t) => {
                type_counts[slot[&t]] += 1;
                let carried = b.morphism.image(t.letter)[t.index - 1];
                letter_counts[carried as usize] += 1;
            }
            Err(Error::EndpointHit(_)) => unclassified += 1,
            Err(e) => return Err(e.into()),
        }
    }

    let classified = values.len() - unclassified;
    let freq = |count: usize| count as f64 / classified.max(1) as f64;
    let letter_deviation = (0..q)
        .map(|a| (freq(letter_counts[a]) - b.spectral.mu[a].approx_f64()).abs())
        .fold(0.0f64, f64::max);
    let type_deviation = types
        .iter()
        .enumerate()
        .map(|(i, t)| {
            let (lo, hi) = layout.type_interval(*t).expect("ordered type has an interval");
            (freq(type_counts[i]) - (hi.approx_f64() - lo.approx_f64())).abs()
        })
        .fold(0.0f64, f64::max);

    let pass = unclassified == 0 && letter_deviation <= tolerance && type_deviation <= tolerance;
    Ok(DistributionBlock {
        letter_deviation,
        type_deviation,
        unclassified,
        tolerance,
        pass,
    })
}

/// Counts short factors over sliding windows and checks that each window
/// count stays inside an interval of width `tolerance` around a single
/// frequency.
fn ergodicity_block<S: Scalar>(
    b: &BuiltSystem<S>,
    vargs: &VerifyArgs,
) -> Result<ErgodicityBlock, Failure> {
    let max_len = 3usize;
    let prefix = vargs.prefix.max(64 * (max_len + 1));
    let window = (prefix / 16).max(max_len + 1);
    let mut stream = b.stream();
    let word = stream.prefix(prefix).to_vec();
    let tol = Rational::from_float(vargs.tolerance)
        .filter(|t| t > &Rational::from_integer(0.into()))
        .ok_or_else(|| {
            Failure::validation(
                "invalid-tolerance",
                serde_json::json!({ "tolerance": vargs.tolerance }),
            )
        })?;

    let verdict = ergodic_word_verdict(&word, max_len, window, &tol)?;
    let (name, factors_checked, worst_width, witness, pass) = match verdict {
        ErgodicityVerdict::Consistent {
            factors_checked,
            worst_width,
            worst_factor: _,
        } => (
            "consistent",
            Some(factors_checked),
            Some(approx_ratio(&worst_width)),
            None,
            true,
        ),
        ErgodicityVerdict::Suspect { factor, envelope } => (
            "suspect",
            None,
            Some(approx_ratio(&envelope.width())),
            Some(crate::pipeline::word_string(&factor)),
            false,
        ),
        ErgodicityVerdict::ZeroFrequency { factor } => (
            "zero-frequency",
            None,
            None,
            Some(crate::pipeline::word_string(&factor)),
            false,
        ),
    };
    Ok(ErgodicityBlock {
        verdict: name.to_string(),
        factors_checked,
        worst_width,
        witness_factor: witness,
        max_len,
        window,
        prefix,
        tolerance: vargs.tolerance,
        pass,
    })
}

fn approx_ratio(r: &Rational) -> f64 {
    r.approx_f64()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::args::VerifyArgs;
    use crate::pipeline::{build, BuildOptions};
    use crate::specfile::MorphismSpec;
    use std::path::PathBuf;

    fn spec(name: &str, images: &[&str], power: Option<usize>) -> MorphismSpec {
        MorphismSpec {
            name: name.to_string(),
            alphabet_size: images.len(),
            images: images.iter().map(|s| s.to_string()).collect(),
            seed: 0,
            power,
        }
    }

    fn vargs(n: usize) -> VerifyArgs {
        VerifyArgs {
            spec: PathBuf::new(),
            n,
            prefix: 4096,
            depth: 4096,
            precision: 256,
            tolerance: 0.05,
            sturmian: None,
            auto_power: false,
            out: None,
        }
    }

    #[test]
    fn thue_morse_passes_every_block() {
        let spec = spec("thue-morse", &["01", "10"], None);
        let opts = BuildOptions {
            prefix: 4096,
            depth: 4096,
            auto_power: false,
        };
        let sys = build(&spec, &opts, 256).unwrap();
        let summary = verify(&sys, "thue-morse", &vargs(400), None).unwrap();
        assert!(summary.pass, "{summary:?}");
        assert_eq!(summary.oracle.first_mismatch, None);
        assert_eq!(summary.canonicality.violations, 0);
        assert!(summary.distribution.letter_deviation < 0.01);
        assert!(summary.distribution.type_deviation < 0.01);
        assert_eq!(summary.ergodicity.verdict, "consistent");
    }

    #[test]
    fn golden_square_matches_its_rotation() {
        let spec = spec("fibonacci-squared", &["01", "0"], Some(2));
        let opts = BuildOptions {
            prefix: 4096,
            depth: 4096,
            auto_power: false,
        };
        let sys = build(&spec, &opts, 256).unwrap();
        let tokens = vec![
            "sigma=(3-sqrt(5))/2".to_string(),
            "rho=(3-sqrt(5))/2".to_string(),
        ];
        let rotation = parse_rotation(&tokens).unwrap();
        let summary = verify(&sys, "fibonacci-squared", &vargs(300), Some(&rotation)).unwrap();
        assert!(summary.pass, "{summary:?}");
        let st = summary.sturmian.unwrap();
        assert!(st.values_compared);
        assert_eq!(st.value_mismatch, None);
        assert_eq!(st.rank_mismatch, None);
    }

    #[test]
    fn wrong_rotation_parameters_fail_the_cross_check() {
        let spec = spec("fibonacci-squared", &["01", "0"], Some(2));
        let opts = BuildOptions {
            prefix: 4096,
            depth: 4096,
            auto_power: false,
        };
        let sys = build(&spec, &opts, 256).unwrap();
        let tokens = vec![
            "sigma=(sqrt(5)-1)/2".to_string(),
            "rho=(sqrt(5)-1)/2".to_string(),
        ];
        let rotation = parse_rotation(&tokens).unwrap();
        let summary = verify(&sys, "fibonacci-squared", &vargs(100), Some(&rotation)).unwrap();
        assert!(!summary.pass);
        let st = summary.sturmian.unwrap();
        assert_eq!(st.value_mismatch, Some(0));
        assert!(!st.pass);
    }
}

//! From a spec file to a full interval system, in the cheapest arithmetic
//! that holds its spectral data, with precision escalation for enclosure
//! systems.

use permulex_core::interval::{build_interval_morphism, IntervalMorphism};
use permulex_core::order::{
    monotone_power, monotonicity_verdict, type_order, Monotonicity, Separability, TypeTable,
};
use permulex_core::spectral::{perron_data, IncidenceMatrix, PerronData, Primitivity, SpectralData};
use permulex_core::word::{Morphism, WordStream};
use permulex_core::{Ball, Quadratic, Rational, Scalar};
use serde_json::json;

use crate::args::SystemArgs;
use crate::fail::Failure;
use crate::specfile::MorphismSpec;

/// Hard ceiling for precision escalation.
pub const MAX_PRECISION_BITS: u32 = 4096;
/// Largest power tried when searching for an order-preserving iterate.
pub const MAX_AUTO_POWER: usize = 8;

/// Construction parameters, decoupled from clap so verify can reuse them.
#[derive(Debug, Clone, Copy)]
pub struct BuildOptions {
    pub prefix: usize,
    pub depth: usize,
    pub auto_power: bool,
}

impl From<&SystemArgs> for BuildOptions {
    fn from(args: &SystemArgs) -> Self {
        BuildOptions { prefix: args.prefix, depth: args.depth, auto_power: args.auto_power }
    }
}

/// Everything the subcommands need about one constructed system.
#[derive(Debug)]
pub struct BuiltSystem<S: Scalar> {
    pub morphism: Morphism,
    pub seed: u8,
    /// Total power applied to the spec's base images (spec power times any
    /// power chosen by the monotonicity search).
    pub power: usize,
    pub primitivity: Primitivity,
    pub monotonicity: Monotonicity,
    pub spectral: SpectralData<S>,
    pub table: TypeTable,
    pub im: IntervalMorphism<S>,
}

impl<S: Scalar> BuiltSystem<S> {
    /// A fresh stream of the fixed point (streams are growable buffers, so
    /// each consumer gets its own).
    pub fn stream(&self) -> WordStream {
        WordStream::new(self.morphism.clone(), self.seed).expect("seed validated during build")
    }
}

/// A built system in whichever arithmetic its Perron root needed.
#[derive(Debug)]
pub enum AnySystem {
    Rational(BuiltSystem<Rational>),
    Quadratic(BuiltSystem<Quadratic>),
    Ball(BuiltSystem<Ball>),
}

impl AnySystem {
    pub fn arithmetic(&self) -> &'static str {
        match self {
            AnySystem::Rational(_) => "rational",
            AnySystem::Quadratic(_) => "quadratic",
            AnySystem::Ball(_) => "ball",
        }
    }

    /// The enclosure precision actually used, for ball systems.
    pub fn precision_bits(&self) -> Option<u32> {
        match self {
            AnySystem::Ball(sys) => Some(sys.spectral.theta.precision()),
            _ => None,
        }
    }

    #[cfg(test)]
    fn power(&self) -> usize {
        match self {
            AnySystem::Rational(sys) => sys.power,
            AnySystem::Quadratic(sys) => sys.power,
            AnySystem::Ball(sys) => sys.power,
        }
    }
}

/// Builds the interval system for a validated spec at one precision.
///
/// Ordering of the gates: extensibility of the seed (validation), then
/// primitivity, then order preservation (with the optional power search),
/// then type separability — each rejection carries the concrete witness.
pub fn build(spec: &MorphismSpec, opts: &BuildOptions, bits: u32) -> Result<AnySystem, Failure> {
    let (mut m, mut power) = spec.effective_morphism()?;
    WordStream::new(m.clone(), spec.seed).map_err(Failure::from)?;

    let primitivity = IncidenceMatrix::from_morphism(&m).primitivity();
    if !primitivity.primitive {
        return Err(Failure::rejection(
            "not-primitive",
            json!({ "message": "no power of the incidence matrix is strictly positive" }),
        ));
    }

    let mut monotonicity = monotonicity_verdict(&m, opts.depth);
    match &monotonicity {
        Monotonicity::Monotone => {}
        Monotonicity::NotMonotone { witness } => {
            let witness_detail = json!({
                "smaller": word_string(&witness.smaller),
                "larger": word_string(&witness.larger),
                "image_order": format!("{:?}", witness.image_cmp).to_lowercase(),
            });
            let chosen = if opts.auto_power {
                monotone_power(&m, MAX_AUTO_POWER, opts.depth)
                    .map_err(Failure::from)?
                    .monotone_power
            } else {
                None
            };
            match chosen {
                Some(k) => {
                    m = m.power(k).map_err(Failure::from)?;
                    power *= k;
                    monotonicity = Monotonicity::Monotone;
                }
                None => {
                    let mut detail = witness_detail;
                    if opts.auto_power {
                        detail["powers_tried"] = json!(MAX_AUTO_POWER);
                    } else {
                        detail["hint"] = json!("retry with --auto-power");
                    }
                    return Err(Failure::rejection("not-monotone", detail));
                }
            }
        }
        Monotonicity::UnknownAtDepth { depth } => {
            return Err(Failure::exhaustion(
                "depth-exhausted",
                json!({ "stage": "monotonicity", "depth": depth }),
            ));
        }
    }

    let mut stream = WordStream::new(m.clone(), spec.seed).map_err(Failure::from)?;
    let table = type_order(&mut stream, opts.prefix, opts.depth).map_err(Failure::from)?;
    match &table.verdict {
        Separability::Separable => {}
        Separability::Inseparable { witness } => {
            return Err(Failure::rejection(
                "inseparable",
                json!({ "witness": [witness.0, witness.1, witness.2] }),
            ));
        }
        Separability::UnknownAtDepth { left, right } => {
            return Err(Failure::exhaustion(
                "depth-exhausted",
                json!({ "stage": "type-order", "left": left.to_string(), "right": right.to_string() }),
            ));
        }
    }

    let seed = spec.seed;
    let incidence = IncidenceMatrix::from_morphism(&m);
    match perron_data(&incidence, bits).map_err(Failure::from)? {
        PerronData::Rational(spectral) => {
            let im = build_interval_morphism(&m, seed, &spectral, &table).map_err(Failure::from)?;
            Ok(AnySystem::Rational(BuiltSystem {
                morphism: m, seed, power, primitivity, monotonicity, spectral, table, im,
            }))
        }
        PerronData::Quadratic(spectral) => {
            let im = build_interval_morphism(&m, seed, &spectral, &table).map_err(Failure::from)?;
            Ok(AnySystem::Quadratic(BuiltSystem {
                morphism: m, seed, power, primitivity, monotonicity, spectral, table, im,
            }))
        }
        PerronData::Ball(spectral) => {
            let im = build_interval_morphism(&m, seed, &spectral, &table).map_err(Failure::from)?;
            Ok(AnySystem::Ball(BuiltSystem {
                morphism: m, seed, power, primitivity, monotonicity, spectral, table, im,
            }))
        }
    }
}

/// Runs `f` at doubling precisions until it stops failing retryably or the
/// ceiling is reached.
pub fn with_escalation<T>(
    start_bits: u32,
    mut f: impl FnMut(u32) -> Result<T, Failure>,
) -> Result<T, Failure> {
    let mut bits = start_bits.clamp(2, MAX_PRECISION_BITS);
    loop {
        match f(bits) {
            Err(failure) if failure.retryable && bits < MAX_PRECISION_BITS => {
                bits = (bits.saturating_mul(2)).min(MAX_PRECISION_BITS);
            }
            other => return other,
        }
    }
}

/// Letters joined as digits: [1, 0] → "10".
pub fn word_string(word: &[u8]) -> String {
    word.iter().map(|l| l.to_string()).collect()
}

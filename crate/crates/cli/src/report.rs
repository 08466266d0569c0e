//! The analysis report: every number as an exact, re-parseable string,
//! with a float approximation alongside for human eyes.

use permulex_core::order::Monotonicity;
use permulex_core::Scalar;
use serde::Serialize;

use crate::pipeline::{word_string, AnySystem, BuiltSystem};
use crate::specfile::MorphismSpec;

#[derive(Debug, Clone, Serialize)]
pub struct ValueOut {
    /// Exact form: "p/q", "a+b*sqrt(d)", or "center±radius".
    pub exact: String,
    pub approx: f64,
}

impl ValueOut {
    pub fn of<S: Scalar>(v: &S) -> Self {
        ValueOut { exact: v.to_string(), approx: v.approx_f64() }
    }
}

#[derive(Debug, Serialize)]
pub struct PrimitivityOut {
    pub primitive: bool,
    pub witness_power: Option<usize>,
}

#[derive(Debug, Serialize)]
pub struct MonotonicityOut {
    pub verdict: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<WitnessOut>,
}

#[derive(Debug, Serialize)]
pub struct WitnessOut {
    pub smaller: String,
    pub larger: String,
    pub image_order: String,
}

#[derive(Debug, Serialize)]
pub struct SeparabilityOut {
    pub verdict: String,
    /// Prefix length the type occurrences were sampled from.
    pub prefix: usize,
    /// Letter depth of each sampled shift comparison.
    pub depth: usize,
}

#[derive(Debug, Serialize)]
pub struct LayoutOut {
    /// q+1 endpoints of the letter intervals, ascending.
    pub letter_bounds: Vec<ValueOut>,
    /// Endpoints of the type intervals in type order, ascending.
    pub type_bounds: Vec<ValueOut>,
    /// The common contraction factor 1/θ of all the maps.
    pub contraction: ValueOut,
}

#[derive(Debug, Serialize)]
pub struct AnalysisReport {
    pub tool: &'static str,
    pub version: &'static str,
    pub name: String,
    pub images: Vec<String>,
    pub seed: u8,
    pub power: usize,
    /// Images of the morphism actually analyzed (after the power).
    pub effective_images: Vec<String>,
    pub arithmetic: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub precision_bits: Option<u32>,
    pub primitivity: PrimitivityOut,
    pub theta: ValueOut,
    pub mu: Vec<ValueOut>,
    pub monotonicity: MonotonicityOut,
    pub separability: SeparabilityOut,
    /// Types as [letter, image position] pairs, in increasing shift order.
    pub type_order: Vec<(u8, usize)>,
    pub layout: LayoutOut,
    pub start: ValueOut,
    pub orientation: String,
}

pub fn analysis_report(spec: &MorphismSpec, sys: &AnySystem) -> AnalysisReport {
    match sys {
        AnySystem::Rational(b) => typed_report(spec, b, sys),
        AnySystem::Quadratic(b) => typed_report(spec, b, sys),
        AnySystem::Ball(b) => typed_report(spec, b, sys),
    }
}

fn typed_report<S: Scalar>(
    spec: &MorphismSpec,
    b: &BuiltSystem<S>,
    sys: &AnySystem,
) -> AnalysisReport {
    let layout = b.im.layout();
    let q = layout.alphabet_size() as u8;

    let mut letter_bounds = vec![ValueOut::of(&layout.letter_interval(0).0)];
    for a in 0..q {
        letter_bounds.push(ValueOut::of(&layout.letter_interval(a).1));
    }
    let types = layout.ordered_types();
    let mut type_bounds =
        vec![ValueOut::of(&layout.type_interval(types[0]).expect("ordered type").0)];
    for t in types {
        type_bounds.push(ValueOut::of(&layout.type_interval(*t).expect("ordered type").1));
    }

    let monotonicity = match &b.monotonicity {
        Monotonicity::Monotone => MonotonicityOut { verdict: "monotone".to_string(), witness: None },
        Monotonicity::NotMonotone { witness } => MonotonicityOut {
            verdict: "not-monotone".to_string(),
            witness: Some(WitnessOut {
                smaller: word_string(&witness.smaller),
                larger: word_string(&witness.larger),
                image_order: format!("{:?}", witness.image_cmp).to_lowercase(),
            }),
        },
        Monotonicity::UnknownAtDepth { depth } => MonotonicityOut {
            verdict: format!("unknown-at-depth-{depth}"),
            witness: None,
        },
    };

    AnalysisReport {
        tool: "permulex",
        version: env!("CARGO_PKG_VERSION"),
        name: spec.name.clone(),
        images: spec.images.clone(),
        seed: spec.seed,
        power: b.power,
        effective_images: (0..q).map(|a| word_string(b.morphism.image(a))).collect(),
        arithmetic: sys.arithmetic(),
        precision_bits: sys.precision_bits(),
        primitivity: PrimitivityOut {
            primitive: b.primitivity.primitive,
            witness_power: b.primitivity.witness,
        },
        theta: ValueOut::of(&b.spectral.theta),
        mu: b.spectral.mu.iter().map(ValueOut::of).collect(),
        monotonicity,
        separability: SeparabilityOut {
            verdict: "separable".to_string(),
            prefix: b.table.prefix_len,
            depth: b.table.depth,
        },
        type_order: types.iter().map(|t| (t.letter, t.index)).collect(),
        layout: LayoutOut { letter_bounds, type_bounds, contraction: ValueOut::of(layout.contraction()) },
        start: ValueOut::of(b.im.start()),
        orientation: b.im.orientation().to_string(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pipeline::{build, BuildOptions};

    #[test]
    fn thue_morse_report_carries_the_exact_values() {
        let spec = MorphismSpec {
            name: "thue-morse".to_string(),
            alphabet_size: 2,
            images: vec!["01".to_string(), "10".to_string()],
            seed: 0,
            power: None,
        };
        let opts = BuildOptions { prefix: 4096, depth: 1024, auto_power: false };
        let sys = build(&spec, &opts, 256).unwrap();
        let report = analysis_report(&spec, &sys);

        assert_eq!(report.arithmetic, "rational");
        assert_eq!(report.theta.exact, "2");
        assert_eq!(
            report.mu.iter().map(|v| v.exact.as_str()).collect::<Vec<_>>(),
            ["1/2", "1/2"]
        );
        assert_eq!(report.type_order, vec![(1, 2), (0, 1), (1, 1), (0, 2)]);
        assert_eq!(report.start.exact, "1/2");
        assert_eq!(report.orientation, "half-open-left");
        assert_eq!(
            report.layout.letter_bounds.iter().map(|v| v.exact.as_str()).collect::<Vec<_>>(),
            ["0", "1/2", "1"]
        );
        assert_eq!(
            report.layout.type_bounds.iter().map(|v| v.exact.as_str()).collect::<Vec<_>>(),
            ["0", "1/4", "1/2", "3/4", "1"]
        );
        assert_eq!(report.layout.contraction.exact, "1/2");
        assert_eq!(report.monotonicity.verdict, "monotone");
        assert_eq!(report.separability.verdict, "separable");
        assert_eq!(report.primitivity.witness_power, Some(1));
    }
}

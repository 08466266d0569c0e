//! permulex: analyze morphic-word interval systems, generate their canonical
//! value sequences, verify them against shift oracles and rotation orbits,
//! and work with circle rotations directly.

mod args;
mod emit;
mod fail;
mod pipeline;
mod report;
mod specfile;
mod verify;

use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::Parser;
use serde_json::json;

use permulex_core::interval::canonical_prefix;
use permulex_core::scalar::parse_scalar;
use permulex_core::sturmian::{
    doubling_expansion, rotation_sequence, three_distance_gaps, SturmianParams,
};
use permulex_core::word::WordStream;
use permulex_core::Scalar;

use args::{AnalyzeArgs, Cli, Command, Format, GenerateArgs, SturmianArgs, VerifyArgs};
use fail::Failure;
use pipeline::{build, with_escalation, AnySystem, BuildOptions, BuiltSystem};
use specfile::MorphismSpec;

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(failure) => {
            eprintln!("{}", failure.render());
            ExitCode::from(failure.code as u8)
        }
    }
}

fn run(command: Command) -> Result<(), Failure> {
    match command {
        Command::Analyze(a) => cmd_analyze(a),
        Command::Generate(g) => cmd_generate(g),
        Command::Verify(v) => cmd_verify(v),
        Command::Sturmian(s) => cmd_sturmian(s),
    }
}

/// Prints to stdout, or writes the file named by `--out`.
fn write_out(out: Option<&PathBuf>, text: &str) -> Result<(), Failure> {
    match out {
        None => {
            print!("{text}");
            Ok(())
        }
        Some(path) => fs::write(path, text).map_err(|e| {
            Failure::validation(
                "unwritable-output",
                json!({ "path": path.display().to_string(), "message": e.to_string() }),
            )
        }),
    }
}

fn pretty(value: &impl serde::Serialize) -> String {
    let mut text = serde_json::to_string_pretty(value).expect("reports serialize");
    text.push('\n');
    text
}

fn cmd_analyze(a: AnalyzeArgs) -> Result<(), Failure> {
    let spec = MorphismSpec::load(&a.system.spec)?;
    let opts = BuildOptions::from(&a.system);
    let sys = with_escalation(a.system.precision, |bits| build(&spec, &opts, bits))?;
    let report = report::analysis_report(&spec, &sys);
    write_out(a.out.as_ref(), &pretty(&report))
}

fn cmd_generate(g: GenerateArgs) -> Result<(), Failure> {
    let spec = MorphismSpec::load(&g.system.spec)?;

    // An ultimately periodic fixed point has only finitely many distinct
    // shifts, so no injective value sequence exists; refuse before the
    // heavier analysis can fail more obscurely.
    let (m, _) = spec.effective_morphism()?;
    let mut probe = WordStream::new(m, spec.seed)?;
    if let Some(period) = probe.periodicity_hint(64, 2048) {
        return Err(Failure::rejection(
            "ultimately-periodic",
            json!({ "period": period }),
        ));
    }

    let opts = BuildOptions::from(&g.system);
    let sys = with_escalation(g.system.precision, |bits| {
        let sys = build(&spec, &opts, bits)?;
        let text = match &sys {
            AnySystem::Rational(b) => render_rows(b, &spec.name, g.n, g.format)?,
            AnySystem::Quadratic(b) => render_rows(b, &spec.name, g.n, g.format)?,
            AnySystem::Ball(b) => render_rows(b, &spec.name, g.n, g.format)?,
        };
        Ok(text)
    })?;
    write_out(g.out.as_ref(), &sys)
}

fn render_rows<S: Scalar>(
    b: &BuiltSystem<S>,
    name: &str,
    n: usize,
    format: Format,
) -> Result<String, Failure> {
    let values = canonical_prefix(&b.im, n)?;
    let rows = emit::rows_from_values(&values)?;
    Ok(match format {
        Format::Csv => emit::csv(&rows),
        Format::Json => emit::json(name, &rows),
    })
}

fn cmd_verify(v: VerifyArgs) -> Result<(), Failure> {
    let spec = MorphismSpec::load(&v.spec)?;
    let rotation = match &v.sturmian {
        Some(tokens) => Some(verify::parse_rotation(tokens)?),
        None => None,
    };
    let opts = BuildOptions {
        prefix: v.prefix,
        depth: v.depth,
        auto_power: v.auto_power,
    };
    let summary = with_escalation(v.precision, |bits| {
        let sys = build(&spec, &opts, bits)?;
        verify::verify(&sys, &spec.name, &v, rotation.as_ref())
    })?;
    let pass = summary.pass;
    write_out(v.out.as_ref(), &pretty(&summary))?;
    if pass {
        Ok(())
    } else {
        Err(Failure::verification(
            "verification-failed",
            json!({ "name": spec.name }),
        ))
    }
}

fn cmd_sturmian(s: SturmianArgs) -> Result<(), Failure> {
    let strip = |raw: &str, tag: &str| raw.strip_prefix(tag).unwrap_or(raw).to_string();
    let sigma = parse_scalar(&strip(&s.sigma, "sigma="))?;
    let rho = parse_scalar(&strip(&s.rho, "rho="))?;
    let params = SturmianParams::new(sigma, rho)?;

    if s.check {
        if s.n < 2 {
            return Err(Failure::validation(
                "count-too-small",
                json!({ "count": s.n, "minimum": 2 }),
            ));
        }
        let iterative = rotation_sequence(&params, s.n)?;
        let doubled = doubling_expansion(&params, s.n)?;
        let doubling_mismatch = (0..s.n).find(|&i| iterative[i] != doubled[i]);
        let gaps = three_distance_gaps(&iterative)?;
        let pass = doubling_mismatch.is_none() && gaps.len() <= 3;
        let doc = json!({
            "tool": "permulex",
            "version": env!("CARGO_PKG_VERSION"),
            "sigma": params.sigma().to_string(),
            "rho": params.rho().to_string(),
            "n": s.n,
            "doubling_mismatch": doubling_mismatch,
            "distinct_gaps": gaps.len(),
            "gaps": gaps.iter().map(|g| g.to_string()).collect::<Vec<_>>(),
            "pass": pass,
        });
        write_out(s.out.as_ref(), &pretty(&doc))?;
        return if pass {
            Ok(())
        } else {
            Err(Failure::verification(
                "rotation-check-failed",
                json!({ "doubling_mismatch": doubling_mismatch, "distinct_gaps": gaps.len() }),
            ))
        };
    }

    let values = rotation_sequence(&params, s.n)?;
    let rows = emit::rows_from_values(&values)?;
    let text = match s.format {
        Format::Csv => emit::csv(&rows),
        Format::Json => emit::json("rotation", &rows),
    };
    write_out(s.out.as_ref(), &text)
}

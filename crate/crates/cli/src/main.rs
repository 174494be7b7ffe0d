//! Command-line front end: file-driven verification, lifting,
//! reconstruction, round-trip certification and derivation solving for
//! algebras given by exact rational structure constants.
//!
//! Exit codes: 0 success, 1 axiom or check failure, 2 I/O or parse error,
//! 3 guardrail exceeded, 4 internal invariant violation (a verified
//! consequence failed after its preconditions passed).

use clap::{Parser, Subcommand, ValueEnum};
use nleibniz_core::correspondence::{
    lift, reconstruct, roundtrip_algebra, roundtrip_triple, CorrespondenceError,
};
use nleibniz_core::json::{self, FileKind, ParseError};
use nleibniz_core::model::Guardrail;
use nleibniz_core::morphisms::{
    induce_from_triple_derivation, induce_lie_derivation, solve_derivations, MorphismError,
};
use nleibniz_core::report::Report;
use nleibniz_core::{axioms, LieTripleData, NLeibnizAlgebra};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

#[derive(Parser)]
#[command(
    name = "nleibniz",
    version,
    about = "Exact verification and conversion of generalized metric n-Leibniz algebras"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Subcommand)]
enum Command {
    /// Run every applicable axiom check on an algebra or triple-data file
    Check {
        file: PathBuf,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
    /// Lift an algebra to its Lie triple data (prints dim g and the omega signature)
    Lift {
        file: PathBuf,
        /// Write the triple-data JSON here (plus a `.sidecar.json` next to it)
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
    /// Reconstruct the n-Leibniz algebra of a triple-data file
    Reconstruct {
        file: PathBuf,
        /// Write the algebra JSON here
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
    /// Round-trip a file through the correspondence and compare exactly
    Roundtrip {
        file: PathBuf,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
    /// Solve for the space of generalized orthogonal derivations
    Derivations {
        file: PathBuf,
        /// Write the basis as JSON here
        #[arg(long)]
        out: Option<PathBuf>,
        /// Also verify both transfer directions for every basis element
        #[arg(long)]
        transfer: bool,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
    /// Print summary information about a file
    Info {
        file: PathBuf,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
}

struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    fn new(code: u8, message: impl Into<String>) -> Self {
        Failure {
            code,
            message: message.into(),
        }
    }
}

fn io_failure(path: &Path, err: std::io::Error) -> Failure {
    Failure::new(2, format!("{}: {err}", path.display()))
}

fn parse_failure(err: ParseError) -> Failure {
    // Semantic invariant failures are check failures; everything else is a
    // malformed file.
    let code = match err {
        ParseError::Faithfulness(_) | ParseError::DegenerateForm(_) | ParseError::Invariant(_) => 1,
        _ => 2,
    };
    Failure::new(code, err.to_string())
}

fn correspondence_failure(err: CorrespondenceError) -> Failure {
    let code = match err {
        CorrespondenceError::AxiomViolation(_) => 1,
        CorrespondenceError::Guardrail(_) => 3,
        CorrespondenceError::Closure { .. }
        | CorrespondenceError::WellDefinedness { .. }
        | CorrespondenceError::CorruptGram(_)
        | CorrespondenceError::Internal(_) => 4,
    };
    Failure::new(code, err.to_string())
}

fn morphism_failure(err: MorphismError) -> Failure {
    match err {
        MorphismError::Precondition(report) => Failure::new(1, report.to_string()),
        MorphismError::Guardrail(e) => Failure::new(3, e.to_string()),
        MorphismError::Correspondence(e) => correspondence_failure(e),
        MorphismError::Internal(report) => Failure::new(4, format!("internal invariant violated: {report}")),
    }
}

fn guardrail_from_env() -> Result<Guardrail, Failure> {
    match std::env::var("NLEIBNIZ_GUARDRAIL") {
        Err(_) => Ok(Guardrail::default()),
        Ok(value) => value
            .parse::<usize>()
            .map(Guardrail)
            .map_err(|_| Failure::new(2, format!("invalid NLEIBNIZ_GUARDRAIL value {value:?}"))),
    }
}

fn read_file(path: &Path) -> Result<Vec<u8>, Failure> {
    std::fs::read(path).map_err(|e| io_failure(path, e))
}

fn write_file(path: &Path, bytes: &str) -> Result<(), Failure> {
    std::fs::write(path, bytes).map_err(|e| io_failure(path, e))
}

fn load_algebra(path: &Path) -> Result<NLeibnizAlgebra, Failure> {
    json::parse_algebra(&read_file(path)?).map_err(parse_failure)
}

fn load_triple(path: &Path) -> Result<LieTripleData, Failure> {
    json::parse_triple(&read_file(path)?).map_err(parse_failure)
}

fn pretty(value: &serde_json::Value) -> String {
    let mut text = serde_json::to_string_pretty(value).expect("serialization cannot fail");
    text.push('\n');
    text
}

fn emit_reports(format: Format, reports: &[Report]) {
    match format {
        Format::Text => {
            for report in reports {
                println!("{report}");
            }
        }
        Format::Json => {
            let value = serde_json::to_value(reports).expect("reports serialize");
            print!("{}", pretty(&value));
        }
    }
}

fn cmd_check(file: &Path, format: Format) -> Result<(), Failure> {
    let bytes = read_file(file)?;
    let reports = match json::detect_kind(&bytes).map_err(parse_failure)? {
        FileKind::Algebra => {
            let a = json::parse_algebra(&bytes).map_err(parse_failure)?;
            vec![
                axioms::check_fundamental_identity(&a),
                axioms::check_unitarity(&a),
                axioms::check_symmetry(&a),
                axioms::check_cyclic_sum(&a),
                axioms::check_s_nondegenerate(a.form()),
            ]
        }
        FileKind::Triple => {
            let t = json::parse_triple_raw(&bytes).map_err(parse_failure)?;
            vec![
                axioms::check_metric_lie(t.lie()),
                axioms::check_orthogonal_rep(&t),
                axioms::check_s_nondegenerate(t.form()),
            ]
        }
    };
    emit_reports(format, &reports);
    if reports.iter().all(|r| r.pass) {
        Ok(())
    } else {
        Err(Failure::new(1, String::new()))
    }
}

fn sidecar_path(out: &Path) -> PathBuf {
    out.with_extension("sidecar.json")
}

fn cmd_lift(file: &Path, out: Option<&Path>, format: Format) -> Result<(), Failure> {
    let guardrail = guardrail_from_env()?;
    let a = load_algebra(file)?;
    let lifted = lift(&a, guardrail).map_err(correspondence_failure)?;
    let (p, q, z) = lifted
        .g
        .omega()
        .signature()
        .expect("lifted omega is symmetric");
    match format {
        Format::Text => println!("dim g = {}, signature = ({p},{q},{z})", lifted.g.dim()),
        Format::Json => print!(
            "{}",
            pretty(&serde_json::json!({
                "g_dimension": lifted.g.dim(),
                "omega_signature": [p, q, z],
            }))
        ),
    }
    if let Some(out) = out {
        write_file(out, &json::serialize_triple(&lifted.triple))?;
        let sidecar = serde_json::json!({
            "generator_tuples": lifted.generator_tuples,
            "omega_signature": [p, q, z],
        });
        write_file(&sidecar_path(out), &pretty(&sidecar))?;
    }
    Ok(())
}

fn cmd_reconstruct(file: &Path, out: Option<&Path>, format: Format) -> Result<(), Failure> {
    let guardrail = guardrail_from_env()?;
    let t = load_triple(file)?;
    let a = reconstruct(&t, guardrail).map_err(correspondence_failure)?;
    match format {
        Format::Text => println!(
            "reconstructed algebra: arity = {}, dimension = {}, bracket entries = {}",
            a.arity(),
            a.dim(),
            a.bracket_entry_count()
        ),
        Format::Json => print!(
            "{}",
            pretty(&serde_json::json!({
                "arity": a.arity(),
                "dimension": a.dim(),
                "bracket_entries": a.bracket_entry_count(),
            }))
        ),
    }
    if let Some(out) = out {
        write_file(out, &json::serialize_algebra(&a))?;
    }
    Ok(())
}

fn cmd_roundtrip(file: &Path, format: Format) -> Result<(), Failure> {
    let guardrail = guardrail_from_env()?;
    let bytes = read_file(file)?;
    let kind = json::detect_kind(&bytes).map_err(parse_failure)?;
    match kind {
        FileKind::Algebra => {
            let a = json::parse_algebra(&bytes).map_err(parse_failure)?;
            roundtrip_algebra(&a, guardrail).map_err(correspondence_failure)?;
        }
        FileKind::Triple => {
            let t = json::parse_triple(&bytes).map_err(parse_failure)?;
            roundtrip_triple(&t, guardrail).map_err(correspondence_failure)?;
        }
    }
    match format {
        Format::Text => match kind {
            FileKind::Algebra => println!("roundtrip ok: structure constants reproduced exactly"),
            FileKind::Triple => println!("roundtrip ok: triple identified exactly"),
        },
        Format::Json => print!("{}", pretty(&serde_json::json!({ "roundtrip": "ok" }))),
    }
    Ok(())
}

fn cmd_derivations(
    file: &Path,
    out: Option<&Path>,
    transfer: bool,
    format: Format,
) -> Result<(), Failure> {
    let guardrail = guardrail_from_env()?;
    let a = load_algebra(file)?;
    let space = solve_derivations(&a, guardrail).map_err(morphism_failure)?;
    match format {
        Format::Text => println!("derivation space dimension = {}", space.dimension()),
        Format::Json => print!(
            "{}",
            pretty(&serde_json::json!({
                "dimension": space.dimension(),
                "constraint_rank": space.constraint_rank,
            }))
        ),
    }
    if let Some(out) = out {
        write_file(out, &json::serialize_derivation_space(&space))?;
    }
    if transfer {
        let lifted = lift(&a, guardrail).map_err(correspondence_failure)?;
        for (i, op) in space.basis.iter().enumerate() {
            let (d_g, to_lie) = induce_lie_derivation(&lifted, op).map_err(morphism_failure)?;
            let to_algebra = induce_from_triple_derivation(&lifted.triple, &d_g, op, guardrail)
                .map_err(morphism_failure)?;
            if format == Format::Text {
                println!(
                    "basis[{i}]: lie transfer {}, triple transfer {}",
                    if to_lie.pass { "pass" } else { "fail" },
                    if to_algebra.pass { "pass" } else { "fail" }
                );
            }
        }
        if format == Format::Json {
            print!(
                "{}",
                pretty(&serde_json::json!({
                    "transfers_verified": space.dimension(),
                }))
            );
        }
    }
    Ok(())
}

fn cmd_info(file: &Path, format: Format) -> Result<(), Failure> {
    let bytes = read_file(file)?;
    match json::detect_kind(&bytes).map_err(parse_failure)? {
        FileKind::Algebra => {
            let a = json::parse_algebra(&bytes).map_err(parse_failure)?;
            match format {
                Format::Text => println!(
                    "n-leibniz algebra: arity = {}, dimension = {}, bracket entries = {}, form entries = {}",
                    a.arity(),
                    a.dim(),
                    a.bracket_entry_count(),
                    a.form().iter().count()
                ),
                Format::Json => print!(
                    "{}",
                    pretty(&serde_json::json!({
                        "kind": json::KIND_ALGEBRA,
                        "arity": a.arity(),
                        "dimension": a.dim(),
                        "bracket_entries": a.bracket_entry_count(),
                        "form_entries": a.form().iter().count(),
                    }))
                ),
            }
        }
        FileKind::Triple => {
            let t = json::parse_triple_raw(&bytes).map_err(parse_failure)?;
            match format {
                Format::Text => println!(
                    "lie triple data: arity = {}, lie dimension = {}, module dimension = {}, lie bracket entries = {}",
                    t.arity(),
                    t.lie().dim(),
                    t.module_dim(),
                    t.lie().bracket_entries().count()
                ),
                Format::Json => print!(
                    "{}",
                    pretty(&serde_json::json!({
                        "kind": json::KIND_TRIPLE,
                        "arity": t.arity(),
                        "lie_dimension": t.lie().dim(),
                        "module_dimension": t.module_dim(),
                        "lie_bracket_entries": t.lie().bracket_entries().count(),
                    }))
                ),
            }
        }
    }
    Ok(())
}

fn run(cli: Cli) -> Result<(), Failure> {
    match cli.command {
        Command::Check { file, format } => cmd_check(&file, format),
        Command::Lift { file, out, format } => cmd_lift(&file, out.as_deref(), format),
        Command::Reconstruct { file, out, format } => cmd_reconstruct(&file, out.as_deref(), format),
        Command::Roundtrip { file, format } => cmd_roundtrip(&file, format),
        Command::Derivations {
            file,
            out,
            transfer,
            format,
        } => cmd_derivations(&file, out.as_deref(), transfer, format),
        Command::Info { file, format } => cmd_info(&file, format),
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(failure) => {
            if !failure.message.is_empty() {
                eprintln!("error: {}", failure.message);
            }
            ExitCode::from(failure.code)
        }
    }
}

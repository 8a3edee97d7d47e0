//! Command-line front end. [`run`] is the whole program minus process exit,
//! so tests can drive it in-process.
//!
//! Exit codes: 0 ok, 1 parse or input error, 2 tolerance ambiguity,
//! 3 corpus mismatch.

use std::fmt::Write as _;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};

use crate::corpus::{self, ExampleOutcome};
use crate::io::{matrix_to_json, tidy, MatrixJson, PencilFile, ProblemFile, SolveReport};
use crate::matcore::CMatrix;
use crate::pencil::{format_complex, kcf_structure, kronecker_chains, MatrixPencil};
use crate::strat::{enumerate_covers, RegularBundle};
use crate::twopar::{delta_matrices, solve, RotateMode, SolveOptions};
use crate::{rng_from_seed, Error, Result, Tolerances};

pub const EXIT_OK: i32 = 0;
pub const EXIT_PARSE: i32 = 1;
pub const EXIT_AMBIGUITY: i32 = 2;
pub const EXIT_MISMATCH: i32 = 3;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Text,
}

#[derive(Debug, Parser)]
#[command(
    name = "sing2ep",
    version,
    about = "Singular two-parameter eigenvalue problems"
)]
pub struct Cli {
    /// Rank threshold for matrices evaluated at computed eigenvalues.
    #[arg(long, global = true, env = "SING2EP_TOL")]
    pub tol: Option<f64>,
    #[arg(long, global = true, default_value_t = 1)]
    pub seed: u64,
    /// `auto`, `none` or an angle in radians.
    #[arg(long, global = true, default_value = "auto", value_parser = parse_rotate)]
    pub rotate: RotateMode,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Solve a problem file.
    Solve { path: PathBuf },
    /// Kronecker structure of a pencil file {A, B}, or of both unrotated
    /// operator-determinant pencils of a problem file.
    Kcf { path: PathBuf },
    /// Print Δ₀, Δ₁, Δ₂ of a problem file.
    Delta { path: PathBuf },
    /// Bundle stratification queries.
    Strat {
        #[command(subcommand)]
        command: StratCommand,
    },
    /// The bundled example corpus.
    Examples {
        #[command(subcommand)]
        command: ExamplesCommand,
    },
}

#[derive(Debug, Subcommand)]
pub enum StratCommand {
    /// Bundles covering the given one, e.g. "{2,2}|{1}|inf:{1}".
    Covers { bundle: String },
}

#[derive(Debug, Subcommand)]
pub enum ExamplesCommand {
    List,
    Run {
        name: Option<String>,
        #[arg(long, conflicts_with = "name")]
        all: bool,
    },
}

fn parse_rotate(s: &str) -> std::result::Result<RotateMode, String> {
    match s {
        "auto" => Ok(RotateMode::Auto),
        "none" => Ok(RotateMode::None),
        _ => match s.parse::<f64>() {
            Ok(a) if a.is_finite() => Ok(RotateMode::Angle(a)),
            _ => Err(format!("expected auto, none or a finite angle, got `{s}`")),
        },
    }
}

/// Parses `args` (program name first), runs the command and returns the
/// exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            use clap::error::ErrorKind;
            let rendered = e.render().to_string();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = out.write_all(rendered.as_bytes());
                    EXIT_OK
                }
                _ => {
                    let _ = err.write_all(rendered.as_bytes());
                    EXIT_PARSE
                }
            };
        }
    };
    match execute(&cli) {
        Ok((text, code)) => {
            let _ = out.write_all(text.as_bytes());
            if !text.ends_with('\n') {
                let _ = out.write_all(b"\n");
            }
            code
        }
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            exit_code(&e)
        }
    }
}

pub fn exit_code(e: &Error) -> i32 {
    if e.is_ambiguity() {
        EXIT_AMBIGUITY
    } else {
        EXIT_PARSE
    }
}

pub fn tolerances(cli: &Cli) -> Result<Tolerances> {
    let mut tol = Tolerances::default();
    if let Some(t) = cli.tol {
        if !(t.is_finite() && t > 0.0 && t < 1.0) {
            return Err(Error::Parse(format!("--tol must lie in (0, 1), got {t}")));
        }
        tol.shifted_rank = t;
    }
    Ok(tol)
}

/// Runs a parsed command, returning its output and exit code.
pub fn execute(cli: &Cli) -> Result<(String, i32)> {
    let tol = tolerances(cli)?;
    let json = cli.format == Format::Json;
    match &cli.command {
        Command::Solve { path } => {
            let report = cmd_solve(path, cli.seed, cli.rotate, &tol)?;
            let code = if report.diagnostics.ambiguous {
                EXIT_AMBIGUITY
            } else {
                EXIT_OK
            };
            let text = if json {
                report.to_json()
            } else {
                report.to_text()
            };
            Ok((text, code))
        }
        Command::Kcf { path } => {
            let r = cmd_kcf(path, cli.seed, &tol)?;
            Ok((if json { to_json(&r) } else { r.to_text() }, EXIT_OK))
        }
        Command::Delta { path } => {
            let r = cmd_delta(path)?;
            Ok((if json { to_json(&r) } else { r.to_text() }, EXIT_OK))
        }
        Command::Strat {
            command: StratCommand::Covers { bundle },
        } => {
            let covers = cmd_strat_covers(bundle)?;
            Ok((
                if json {
                    to_json(&covers)
                } else {
                    covers.join("\n")
                },
                EXIT_OK,
            ))
        }
        Command::Examples {
            command: ExamplesCommand::List,
        } => {
            let names = corpus::names();
            let text = if json {
                to_json(&names)
            } else {
                let mut t = String::new();
                for n in &names {
                    let _ = writeln!(t, "{n}  {}", corpus::load(n)?.description);
                }
                t
            };
            Ok((text, EXIT_OK))
        }
        Command::Examples {
            command: ExamplesCommand::Run { name, all },
        } => {
            let names: Vec<&str> = match (name, all) {
                (Some(n), false) => vec![n.as_str()],
                (None, true) => corpus::names(),
                _ => return Err(Error::Parse("give an example name or --all".into())),
            };
            let outcomes = corpus::run(&names, cli.seed, &tol)?;
            let code = if outcomes.iter().all(|o| o.passed) {
                EXIT_OK
            } else {
                EXIT_MISMATCH
            };
            let text = if json {
                to_json(&outcomes)
            } else {
                outcomes_text(&outcomes)
            };
            Ok((text, code))
        }
    }
}

fn to_json<T: Serialize>(v: &T) -> String {
    serde_json::to_string_pretty(v).expect("report serialises")
}

pub fn cmd_solve(
    path: &Path,
    seed: u64,
    rotate: RotateMode,
    tol: &Tolerances,
) -> Result<SolveReport> {
    let file = ProblemFile::load(path)?;
    let p = file.to_problem()?;
    let r = solve(
        &p,
        &SolveOptions {
            rotate,
            seed,
            tol: *tol,
        },
    )?;
    Ok(SolveReport::new(&file.name, &r))
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PencilKcf {
    pub label: String,
    pub structure: String,
    pub chains: usize,
    pub max_chain_residual: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct KcfReport {
    pub pencils: Vec<PencilKcf>,
}

impl KcfReport {
    pub fn to_text(&self) -> String {
        let mut t = String::new();
        for p in &self.pencils {
            let _ = writeln!(
                t,
                "{}: {}  ({} chains, max residual {:.1e})",
                p.label, p.structure, p.chains, p.max_chain_residual
            );
        }
        t
    }
}

pub fn cmd_kcf(path: &Path, seed: u64, tol: &Tolerances) -> Result<KcfReport> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::Parse(format!("{}: {e}", path.display())))?;
    let value: serde_json::Value =
        serde_json::from_str(&text).map_err(|e| Error::Parse(e.to_string()))?;
    let pencils: Vec<(String, MatrixPencil)> = if value.get("W1").is_some() {
        let p = ProblemFile::parse(&text)?.to_problem()?;
        let (d0, d1, d2) = delta_matrices(&p);
        vec![
            ("Δ1 − λΔ0".into(), MatrixPencil::new(d1, d0.clone())?),
            ("Δ2 − μΔ0".into(), MatrixPencil::new(d2, d0)?),
        ]
    } else {
        let f = PencilFile::parse(&text)?;
        let label = f.name.clone().unwrap_or_else(|| "A − λB".into());
        vec![(label, f.to_pencil()?)]
    };
    let mut rng = rng_from_seed(seed);
    let mut out = Vec::new();
    for (label, p) in pencils {
        let s = kcf_structure(&p, &mut rng, tol)?;
        let chains = kronecker_chains(&p, &s, tol)?;
        let worst = chains.iter().map(|c| c.residual(&p)).fold(0.0, f64::max);
        out.push(PencilKcf {
            label,
            structure: s.to_string(),
            chains: chains.len(),
            max_chain_residual: worst,
        });
    }
    Ok(KcfReport { pencils: out })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[allow(non_snake_case)]
pub struct DeltaReport {
    pub name: String,
    pub D0: MatrixJson,
    pub D1: MatrixJson,
    pub D2: MatrixJson,
}

impl DeltaReport {
    pub fn to_text(&self) -> String {
        let mut t = String::new();
        for (label, m) in [("Δ0", &self.D0), ("Δ1", &self.D1), ("Δ2", &self.D2)] {
            let _ = writeln!(t, "{label} =");
            for row in m {
                let cells: Vec<String> = row
                    .iter()
                    .map(|z| format!("{:>6}", format_complex(crate::C64::new(z[0], z[1]))))
                    .collect();
                let _ = writeln!(t, "  {}", cells.join(" "));
            }
        }
        t
    }
}

fn tidy_matrix(m: &CMatrix) -> MatrixJson {
    matrix_to_json(&m.map(|z| crate::C64::new(tidy(z.re), tidy(z.im))))
}

pub fn cmd_delta(path: &Path) -> Result<DeltaReport> {
    let file = ProblemFile::load(path)?;
    let (d0, d1, d2) = delta_matrices(&file.to_problem()?);
    Ok(DeltaReport {
        name: file.name,
        D0: tidy_matrix(&d0),
        D1: tidy_matrix(&d1),
        D2: tidy_matrix(&d2),
    })
}

pub fn cmd_strat_covers(bundle: &str) -> Result<Vec<String>> {
    let b: RegularBundle = bundle.parse()?;
    let mut covers: Vec<String> = enumerate_covers(&b).iter().map(|c| c.to_string()).collect();
    covers.sort();
    covers.dedup();
    Ok(covers)
}

fn outcomes_text(outcomes: &[ExampleOutcome]) -> String {
    let mut t = String::new();
    for o in outcomes {
        let _ = writeln!(t, "{} {}", if o.passed { "PASS" } else { "FAIL" }, o.name);
        for c in o.checks.iter().filter(|c| !c.passed) {
            let _ = writeln!(t, "  {}: expected {}, got {}", c.what, c.expected, c.got);
        }
    }
    t
}

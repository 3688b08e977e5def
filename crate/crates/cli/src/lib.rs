//! `cm-glue`: JSON verification reports over the `cm-glue-core` library.
//!
//! [`run`] parses a command line, runs one subcommand and returns the exit code
//! together with the bytes destined for standard output and standard error.

pub mod checks;
pub mod commands;
pub mod golden;
pub mod report;

use std::ffi::OsString;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use serde::Serialize;
use serde_json::{json, Value};

use crate::commands::{CliError, Outcome};
use crate::golden::GoldenValues;
use crate::report::{Report, Status};

#[derive(Debug, Parser)]
#[command(
    name = "cm-glue",
    version,
    about = "Verification reports for CM lattices, involutions and gluing"
)]
pub struct Cli {
    /// Seed for the randomized suites.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Write this report into the golden directory and append an audit note.
    #[arg(long, global = true)]
    pub update_golden: bool,
    /// Golden directory used by --update-golden.
    #[arg(long, global = true, value_name = "DIR")]
    pub golden_dir: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args, Serialize)]
pub struct InvolutionArgs {
    /// Lattice preset (`quintic-std`, `identity:N[@field]`).
    #[arg(long, default_value = "quintic-std")]
    pub lattice: String,
    /// Matrix of the involution as JSON rows.
    #[arg(long, conflicts_with = "reference")]
    pub matrix: Option<String>,
    /// Reference involution α_j, j ∈ {0, 1, 2}.
    #[arg(long)]
    pub reference: Option<usize>,
    /// Use −α instead of α.
    #[arg(long)]
    pub negate: bool,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Classify an anti-unitary involution up to conjugacy.
    ClassifyInvolution(InvolutionArgs),
    /// Fixed lattice of an involution, its form and the saturation identity.
    FixedForm(InvolutionArgs),
    /// Enumerate short roots and check their hyperplane relations.
    Roots(RootsArgs),
    /// Involutions and components of a gluing local model.
    LocalModel(LocalModelArgs),
    /// Real stabilizer of a five-point configuration.
    Stabilizer(StabilizerArgs),
    /// Roots, stability, component index and stabilizer of a binary quintic.
    Quintic(QuinticArgs),
    /// Hyperbolic triangle group with given vertex orders.
    Triangle(TriangleArgs),
    /// Generator of the different ideal of a CM field.
    Different(DifferentArgs),
    /// Run the full verification suite.
    VerifyAll(VerifyAllArgs),
}

#[derive(Debug, Args, Serialize)]
pub struct RootsArgs {
    #[arg(long, default_value = "quintic-std")]
    pub lattice: String,
    /// Coefficient height bound.
    #[arg(long)]
    pub bound: i64,
    /// Classify all pairs of hyperplanes.
    #[arg(long)]
    pub check_orthogonality: bool,
}

#[derive(Debug, Args, Serialize)]
pub struct LocalModelArgs {
    #[arg(long)]
    pub n: usize,
    #[arg(long)]
    pub m: u32,
    #[arg(long)]
    pub a: usize,
    #[arg(long)]
    pub b: usize,
    /// Check the gluing equivalence relation by brute force.
    #[arg(long)]
    pub verify: bool,
}

#[derive(Debug, Args, Serialize)]
pub struct StabilizerArgs {
    /// JSON array of five points, each `[z, w]` or a single coordinate.
    #[arg(long)]
    pub points: String,
}

#[derive(Debug, Args, Serialize)]
pub struct QuinticArgs {
    /// Coefficients `a5,a4,a3,a2,a1,a0` of `Σ a_k x^k y^(5−k)`.
    #[arg(long, allow_hyphen_values = true)]
    pub coeffs: String,
}

#[derive(Debug, Args, Serialize)]
pub struct TriangleArgs {
    /// Vertex orders `p,q,r`.
    #[arg(long)]
    pub orders: String,
    /// Check angles, relations and the numeric area.
    #[arg(long)]
    pub verify: bool,
    /// Evaluate the arithmeticity criterion.
    #[arg(long)]
    pub arithmetic_check: bool,
}

#[derive(Debug, Args, Serialize)]
pub struct DifferentArgs {
    /// `cyclotomic:N` or `quadratic:D`.
    #[arg(long)]
    pub field: String,
}

#[derive(Debug, Args, Serialize)]
pub struct VerifyAllArgs {
    /// Coefficient height bound for the short-root check.
    #[arg(long, default_value_t = 2)]
    pub bound: i64,
}

/// Exit code and captured output of one invocation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Output {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::ClassifyInvolution(_) => "classify-involution",
            Command::FixedForm(_) => "fixed-form",
            Command::Roots(_) => "roots",
            Command::LocalModel(_) => "local-model",
            Command::Stabilizer(_) => "stabilizer",
            Command::Quintic(_) => "quintic",
            Command::Triangle(_) => "triangle",
            Command::Different(_) => "different",
            Command::VerifyAll(_) => "verify-all",
        }
    }

    fn inputs(&self, seed: u64) -> Value {
        let mut v = match self {
            Command::ClassifyInvolution(a) | Command::FixedForm(a) => serde_json::to_value(a),
            Command::Roots(a) => serde_json::to_value(a),
            Command::LocalModel(a) => serde_json::to_value(a),
            Command::Stabilizer(a) => serde_json::to_value(a),
            Command::Quintic(a) => serde_json::to_value(a),
            Command::Triangle(a) => serde_json::to_value(a),
            Command::Different(a) => serde_json::to_value(a),
            Command::VerifyAll(a) => serde_json::to_value(a),
        }
        .expect("arguments serialize");
        v["seed"] = json!(seed);
        v
    }

    fn execute(&self, seed: u64, golden: &GoldenValues) -> Result<Outcome, CliError> {
        match self {
            Command::ClassifyInvolution(a) => {
                commands::classify_involution(&commands::involution_from_args(
                    &a.lattice,
                    a.matrix.as_deref(),
                    a.reference,
                    a.negate,
                )?)
            }
            Command::FixedForm(a) => commands::fixed_form(&commands::involution_from_args(
                &a.lattice,
                a.matrix.as_deref(),
                a.reference,
                a.negate,
            )?),
            Command::Roots(a) => {
                commands::roots(&a.lattice, a.bound, a.check_orthogonality, golden)
            }
            Command::LocalModel(a) => commands::local_model(a.n, a.m, a.a, a.b, a.verify, seed),
            Command::Stabilizer(a) => commands::stabilizer_command(&a.points),
            Command::Quintic(a) => commands::quintic(&a.coeffs),
            Command::Triangle(a) => {
                commands::triangle(&a.orders, a.verify, a.arithmetic_check, golden)
            }
            Command::Different(a) => commands::different(&a.field, golden),
            Command::VerifyAll(a) => {
                let checks = checks::run_all(a.bound, seed, golden)?;
                let pass = checks.iter().all(|c| c.pass);
                let failed: Vec<u32> = checks.iter().filter(|c| !c.pass).map(|c| c.id).collect();
                Ok(Outcome {
                    results: json!({"checks": checks, "failed": failed}),
                    pass,
                })
            }
        }
    }
}

/// Arguments after the program name, minus the golden-file plumbing flags, so that
/// the recorded invocation reproduces the report.
fn recorded_args(args: &[OsString]) -> Vec<String> {
    let mut out = Vec::new();
    let mut it = args
        .iter()
        .skip(1)
        .map(|a| a.to_string_lossy().into_owned());
    while let Some(a) = it.next() {
        if a == "--update-golden" {
            continue;
        }
        if a == "--golden-dir" {
            it.next();
            continue;
        }
        if a.starts_with("--golden-dir=") {
            continue;
        }
        out.push(a);
    }
    out
}

/// Runs one invocation; `args` includes the program name.
pub fn run<I, T>(args: I) -> Output
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let args: Vec<OsString> = args.into_iter().map(Into::into).collect();
    let cli = match Cli::try_parse_from(&args) {
        Ok(c) => c,
        Err(e) => {
            let text = e.render().to_string();
            return if e.use_stderr() {
                Output {
                    code: 2,
                    stdout: String::new(),
                    stderr: text,
                }
            } else {
                // --help and --version
                Output {
                    code: 0,
                    stdout: text,
                    stderr: String::new(),
                }
            };
        }
    };
    let golden = GoldenValues::shipped();
    let inputs = cli.command.inputs(cli.seed);
    let (results, status, stderr) = match cli.command.execute(cli.seed, &golden) {
        Ok(o) => (
            o.results,
            if o.pass { Status::Pass } else { Status::Fail },
            String::new(),
        ),
        Err(e) => (
            json!({"error": e.to_string()}),
            Status::Error,
            format!("cm-glue: {e}\n"),
        ),
    };
    let report = Report::new(cli.command.name(), inputs, results, status);
    let stdout = report.to_canonical();
    let mut out = Output {
        code: status.exit_code(),
        stdout,
        stderr,
    };
    if cli.update_golden {
        let dir = cli.golden_dir.clone().unwrap_or_else(golden::default_dir);
        match golden::update(&dir, &recorded_args(&args), &out.stdout, status) {
            Ok(path) => out
                .stderr
                .push_str(&format!("golden report written to {}\n", path.display())),
            Err(e) => {
                out.stderr.push_str(&format!("cm-glue: {e}\n"));
                out.code = 2;
            }
        }
    }
    out
}

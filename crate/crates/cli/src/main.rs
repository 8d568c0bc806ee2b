mod commands;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde_json::{json, Value};

/// Batch tool for mod-p Breuil modules. Results are JSON on stdout, a short
/// summary goes to stderr.
#[derive(Parser, Debug)]
#[command(name = "breuil", version)]
struct Cli {
    /// Reject unknown fields and unreduced coefficients in input documents.
    #[arg(long, global = true)]
    strict: bool,

    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug, Clone, Copy)]
pub struct ParamArgs {
    #[arg(long)]
    pub p: u32,
    #[arg(long, default_value_t = 1)]
    pub e: u32,
    #[arg(long, default_value_t = 1)]
    pub r: u32,
    #[arg(long, default_value_t = 1)]
    pub f: u32,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Check the axioms of a module document.
    Validate { file: PathBuf },
    /// Adapted basis of a filtration presentation.
    Adapt { file: PathBuf },
    /// Basis of Hom(X, Y).
    Hom { source: PathBuf, target: PathBuf },
    /// Kernel of a morphism document.
    Kernel { file: PathBuf },
    /// Cokernel of a morphism document.
    Cokernel { file: PathBuf },
    /// All monodromy matrices compatible with (fil_exponents, G); "Nmat" may be omitted.
    SolveMonodromy { file: PathBuf },
    /// Shift classes of simple objects of exact period h.
    EnumerateSimples {
        #[command(flatten)]
        params: ParamArgs,
        #[arg(long)]
        h: usize,
    },
    /// Composition factors with their classifying rationals.
    Classify { file: PathBuf },
    /// Jordan-Hölder factors from the socle series.
    Jh { file: PathBuf },
    /// Largest semisimple subobject.
    Socle { file: PathBuf },
    /// Tame characters and inertia weights of the composition factors.
    TameWeights { file: PathBuf },
    /// Checks that every inertia weight lies in [0, er].
    SerreCheck { file: PathBuf },
    /// Solutions of x_i^p = w pi^{m_i} x_{i+1} in the monomial model.
    SolveSystem {
        #[command(flatten)]
        params: ParamArgs,
        /// Digit cycle n_1,...,n_h.
        #[arg(long, value_delimiter = ',', required = true)]
        digits: Vec<usize>,
        /// w = +1 or -1; defaults to (-1)^r.
        #[arg(long, allow_hyphen_values = true)]
        sign: Option<i8>,
    },
    /// Cyclotomic congruences at an odd prime.
    CycloCheck {
        #[arg(long)]
        p: u32,
    },
    /// A validated random object, reproducible from its seed (ChaCha8).
    RandomObject {
        #[command(flatten)]
        params: ParamArgs,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 2)]
        rank: usize,
    },
}

/// What a command hands back: the document for stdout, a line for stderr,
/// and whether the answer itself counts as a failure.
pub struct Report {
    pub body: Value,
    pub summary: String,
    pub ok: bool,
}

pub enum Failure {
    Usage(String),
    Domain(breuil::Error),
}

impl From<breuil::Error> for Failure {
    fn from(e: breuil::Error) -> Self {
        Failure::Domain(e)
    }
}

fn error_body(kind: &str, message: String, path: Option<String>) -> Value {
    let mut err = json!({ "kind": kind, "message": message });
    if let Some(path) = path {
        err["path"] = Value::from(path);
    }
    json!({ "schema": breuil::io::SCHEMA_VERSION, "error": err })
}

fn print(body: &Value) {
    println!("{}", serde_json::to_string(body).expect("values serialize"));
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match commands::run(&cli.command, cli.strict) {
        Ok(report) => {
            print(&report.body);
            eprintln!("{}", report.summary);
            if report.ok {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(Failure::Usage(msg)) => {
            print(&error_body("usage", msg.clone(), None));
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Domain(e)) => {
            let body = match &e {
                breuil::Error::Schema { path, message } => error_body("schema", message.clone(), Some(path.clone())),
                _ => error_body("domain", e.to_string(), None),
            };
            print(&body);
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
    }
}

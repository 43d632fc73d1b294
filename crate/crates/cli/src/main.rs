mod commands;
mod input;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use qudit_magic::system::DEFAULT_DIM_CAP;

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug)]
pub enum CliError {
    /// Bad input or configuration; exit code 2.
    Validation(String),
    /// A numerical check failed; exit code 3.
    Invariant(String),
}

impl From<qudit_magic::Error> for CliError {
    fn from(e: qudit_magic::Error) -> Self {
        match e {
            qudit_magic::Error::Internal(_) => CliError::Invariant(e.to_string()),
            _ => CliError::Validation(e.to_string()),
        }
    }
}

#[derive(Parser)]
#[command(name = "qudit-magic", version, about = "Magic measures, GKP lattice identities and quasiprobability simulators for qudits")]
struct Cli {
    /// Largest allowed Hilbert-space dimension d^n.
    #[arg(long, global = true, env = "QUDIT_MAGIC_MAX_DIM", default_value_t = DEFAULT_DIM_CAP)]
    max_dim: usize,
    /// Write JSON to this file instead of standard output.
    #[arg(long, short, global = true)]
    output: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// List the operators O_{l,m}, or print one of them.
    Basis(BasisArgs),
    /// Negativity, lp norms, stabilizer Renyi entropies and the hyperpolyhedral test.
    Measure(MeasureArgs),
    /// Discrete Wigner function (odd d).
    Wigner(StateArgs),
    /// Characteristic function d^{-n} Tr[rho P(u)^dagger].
    Char(CharArgs),
    /// Check the GKP cell-norm identities over a grid of dimensions and norms.
    GkpCheck(GkpCheckArgs),
    /// Estimate a Born probability by quasiprobability sampling.
    Simulate(SimulateArgs),
    /// Sample homodyne outcomes of a GKP state after a Gaussian unitary.
    GkpSim(GkpSimArgs),
    /// Enumerate the single-qudit stabilizer states.
    EnumerateStabilizers(EnumerateArgs),
}

#[derive(Args)]
pub struct StateArgs {
    /// Local dimension.
    #[arg(short)]
    pub d: usize,
    /// Number of qudits; inferred from the state spec when omitted.
    #[arg(short)]
    pub n: Option<usize>,
    /// zero, plus, t, mixed or a digit per qudit (comma separated), or random:SEED,
    /// random-mixed:SEED, matrix:FILE, stabilizer:FILE.
    #[arg(long, short)]
    pub state: String,
}

#[derive(Args)]
pub struct BasisArgs {
    #[arg(short)]
    pub d: usize,
    #[arg(short, default_value_t = 1)]
    pub n: usize,
    /// l coordinates of a single point (comma separated).
    #[arg(long, value_delimiter = ',', allow_negative_numbers = true, requires = "m")]
    pub l: Option<Vec<i64>>,
    /// m coordinates of a single point (comma separated).
    #[arg(long, value_delimiter = ',', allow_negative_numbers = true, requires = "l")]
    pub m: Option<Vec<i64>>,
    /// List labels over Z_{2d} instead of Z_d.
    #[arg(long)]
    pub full: bool,
}

#[derive(Args)]
pub struct MeasureArgs {
    #[command(flatten)]
    pub state: StateArgs,
    /// Norm orders for ||x||_p.
    #[arg(long, short, value_delimiter = ',', default_value = "1")]
    pub p: Vec<f64>,
    /// Renyi orders.
    #[arg(long, short, value_delimiter = ',', default_value = "2")]
    pub alpha: Vec<f64>,
    /// Require the Wigner negativity (fails for even d).
    #[arg(long)]
    pub wigner: bool,
    /// Report entropies in bits instead of nats.
    #[arg(long)]
    pub bits: bool,
}

#[derive(Args)]
pub struct CharArgs {
    #[command(flatten)]
    pub state: StateArgs,
    #[arg(long)]
    pub full: bool,
}

#[derive(Args)]
pub struct GkpCheckArgs {
    #[arg(long, value_delimiter = ',', default_value = "2,3,4,5")]
    pub d: Vec<usize>,
    #[arg(long, value_delimiter = ',', default_value = "1,2")]
    pub n: Vec<usize>,
    #[arg(long, value_delimiter = ',', default_value = "0.5,1,2,3")]
    pub p: Vec<f64>,
    /// Random states per (d, n), alternating pure and mixed.
    #[arg(long, default_value_t = 4)]
    pub states: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Skip (d, n) with d^n above this.
    #[arg(long, default_value_t = 25)]
    pub grid_cap: usize,
    /// Also write the rows as CSV to this file.
    #[arg(long)]
    pub csv: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
pub enum VariantArg {
    Basis,
    Characteristic,
}

#[derive(Args)]
pub struct SimulateArgs {
    /// Circuit JSON {d, n?, input, gates, measurement, epsilon?, p_fail?, seed?}.
    #[arg(long, short)]
    pub circuit: PathBuf,
    #[arg(long)]
    pub epsilon: Option<f64>,
    #[arg(long)]
    pub p_fail: Option<f64>,
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long, default_value_t = qudit_magic::qpsim::DEFAULT_STREAMS)]
    pub streams: usize,
    #[arg(long, value_enum, default_value = "basis")]
    pub variant: VariantArg,
    /// Also report the dense Born probability.
    #[arg(long)]
    pub exact: bool,
    /// Run the streams on one thread.
    #[arg(long)]
    pub sequential: bool,
}

#[derive(Args)]
pub struct GkpSimArgs {
    /// Circuit JSON {d, n?, state, S, displacement, samples, seed} or with `clifford` in place of S.
    #[arg(long, short)]
    pub circuit: PathBuf,
    #[arg(long)]
    pub samples: Option<u64>,
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long, default_value_t = qudit_magic::qpsim::DEFAULT_STREAMS)]
    pub streams: usize,
    /// Print the signed histogram instead of one line per sample.
    #[arg(long)]
    pub histogram: bool,
    #[arg(long)]
    pub sequential: bool,
}

#[derive(Args)]
pub struct EnumerateArgs {
    #[arg(short)]
    pub d: usize,
}

/// JSON documents to print, one per line.
pub type Output = Vec<Value>;

pub fn document(command: &str, body: Value) -> Value {
    let mut v = json!({ "schema_version": SCHEMA_VERSION, "command": command });
    if let (Some(out), Value::Object(extra)) = (v.as_object_mut(), body) {
        out.extend(extra);
    }
    v
}

fn run(cli: &Cli) -> Result<Output, CliError> {
    let cap = cli.max_dim;
    match &cli.command {
        Command::Basis(a) => commands::basis(a, cap),
        Command::Measure(a) => commands::measure(a, cap),
        Command::Wigner(a) => commands::wigner(a, cap),
        Command::Char(a) => commands::characteristic(a, cap),
        Command::GkpCheck(a) => commands::gkp_check(a, cap),
        Command::Simulate(a) => commands::simulate(a, cap),
        Command::GkpSim(a) => commands::gkp_sim(a, cap),
        Command::EnumerateStabilizers(a) => commands::enumerate(a),
    }
}

fn emit(cli: &Cli, docs: &[Value]) -> Result<(), CliError> {
    let mut text = String::new();
    for d in docs {
        text.push_str(&serde_json::to_string(d).map_err(|e| CliError::Invariant(e.to_string()))?);
        text.push('\n');
    }
    match &cli.output {
        Some(path) => std::fs::write(path, text).map_err(|e| CliError::Validation(format!("cannot write {}: {e}", path.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = run(&cli).and_then(|docs| {
        emit(&cli, &docs)?;
        // a failed check still prints its report before exiting
        match docs.last().and_then(|d| d.get("passed")) {
            Some(Value::Bool(false)) => Err(CliError::Invariant("identity residual above tolerance".into())),
            _ => Ok(()),
        }
    });
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            let (kind, msg, code) = match e {
                CliError::Validation(m) => ("validation", m, 2),
                CliError::Invariant(m) => ("invariant", m, 3),
            };
            eprintln!("{}", json!({ "schema_version": SCHEMA_VERSION, "error": { "kind": kind, "message": msg } }));
            ExitCode::from(code)
        }
    }
}

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use cuw_core::constructions::{
    abba_construction, blockdiag_construction, tensor_construction, DeltaStyle, LinearDesign, Partition, SlotDesign,
};
use cuw_core::extended_algebra::{verify_group_structure_verbose, GroupSpec};
use cuw_core::simulator::{
    default_rotation, run_monte_carlo_with, write_csv, GroupedSignalSet, SimulationConfig, DEFAULT_MAX_EXHAUSTIVE,
};
use cuw_core::verifier::{
    max_rate, min_nt, verify_cuw_verbose, verify_partition_decodable_verbose, RateResult, VerificationReport,
};
use serde_json::{json, Value};
use thiserror::Error;

use crate::design_file::{self, DesignFileError};

/// Largest `n + a` accepted by `group-check`; the closure check is quadratic in `|G|`.
pub const MAX_GROUP_EXPONENT: u32 = 12;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("{path}: {source}")]
    DesignFile {
        path: PathBuf,
        #[source]
        source: DesignFileError,
    },

    #[error("{0}")]
    Usage(String),

    #[error(transparent)]
    Core(#[from] cuw_core::Error),

    #[error("writing output: {0}")]
    Output(#[from] std::io::Error),
}

#[derive(Debug, Parser)]
#[command(
    name = "cuw",
    version,
    about = "Build, verify and simulate Clifford unitary weight space-time codes"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Build a maximal-rate design and write it as a design file.
    Construct(ConstructArgs),
    /// Check a design file exactly; exits 0 only if every check passes.
    Verify(VerifyArgs),
    /// Print the maximal rate and minimal number of antennas per group count.
    RateTable(RateTableArgs),
    /// Monte-Carlo comparison of per-group and exhaustive ML decoding.
    Simulate(SimulateArgs),
    /// Exhaustively check the group axioms of the extended Clifford group.
    GroupCheck(GroupCheckArgs),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Method {
    Blockdiag,
    Tensor,
    Abba,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum DeltaStyleArg {
    Diagonal,
    Regular,
}

impl From<DeltaStyleArg> for DeltaStyle {
    fn from(s: DeltaStyleArg) -> Self {
        match s {
            DeltaStyleArg::Diagonal => DeltaStyle::Diagonal,
            DeltaStyleArg::Regular => DeltaStyle::Regular,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum SlotArg {
    Scalar,
    Alamouti,
}

#[derive(Debug, Args)]
pub struct ConstructArgs {
    #[arg(long, value_enum)]
    pub method: Method,
    /// Number of groups.
    #[arg(long)]
    pub g: usize,
    /// Real variables per group (a power of two).
    #[arg(long)]
    pub lambda: usize,
    /// Realisation of the commuting involutions (tensor only).
    #[arg(long, value_enum)]
    pub delta_style: Option<DeltaStyleArg>,
    /// Block slot design (abba only); defaults to a COD built from the
    /// canonical gamma family with g weights.
    #[arg(long, value_enum)]
    pub slot: Option<SlotArg>,
    /// Output file; stdout if omitted.
    #[arg(short, long)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    pub file: PathBuf,
    /// JSON array of groups of 1-based variable indices; replaces the design's own partition.
    #[arg(long)]
    pub partition: Option<PathBuf>,
    /// Print the report as JSON.
    #[arg(long)]
    pub json: bool,
    /// List every violation, not only the first.
    #[arg(long)]
    pub verbose: bool,
}

#[derive(Debug, Args)]
pub struct RateTableArgs {
    #[arg(long, default_value_t = 8)]
    pub gmax: usize,
    /// Values of lambda for the minimal-antenna columns.
    #[arg(long, value_delimiter = ',', default_value = "2,4,8")]
    pub lambda: Vec<usize>,
    #[arg(long)]
    pub json: bool,
}

#[derive(Debug, Args)]
pub struct SimulateArgs {
    pub file: PathBuf,
    /// Comma-separated SNR points in dB.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true, required = true)]
    pub snr_db: Vec<f64>,
    #[arg(long, default_value_t = 1000)]
    pub trials: usize,
    #[arg(long, env = "CUW_SEED")]
    pub seed: Option<u64>,
    /// Decoding partition; the design's own partition if omitted.
    #[arg(long)]
    pub partition: Option<PathBuf>,
    /// Receive antennas.
    #[arg(long, default_value_t = 1)]
    pub nr: usize,
    /// Pairwise constellation rotation in radians; defaults to atan(2)/2.
    #[arg(long)]
    pub rotation: Option<f64>,
    /// Refuse exhaustive searches over more codewords than this.
    #[arg(long, default_value_t = DEFAULT_MAX_EXHAUSTIVE)]
    pub max_exhaustive: u128,
    /// CSV output; stdout if omitted.
    #[arg(short, long)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct GroupCheckArgs {
    /// Number of anticommuting generators.
    #[arg(long)]
    pub n: u32,
    /// Number of commuting generators.
    #[arg(long)]
    pub a: u32,
    #[arg(long)]
    pub json: bool,
    #[arg(long)]
    pub verbose: bool,
}

/// Runs one command. `Ok(false)` means a verification ran and failed.
pub fn run(cli: &Cli, out: &mut dyn Write, err: &mut dyn Write) -> Result<bool, CliError> {
    match &cli.command {
        Command::Construct(args) => construct(args, out, err),
        Command::Verify(args) => verify(args, out),
        Command::RateTable(args) => rate_table(args, out),
        Command::Simulate(args) => simulate(args, out, err),
        Command::GroupCheck(args) => group_check(args, out),
    }
}

fn read(path: &Path) -> Result<String, CliError> {
    fs::read_to_string(path).map_err(|source| CliError::Io {
        path: path.to_path_buf(),
        source,
    })
}

fn write_output(path: Option<&Path>, bytes: &[u8], out: &mut dyn Write) -> Result<(), CliError> {
    match path {
        Some(p) => fs::write(p, bytes).map_err(|source| CliError::Io {
            path: p.to_path_buf(),
            source,
        }),
        None => Ok(out.write_all(bytes)?),
    }
}

pub fn load_design(path: &Path) -> Result<LinearDesign, CliError> {
    design_file::deserialize(&read(path)?).map_err(|source| CliError::DesignFile {
        path: path.to_path_buf(),
        source,
    })
}

/// Accepts either a bare array of groups or an object with a `partition` key.
pub fn load_partition(path: &Path, k: usize) -> Result<Partition, CliError> {
    let bad = |msg: String| CliError::Usage(format!("{}: {msg}", path.display()));
    let value: Value = serde_json::from_str(&read(path)?).map_err(|e| bad(format!("malformed JSON: {e}")))?;
    let groups = match value {
        Value::Object(mut map) => map.remove("partition").unwrap_or(Value::Null),
        other => other,
    };
    let groups: Vec<Vec<usize>> = serde_json::from_value(groups)
        .map_err(|e| bad(format!("expected an array of arrays of 1-based indices: {e}")))?;
    Partition::from_one_based(&groups, k).map_err(|e| bad(e.to_string()))
}

pub fn build_design(args: &ConstructArgs) -> Result<LinearDesign, CliError> {
    if args.slot.is_some() && args.method != Method::Abba {
        return Err(CliError::Usage("--slot only applies to --method abba".into()));
    }
    if args.delta_style.is_some() && args.method != Method::Tensor {
        return Err(CliError::Usage("--delta-style only applies to --method tensor".into()));
    }
    let design = match args.method {
        Method::Blockdiag => blockdiag_construction(args.g, args.lambda)?,
        Method::Tensor => {
            let style = args.delta_style.unwrap_or(DeltaStyleArg::Diagonal).into();
            tensor_construction(args.g, args.lambda, style)?
        }
        Method::Abba => {
            if !args.lambda.is_power_of_two() {
                return Err(cuw_core::Error::InvalidLambda(args.lambda).into());
            }
            let slot = match args.slot {
                Some(SlotArg::Scalar) => SlotDesign::scalar(),
                Some(SlotArg::Alamouti) => SlotDesign::alamouti(),
                None => SlotDesign::clifford(args.g)?,
            };
            if slot.weights.len() != args.g {
                return Err(CliError::Usage(format!(
                    "the {} slot has {} weights, so --g must be {}",
                    slot.kind.name(),
                    slot.weights.len(),
                    slot.weights.len()
                )));
            }
            abba_construction(&slot, args.lambda.trailing_zeros())?
        }
    };
    Ok(design)
}

fn construct(args: &ConstructArgs, out: &mut dyn Write, err: &mut dyn Write) -> Result<bool, CliError> {
    let design = build_design(args)?;
    let text = design_file::serialize(&design);
    write_output(args.output.as_deref(), text.as_bytes(), out)?;
    let rate = RateResult::of(&design);
    writeln!(
        err,
        "{}: nt={} K={} rate={} (max {})",
        design.origin.method, design.nt, rate.k, rate.rate, rate.max_rate
    )?;
    Ok(true)
}

pub fn verification_report(
    design: &LinearDesign,
    partition: Option<&Partition>,
    verbose: bool,
) -> Result<VerificationReport, CliError> {
    let mut report = VerificationReport::new();
    match partition {
        Some(p) => report.extend("partition", verify_partition_decodable_verbose(design, p, verbose)?),
        None => {
            report.extend("cuw", verify_cuw_verbose(design, verbose));
            report.extend(
                "partition",
                verify_partition_decodable_verbose(design, &design.partition, verbose)?,
            );
        }
    }
    Ok(report)
}

fn verify(args: &VerifyArgs, out: &mut dyn Write) -> Result<bool, CliError> {
    let design = load_design(&args.file)?;
    let partition = args
        .partition
        .as_deref()
        .map(|p| load_partition(p, design.k()))
        .transpose()?;
    let report = verification_report(&design, partition.as_ref(), args.verbose)?;
    let rate = RateResult::of(&design);
    let used = partition.as_ref().unwrap_or(&design.partition);
    if args.json {
        let doc = json!({
            "checks": report.checks,
            "g": design.g,
            "k": rate.k,
            "lambda": design.lambda,
            "max_rate": rate.max_rate.to_string(),
            "nt": design.nt,
            "partition": used.to_one_based(),
            "passed": report.passed,
            "rate": rate.rate.to_string(),
        });
        writeln!(out, "{}", serde_json::to_string_pretty(&doc).expect("plain data"))?;
    } else {
        writeln!(
            out,
            "design: {} (nt={}, g={}, lambda={}, K={})",
            design.origin.method, design.nt, design.g, design.lambda, rate.k
        )?;
        writeln!(out, "rate: {} (max for g={}: {})", rate.rate, design.g, rate.max_rate)?;
        writeln!(out, "partition: {} groups", used.len())?;
        writeln!(out, "{report}")?;
    }
    Ok(report.passed)
}

/// One line of the rate table.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RateRow {
    pub g: usize,
    pub max_rate: num_rational::Ratio<u64>,
    pub min_nt: Vec<(usize, usize)>,
}

pub fn rate_rows(gmax: usize, lambdas: &[usize]) -> Result<Vec<RateRow>, CliError> {
    (1..=gmax)
        .map(|g| {
            Ok(RateRow {
                g,
                max_rate: max_rate(g)?,
                min_nt: lambdas
                    .iter()
                    .map(|&l| min_nt(g, l).map(|nt| (l, nt)))
                    .collect::<Result<_, _>>()?,
            })
        })
        .collect()
}

fn rate_table(args: &RateTableArgs, out: &mut dyn Write) -> Result<bool, CliError> {
    if args.gmax == 0 {
        return Err(CliError::Usage("--gmax must be at least 1".into()));
    }
    let rows = rate_rows(args.gmax, &args.lambda)?;
    if args.json {
        let doc: Vec<Value> = rows
            .iter()
            .map(|r| {
                json!({
                    "g": r.g,
                    "max_rate": r.max_rate.to_string(),
                    "min_nt": r.min_nt.iter().map(|&(l, nt)| json!({"lambda": l, "nt": nt})).collect::<Vec<_>>(),
                })
            })
            .collect();
        writeln!(out, "{}", serde_json::to_string_pretty(&doc).expect("plain data"))?;
        return Ok(true);
    }
    write!(out, "{:>3} {:>9}", "g", "max_rate")?;
    for l in &args.lambda {
        write!(out, " {:>10}", format!("nt(l={l})"))?;
    }
    writeln!(out)?;
    for r in &rows {
        write!(out, "{:>3} {:>9}", r.g, r.max_rate.to_string())?;
        for (_, nt) in &r.min_nt {
            write!(out, " {nt:>10}")?;
        }
        writeln!(out)?;
    }
    Ok(true)
}

fn simulate(args: &SimulateArgs, out: &mut dyn Write, err: &mut dyn Write) -> Result<bool, CliError> {
    let seed = args
        .seed
        .ok_or_else(|| CliError::Usage("no seed: pass --seed or set CUW_SEED".into()))?;
    let design = load_design(&args.file)?;
    let partition = match &args.partition {
        Some(p) => load_partition(p, design.k())?,
        None => design.partition.clone(),
    };
    let sets = GroupedSignalSet::default_for(&partition, args.rotation.unwrap_or_else(default_rotation));
    let config = SimulationConfig {
        nr: args.nr,
        max_exhaustive: args.max_exhaustive,
    };
    let rows = run_monte_carlo_with(&config, &design, &partition, &sets, &args.snr_db, args.trials, seed)?;
    let mut csv = Vec::new();
    write_csv(&rows, &mut csv)?;
    write_output(args.output.as_deref(), &csv, out)?;
    for r in &rows {
        writeln!(
            err,
            "snr {} dB: ser {:.4e}, agreement {}, max split residual {:.2e}",
            r.snr_db, r.ser, r.agreement, r.max_split_residual
        )?;
    }
    Ok(true)
}

fn group_check(args: &GroupCheckArgs, out: &mut dyn Write) -> Result<bool, CliError> {
    if args.n + args.a > MAX_GROUP_EXPONENT {
        return Err(CliError::Usage(format!(
            "n + a must be at most {MAX_GROUP_EXPONENT} for an exhaustive check"
        )));
    }
    let spec = GroupSpec::new(args.n, args.a);
    let report = verify_group_structure_verbose(&spec, args.verbose);
    if args.json {
        let doc = json!({
            "a": args.a,
            "checks": report.checks,
            "n": args.n,
            "order": spec.order(),
            "passed": report.passed,
        });
        writeln!(out, "{}", serde_json::to_string_pretty(&doc).expect("plain data"))?;
    } else {
        writeln!(out, "n={} a={} |G|={}", args.n, args.a, spec.order())?;
        writeln!(out, "{report}")?;
    }
    Ok(report.passed)
}

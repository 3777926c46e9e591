//! `pyent`: entropy estimation, hyperparameter diagnostics, marginal
//! Pitman-Yor pmfs and simulation runs from the command line.

mod input;

use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use pyent::format::fmt15;
use pyent::sim::{curve_sweep, gen_population, log_grid, run_scenario, sample_labeled, PopulationSpec, SimulationConfig};
use pyent::{
    chao_shen_entropy, dpym_entropy, miller_madow_entropy, mle_entropy, mpy_pmf, proposed_entropy, select_params, Candidate, EntropyEstimate,
    PyParams, SelectionConfig, SelectionDiagnostics, DEFAULT_TRUNCATION,
};

use input::{read_counts, InputFormat};

/// Failure classes, each with its own exit status.
#[derive(Debug)]
pub enum CliError {
    /// Unreadable input or configuration (exit 2).
    Input(String),
    /// Unknown method or invalid model parameters (exit 3).
    Invalid(String),
    /// Failure writing output (exit 1).
    Output(String),
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Input(_) => 2,
            CliError::Invalid(_) => 3,
            CliError::Output(_) => 1,
        }
    }

    fn message(&self) -> &str {
        match self {
            CliError::Input(m) | CliError::Invalid(m) | CliError::Output(m) => m,
        }
    }
}

impl From<io::Error> for CliError {
    fn from(e: io::Error) -> Self {
        CliError::Output(e.to_string())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum OutputFormat {
    Json,
    Text,
}

#[derive(Debug, Parser)]
#[command(name = "pyent", version, about = "Shannon entropy estimation for abundance data")]
struct Cli {
    /// Seed for commands that draw random numbers; overrides config seeds.
    #[arg(long, global = true)]
    seed: Option<u64>,
    #[arg(long, global = true, value_enum, default_value_t = OutputFormat::Json)]
    format: OutputFormat,
    /// Worker threads for simulations (default: all cores).
    #[arg(long, global = true)]
    threads: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Estimate the entropy of a count file.
    Estimate {
        file: PathBuf,
        /// mle, miller-madow, chao-shen, dpym or proposed.
        #[arg(long, default_value = "proposed")]
        method: String,
        /// Discount for `--method dpym`.
        #[arg(long)]
        d: Option<f64>,
        /// Concentration for `--method dpym`.
        #[arg(long)]
        alpha: Option<f64>,
        #[arg(long, value_enum, default_value_t = InputFormat::Lines)]
        input_format: InputFormat,
        /// Report in bits instead of nats.
        #[arg(long)]
        bits: bool,
        /// Minimum number of explicitly summed tail terms.
        #[arg(long, default_value_t = DEFAULT_TRUNCATION)]
        truncation: usize,
    },
    /// Show every hyperparameter candidate and the chosen pair.
    Select {
        file: PathBuf,
        #[arg(long, value_enum, default_value_t = InputFormat::Lines)]
        input_format: InputFormat,
    },
    /// Print the marginal Pitman-Yor pmf as `k,pmf` CSV.
    Pmf {
        #[arg(long)]
        d: f64,
        #[arg(long, allow_negative_numbers = true)]
        alpha: f64,
        #[arg(long)]
        k_max: u64,
    },
    /// Run a simulation config and write the result CSV.
    Simulate {
        config: PathBuf,
        /// Output file (default: stdout).
        #[arg(long)]
        out: Option<PathBuf>,
        /// Validate the config without running it.
        #[arg(long)]
        dry_run: bool,
    },
    /// KL divergence and its upper bound along a concentration grid, as CSV.
    Curves {
        /// dirichlet-symmetric(a), dirichlet-mixed(a, a-high) or zipf(s).
        #[arg(long, value_enum, default_value_t = CurveKind::DirichletSymmetric)]
        kind: CurveKind,
        /// Dirichlet parameter (low half for mixed), or the Zipf exponent.
        #[arg(long, default_value_t = 1.0)]
        a: f64,
        #[arg(long, default_value_t = 10.0)]
        a_high: f64,
        #[arg(long, default_value_t = 100)]
        k: usize,
        #[arg(long, default_value_t = 50)]
        n: u64,
        #[arg(long, default_value_t = 0.0)]
        d: f64,
        #[arg(long, default_value_t = 1e-3)]
        alpha_min: f64,
        #[arg(long, default_value_t = 1e3)]
        alpha_max: f64,
        #[arg(long, default_value_t = 61)]
        points: usize,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum CurveKind {
    DirichletSymmetric,
    DirichletMixed,
    Zipf,
}

/// `x` as a JSON number carrying 15 significant digits.
fn num(x: f64) -> Value {
    let rounded: f64 = fmt15(x).parse().unwrap_or(x);
    serde_json::Number::from_f64(rounded).map(Value::Number).unwrap_or(Value::Null)
}

fn opt_num(x: Option<f64>) -> Value {
    x.map(num).unwrap_or(Value::Null)
}

fn write_json(out: &mut impl Write, v: &Value) -> Result<(), CliError> {
    writeln!(out, "{}", serde_json::to_string_pretty(v).expect("serializable"))?;
    Ok(())
}

fn candidate_json(c: &Candidate) -> Value {
    json!({
        "label": c.label.as_str(),
        "d": num(c.params.d()),
        "alpha": num(c.params.alpha()),
        "objective": opt_num(c.objective),
    })
}

fn diagnostics_json(diag: &SelectionDiagnostics) -> Value {
    json!({
        "rule": diag.rule.describe(),
        "coverage": {
            "c0_hat": num(diag.coverage.c0_hat),
            "c1_hat": num(diag.coverage.c1_hat),
            "k_hat": num(diag.coverage.k_hat),
            "f_hat": num(diag.coverage.f_hat),
        },
        "candidates": diag.candidates.iter().map(candidate_json).collect::<Vec<_>>(),
        "chosen": candidate_json(&diag.chosen),
    })
}

fn write_candidate_table(out: &mut impl Write, diag: &SelectionDiagnostics) -> Result<(), CliError> {
    writeln!(out, "rule       {}", diag.rule.describe())?;
    writeln!(out, "{:<22} {:>22} {:>22} {:>22}", "label", "d", "alpha", "objective")?;
    for c in &diag.candidates {
        let obj = c.objective.map(fmt15).unwrap_or_else(|| "-".into());
        writeln!(out, "{:<22} {:>22} {:>22} {:>22}", c.label.as_str(), fmt15(c.params.d()), fmt15(c.params.alpha()), obj)?;
    }
    writeln!(out, "chosen     d = {}, alpha = {}", fmt15(diag.chosen.params.d()), fmt15(diag.chosen.params.alpha()))?;
    Ok(())
}

fn estimate(
    file: &Path,
    method: &str,
    d: Option<f64>,
    alpha: Option<f64>,
    input_format: InputFormat,
    bits: bool,
    truncation: usize,
    format: OutputFormat,
    out: &mut impl Write,
) -> Result<(), CliError> {
    let method = method.to_ascii_lowercase().replace('_', "-");
    let known = ["mle", "miller-madow", "chao-shen", "dpym", "dpym-fixed", "proposed"];
    if !known.contains(&method.as_str()) {
        return Err(CliError::Invalid(format!("unknown method {method:?}; expected one of mle, miller-madow, chao-shen, dpym, proposed")));
    }
    if truncation == 0 {
        return Err(CliError::Invalid("--truncation must be positive".into()));
    }
    let params = if method.starts_with("dpym") {
        let (Some(d), Some(alpha)) = (d, alpha) else {
            return Err(CliError::Invalid("--method dpym needs --d and --alpha".into()));
        };
        Some(PyParams::new(d, alpha).map_err(|e| CliError::Invalid(e.to_string()))?)
    } else {
        None
    };
    let y = read_counts(file, input_format)?;
    let est: EntropyEstimate = match method.as_str() {
        "mle" => mle_entropy(&y),
        "miller-madow" => miller_madow_entropy(&y),
        "chao-shen" => chao_shen_entropy(&y),
        "proposed" => proposed_entropy(&y, &SelectionConfig::default(), truncation).map_err(|e| CliError::Invalid(e.to_string()))?,
        _ => dpym_entropy(&y, &params.expect("checked above"), truncation).map_err(|e| CliError::Invalid(e.to_string()))?,
    };
    let (value, unit) = if bits { (est.value / std::f64::consts::LN_2, "bits") } else { (est.value, "nats") };
    match format {
        OutputFormat::Json => {
            let mut v = json!({
                "method": est.method.as_str(),
                "entropy": num(value),
                "unit": unit,
                "sample_size": y.sample_size(),
                "observed_species": y.observed_species(),
                "singletons": y.singletons(),
            });
            if let Some(p) = est.params_used {
                v["d"] = num(p.d());
                v["alpha"] = num(p.alpha());
            }
            if let Some(n) = est.truncation_n {
                v["truncation_n"] = json!(n);
            }
            if let Some(b) = est.remainder_bound {
                v["remainder_bound"] = num(if bits { b / std::f64::consts::LN_2 } else { b });
            }
            if let Some(diag) = &est.selection {
                v["selection"] = diagnostics_json(diag);
            }
            write_json(out, &v)
        }
        OutputFormat::Text => {
            writeln!(out, "method     {}", est.method)?;
            writeln!(out, "entropy    {} {unit}", fmt15(value))?;
            writeln!(out, "sample     N = {}, T = {}, m1 = {}", y.sample_size(), y.observed_species(), y.singletons())?;
            if let Some(p) = est.params_used {
                writeln!(out, "params     d = {}, alpha = {}", fmt15(p.d()), fmt15(p.alpha()))?;
            }
            if let Some(diag) = &est.selection {
                write_candidate_table(out, diag)?;
            }
            Ok(())
        }
    }
}

fn select(file: &Path, input_format: InputFormat, format: OutputFormat, out: &mut impl Write) -> Result<(), CliError> {
    let y = read_counts(file, input_format)?;
    let (_, diag) = select_params(&y, &SelectionConfig::default());
    match format {
        OutputFormat::Json => write_json(out, &diagnostics_json(&diag)),
        OutputFormat::Text => write_candidate_table(out, &diag),
    }
}

fn pmf(d: f64, alpha: f64, k_max: u64, out: &mut impl Write) -> Result<(), CliError> {
    let params = PyParams::new(d, alpha).map_err(|e| CliError::Invalid(e.to_string()))?;
    if k_max == 0 {
        return Err(CliError::Invalid("--k-max must be at least 1".into()));
    }
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["k", "pmf"]).map_err(|e| CliError::Output(e.to_string()))?;
    for k in 1..=k_max {
        let p = mpy_pmf(&params, k).map_err(|e| CliError::Invalid(e.to_string()))?;
        w.write_record([k.to_string(), fmt15(p)]).map_err(|e| CliError::Output(e.to_string()))?;
    }
    w.flush()?;
    Ok(())
}

fn simulate(
    config: &Path,
    out_path: Option<&Path>,
    dry_run: bool,
    seed: Option<u64>,
    pool: &rayon::ThreadPool,
    out: &mut impl Write,
) -> Result<(), CliError> {
    let text = std::fs::read_to_string(config).map_err(|e| CliError::Input(format!("{}: {e}", config.display())))?;
    let mut cfg = SimulationConfig::from_json(&text).map_err(|e| CliError::Input(e.to_string()))?;
    if let Some(seed) = seed {
        for s in &mut cfg.scenarios {
            s.master_seed = seed;
        }
    }
    let cells: usize = cfg.scenarios.iter().map(|s| s.sample_sizes.len() * s.estimators.len()).sum();
    if dry_run {
        eprintln!("config ok: {} scenarios, {} replications, {} result rows", cfg.scenarios.len(), cfg.task_count(), cells);
        return Ok(());
    }
    let mut result = pyent::sim::SimulationResult::default();
    for (i, s) in cfg.scenarios.iter().enumerate() {
        eprintln!("[{}/{}] scenario {} ({} sample sizes x {} replications)", i + 1, cfg.scenarios.len(), s.id, s.sample_sizes.len(), s.replications);
        let r = pool.install(|| run_scenario(s)).map_err(|e| CliError::Input(e.to_string()))?;
        let missing = r.rows.iter().filter(|row| row.reps < s.replications).count();
        if missing > 0 {
            eprintln!("  {missing} cells have failed replications");
        }
        result.rows.extend(r.rows);
    }
    match out_path {
        Some(p) => {
            let file = std::fs::File::create(p).map_err(|e| CliError::Output(format!("{}: {e}", p.display())))?;
            let mut file = io::BufWriter::new(file);
            result.write_csv(&mut file)?;
            file.flush()?;
            eprintln!("wrote {} rows to {}", result.rows.len(), p.display());
        }
        None => result.write_csv(out)?,
    }
    Ok(())
}

#[allow(clippy::too_many_arguments)]
fn curves(
    kind: CurveKind,
    a: f64,
    a_high: f64,
    k: usize,
    n: u64,
    d: f64,
    alpha_min: f64,
    alpha_max: f64,
    points: usize,
    seed: u64,
    out: &mut impl Write,
) -> Result<(), CliError> {
    let spec = match kind {
        CurveKind::DirichletSymmetric => PopulationSpec::dirichlet_symmetric(a, k),
        CurveKind::DirichletMixed => PopulationSpec::dirichlet_mixed(a, a_high, k),
        CurveKind::Zipf => PopulationSpec::zipf(a, k),
    };
    let invalid = |e: pyent::Error| CliError::Invalid(e.to_string());
    spec.validate().map_err(invalid)?;
    if !(d >= 0.0 && d < 1.0) || !(alpha_min > 0.0 && alpha_max >= alpha_min) || n == 0 {
        return Err(CliError::Invalid("need 0 <= d < 1, 0 < alpha-min <= alpha-max and n >= 1".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let p = gen_population(&spec, &mut rng).map_err(invalid)?;
    let sample = sample_labeled(&p, n, &mut rng).map_err(invalid)?;
    let rows = curve_sweep(&p, &sample, d, &log_grid(alpha_min, alpha_max, points)).map_err(invalid)?;
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["alpha", "kl", "bound_minus_entropy"]).map_err(|e| CliError::Output(e.to_string()))?;
    for r in rows {
        w.write_record([fmt15(r.alpha), fmt15(r.kl), fmt15(r.bound_gap)]).map_err(|e| CliError::Output(e.to_string()))?;
    }
    w.flush()?;
    Ok(())
}

fn run(cli: Cli) -> Result<(), CliError> {
    let stdout = io::stdout();
    let mut out = stdout.lock();
    match cli.command {
        Command::Estimate { file, method, d, alpha, input_format, bits, truncation } => {
            estimate(&file, &method, d, alpha, input_format, bits, truncation, cli.format, &mut out)
        }
        Command::Select { file, input_format } => select(&file, input_format, cli.format, &mut out),
        Command::Pmf { d, alpha, k_max } => pmf(d, alpha, k_max, &mut out),
        Command::Simulate { config, out: out_path, dry_run } => {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(cli.threads.unwrap_or(0))
                .build()
                .map_err(|e| CliError::Invalid(format!("thread pool: {e}")))?;
            simulate(&config, out_path.as_deref(), dry_run, cli.seed, &pool, &mut out)
        }
        Command::Curves { kind, a, a_high, k, n, d, alpha_min, alpha_max, points } => {
            curves(kind, a, a_high, k, n, d, alpha_min, alpha_max, points, cli.seed.unwrap_or(0), &mut out)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("pyent: {}", e.message());
            ExitCode::from(e.exit_code())
        }
    }
}

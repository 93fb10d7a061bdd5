use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use cohest::harness::{
    self, list_states, run_full, run_subset_scan, run_w_scan, state_qubits, to_csv, to_json,
    ExperimentConfig, HarnessError, ScanOutcome,
};
use cohest::sio;

#[derive(Parser)]
#[command(
    name = "cohest",
    version,
    about = "Bound the relative entropy of coherence of stabilizer-type states from a few simulated stabilizer measurements"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate l_c, u_c, and the exact coherence for one prepared state.
    Run(RunArgs),
    /// Evaluate l_c across a list of interval widths w on shared records.
    WScan(RunArgs),
    /// Scan the number m of measured stabilizer elements.
    SubsetScan(RunArgs),
    /// Infinite-shot mode: exact expectations and exact diagonal.
    Exact(RunArgs),
    /// Check the incoherent-channel construction behind the upper bound.
    VerifySio(SioArgs),
    /// Print the known state labels.
    ListStates,
}

#[derive(Args)]
struct RunArgs {
    /// JSON config file mirroring the ExperimentConfig fields; flags
    /// override file values.
    #[arg(long)]
    config: Option<PathBuf>,
    /// State label (see list-states).
    #[arg(long)]
    state: Option<String>,
    /// none | depolarizing:<lambda> | dephasing:<gamma>
    #[arg(long)]
    noise: Option<String>,
    /// Shots per measurement setting.
    #[arg(long)]
    shots: Option<u64>,
    /// Bypass sampling: exact expectations and diagonal.
    #[arg(long)]
    exact: bool,
    /// Comma-separated w values, e.g. 0,1,2,3.
    #[arg(long)]
    w: Option<String>,
    /// Subset-size range a..b for subset-scan, e.g. 1..7.
    #[arg(long)]
    m: Option<String>,
    /// Per-m cap: enumeration threshold and sample count.
    #[arg(long)]
    max_subsets: Option<usize>,
    #[arg(long)]
    seed: Option<u64>,
    /// Output path; stdout when omitted.
    #[arg(long)]
    out: Option<PathBuf>,
    /// csv | json
    #[arg(long)]
    format: Option<String>,
}

#[derive(Args)]
struct SioArgs {
    #[arg(long, default_value_t = 1)]
    seed: u64,
    #[arg(long, default_value_t = 200)]
    trials: usize,
    /// Comma-separated qubit counts for the random states.
    #[arg(long, default_value = "2,3")]
    qubits: String,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match dispatch(cli.command) {
        Ok(code) => code,
        Err(err) => {
            eprintln!("error: {err}");
            ExitCode::from(err.exit_code() as u8)
        }
    }
}

fn dispatch(command: Command) -> Result<ExitCode, HarnessError> {
    match command {
        Command::Run(args) => {
            let config = build_config(args, false)?;
            let report = run_full(&config)?;
            emit(&config, std::slice::from_ref(&report), None)?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Exact(args) => {
            let config = build_config(args, true)?;
            let report = run_full(&config)?;
            emit(&config, std::slice::from_ref(&report), None)?;
            Ok(ExitCode::SUCCESS)
        }
        Command::WScan(args) => {
            let config = build_config(args, false)?;
            let ScanOutcome { reports, summary } = run_w_scan(&config)?;
            print_summary(&summary);
            emit(&config, &reports, Some(&summary))?;
            Ok(ExitCode::SUCCESS)
        }
        Command::SubsetScan(args) => {
            let config = build_config(args, false)?;
            let ScanOutcome { reports, summary } = run_subset_scan(&config)?;
            print_summary(&summary);
            emit(&config, &reports, Some(&summary))?;
            Ok(ExitCode::SUCCESS)
        }
        Command::VerifySio(args) => verify_sio(args),
        Command::ListStates => {
            for label in list_states() {
                let n = state_qubits(&label).expect("registry label");
                println!("{label}\t{n} qubits");
            }
            Ok(ExitCode::SUCCESS)
        }
    }
}

fn build_config(args: RunArgs, force_exact: bool) -> Result<ExperimentConfig, HarnessError> {
    let mut config = match &args.config {
        Some(path) => {
            let text = std::fs::read_to_string(path)?;
            serde_json::from_str(&text)
                .map_err(|e| HarnessError::BadConfig(format!("{}: {e}", path.display())))?
        }
        None => ExperimentConfig::default(),
    };
    if let Some(state) = args.state {
        config.state = state;
    }
    if let Some(noise) = args.noise {
        config.noise = noise.parse()?;
    }
    if let Some(shots) = args.shots {
        config.shots = shots;
    }
    if args.exact || force_exact {
        config.exact = true;
    }
    if let Some(w) = args.w {
        config.w_values = parse_w_list(&w)?;
    }
    if let Some(m) = args.m {
        config.m_range = Some(parse_m_range(&m)?);
    }
    if let Some(cap) = args.max_subsets {
        config.exhaustive_threshold = cap;
        config.sample_count = cap;
    }
    if let Some(seed) = args.seed {
        config.seed = seed;
    }
    if let Some(out) = args.out {
        config.out = Some(out);
    }
    if let Some(format) = args.format {
        config.format = format.parse()?;
    }
    config.validate()?;
    Ok(config)
}

fn parse_w_list(s: &str) -> Result<Vec<f64>, HarnessError> {
    s.split(',')
        .map(|part| {
            part.trim()
                .parse::<f64>()
                .map_err(|_| HarnessError::BadConfig(format!("bad w value '{part}'")))
        })
        .collect()
}

fn parse_m_range(s: &str) -> Result<(usize, usize), HarnessError> {
    let (lo, hi) = s
        .split_once("..")
        .ok_or_else(|| HarnessError::BadConfig(format!("bad m range '{s}', expected a..b")))?;
    let lo = lo
        .trim()
        .parse()
        .map_err(|_| HarnessError::BadConfig(format!("bad m lower bound '{lo}'")))?;
    let hi = hi
        .trim()
        .parse()
        .map_err(|_| HarnessError::BadConfig(format!("bad m upper bound '{hi}'")))?;
    Ok((lo, hi))
}

fn emit(
    config: &ExperimentConfig,
    reports: &[cohest::BoundReport],
    summary: Option<&harness::ScanSummary>,
) -> Result<(), HarnessError> {
    let rendered = match config.format {
        harness::OutputFormat::Csv => to_csv(config, reports),
        harness::OutputFormat::Json => to_json(config, reports, summary),
    };
    match &config.out {
        Some(path) => std::fs::write(path, rendered)?,
        None => {
            let stdout = std::io::stdout();
            let mut lock = stdout.lock();
            lock.write_all(rendered.as_bytes())?;
        }
    }
    Ok(())
}

fn print_summary(summary: &harness::ScanSummary) {
    eprintln!(
        "{:>4}  {:>7}  {:>7}  {:>9}  {:>12}  {:>10}",
        summary.axis, "tried", "valid", "pct_valid", "mean_dist", "mean_l_c"
    );
    for row in &summary.rows {
        eprintln!(
            "{:>4}  {:>7}  {:>7}  {:>9.4}  {:>12}  {:>10}",
            row.key,
            row.tried,
            row.valid,
            row.pct_valid,
            row.mean_distance
                .map(|d| format!("{d:.5}"))
                .unwrap_or_else(|| "-".into()),
            row.mean_l_c
                .map(|l| format!("{l:.5}"))
                .unwrap_or_else(|| "-".into()),
        );
    }
    if summary.bound_violations > 0 {
        eprintln!(
            "bound violations (valid l_c above exact C_RE + 3·max sigma): {}",
            summary.bound_violations
        );
    }
}

fn verify_sio(args: SioArgs) -> Result<ExitCode, HarnessError> {
    use rand::SeedableRng;
    let qubits: Vec<usize> = args
        .qubits
        .split(',')
        .map(|part| {
            part.trim()
                .parse::<usize>()
                .ok()
                .filter(|n| (1..=6).contains(n))
                .ok_or_else(|| HarnessError::BadConfig(format!("bad qubit count '{part}'")))
        })
        .collect::<Result<_, _>>()?;
    if args.trials == 0 {
        return Err(HarnessError::BadConfig("trials must be positive".into()));
    }
    let mut rng = rand_chacha::ChaCha12Rng::seed_from_u64(args.seed);
    let summary = sio::verify_random_states(args.trials, &qubits, &mut rng);
    let pass = summary.failures == 0
        && summary.worst_reconstruction <= 1e-9
        && summary.worst_completeness <= 1e-9
        && summary.all_strict
        && summary.worst_bound_slack >= -1e-9;
    println!(
        "trials:                   {}\nworst reconstruction:     {:.3e}\nworst completeness:       {:.3e}\nall strictly incoherent:  {}\nworst S(d) − C_RE slack:  {:.3e}\nconstruction failures:    {}\nresult:                   {}",
        summary.trials,
        summary.worst_reconstruction,
        summary.worst_completeness,
        summary.all_strict,
        summary.worst_bound_slack,
        summary.failures,
        if pass { "PASS" } else { "FAIL" }
    );
    if pass {
        Ok(ExitCode::SUCCESS)
    } else {
        Ok(ExitCode::from(3))
    }
}

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use eur_core::correlations::SATURATION_TOL;
use eur_core::io::{load_state_file, resolve_observable};
use eur_core::{
    make_state, pair_from_observables, run_check, run_report, run_sweep, saturation_check,
    CheckOptions, Column, Error, FigurePreset, StateSpec, SweepSpec,
};

/// Exit status for numeric trouble and for bad input; clean runs exit 0.
const EXIT_NUMERIC: u8 = 1;
const EXIT_USAGE: u8 = 2;

#[derive(Parser)]
#[command(
    name = "eur",
    version,
    about = "Memory-assisted entropic uncertainty bounds"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate the bound ladder along a one-parameter state family and write CSV.
    Sweep(SweepArgs),
    /// Check the bound invariants on seeded random three-qubit states.
    Check(CheckArgs),
    /// Print the full bound report of a state file as JSON.
    Report(ReportArgs),
    /// Print SSA / Koashi-Winter / conservation-law residuals as JSON.
    CheckSaturation(SaturationArgs),
}

#[derive(Args)]
struct SweepArgs {
    /// Figure preset: fig1, fig2, fig3 or fig4.
    #[arg(long, conflicts_with_all = ["state", "param", "from", "to", "steps", "obs_x", "obs_z"])]
    preset: Option<String>,
    /// State family with fixed parameters, e.g. `gw:phi=0.785398163397`.
    #[arg(long)]
    state: Option<String>,
    /// Swept parameter name.
    #[arg(long)]
    param: Option<String>,
    #[arg(long, allow_negative_numbers = true)]
    from: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    to: Option<f64>,
    #[arg(long)]
    steps: Option<usize>,
    /// Observable token (sigma1, sigma2, sigma3) or JSON file.
    #[arg(long)]
    obs_x: Option<String>,
    #[arg(long)]
    obs_z: Option<String>,
    /// Comma-separated subset of report columns (default: all).
    #[arg(long, value_delimiter = ',')]
    columns: Option<Vec<String>>,
    /// Output file; standard output when omitted.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct CheckArgs {
    #[arg(long, default_value_t = 1000)]
    n: usize,
    #[arg(long, default_value_t = 42)]
    seed: u64,
    #[arg(long, default_value_t = 1e-9)]
    tol: f64,
    /// Random observable pairs per state.
    #[arg(long, default_value_t = 5)]
    pairs: usize,
    /// Emit the summary as JSON.
    #[arg(long)]
    json: bool,
}

#[derive(Args)]
struct ReportArgs {
    #[arg(long)]
    state_file: PathBuf,
    #[arg(long, default_value = "sigma1")]
    obs_x: String,
    #[arg(long, default_value = "sigma3")]
    obs_z: String,
    /// Validation tolerance for the state file.
    #[arg(long, default_value_t = 1e-10)]
    tol: f64,
}

#[derive(Args)]
struct SaturationArgs {
    #[arg(long, conflicts_with = "preset", required_unless_present = "preset")]
    state_file: Option<PathBuf>,
    /// Named state, e.g. `ghz`, `bell`, `gw:theta=1.2,phi=0.4`.
    #[arg(long)]
    preset: Option<String>,
    #[arg(long, default_value = "sigma1")]
    obs_x: String,
    #[arg(long, default_value = "sigma3")]
    obs_z: String,
    /// Slack below which the state is flagged as SSA-saturating.
    #[arg(long, default_value_t = SATURATION_TOL)]
    tol: f64,
}

fn exit_code(err: &Error) -> u8 {
    if err.is_numeric() {
        EXIT_NUMERIC
    } else {
        EXIT_USAGE
    }
}

fn missing(flag: &str) -> Error {
    Error::Usage(format!("--{flag} is required without --preset"))
}

fn sweep_spec(args: &SweepArgs) -> Result<SweepSpec, Error> {
    let mut spec = match &args.preset {
        Some(p) => p.parse::<FigurePreset>()?.expand(),
        None => {
            let state: StateSpec = args
                .state
                .as_deref()
                .ok_or_else(|| missing("state"))?
                .parse()?;
            let param = args.param.as_deref().ok_or_else(|| missing("param"))?;
            let mut spec = SweepSpec::new(
                state,
                param,
                args.from.ok_or_else(|| missing("from"))?,
                args.to.ok_or_else(|| missing("to"))?,
                args.steps.ok_or_else(|| missing("steps"))?,
            );
            if let Some(x) = &args.obs_x {
                spec.obs_x = resolve_observable(x)?;
            }
            if let Some(z) = &args.obs_z {
                spec.obs_z = resolve_observable(z)?;
            }
            spec
        }
    };
    if let Some(cols) = &args.columns {
        spec.columns = cols
            .iter()
            .map(|c| c.parse::<Column>())
            .collect::<Result<_, _>>()?;
    }
    Ok(spec)
}

fn sweep(args: SweepArgs) -> Result<u8, Error> {
    let spec = sweep_spec(&args)?;
    spec.validate()?;
    let stats = match &args.out {
        Some(path) => {
            let mut w = BufWriter::new(File::create(path)?);
            let stats = run_sweep(&spec, &mut w)?;
            w.flush()?;
            stats
        }
        None => {
            let stdout = io::stdout();
            let mut w = BufWriter::new(stdout.lock());
            let stats = run_sweep(&spec, &mut w)?;
            w.flush()?;
            stats
        }
    };
    if stats.failures > 0 {
        eprintln!("{} of {} grid points failed", stats.failures, stats.rows);
        return Ok(EXIT_NUMERIC);
    }
    Ok(0)
}

fn check(args: CheckArgs) -> Result<u8, Error> {
    let summary = run_check(CheckOptions {
        n: args.n,
        seed: args.seed,
        tol: args.tol,
        pairs_per_state: args.pairs,
    })?;
    if args.json {
        println!(
            "{}",
            serde_json::to_string_pretty(&summary).expect("summary serializes")
        );
    } else {
        println!("{summary}");
    }
    Ok(if summary.passed() { 0 } else { EXIT_NUMERIC })
}

fn report(args: ReportArgs) -> Result<u8, Error> {
    let report = run_report(&args.state_file, &args.obs_x, &args.obs_z, args.tol)?;
    println!(
        "{}",
        serde_json::to_string_pretty(&report).expect("report serializes")
    );
    Ok(0)
}

fn check_saturation(args: SaturationArgs) -> Result<u8, Error> {
    let rho = match (&args.state_file, &args.preset) {
        (Some(path), _) => load_state_file(path)?,
        (None, Some(p)) => make_state(&p.parse::<StateSpec>()?)?,
        (None, None) => return Err(Error::Usage("--state-file or --preset is required".into())),
    };
    let pair = pair_from_observables(
        &resolve_observable(&args.obs_x)?,
        &resolve_observable(&args.obs_z)?,
    )?;
    let report = saturation_check(&rho, &pair, args.tol)?;
    println!(
        "{}",
        serde_json::to_string_pretty(&report).expect("report serializes")
    );
    Ok(0)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Sweep(a) => sweep(a),
        Command::Check(a) => check(a),
        Command::Report(a) => report(a),
        Command::CheckSaturation(a) => check_saturation(a),
    };
    match result {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}

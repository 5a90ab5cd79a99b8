//! `uavris` — BER experiments for a UAV-mounted-RIS NOMA downlink.
//!
//! Exit codes: 0 success, 1 configuration error, 2 runtime or numerical
//! error, 3 validation report contains flagged points.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::{Parser, Subcommand};
use uavris_cli::config::ExperimentConfig;
use uavris_cli::{parse_config, point_rows, presets, report, rows, runner, sweep_rows};

#[derive(Parser)]
#[command(
    name = "uavris",
    version,
    about = "Closed-form and Monte-Carlo BER experiments for a UAV-mounted-RIS NOMA downlink"
)]
struct Cli {
    #[command(subcommand)]
    verb: Verb,
    /// Experiment config file (`section.key = value` lines).
    #[arg(long, global = true, value_name = "PATH")]
    config: Option<PathBuf>,
    /// Master seed for all Monte-Carlo streams.
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Monte-Carlo trials per operating point.
    #[arg(long, global = true)]
    trials: Option<u64>,
    /// Closed-form bookkeeping: `consistent` or `paper`.
    #[arg(long, global = true)]
    mode: Option<String>,
    /// Output CSV path (defaults to `<verb>.csv`).
    #[arg(long, global = true, value_name = "PATH")]
    out: Option<PathBuf>,
    /// Worker threads for the simulation (defaults to all cores).
    #[arg(long, global = true)]
    threads: Option<usize>,
}

#[derive(Subcommand, Clone, Copy)]
enum Verb {
    /// Evaluate one operating point with every engine.
    Point,
    /// Run the config's sweep.
    Sweep,
    /// SNR sweep under impairments: N in {16,32,64}, both power splits, no-RIS baseline.
    Fig2,
    /// SNR sweep, ideal vs impaired hardware: N in {16,32,64} plus baseline.
    Fig3,
    /// Altitude sweep of the system BER: NOMA vs OMA, two LoS probabilities.
    Fig4,
    /// Compare closed-form averages against simulation and flag disagreements.
    Validate,
}

impl Verb {
    fn default_out(self) -> &'static str {
        match self {
            Verb::Point => "point.csv",
            Verb::Sweep => "sweep.csv",
            Verb::Fig2 => "fig2.csv",
            Verb::Fig3 => "fig3.csv",
            Verb::Fig4 => "fig4.csv",
            Verb::Validate => "validate.csv",
        }
    }
}

fn load_config(cli: &Cli) -> Result<ExperimentConfig, String> {
    let mut cfg = match &cli.config {
        Some(path) => {
            let text = std::fs::read_to_string(path)
                .map_err(|e| format!("cannot read {}: {e}", path.display()))?;
            parse_config(&text).map_err(|e| format!("{}: {e}", path.display()))?
        }
        None => ExperimentConfig::default(),
    };
    if let Some(seed) = cli.seed {
        cfg.seed = seed;
    }
    if let Some(trials) = cli.trials {
        if trials == 0 {
            return Err("--trials must be at least 1".to_string());
        }
        cfg.trials = trials;
    }
    if let Some(mode) = &cli.mode {
        cfg.mode = mode.parse().map_err(|e| format!("--mode: {e}"))?;
    }
    Ok(cfg)
}

fn run(cli: &Cli) -> Result<ExitCode, (u8, String)> {
    let cfg = load_config(cli).map_err(|msg| (1, msg))?;
    if let Some(threads) = cli.threads {
        rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build_global()
            .map_err(|e| (2, format!("cannot configure {threads} worker threads: {e}")))?;
    }
    let out_path = cli
        .out
        .clone()
        .or_else(|| cfg.output.clone().map(PathBuf::from))
        .unwrap_or_else(|| PathBuf::from(cli.verb.default_out()));

    let runtime = |e: runner::RunError| (2, e.to_string());
    let (rows, flagged) = match cli.verb {
        Verb::Point => (point_rows(&cfg).map_err(runtime)?, 0),
        Verb::Sweep => (sweep_rows(&cfg).map_err(runtime)?, 0),
        Verb::Fig2 => (runner::run_all(&cfg, &presets::fig2(&cfg)).map_err(runtime)?, 0),
        Verb::Fig3 => (runner::run_all(&cfg, &presets::fig3(&cfg)).map_err(runtime)?, 0),
        Verb::Fig4 => (runner::run_all(&cfg, &presets::fig4(&cfg)).map_err(runtime)?, 0),
        Verb::Validate => {
            let report = report::validate(&cfg).map_err(runtime)?;
            print!("{}", report.render());
            let flagged = report.flagged();
            (report.rows, flagged)
        }
    };
    rows::write_csv(&out_path, &rows).map_err(|e| (2, e.to_string()))?;
    println!("wrote {} rows to {}", rows.len(), out_path.display());
    if let Verb::Point = cli.verb {
        for row in &rows {
            println!(
                "{} {} ber={}",
                row.user,
                row.engine,
                rows::fmt_sig10(row.ber)
            );
        }
    }
    if flagged > 0 {
        eprintln!("{flagged} validation point(s) flagged");
        return Ok(ExitCode::from(3));
    }
    Ok(ExitCode::SUCCESS)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) => {
            print!("{e}");
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            eprint!("{e}");
            return ExitCode::from(1);
        }
    };
    match run(&cli) {
        Ok(code) => code,
        Err((code, message)) => {
            eprintln!("error: {message}");
            ExitCode::from(code)
        }
    }
}

//! Command-line driver for the `ulabeam` experiments.
//!
//! Two subcommands mirror the two experiments: `sweep` scores every
//! configured beamformer family across its full parameter range, `match`
//! tunes each family to the target broadband white-noise gain. Both write
//! CSV files plus a `run_manifest.txt` into the output directory and print
//! a summary table to standard output.
//!
//! Exit codes: `0` success, `1` runtime failure (design, metric, or I/O),
//! `2` configuration error (bad file, bad flag value, bad combination).

use clap::{Args, Parser, Subcommand};
use std::path::PathBuf;
use std::process::ExitCode;
use ulabeam::experiment::{run, ExperimentConfig, ExperimentError, Overrides, RunScope};

#[derive(Parser)]
#[command(
    name = "ulabeam",
    version,
    about = "Design and score fixed beamformers on a uniform linear microphone array"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Sweep each family across its parameter range; write wng_*, df_*,
    /// and wxd_* CSV curves of the broadband WNG/DF trade-off.
    Sweep(CommonArgs),
    /// Tune each family to the target broadband WNG; write freq_df_* CSV
    /// curves of the matched designs' per-frequency directivity.
    #[command(name = "match")]
    MatchWng(CommonArgs),
}

#[derive(Args)]
struct CommonArgs {
    /// TOML config file; the flags below override its values.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Number of sensors.
    #[arg(long)]
    sensors: Option<usize>,
    /// Inter-sensor spacing in metres.
    #[arg(long)]
    spacing_m: Option<f64>,
    /// Band lower edge in Hz.
    #[arg(long)]
    f_lo: Option<f64>,
    /// Band upper edge in Hz.
    #[arg(long)]
    f_hi: Option<f64>,
    /// Number of frequency bins.
    #[arg(long)]
    bins: Option<usize>,
    /// Target broadband white-noise gain in dB.
    #[arg(long)]
    target_wng_db: Option<f64>,
    /// Output directory for CSVs and the manifest.
    #[arg(long)]
    out: Option<PathBuf>,
}

impl CommonArgs {
    fn overrides(&self) -> Overrides {
        Overrides {
            sensors: self.sensors,
            spacing_m: self.spacing_m,
            f_lo: self.f_lo,
            f_hi: self.f_hi,
            bins: self.bins,
            target_wng_db: self.target_wng_db,
            out: self.out.clone(),
        }
    }

    fn load(&self) -> Result<ExperimentConfig, ulabeam::experiment::ConfigError> {
        let overrides = self.overrides();
        match &self.config {
            Some(path) => ExperimentConfig::from_file(path, &overrides),
            None => ExperimentConfig::from_toml_str("", &overrides),
        }
    }
}

fn report_error(err: &dyn std::error::Error) {
    eprintln!("error: {err}");
    let mut cause = err.source();
    while let Some(c) = cause {
        eprintln!("  caused by: {c}");
        cause = c.source();
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (args, scope) = match &cli.command {
        Command::Sweep(a) => (a, RunScope::SweepOnly),
        Command::MatchWng(a) => (a, RunScope::MatchOnly),
    };

    let config = match args.load() {
        Ok(c) => c,
        Err(e) => {
            report_error(&e);
            return ExitCode::from(2);
        }
    };

    match run(&config, scope) {
        Ok(report) => {
            print!("{}", report.summary);
            println!(
                "wrote {} files to {}",
                report.files.len(),
                config.out_dir.display()
            );
            ExitCode::SUCCESS
        }
        Err(e) => {
            report_error(&e);
            // A config-class failure surfacing late is still a config error.
            if matches!(e, ExperimentError::Config(_)) {
                ExitCode::from(2)
            } else {
                ExitCode::from(1)
            }
        }
    }
}

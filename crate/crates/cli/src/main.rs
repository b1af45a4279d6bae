//! `oamsim`: run OAM dephasing experiments from config files or presets.

use std::fmt::Write as _;
use std::io::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Parser, Subcommand, ValueEnum};

use oam_dephasing::harness::{
    compare_analytic, emit, format_significant, render_svg, run_experiment, sweep_l, to_csv_string, CompareRow,
    CompareStatus, ExperimentConfig, FidelityCurve, OutputFormat, Preset,
};
use oam_dephasing::Executor;

#[derive(Parser, Debug)]
#[command(name = "oamsim", version, about = "Dephasing of OAM photon qubits in fiber, with and without CPMG decoupling")]
struct Cli {
    /// Override the master seed.
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Override the number of Monte Carlo trials.
    #[arg(long, global = true)]
    trials: Option<usize>,
    /// Output file; stdout when omitted.
    #[arg(long, global = true, value_name = "PATH")]
    out: Option<PathBuf>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Csv)]
    format: Format,
    /// Worker threads (default: all cores). Results do not depend on it.
    #[arg(long, global = true)]
    workers: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Fidelity along the fiber for every configured l.
    Simulate { config: PathBuf },
    /// End-of-fiber fidelity, one row per l.
    SweepL { config: PathBuf },
    /// Monte Carlo against the closed form (fully correlated noise only).
    /// Exits with status 2 if any in-regime row fails.
    Compare { config: PathBuf },
    /// Run a built-in figure experiment.
    Preset {
        #[arg(value_parser = ["fig1", "fig2", "fig3", "fig4", "fig5"])]
        name: String,
    },
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Format {
    Csv,
    Svg,
}

impl From<Format> for OutputFormat {
    fn from(f: Format) -> Self {
        match f {
            Format::Csv => OutputFormat::Csv,
            Format::Svg => OutputFormat::Svg,
        }
    }
}

impl Cli {
    fn executor(&self) -> Result<Executor> {
        match self.workers {
            None => Ok(Executor::Parallel),
            Some(0) => bail!("--workers must be at least 1"),
            Some(1) => Ok(Executor::Sequential),
            Some(w) => Ok(Executor::Workers(w)),
        }
    }

    fn apply_overrides(&self, mut cfg: ExperimentConfig) -> Result<ExperimentConfig> {
        if let Some(seed) = self.seed {
            cfg.master_seed = seed;
        }
        if let Some(trials) = self.trials {
            cfg.trials = trials;
        }
        cfg.validate().context("invalid command-line override")?;
        Ok(cfg)
    }
}

fn load(path: &Path) -> Result<ExperimentConfig> {
    ExperimentConfig::from_path(path).with_context(|| format!("cannot load config {}", path.display()))
}

fn write_curve(cli: &Cli, curve: &FidelityCurve) -> Result<()> {
    let format = OutputFormat::from(cli.format);
    match &cli.out {
        Some(path) => {
            emit(curve, format, path)?;
            eprintln!("wrote {} rows to {}", curve.rows.len(), path.display());
        }
        None => {
            let body = match format {
                OutputFormat::Csv => to_csv_string(curve),
                OutputFormat::Svg => render_svg(curve)?,
            };
            std::io::stdout().write_all(body.as_bytes()).context("cannot write to stdout")?;
        }
    }
    Ok(())
}

fn compare_csv(rows: &[CompareRow]) -> String {
    let mut out = String::from("distance_m,l,abs_error,stderr_mc,regime_parameter,status\n");
    for r in rows {
        let _ = writeln!(
            out,
            "{},{},{},{},{},{}",
            format_significant(r.distance_m),
            r.l,
            format_significant(r.abs_error),
            format_significant(r.stderr_mc),
            format_significant(r.regime_parameter),
            r.status.as_str()
        );
    }
    out
}

fn run(cli: &Cli) -> Result<ExitCode> {
    let exec = cli.executor()?;
    match &cli.command {
        Command::Simulate { config } => {
            let cfg = cli.apply_overrides(load(config)?)?;
            write_curve(cli, &run_experiment(&cfg, exec)?)?;
        }
        Command::SweepL { config } => {
            let cfg = cli.apply_overrides(load(config)?)?;
            write_curve(cli, &sweep_l(&cfg, exec)?)?;
        }
        Command::Preset { name } => {
            let preset: Preset = name.parse()?;
            let cfg = cli.apply_overrides(preset.config())?;
            write_curve(cli, &preset.run(&cfg, exec)?)?;
        }
        Command::Compare { config } => {
            if matches!(cli.format, Format::Svg) {
                bail!("compare writes a CSV report; --format svg is not supported");
            }
            let cfg = cli.apply_overrides(load(config)?)?;
            let rows = compare_analytic(&cfg, exec)?;
            let body = compare_csv(&rows);
            match &cli.out {
                Some(path) => {
                    std::fs::write(path, body).with_context(|| format!("cannot write {}", path.display()))?
                }
                None => std::io::stdout().write_all(body.as_bytes()).context("cannot write to stdout")?,
            }
            let failed = rows.iter().filter(|r| r.status == CompareStatus::Fail).count();
            let flagged = rows.iter().filter(|r| r.status == CompareStatus::OutOfRegime).count();
            eprintln!(
                "{} rows: {} pass, {failed} fail, {flagged} out of regime",
                rows.len(),
                rows.len() - failed - flagged
            );
            if failed > 0 {
                return Ok(ExitCode::from(2));
            }
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("oamsim: error: {e:#}");
            ExitCode::FAILURE
        }
    }
}

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use qotto::Variant;
use qotto_cli::commands::{self, correlations_default, cycle_default};
use qotto_cli::config::{RawConfig, Settings};
use qotto_cli::sweep::SweepSpec;
use qotto_cli::{verify, CliError};

/// Quantum Otto engine fuelled by thermally correlated atom pairs.
#[derive(Parser)]
#[command(name = "qotto", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Discord and concurrence of the pairs against the coupling xi.
    Correlations(Common),
    /// Closed-form cycle observables along a sweep.
    Cycle(Common),
    /// Cross-check steady state, strokes, moments, fluctuation theorem and sampling.
    Verify(Common),
    /// Monte Carlo histogram of single-cycle work and heat.
    Sample(Common),
}

#[derive(Args)]
struct Common {
    /// `key = value` file; flags override its entries.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Output file (default stdout).
    #[arg(long)]
    out: Option<PathBuf>,
    /// Fock cutoff per mode (verify, sample).
    #[arg(long)]
    dim: Option<usize>,
    #[arg(long)]
    seed: Option<u64>,
    /// Monte Carlo cycles.
    #[arg(long)]
    samples: Option<usize>,
    /// hot-nonthermal or cold-nonthermal.
    #[arg(long, value_parser = parse_variant)]
    variant: Option<Variant>,
    /// Extra `key=value` override, repeatable.
    #[arg(long = "set", value_name = "KEY=VALUE")]
    set: Vec<String>,
}

fn parse_variant(s: &str) -> Result<Variant, String> {
    s.parse()
}

impl Common {
    fn settings(&self, sweep_default: Option<SweepSpec>) -> Result<Settings, CliError> {
        let mut raw = match &self.config {
            Some(p) => RawConfig::load(p)?,
            None => RawConfig::default(),
        };
        for pair in &self.set {
            raw.set_pair(pair)?;
        }
        if let Some(d) = self.dim {
            raw.set("dim", d.to_string())?;
        }
        if let Some(s) = self.seed {
            raw.set("seed", s.to_string())?;
        }
        if let Some(n) = self.samples {
            raw.set("samples", n.to_string())?;
        }
        if let Some(v) = self.variant {
            raw.set("variant", v.to_string())?;
        }
        Ok(Settings::from_raw(&raw, sweep_default)?)
    }

    fn emit(&self, text: &str) -> Result<(), CliError> {
        let res = match &self.out {
            Some(p) => std::fs::write(p, text),
            None => std::io::stdout().lock().write_all(text.as_bytes()),
        };
        res.map_err(|e| CliError::Usage(format!("cannot write output: {e}")))
    }
}

fn run(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::Correlations(c) => {
            let s = c.settings(Some(correlations_default()))?;
            c.emit(&commands::correlations(&s)?.to_csv())
        }
        Command::Cycle(c) => {
            let s = c.settings(Some(cycle_default()))?;
            c.emit(&commands::cycle(&s)?.to_csv())
        }
        Command::Sample(c) => {
            let s = c.settings(None)?;
            let (table, summary) = commands::sample(&s)?;
            eprint!("{}", commands::sample_summary_text(&summary));
            c.emit(&table.to_csv())
        }
        Command::Verify(c) => {
            let s = c.settings(None)?;
            if s.sweep.is_some() {
                return Err(CliError::Usage("verify runs at a single point; remove the sweep keys".into()));
            }
            let report = verify::run(&s)?;
            c.emit(&report.render())?;
            if report.passed() {
                Ok(())
            } else {
                Err(CliError::Verification(report.failures().iter().map(|s| s.to_string()).collect()))
            }
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("Error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}

// SPDX-License-Identifier: Apache-2.0

use std::io::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use topotel::figure::{reproduce_figure, FIGURES};
use topotel::sweep::{run_sweep, SweepConfig, SweepResult};
use topotel::validation::run_all;
use topotel::Error;

const EXIT_CONFIG: u8 = 1;
const EXIT_EVALUATION: u8 = 2;
const EXIT_VALIDATION: u8 = 3;

/// Default single-trajectory settings when `dynamics` gets no config.
const DYNAMICS_DEFAULT: &str = "\
time = 0, 5, 101
outputs = alpha1, alpha2, qfi, fi, f_avg, fidelity, concurrence_ch, concurrence_out, \
discord_ch, discord_out, coherence_ch, coherence_out, hss, trace_dist
";

#[derive(Parser, Debug)]
#[command(name = "topotel", version, about = "Teleportation and remote magnetometry with dephasing topological qubits")]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Key-value config file.
    #[arg(long, global = true)]
    config: Option<PathBuf>,

    /// Output directory. Without it, sweep and dynamics print to stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,

    /// Worker threads for grid evaluation.
    #[arg(long, global = true, value_parser = clap::value_parser!(u64).range(1..))]
    threads: Option<u64>,

    #[arg(long, global = true, value_enum, default_value_t = Format::Csv)]
    format: Format,

    /// Seed for the randomized checks of `validate`.
    #[arg(long, global = true, default_value_t = 20_240_917)]
    seed: u64,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// One trajectory over time; the config may not contain sweeps.
    Dynamics,
    /// Grid sweep described by --config.
    Sweep,
    /// Regenerate a figure's data; --config holds overrides.
    Figure {
        #[arg(value_parser = clap::builder::PossibleValuesParser::new(FIGURES))]
        name: String,
    },
    /// Run the self-check suite.
    Validate,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
enum Format {
    Csv,
    Json,
}

fn read_config(path: &Path) -> Result<String, Error> {
    std::fs::read_to_string(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))
}

fn emit(result: &SweepResult, cli: &Cli, stem: &str) -> Result<(), Error> {
    let (body, ext) = match cli.format {
        Format::Csv => (result.to_csv(), "csv"),
        Format::Json => (result.to_json() + "\n", "json"),
    };
    match &cli.out {
        Some(dir) => {
            std::fs::create_dir_all(dir).map_err(|e| Error::Io(format!("{}: {e}", dir.display())))?;
            let path = dir.join(format!("{stem}.{ext}"));
            std::fs::write(&path, body).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
            eprintln!("wrote {}", path.display());
        }
        None => {
            let mut stdout = std::io::stdout().lock();
            match stdout.write_all(body.as_bytes()).and_then(|_| stdout.flush()) {
                Err(e) if e.kind() != std::io::ErrorKind::BrokenPipe => return Err(Error::Io(e.to_string())),
                _ => {}
            }
        }
    }
    Ok(())
}

fn finish(errors: usize) -> ExitCode {
    if errors > 0 {
        eprintln!("{errors} grid points failed to evaluate; see the error column");
        ExitCode::from(EXIT_EVALUATION)
    } else {
        ExitCode::SUCCESS
    }
}

fn run(cli: &Cli) -> Result<ExitCode, Error> {
    let threads = cli.threads.map(|n| n as usize);
    match &cli.command {
        Command::Dynamics => {
            let text = match &cli.config {
                Some(p) => read_config(p)?,
                None => DYNAMICS_DEFAULT.to_string(),
            };
            let cfg = SweepConfig::parse(&text)?;
            if let Some(axis) = cfg.axes.first() {
                return Err(Error::Config {
                    line: 0,
                    field: axis.param.name().to_string(),
                    message: "dynamics takes fixed parameters only; use `sweep`".into(),
                });
            }
            let result = run_sweep(&cfg, threads)?;
            emit(&result, cli, "dynamics")?;
            Ok(finish(result.error_count()))
        }
        Command::Sweep => {
            let path = cli.config.as_ref().ok_or_else(|| Error::Config {
                line: 0,
                field: "--config".into(),
                message: "sweep needs a config file".into(),
            })?;
            let cfg = SweepConfig::parse(&read_config(path)?)?;
            let result = run_sweep(&cfg, threads)?;
            emit(&result, cli, "sweep")?;
            Ok(finish(result.error_count()))
        }
        Command::Figure { name } => {
            let overrides = cli.config.as_deref().map(read_config).transpose()?;
            let fig = reproduce_figure(name, overrides.as_deref(), threads)?;
            let dir = cli.out.clone().unwrap_or_else(|| PathBuf::from("."));
            for path in fig.write(&dir, cli.format == Format::Json)? {
                eprintln!("wrote {}", path.display());
            }
            Ok(finish(fig.manifest.error_rows))
        }
        Command::Validate => {
            let report = run_all(cli.seed, threads);
            println!("seed {}", report.seed);
            for check in &report.checks {
                println!("{check}");
            }
            if let Some(dir) = &cli.out {
                std::fs::create_dir_all(dir).map_err(|e| Error::Io(format!("{}: {e}", dir.display())))?;
                let path = dir.join("validation.json");
                let body = report.to_json() + "\n";
                std::fs::write(&path, body).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
            }
            Ok(if report.all_passed() {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(EXIT_VALIDATION)
            })
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_CONFIG } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(&cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(EXIT_CONFIG)
        }
    }
}

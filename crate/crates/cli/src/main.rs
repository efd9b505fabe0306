use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use kerr_stokes::OmegaGrid;
use kerr_stokes_cli::verify::Fault;
use kerr_stokes_cli::{cmd_figure, cmd_run, cmd_verify, config, CliError, Format, RunOptions};

/// Stokes-operator noise spectra of Kerr-squeezed pulses.
#[derive(Debug, Parser)]
#[command(name = "kerr-stokes", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Evaluate one scenario file.
    Run {
        #[arg(long)]
        config: PathBuf,
        /// Output file (standard output if omitted). CSV output also writes
        /// `<stem>.meta.json` next to it.
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, value_enum, default_value_t = Format::Csv)]
        format: Format,
        /// Reduced-frequency grid as start:stop:count.
        #[arg(long, value_parser = config::parse_grid)]
        grid: Option<OmegaGrid>,
        /// Optimize the linear phase difference at this reduced frequency.
        #[arg(long)]
        optimize_at: Option<f64>,
    },
    /// Write the data series of a published figure, one CSV per curve.
    Figure {
        #[arg(long)]
        figure_id: u32,
        /// Output directory.
        #[arg(long, default_value = ".")]
        out: PathBuf,
        #[arg(long, value_parser = config::parse_grid)]
        grid: Option<OmegaGrid>,
    },
    /// Run the oracle suite and write a pass/fail report.
    Verify {
        /// Report file (printed to standard output as well).
        #[arg(long)]
        out: Option<PathBuf>,
        /// Integrate kernels with the relaxation time scaled by this factor.
        #[arg(long, hide = true)]
        inject_tau_r_fault: Option<f64>,
    },
}

fn fail(err: &CliError) -> ExitCode {
    eprintln!("{}", err.to_json());
    ExitCode::from(err.exit_code() as u8)
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
    let outcome = match cli.command {
        Command::Run { config, out, format, grid, optimize_at } => {
            cmd_run(&RunOptions { config, out, format, grid, optimize_at }).map(|o| {
                for w in &o.result.warnings {
                    eprintln!("warning: {w}");
                }
                if let Some(text) = o.stdout {
                    print!("{text}");
                }
            })
        }
        Command::Figure { figure_id, out, grid } => cmd_figure(figure_id, &out, grid).map(|paths| {
            for p in paths {
                println!("{}", p.display());
            }
        }),
        Command::Verify { out, inject_tau_r_fault } => {
            cmd_verify(out.as_deref(), inject_tau_r_fault.map(Fault::TauR)).and_then(|report| {
                print!("{}", report.render());
                if report.passed() {
                    Ok(())
                } else {
                    Err(CliError::VerifyFailed { failed: report.failed(), total: report.checks.len() })
                }
            })
        }
    };
    match outcome {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => fail(&e),
    }
}

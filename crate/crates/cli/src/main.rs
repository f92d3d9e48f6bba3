use std::env;
use std::path::PathBuf;
use std::process::ExitCode;

use bartnik_cli::{parse_config, run, CliError, Command, RunOptions, OUT_DIR_ENV};
use clap::Parser;

/// Masses, quasi-spherical extensions and cobordism criteria for Bartnik data.
///
/// Exit codes: 0 success, 1 configuration or I/O, 2 violated precondition,
/// 3 solver failure or failed self-check, 4 asymptotic extraction failure.
#[derive(Parser, Debug)]
#[command(name = "bartnik", version)]
struct Cli {
    /// Command to run; may instead be set as `command` in [problem].
    command: Option<Command>,
    /// Problem file.
    #[arg(long)]
    config: PathBuf,
    /// Output directory; overrides `[output] dir` and $BARTNIK_OUT_DIR.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Also write two-column (t, y) files for r, u, H and R.
    #[arg(long)]
    emit_plot_data: bool,
    /// Print the parsed problem with defaults filled in, then exit.
    #[arg(long)]
    dump_config: bool,
    #[arg(long)]
    tolerance: Option<f64>,
    /// ODE step (qs) or finite-difference step (curvature).
    #[arg(long)]
    step: Option<f64>,
}

fn drive(cli: &Cli) -> Result<(), CliError> {
    let mut cfg = parse_config(&cli.config, cli.command)?;
    cfg.override_solver(cli.step, cli.tolerance)?;
    if cli.dump_config {
        print!("{}", cfg.dump());
        return Ok(());
    }
    let out_dir = cli.out.clone().or_else(|| cfg.output.dir.clone()).or_else(|| env::var_os(OUT_DIR_ENV).map(PathBuf::from));
    let report = run(&cfg, &RunOptions { out_dir, emit_plot_data: cli.emit_plot_data })?;
    print!("{}", report.summary.table());
    for path in &report.artifacts {
        println!("wrote {}", path.display());
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(1) } else { ExitCode::SUCCESS };
        }
    };
    match drive(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}

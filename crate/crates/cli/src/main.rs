use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use mastflow_cli::commands::{self, RunOptions};
use mastflow_cli::{CliError, EXIT_OK, EXIT_USAGE};

#[derive(Parser)]
#[command(
    name = "mastflow",
    version,
    about = "Flow simulations of bladeless wind turbine masts"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Common {
    /// JSON config file; defaults apply when omitted.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Output directory.
    #[arg(long, default_value = "out")]
    out: PathBuf,
    /// Write vorticity snapshots.
    #[arg(long)]
    snapshots: bool,
    /// Run at this Reynolds number instead of the configured viscosity.
    #[arg(long = "re-surrogate", value_name = "VALUE")]
    re_surrogate: Option<f64>,
    /// No progress output.
    #[arg(long, short)]
    quiet: bool,
}

impl Common {
    fn options(self) -> RunOptions {
        RunOptions {
            config: self.config,
            out: self.out,
            snapshots: self.snapshots,
            re_surrogate: self.re_surrogate,
            quiet: self.quiet,
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Run one design at one speed.
    Simulate {
        #[command(flatten)]
        common: Common,
        /// Design tag or a design name from the config.
        #[arg(long)]
        design: String,
        /// Inlet speed, m/s.
        #[arg(long)]
        speed: f64,
    },
    /// Run every design at every speed and write the report.
    Sweep {
        #[command(flatten)]
        common: Common,
        #[arg(long, default_value_t = 1)]
        workers: usize,
    },
    /// Run the solver verification checks.
    Verify {
        /// Coarse checks only.
        #[arg(long)]
        quick: bool,
        /// Also write the results here.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Rebuild CSV, plots and ranking from a stored table.
    Report {
        /// `table.json` written by `sweep`.
        #[arg(long)]
        table: PathBuf,
        #[arg(long, default_value = "report")]
        out: PathBuf,
        #[arg(long = "target-speed")]
        target_speed: Option<f64>,
    },
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { EXIT_USAGE } else { EXIT_OK });
        }
    };
    let result: Result<(), CliError> = match cli.command {
        Command::Simulate {
            common,
            design,
            speed,
        } => commands::simulate(&common.options(), &design, speed),
        Command::Sweep { common, workers } => commands::sweep(&common.options(), workers),
        Command::Verify { quick, out } => commands::verify(quick, out.as_deref()),
        Command::Report {
            table,
            out,
            target_speed,
        } => commands::report(&table, &out, target_speed),
    };
    match result {
        Ok(()) => ExitCode::from(EXIT_OK),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}

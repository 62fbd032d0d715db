use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, ValueEnum};

use jetzcr::report::Format;
use jetzcr::run::{error_report, RunOptions};
use jetzcr::{load_problem, run, Command};

/// Exact verification of zero-curvature representations on jet spaces.
#[derive(Parser)]
#[command(name = "jetzcr", version, about)]
struct Cli {
    /// Operation to perform.
    #[arg(value_enum)]
    command: CliCommand,

    /// Path to the JSON problem file.
    problem: PathBuf,

    /// Output format.
    #[arg(long, value_enum, default_value_t = CliFormat::Text)]
    format: CliFormat,

    /// Omit the timing field, making output byte-stable.
    #[arg(long)]
    no_timing: bool,

    /// Substitution-step bound for ideal reductions.
    #[arg(long, default_value_t = jetzcr_core::equation::DEFAULT_DEPTH_LIMIT)]
    depth_limit: usize,

    /// Shift expression R for the `shift` command: the current becomes
    /// (P1 - D_y R, P2 + D_x R).
    #[arg(long, short = 'R')]
    shift_by: Option<String>,
}

#[derive(Clone, Copy, ValueEnum)]
enum CliFormat {
    Text,
    Json,
}

#[derive(Clone, Copy, ValueEnum)]
enum CliCommand {
    /// Verify the Maurer-Cartan condition on the equation manifold.
    CheckZcr,
    /// Transform the pair into characteristic form.
    CharForm,
    /// Compute the characteristic element.
    CharElement,
    /// Decide whether the pair is already a characteristic representative.
    IsCharRep,
    /// Apply the gauge transformation by the `gauge` matrix.
    Gauge,
    /// Check the twisted-Euler necessary condition.
    EulerCheck,
    /// Check the classical necessary condition on a characteristic element.
    NecCheck,
    /// Check the cosymmetry condition for `psi`.
    Cosymmetry,
    /// Check the abelian characteristic condition for `Q`.
    AbelianCheck,
    /// Verify conservation and compute the generating function.
    Conservation,
    /// Shift the current by R and recompute its generating function.
    Shift,
}

impl From<CliCommand> for Command {
    fn from(c: CliCommand) -> Command {
        match c {
            CliCommand::CheckZcr => Command::CheckZcr,
            CliCommand::CharForm => Command::CharForm,
            CliCommand::CharElement => Command::CharElement,
            CliCommand::IsCharRep => Command::IsCharRep,
            CliCommand::Gauge => Command::Gauge,
            CliCommand::EulerCheck => Command::EulerCheck,
            CliCommand::NecCheck => Command::NecCheck,
            CliCommand::Cosymmetry => Command::Cosymmetry,
            CliCommand::AbelianCheck => Command::AbelianCheck,
            CliCommand::Conservation => Command::Conservation,
            CliCommand::Shift => Command::Shift,
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let command: Command = cli.command.into();
    let format = match cli.format {
        CliFormat::Text => Format::Text,
        CliFormat::Json => Format::Json,
    };
    let opts = RunOptions {
        depth_limit: cli.depth_limit,
        timing: !cli.no_timing,
        shift_by: cli.shift_by.clone(),
    };

    let problem = match load_problem(&cli.problem) {
        Ok(p) => p,
        Err(e) => {
            eprintln!("jetzcr: {e}");
            print!("{}", error_report(command.name(), &e.to_string()).render(format));
            return ExitCode::from(2);
        }
    };

    match run(command, &problem, &opts) {
        Ok(report) => {
            print!("{}", report.render(format));
            ExitCode::from(report.status.exit_code() as u8)
        }
        Err(e) => {
            eprintln!("jetzcr: {e}");
            print!("{}", error_report(command.name(), &e.to_string()).render(format));
            ExitCode::from(2)
        }
    }
}

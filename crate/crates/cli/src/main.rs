mod commands;
mod output;
mod settings;

use std::process::ExitCode;

use clap::{CommandFactory, Parser, Subcommand};

use commands::{CoherentArgs, DensityArgs, GroupArgs, OrbitArgs, Outcome, VerifyArgs};
use settings::{CliError, CommonFlags, Settings};

/// Landau levels and magnetic translations on the plane and the torus.
#[derive(Parser, Debug)]
#[command(name = "landau", version)]
struct Cli {
    #[command(flatten)]
    common: CommonFlags,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Low spectrum of the lattice Hamiltonian with degeneracy clusters
    Spectrum,
    /// Probability density of a torus eigenstate or coherent state
    Density(DensityArgs),
    /// Magnetic translation group tables and its representation
    Group(GroupArgs),
    /// Run the invariant checks and report measured residuals
    Verify(VerifyArgs),
    /// Classical cyclotron orbit folded into the torus
    Orbit(OrbitArgs),
    /// Time series of coherent-state expectation values
    Coherent(CoherentArgs),
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let settings = match Settings::resolve(&cli.common) {
        Ok(s) => s,
        Err(e) => return fail(e),
    };
    let result = match &cli.command {
        Command::Spectrum => commands::spectrum(&settings),
        Command::Density(a) => commands::density(&settings, a),
        Command::Group(a) => commands::group(&settings, a),
        Command::Verify(a) => commands::verify(&settings, a),
        Command::Orbit(a) => commands::orbit(&settings, a),
        Command::Coherent(a) => commands::coherent(&settings, a),
    };
    match result {
        Ok(Outcome { summary, success }) => {
            print!("{summary}");
            if success {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(e) => fail(e),
    }
}

fn fail(e: CliError) -> ExitCode {
    match e {
        CliError::Usage(msg) => Cli::command()
            .error(clap::error::ErrorKind::ValueValidation, msg)
            .exit(),
        CliError::Failed(msg) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
    }
}

use std::process::ExitCode;

use clap::{Parser, Subcommand};
use vtarget::commands::{
    cmd_render, cmd_solve, cmd_sweep, cmd_validate, RenderArgs, SolveArgs, SweepArgs, ValidateArgs,
};

/// Place virtual targets and assign pursuers to evaders through them.
#[derive(Parser)]
#[command(name = "vtarget", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Solve one scenario on a lattice of candidate virtual targets.
    Solve(SolveArgs),
    /// Solve on a series of lattices and tabulate cost and time.
    Sweep(SweepArgs),
    /// Fly a solved assignment and check every capture.
    Validate(ValidateArgs),
    /// Draw a solved assignment as SVG.
    Render(RenderArgs),
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Solve(a) => cmd_solve(a),
        Command::Sweep(a) => cmd_sweep(a),
        Command::Validate(a) => cmd_validate(a),
        Command::Render(a) => cmd_render(a),
    };
    match result {
        Ok(exit) => ExitCode::from(exit as u8),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use ordtopo_cli::{run_document, CliError, Command, Overrides};
use ordtopo_core::IntervalSemantics;

#[derive(Parser)]
#[command(
    name = "ordtopo",
    version,
    about = "Closedness, convergence and interval checks in vector lattices"
)]
struct Cli {
    #[command(subcommand)]
    command: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Closedness, openness and solidity of a set.
    CheckSet(CommonArgs),
    /// Order convergence and interval-topology convergence of a family.
    Convergence(CommonArgs),
    /// Open intervals around points of an open set.
    Fit(CommonArgs),
    /// Run one theorem verifier.
    Theorems(CommonArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum SemanticsArg {
    StrictPartial,
    StrictUniform,
}

#[derive(Args)]
struct CommonArgs {
    /// Problem document (JSON).
    document: PathBuf,
    #[arg(long, value_enum)]
    semantics: Option<SemanticsArg>,
    #[arg(long)]
    horizon: Option<usize>,
    #[arg(long)]
    grid_scale: Option<u32>,
    /// Write the JSON report here.
    #[arg(long)]
    output: Option<PathBuf>,
    /// Worker threads for the parallel searches.
    #[arg(long)]
    threads: Option<usize>,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (command, args) = match cli.command {
        Cmd::CheckSet(a) => (Command::CheckSet, a),
        Cmd::Convergence(a) => (Command::Convergence, a),
        Cmd::Fit(a) => (Command::Fit, a),
        Cmd::Theorems(a) => (Command::Theorems, a),
    };
    match execute(command, &args) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("ordtopo: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}

fn execute(command: Command, args: &CommonArgs) -> Result<u8, CliError> {
    let text = std::fs::read_to_string(&args.document)
        .map_err(|e| CliError::Input(format!("cannot read {}: {e}", args.document.display())))?;
    let overrides = Overrides {
        semantics: args.semantics.map(|s| match s {
            SemanticsArg::StrictPartial => IntervalSemantics::StrictPartial,
            SemanticsArg::StrictUniform => IntervalSemantics::StrictUniform,
        }),
        horizon: args.horizon,
        grid_scale: args.grid_scale,
    };
    let rendered = run_document(command, &text, &overrides, args.threads)?;
    if let Some(path) = &args.output {
        std::fs::write(path, &rendered.json)
            .map_err(|e| CliError::Internal(format!("cannot write {}: {e}", path.display())))?;
    }
    print!("{}", rendered.text);
    Ok(rendered.exit_code)
}

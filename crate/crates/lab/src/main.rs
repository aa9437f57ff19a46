use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use spectra_lab::commands::{self, validation_failure, Rendered};
use spectra_lab::config::RunConfig;
use spectra_lab::output::{emit, summary_path};
use spectra_lab::{LabError, EXIT_CHECK_FAILED};

#[derive(Parser)]
#[command(
    name = "spectra-lab",
    version,
    about = "Orthogonal sets and Beurling densities of mu_{p,q}"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// List lambda_n for n below the index limit.
    Generate(Args),
    /// Run orthogonality, counting, maximality and lacunarity checks.
    Check(Args),
    /// Window ratios at r = s against the closed-form bound.
    Density(Args),
}

#[derive(clap::Args)]
struct Args {
    #[arg(long)]
    config: PathBuf,
    /// Overrides the output path from the config.
    #[arg(long)]
    out: Option<PathBuf>,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (args, is_check) = match &cli.command {
        Command::Generate(a) | Command::Density(a) => (a, false),
        Command::Check(a) => (a, true),
    };
    let cfg = match RunConfig::load(&args.config) {
        Ok(cfg) => cfg,
        Err(e) => return fail(&e),
    };
    let out = args.out.clone().or_else(|| cfg.output.path.clone());
    let result = match &cli.command {
        Command::Generate(_) => commands::generate(&cfg),
        Command::Check(_) => commands::check(&cfg),
        Command::Density(_) => commands::density(&cfg),
    };
    match result {
        Ok(rendered) => match write(out.as_deref(), &rendered) {
            Ok(()) if rendered.pass => ExitCode::SUCCESS,
            Ok(()) => ExitCode::from(EXIT_CHECK_FAILED),
            Err(e) => fail(&e.into()),
        },
        Err(e @ LabError::Invalid(_)) if is_check => {
            let text = commands::render_checks(&cfg, &[validation_failure(&e)]);
            if let Err(io) = emit(out.as_deref(), &text) {
                return fail(&io.into());
            }
            fail(&e)
        }
        Err(e) => fail(&e),
    }
}

fn write(out: Option<&std::path::Path>, rendered: &Rendered) -> std::io::Result<()> {
    emit(out, &rendered.body)?;
    if let Some(summary) = &rendered.summary {
        match out {
            Some(path) => std::fs::write(summary_path(path), summary)?,
            None => eprint!("{summary}"),
        }
    }
    Ok(())
}

fn fail(e: &LabError) -> ExitCode {
    eprintln!("spectra-lab: {e}");
    ExitCode::from(e.exit_code())
}

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Parser, Subcommand};
use hodgelab_cli::{decompose_file, parse_backend, parse_seeds, Campaign, CampaignName, CliError};

#[derive(Parser)]
#[command(name = "hodgelab", version, about = "Pointwise exterior-algebra verification campaigns")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a named verification campaign.
    Verify {
        campaign: String,
        /// Dimensions, comma-separated or repeated.
        #[arg(long = "dim", value_delimiter = ',')]
        dims: Vec<usize>,
        /// Inclusive range `a..b` or a comma-separated list.
        #[arg(long, default_value = "1..20")]
        seeds: String,
        /// exact or float; defaults to the campaign's natural backend.
        #[arg(long)]
        backend: Option<String>,
        /// Write the report here instead of stdout.
        #[arg(long)]
        json: Option<PathBuf>,
    },
    /// Decompose a form or skew matrix given as JSON.
    Decompose { file: PathBuf },
    /// List the campaign registry.
    List,
}

/// Writes to stdout, treating a closed pipe as success.
fn emit(text: &str) -> Result<(), CliError> {
    match std::io::stdout().lock().write_all(text.as_bytes()) {
        Err(e) if e.kind() != std::io::ErrorKind::BrokenPipe => Err(e.into()),
        _ => Ok(()),
    }
}

fn verify(
    campaign: &str,
    dims: Vec<usize>,
    seeds: &str,
    backend: Option<String>,
    json: Option<PathBuf>,
) -> Result<i32, CliError> {
    let name: CampaignName = campaign.parse()?;
    let backend = backend.as_deref().map(parse_backend).transpose()?;
    let dims = (!dims.is_empty()).then_some(dims);
    let c = Campaign::new(name, dims, parse_seeds(seeds)?, backend)?;
    let start = Instant::now();
    let report = c.run();
    eprintln!("{name}: wall time {:.3} s", start.elapsed().as_secs_f64());
    match json {
        Some(path) => {
            std::fs::write(&path, report.to_json())?;
            let s = &report.summary;
            emit(&format!(
                "{name}: {}/{} cases passed, max residual {:e}\n",
                s.passed, s.total, s.max_residual
            ))?;
        }
        None => emit(&report.to_json())?,
    }
    for case in report.cases.iter().filter(|c| !c.pass) {
        match &case.error {
            Some(e) => eprintln!("FAIL {}: {e}", case.id),
            None => eprintln!("FAIL {} (residual {:e})", case.id, case.residual),
        }
    }
    Ok(report.exit_code())
}

fn run(cli: Cli) -> Result<i32, CliError> {
    match cli.command {
        Command::Verify {
            campaign,
            dims,
            seeds,
            backend,
            json,
        } => verify(&campaign, dims, &seeds, backend, json),
        Command::Decompose { file } => {
            let d = decompose_file(&file)?;
            emit(&format!("{}\n", serde_json::to_string_pretty(&d).expect("decomposition serializes")))?;
            Ok(0)
        }
        Command::List => {
            let lines: String = CampaignName::ALL
                .iter()
                .map(|c| format!("{:<12} {}\n", c.as_str(), c.description()))
                .collect();
            emit(&lines)?;
            Ok(0)
        }
    }
}

fn main() -> ExitCode {
    let code = match run(Cli::parse()) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("hodgelab: {e}");
            e.exit_code()
        }
    };
    ExitCode::from(code as u8)
}

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::Parser;

use hyptile::subshift::SubshiftSpec;
use hyptile_cli::{run, CliError, Command, JobConfig, DEFAULT_PALETTE};

/// Hyperbolic Penrose-type tilings: patches, K-theory, gap labels and hull checks.
#[derive(Parser, Debug)]
#[command(name = "hyptile", version)]
struct Args {
    #[arg(value_enum)]
    command: Command,
    /// Subshift spec (JSON).
    #[arg(long)]
    spec: PathBuf,
    #[arg(long, default_value_t = 3.0)]
    radius: f64,
    #[arg(long, default_value_t = 8)]
    nmax: usize,
    #[arg(long, default_value_t = 100_000)]
    samples: usize,
    /// Required for hullcheck and cocycle.
    #[arg(long)]
    seed: Option<u64>,
    /// Output file; stdout when absent.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Comma-separated fill colours, one per letter in sorted order.
    #[arg(long, value_delimiter = ',')]
    palette: Option<Vec<String>>,
}

fn config_from(args: Args) -> Result<JobConfig, CliError> {
    let text = std::fs::read_to_string(&args.spec)
        .map_err(|e| CliError::Io { path: args.spec.display().to_string(), message: e.to_string() })?;
    let spec = SubshiftSpec::from_json(&text)?;
    let mut config = JobConfig::new(args.command, spec);
    config.radius = args.radius;
    config.nmax = args.nmax;
    config.samples = args.samples;
    config.seed = args.seed;
    config.out = args.out;
    config.palette = args.palette.unwrap_or_else(|| DEFAULT_PALETTE.iter().map(|s| s.to_string()).collect());
    Ok(config)
}

fn init_threads() -> Result<(), CliError> {
    if let Ok(v) = std::env::var("HYPTILE_THREADS") {
        let n: usize = v
            .parse()
            .map_err(|_| CliError::Config(format!("HYPTILE_THREADS must be a positive integer, got {v:?}")))?;
        if n == 0 {
            return Err(CliError::Config("HYPTILE_THREADS must be positive".into()));
        }
        rayon::ThreadPoolBuilder::new().num_threads(n).build_global().map_err(|e| CliError::Config(e.to_string()))?;
    }
    Ok(())
}

fn main() -> ExitCode {
    let args = Args::parse();
    let result = init_threads().and_then(|_| config_from(args)).and_then(|c| run(&c));
    match result {
        Ok(Some(artifact)) => {
            let mut out = std::io::stdout().lock();
            if out.write_all(artifact.contents.as_bytes()).is_err() {
                return ExitCode::from(1);
            }
            ExitCode::SUCCESS
        }
        Ok(None) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("{}", e.to_json());
            ExitCode::from(match e {
                CliError::Config(_) => 2,
                _ => 1,
            })
        }
    }
}

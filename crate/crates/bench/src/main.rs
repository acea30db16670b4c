//! `bench`: replay streams through the quantile estimators and score them
//! against the exact running quantile, or generate synthetic streams.

use std::collections::BTreeMap;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use tasquant::harness::{
    parse_settings, run_benchmark, write_stream, BenchConfig, BenchError, ReportRow, StreamFormat,
};
use tasquant::metrics::format_pct;
use tasquant::stream::Preset;

#[derive(Debug, Parser)]
#[command(name = "bench", version, about = "Streaming quantile estimator benchmark")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Replay a stream through a grid of estimators, quantiles and capacities.
    Run(Box<RunArgs>),
    /// Write a synthetic stream to a file.
    Gen(GenArgs),
}

/// Every flag maps onto the config key of the same name and overrides it.
#[derive(Debug, Args)]
struct RunArgs {
    /// Flat `key = value` config file.
    #[arg(long, value_name = "PATH")]
    config: Option<PathBuf>,
    /// Stream file to replay.
    #[arg(long, value_name = "PATH")]
    stream: Option<String>,
    /// Stream file format: text or f64le.
    #[arg(long)]
    format: Option<String>,
    /// Generate the stream from a preset instead: burst, stationary or table1-s2.
    #[arg(long, conflicts_with = "stream")]
    preset: Option<String>,
    /// Length of a generated stream.
    #[arg(long)]
    n: Option<String>,
    /// Comma-separated target quantiles.
    #[arg(long, value_name = "LIST")]
    quantile: Option<String>,
    /// Comma-separated buffer capacities.
    #[arg(long, value_name = "LIST")]
    capacity: Option<String>,
    /// Comma-separated estimators: tas, p2, reservoir, eqhist.
    #[arg(long, value_name = "LIST")]
    estimator: Option<String>,
    /// Emit every Nth step to the trace files.
    #[arg(long, value_name = "N")]
    trace_every: Option<String>,
    #[arg(long)]
    seed: Option<String>,
    /// Centering band as a fraction of the capacity.
    #[arg(long)]
    band: Option<String>,
    /// Report CSV path.
    #[arg(long, value_name = "PATH")]
    report: Option<String>,
    /// Directory for per-cell trace CSVs.
    #[arg(long, value_name = "PATH")]
    trace_dir: Option<String>,
}

impl RunArgs {
    fn settings(&self) -> Result<BTreeMap<String, String>, BenchError> {
        let mut settings = match &self.config {
            Some(path) => {
                let text = std::fs::read_to_string(path).map_err(|source| BenchError::Io {
                    path: path.clone(),
                    source,
                })?;
                parse_settings(&text)?
            }
            None => BTreeMap::new(),
        };
        // A source flag replaces whichever source the file named.
        if self.stream.is_some() {
            settings.remove("preset");
        }
        if self.preset.is_some() {
            settings.remove("stream");
        }
        let flags = [
            ("stream", &self.stream),
            ("format", &self.format),
            ("preset", &self.preset),
            ("n", &self.n),
            ("quantile", &self.quantile),
            ("capacity", &self.capacity),
            ("estimator", &self.estimator),
            ("trace-every", &self.trace_every),
            ("seed", &self.seed),
            ("band", &self.band),
            ("report", &self.report),
            ("trace-dir", &self.trace_dir),
        ];
        for (key, value) in flags {
            if let Some(v) = value {
                settings.insert(key.to_string(), v.clone());
            }
        }
        Ok(settings)
    }
}

#[derive(Debug, Args)]
struct GenArgs {
    /// burst, stationary or table1-s2.
    #[arg(long)]
    preset: Preset,
    /// Number of points; defaults to the preset's full length.
    #[arg(long)]
    n: Option<u64>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, value_name = "PATH")]
    out: PathBuf,
    #[arg(long, default_value_t = StreamFormat::Text)]
    format: StreamFormat,
}

fn run(args: &RunArgs) -> Result<(), BenchError> {
    let config = BenchConfig::from_settings(&args.settings()?)?;
    let rows = run_benchmark(&config)?;
    print_table(&rows);
    if let Some(path) = &config.report {
        eprintln!("report written to {}", path.display());
    }
    Ok(())
}

fn gen(args: &GenArgs) -> Result<(), BenchError> {
    let spec = args.preset.spec(args.n.unwrap_or(Preset::DEFAULT_LEN), args.seed)?;
    let written = write_stream(&args.out, spec.iter(), args.format)?;
    eprintln!("wrote {written} values to {}", args.out.display());
    Ok(())
}

fn opt(v: Option<f64>, f: impl Fn(f64) -> String) -> String {
    v.map(f).unwrap_or_else(|| "-".into())
}

fn print_table(rows: &[ReportRow]) {
    println!(
        "{:<10} {:>7} {:>6} {:>10} {:>12} {:>10} {:>7} {:>10}",
        "estimator", "q", "m", "rel_l1", "abs_linf", "spread", "center", "ms"
    );
    for row in rows {
        let s = &row.result.summary;
        println!(
            "{:<10} {:>7} {:>6} {:>10} {:>12} {:>10} {:>7} {:>10.1}",
            row.estimator.name(),
            row.q,
            row.m,
            opt(s.rel_l1_pct, format_pct),
            opt(s.abs_linf, |x| format!("{x:.4}")),
            opt(s.mean_spread, |x| format!("{x:.4}")),
            opt(s.center_within_band_frac, |x| format!("{x:.3}")),
            s.runtime_ms,
        );
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Run(args) => run(args),
        Command::Gen(args) => gen(args),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::FAILURE
        }
    }
}

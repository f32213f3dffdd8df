//! `ofnts` command-line interface.
//!
//! Exit codes: 0 on success, 2 for usage errors, 3 for data errors.

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use ofnts::averages::WeightScheme;
use ofnts::ingest::{Field, WindowSpec};
use ofnts::report::{self, Artifact, InputSpec, Method, OutputFormat, RunConfig};

const USAGE_ERROR: u8 = 2;
const DATA_ERROR: u8 = 3;

#[derive(Parser, Debug)]
#[command(name = "ofnts", version, about = "Ordered fuzzy numbers from windowed price series")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Emit one JSON record per (input, window)
    Build {
        #[command(flatten)]
        common: CommonArgs,
        #[arg(long, value_enum, default_value_t = BuildFormat::Json)]
        format: BuildFormat,
    },
    /// Print the summary table (or CSV)
    Report {
        #[command(flatten)]
        common: CommonArgs,
        #[arg(long, value_enum, default_value_t = ReportFormat::Table)]
        format: ReportFormat,
        /// Print imprecision with 7 decimals
        #[arg(long)]
        extended_precision: bool,
    },
    /// Write one SVG figure per record
    Plot {
        #[command(flatten)]
        common: CommonArgs,
    },
    /// Emit the statistics columns only, as JSON
    Stats {
        #[command(flatten)]
        common: CommonArgs,
    },
}

#[derive(Args, Debug)]
struct CommonArgs {
    /// Input OHLCV CSV file (repeatable)
    #[arg(long = "input", short = 'i', required = true)]
    inputs: Vec<PathBuf>,

    /// Label for the matching --input (defaults to the file stem)
    #[arg(long = "label")]
    labels: Vec<String>,

    /// Price column to build the series from
    #[arg(long, default_value = "close")]
    field: Field,

    /// Date range START:END (ISO or M/D/YYYY)
    #[arg(long, conflicts_with = "size")]
    window: Option<WindowSpec>,

    /// Rolling window length
    #[arg(long)]
    size: Option<usize>,

    /// Step between rolling windows
    #[arg(long, default_value_t = 1, requires = "size")]
    stride: usize,

    /// Weighted average: sa, lwa or ea
    #[arg(long, default_value = "lwa")]
    scheme: WeightScheme,

    /// Smoothing factor for --scheme ea (default 2/(n+1))
    #[arg(long)]
    gamma: Option<f64>,

    /// First average for --method mb; --scheme supplies the second
    #[arg(long, default_value = "sa")]
    mb_first: WeightScheme,

    /// Construction: new, mb or piasecki. Piasecki needs open/high/low columns.
    /// Candlestick colors treat close == open as green.
    #[arg(long, default_value = "new")]
    method: Method,

    /// Output file (directory for `plot` with several records); stdout if omitted
    #[arg(long, short = 'o')]
    out: Option<PathBuf>,

    /// Print both sample and population sigma per record to stderr
    #[arg(long, short = 'v')]
    verbose: bool,
}

#[derive(ValueEnum, Clone, Copy, Debug)]
enum BuildFormat {
    Json,
    Jsonl,
}

#[derive(ValueEnum, Clone, Copy, Debug)]
enum ReportFormat {
    Table,
    Csv,
}

struct Failure {
    code: u8,
    message: String,
}

fn usage(message: impl Into<String>) -> Failure {
    Failure {
        code: USAGE_ERROR,
        message: message.into(),
    }
}

fn data(message: impl Into<String>) -> Failure {
    Failure {
        code: DATA_ERROR,
        message: message.into(),
    }
}

impl CommonArgs {
    fn config(&self, format: OutputFormat) -> Result<RunConfig, Failure> {
        if self.labels.len() > self.inputs.len() {
            return Err(usage("more --label values than --input files"));
        }
        let inputs = self
            .inputs
            .iter()
            .enumerate()
            .map(|(i, path)| {
                let mut spec = InputSpec::from_path(path);
                if let Some(label) = self.labels.get(i) {
                    spec.label = label.clone();
                }
                spec
            })
            .collect();
        let window = match (self.window, self.size) {
            (Some(range), None) => range,
            (None, Some(size)) => WindowSpec::Size {
                size,
                stride: self.stride,
            },
            _ => return Err(usage("give either --window START:END or --size N [--stride K]")),
        };
        window.validate().map_err(|e| usage(e.to_string()))?;
        let scheme = match (self.scheme, self.gamma) {
            (WeightScheme::Exponential { .. }, gamma) => WeightScheme::Exponential { gamma },
            (_, Some(_)) => return Err(usage("--gamma only applies to --scheme ea")),
            (scheme, None) => scheme,
        };
        let mut config = RunConfig::new(inputs, window, self.method, format);
        config.field = self.field;
        config.scheme = scheme;
        config.mb_first_scheme = self.mb_first;
        Ok(config)
    }
}

fn write_artifacts(artifacts: &[Artifact], out: Option<&Path>, many_files: bool) -> Result<(), Failure> {
    let io_err = |path: &Path, e: std::io::Error| data(format!("{}: {e}", path.display()));
    match out {
        None if many_files && artifacts.len() > 1 => Err(usage("several figures were produced; pass --out DIR")),
        None => {
            let text: String = artifacts.iter().map(|a| a.contents.as_str()).collect();
            print!("{text}");
            Ok(())
        }
        Some(path) if many_files && (path.is_dir() || artifacts.len() > 1) => {
            std::fs::create_dir_all(path).map_err(|e| io_err(path, e))?;
            for a in artifacts {
                let target = path.join(&a.name);
                std::fs::write(&target, &a.contents).map_err(|e| io_err(&target, e))?;
            }
            Ok(())
        }
        Some(path) => {
            let text: String = artifacts.iter().map(|a| a.contents.as_str()).collect();
            std::fs::write(path, text).map_err(|e| io_err(path, e))
        }
    }
}

fn execute(cli: Cli) -> Result<(), Failure> {
    let (common, format) = match &cli.command {
        Command::Build { common, format } => (
            common,
            match format {
                BuildFormat::Json => OutputFormat::Json,
                BuildFormat::Jsonl => OutputFormat::JsonLines,
            },
        ),
        Command::Report { common, format, .. } => (
            common,
            match format {
                ReportFormat::Table => OutputFormat::Table,
                ReportFormat::Csv => OutputFormat::Csv,
            },
        ),
        Command::Plot { common } => (common, OutputFormat::Svg),
        Command::Stats { common } => (common, OutputFormat::Stats),
    };
    let mut config = common.config(format)?;
    if let Command::Report { extended_precision, .. } = cli.command {
        config.extended_precision = extended_precision;
    }

    let output = report::run(&config).map_err(|e| data(e.to_string()))?;
    if common.verbose {
        for r in &output.records {
            eprintln!(
                "{} {}..{}: sigma(n-1) = {} sigma(n) = {}",
                r.label,
                r.window_start,
                r.window_end,
                report::format_g17(r.sigma),
                report::format_g17(r.sigma_population)
            );
        }
    }
    write_artifacts(&output.artifacts, common.out.as_deref(), format == OutputFormat::Svg)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match execute(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("ofnts: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}

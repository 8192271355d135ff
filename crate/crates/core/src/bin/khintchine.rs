use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use sphere_khintchine::experiment::{self, Experiment, ExperimentConfig, Format};
use sphere_khintchine::report::{failure_summary, write_report};

/// Reproducible checks of the psi2 Khintchine inequality on spheres.
#[derive(Debug, Parser)]
#[command(name = "khintchine", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// b(N), sqrt(N) b(N), the Gaussian psi2 norm and the gap to 1/sqrt(ln 2)
    Constants(Options),
    /// Empirical psi2 norms of random weighted sums against b(N) |a|_2
    Verify(Options),
    /// Empirical psi2 norm of Y_n relative to b(N) as n grows
    Tightness(Options),
    /// Even moments of Y_n against the sphere Khintchine constants
    Moments(Options),
    /// Tail frequencies of |Y_n| against exp(-N q(t))
    Tails(Options),
    /// Taylor series of (1 - 2x/N)^(-N/2) against its closed form
    Series(Options),
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum FormatArg {
    Csv,
    Json,
}

#[derive(Debug, Args)]
struct Options {
    /// Sphere dimension N (repeatable)
    #[arg(long = "dim", value_name = "N")]
    dims: Vec<u32>,
    /// Number of summands n (repeatable)
    #[arg(long = "n", value_name = "n")]
    ns: Vec<usize>,
    /// Monte Carlo samples per cell
    #[arg(long)]
    samples: Option<usize>,
    #[arg(long)]
    seed: Option<u64>,
    /// Comparison tolerance (experiment-specific default)
    #[arg(long)]
    tol: Option<f64>,
    #[arg(long, value_enum, default_value_t = FormatArg::Csv)]
    format: FormatArg,
    /// Output file; standard output when absent
    #[arg(long)]
    out: Option<PathBuf>,
    /// Largest moment order k
    #[arg(long = "k-max")]
    k_max: Option<u32>,
    /// Tail threshold t (repeatable)
    #[arg(long = "t", value_name = "t")]
    ts: Vec<f64>,
    /// Series argument x (repeatable)
    #[arg(long = "x", value_name = "x")]
    xs: Vec<f64>,
    /// Random coefficient vectors per verify cell
    #[arg(long)]
    vectors: Option<usize>,
}

impl Options {
    fn into_config(self) -> ExperimentConfig {
        let mut config = ExperimentConfig::default();
        if !self.dims.is_empty() {
            config.dims = self.dims;
        }
        if !self.ns.is_empty() {
            config.ns = self.ns;
        }
        if !self.ts.is_empty() {
            config.ts = self.ts;
        }
        if !self.xs.is_empty() {
            config.xs = self.xs;
        }
        config.samples = self.samples.unwrap_or(config.samples);
        config.seed = self.seed.unwrap_or(config.seed);
        config.k_max = self.k_max.unwrap_or(config.k_max);
        config.vectors = self.vectors.unwrap_or(config.vectors);
        config.tolerance = self.tol;
        config.format = match self.format {
            FormatArg::Csv => Format::Csv,
            FormatArg::Json => Format::Json,
        };
        config.out = self.out;
        config
    }
}

fn write_out(report: &experiment::Report, config: &ExperimentConfig) -> io::Result<()> {
    match &config.out {
        Some(path) => {
            let mut w = BufWriter::new(File::create(path)?);
            write_report(report, config.format, &mut w)?;
            w.flush()
        }
        None => {
            let stdout = io::stdout();
            let mut w = stdout.lock();
            write_report(report, config.format, &mut w)?;
            w.flush()
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (experiment, options) = match cli.command {
        Command::Constants(o) => (Experiment::Constants, o),
        Command::Verify(o) => (Experiment::Verify, o),
        Command::Tightness(o) => (Experiment::Tightness, o),
        Command::Moments(o) => (Experiment::Moments, o),
        Command::Tails(o) => (Experiment::Tails, o),
        Command::Series(o) => (Experiment::Series, o),
    };
    let config = options.into_config();

    let report = match experiment::run(experiment, &config) {
        Ok(report) => report,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    };
    if let Err(e) = write_out(&report, &config) {
        eprintln!("error: writing report: {e}");
        return ExitCode::from(2);
    }
    if report.all_pass() {
        ExitCode::SUCCESS
    } else {
        eprintln!("{}", failure_summary(&report));
        ExitCode::from(1)
    }
}

//! Command-line front end: argument handling, input parsing and reports.

pub mod commands;
pub mod error;
pub mod input;
pub mod report;

use std::ffi::OsString;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use regime_core::sim::SplitPolicy;
use regime_core::{ReferenceRule, RegimeTestConfig};

use commands::{Campaign, SimulateOptions, TestOptions, EXIT_OK};
use error::{CliError, CliResult};
use input::InputSpec;

#[derive(Debug, Parser)]
#[command(
    name = "regime",
    version,
    about = "Variance change-point detection and regime testing"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args)]
pub struct InputArgs {
    /// Delimited text file, or `-` for standard input.
    pub input: String,
    /// 0-based column holding the observations.
    #[arg(long, default_value_t = 0)]
    pub column: usize,
}

impl InputArgs {
    fn spec(&self) -> InputSpec {
        InputSpec::new(&self.input, self.column)
    }
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum ReferenceArg {
    /// Segment whose squares have the smaller sample spread.
    SmallerSpread,
    /// Always the segment before the split.
    Leading,
}

impl From<ReferenceArg> for ReferenceRule {
    fn from(r: ReferenceArg) -> Self {
        match r {
            ReferenceArg::SmallerSpread => ReferenceRule::SmallerSpread,
            ReferenceArg::Leading => ReferenceRule::Leading,
        }
    }
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum SplitArg {
    /// Each trial is tested at its own estimate.
    PerTrial,
    /// Every trial is tested at the rounded campaign mean of the estimates.
    CampaignMean,
}

impl From<SplitArg> for SplitPolicy {
    fn from(s: SplitArg) -> Self {
        match s {
            SplitArg::PerTrial => SplitPolicy::PerTrial,
            SplitArg::CampaignMean => SplitPolicy::CampaignMean,
        }
    }
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum TableArg {
    /// No-change campaigns.
    Table1,
    /// Two-regime campaigns with close parameters.
    Table2,
    /// Least-squares versus variance-ratio split estimates.
    Compare,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Write the cumulative and windowed sums of squares for plotting.
    Pretest {
        #[command(flatten)]
        input: InputArgs,
        /// Window length k of the windowed sums.
        #[arg(long, default_value_t = 100)]
        window: usize,
        /// Output directory for cumulative.csv and window.csv.
        #[arg(long, default_value = ".")]
        out: PathBuf,
    },
    /// Estimate the split point.
    Detect {
        #[command(flatten)]
        input: InputArgs,
        /// Trimming margin of the variance-ratio scan.
        #[arg(long)]
        h: Option<usize>,
        /// Include the residual curve in the report.
        #[arg(long)]
        dump_rss: bool,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run the regime test (exit status 1 when the root test rejects).
    Test {
        #[command(flatten)]
        input: InputArgs,
        #[arg(long, default_value_t = 0.05)]
        alpha: f64,
        /// Split to test instead of the estimated one.
        #[arg(long)]
        l: Option<usize>,
        /// Keep splitting rejected segments.
        #[arg(long)]
        recursive: bool,
        #[arg(long, default_value_t = 50)]
        min_len: usize,
        #[arg(long, default_value_t = 4)]
        max_depth: usize,
        #[arg(long, value_enum, default_value = "smaller-spread")]
        reference: ReferenceArg,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Sample autocorrelation with its ±1.96/√n band.
    Acf {
        #[command(flatten)]
        input: InputArgs,
        #[arg(long, default_value_t = 40)]
        max_lag: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Monte Carlo campaigns.
    Simulate {
        #[arg(value_enum)]
        table: TableArg,
        #[arg(long, default_value_t = 1000)]
        trials: usize,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        #[arg(long, default_value_t = 0.05)]
        alpha: f64,
        /// Trimming margin of the variance-ratio scan (compare only).
        #[arg(long)]
        h: Option<usize>,
        #[arg(long, value_enum, default_value = "per-trial")]
        split: SplitArg,
        #[arg(long, value_enum, default_value = "smaller-spread")]
        reference: ReferenceArg,
        /// Worker threads; defaults to the number of cores.
        #[arg(long)]
        threads: Option<usize>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

/// Outcome of one invocation: text for standard output and exit status.
#[derive(Debug)]
pub struct Outcome {
    pub stdout: Option<String>,
    pub code: i32,
}

pub fn execute(cli: Cli) -> CliResult<Outcome> {
    let done = |text: Option<String>, code| Ok(Outcome { stdout: text, code });
    match cli.command {
        Command::Pretest { input, window, out } => {
            let report = commands::pretest(&input.spec().read()?, window, &out)?;
            done(Some(report.render()), EXIT_OK)
        }
        Command::Detect {
            input,
            h,
            dump_rss,
            out,
        } => {
            let report = commands::detect(&input.spec().read()?, h, dump_rss)?;
            done(commands::emit(&report, out.as_ref())?, EXIT_OK)
        }
        Command::Test {
            input,
            alpha,
            l,
            recursive,
            min_len,
            max_depth,
            reference,
            out,
        } => {
            let opts = TestOptions {
                config: RegimeTestConfig {
                    alpha,
                    reference: reference.into(),
                },
                l,
                recursive,
                min_len,
                max_depth,
            };
            let (report, code) = commands::test(&input.spec().read()?, &opts)?;
            done(commands::emit(&report, out.as_ref())?, code)
        }
        Command::Acf { input, max_lag, out } => {
            let report = commands::acf_report(&input.spec().read()?, max_lag)?;
            done(commands::emit(&report, out.as_ref())?, EXIT_OK)
        }
        Command::Simulate {
            table,
            trials,
            seed,
            alpha,
            h,
            split,
            reference,
            threads,
            out,
        } => {
            let opts = SimulateOptions {
                campaign: match table {
                    TableArg::Table1 => Campaign::NoChange,
                    TableArg::Table2 => Campaign::TwoRegime,
                    TableArg::Compare => Campaign::Compare,
                },
                trials,
                seed,
                alpha,
                h,
                split: split.into(),
                reference: reference.into(),
            };
            let report = match threads {
                Some(0) => return Err(CliError::Usage("--threads must be at least 1".into())),
                Some(t) => rayon::ThreadPoolBuilder::new()
                    .num_threads(t)
                    .build()
                    .map_err(|e| CliError::Usage(e.to_string()))?
                    .install(|| commands::simulate(&opts))?,
                None => commands::simulate(&opts)?,
            };
            done(commands::emit(&report, out.as_ref())?, EXIT_OK)
        }
    }
}

/// Parses arguments and runs; usage errors map to exit status 2.
pub fn run<I, T>(args: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return Outcome { stdout: None, code };
        }
    };
    match execute(cli) {
        Ok(outcome) => outcome,
        Err(e) => {
            eprintln!("error: {e}");
            Outcome {
                stdout: None,
                code: e.exit_code(),
            }
        }
    }
}

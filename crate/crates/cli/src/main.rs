//! `noncross`: enumeration, sampling, LLN curves, moment tables, edge solving and verification.

mod commands;
mod config;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use noncross::sampling::Sampler;
use noncross::verify::DEFAULT_SEED;

use config::{parse_n_range, Format, Precision, Sizes};

#[derive(Parser, Debug)]
#[command(name = "noncross", version, about = "Non-crossing partitions, block-size large deviations and free support edges")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug, Clone)]
struct Common {
    /// Master seed; recorded in every output.
    #[arg(long, default_value_t = DEFAULT_SEED)]
    seed: u64,
    #[arg(long, value_enum)]
    format: Option<Format>,
    /// Write to FILE instead of standard output.
    #[arg(long, value_name = "FILE")]
    out: Option<PathBuf>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Exact statistics of NC(n) by full enumeration.
    Enumerate {
        #[arg(long, conflicts_with = "n_range")]
        n: Option<usize>,
        /// Sizes such as `1..12` or `2,4,8`.
        #[arg(long, value_parser = parse_n_range)]
        n_range: Option<Sizes>,
        #[command(flatten)]
        common: Common,
    },
    /// Uniform random Dyck paths as JSON lines (or CSV) with their block statistics.
    Sample {
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 10)]
        samples: usize,
        #[arg(long, default_value = "cycle", value_parser = parse_sampler)]
        sampler: Sampler,
        #[command(flatten)]
        common: Common,
    },
    /// Distance of the empirical block-size law to Geom(1/2) along a range of sizes.
    Lln {
        #[arg(long, value_parser = parse_n_range, default_value = "100,1000,10000")]
        n_range: Sizes,
        /// Replicates per size.
        #[arg(long, default_value_t = 50)]
        samples: usize,
        #[arg(long, default_value = "cycle", value_parser = parse_sampler)]
        sampler: Sampler,
        #[command(flatten)]
        common: Common,
    },
    /// Moments from free cumulants.
    Moments {
        /// Cumulant specification (JSON).
        #[arg(long, value_name = "FILE")]
        spec: PathBuf,
        #[arg(long, default_value_t = 20)]
        n: usize,
        #[arg(long, value_enum, default_value = "f64")]
        precision: Precision,
        #[command(flatten)]
        common: Common,
    },
    /// Right edge of the support from the variational formula.
    Edge {
        #[arg(long, value_name = "FILE")]
        spec: PathBuf,
        /// Include the scanned objective values.
        #[arg(long)]
        trace: bool,
        #[command(flatten)]
        common: Common,
    },
    /// Run the verification criteria, or the `ldp` table of rate values and LLN curves.
    Verify {
        #[arg(value_enum)]
        suite: Option<Suite>,
        /// Criterion number, key or group (catalan, sampling, ldp, lln, freeprob, moments, edge, cli).
        #[arg(long)]
        filter: Option<String>,
        /// Same as `--format json`.
        #[arg(long)]
        json: bool,
        #[arg(long, value_parser = parse_n_range, default_value = "100,1000,10000")]
        n_range: Sizes,
        #[arg(long, default_value_t = 50)]
        samples: usize,
        #[arg(long, default_value = "cycle", value_parser = parse_sampler)]
        sampler: Sampler,
        /// Report rates in bits rather than nats (`ldp` suite).
        #[arg(long)]
        log2: bool,
        #[command(flatten)]
        common: Common,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Suite {
    Ldp,
}

fn parse_sampler(s: &str) -> Result<Sampler, String> {
    s.parse().map_err(|e: noncross::Error| e.to_string())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Enumerate { n, n_range, common } => commands::enumerate(n, n_range.map(|s| s.0), &common),
        Command::Sample { n, samples, sampler, common } => commands::sample(n, samples, sampler, &common),
        Command::Lln { n_range, samples, sampler, common } => commands::lln(n_range.0, samples, sampler, &common),
        Command::Moments { spec, n, precision, common } => commands::moments(&spec, n, precision, &common),
        Command::Edge { spec, trace, common } => commands::edge(&spec, trace, &common),
        Command::Verify { suite, filter, json, n_range, samples, sampler, log2, common } => {
            let mut common = common;
            if json {
                common.format = Some(Format::Json);
            }
            match suite {
                Some(Suite::Ldp) => commands::verify_ldp(n_range.0, samples, sampler, log2, &common),
                None => commands::verify(filter, &common),
            }
        }
    };
    match result {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {}", e.message);
            ExitCode::from(e.code)
        }
    }
}

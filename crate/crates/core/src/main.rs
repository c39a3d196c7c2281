use std::fs::File;
use std::io::{self, BufRead, BufReader, BufWriter};
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::{ArgGroup, Args, Parser, Subcommand};

use mimosa::bench::{self, Algorithm, RunOptions};
use mimosa::synth::{Rate, SynthConfig};
use mimosa::{Neighborhood, SizeSet, Threshold};

/// Exact single-pass set-similarity clustering benchmark.
///
/// Without a subcommand, `run` is assumed: `mimosa -t 0.6 -s 2-10 -m 10000 <in >out`.
#[derive(Parser)]
#[command(name = "mimosa", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Cluster signatures from stdin and write assignments to stdout.
    Run(RunArgs),
    /// Cluster-size histogram of a run output.
    Hist {
        /// Run output file; stdin when omitted or "-".
        file: Option<PathBuf>,
    },
    /// Timing series (ordinal, elapsed, cumulative average) of a run output.
    Times {
        /// Run output file; stdin when omitted or "-".
        file: Option<PathBuf>,
    },
    /// Generate a synthetic signature stream.
    Gen(GenArgs),
}

#[derive(Args)]
#[command(group(ArgGroup::new("algorithm").required(true).args(["centroid", "mimosa"])))]
struct RunArgs {
    /// Minimum Jaccard similarity, as a decimal or fraction.
    #[arg(short = 't', long = "theta")]
    theta: Threshold,
    /// Allowed signature sizes, <min>-<max>.
    #[arg(short = 's', long = "sizes")]
    sizes: SizeSet,
    /// Run the centroid baseline on at most N items.
    #[arg(short = 'c', long = "centroid", value_name = "N", value_parser = clap::value_parser!(u64).range(1..))]
    centroid: Option<u64>,
    /// Run the key-based engine on at most N items.
    #[arg(short = 'm', long = "mimosa", value_name = "N", value_parser = clap::value_parser!(u64).range(1..))]
    mimosa: Option<u64>,
    /// Every member marks keys, not only the first of each cluster.
    #[arg(long, conflicts_with = "centroid")]
    grow: bool,
    /// Sort and deduplicate elements instead of rejecting the line.
    #[arg(long)]
    sort: bool,
    /// Skip invalid lines instead of aborting.
    #[arg(long)]
    skip_bad: bool,
    /// Keep only the first <max> elements of longer signatures.
    #[arg(long)]
    truncate: bool,
}

#[derive(Args)]
struct GenArgs {
    /// Number of signatures.
    #[arg(short = 'n', long, default_value_t = 10_000)]
    count: u64,
    /// Allowed signature sizes, <min>-<max>.
    #[arg(short = 's', long = "sizes", default_value = "2-10")]
    sizes: SizeSet,
    /// Number of distinct element tokens.
    #[arg(long, default_value_t = 20_000)]
    alphabet: usize,
    /// Probability that a line perturbs an earlier one.
    #[arg(long, default_value = "0.5")]
    rate: Rate,
    /// Threshold the perturbations stay within.
    #[arg(short = 't', long = "theta", default_value = "0.6")]
    theta: Threshold,
    #[arg(long, default_value_t = 1)]
    seed: u64,
}

const SUBCOMMANDS: [&str; 7] = ["run", "hist", "times", "gen", "help", "--help", "-h"];

fn with_default_subcommand(mut args: Vec<String>) -> Vec<String> {
    let explicit = args
        .get(1)
        .is_some_and(|a| SUBCOMMANDS.contains(&a.as_str()) || a == "--version" || a == "-V");
    if !explicit {
        args.insert(1, "run".to_string());
    }
    args
}

fn open(path: Option<PathBuf>) -> Result<Box<dyn BufRead>> {
    match path {
        Some(p) if p.as_os_str() != "-" => {
            let f = File::open(&p).with_context(|| format!("opening {}", p.display()))?;
            Ok(Box::new(BufReader::new(f)))
        }
        _ => Ok(Box::new(io::stdin().lock())),
    }
}

fn run(args: RunArgs) -> Result<()> {
    let (algorithm, count) = match (args.centroid, args.mimosa) {
        (Some(n), None) => (Algorithm::Centroid, n),
        (None, Some(n)) => (Algorithm::Mimosa, n),
        _ => unreachable!("clap enforces exactly one of -c / -m"),
    };
    let opts = RunOptions {
        mode: if args.grow { Neighborhood::Growing } else { Neighborhood::Centroid },
        normalize: args.sort,
        skip_bad: args.skip_bad,
        truncate: args.truncate,
        ..RunOptions::new(args.theta, args.sizes, algorithm, count)
    };
    let out = BufWriter::with_capacity(1 << 16, io::stdout().lock());
    let summary = bench::run(&opts, io::stdin().lock(), out)?;
    eprint!(
        "items={} clusters={} skipped={} work={} elapsed={:.3}s",
        summary.items,
        summary.clusters,
        summary.skipped,
        summary.work,
        summary.elapsed.as_secs_f64()
    );
    match summary.store_bytes {
        Some(b) => eprintln!(" store={:.1}MiB", b as f64 / (1024.0 * 1024.0)),
        None => eprintln!(),
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse_from(with_default_subcommand(std::env::args().collect()));
    let result = match cli.command {
        Command::Run(args) => run(args),
        Command::Hist { file } => open(file).and_then(|r| {
            let rows = bench::hist(r)?;
            Ok(bench::write_hist(&rows, io::stdout().lock())?)
        }),
        Command::Times { file } => open(file).and_then(|r| {
            let recs = bench::times(r)?;
            Ok(bench::write_times(&recs, io::stdout().lock())?)
        }),
        Command::Gen(g) => {
            let config = SynthConfig {
                alphabet_size: g.alphabet,
                planted_rate: g.rate,
                theta: g.theta,
                ..SynthConfig::new(g.count, g.sizes, g.seed)
            };
            bench::gen(&config, BufWriter::new(io::stdout().lock()))
                .map(|_| ())
                .map_err(Into::into)
        }
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("mimosa: {e:#}");
            ExitCode::FAILURE
        }
    }
}

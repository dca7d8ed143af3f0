//! Batch front-end: parse flags, run the selected pipeline, write the
//! assignment, self-verify and print the report.

use std::fs::File;
use std::io::BufWriter;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::Parser;

use crate::clustering::dump_clusters;
use crate::config::{Algorithm, RunConfig};
use crate::edge_stream::{import_ascii, EdgeStream};
use crate::error::{Error, Result};
use crate::metrics::{verify_assignment, PartitionReport, Violation};
use crate::runner;
use crate::sink::FileSink;

/// Partition a binary edge list into k balanced edge sets.
#[derive(Debug, Parser)]
#[command(name = "partition", version, about)]
pub struct Args {
    /// Input graph: packed little-endian u32 pairs, 8 bytes per edge.
    pub input: PathBuf,

    /// Output assignment: (first, second, partition) triples, 12 bytes per
    /// edge, in stream order.
    pub output: PathBuf,

    /// Number of partitions (at least 2).
    #[arg(short, long)]
    pub k: u32,

    /// Balance factor: no partition exceeds floor(alpha * |E| / k) edges.
    #[arg(long, default_value_t = 1.05)]
    pub alpha: f64,

    /// Clustering passes (1 = no re-streaming).
    #[arg(long, default_value_t = 1)]
    pub passes: u32,

    /// Cluster volume cap as a multiple of 2|E|/k.
    #[arg(long = "cap-factor", default_value_t = 1.0)]
    pub cap_factor: f64,

    /// One of: 2ps-l, 2ps-hdrf, hdrf, dbh.
    #[arg(long, default_value = "2ps-l")]
    pub algorithm: Algorithm,

    /// HDRF balance weight.
    #[arg(long, default_value_t = 1.1)]
    pub lambda: f64,

    /// Seed for the hashing fallback paths.
    #[arg(long, default_value_t = 0)]
    pub seed: u64,

    /// Skip the self-verification pass over the written assignment.
    #[arg(long = "no-verify")]
    pub no_verify: bool,

    /// Emit the report as JSON instead of key = value lines.
    #[arg(long)]
    pub json: bool,

    /// Write "vertex cluster" lines after the clustering phase
    /// (two-phase algorithms only).
    #[arg(long = "dump-clusters", value_name = "PATH")]
    pub dump_clusters: Option<PathBuf>,

    /// Treat the input as an ascii "u v" edge list and convert it next to
    /// the output before partitioning.
    #[arg(long = "from-ascii")]
    pub from_ascii: bool,
}

impl Args {
    pub fn to_config(&self) -> RunConfig {
        RunConfig {
            k: self.k,
            alpha: self.alpha,
            passes: self.passes,
            cap_factor: self.cap_factor,
            algorithm: self.algorithm,
            lambda: self.lambda,
            seed: self.seed,
        }
    }
}

/// Outcome of a CLI run: the in-memory report plus whatever the
/// self-verification pass found (empty when skipped or clean).
pub struct RunSummary {
    pub report: PartitionReport,
    pub violations: Vec<Violation>,
}

/// Executes the whole job: optional ascii conversion, pipeline run with a
/// file sink, optional cluster dump, self-verification.
pub fn run(args: &Args) -> Result<RunSummary> {
    let config = args.to_config();
    config.validate()?;

    let input = if args.from_ascii {
        let converted = args.output.with_extension("input.bin");
        import_ascii(&args.input, &converted)?;
        converted
    } else {
        args.input.clone()
    };

    let mut stream = EdgeStream::open(&input)?;
    let mut sink = FileSink::create(&args.output, stream.edge_count())?;
    let output = runner::run(&mut stream, &config, &mut sink)?;

    if let Some(path) = &args.dump_clusters {
        match &output.clusters {
            Some(clusters) => {
                let file = File::create(path).map_err(|e| Error::io(path, e))?;
                let mut writer = BufWriter::new(file);
                dump_clusters(clusters, &mut writer).map_err(|e| Error::io(path, e))?;
            }
            None => eprintln!(
                "note: --dump-clusters ignored: {} has no clustering phase",
                config.algorithm
            ),
        }
    }

    let violations = if args.no_verify {
        Vec::new()
    } else {
        let verification = verify_assignment(
            &args.output,
            &mut stream,
            config.k,
            config.alpha,
            output.report.replication_factor,
        )?;
        verification.violations
    };

    Ok(RunSummary {
        report: output.report,
        violations,
    })
}

/// Clap entry point used by the `partition` binary.
pub fn main() -> ExitCode {
    let args = Args::parse();
    match run(&args) {
        Ok(summary) => {
            if args.json {
                println!("{}", summary.report.to_json());
            } else {
                print!("{}", summary.report.to_key_value());
            }
            if summary.violations.is_empty() {
                if !args.no_verify {
                    println!("verified = ok");
                }
                ExitCode::SUCCESS
            } else {
                eprintln!("self-verification failed:");
                for v in &summary.violations {
                    eprintln!("  {v}");
                }
                ExitCode::FAILURE
            }
        }
        Err(e @ Error::InvalidConfig { .. }) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::FAILURE
        }
    }
}

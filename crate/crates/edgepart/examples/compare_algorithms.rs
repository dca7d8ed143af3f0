//! Run all four partitioners on the same graph and compare replication
//! factor, balance, score evaluations and run-time.
//!
//! Usage: cargo run --release --example compare_algorithms -- [input.bin] [k]

use std::time::Instant;

use edgepart::synthgen::{generate_planted_edges, PlantedConfig};
use edgepart::{Algorithm, EdgeStream, NullSink, RunConfig};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let args: Vec<String> = std::env::args().skip(1).collect();
    let k: u32 = args.get(1).map_or(Ok(32), |s| s.parse())?;

    let edges = match args.first() {
        Some(path) => {
            let mut edges = Vec::new();
            EdgeStream::open(path)?.for_each_edge(|e| edges.push(e))?;
            edges
        }
        None => {
            println!("no input given, using a generated 64-cluster graph");
            generate_planted_edges(&PlantedConfig {
                clusters: 64,
                vertices_per_cluster: 32,
                p_intra: 0.3,
                p_inter: 0.003,
                seed: 1,
            })?
        }
    };
    println!("{} edges, k = {k}\n", edges.len());
    println!(
        "{:<10} {:>8} {:>10} {:>12} {:>14} {:>9}",
        "algorithm", "rf", "max size", "achieved a", "score evals", "time"
    );

    for algorithm in Algorithm::ALL {
        let config = RunConfig {
            k,
            algorithm,
            ..RunConfig::default()
        };
        let mut stream = EdgeStream::from_edges(edges.clone());
        let mut sink = NullSink::default();
        let t = Instant::now();
        let run = edgepart::runner::run(&mut stream, &config, &mut sink)?;
        let elapsed = t.elapsed().as_secs_f64();
        let report = run.report;
        println!(
            "{:<10} {:>8.4} {:>10} {:>12.4} {:>14} {:>8.3}s",
            report.algorithm,
            report.replication_factor.unwrap_or(f64::NAN),
            report.max_size(),
            report.achieved_alpha,
            report.score_evaluations,
            elapsed,
        );
    }
    Ok(())
}

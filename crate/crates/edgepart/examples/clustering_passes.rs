//! Watch the streaming clustering phase converge under re-streaming:
//! run 1..=N passes, print cluster statistics after each, and optionally
//! dump the final vertex->cluster map.
//!
//! Usage: cargo run --release --example clustering_passes -- [input.bin] [passes] [dump.txt]

use edgepart::clustering::{clustering_pass, default_volume_cap, dump_clusters, ClusterState};
use edgepart::synthgen::{generate_planted_edges, PlantedConfig};
use edgepart::{compute_degrees, EdgeStream};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let args: Vec<String> = std::env::args().skip(1).collect();
    let passes: u32 = args.get(1).map_or(Ok(4), |s| s.parse())?;

    let mut stream = match args.first() {
        Some(path) => EdgeStream::open(path)?,
        None => {
            println!("no input given, using a generated 16-cluster graph");
            EdgeStream::from_edges(generate_planted_edges(&PlantedConfig {
                clusters: 16,
                vertices_per_cluster: 64,
                p_intra: 0.2,
                p_inter: 0.002,
                seed: 1,
            })?)
        }
    };

    let degrees = compute_degrees(&mut stream)?;
    let max_vol = default_volume_cap(stream.edge_count(), 32, 1.0);
    println!(
        "{} edges, {} vertices, volume cap {max_vol}\n",
        stream.edge_count(),
        degrees.vertex_universe()
    );

    let mut state = ClusterState::new(degrees, max_vol);
    let mut previous: Option<Vec<_>> = None;
    for pass in 1..=passes {
        clustering_pass(&mut stream, &mut state)?;
        let nonempty = state.volumes().iter().filter(|&&v| v > 0).count();
        let largest = state.volumes().iter().copied().max().unwrap_or(0);
        let current: Vec<_> = state.assignments().collect();
        let moved = previous.as_ref().map_or(current.len(), |prev| {
            current
                .iter()
                .zip(prev.iter())
                .filter(|(a, b)| a != b)
                .count()
        });
        println!(
            "pass {pass}: {nonempty} non-empty clusters, largest volume {largest}, {moved} vertices moved"
        );
        previous = Some(current);
    }

    if let Some(path) = args.get(2) {
        let mut file = std::io::BufWriter::new(std::fs::File::create(path)?);
        dump_clusters(&state, &mut file)?;
        println!("\nwrote vertex/cluster pairs to {path}");
    }
    Ok(())
}

//! Generate a planted-partition graph as a binary edge list.
//!
//! Usage: cargo run --release --example generate -- \
//!     [path] [clusters] [vertices_per_cluster] [p_intra] [p_inter] [seed]

use edgepart::synthgen::{generate_planted, PlantedConfig};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let args: Vec<String> = std::env::args().skip(1).collect();
    let arg = |i: usize, default: &str| args.get(i).cloned().unwrap_or_else(|| default.into());

    let path = arg(0, "planted.bin");
    let config = PlantedConfig {
        clusters: arg(1, "64").parse()?,
        vertices_per_cluster: arg(2, "32").parse()?,
        p_intra: arg(3, "0.3").parse()?,
        p_inter: arg(4, "0.003").parse()?,
        seed: arg(5, "1").parse()?,
    };

    let stream = generate_planted(&config, &path)?;
    println!(
        "wrote {} edges over {} vertices ({} clusters x {}) to {path}",
        stream.edge_count(),
        config.vertex_count(),
        config.clusters,
        config.vertices_per_cluster,
    );
    println!(
        "expected {:.0} edges (p_intra {}, p_inter {}, seed {})",
        config.expected_edges(),
        config.p_intra,
        config.p_inter,
        config.seed
    );
    Ok(())
}

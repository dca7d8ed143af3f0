//! Deterministic planted-partition graph generator for tests and examples.
//!
//! Vertices are grouped into equally sized planted clusters; each
//! intra-cluster pair becomes an edge with probability `p_intra`, each
//! inter-cluster pair with `p_inter`. Sampling skips over non-edges
//! geometrically, so generation is O(edges), and the final edge order is
//! shuffled so streaming algorithms see nothing pre-sorted.

use std::path::Path;

use rand_chacha::rand_core::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::edge_stream::{write_edges, Edge, EdgeStream, VertexId};
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
pub struct PlantedConfig {
    pub clusters: u32,
    pub vertices_per_cluster: u32,
    pub p_intra: f64,
    pub p_inter: f64,
    pub seed: u64,
}

impl PlantedConfig {
    pub fn vertex_count(&self) -> u64 {
        self.clusters as u64 * self.vertices_per_cluster as u64
    }

    /// Planted cluster of a vertex.
    pub fn cluster_of(&self, v: VertexId) -> u32 {
        v / self.vertices_per_cluster
    }

    pub fn intra_pairs(&self) -> u64 {
        let m = self.vertices_per_cluster as u64;
        self.clusters as u64 * m * (m - 1) / 2
    }

    pub fn inter_pairs(&self) -> u64 {
        let n = self.vertex_count();
        n * (n - 1) / 2 - self.intra_pairs()
    }

    /// Mean of the binomial edge count.
    pub fn expected_edges(&self) -> f64 {
        self.intra_pairs() as f64 * self.p_intra + self.inter_pairs() as f64 * self.p_inter
    }

    pub fn validate(&self) -> Result<()> {
        if self.clusters == 0 || self.vertices_per_cluster == 0 {
            return Err(Error::invalid_config(
                "clusters",
                "clusters and vertices_per_cluster must be positive",
            ));
        }
        if self.vertex_count() > u32::MAX as u64 {
            return Err(Error::invalid_config(
                "clusters",
                "vertex id space exceeds 32 bits",
            ));
        }
        for (field, p) in [("p_intra", self.p_intra), ("p_inter", self.p_inter)] {
            if !(0.0..=1.0).contains(&p) {
                return Err(Error::invalid_config(
                    field,
                    format!("probability {p} not in [0, 1]"),
                ));
            }
        }
        if self.p_intra <= self.p_inter {
            return Err(Error::invalid_config(
                "p_intra",
                "must exceed p_inter for a planted structure",
            ));
        }
        Ok(())
    }
}

struct SeededRng(ChaCha8Rng);

impl SeededRng {
    fn new(seed: u64) -> Self {
        SeededRng(ChaCha8Rng::seed_from_u64(seed))
    }

    fn uniform(&mut self) -> f64 {
        // 53 high bits -> [0, 1).
        (self.0.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
    }

    /// Number of failures before the next Bernoulli(p) success.
    fn geometric_gap(&mut self, p: f64) -> u64 {
        if p >= 1.0 {
            return 0;
        }
        // ln(1-u) / ln(1-p), truncated; u < 1 keeps the logarithm finite.
        let u = self.uniform();
        let gap = ((1.0 - u).ln() / (1.0 - p).ln()).floor();
        if gap >= u64::MAX as f64 {
            u64::MAX
        } else {
            gap as u64
        }
    }

    fn below(&mut self, n: u64) -> u64 {
        self.0.next_u64() % n
    }
}

/// Generates the edge multiset in memory (already shuffled).
pub fn generate_planted_edges(config: &PlantedConfig) -> Result<Vec<Edge>> {
    config.validate()?;
    let mut rng = SeededRng::new(config.seed);
    let mut edges = Vec::new();
    let m = config.vertices_per_cluster;
    let n = config.vertex_count() as u32;

    // Intra-cluster pairs, cluster by cluster.
    if config.p_intra > 0.0 {
        for cluster in 0..config.clusters {
            let base = cluster * m;
            for i in 0..m {
                sample_row(
                    &mut rng,
                    config.p_intra,
                    base + i,
                    base + i + 1,
                    base + m,
                    |_| true,
                    &mut edges,
                );
            }
        }
    }

    // Inter-cluster pairs: sample over the full row, dropping hits that
    // fall inside the vertex's own cluster (those were handled above).
    if config.p_inter > 0.0 {
        for v in 0..n {
            let own = config.cluster_of(v);
            sample_row(
                &mut rng,
                config.p_inter,
                v,
                v + 1,
                n,
                |u| config.cluster_of(u) != own,
                &mut edges,
            );
        }
    }

    // Fisher-Yates with the same generator: order is part of the seed.
    for i in (1..edges.len()).rev() {
        let j = rng.below(i as u64 + 1) as usize;
        edges.swap(i, j);
    }
    Ok(edges)
}

/// Bernoulli(p) over `lo..hi` via geometric skips, keeping accepted
/// neighbours of `v` that pass `keep`.
fn sample_row(
    rng: &mut SeededRng,
    p: f64,
    v: u32,
    lo: u32,
    hi: u32,
    keep: impl Fn(u32) -> bool,
    edges: &mut Vec<Edge>,
) {
    let mut next = lo as u64;
    loop {
        next += rng.geometric_gap(p);
        if next >= hi as u64 {
            break;
        }
        let u = next as u32;
        if keep(u) {
            edges.push(Edge::new(v, u));
        }
        next += 1;
    }
}

/// Generates, writes the binary edge list to `path` and re-opens it as a
/// stream.
pub fn generate_planted(config: &PlantedConfig, path: impl AsRef<Path>) -> Result<EdgeStream> {
    let edges = generate_planted_edges(config)?;
    write_edges(path.as_ref(), &edges)?;
    EdgeStream::open(path.as_ref())
}

//! Streaming vertex clustering with bounded cluster volumes.
//!
//! One pass over the edge stream assigns every streamed vertex to a cluster;
//! a vertex migrates toward the neighbouring cluster with the larger volume
//! whenever the move keeps that cluster under the volume cap. Volumes use
//! exact degrees computed upfront, so the cap is effective. Further passes
//! ("re-streaming") refine the assignment in place.

use std::io::Write;

use crate::edge_stream::{DegreeTable, Edge, EdgeStream, VertexId};
use crate::error::Result;

pub type ClusterId = u32;
pub type Volume = u64;

const NO_CLUSTER: ClusterId = ClusterId::MAX;

/// Volume cap ⌈cap_factor · 2|E| / k⌉. With `cap_factor = 1.0` this is one
/// partition's share of the total volume; clusters larger than that would
/// have to be cut during partitioning anyway.
pub fn default_volume_cap(edge_count: u64, k: u32, cap_factor: f64) -> Volume {
    debug_assert!(k >= 1 && cap_factor > 0.0);
    (cap_factor * 2.0 * edge_count as f64 / k as f64).ceil() as Volume
}

/// Mutable clustering state: vertex→cluster map, per-cluster volumes and the
/// degree table the volumes are measured in.
#[derive(Debug, Clone)]
pub struct ClusterState {
    degrees: DegreeTable,
    v2c: Vec<ClusterId>,
    vol: Vec<Volume>,
    max_vol: Volume,
}

impl ClusterState {
    pub fn new(degrees: DegreeTable, max_vol: Volume) -> Self {
        let slots = degrees.vertex_slots();
        ClusterState {
            degrees,
            v2c: vec![NO_CLUSTER; slots],
            vol: Vec::new(),
            max_vol,
        }
    }

    pub fn degrees(&self) -> &DegreeTable {
        &self.degrees
    }

    pub fn max_volume(&self) -> Volume {
        self.max_vol
    }

    /// Cluster of `v`, or `None` if `v` has not been streamed yet.
    #[inline]
    pub fn cluster_of(&self, v: VertexId) -> Option<ClusterId> {
        match self.v2c.get(v as usize) {
            Some(&c) if c != NO_CLUSTER => Some(c),
            _ => None,
        }
    }

    /// Number of cluster ids handed out so far (including emptied ones).
    pub fn cluster_count(&self) -> usize {
        self.vol.len()
    }

    #[inline]
    pub fn volume(&self, c: ClusterId) -> Volume {
        self.vol[c as usize]
    }

    pub fn volumes(&self) -> &[Volume] {
        &self.vol
    }

    /// All `(vertex, cluster)` pairs for clustered vertices.
    pub fn assignments(&self) -> impl Iterator<Item = (VertexId, ClusterId)> + '_ {
        self.v2c
            .iter()
            .enumerate()
            .filter(|(_, &c)| c != NO_CLUSTER)
            .map(|(v, &c)| (v as VertexId, c))
    }

    fn fresh_cluster(&mut self, v: VertexId) -> ClusterId {
        let id = self.vol.len();
        assert!(id < NO_CLUSTER as usize, "cluster id space exhausted");
        self.vol.push(self.degrees.degree(v));
        let id = id as ClusterId;
        self.v2c[v as usize] = id;
        id
    }

    /// Feeds one edge through the clustering rule: unseen endpoints get
    /// fresh singleton clusters, then the endpoint sitting in the lighter
    /// cluster (by volume minus own degree, ties to `e.first`) migrates into
    /// the other endpoint's cluster if the destination stays within the cap.
    /// Migration is considered only while both clusters are within the cap;
    /// a same-cluster pair is left untouched.
    pub fn cluster_edge(&mut self, e: Edge) {
        let c_first = match self.cluster_of(e.first) {
            Some(c) => c,
            None => self.fresh_cluster(e.first),
        };
        let c_second = match self.cluster_of(e.second) {
            Some(c) => c,
            None => self.fresh_cluster(e.second),
        };
        if c_first == c_second {
            return;
        }
        let vol_first = self.vol[c_first as usize];
        let vol_second = self.vol[c_second as usize];
        if vol_first > self.max_vol || vol_second > self.max_vol {
            return;
        }
        let d_first = self.degrees.degree(e.first);
        let d_second = self.degrees.degree(e.second);
        // vol[c] counts the member's own degree, so these never underflow.
        let (small, c_small, d_small, c_large) = if vol_first - d_first <= vol_second - d_second {
            (e.first, c_first, d_first, c_second)
        } else {
            (e.second, c_second, d_second, c_first)
        };
        if self.vol[c_large as usize] + d_small <= self.max_vol {
            self.vol[c_large as usize] += d_small;
            self.vol[c_small as usize] -= d_small;
            self.v2c[small as usize] = c_large;
        }
    }
}

/// One full clustering pass over the stream, mutating `state` in place.
pub fn clustering_pass(stream: &mut EdgeStream, state: &mut ClusterState) -> Result<()> {
    stream.for_each_edge(|e| state.cluster_edge(e))
}

/// Runs `passes` clustering passes (the first builds the state, the rest
/// re-stream over it) and returns the final state.
pub fn run_clustering(
    stream: &mut EdgeStream,
    degrees: DegreeTable,
    max_vol: Volume,
    passes: u32,
) -> Result<ClusterState> {
    debug_assert!(passes >= 1);
    let mut state = ClusterState::new(degrees, max_vol);
    for _ in 0..passes {
        clustering_pass(stream, &mut state)?;
    }
    Ok(state)
}

/// Debug dump: one "vertex cluster" line per clustered vertex.
pub fn dump_clusters(state: &ClusterState, w: &mut impl Write) -> std::io::Result<()> {
    for (v, c) in state.assignments() {
        writeln!(w, "{v} {c}")?;
    }
    Ok(())
}

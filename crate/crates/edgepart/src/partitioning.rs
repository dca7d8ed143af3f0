//! Cluster-guided streaming edge partitioning (phase 2).
//!
//! Three steps over the frozen clustering state:
//!
//! 1. map clusters onto partitions with sorted list scheduling, balancing
//!    accumulated cluster volume;
//! 2. pre-partition every edge whose endpoints share a cluster or whose
//!    clusters live on the same partition;
//! 3. stream the remaining edges, scoring only the two partitions that host
//!    the endpoints' clusters.
//!
//! Each partition accepts edges strictly below a hard capacity; a full
//! target falls back to degree-based hashing and, as a last resort, to the
//! least loaded partition, so the balance constraint can never be violated.

use std::cmp::Reverse;
use std::collections::BinaryHeap;

use crate::bitmatrix::BitMatrix;
use crate::clustering::{default_volume_cap, run_clustering, ClusterId, ClusterState, Volume};
use crate::config::RunConfig;
use crate::edge_stream::{compute_degrees, Edge, EdgeStream, VertexId};
use crate::error::{Error, Result};
use crate::hashing::vertex_hash;
use crate::metrics::{PartitionReport, PhaseTimer};
use crate::sink::AssignmentSink;

pub type PartitionId = u32;

/// Hard per-partition edge budget: ⌊α·|E|/k⌋, but never below ⌈|E|/k⌉ so a
/// feasible assignment always exists.
pub fn partition_capacity(edge_count: u64, k: u32, alpha: f64) -> u64 {
    debug_assert!(k >= 2, "edge partitioning requires k >= 2");
    debug_assert!(alpha >= 1.0);
    let relaxed = (alpha * edge_count as f64 / k as f64).floor() as u64;
    relaxed.max(edge_count.div_ceil(k as u64))
}

/// Sorted list scheduling: clusters in decreasing volume order (ties by
/// lower id), each onto the currently least loaded partition. Returns the
/// cluster→partition map and the per-partition accumulated volumes.
pub fn map_clusters_to_partitions(volumes: &[Volume], k: u32) -> (Vec<PartitionId>, Vec<Volume>) {
    let mut order: Vec<u32> = (0..volumes.len() as u32).collect();
    order.sort_unstable_by(|&a, &b| {
        volumes[b as usize]
            .cmp(&volumes[a as usize])
            .then(a.cmp(&b))
    });
    let mut heap: BinaryHeap<Reverse<(Volume, PartitionId)>> =
        (0..k).map(|p| Reverse((0, p))).collect();
    let mut c2p = vec![0 as PartitionId; volumes.len()];
    let mut loads = vec![0 as Volume; k as usize];
    for c in order {
        let Reverse((load, p)) = heap.pop().expect("k >= 1 partitions");
        c2p[c as usize] = p;
        let load = load + volumes[c as usize];
        loads[p as usize] = load;
        heap.push(Reverse((load, p)));
    }
    (c2p, loads)
}

/// Pass instrumentation; `score_evaluations` is the operational run-time
/// measure (2 per remaining edge plus 1 per pre-partition overflow).
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct Counters {
    pub score_evaluations: u64,
    pub prepartitioned_edges: u64,
    pub prepartition_overflows: u64,
    pub remaining_edges: u64,
    pub hash_fallbacks: u64,
    pub last_resort_assignments: u64,
}

/// Mutable partitioning state: cluster→partition map, replication bit
/// matrix and per-partition edge counts under a hard capacity.
#[derive(Debug, Clone)]
pub struct PartitionState {
    k: u32,
    capacity: u64,
    c2p: Vec<PartitionId>,
    vol_p: Vec<Volume>,
    v2p: BitMatrix,
    sizes: Vec<u64>,
    counters: Counters,
}

impl PartitionState {
    /// Runs step 1 (cluster mapping) and prepares empty replication state.
    pub fn new(clusters: &ClusterState, edge_count: u64, k: u32, alpha: f64) -> Self {
        let (c2p, vol_p) = map_clusters_to_partitions(clusters.volumes(), k);
        PartitionState {
            k,
            capacity: partition_capacity(edge_count, k, alpha),
            c2p,
            vol_p,
            v2p: BitMatrix::new(clusters.degrees().vertex_slots(), k as usize),
            sizes: vec![0; k as usize],
            counters: Counters::default(),
        }
    }

    pub fn k(&self) -> u32 {
        self.k
    }

    pub fn capacity(&self) -> u64 {
        self.capacity
    }

    pub fn partition_of_cluster(&self, c: ClusterId) -> PartitionId {
        self.c2p[c as usize]
    }

    /// Accumulated cluster volume per partition from step 1.
    pub fn partition_volumes(&self) -> &[Volume] {
        &self.vol_p
    }

    pub fn sizes(&self) -> &[u64] {
        &self.sizes
    }

    #[inline]
    pub fn replicated(&self, v: VertexId, p: PartitionId) -> bool {
        self.v2p.get(v as usize, p as usize)
    }

    pub fn replication_matrix(&self) -> &BitMatrix {
        &self.v2p
    }

    pub fn counters(&self) -> Counters {
        self.counters
    }

    pub(crate) fn counters_mut(&mut self) -> &mut Counters {
        &mut self.counters
    }

    #[inline]
    fn has_room(&self, p: PartitionId) -> bool {
        self.sizes[p as usize] < self.capacity
    }

    fn least_loaded(&self) -> PartitionId {
        let (p, _) = self
            .sizes
            .iter()
            .enumerate()
            .min_by_key(|&(i, &s)| (s, i))
            .expect("k >= 1 partitions");
        p as PartitionId
    }

    pub(crate) fn check_bounds(&self, e: Edge) -> Result<()> {
        let rows = self.v2p.rows() as u64;
        for v in [e.first, e.second] {
            if (v as u64) >= rows {
                return Err(Error::VertexOutOfRange {
                    id: v,
                    max: rows.saturating_sub(1) as u32,
                });
            }
        }
        Ok(())
    }

    /// Records `e` on `p`: sets both replication bits and bumps the size.
    pub fn commit(&mut self, e: Edge, p: PartitionId) {
        self.v2p.set(e.first as usize, p as usize);
        self.v2p.set(e.second as usize, p as usize);
        self.sizes[p as usize] += 1;
    }

    fn into_parts(self) -> (BitMatrix, Vec<u64>, Counters) {
        (self.v2p, self.sizes, self.counters)
    }
}

/// Placement score of edge `(u, v)` on candidate partition `p`: for each
/// endpoint a degree-weighted replication term (in (1, 2) when the endpoint
/// is already on `p`, favouring the lower-degree one) plus a cluster term
/// (the endpoint cluster's share of the combined cluster volume when that
/// cluster maps to `p`). Ranges over [0, 4].
pub fn score(
    u: VertexId,
    v: VertexId,
    p: PartitionId,
    clusters: &ClusterState,
    state: &PartitionState,
) -> f64 {
    let degrees = clusters.degrees();
    let d_u = degrees.degree(u) as f64;
    let d_v = degrees.degree(v) as f64;
    // Streamed edges always have a positive degree sum; the max guards the
    // (malformed) case of endpoints that never went through the degree pass.
    let degree_sum = (d_u + d_v).max(1.0);

    let replication = |x: VertexId, d_x: f64| {
        if state.replicated(x, p) {
            1.0 + (1.0 - d_x / degree_sum)
        } else {
            0.0
        }
    };

    let c_u = clusters.cluster_of(u);
    let c_v = clusters.cluster_of(v);
    let vol_u = c_u.map_or(0, |c| clusters.volume(c)) as f64;
    let vol_v = c_v.map_or(0, |c| clusters.volume(c)) as f64;
    let vol_sum = vol_u + vol_v;
    let cluster_term = |c: Option<ClusterId>, vol_x: f64| match c {
        Some(c) if vol_sum > 0.0 && state.partition_of_cluster(c) == p => vol_x / vol_sum,
        _ => 0.0,
    };

    replication(u, d_u) + replication(v, d_v) + cluster_term(c_u, vol_u) + cluster_term(c_v, vol_v)
}

/// Partition the edge would be pre-assigned to: the common partition when
/// both endpoints share a cluster or their clusters co-locate, else `None`.
/// Depends only on state frozen after step 1, so both passes agree on it.
pub(crate) fn prepartition_target(
    e: Edge,
    clusters: &ClusterState,
    state: &PartitionState,
) -> Option<PartitionId> {
    let c_1 = clusters.cluster_of(e.first)?;
    let c_2 = clusters.cluster_of(e.second)?;
    let p_1 = state.partition_of_cluster(c_1);
    if c_1 == c_2 || p_1 == state.partition_of_cluster(c_2) {
        Some(p_1)
    } else {
        None
    }
}

/// Endpoint with the larger degree; ties go to `e.first`.
fn higher_degree_endpoint(e: Edge, clusters: &ClusterState) -> VertexId {
    let degrees = clusters.degrees();
    if degrees.degree(e.second) > degrees.degree(e.first) {
        e.second
    } else {
        e.first
    }
}

/// Two-candidate scoring: evaluate `score` on the partitions hosting the
/// endpoints' clusters (first endpoint's first; a single shared candidate is
/// evaluated once) and keep the strictly best. `None` only when neither
/// endpoint is clustered.
fn scored_target(
    e: Edge,
    clusters: &ClusterState,
    state: &mut PartitionState,
) -> Option<PartitionId> {
    let p_first = clusters
        .cluster_of(e.first)
        .map(|c| state.partition_of_cluster(c));
    let p_second = clusters
        .cluster_of(e.second)
        .map(|c| state.partition_of_cluster(c));
    // An unclustered endpoint contributes no candidate of its own; it
    // borrows the other side's partition (its cluster terms score 0).
    let (a, b) = match (p_first, p_second) {
        (Some(a), Some(b)) => (a, b),
        (Some(a), None) => (a, a),
        (None, Some(b)) => (b, b),
        (None, None) => return None,
    };

    let mut best_score = 0.0;
    let mut target = None;
    let candidates: &[PartitionId] = if a == b { &[a] } else { &[a, b] };
    for &p in candidates {
        state.counters.score_evaluations += 1;
        let s = score(e.first, e.second, p, clusters, state);
        debug_assert!((0.0..=4.0).contains(&s), "score {s} out of bounds");
        if s > best_score {
            best_score = s;
            target = Some(p);
        }
    }
    // All-zero scores degenerate to the first candidate.
    Some(target.unwrap_or(a))
}

/// Scored assignment with the capacity fallback chain: scored target, then
/// hash of the higher-degree endpoint, then the least loaded partition
/// (which always has room because capacity·k ≥ |E|).
fn assign_with_scoring(
    e: Edge,
    ordinal: u64,
    clusters: &ClusterState,
    state: &mut PartitionState,
    seed: u64,
    sink: &mut impl AssignmentSink,
) -> Result<()> {
    let mut target = match scored_target(e, clusters, state) {
        Some(p) => p,
        // Neither endpoint clustered: straight to degree-based hashing.
        None => (vertex_hash(higher_degree_endpoint(e, clusters), seed) % state.k as u64) as u32,
    };
    if !state.has_room(target) {
        state.counters.hash_fallbacks += 1;
        target = (vertex_hash(higher_degree_endpoint(e, clusters), seed) % state.k as u64) as u32;
        if !state.has_room(target) {
            state.counters.last_resort_assignments += 1;
            target = state.least_loaded();
            debug_assert!(state.has_room(target));
        }
    }
    state.commit(e, target);
    sink.assign(ordinal, e, target)
}

/// Step 2: one pass assigning every edge whose endpoints share a cluster or
/// whose clusters co-locate. A full target partition diverts the edge
/// through the scoring fallback chain instead of violating the capacity.
pub fn prepartition_edges(
    stream: &mut EdgeStream,
    clusters: &ClusterState,
    state: &mut PartitionState,
    seed: u64,
    sink: &mut impl AssignmentSink,
) -> Result<()> {
    let mut ordinal = 0u64;
    stream.try_for_each_edge(|e| {
        let i = ordinal;
        ordinal += 1;
        match prepartition_target(e, clusters, state) {
            Some(p) => {
                state.check_bounds(e)?;
                if state.has_room(p) {
                    state.counters.prepartitioned_edges += 1;
                    state.commit(e, p);
                    sink.assign(i, e, p)
                } else {
                    state.counters.prepartition_overflows += 1;
                    assign_with_scoring(e, i, clusters, state, seed, sink)
                }
            }
            None => Ok(()),
        }
    })
}

/// Step 3: one pass assigning every edge the pre-partitioning predicate
/// skipped, via two-candidate scoring.
pub fn partition_remaining(
    stream: &mut EdgeStream,
    clusters: &ClusterState,
    state: &mut PartitionState,
    seed: u64,
    sink: &mut impl AssignmentSink,
) -> Result<()> {
    let mut ordinal = 0u64;
    stream.try_for_each_edge(|e| {
        let i = ordinal;
        ordinal += 1;
        if prepartition_target(e, clusters, state).is_some() {
            return Ok(()); // already assigned in step 2
        }
        state.check_bounds(e)?;
        state.counters.remaining_edges += 1;
        assign_with_scoring(e, i, clusters, state, seed, sink)
    })
}

/// Everything a pipeline run produces besides the assignment itself.
pub struct RunOutput {
    pub report: PartitionReport,
    /// Final clustering state, for the two-phase algorithms.
    pub clusters: Option<ClusterState>,
    /// Final vertex replication matrix.
    pub v2p: BitMatrix,
    pub counters: Counters,
}

/// Full two-phase pipeline with the linear-time remaining pass: degree pass,
/// clustering pass(es), cluster mapping, pre-partitioning, two-candidate
/// streaming. Assignments go to `sink` keyed by stream ordinal.
pub fn run_2psl(
    stream: &mut EdgeStream,
    config: &RunConfig,
    sink: &mut impl AssignmentSink,
) -> Result<RunOutput> {
    let seed = config.seed;
    run_two_phase(
        stream,
        config,
        "2ps-l",
        sink,
        |stream, clusters, state, sink| partition_remaining(stream, clusters, state, seed, sink),
    )
}

/// Shared two-phase scaffolding; `remaining` decides how the edges left
/// after pre-partitioning are scored.
pub(crate) fn run_two_phase<S: AssignmentSink>(
    stream: &mut EdgeStream,
    config: &RunConfig,
    algorithm: &str,
    sink: &mut S,
    mut remaining: impl FnMut(&mut EdgeStream, &ClusterState, &mut PartitionState, &mut S) -> Result<()>,
) -> Result<RunOutput> {
    config.validate()?;
    let edge_count = stream.edge_count();
    let mut timer = PhaseTimer::new();

    let degrees = compute_degrees(stream)?;
    let universe = degrees.vertex_universe();
    timer.mark("degrees");

    let max_vol = default_volume_cap(edge_count, config.k, config.cap_factor);
    let clusters = run_clustering(stream, degrees, max_vol, config.passes)?;
    timer.mark("clustering");

    let mut state = PartitionState::new(&clusters, edge_count, config.k, config.alpha);
    timer.mark("mapping");

    prepartition_edges(stream, &clusters, &mut state, config.seed, sink)?;
    timer.mark("prepartition");

    remaining(stream, &clusters, &mut state, sink)?;
    sink.finish()?;
    timer.mark("remaining");

    let capacity = state.capacity();
    let (v2p, sizes, counters) = state.into_parts();
    let report = PartitionReport::from_run(
        algorithm,
        config.k,
        config.alpha,
        edge_count,
        universe,
        capacity,
        &v2p,
        sizes,
        counters.score_evaluations,
        timer.into_phases(),
    );
    Ok(RunOutput {
        report,
        clusters: Some(clusters),
        v2p,
        counters,
    })
}

/// In-memory assignment aligned with stream order (one partition id per
/// edge) plus the final partition sizes.
#[derive(Debug, Clone, PartialEq)]
pub struct PartitionAssignment {
    partitions: Vec<PartitionId>,
    sizes: Vec<u64>,
    k: u32,
    alpha: f64,
}

impl PartitionAssignment {
    pub fn new(partitions: Vec<PartitionId>, k: u32, alpha: f64) -> Self {
        let mut sizes = vec![0u64; k as usize];
        for &p in &partitions {
            sizes[p as usize] += 1;
        }
        PartitionAssignment {
            partitions,
            sizes,
            k,
            alpha,
        }
    }

    pub fn len(&self) -> usize {
        self.partitions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.partitions.is_empty()
    }

    pub fn partition_of(&self, edge_index: usize) -> PartitionId {
        self.partitions[edge_index]
    }

    pub fn partitions(&self) -> &[PartitionId] {
        &self.partitions
    }

    pub fn sizes(&self) -> &[u64] {
        &self.sizes
    }

    pub fn max_size(&self) -> u64 {
        self.sizes.iter().copied().max().unwrap_or(0)
    }

    pub fn k(&self) -> u32 {
        self.k
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }
}

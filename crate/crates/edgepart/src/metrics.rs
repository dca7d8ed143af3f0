//! Evaluation quantities (replication factor, balance, timings) and the
//! independent assignment checker.

use std::fmt;
use std::path::Path;
use std::time::Instant;

use crate::bitmatrix::BitMatrix;
use crate::edge_stream::AssignmentReader;
use crate::edge_stream::{compute_degrees, Edge, EdgeStream};
use crate::error::Result;
use crate::partitioning::partition_capacity;

/// Average number of partitions covering each vertex, over the universe of
/// vertices with degree ≥ 1. `None` when the universe is empty.
pub fn replication_factor(v2p: &BitMatrix, vertex_universe: u64) -> Option<f64> {
    if vertex_universe == 0 {
        None
    } else {
        Some(v2p.count_ones() as f64 / vertex_universe as f64)
    }
}

/// Final run summary: quality, balance and per-phase wall-clock seconds.
#[derive(Debug, Clone, serde::Serialize)]
pub struct PartitionReport {
    pub algorithm: String,
    pub k: u32,
    pub alpha: f64,
    pub edge_count: u64,
    /// Vertices with degree ≥ 1.
    pub vertex_count: u64,
    pub capacity: u64,
    /// `None` when the graph has no edges.
    pub replication_factor: Option<f64>,
    pub sizes: Vec<u64>,
    /// k·max_size/|E| (0 for an empty graph).
    pub achieved_alpha: f64,
    pub phase_seconds: Vec<(String, f64)>,
    pub score_evaluations: u64,
}

impl PartitionReport {
    #[allow(clippy::too_many_arguments)]
    pub fn from_run(
        algorithm: &str,
        k: u32,
        alpha: f64,
        edge_count: u64,
        vertex_count: u64,
        capacity: u64,
        v2p: &BitMatrix,
        sizes: Vec<u64>,
        score_evaluations: u64,
        phase_seconds: Vec<(String, f64)>,
    ) -> Self {
        let rf = replication_factor(v2p, vertex_count);
        let max_size = sizes.iter().copied().max().unwrap_or(0);
        let achieved_alpha = if edge_count > 0 {
            k as f64 * max_size as f64 / edge_count as f64
        } else {
            0.0
        };
        PartitionReport {
            algorithm: algorithm.to_string(),
            k,
            alpha,
            edge_count,
            vertex_count,
            capacity,
            replication_factor: rf,
            sizes,
            achieved_alpha,
            phase_seconds,
            score_evaluations,
        }
    }

    pub fn max_size(&self) -> u64 {
        self.sizes.iter().copied().max().unwrap_or(0)
    }

    pub fn min_size(&self) -> u64 {
        self.sizes.iter().copied().min().unwrap_or(0)
    }

    pub fn total_seconds(&self) -> f64 {
        self.phase_seconds.iter().map(|(_, s)| s).sum()
    }

    pub fn phase(&self, name: &str) -> Option<f64> {
        self.phase_seconds
            .iter()
            .find(|(n, _)| n == name)
            .map(|&(_, s)| s)
    }

    /// `key = value` lines, one metric per line.
    pub fn to_key_value(&self) -> String {
        use std::fmt::Write;
        let mut out = String::new();
        let mut line = |k: &str, v: &dyn fmt::Display| {
            let _ = writeln!(out, "{k} = {v}");
        };
        line("algorithm", &self.algorithm);
        line("k", &self.k);
        line("alpha", &self.alpha);
        line("edges", &self.edge_count);
        line("vertices", &self.vertex_count);
        line("capacity", &self.capacity);
        match self.replication_factor {
            Some(rf) => line("replication_factor", &rf),
            None => line("replication_factor", &"n/a"),
        }
        line("max_partition_size", &self.max_size());
        line("min_partition_size", &self.min_size());
        line("achieved_alpha", &self.achieved_alpha);
        line("score_evaluations", &self.score_evaluations);
        for (name, secs) in &self.phase_seconds {
            line(&format!("phase_{name}_s"), secs);
        }
        line("total_s", &self.total_seconds());
        let sizes = self
            .sizes
            .iter()
            .map(|s| s.to_string())
            .collect::<Vec<_>>()
            .join(",");
        line("sizes", &sizes);
        out
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}

/// Phase stopwatch: `mark` closes the current phase under the given name.
pub struct PhaseTimer {
    last: Instant,
    phases: Vec<(String, f64)>,
}

impl PhaseTimer {
    #[allow(clippy::new_without_default)]
    pub fn new() -> Self {
        PhaseTimer {
            last: Instant::now(),
            phases: Vec::new(),
        }
    }

    pub fn mark(&mut self, name: &str) {
        let now = Instant::now();
        self.phases
            .push((name.to_string(), (now - self.last).as_secs_f64()));
        self.last = now;
    }

    pub fn into_phases(self) -> Vec<(String, f64)> {
        self.phases
    }
}

/// One problem found by [`verify_assignment`].
#[derive(Debug, Clone, PartialEq)]
pub enum Violation {
    EdgeCountMismatch {
        expected: u64,
        actual: u64,
    },
    EdgeMismatch {
        index: u64,
        expected: Edge,
        found: Edge,
    },
    PartitionOutOfRange {
        index: u64,
        partition: u32,
        k: u32,
    },
    CapacityExceeded {
        partition: u32,
        size: u64,
        capacity: u64,
    },
    ReplicationFactorMismatch {
        in_memory: f64,
        recomputed: f64,
    },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::EdgeCountMismatch { expected, actual } => {
                write!(
                    f,
                    "edge count mismatch: stream has {expected}, file has {actual}"
                )
            }
            Violation::EdgeMismatch {
                index,
                expected,
                found,
            } => write!(
                f,
                "edge {index}: stream has ({}, {}), file has ({}, {})",
                expected.first, expected.second, found.first, found.second
            ),
            Violation::PartitionOutOfRange {
                index,
                partition,
                k,
            } => write!(
                f,
                "edge {index}: partition {partition} out of range for k = {k}"
            ),
            Violation::CapacityExceeded {
                partition,
                size,
                capacity,
            } => write!(
                f,
                "partition {partition} holds {size} edges, capacity is {capacity}"
            ),
            Violation::ReplicationFactorMismatch {
                in_memory,
                recomputed,
            } => write!(
                f,
                "replication factor mismatch: in-memory {in_memory}, recomputed {recomputed}"
            ),
        }
    }
}

/// Checker outcome: a report recomputed purely from the triple file, plus
/// any violations found. An empty violation list means the file is valid.
pub struct Verification {
    pub report: PartitionReport,
    pub violations: Vec<Violation>,
}

impl Verification {
    pub fn is_clean(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Independently re-checks an assignment file against the original stream:
/// recounts sizes, rebuilds a replication matrix from the triples alone and
/// recomputes the replication factor. When `expected_rf` is given the
/// recomputed value must match it bit-exactly.
pub fn verify_assignment(
    assignment_path: impl AsRef<Path>,
    stream: &mut EdgeStream,
    k: u32,
    alpha: f64,
    expected_rf: Option<f64>,
) -> Result<Verification> {
    if k == 0 {
        return Err(crate::error::Error::invalid_config(
            "k",
            "must be at least 1",
        ));
    }
    let mut timer = PhaseTimer::new();
    let mut violations = Vec::new();

    let mut reader = AssignmentReader::open(assignment_path.as_ref())?;
    if reader.record_count() != stream.edge_count() {
        violations.push(Violation::EdgeCountMismatch {
            expected: stream.edge_count(),
            actual: reader.record_count(),
        });
    }

    // Degrees recounted from the stream: sizes the matrix and fixes |V|.
    let degrees = compute_degrees(stream)?;
    let mut v2p = BitMatrix::new(degrees.vertex_slots(), k as usize);
    let mut sizes = vec![0u64; k as usize];

    let mut index = 0u64;
    stream.try_for_each_edge(|e| {
        let i = index;
        index += 1;
        let Some(record) = reader.next() else {
            return Ok(()); // counted above as a mismatch
        };
        let (found, p) = record?;
        if found != e {
            violations.push(Violation::EdgeMismatch {
                index: i,
                expected: e,
                found,
            });
        }
        if p >= k {
            violations.push(Violation::PartitionOutOfRange {
                index: i,
                partition: p,
                k,
            });
            return Ok(());
        }
        // Replication is derived from the file's endpoints: the checker
        // trusts only the triples.
        if (found.first as usize) < v2p.rows() {
            v2p.set(found.first as usize, p as usize);
        }
        if (found.second as usize) < v2p.rows() {
            v2p.set(found.second as usize, p as usize);
        }
        sizes[p as usize] += 1;
        Ok(())
    })?;

    let capacity = partition_capacity(stream.edge_count(), k, alpha);
    for (p, &size) in sizes.iter().enumerate() {
        if size > capacity {
            violations.push(Violation::CapacityExceeded {
                partition: p as u32,
                size,
                capacity,
            });
        }
    }

    let rf = replication_factor(&v2p, degrees.vertex_universe());
    if let (Some(expected), Some(got)) = (expected_rf, rf) {
        if expected.to_bits() != got.to_bits() {
            violations.push(Violation::ReplicationFactorMismatch {
                in_memory: expected,
                recomputed: got,
            });
        }
    }

    timer.mark("verify");
    let report = PartitionReport::from_run(
        "verify",
        k,
        alpha,
        stream.edge_count(),
        degrees.vertex_universe(),
        capacity,
        &v2p,
        sizes,
        0,
        timer.into_phases(),
    );
    Ok(Verification { report, violations })
}

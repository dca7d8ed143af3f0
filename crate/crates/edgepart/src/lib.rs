//! Out-of-core graph edge partitioning.
//!
//! Splits the edge set of a graph into k balanced partitions while keeping
//! the number of replicated vertices low, using only streaming passes over
//! a binary edge list: memory stays O(|V|·k) bits plus O(|V|) words, never
//! proportional to the edge count.
//!
//! The main algorithm (`2ps-l`) works in two phases. A streaming clustering
//! pass groups vertices into volume-bounded clusters; the partitioning
//! phase then maps clusters onto partitions, pre-assigns every edge whose
//! endpoints co-locate, and scores the remaining edges against just the two
//! partitions hosting their endpoints' clusters, so run-time is independent
//! of k. Classic stateful (`hdrf`, and `2ps-hdrf` for the second phase) and
//! stateless (`dbh`) streaming partitioners are included for comparison.
//!
//! ```no_run
//! use edgepart::{EdgeStream, RunConfig, runner};
//!
//! let mut stream = EdgeStream::open("graph.bin")?;
//! let config = RunConfig { k: 32, ..RunConfig::default() };
//! let (assignment, output) = runner::run_in_memory(&mut stream, &config)?;
//! println!("{}", output.report.to_key_value());
//! assert_eq!(assignment.len() as u64, stream.edge_count());
//! # Ok::<(), edgepart::Error>(())
//! ```
//!
//! Runnable walkthroughs live in `examples/`; the `partition` binary wraps
//! the whole pipeline behind flags.

pub mod baselines;
mod bitmatrix;
pub mod cli;
pub mod clustering;
mod config;
pub mod edge_stream;
mod error;
mod hashing;
pub mod metrics;
pub mod partitioning;
pub mod runner;
pub mod sink;
pub mod synthgen;

pub use bitmatrix::BitMatrix;
pub use config::{Algorithm, RunConfig};
pub use edge_stream::{
    compute_degrees, import_ascii, write_assignment, write_edges, AssignmentReader, DegreeTable,
    Edge, EdgeStream, VertexId,
};
pub use error::{Error, Result};
pub use hashing::vertex_hash;
pub use metrics::{replication_factor, verify_assignment, PartitionReport, Violation};
pub use partitioning::{PartitionAssignment, PartitionId, RunOutput};
pub use sink::{AssignmentSink, FileSink, NullSink, VecSink};

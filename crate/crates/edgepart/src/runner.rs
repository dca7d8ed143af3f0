//! Algorithm dispatch over a shared pipeline interface.

use crate::baselines::{run_2ps_hdrf, run_dbh, run_hdrf};
use crate::config::{Algorithm, RunConfig};
use crate::edge_stream::EdgeStream;
use crate::error::Result;
use crate::partitioning::{run_2psl, PartitionAssignment, RunOutput};
use crate::sink::{AssignmentSink, VecSink};

/// Runs the algorithm selected in `config`, streaming decisions to `sink`.
pub fn run(
    stream: &mut EdgeStream,
    config: &RunConfig,
    sink: &mut impl AssignmentSink,
) -> Result<RunOutput> {
    match config.algorithm {
        Algorithm::TwoPsL => run_2psl(stream, config, sink),
        Algorithm::TwoPsHdrf => run_2ps_hdrf(stream, config, sink),
        Algorithm::Hdrf => run_hdrf(stream, config, sink),
        Algorithm::Dbh => run_dbh(stream, config, sink),
    }
}

/// Convenience wrapper collecting the whole assignment in memory.
pub fn run_in_memory(
    stream: &mut EdgeStream,
    config: &RunConfig,
) -> Result<(PartitionAssignment, RunOutput)> {
    let mut sink = VecSink::new(stream.edge_count());
    let output = run(stream, config, &mut sink)?;
    let assignment = sink.into_assignment(config.k, config.alpha)?;
    Ok((assignment, output))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::edge_stream::Edge;

    #[test]
    fn dispatch_covers_every_algorithm() {
        let pairs: Vec<Edge> = (0..20u32).map(|i| Edge::new(i, (i + 1) % 20)).collect();
        for algorithm in Algorithm::ALL {
            let mut stream = EdgeStream::from_edges(pairs.clone());
            let config = RunConfig {
                k: 4,
                algorithm,
                ..RunConfig::default()
            };
            let (assignment, output) = run_in_memory(&mut stream, &config).unwrap();
            assert_eq!(assignment.len(), 20, "{algorithm}");
            assert_eq!(output.report.algorithm, algorithm.name());
            assert_eq!(output.report.sizes.iter().sum::<u64>(), 20, "{algorithm}");
        }
    }
}

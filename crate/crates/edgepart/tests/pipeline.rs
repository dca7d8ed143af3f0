//! End-to-end runs over real files: every algorithm, both sinks, the
//! independent checker, and byte-level determinism.

use edgepart::synthgen::{generate_planted, PlantedConfig};
use edgepart::{verify_assignment, write_assignment, Algorithm, EdgeStream, FileSink, RunConfig};

fn planted(seed: u64) -> PlantedConfig {
    PlantedConfig {
        clusters: 8,
        vertices_per_cluster: 25,
        p_intra: 0.25,
        p_inter: 0.004,
        seed,
    }
}

#[test]
fn every_algorithm_round_trips_through_files() {
    let dir = tempfile::tempdir().unwrap();
    let graph = dir.path().join("graph.bin");
    generate_planted(&planted(42), &graph).unwrap();

    for algorithm in Algorithm::ALL {
        let config = RunConfig {
            k: 4,
            algorithm,
            ..RunConfig::default()
        };
        let out_path = dir.path().join(format!("{algorithm}.bin"));

        let mut stream = EdgeStream::open(&graph).unwrap();
        let mut sink = FileSink::create(&out_path, stream.edge_count()).unwrap();
        let output = edgepart::runner::run(&mut stream, &config, &mut sink).unwrap();

        let verification = verify_assignment(
            &out_path,
            &mut stream,
            config.k,
            config.alpha,
            output.report.replication_factor,
        )
        .unwrap();
        assert!(
            verification.is_clean(),
            "{algorithm}: {:?}",
            verification.violations
        );
        assert_eq!(
            verification.report.sizes, output.report.sizes,
            "{algorithm}: checker must recount identical sizes"
        );
        let rf = output.report.replication_factor.unwrap();
        assert!(
            (1.0..=config.k as f64).contains(&rf),
            "{algorithm}: rf {rf} outside [1, k]"
        );
    }
}

#[test]
fn file_sink_and_vec_sink_agree() {
    let dir = tempfile::tempdir().unwrap();
    let graph = dir.path().join("graph.bin");
    generate_planted(&planted(7), &graph).unwrap();

    for algorithm in Algorithm::ALL {
        let config = RunConfig {
            k: 5,
            algorithm,
            ..RunConfig::default()
        };

        let mut stream = EdgeStream::open(&graph).unwrap();
        let (assignment, _) = edgepart::runner::run_in_memory(&mut stream, &config).unwrap();
        let via_vec = dir.path().join("via_vec.bin");
        write_assignment(&mut stream, &assignment, &via_vec).unwrap();

        let via_file = dir.path().join("via_file.bin");
        let mut sink = FileSink::create(&via_file, stream.edge_count()).unwrap();
        edgepart::runner::run(&mut stream, &config, &mut sink).unwrap();

        assert_eq!(
            std::fs::read(&via_vec).unwrap(),
            std::fs::read(&via_file).unwrap(),
            "{algorithm}: both sinks must produce identical bytes"
        );
    }
}

#[test]
fn identical_runs_produce_identical_output_bytes() {
    let dir = tempfile::tempdir().unwrap();
    let graph = dir.path().join("graph.bin");
    generate_planted(&planted(3), &graph).unwrap();

    for algorithm in [Algorithm::TwoPsL, Algorithm::TwoPsHdrf] {
        let config = RunConfig {
            k: 8,
            seed: 99,
            algorithm,
            ..RunConfig::default()
        };
        let mut outputs = Vec::new();
        for run in 0..2 {
            let out_path = dir.path().join(format!("{algorithm}-{run}.bin"));
            let mut stream = EdgeStream::open(&graph).unwrap();
            let mut sink = FileSink::create(&out_path, stream.edge_count()).unwrap();
            edgepart::runner::run(&mut stream, &config, &mut sink).unwrap();
            outputs.push(std::fs::read(&out_path).unwrap());
        }
        assert_eq!(outputs[0], outputs[1], "{algorithm}");
    }
}

#[test]
fn spill_merge_handles_a_million_edges() {
    let dir = tempfile::tempdir().unwrap();
    let graph = dir.path().join("big.bin");
    let stream = generate_planted(
        &PlantedConfig {
            clusters: 200,
            vertices_per_cluster: 100,
            p_intra: 0.7,
            p_inter: 0.00151,
            seed: 5,
        },
        &graph,
    )
    .unwrap();
    assert!(stream.edge_count() > 900_000);

    let config = RunConfig {
        k: 32,
        ..RunConfig::default()
    };
    let out_path = dir.path().join("big-assignment.bin");
    let mut stream = EdgeStream::open(&graph).unwrap();
    let mut sink = FileSink::create(&out_path, stream.edge_count()).unwrap();
    let output = edgepart::runner::run(&mut stream, &config, &mut sink).unwrap();

    assert_eq!(
        std::fs::metadata(&out_path).unwrap().len(),
        stream.edge_count() * 12
    );
    let verification = verify_assignment(
        &out_path,
        &mut stream,
        config.k,
        config.alpha,
        output.report.replication_factor,
    )
    .unwrap();
    assert!(verification.is_clean(), "{:?}", verification.violations);
}

#[test]
fn multi_pass_clustering_still_verifies() {
    let dir = tempfile::tempdir().unwrap();
    let graph = dir.path().join("graph.bin");
    generate_planted(&planted(11), &graph).unwrap();

    for passes in [1, 2, 4] {
        let config = RunConfig {
            k: 4,
            passes,
            ..RunConfig::default()
        };
        let out_path = dir.path().join(format!("p{passes}.bin"));
        let mut stream = EdgeStream::open(&graph).unwrap();
        let mut sink = FileSink::create(&out_path, stream.edge_count()).unwrap();
        let output = edgepart::runner::run(&mut stream, &config, &mut sink).unwrap();
        let verification = verify_assignment(
            &out_path,
            &mut stream,
            config.k,
            config.alpha,
            output.report.replication_factor,
        )
        .unwrap();
        assert!(verification.is_clean(), "passes = {passes}");
    }
}

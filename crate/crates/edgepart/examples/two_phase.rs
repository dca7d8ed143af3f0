//! Run the two-phase linear-time partitioner end to end and print the
//! report. Generates a demo graph when no input is given.
//!
//! Usage: cargo run --release --example two_phase -- [input.bin] [output.bin] [k]

use edgepart::synthgen::{generate_planted, PlantedConfig};
use edgepart::{verify_assignment, EdgeStream, FileSink, RunConfig};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let args: Vec<String> = std::env::args().skip(1).collect();
    let input = args
        .first()
        .cloned()
        .unwrap_or_else(|| "planted.bin".into());
    let output = args
        .get(1)
        .cloned()
        .unwrap_or_else(|| "assignment.bin".into());
    let k: u32 = args.get(2).map_or(Ok(32), |s| s.parse())?;

    if !std::path::Path::new(&input).exists() {
        println!("{input} not found, generating a demo graph");
        generate_planted(
            &PlantedConfig {
                clusters: 64,
                vertices_per_cluster: 32,
                p_intra: 0.3,
                p_inter: 0.003,
                seed: 1,
            },
            &input,
        )?;
    }

    let mut stream = EdgeStream::open(&input)?;
    let config = RunConfig {
        k,
        ..RunConfig::default()
    };
    let mut sink = FileSink::create(&output, stream.edge_count())?;
    let run = edgepart::runner::run(&mut stream, &config, &mut sink)?;
    print!("{}", run.report.to_key_value());

    let verification = verify_assignment(
        &output,
        &mut stream,
        config.k,
        config.alpha,
        run.report.replication_factor,
    )?;
    if verification.is_clean() {
        println!("verified = ok");
    } else {
        for v in &verification.violations {
            eprintln!("violation: {v}");
        }
        std::process::exit(1);
    }
    Ok(())
}

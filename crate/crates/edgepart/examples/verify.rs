//! Independently re-check an assignment file against its source graph:
//! recount sizes, rebuild the replication matrix from the triples and
//! recompute the replication factor.
//!
//! Usage: cargo run --release --example verify -- assignment.bin graph.bin [k] [alpha]

use edgepart::{verify_assignment, EdgeStream};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let args: Vec<String> = std::env::args().skip(1).collect();
    let (Some(assignment), Some(graph)) = (args.first(), args.get(1)) else {
        eprintln!("usage: verify <assignment.bin> <graph.bin> [k] [alpha]");
        std::process::exit(2);
    };
    let k: u32 = args.get(2).map_or(Ok(32), |s| s.parse())?;
    let alpha: f64 = args.get(3).map_or(Ok(1.05), |s| s.parse())?;

    let mut stream = EdgeStream::open(graph)?;
    let verification = verify_assignment(assignment, &mut stream, k, alpha, None)?;
    print!("{}", verification.report.to_key_value());
    if verification.is_clean() {
        println!("verified = ok");
    } else {
        println!("verified = FAILED");
        for v in &verification.violations {
            eprintln!("violation: {v}");
        }
        std::process::exit(1);
    }
    Ok(())
}

//! Convert an ascii "u v" edge list (one edge per line, `#`/`%` comments
//! allowed) into the packed binary format the partitioners read.
//!
//! Usage: cargo run --release --example convert_ascii -- input.txt output.bin

use edgepart::import_ascii;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let args: Vec<String> = std::env::args().skip(1).collect();
    let (Some(input), Some(output)) = (args.first(), args.get(1)) else {
        eprintln!("usage: convert_ascii <input.txt> <output.bin>");
        std::process::exit(2);
    };
    let edges = import_ascii(input, output)?;
    println!("converted {edges} edges to {output}");
    Ok(())
}

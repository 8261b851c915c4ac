//! Scalar networks of all-ones widths never exceed dimension four.
//!
//! Run with `cargo run --example ones_chain`.

use fundim::experiments::{classify_1d_type, ones_chain_dim, ones_chain_witness};
use fundim::Result;

fn main() -> Result<()> {
    let witness = ones_chain_witness(4)?;
    println!("witness of depth 3 has shape {:?}", classify_1d_type(&witness)?);
    for len in 2..=6 {
        let report = ones_chain_dim(len, 50, 0)?;
        println!("{len} widths: max {} witness {} ({:?})", report.summary["max"], report.summary["witness_dim"], report.verdict);
    }
    Ok(())
}

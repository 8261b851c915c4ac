//! Depth-one networks whose hidden hyperplanes bound a polytope attain the bound.
//!
//! Run with `cargo run --release --example depth1`.

use fundim::experiments::depth1_witness;
use fundim::Result;

fn main() -> Result<()> {
    for (n1, n2) in [(2, 3), (2, 4), (3, 4)] {
        let (_, report) = depth1_witness(n1, n2, 0)?;
        println!("({n1},{n2},1): {} ({:?})", report.summary, report.verdict);
    }
    Ok(())
}

//! Random search for parameters attaining the upper bound, and a bound sweep.
//!
//! Run with `cargo run --release --example tightness`.

use fundim::experiments::{tightness_search, upper_bound_sweep};
use fundim::{Architecture, Result};

fn main() -> Result<()> {
    for widths in [vec![3, 2, 1], vec![4, 3, 1]] {
        let arch = Architecture::new(widths)?;
        let report = tightness_search(&arch, 100, 0)?;
        println!("{arch}: {} ({:?})", report.summary, report.verdict);
    }
    let arch = Architecture::new(vec![2, 3, 2, 1])?;
    let sweep = upper_bound_sweep(&arch, 50, 0)?;
    println!("{arch}: {} ({:?})", sweep.summary, sweep.verdict);
    Ok(())
}

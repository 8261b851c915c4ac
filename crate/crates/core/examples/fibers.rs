//! Fibers of the realization map: branches for |x| and a non-transitive fiber.
//!
//! Run with `cargo run --example fibers`.

use fundim::symmetry::{fiber_membership_absvalue, nontransitivity_demo};
use fundim::{Network, Result};

fn main() -> Result<()> {
    // |x| = max(0, x) + max(0, -x), written with either neuron first.
    let a = Network::<fundim::Rational>::from_ints(&[1, 2, 1], &[1, 0, -1, 0, 1, 1, 0])?;
    let b = Network::<fundim::Rational>::from_ints(&[1, 2, 1], &[-1, 0, 1, 0, 1, 1, 0])?;
    let c = Network::<fundim::Rational>::from_ints(&[1, 2, 1], &[1, 0, -1, 0, 1, 1, 1])?;
    for (name, n) in [("a", &a), ("b", &b), ("c", &c)] {
        println!("{name}: {:?}", fiber_membership_absvalue(n)?);
    }

    let report = nontransitivity_demo(200, 0)?;
    println!("both parameters realize zero: {} {}", report.s1_realizes_zero, report.s2_realizes_zero);
    for (r, out) in &report.s1_escapes {
        println!("  perturbation of size {r:e}: output {out:e}");
    }
    println!("second parameter stays at zero over {} samples: {}", report.s2_samples, report.s2_stays_zero);
    println!("fiber is not a single symmetry orbit: {}", report.holds());
    Ok(())
}

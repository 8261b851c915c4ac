//! Functional dimension of a small (1,2,1) network via its canonical complex.
//!
//! Run with `cargo run --example worked_example`.

use fundim::funcdim::{functional_dim, upper_bound, Strategy};
use fundim::pwl_complex::{complex_1d, decisive_set_1d, is_transversal_1d};
use fundim::{Network, Result};

fn main() -> Result<()> {
    // Hidden neurons max(0, x - 1) and max(0, 2 - x), summed by the output.
    let net = Network::<fundim::Rational>::from_ints(&[1, 2, 1], &[1, -1, -1, 2, 1, 1, 0])?;
    let complex = complex_1d(&net)?;
    println!("breakpoints: {:?}", complex.breakpoints.iter().map(ToString::to_string).collect::<Vec<_>>());
    for cell in &complex.intervals {
        println!("  label {}  slope {}  intercept {}", cell.label, cell.slope[0], cell.intercept[0]);
    }
    println!("transversal: {}", is_transversal_1d(&net)?);

    let decisive = decisive_set_1d(&net, &complex, false, Default::default())?;
    println!("decisive points: {:?}", decisive.batch.points().iter().map(|p| p[0].to_string()).collect::<Vec<_>>());

    let report = functional_dim(&net, Strategy::Decisive1d, false)?;
    println!(
        "functional dimension {} of {} parameters (bound {}), certification {:?}",
        report.value,
        net.param_dim(),
        upper_bound(net.arch()),
        report.certification
    );
    Ok(())
}

//! A parameter with no parametrically smooth input, detected and explained.
//!
//! Run with `cargo run --example nonordinary`.

use fundim::experiments::nonordinary_demo;
use fundim::funcdim::{functional_dim, Strategy};
use fundim::{Network, Result};

fn main() -> Result<()> {
    let net = Network::<fundim::Rational>::from_ints(&[1, 1], &[0, 0])?;
    match functional_dim(&net, Strategy::Decisive1d, false) {
        Ok(r) => println!("unexpected dimension {}", r.value),
        Err(e) => println!("dimension query fails: {e}"),
    }
    let report = nonordinary_demo()?;
    println!("{}", report.to_json_string());
    Ok(())
}

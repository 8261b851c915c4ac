//! How often a random parameter leaves a neuron stably unactivated.
//!
//! Run with `cargo run --release --example unactivated`.

use fundim::experiments::{stably_unactivated_frequency, stably_unactivated_sufficient};
use fundim::{Architecture, Network, Result};

fn main() -> Result<()> {
    // The single layer-2 neuron sees two nonnegative inputs through negative weights.
    let net = Network::<fundim::Rational>::from_ints(&[1, 2, 1, 1], &[1, 0, -1, 0, -1, -1, -1, 1, 0])?;
    println!("layer 2 neuron 0 stably unactivated: {}", stably_unactivated_sufficient(&net, 2, 0)?);

    let arch = Architecture::new(vec![2, 3, 3, 1])?;
    let report = stably_unactivated_frequency(&arch, 20_000, 0)?;
    println!("{}", report.to_json_string());
    Ok(())
}

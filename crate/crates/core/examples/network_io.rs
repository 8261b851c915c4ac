//! Saving and loading networks, and scalar mode checks.
//!
//! Run with `cargo run --example network_io`.

use fundim::network::AnyNetwork;
use fundim::{Network, Result};

fn main() -> Result<()> {
    let net = Network::<fundim::Rational>::from_ints(&[1, 2, 1], &[1, -1, -1, 2, 1, 1, 0])?;
    let text = net.to_json_string();
    println!("{text}");
    let loaded = AnyNetwork::from_json_str(&text)?;
    println!("loaded mode {:?}, identical: {}", loaded.mode(), loaded.clone().into_rational()? == net);
    match loaded.into_float() {
        Ok(_) => println!("unexpected float network"),
        Err(e) => println!("float request rejected: {e}"),
    }
    match AnyNetwork::from_json_str("{\"widths\": [1, 2, 1],") {
        Ok(_) => println!("unexpected parse"),
        Err(e) => println!("malformed input: {e}"),
    }
    Ok(())
}

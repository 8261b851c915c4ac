//! Hidden-neuron permutations and positive rescalings leave the function unchanged.
//!
//! Run with `cargo run --example symmetry`.

use fundim::scalar::Rational;
use fundim::symmetry::{apply_symmetry, default_grid, verify_unmarked_invariance, Generator, SymmetryElement};
use fundim::{Network, Result};

fn main() -> Result<()> {
    let net = Network::<fundim::Rational>::from_ints(&[2, 3, 2, 1], &(1..=20).map(|i| (i % 7) - 3).collect::<Vec<_>>())?;
    let g = SymmetryElement::from(Generator::permute(1, 0, 2)?)
        .then(Generator::rescale(1, 1, Rational::new(5.into(), 2.into()))?.into())
        .then(Generator::rescale(2, 0, Rational::from_integer(3.into()))?.into());
    let moved = apply_symmetry(&g, &net)?;
    println!("original params: {:?}", net.flatten().iter().map(ToString::to_string).collect::<Vec<_>>());
    println!("moved params:    {:?}", moved.flatten().iter().map(ToString::to_string).collect::<Vec<_>>());
    let grid = default_grid(2);
    println!("same function on {} grid points: {}", grid.len(), verify_unmarked_invariance(&net, &g, &grid, 0.0)?);
    println!("inverse restores the parameters: {}", apply_symmetry(&g.inverse(), &moved)? == net);
    Ok(())
}

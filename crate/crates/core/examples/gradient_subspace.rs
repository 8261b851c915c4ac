//! Loss gradients lie in the row space of the evaluation Jacobian.
//!
//! Run with `cargo run --example gradient_subspace`.

use fundim::ntk::{loss_gradient_in_row_space, SquaredError};
use fundim::scalar::Rational;
use fundim::{Network, Result};

fn main() -> Result<()> {
    let net = Network::<fundim::Rational>::from_ints(&[1, 2, 1], &[1, -1, -1, 2, 1, 1, 0])?;
    let q = |n: i64| Rational::from_integer(n.into());
    let data = vec![(vec![q(0)], vec![q(1)]), (vec![q(3)], vec![q(0)]), (vec![q(5)], vec![q(7)])];
    let report = loss_gradient_in_row_space(&net, &data, &SquaredError, 1e-9)?;
    println!("loss {}", report.loss);
    println!("gradient {:?}", report.gradient.iter().map(ToString::to_string).collect::<Vec<_>>());
    println!("chain-rule product matches backprop: {}", report.matches);
    println!("gradient in Jacobian row space: {}", report.in_row_space);
    Ok(())
}

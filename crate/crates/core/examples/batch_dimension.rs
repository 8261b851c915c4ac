//! Batch and stochastic dimensions, exact and in floating point.
//!
//! Run with `cargo run --example batch_dimension`.

use fundim::funcdim::{batch_dim, eval_jacobian, off_neuron_bound, stochastic_dim};
use fundim::{Batch, Network, Result};

fn main() -> Result<()> {
    let net = Network::<fundim::Rational>::from_ints(&[1, 2, 1], &[1, -1, -1, 2, 1, 1, 0])?;
    for x in [0, 3, 5] {
        let z = [fundim::scalar::Rational::from_integer(x.into())];
        println!(
            "x = {x}: stochastic dimension {} (off-neuron bound {})",
            stochastic_dim(&net, &z)?.value,
            off_neuron_bound(&net, &z)?
        );
    }

    let mut batch = Batch::from_ints(&[0]);
    for x in [3, 5, -4] {
        batch = batch.union(&Batch::from_ints(&[x]))?;
        println!("batch of {} points: dimension {}", batch.len(), batch_dim(&net, &batch)?.value);
    }
    let j = eval_jacobian(&net, &batch)?;
    println!("evaluation Jacobian is {}x{}", j.matrix.rows(), j.matrix.cols());

    let float_net = net.to_float();
    let float_batch = Batch::new(1, vec![vec![0.1], vec![3.3], vec![5.7], vec![-4.2]])?;
    let report = batch_dim(&float_net, &float_batch)?;
    println!("float backend: dimension {} at tolerance {:?}", report.value, report.tol);
    Ok(())
}

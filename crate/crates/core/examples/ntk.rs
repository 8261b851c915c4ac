//! Neural tangent kernel blocks and the rank equality with the Jacobian.
//!
//! Run with `cargo run --example ntk`.

use fundim::ntk::{batch_ntk, ntk, verify_rank_equality};
use fundim::{Batch, Network, Result};

fn main() -> Result<()> {
    let net = Network::<fundim::Rational>::from_ints(&[1, 2, 1], &[1, -1, -1, 2, 1, 1, 0])?;
    let one = |x: i64| vec![fundim::scalar::Rational::from_integer(x.into())];
    let k = ntk(&net, &one(0), &one(3))?;
    println!("K(0, 3) = {}", k.matrix.get(0, 0));

    let batch = Batch::from_ints(&[0, 3, 5]);
    let kernel = batch_ntk(&net, &batch)?;
    for r in 0..kernel.matrix.rows() {
        let row: Vec<String> = kernel.matrix.row(r).iter().map(ToString::to_string).collect();
        println!("  [{}]", row.join(", "));
    }
    let eq = verify_rank_equality(&net, &batch, 1e-9)?;
    println!("rank of Jacobian {} and of kernel {} (equal: {})", eq.jac_rank, eq.ntk_rank, eq.equal);
    Ok(())
}

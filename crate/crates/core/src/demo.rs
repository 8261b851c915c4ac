//! Self-checking tour of the worked examples, used by the `demo` subcommand.

use serde::Serialize;

use crate::error::Result;
use crate::experiments::{self, depth1_witness, nonordinary_demo, Verdict};
use crate::funcdim::{batch_dim, functional_dim, stochastic_dim, Batch, Strategy};
use crate::network::Network;
use crate::ntk::{batch_ntk, loss_gradient_in_row_space, SquaredError};
use crate::pwl_complex::complex_1d;
use crate::scalar::{q, Rational};
use crate::symmetry::{self, apply_symmetry, fiber_membership_absvalue, FiberBranch, Generator};

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DemoCheck {
    pub name: String,
    pub expected: String,
    pub observed: String,
    pub pass: bool,
}

fn check(name: &str, expected: impl std::fmt::Debug, observed: impl std::fmt::Debug) -> DemoCheck {
    let (expected, observed) = (format!("{expected:?}"), format!("{observed:?}"));
    DemoCheck { name: name.into(), pass: expected == observed, expected, observed }
}

fn net(widths: &[usize], p: &[i64]) -> Result<Network<Rational>> {
    Network::from_ints(widths, p)
}

fn strs(v: &[Rational]) -> Vec<String> {
    v.iter().map(ToString::to_string).collect()
}

/// Runs every check; deterministic.
pub fn demo_suite() -> Result<Vec<DemoCheck>> {
    let mut out = Vec::new();

    let s0 = net(&[1, 2, 1], &[2, -5, -1, 4, 1, 1, 1])?;
    let c = complex_1d(&s0)?;
    out.push(check("(1,2,1) breakpoints", ["5/2", "4"], strs(&c.breakpoints)));
    let slopes: Vec<Rational> = c.intervals.iter().map(|i| i.slope[0].clone()).collect();
    out.push(check("(1,2,1) piece slopes", ["-1", "1", "2"], strs(&slopes)));
    out.push(check("(1,2,1) functional dimension", 5, functional_dim(&s0, Strategy::Decisive1d, false)?.value));

    let n12 = net(&[1, 2], &[1, 0, 1, -1])?;
    let stoch = [q(-1, 1), q(1, 2), q(2, 1)]
        .iter()
        .map(|z| stochastic_dim(&n12, std::slice::from_ref(z)).map(|r| r.value))
        .collect::<Result<Vec<_>>>()?;
    out.push(check("(1,2) stochastic dimensions at -1, 1/2, 2", [0, 1, 2], stoch));

    let n11 = net(&[1, 1], &[1, 0])?;
    let batches = [[-1, -2], [1, -1], [1, 2]]
        .iter()
        .map(|z| batch_dim(&n11, &Batch::from_ints(z)).map(|r| r.value))
        .collect::<Result<Vec<_>>>()?;
    out.push(check("(1,1) batch dimensions", [0, 1, 2], batches));

    let s2 = net(&[1, 2, 1], &[1, 1, -1, -2, 1, -1, 0])?;
    let s1 = net(&[1, 2, 1], &[1, 0, -1, 0, 1, -1, 1])?;
    let grid = symmetry::grid(1, &q(-10, 1), &q(10, 1), 161);
    let shifted_relu = |n: &Network<Rational>| -> Result<bool> {
        for z in grid.points() {
            if n.output(z)?[0] != (z[0].clone() + q(1, 1)).max(q(0, 1)) {
                return Ok(false);
            }
        }
        Ok(true)
    };
    out.push(check("fiber of max(0, x+1): both realize it", (true, true), (shifted_relu(&s2)?, shifted_relu(&s1)?)));
    out.push(check(
        "fiber of max(0, x+1): dimensions",
        (2, 4),
        (functional_dim(&s2, Strategy::Decisive1d, false)?.value, functional_dim(&s1, Strategy::Decisive1d, false)?.value),
    ));

    let chain = (2..=6)
        .map(|len| experiments::ones_chain_witness(len).and_then(|w| functional_dim(&w, Strategy::Decisive1d, false)))
        .map(|r| r.map(|r| r.value))
        .collect::<Result<Vec<_>>>()?;
    out.push(check("all-ones chains of 2..6 widths, witness dims", [2, 3, 4, 4, 4], chain));

    let (_, d1) = depth1_witness(2, 3, 0)?;
    out.push(check("(2,3) depth-one witness", 9, d1.summary["dim"].as_u64().unwrap_or_default()));

    let b1 = net(&[1, 2, 1], &[1, 0, -1, 0, 1, 1, 0])?;
    let b2 = net(&[1, 2, 1], &[-1, 0, 1, 0, 1, 1, 0])?;
    out.push(check(
        "fiber of |x|: branch membership",
        (FiberBranch::Branch1, FiberBranch::Branch2, FiberBranch::NotInFiber),
        (fiber_membership_absvalue(&b1)?, fiber_membership_absvalue(&b2)?, fiber_membership_absvalue(&s0)?),
    ));

    out.push(check("(1,1) at (0,0) has no smooth point", Verdict::Confirmed, nonordinary_demo()?.verdict));
    out.push(check("(0,0) and (0,-1) not related by symmetry", true, symmetry::nontransitivity_demo(1000, 0)?.holds()));

    let k = batch_ntk(&n11, &Batch::from_ints(&[1, 2]))?;
    out.push(check("(1,1) batch NTK at {1, 2}", ["2", "3", "3", "5"], strs(k.matrix.data())));
    let g = loss_gradient_in_row_space(&n11, &[(vec![q(1, 1)], vec![q(0, 1)])], &SquaredError, 1e-9)?;
    out.push(check("squared-error gradient", ["2", "2"], strs(&g.gradient)));

    let rescaled = apply_symmetry(&Generator::rescale(1, 0, q(2, 1))?.into(), &s0)?;
    out.push(check("rescale neuron 1 of (1,2,1) by 2", ["4", "-10", "-1", "4", "1/2", "1", "1"], strs(&rescaled.flatten())));

    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn every_check_passes() {
        for c in demo_suite().unwrap() {
            assert!(c.pass, "{c:?}");
        }
    }
}

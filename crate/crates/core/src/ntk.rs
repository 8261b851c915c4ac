//! Neural tangent kernel, batch kernel and the gradient-subspace relation.
//!
//! `NTK(s, x, y) = J E_x(s) · J E_y(s)ᵀ` and the batch kernel is the Gram
//! matrix of `J E_Z(s)`, so its rank is the batch functional dimension.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::funcdim::{eval_jacobian_with, point_jacobian, Batch, DimOptions, EvalJacobian};
use crate::linalg::{self, Matrix};
use crate::network::{Network, Smoothness};
use crate::scalar::{Backend, Scalar};

/// `n_m × n_m` kernel between two inputs.
#[derive(Clone, Debug, PartialEq)]
pub struct NtkMatrix<S> {
    pub matrix: Matrix<S>,
    pub x: Vec<S>,
    pub y: Vec<S>,
}

/// `k n_m × k n_m` kernel; block `(i, j)` is `NTK(s, z_i, z_j)`.
#[derive(Clone, Debug, PartialEq)]
pub struct BatchNtk<S> {
    pub matrix: Matrix<S>,
    pub output_dim: usize,
}

impl<S: Scalar> BatchNtk<S> {
    pub fn block(&self, i: usize, j: usize) -> Matrix<S> {
        let n = self.output_dim;
        let rows = (i * n..(i + 1) * n).map(|r| self.matrix.row(r)[j * n..(j + 1) * n].to_vec()).collect();
        Matrix::from_rows(rows, n).expect("square blocks")
    }
}

fn smooth_jacobian<S: Scalar>(net: &Network<S>, x: &[S]) -> Result<Matrix<S>> {
    let trace = net.forward(x)?;
    if trace.label.has_zero() {
        return Err(Error::NonSmoothPoints(vec![0]));
    }
    Ok(point_jacobian(net, &trace))
}

/// `NTK(s, x, y)`; both inputs must have zero-free labels.
pub fn ntk<S: Scalar>(net: &Network<S>, x: &[S], y: &[S]) -> Result<NtkMatrix<S>> {
    let jx = smooth_jacobian(net, x).map_err(|_| Error::NonSmoothPoints(vec![0]))?;
    let jy = smooth_jacobian(net, y).map_err(|_| Error::NonSmoothPoints(vec![1]))?;
    Ok(NtkMatrix { matrix: jx.matmul(&jy.transpose())?, x: x.to_vec(), y: y.to_vec() })
}

/// `K_Z = J E_Z · J E_Zᵀ`; every point must have a zero-free label.
pub fn batch_ntk<S: Scalar>(net: &Network<S>, batch: &Batch<S>) -> Result<BatchNtk<S>> {
    let j = strict_jacobian(net, batch)?;
    Ok(BatchNtk { matrix: j.matrix.gram(), output_dim: net.arch().output_dim() })
}

fn strict_jacobian<S: Scalar>(net: &Network<S>, batch: &Batch<S>) -> Result<EvalJacobian<S>> {
    let bad: Vec<usize> = batch
        .points()
        .iter()
        .enumerate()
        .filter_map(|(i, z)| match net.smoothness(z) {
            Ok(Smoothness::SmoothNoZeros) => None,
            _ => Some(i),
        })
        .collect();
    if !bad.is_empty() {
        return Err(Error::NonSmoothPoints(bad));
    }
    eval_jacobian_with(net, batch, DimOptions::default().policy)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RankEquality {
    pub jac_rank: usize,
    pub ntk_rank: usize,
    pub equal: bool,
    pub backend: Backend,
}

/// Ranks of `J E_Z` and `K_Z` with the same backend and tolerance.
pub fn verify_rank_equality<S: Scalar>(net: &Network<S>, batch: &Batch<S>, tol: f64) -> Result<RankEquality> {
    let j = strict_jacobian(net, batch)?;
    let k = j.matrix.gram();
    // `σ(K) = σ(J)^2`, so the relative cutoff squares too.
    let ntk_tol = if S::MODE.backend() == Backend::Numeric { tol * tol } else { tol };
    let jac_rank = S::rank(&j.matrix, tol);
    let ntk_rank = S::rank(&k, ntk_tol);
    Ok(RankEquality { jac_rank, ntk_rank, equal: jac_rank == ntk_rank, backend: S::MODE.backend() })
}

/// Differentiable cost of a residual `ρ(s)(x) - y`.
pub trait Cost<S> {
    fn value(&self, residual: &[S]) -> S;
    fn gradient(&self, residual: &[S]) -> Vec<S>;
}

/// `C(r) = Σ r_k²`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct SquaredError;

impl<S: Scalar> Cost<S> for SquaredError {
    fn value(&self, residual: &[S]) -> S {
        residual.iter().fold(S::zero(), |acc, r| acc + r.clone() * r.clone())
    }

    fn gradient(&self, residual: &[S]) -> Vec<S> {
        residual.iter().map(|r| r.clone() + r.clone()).collect()
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct GradientReport<S> {
    /// `∂C/∂s` assembled by backpropagation.
    pub gradient: Vec<S>,
    /// `A · J E_Z(s)` with `A` the concatenated per-point cost gradients.
    pub product: Vec<S>,
    pub max_abs_diff: f64,
    pub matches: bool,
    pub in_row_space: bool,
    pub loss: S,
}

/// Reverse-mode gradient of the total cost, independent of the Jacobian code.
fn backprop<S: Scalar>(net: &Network<S>, x: &[S], dcost: &[S], grad: &mut [S]) -> Result<()> {
    let trace = net.forward(x)?;
    let m = net.depth();
    let mut delta: Vec<S> = dcost
        .iter()
        .zip(trace.label.layer(m))
        .map(|(d, &t)| if t > 0 { d.clone() } else { S::zero() })
        .collect();
    for l in (1..=m).rev() {
        let input = trace.augmented(l - 1);
        let off = net.arch().layer_offset(l);
        let cols = input.len();
        for (a, da) in delta.iter().enumerate() {
            for (b, xb) in input.iter().enumerate() {
                let g = &mut grad[off + a * cols + b];
                *g = g.clone() + da.clone() * xb.clone();
            }
        }
        if l > 1 {
            let w = net.layer(l);
            let below = trace.label.layer(l - 1);
            delta = (0..cols - 1)
                .map(|b| {
                    if below[b] > 0 {
                        delta.iter().enumerate().fold(S::zero(), |acc, (a, da)| acc + da.clone() * w.get(a, b).clone())
                    } else {
                        S::zero()
                    }
                })
                .collect();
        }
    }
    Ok(())
}

/// Checks `∂C/∂s = A · J E_Z(s)` and that the gradient lies in the row
/// space of `J E_Z(s)`, for `C = Σ_i cost(ρ(s)(x_i) - y_i)`.
pub fn loss_gradient_in_row_space<S: Scalar>(
    net: &Network<S>,
    data: &[(Vec<S>, Vec<S>)],
    cost: &impl Cost<S>,
    tol: f64,
) -> Result<GradientReport<S>> {
    let n0 = net.arch().input_dim();
    let nm = net.arch().output_dim();
    if let Some((x, y)) = data.iter().find(|(x, y)| x.len() != n0 || y.len() != nm) {
        return Err(Error::DimensionMismatch(format!(
            "sample of sizes ({}, {}) for architecture {}",
            x.len(),
            y.len(),
            net.arch()
        )));
    }
    let batch = Batch::new(n0, data.iter().map(|(x, _)| x.clone()).collect())?;
    let j = strict_jacobian(net, &batch)?;
    let d = net.param_dim();
    let mut gradient = vec![S::zero(); d];
    let mut a = Vec::with_capacity(data.len() * nm);
    let mut loss = S::zero();
    for (x, y) in data {
        let out = net.output(x)?;
        let residual: Vec<S> = out.iter().zip(y).map(|(o, t)| o.clone() - t.clone()).collect();
        loss = loss + cost.value(&residual);
        let g = cost.gradient(&residual);
        backprop(net, x, &g, &mut gradient)?;
        a.extend(g);
    }
    let product = j.matrix.transpose().mul_vec(&a)?;
    let max_abs_diff = gradient
        .iter()
        .zip(&product)
        .map(|(g, p)| (g.clone() - p.clone()).abs().to_f64())
        .fold(0.0, f64::max);
    let matches = match S::MODE.backend() {
        Backend::Exact => gradient == product,
        Backend::Numeric => gradient.iter().zip(&product).all(|(g, p)| g.approx_eq(p, tol)),
    };
    let in_row_space = linalg::row_space_contains(&j.matrix, &gradient, tol)?;
    Ok(GradientReport { gradient, product, max_abs_diff, matches, in_row_space, loss })
}

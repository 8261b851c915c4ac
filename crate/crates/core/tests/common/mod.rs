//! Reference implementations used as oracles by the integration tests.
//! They work from the flat parameter vector and share no code with the crate.

#![allow(dead_code)]

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

pub type Q = BigRational;

pub fn qq(n: i64, d: i64) -> Q {
    Q::new(BigInt::from(n), BigInt::from(d))
}

/// `n_m + Σ n_i n_{i+1}`.
pub fn oracle_bound(widths: &[usize]) -> usize {
    widths.last().unwrap() + widths.windows(2).map(|w| w[0] * w[1]).sum::<usize>()
}

/// `Σ n_i (n_{i-1} + 1)`.
pub fn oracle_param_dim(widths: &[usize]) -> usize {
    widths.windows(2).map(|w| w[1] * (w[0] + 1)).sum()
}

/// Rank by plain Gaussian elimination over the rationals.
pub fn oracle_rank(mut rows: Vec<Vec<Q>>) -> usize {
    let cols = rows.first().map_or(0, Vec::len);
    let mut rank = 0;
    for c in 0..cols {
        let Some(p) = (rank..rows.len()).find(|&r| !rows[r][c].is_zero()) else { continue };
        rows.swap(rank, p);
        let pivot = rows[rank][c].clone();
        for r in 0..rows.len() {
            if r != rank && !rows[r][c].is_zero() {
                let f = rows[r][c].clone() / pivot.clone();
                for k in c..cols {
                    let v = rows[rank][k].clone() * f.clone();
                    rows[r][k] -= v;
                }
            }
        }
        rank += 1;
    }
    rank
}

/// Forward pass with a final ReLU, from the flat parameters.
pub fn oracle_forward_q(widths: &[usize], params: &[Q], x: &[Q]) -> Vec<Q> {
    let mut h = x.to_vec();
    let mut off = 0;
    for w in widths.windows(2) {
        let (n_in, n_out) = (w[0], w[1]);
        let mut next = Vec::with_capacity(n_out);
        for r in 0..n_out {
            let row = &params[off + r * (n_in + 1)..off + (r + 1) * (n_in + 1)];
            let mut y = row[n_in].clone();
            for (a, b) in row[..n_in].iter().zip(&h) {
                y += a.clone() * b.clone();
            }
            next.push(if y.is_positive() { y } else { Q::zero() });
        }
        off += n_out * (n_in + 1);
        h = next;
    }
    h
}

pub fn oracle_forward_f(widths: &[usize], params: &[f64], x: &[f64]) -> Vec<f64> {
    let mut h = x.to_vec();
    let mut off = 0;
    for w in widths.windows(2) {
        let (n_in, n_out) = (w[0], w[1]);
        h = (0..n_out)
            .map(|r| {
                let row = &params[off + r * (n_in + 1)..off + (r + 1) * (n_in + 1)];
                let y = row[n_in] + row[..n_in].iter().zip(&h).map(|(a, b)| a * b).sum::<f64>();
                y.max(0.0)
            })
            .collect();
        off += n_out * (n_in + 1);
    }
    h
}

/// Smallest `|pre-activation|` over all neurons at `x`.
pub fn min_margin(widths: &[usize], params: &[f64], x: &[f64]) -> f64 {
    let mut h = x.to_vec();
    let mut off = 0;
    let mut m = f64::INFINITY;
    for w in widths.windows(2) {
        let (n_in, n_out) = (w[0], w[1]);
        h = (0..n_out)
            .map(|r| {
                let row = &params[off + r * (n_in + 1)..off + (r + 1) * (n_in + 1)];
                let y = row[n_in] + row[..n_in].iter().zip(&h).map(|(a, b)| a * b).sum::<f64>();
                m = m.min(y.abs());
                y.max(0.0)
            })
            .collect();
        off += n_out * (n_in + 1);
    }
    m
}

pub fn one() -> Q {
    Q::one()
}

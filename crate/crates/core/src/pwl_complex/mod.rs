//! Canonical polyhedral complexes.
//!
//! For a one-dimensional input the complex is built exactly, layer by layer:
//! on every current interval each pre-activation is affine in `x`, so its
//! zero is a single solvable point. Higher input dimensions fall back to a
//! sampled [`RegionAtlas`].

mod decisive;
mod stability;
mod sv;

pub use decisive::{
    decisive_set, decisive_set_1d, decisive_set_atlas, discover_regions, DecisiveSet, DecisiveSource,
    RegionAtlas,
};
pub use stability::{probe_combinatorial_stability, StabilityVerdict};
pub use sv::{
    detect_hyperplane, sv_map, sv_rank, sv_rank_with, AffineEquation, CellSample, SlopesValues, SvCell, SvSource,
};

use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::network::{Network, TernaryLabel};
use crate::scalar::{Scalar, ScalarMode};

/// Float breakpoints closer than this are merged.
pub const DEFAULT_MERGE_TOL: f64 = 1e-9;

/// A top (1-dimensional) cell of the complex with the affine output map on it.
#[derive(Clone, Debug, PartialEq)]
pub struct Interval1D<S> {
    pub lo: Option<S>,
    pub hi: Option<S>,
    pub label: TernaryLabel,
    /// `d ρ / dx` on the cell, one entry per output.
    pub slope: Vec<S>,
    /// Output is `slope · x + intercept` on the cell.
    pub intercept: Vec<S>,
    pub representative: S,
    /// Output at the representative.
    pub value: Vec<S>,
}

impl<S: Scalar> Interval1D<S> {
    pub fn contains_interior(&self, x: &S) -> bool {
        self.lo.as_ref().is_none_or(|lo| x > lo) && self.hi.as_ref().is_none_or(|hi| x < hi)
    }

    pub fn is_bounded(&self) -> bool {
        self.lo.is_some() && self.hi.is_some()
    }

    pub fn eval(&self, x: &S) -> Vec<S> {
        self.slope.iter().zip(&self.intercept).map(|(a, b)| a.clone() * x.clone() + b.clone()).collect()
    }
}

/// A 0-cell.
#[derive(Clone, Debug, PartialEq)]
pub struct Vertex1D<S> {
    pub x: S,
    pub label: TernaryLabel,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Complex1D<S> {
    pub breakpoints: Vec<S>,
    /// Top cells left to right; `intervals.len() == breakpoints.len() + 1`.
    pub intervals: Vec<Interval1D<S>>,
    /// `vertices[i]` sits between `intervals[i]` and `intervals[i + 1]`.
    pub vertices: Vec<Vertex1D<S>>,
    /// Float breakpoints merged because they were within the merge tolerance.
    pub merged: usize,
}

impl<S: Scalar> Complex1D<S> {
    /// Index of the top cell whose interior contains `x`.
    pub fn cell_of(&self, x: &S) -> Option<usize> {
        self.intervals.iter().position(|c| c.contains_interior(x))
    }

    pub fn interval_labels(&self) -> Vec<&TernaryLabel> {
        self.intervals.iter().map(|c| &c.label).collect()
    }

    pub fn to_json(&self) -> Value {
        let vals = |v: &[S]| v.iter().map(Scalar::to_json).collect::<Vec<_>>();
        json!({
            "breakpoints": vals(&self.breakpoints),
            "cells": self.intervals.iter().map(|c| json!({
                "lo": c.lo.as_ref().map(Scalar::to_json),
                "hi": c.hi.as_ref().map(Scalar::to_json),
                "label": c.label,
                "slope": vals(&c.slope),
                "intercept": vals(&c.intercept),
                "representative": c.representative.to_json(),
                "value": vals(&c.value),
            })).collect::<Vec<_>>(),
            "vertices": self.vertices.iter().map(|v| json!({
                "x": v.x.to_json(),
                "label": v.label,
            })).collect::<Vec<_>>(),
        })
    }
}

/// A cell of an intermediate stage with the affine map of the previous
/// layer's post-activations on it.
#[derive(Clone, Debug)]
pub(crate) struct AffineCell<S> {
    pub lo: Option<S>,
    pub hi: Option<S>,
    pub slope: Vec<S>,
    pub intercept: Vec<S>,
}

/// `stages[ℓ-1]` is the complex built from layers `< ℓ`, carrying the
/// inputs of layer `ℓ`; the last stage carries the network output.
#[derive(Clone, Debug)]
pub(crate) struct Stage<S> {
    pub breakpoints: Vec<S>,
    pub cells: Vec<AffineCell<S>>,
}

pub(crate) fn representative<S: Scalar>(lo: Option<&S>, hi: Option<&S>) -> S {
    match (lo, hi) {
        (Some(a), Some(b)) => (a.clone() + b.clone()) / S::from_ratio(2, 1),
        (None, Some(b)) => b.clone() - S::one(),
        (Some(a), None) => a.clone() + S::one(),
        (None, None) => S::zero(),
    }
}

/// Pre-activation of every neuron of `layer` on a cell, as `(slope, intercept)`.
pub(crate) fn pre_affine<S: Scalar>(net: &Network<S>, layer: usize, cell: &AffineCell<S>) -> Vec<(S, S)> {
    let a = net.layer(layer);
    let n_in = a.cols() - 1;
    a.iter_rows()
        .map(|row| {
            let mut slope = S::zero();
            let mut icpt = row[n_in].clone();
            for k in 0..n_in {
                if row[k].is_zero() {
                    continue;
                }
                slope = slope + row[k].clone() * cell.slope[k].clone();
                icpt = icpt + row[k].clone() * cell.intercept[k].clone();
            }
            (slope, icpt)
        })
        .collect()
}

fn is_zero_tol<S: Scalar>(v: &S, tol: f64) -> bool {
    v.approx_eq(&S::zero(), tol)
}

fn strictly_inside<S: Scalar>(x: &S, lo: Option<&S>, hi: Option<&S>, tol: f64) -> bool {
    let margin = S::from_f64(if S::MODE == ScalarMode::Float { tol } else { 0.0 });
    lo.is_none_or(|l| *x > l.clone() + margin.clone()) && hi.is_none_or(|h| *x < h.clone() - margin.clone())
}

/// Sorted union with near-duplicates merged; returns the number of merges
/// between distinct values.
fn merge_sorted<S: Scalar>(mut pts: Vec<S>, tol: f64) -> (Vec<S>, usize) {
    pts.sort_by(|a, b| a.partial_cmp(b).expect("finite breakpoints"));
    let mut out: Vec<S> = Vec::with_capacity(pts.len());
    let mut merged = 0;
    for p in pts {
        match out.last() {
            Some(last) if *last == p => {}
            Some(last) if S::MODE == ScalarMode::Float && p.approx_eq(last, tol) => merged += 1,
            _ => out.push(p),
        }
    }
    (out, merged)
}

pub(crate) fn build_stages<S: Scalar>(net: &Network<S>, merge_tol: f64) -> Result<(Vec<Stage<S>>, usize)> {
    if net.arch().input_dim() != 1 {
        return Err(Error::InvalidArgument(format!(
            "exact complexes need a one-dimensional input, architecture is {}",
            net.arch()
        )));
    }
    let zt = net.zero_tol();
    let mut stages = vec![Stage {
        breakpoints: Vec::new(),
        cells: vec![AffineCell { lo: None, hi: None, slope: vec![S::one()], intercept: vec![S::zero()] }],
    }];
    let mut merged_total = 0;
    for layer in 1..=net.depth() {
        let prev = stages.last().expect("stage 0 exists");
        let pres: Vec<Vec<(S, S)>> = prev.cells.iter().map(|c| pre_affine(net, layer, c)).collect();
        let mut pts = prev.breakpoints.clone();
        for (cell, pre) in prev.cells.iter().zip(&pres) {
            for (a, b) in pre {
                if is_zero_tol(a, zt) {
                    continue;
                }
                let x = -b.clone() / a.clone();
                if strictly_inside(&x, cell.lo.as_ref(), cell.hi.as_ref(), merge_tol) {
                    pts.push(x);
                } else if S::MODE == ScalarMode::Float
                    && strictly_inside(&x, cell.lo.as_ref(), cell.hi.as_ref(), 0.0)
                {
                    merged_total += 1;
                }
            }
        }
        let (breakpoints, merged) = merge_sorted(pts, merge_tol);
        merged_total += merged;
        let mut cells = Vec::with_capacity(breakpoints.len() + 1);
        for i in 0..=breakpoints.len() {
            let lo = (i > 0).then(|| breakpoints[i - 1].clone());
            let hi = breakpoints.get(i).cloned();
            let rep = representative(lo.as_ref(), hi.as_ref());
            let parent = prev
                .cells
                .iter()
                .position(|c| {
                    c.lo.as_ref().is_none_or(|l| rep > *l) && c.hi.as_ref().is_none_or(|h| rep < *h)
                })
                .expect("refinement lies inside a parent cell");
            let (slope, intercept) = pres[parent]
                .iter()
                .map(|(a, b)| {
                    let y = a.clone() * rep.clone() + b.clone();
                    if y.sign(zt) > 0 {
                        (a.clone(), b.clone())
                    } else {
                        (S::zero(), S::zero())
                    }
                })
                .unzip();
            cells.push(AffineCell { lo, hi, slope, intercept });
        }
        stages.push(Stage { breakpoints, cells });
    }
    if merged_total > 0 {
        log::warn!("merged {merged_total} near-coincident breakpoints (tolerance {merge_tol})");
    }
    Ok((stages, merged_total))
}

/// Canonical polyhedral complex of a network with one-dimensional input.
pub fn complex_1d<S: Scalar>(net: &Network<S>) -> Result<Complex1D<S>> {
    complex_1d_with(net, DEFAULT_MERGE_TOL)
}

pub fn complex_1d_with<S: Scalar>(net: &Network<S>, merge_tol: f64) -> Result<Complex1D<S>> {
    let (stages, merged) = build_stages(net, merge_tol)?;
    let last = stages.last().expect("at least one layer");
    let mut intervals = Vec::with_capacity(last.cells.len());
    for c in &last.cells {
        let rep = representative(c.lo.as_ref(), c.hi.as_ref());
        let trace = net.forward(std::slice::from_ref(&rep))?;
        intervals.push(Interval1D {
            lo: c.lo.clone(),
            hi: c.hi.clone(),
            label: trace.label.clone(),
            slope: c.slope.clone(),
            intercept: c.intercept.clone(),
            value: trace.output().to_vec(),
            representative: rep,
        });
    }
    let vertices = last
        .breakpoints
        .iter()
        .map(|x| Ok(Vertex1D { x: x.clone(), label: net.ternary_label(std::slice::from_ref(x))? }))
        .collect::<Result<Vec<_>>>()?;
    Ok(Complex1D { breakpoints: last.breakpoints.clone(), intervals, vertices, merged })
}

/// Transversality for a one-dimensional input: every zero of every
/// pre-activation node map lies only on cells (of the complex of the layers
/// below it) where that map is nonconstant.
pub fn is_transversal_1d<S: Scalar>(net: &Network<S>) -> Result<bool> {
    let (stages, _) = build_stages(net, DEFAULT_MERGE_TOL)?;
    let zt = net.zero_tol();
    for layer in 1..=net.depth() {
        let stage = &stages[layer - 1];
        let pres: Vec<Vec<(S, S)>> = stage.cells.iter().map(|c| pre_affine(net, layer, c)).collect();
        for j in 0..net.arch().width(layer) {
            // Identically zero on a cell.
            if pres.iter().any(|p| is_zero_tol(&p[j].0, zt) && is_zero_tol(&p[j].1, zt)) {
                return Ok(false);
            }
            // A zero at a vertex must be approached with nonzero slope from both sides.
            for (v, x) in stage.breakpoints.iter().enumerate() {
                let (a, b) = &pres[v][j];
                let y = a.clone() * x.clone() + b.clone();
                if is_zero_tol(&y, zt) && (is_zero_tol(a, zt) || is_zero_tol(&pres[v + 1][j].0, zt)) {
                    return Ok(false);
                }
            }
        }
    }
    Ok(true)
}

/// One-dimensional genericity: within each layer and each cell of the
/// complex below it, distinct neurons have distinct walls.
pub fn is_generic_1d<S: Scalar>(net: &Network<S>) -> Result<bool> {
    let (stages, _) = build_stages(net, DEFAULT_MERGE_TOL)?;
    let zt = net.zero_tol();
    for layer in 1..=net.depth() {
        for cell in &stages[layer - 1].cells {
            let zeros: Vec<S> = pre_affine(net, layer, cell)
                .into_iter()
                .filter(|(a, _)| !is_zero_tol(a, zt))
                .map(|(a, b)| -b / a)
                .filter(|x| strictly_inside(x, cell.lo.as_ref(), cell.hi.as_ref(), 0.0))
                .collect();
            let n = zeros.len();
            if merge_sorted(zeros, DEFAULT_MERGE_TOL).0.len() < n {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{q, Rational};

    fn net(widths: &[usize], p: &[i64]) -> Network<Rational> {
        Network::from_ints(widths, p).unwrap()
    }

    #[test]
    fn s0_complex() {
        let c = complex_1d(&net(&[1, 2, 1], &[2, -5, -1, 4, 1, 1, 1])).unwrap();
        assert_eq!(c.breakpoints, vec![q(5, 2), q(4, 1)]);
        let slopes: Vec<Rational> = c.intervals.iter().map(|i| i.slope[0].clone()).collect();
        assert_eq!(slopes, vec![q(-1, 1), q(1, 1), q(2, 1)]);
        assert_eq!(c.intervals[0].label.to_string(), "((-1,1),(1))");
        assert_eq!(c.intervals[1].label.to_string(), "((1,1),(1))");
        assert_eq!(c.intervals[2].label.to_string(), "((1,-1),(1))");
        assert_eq!(c.vertices[0].label.to_string(), "((0,1),(1))");
    }

    #[test]
    fn second_layer_wall() {
        let c = complex_1d(&net(&[1, 1, 1], &[1, 0, 1, -1])).unwrap();
        assert_eq!(c.breakpoints, vec![q(0, 1), q(1, 1)]);
        assert_eq!(c.intervals.len(), 3);
    }

    #[test]
    fn constant_network_has_one_cell() {
        let c = complex_1d(&net(&[1, 2, 1], &[0, 1, 0, -1, 0, 0, 3])).unwrap();
        assert!(c.breakpoints.is_empty());
        assert_eq!(c.intervals.len(), 1);
        assert_eq!(c.intervals[0].value, vec![q(3, 1)]);
    }

    #[test]
    fn idempotent() {
        let n = net(&[1, 3, 2, 1], &[1, 2, -1, 1, 2, -3, 1, -1, 2, 0, 2, 1, 1, -1, 1, 1, 1]);
        assert_eq!(complex_1d(&n).unwrap(), complex_1d(&n).unwrap());
    }

    #[test]
    fn rejects_multi_dimensional_input() {
        assert!(complex_1d(&net(&[2, 1], &[1, 1, 0])).is_err());
    }

    #[test]
    fn float_merges_near_coincident_walls() {
        let n = Network::<f64>::from_flat(
            crate::network::Architecture::new(vec![1, 2, 1]).unwrap(),
            vec![1.0, 0.0, 1.0, -1e-12, 1.0, 1.0, 0.0],
        )
        .unwrap();
        let c = complex_1d(&n).unwrap();
        assert_eq!(c.breakpoints.len(), 1);
        assert!(c.merged >= 1);
    }

    #[test]
    fn transversality() {
        assert!(is_transversal_1d(&net(&[1, 2, 1], &[2, -5, -1, 4, 1, 1, 1])).unwrap());
        assert!(!is_transversal_1d(&net(&[1, 1, 1], &[1, 0, 0, 0])).unwrap());
        // No zeros anywhere: vacuously transversal.
        assert!(is_transversal_1d(&net(&[1, 1], &[0, 1])).unwrap());
    }

    #[test]
    fn genericity() {
        assert!(is_generic_1d(&net(&[1, 2, 1], &[2, -5, -1, 4, 1, 1, 1])).unwrap());
        assert!(!is_generic_1d(&net(&[1, 2, 1], &[1, 0, -1, 0, 1, -1, 1])).unwrap());
    }
}

//! Decisive sets and sampled activation regions.

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::funcdim::Batch;
use crate::network::{smoothness_of_label, Network, SmoothnessPolicy, TernaryLabel};
use crate::sampling;
use crate::scalar::Scalar;

use super::Complex1D;

/// Activation regions found by sampling a box, keyed by zero-free label.
#[derive(Clone, Debug, PartialEq)]
pub struct RegionAtlas<S> {
    pub input_dim: usize,
    /// Up to `n_0 + 1` affinely independent representatives per region.
    pub regions: BTreeMap<TernaryLabel, Vec<Vec<S>>>,
    pub samples: usize,
}

impl<S: Scalar> RegionAtlas<S> {
    /// Labels with fewer than `n_0 + 1` independent representatives.
    pub fn insufficient(&self) -> Vec<&TernaryLabel> {
        self.regions.iter().filter(|(_, r)| r.len() <= self.input_dim).map(|(l, _)| l).collect()
    }

    /// The atlas restricted to regions with a full simplex of representatives.
    pub fn complete(&self) -> Self {
        Self {
            input_dim: self.input_dim,
            regions: self
                .regions
                .iter()
                .filter(|(_, r)| r.len() > self.input_dim)
                .map(|(l, r)| (l.clone(), r.clone()))
                .collect(),
            samples: self.samples,
        }
    }
}

fn affine_rank<S: Scalar>(points: &[Vec<S>], tol: f64) -> usize {
    let rows: Vec<Vec<S>> = points
        .iter()
        .map(|p| {
            let mut r = p.clone();
            r.push(S::one());
            r
        })
        .collect();
    let cols = rows.first().map_or(0, Vec::len);
    crate::linalg::Matrix::from_rows(rows, cols).expect("equal widths").rank(tol)
}

/// Samples `n_samples` points uniformly in the box `bounds` (one `(lo, hi)`
/// per input coordinate) and groups them by zero-free ternary label.
///
/// Regions of small measure inside the box can be missed.
pub fn discover_regions<S: Scalar>(
    net: &Network<S>,
    bounds: &[(S, S)],
    n_samples: usize,
    seed: u64,
) -> Result<RegionAtlas<S>> {
    let n0 = net.arch().input_dim();
    if bounds.len() != n0 {
        return Err(Error::DimensionMismatch(format!("{} box bounds for input dimension {n0}", bounds.len())));
    }
    if let Some((lo, hi)) = bounds.iter().find(|(lo, hi)| lo >= hi) {
        return Err(Error::InvalidArgument(format!("empty box side [{lo:?}, {hi:?}]")));
    }
    if n_samples < n0 + 1 {
        return Err(Error::InvalidArgument(format!("need at least {} samples, got {n_samples}", n0 + 1)));
    }
    const RES: i64 = 1 << 12;
    let mut rng = sampling::rng_for(seed, 0);
    let mut regions: BTreeMap<TernaryLabel, Vec<Vec<S>>> = BTreeMap::new();
    for _ in 0..n_samples {
        let x: Vec<S> = bounds
            .iter()
            .map(|(lo, hi)| {
                let t: S = sampling::grid_value(&mut rng, 0, 1, RES);
                lo.clone() + (hi.clone() - lo.clone()) * t
            })
            .collect();
        let label = net.ternary_label(&x)?;
        if label.has_zero() {
            continue;
        }
        let reps = regions.entry(label).or_default();
        if reps.len() > n0 || reps.contains(&x) {
            continue;
        }
        reps.push(x);
        if affine_rank(reps, 1e-9) < reps.len() {
            reps.pop();
        }
    }
    if regions.is_empty() {
        return Err(Error::NonOrdinarySuspected(format!("no zero-free label among {n_samples} samples")));
    }
    Ok(RegionAtlas { input_dim: n0, regions, samples: n_samples })
}

/// A decisive set: `n_0 + 1` points per top cell.
#[derive(Clone, Debug, PartialEq)]
pub struct DecisiveSet<S> {
    pub batch: Batch<S>,
    /// Top cell index for each point of `batch`.
    pub cell_of_point: Vec<usize>,
    /// Top cells left out because their interior is not smooth under the policy.
    pub skipped: Vec<usize>,
}

pub enum DecisiveSource<'a, S> {
    Complex(&'a Complex1D<S>),
    Atlas(&'a RegionAtlas<S>),
}

pub fn decisive_set<S: Scalar>(net: &Network<S>, source: DecisiveSource<'_, S>) -> Result<DecisiveSet<S>> {
    match source {
        DecisiveSource::Complex(c) => decisive_set_1d(net, c, false, SmoothnessPolicy::Strict),
        DecisiveSource::Atlas(a) => decisive_set_atlas(a),
    }
}

/// Two interior points per top cell: at thirds of bounded cells, at
/// breakpoint ± 1, 2 on unbounded ones (1 and 2 when there is no breakpoint).
/// With `positive` the cells are clipped to `x > 0`.
pub fn decisive_set_1d<S: Scalar>(
    net: &Network<S>,
    complex: &Complex1D<S>,
    positive: bool,
    policy: SmoothnessPolicy,
) -> Result<DecisiveSet<S>> {
    let mut batch = Batch::empty(1);
    let mut cell_of_point = Vec::new();
    let mut skipped = Vec::new();
    let zero = S::zero();
    for (i, cell) in complex.intervals.iter().enumerate() {
        let mut lo = cell.lo.clone();
        if positive {
            if cell.hi.as_ref().is_some_and(|h| *h <= zero) {
                continue;
            }
            if lo.as_ref().is_none_or(|l| *l < zero) {
                lo = Some(zero.clone());
            }
        }
        if !policy.admits(smoothness_of_label(&cell.label)) {
            skipped.push(i);
            continue;
        }
        let pts = match (&lo, &cell.hi) {
            (Some(a), Some(b)) => {
                let w = b.clone() - a.clone();
                [a.clone() + w.clone() / S::from_ratio(3, 1), a.clone() + w * S::from_ratio(2, 3)]
            }
            (None, Some(b)) => [b.clone() - S::one(), b.clone() - S::from_ratio(2, 1)],
            (Some(a), None) => [a.clone() + S::one(), a.clone() + S::from_ratio(2, 1)],
            (None, None) => [S::one(), S::from_ratio(2, 1)],
        };
        for p in pts {
            let label = net.ternary_label(std::slice::from_ref(&p))?;
            if label != cell.label {
                return Err(Error::InsufficientRepresentatives(format!(
                    "decisive point {p:?} of cell {i} has label {label}, cell label is {}",
                    cell.label
                )));
            }
            batch.push(vec![p])?;
            cell_of_point.push(i);
        }
    }
    Ok(DecisiveSet { batch, cell_of_point, skipped })
}

/// `n_0 + 1` representatives per region; errors on regions with fewer.
pub fn decisive_set_atlas<S: Scalar>(atlas: &RegionAtlas<S>) -> Result<DecisiveSet<S>> {
    let mut batch = Batch::empty(atlas.input_dim);
    let mut cell_of_point = Vec::new();
    for (i, (label, reps)) in atlas.regions.iter().enumerate() {
        if reps.len() <= atlas.input_dim {
            return Err(Error::InsufficientRepresentatives(format!(
                "region {label} has {} of {} affinely independent points",
                reps.len(),
                atlas.input_dim + 1
            )));
        }
        for p in reps.iter().take(atlas.input_dim + 1) {
            batch.push(p.clone())?;
            cell_of_point.push(i);
        }
    }
    Ok(DecisiveSet { batch, cell_of_point, skipped: Vec::new() })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pwl_complex::complex_1d;
    use crate::scalar::{q, Rational};

    fn s0() -> Network<Rational> {
        Network::from_ints(&[1, 2, 1], &[2, -5, -1, 4, 1, 1, 1]).unwrap()
    }

    #[test]
    fn s0_decisive_has_six_points() {
        let n = s0();
        let c = complex_1d(&n).unwrap();
        let d = decisive_set(&n, DecisiveSource::Complex(&c)).unwrap();
        assert_eq!(d.batch.len(), 6);
        assert_eq!(d.cell_of_point, vec![0, 0, 1, 1, 2, 2]);
        assert_eq!(d.batch.points()[2][0], q(3, 1));
    }

    #[test]
    fn single_cell_gets_two_points() {
        let n = Network::<Rational>::from_ints(&[1, 1], &[0, 1]).unwrap();
        let c = complex_1d(&n).unwrap();
        let d = decisive_set(&n, DecisiveSource::Complex(&c)).unwrap();
        assert_eq!(d.batch.len(), 2);
    }

    #[test]
    fn s0_regions_match_complex() {
        let n = s0();
        let atlas = discover_regions(&n, &[(q(-10, 1), q(10, 1))], 400, 0).unwrap();
        let c = complex_1d(&n).unwrap();
        let mut labels: Vec<_> = c.interval_labels().into_iter().cloned().collect();
        labels.sort();
        assert_eq!(atlas.regions.keys().cloned().collect::<Vec<_>>(), labels);
        assert!(atlas.insufficient().is_empty());
    }

    #[test]
    fn dead_network_has_no_regions() {
        let n = Network::<Rational>::from_ints(&[2, 1], &[0, 0, 0]).unwrap();
        assert!(matches!(
            discover_regions(&n, &[(q(-1, 1), q(1, 1)), (q(-1, 1), q(1, 1))], 50, 0),
            Err(Error::NonOrdinarySuspected(_))
        ));
    }

    #[test]
    fn atlas_insufficient_region_is_an_error() {
        let mut regions = BTreeMap::new();
        regions.insert(TernaryLabel::new(vec![vec![1]]), vec![vec![q(1, 1), q(0, 1)]]);
        let atlas = RegionAtlas { input_dim: 2, regions, samples: 1 };
        assert!(matches!(decisive_set_atlas(&atlas), Err(Error::InsufficientRepresentatives(_))));
        assert!(decisive_set_atlas(&atlas.complete()).unwrap().batch.is_empty());
    }
}

//! Hidden symmetries: neuron permutations and positive rescalings.
//!
//! Both act on a hidden layer `i < m` and leave the realized function
//! unchanged. Layers are 1-based and neurons 0-based.

use num_traits::Zero;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::funcdim::Batch;
use crate::network::Network;
use crate::sampling;
use crate::scalar::{q, Rational, Scalar};

pub const GRID_POINTS: usize = 41;
pub const GRID_RADIUS: i64 = 10;

#[derive(Clone, Debug, PartialEq)]
pub enum Generator<S> {
    /// Swap neurons `j` and `k` of hidden layer `layer`.
    Permute { layer: usize, j: usize, k: usize },
    /// Scale the incoming row of `neuron` by `c > 0` and its outgoing column by `1/c`.
    Rescale { layer: usize, neuron: usize, c: S },
}

impl<S: Scalar> Generator<S> {
    pub fn permute(layer: usize, j: usize, k: usize) -> Result<Self> {
        if j == k {
            return Err(Error::InvalidSymmetry(format!("permutation of neuron {j} with itself")));
        }
        Ok(Generator::Permute { layer, j, k })
    }

    pub fn rescale(layer: usize, neuron: usize, c: S) -> Result<Self> {
        if !(c > S::zero()) {
            return Err(Error::InvalidSymmetry(format!("rescale factor {:.6} is not positive", c.to_f64())));
        }
        Ok(Generator::Rescale { layer, neuron, c })
    }

    pub fn inverse(&self) -> Self {
        match self {
            Generator::Permute { .. } => self.clone(),
            Generator::Rescale { layer, neuron, c } => {
                Generator::Rescale { layer: *layer, neuron: *neuron, c: S::one() / c.clone() }
            }
        }
    }

    fn check(&self, net: &Network<S>) -> Result<()> {
        let (layer, neurons, c) = match self {
            Generator::Permute { layer, j, k } => (*layer, vec![*j, *k], None),
            Generator::Rescale { layer, neuron, c } => (*layer, vec![*neuron], Some(c)),
        };
        if layer == 0 || layer >= net.depth() {
            return Err(Error::InvalidSymmetry(format!(
                "layer {layer} is not a hidden layer of {}",
                net.arch()
            )));
        }
        if let Some(&n) = neurons.iter().find(|&&n| n >= net.arch().width(layer)) {
            return Err(Error::InvalidSymmetry(format!("neuron {n} out of range in layer {layer}")));
        }
        if neurons.len() == 2 && neurons[0] == neurons[1] {
            return Err(Error::InvalidSymmetry("permutation indices coincide".into()));
        }
        if let Some(c) = c {
            if !(*c > S::zero()) {
                return Err(Error::InvalidSymmetry("rescale factor is not positive".into()));
            }
        }
        Ok(())
    }

    fn apply(&self, net: &mut Network<S>) -> Result<()> {
        self.check(net)?;
        match self {
            Generator::Permute { layer, j, k } => {
                let a = net.layer_mut(*layer);
                for col in 0..a.cols() {
                    let tmp = a.get(*j, col).clone();
                    let other = a.get(*k, col).clone();
                    a.set(*j, col, other);
                    a.set(*k, col, tmp);
                }
                let next = net.layer_mut(layer + 1);
                for row in 0..next.rows() {
                    next.row_mut(row).swap(*j, *k);
                }
            }
            Generator::Rescale { layer, neuron, c } => {
                for v in net.layer_mut(*layer).row_mut(*neuron) {
                    *v = v.clone() * c.clone();
                }
                let next = net.layer_mut(layer + 1);
                for row in 0..next.rows() {
                    let v = next.get(row, *neuron).clone() / c.clone();
                    next.set(row, *neuron, v);
                }
            }
        }
        Ok(())
    }
}

/// A word in the generators, applied left to right.
#[derive(Clone, Debug, PartialEq)]
pub struct SymmetryElement<S>(pub Vec<Generator<S>>);

impl<S: Scalar> SymmetryElement<S> {
    pub fn identity() -> Self {
        Self(Vec::new())
    }

    /// `self` followed by `other`.
    pub fn then(mut self, other: Self) -> Self {
        self.0.extend(other.0);
        self
    }

    pub fn inverse(&self) -> Self {
        Self(self.0.iter().rev().map(Generator::inverse).collect())
    }
}

impl<S: Scalar> From<Generator<S>> for SymmetryElement<S> {
    fn from(g: Generator<S>) -> Self {
        Self(vec![g])
    }
}

pub fn apply_symmetry<S: Scalar>(g: &SymmetryElement<S>, net: &Network<S>) -> Result<Network<S>> {
    let mut out = net.clone();
    for gen in &g.0 {
        gen.apply(&mut out)?;
    }
    Ok(out)
}

/// Regular grid with `per_axis` points per coordinate on `[lo, hi]^n0`.
pub fn grid<S: Scalar>(n0: usize, lo: &S, hi: &S, per_axis: usize) -> Batch<S> {
    let axis: Vec<S> = if per_axis <= 1 {
        vec![lo.clone()]
    } else {
        let step = (hi.clone() - lo.clone()) / S::from_ratio((per_axis - 1) as i64, 1);
        (0..per_axis).map(|i| lo.clone() + step.clone() * S::from_ratio(i as i64, 1)).collect()
    };
    let mut points = vec![Vec::new()];
    for _ in 0..n0 {
        points = points
            .into_iter()
            .flat_map(|p: Vec<S>| {
                axis.iter().map(move |a| {
                    let mut q = p.clone();
                    q.push(a.clone());
                    q
                })
            })
            .collect();
    }
    Batch::new(n0, points).expect("grid points have dimension n0")
}

/// Default grid: 41 points per axis over `[-10, 10]^n0`.
pub fn default_grid<S: Scalar>(n0: usize) -> Batch<S> {
    grid(n0, &S::from_ratio(-GRID_RADIUS, 1), &S::from_ratio(GRID_RADIUS, 1), GRID_POINTS)
}

/// Whether `ρ(g·s) = ρ(s)` on every sample point, exactly for rationals and
/// within `tol` for floats.
pub fn verify_unmarked_invariance<S: Scalar>(
    net: &Network<S>,
    g: &SymmetryElement<S>,
    sample: &Batch<S>,
    tol: f64,
) -> Result<bool> {
    let moved = apply_symmetry(g, net)?;
    for z in sample.points() {
        let a = net.output(z)?;
        let b = moved.output(z)?;
        if !a.iter().zip(&b).all(|(x, y)| x.approx_eq(y, tol)) {
            return Ok(false);
        }
    }
    Ok(true)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum FiberBranch {
    Branch1,
    Branch2,
    NotInFiber,
}

/// Which component of the fiber of `x ↦ |x|` in `(1,2,1)` contains `s`.
///
/// With `s = (a, b, c, d, e, f, g)` both components need `b = d = g = 0`,
/// `e, f > 0`; the first has `ea = 1, fc = -1`, the second `ea = -1, fc = 1`.
/// Members are also checked against `|x|` on the default grid.
pub fn fiber_membership_absvalue<S: Scalar>(net: &Network<S>) -> Result<FiberBranch> {
    if net.arch().widths() != [1, 2, 1] {
        return Err(Error::InvalidArchitecture(format!("expected (1,2,1), got {}", net.arch())));
    }
    let p = net.flatten();
    let (a, b, c, d, e, f, g) = (&p[0], &p[1], &p[2], &p[3], &p[4], &p[5], &p[6]);
    let zero = S::zero();
    let one = S::one();
    let neg_one = zero.clone() - one.clone();
    if !(b.is_zero() && d.is_zero() && g.is_zero() && *e > zero && *f > zero) {
        return Ok(FiberBranch::NotInFiber);
    }
    let ea = e.clone() * a.clone();
    let fc = f.clone() * c.clone();
    let branch = if ea == one && fc == neg_one {
        FiberBranch::Branch1
    } else if ea == neg_one && fc == one {
        FiberBranch::Branch2
    } else {
        return Ok(FiberBranch::NotInFiber);
    };
    for z in default_grid::<S>(1).points() {
        if !net.output(z)?[0].approx_eq(&z[0].abs(), 1e-9) {
            return Ok(FiberBranch::NotInFiber);
        }
    }
    Ok(branch)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct NontransitivityReport {
    pub s1_realizes_zero: bool,
    pub s2_realizes_zero: bool,
    /// `(r, ρ(s1 + (0, r/2))(0))` for each tested radius.
    pub s1_escapes: Vec<(f64, f64)>,
    pub s1_escapes_at_every_radius: bool,
    pub s2_samples: usize,
    pub s2_stays_zero: bool,
}

impl NontransitivityReport {
    pub fn holds(&self) -> bool {
        self.s1_realizes_zero && self.s2_realizes_zero && self.s1_escapes_at_every_radius && self.s2_stays_zero
    }
}

/// In `(1,1)`, `s1 = (0, 0)` and `s2 = (0, -1)` both realize `0`, but every
/// neighbourhood of `s1` contains parameters realizing a nonzero function,
/// while perturbations of `s2` of size at most `1/4` stay zero on `|x| <= 1/2`.
/// No symmetry can map one to the other.
pub fn nontransitivity_demo(samples: usize, seed: u64) -> Result<NontransitivityReport> {
    let s1 = Network::<Rational>::from_ints(&[1, 1], &[0, 0])?;
    let s2 = Network::<Rational>::from_ints(&[1, 1], &[0, -1])?;
    let wide = default_grid::<Rational>(1);
    let is_zero_on = |n: &Network<Rational>, b: &Batch<Rational>| -> Result<bool> {
        for z in b.points() {
            if !n.output(z)?[0].is_zero() {
                return Ok(false);
            }
        }
        Ok(true)
    };
    let s1_realizes_zero = is_zero_on(&s1, &wide)?;
    let s2_realizes_zero = is_zero_on(&s2, &wide)?;
    let mut s1_escapes = Vec::new();
    for k in 0..6 {
        let r = q(1, 10i64.pow(k));
        let moved = s1.with_params(vec![Rational::zero(), r.clone() / q(2, 1)])?;
        let v = moved.output(&[Rational::zero()])?[0].clone();
        s1_escapes.push((r.to_f64(), v.to_f64()));
    }
    let s1_escapes_at_every_radius = s1_escapes.iter().all(|&(_, v)| v > 0.0);
    let near = grid(1, &q(-1, 2), &q(1, 2), 41);
    let quarter = q(1, 4);
    let mut s2_stays_zero = true;
    for t in 0..samples {
        let mut rng = sampling::rng_for(seed, t as u64);
        let p = sampling::perturb(&s2, &quarter, &mut rng);
        if !is_zero_on(&p, &near)? {
            s2_stays_zero = false;
            break;
        }
    }
    Ok(NontransitivityReport {
        s1_realizes_zero,
        s2_realizes_zero,
        s1_escapes,
        s1_escapes_at_every_radius,
        s2_samples: samples,
        s2_stays_zero,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::int;

    fn s0() -> Network<Rational> {
        Network::from_ints(&[1, 2, 1], &[2, -5, -1, 4, 1, 1, 1]).unwrap()
    }

    #[test]
    fn rescale_first_neuron() {
        let g = Generator::rescale(1, 0, int(2)).unwrap().into();
        let p = apply_symmetry(&g, &s0()).unwrap().flatten();
        let expect = vec![int(4), int(-10), int(-1), int(4), q(1, 2), int(1), int(1)];
        assert_eq!(p, expect);
    }

    #[test]
    fn permute_hidden_neurons() {
        let g = Generator::permute(1, 0, 1).unwrap().into();
        let once = apply_symmetry(&g, &s0()).unwrap();
        let expect: Vec<Rational> = [-1, 4, 2, -5, 1, 1, 1].iter().map(|&v| int(v)).collect();
        assert_eq!(once.flatten(), expect);
        assert_eq!(apply_symmetry(&g, &once).unwrap(), s0());
    }

    #[test]
    fn invalid_generators() {
        assert!(Generator::<Rational>::rescale(1, 0, int(-1)).is_err());
        assert!(Generator::<Rational>::rescale(1, 0, int(0)).is_err());
        let out = SymmetryElement::from(Generator::<Rational>::rescale(2, 0, int(2)).unwrap());
        assert!(matches!(apply_symmetry(&out, &s0()), Err(Error::InvalidSymmetry(_))));
        let range = SymmetryElement::from(Generator::<Rational>::permute(1, 0, 2).unwrap());
        assert!(apply_symmetry(&range, &s0()).is_err());
    }

    #[test]
    fn composed_invariance_and_inverse() {
        let g = SymmetryElement::from(Generator::permute(1, 0, 1).unwrap())
            .then(Generator::rescale(1, 1, q(3, 7)).unwrap().into());
        let sample = grid(1, &int(-10), &int(10), 81);
        assert!(verify_unmarked_invariance(&s0(), &g, &sample, 0.0).unwrap());
        let back = apply_symmetry(&g.inverse(), &apply_symmetry(&g, &s0()).unwrap()).unwrap();
        assert_eq!(back, s0());
    }

    #[test]
    fn grid_shape() {
        let g = grid::<Rational>(2, &int(-1), &int(1), 3);
        assert_eq!(g.len(), 9);
        assert_eq!(default_grid::<Rational>(1).len(), 41);
        assert_eq!(default_grid::<Rational>(1).points()[1], vec![q(-19, 2)]);
    }

    #[test]
    fn absolute_value_fiber() {
        let b1 = Network::<Rational>::from_ints(&[1, 2, 1], &[1, 0, -1, 0, 1, 1, 0]).unwrap();
        let b2 = Network::<Rational>::from_ints(&[1, 2, 1], &[-1, 0, 1, 0, 1, 1, 0]).unwrap();
        assert_eq!(fiber_membership_absvalue(&b1).unwrap(), FiberBranch::Branch1);
        assert_eq!(fiber_membership_absvalue(&b2).unwrap(), FiberBranch::Branch2);
        assert_eq!(fiber_membership_absvalue(&s0()).unwrap(), FiberBranch::NotInFiber);
        let scaled = Network::<Rational>::from_flat(
            b1.arch().clone(),
            vec![int(2), int(0), q(-1, 3), int(0), q(1, 2), int(3), int(0)],
        )
        .unwrap();
        assert_eq!(fiber_membership_absvalue(&scaled).unwrap(), FiberBranch::Branch1);
    }

    #[test]
    fn nontransitive() {
        let r = nontransitivity_demo(1000, 0).unwrap();
        assert!(r.holds(), "{r:?}");
        assert_eq!(r.s1_escapes[1], (0.1, 0.05));
    }
}

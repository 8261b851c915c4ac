//! Evaluation-map Jacobians and functional dimension.
//!
//! For a batch `Z = (z_1, …, z_k)` the evaluation map sends a parameter `s`
//! to the concatenated outputs `(ρ(s)(z_1), …, ρ(s)(z_k))`. Its Jacobian
//! `J E_Z(s)` has `k · n_m` rows and one column per parameter; row block `i`
//! is the Jacobian at `z_i`. Stochastic, batch and (full) functional
//! dimension are all ranks of such matrices.

use serde::ser::SerializeSeq;
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::linalg::{EchelonBasis, FloatMatrix, Matrix, DEFAULT_RANK_TOL};
use crate::network::{param_dim, Architecture, ForwardTrace, Network, SmoothnessPolicy};
use crate::pwl_complex;
use crate::sampling;
use crate::scalar::{Backend, Scalar, ScalarMode};

/// Ordered list of input points; row order of `J E_Z`.
#[derive(Clone, Debug, PartialEq)]
pub struct Batch<S> {
    dim: usize,
    points: Vec<Vec<S>>,
}

impl<S: Scalar> Batch<S> {
    pub fn new(dim: usize, points: Vec<Vec<S>>) -> Result<Self> {
        if let Some((i, p)) = points.iter().enumerate().find(|(_, p)| p.len() != dim) {
            return Err(Error::DimensionMismatch(format!("point {i} has dimension {}, expected {dim}", p.len())));
        }
        Ok(Self { dim, points })
    }

    pub fn empty(dim: usize) -> Self {
        Self { dim, points: Vec::new() }
    }

    /// One-dimensional batch from scalars.
    pub fn from_scalars(xs: impl IntoIterator<Item = S>) -> Self {
        Self { dim: 1, points: xs.into_iter().map(|x| vec![x]).collect() }
    }

    /// One-dimensional batch from integers.
    pub fn from_ints(xs: &[i64]) -> Self {
        Self::from_scalars(xs.iter().map(|&x| S::from_ratio(x, 1)))
    }

    pub fn singleton(z: Vec<S>) -> Self {
        Self { dim: z.len(), points: vec![z] }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn points(&self) -> &[Vec<S>] {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn push(&mut self, z: Vec<S>) -> Result<()> {
        if z.len() != self.dim {
            return Err(Error::DimensionMismatch(format!("point of dimension {} added to a {}-d batch", z.len(), self.dim)));
        }
        self.points.push(z);
        Ok(())
    }

    /// `self` followed by the points of `other`.
    pub fn union(&self, other: &Self) -> Result<Self> {
        let mut out = self.clone();
        for z in &other.points {
            out.push(z.clone())?;
        }
        Ok(out)
    }
}

impl<S: Scalar> Serialize for Batch<S> {
    fn serialize<Ser: Serializer>(&self, serializer: Ser) -> std::result::Result<Ser::Ok, Ser::Error> {
        let mut seq = serializer.serialize_seq(Some(self.points.len()))?;
        for p in &self.points {
            let row: Vec<serde_json::Value> = p.iter().map(Scalar::to_json).collect();
            seq.serialize_element(&row)?;
        }
        seq.end()
    }
}

/// `J E_Z(s)` together with the batch it was evaluated on.
#[derive(Clone, Debug, PartialEq)]
pub struct EvalJacobian<S> {
    pub matrix: Matrix<S>,
    pub batch: Batch<S>,
    pub mode: ScalarMode,
}

impl<S: Scalar> EvalJacobian<S> {
    /// Row block `i`, i.e. `J E_{z_i}(s)`.
    pub fn block(&self, i: usize) -> Matrix<S> {
        let n = self.matrix.rows() / self.batch.len().max(1);
        let rows = (i * n..(i + 1) * n).map(|r| self.matrix.row(r).to_vec()).collect();
        Matrix::from_rows(rows, self.matrix.cols()).expect("block rows have equal width")
    }
}

/// Knobs shared by the rank-based routines.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DimOptions {
    pub policy: SmoothnessPolicy,
    /// Relative singular-value cutoff (numeric backend only).
    pub rank_tol: f64,
}

impl Default for DimOptions {
    fn default() -> Self {
        Self { policy: SmoothnessPolicy::Strict, rank_tol: DEFAULT_RANK_TOL }
    }
}

/// How a functional dimension was bounded.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Certification {
    /// Rank of a specific batch.
    Batch,
    /// Only known to be `<=` the true functional dimension.
    LowerBound,
    /// Decisive set on a transversal parameter.
    DecisiveTransversal,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(bound = "S: Scalar")]
pub struct RankReport<S> {
    pub value: usize,
    pub backend: Backend,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub tol: Option<f64>,
    pub witness_batch: Batch<S>,
    /// Set by random-saturation searches: whether the rank stopped growing
    /// (as opposed to running out of points).
    #[serde(skip_serializing_if = "Option::is_none")]
    pub saturated: Option<bool>,
    pub certification: Certification,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub notes: Vec<String>,
}

impl<S: Scalar> RankReport<S> {
    fn batch(value: usize, batch: Batch<S>, opts: &DimOptions) -> Self {
        Self {
            value,
            backend: S::MODE.backend(),
            tol: (S::MODE == ScalarMode::Float).then_some(opts.rank_tol),
            witness_batch: batch,
            saturated: None,
            certification: Certification::Batch,
            notes: Vec::new(),
        }
    }
}

/// `d ρ(s)(x) / d s` for one traced input: an `n_m × D` matrix.
///
/// With `G^m = diag(θ^m > 0)` and `G^ℓ = G^{ℓ+1} W^{ℓ+1} diag(θ^ℓ > 0)`, the
/// derivative of output `r` with respect to entry `(a, b)` of `A^ℓ` is
/// `G^ℓ[r, a] · x̂^{ℓ-1}[b]`. `G^ℓ` is the product of masked layers above `ℓ`.
pub fn point_jacobian<S: Scalar>(net: &Network<S>, trace: &ForwardTrace<S>) -> Matrix<S> {
    let arch = net.arch();
    let m = arch.depth();
    let nm = arch.output_dim();
    let mut out = Matrix::zeros(nm, arch.param_dim());
    let on = |l: usize, a: usize| trace.label.is_on(l, a);

    // g = G^ℓ, rows are outputs, columns neurons of layer ℓ.
    let mut g: Matrix<S> = Matrix::zeros(nm, nm);
    for r in 0..nm {
        if on(m, r) {
            g.set(r, r, S::one());
        }
    }
    for l in (1..=m).rev() {
        let xhat = trace.augmented(l - 1);
        for r in 0..nm {
            for a in 0..arch.width(l) {
                let coeff = g.get(r, a);
                if coeff.is_zero() {
                    continue;
                }
                for (b, xb) in xhat.iter().enumerate() {
                    if !xb.is_zero() {
                        out.set(r, arch.param_index(l, a, b), coeff.clone() * xb.clone());
                    }
                }
            }
        }
        if l > 1 {
            let w = net.layer(l);
            let n_prev = arch.width(l - 1);
            let mut next = Matrix::zeros(nm, n_prev);
            for r in 0..nm {
                for c in 0..n_prev {
                    if !on(l - 1, c) {
                        continue;
                    }
                    let v = (0..arch.width(l))
                        .filter(|&a| !g.get(r, a).is_zero() && !w.get(a, c).is_zero())
                        .fold(S::zero(), |acc, a| acc + g.get(r, a).clone() * w.get(a, c).clone());
                    next.set(r, c, v);
                }
            }
            g = next;
        }
    }
    out
}

fn admitted_traces<S: Scalar>(
    net: &Network<S>,
    batch: &Batch<S>,
    policy: SmoothnessPolicy,
) -> Result<Vec<ForwardTrace<S>>> {
    if batch.dim() != net.arch().input_dim() {
        return Err(Error::DimensionMismatch(format!(
            "batch of dimension {} for input dimension {}",
            batch.dim(),
            net.arch().input_dim()
        )));
    }
    let traces = batch.points().iter().map(|z| net.forward(z)).collect::<Result<Vec<_>>>()?;
    let bad: Vec<usize> = traces
        .iter()
        .enumerate()
        .filter(|(_, t)| !policy.admits(crate::network::smoothness_of_label(&t.label)))
        .map(|(i, _)| i)
        .collect();
    if !bad.is_empty() {
        return Err(Error::NonSmoothPoints(bad));
    }
    Ok(traces)
}

/// Closed-form `J E_Z(s)` under the strict smoothness policy.
pub fn eval_jacobian<S: Scalar>(net: &Network<S>, batch: &Batch<S>) -> Result<EvalJacobian<S>> {
    eval_jacobian_with(net, batch, SmoothnessPolicy::Strict)
}

pub fn eval_jacobian_with<S: Scalar>(
    net: &Network<S>,
    batch: &Batch<S>,
    policy: SmoothnessPolicy,
) -> Result<EvalJacobian<S>> {
    let traces = admitted_traces(net, batch, policy)?;
    let mut matrix = Matrix::zeros(0, net.param_dim());
    for t in &traces {
        for row in point_jacobian(net, t).iter_rows() {
            matrix.push_row(row)?;
        }
    }
    Ok(EvalJacobian { matrix, batch: batch.clone(), mode: S::MODE })
}

/// Central-difference Jacobian with per-entry flags where the forward and
/// backward one-sided quotients disagree (the step straddles a kink).
#[derive(Clone, Debug, PartialEq)]
pub struct FdJacobian {
    pub matrix: FloatMatrix,
    /// `(row, col)` entries whose one-sided quotients disagree.
    pub flagged: Vec<(usize, usize)>,
}

/// Relative disagreement above which a one-sided pair is flagged.
pub const FD_FLAG_TOL: f64 = 1e-5;

pub fn eval_jacobian_fd(net: &Network<f64>, batch: &Batch<f64>, h: f64) -> Result<FdJacobian> {
    if !(h > 0.0) {
        return Err(Error::InvalidArgument(format!("finite-difference step must be positive, got {h}")));
    }
    let nm = net.arch().output_dim();
    let d = net.param_dim();
    let base_params = net.flatten();
    let base: Vec<Vec<f64>> = batch.points().iter().map(|z| net.output(z)).collect::<Result<_>>()?;
    let mut matrix = FloatMatrix::zeros(batch.len() * nm, d);
    let mut flagged = Vec::new();
    for j in 0..d {
        let shifted = |delta: f64| -> Result<Network<f64>> {
            let mut p = base_params.clone();
            p[j] += delta;
            net.with_params(p)
        };
        let plus = shifted(h)?;
        let minus = shifted(-h)?;
        for (i, z) in batch.points().iter().enumerate() {
            let fp = plus.output(z)?;
            let fm = minus.output(z)?;
            for r in 0..nm {
                let row = i * nm + r;
                matrix.set(row, j, (fp[r] - fm[r]) / (2.0 * h));
                let fwd = (fp[r] - base[i][r]) / h;
                let bwd = (base[i][r] - fm[r]) / h;
                if (fwd - bwd).abs() > FD_FLAG_TOL * 1f64.max(fwd.abs()).max(bwd.abs()) {
                    flagged.push((row, j));
                }
            }
        }
    }
    Ok(FdJacobian { matrix, flagged })
}

/// Rank of `J E_{{z}}(s)`.
pub fn stochastic_dim<S: Scalar>(net: &Network<S>, z: &[S]) -> Result<RankReport<S>> {
    batch_dim(net, &Batch::singleton(z.to_vec()))
}

/// Rank of `J E_Z(s)` with default options.
pub fn batch_dim<S: Scalar>(net: &Network<S>, batch: &Batch<S>) -> Result<RankReport<S>> {
    batch_dim_with(net, batch, &DimOptions::default())
}

pub fn batch_dim_with<S: Scalar>(net: &Network<S>, batch: &Batch<S>, opts: &DimOptions) -> Result<RankReport<S>> {
    let j = eval_jacobian_with(net, batch, opts.policy)?;
    Ok(RankReport::batch(j.matrix.rank(opts.rank_tol), batch.clone(), opts))
}

/// Search strategy for the full functional dimension.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Strategy {
    /// Exact canonical complex of a one-dimensional input, two interior
    /// points per top cell.
    Decisive1d,
    /// Grow a random batch until the rank stops increasing for `patience`
    /// consecutive points (defaults: `patience = D`, `max_points = 4·D`).
    RandomSaturation { seed: u64, max_points: Option<usize>, patience: Option<usize> },
}

impl Strategy {
    pub fn saturation(seed: u64) -> Self {
        Strategy::RandomSaturation { seed, max_points: None, patience: None }
    }
}

/// Accumulates rows and reports the running rank.
pub struct RankTracker<S> {
    basis: EchelonBasis<S>,
    rows: Matrix<S>,
    rank: usize,
    tol: f64,
}

impl<S: Scalar> RankTracker<S> {
    pub fn new(cols: usize, tol: f64) -> Self {
        Self { basis: EchelonBasis::new(cols), rows: Matrix::zeros(0, cols), rank: 0, tol }
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn push_rows(&mut self, m: &Matrix<S>) -> usize {
        match S::MODE {
            ScalarMode::Rational => {
                for r in m.iter_rows() {
                    if self.basis.rank() < self.basis.cols() {
                        self.basis.insert(r);
                    }
                }
                self.rank = self.basis.rank();
            }
            ScalarMode::Float => {
                for r in m.iter_rows() {
                    self.rows.push_row(r).expect("row width matches");
                }
                self.rank = self.rows.rank(self.tol);
            }
        }
        self.rank
    }
}

/// Functional dimension `dim_fun(s)` (or `dim_fun+` with
/// `positive_orthant_only`), as a lower bound certified by a witness batch.
pub fn functional_dim<S: Scalar>(
    net: &Network<S>,
    strategy: Strategy,
    positive_orthant_only: bool,
) -> Result<RankReport<S>> {
    functional_dim_with(net, strategy, positive_orthant_only, &DimOptions::default())
}

pub fn functional_dim_with<S: Scalar>(
    net: &Network<S>,
    strategy: Strategy,
    positive_orthant_only: bool,
    opts: &DimOptions,
) -> Result<RankReport<S>> {
    match strategy {
        Strategy::Decisive1d => decisive_dim(net, positive_orthant_only, opts),
        Strategy::RandomSaturation { seed, max_points, patience } => {
            let d = net.param_dim();
            saturation_dim(net, seed, max_points.unwrap_or(4 * d), patience.unwrap_or(d), positive_orthant_only, opts)
        }
    }
}

fn decisive_dim<S: Scalar>(net: &Network<S>, positive: bool, opts: &DimOptions) -> Result<RankReport<S>> {
    let complex = pwl_complex::complex_1d(net)?;
    let decisive = pwl_complex::decisive_set_1d(net, &complex, positive, opts.policy)?;
    if decisive.batch.is_empty() {
        return Err(Error::NonOrdinarySuspected(format!(
            "none of the {} top cells of the canonical complex admits smooth points",
            complex.intervals.len()
        )));
    }
    let mut report = batch_dim_with(net, &decisive.batch, opts)?;
    let transversal = pwl_complex::is_transversal_1d(net)?;
    report.certification = if transversal { Certification::DecisiveTransversal } else { Certification::LowerBound };
    if !decisive.skipped.is_empty() {
        report.notes.push(format!("skipped non-smooth top cells {:?}", decisive.skipped));
    }
    if !transversal {
        report.notes.push("parameter is not transversal; value is a lower bound".into());
    }
    Ok(report)
}

fn saturation_dim<S: Scalar>(
    net: &Network<S>,
    seed: u64,
    max_points: usize,
    patience: usize,
    positive: bool,
    opts: &DimOptions,
) -> Result<RankReport<S>> {
    let d = net.param_dim();
    let n0 = net.arch().input_dim();
    let max_attempts = 64 * max_points.max(1);
    let mut rng = sampling::rng_for(seed, 0);
    let mut tracker = RankTracker::new(d, opts.rank_tol);
    let mut batch = Batch::empty(n0);
    let (mut attempts, mut stale) = (0usize, 0usize);
    while batch.len() < max_points && stale < patience && tracker.rank() < d && attempts < max_attempts {
        attempts += 1;
        let z: Vec<S> = sampling::random_input(n0, positive, &mut rng);
        let trace = net.forward(&z)?;
        if !opts.policy.admits(crate::network::smoothness_of_label(&trace.label)) {
            continue;
        }
        let before = tracker.rank();
        let after = tracker.push_rows(&point_jacobian(net, &trace));
        stale = if after > before { 0 } else { stale + 1 };
        batch.push(z)?;
    }
    if batch.is_empty() {
        return Err(Error::NonOrdinarySuspected(format!("{attempts} random inputs, none smooth")));
    }
    let mut report = RankReport::batch(tracker.rank(), batch, opts);
    report.saturated = Some(stale >= patience || tracker.rank() == d);
    report.certification = Certification::LowerBound;
    if attempts >= max_attempts {
        report.notes.push(format!("stopped after {attempts} sampling attempts"));
    }
    Ok(report)
}

/// `n_m + Σ_{i=0}^{m-1} n_i n_{i+1}`, the bound from scaling invariance.
pub fn upper_bound(arch: &Architecture) -> usize {
    arch.output_dim() + arch.widths().windows(2).map(|w| w[0] * w[1]).sum::<usize>()
}

/// `D - upper_bound = n_1 + … + n_{m-1}`.
pub fn bound_gap(arch: &Architecture) -> usize {
    arch.param_dim() - upper_bound(arch)
}

/// Parameter dimension of the architecture with the neurons that are off at
/// `z` removed; bounds the number of nonzero columns of `J E_z`.
pub fn off_neuron_bound<S: Scalar>(net: &Network<S>, z: &[S]) -> Result<usize> {
    let label = net.ternary_label(z)?;
    let arch = net.arch();
    let mut widths = vec![arch.input_dim()];
    widths.extend((1..=arch.depth()).map(|l| arch.width(l) - label.off_count(l)));
    Ok(param_dim(&widths))
}

/// Number of columns of `J` that are not identically zero.
pub fn nonzero_columns<S: Scalar>(j: &Matrix<S>) -> usize {
    (0..j.cols()).filter(|&c| (0..j.rows()).any(|r| !j.get(r, c).is_zero())).count()
}

/// Relative entrywise error `|a - b| / max(1, |a|, |b|)`, maximized over entries.
pub fn max_relative_error(a: &FloatMatrix, b: &FloatMatrix) -> f64 {
    a.data()
        .iter()
        .zip(b.data())
        .map(|(x, y)| (x - y).abs() / 1f64.max(x.abs()).max(y.abs()))
        .fold(0.0, f64::max)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{q, Rational};

    fn net(widths: &[usize], p: &[i64]) -> Network<Rational> {
        Network::from_ints(widths, p).unwrap()
    }

    #[test]
    fn one_one_row_is_z_one() {
        let n = net(&[1, 1], &[1, 1]);
        let j = eval_jacobian(&n, &Batch::from_ints(&[3])).unwrap();
        assert_eq!(j.matrix.row(0), &[q(3, 1), q(1, 1)]);
    }

    #[test]
    fn s0_right_piece_row() {
        // [w²₁₁ z, w²₁₁, 0, 0, w¹₁₁ z + b¹₁, 0, 1] at z = 5
        let n = net(&[1, 2, 1], &[2, -5, -1, 4, 1, 1, 1]);
        let j = eval_jacobian(&n, &Batch::from_ints(&[5])).unwrap();
        let expect: Vec<Rational> = [5, 1, 0, 0, 5, 0, 1].iter().map(|&v| q(v, 1)).collect();
        assert_eq!(j.matrix.row(0), expect.as_slice());
    }

    #[test]
    fn all_off_gives_zero_matrix() {
        let n = net(&[1, 2, 1], &[1, -100, 1, -100, 1, 1, -1]);
        let j = eval_jacobian_with(&n, &Batch::from_ints(&[1, 2, 3]), SmoothnessPolicy::Strict).unwrap();
        assert!(j.matrix.is_zero());
    }

    #[test]
    fn non_smooth_points_are_listed() {
        let n = net(&[1, 2, 1], &[2, -5, -1, 4, 1, 1, 1]);
        let b = Batch::from_scalars([q(3, 1), q(5, 2), q(4, 1)]);
        match eval_jacobian(&n, &b) {
            Err(Error::NonSmoothPoints(idx)) => assert_eq!(idx, vec![1, 2]),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn stochastic_examples() {
        let n = net(&[1, 2], &[1, 0, 1, -1]);
        assert_eq!(stochastic_dim(&n, &[q(-1, 1)]).unwrap().value, 0);
        assert_eq!(stochastic_dim(&n, &[q(1, 2)]).unwrap().value, 1);
        assert_eq!(stochastic_dim(&n, &[q(2, 1)]).unwrap().value, 2);
    }

    #[test]
    fn batch_examples() {
        let n = net(&[1, 1], &[1, 0]);
        assert_eq!(batch_dim(&n, &Batch::from_ints(&[-1, -2])).unwrap().value, 0);
        assert_eq!(batch_dim(&n, &Batch::from_ints(&[1, -1])).unwrap().value, 1);
        assert_eq!(batch_dim(&n, &Batch::from_ints(&[1, 2])).unwrap().value, 2);
    }

    #[test]
    fn upper_bounds() {
        let a = |w: &[usize]| Architecture::new(w.to_vec()).unwrap();
        assert_eq!(upper_bound(&a(&[1, 2, 1])), 5);
        assert_eq!(upper_bound(&a(&[3, 2, 1])), 9);
        assert_eq!(upper_bound(&a(&[1, 1, 1, 1, 1])), 5);
        assert_eq!(bound_gap(&a(&[1, 2, 1])), 2);
        assert_eq!(bound_gap(&a(&[2, 3, 4, 1])), 7);
    }

    #[test]
    fn off_neuron_bounds() {
        let s0 = net(&[1, 2, 1], &[2, -5, -1, 4, 1, 1, 1]);
        // x = 3: every neuron on.
        assert_eq!(off_neuron_bound(&s0, &[q(3, 1)]).unwrap(), 7);
        let n = net(&[1, 2], &[1, 0, 1, -1]);
        assert_eq!(off_neuron_bound(&n, &[q(1, 2)]).unwrap(), 2);
        assert_eq!(off_neuron_bound(&n, &[q(-1, 1)]).unwrap(), 0);
    }

    #[test]
    fn decisive_functional_dims() {
        let s0 = net(&[1, 2, 1], &[2, -5, -1, 4, 1, 1, 1]);
        let r = functional_dim(&s0, Strategy::Decisive1d, false).unwrap();
        assert_eq!(r.value, 5);
        assert_eq!(r.witness_batch.len(), 6);
        assert_eq!(r.certification, Certification::DecisiveTransversal);
        let s2 = net(&[1, 2, 1], &[1, 1, -1, -2, 1, -1, 0]);
        assert_eq!(functional_dim(&s2, Strategy::Decisive1d, false).unwrap().value, 2);
        let s1 = net(&[1, 2, 1], &[1, 0, -1, 0, 1, -1, 1]);
        assert_eq!(functional_dim(&s1, Strategy::Decisive1d, false).unwrap().value, 4);
    }

    #[test]
    fn saturation_matches_decisive_on_s0() {
        let s0 = net(&[1, 2, 1], &[2, -5, -1, 4, 1, 1, 1]);
        let patient = Strategy::RandomSaturation { seed: 3, max_points: Some(200), patience: Some(100) };
        let r = functional_dim(&s0, patient, false).unwrap();
        assert_eq!(r.value, 5);
        assert_eq!(r.saturated, Some(true));
        assert_eq!(r.certification, Certification::LowerBound);
    }

    #[test]
    fn default_saturation_is_a_lower_bound() {
        let s0 = net(&[1, 2, 1], &[2, -5, -1, 4, 1, 1, 1]);
        for seed in 0..20 {
            let r = functional_dim(&s0, Strategy::saturation(seed), false).unwrap();
            assert!(r.value <= 5);
            assert_eq!(r.saturated, Some(true));
        }
    }

    #[test]
    fn dead_network_is_non_ordinary() {
        let dead = net(&[1, 1], &[0, 0]);
        assert!(matches!(
            functional_dim(&dead, Strategy::saturation(0), false),
            Err(Error::NonOrdinarySuspected(_))
        ));
        assert!(matches!(functional_dim(&dead, Strategy::Decisive1d, false), Err(Error::NonOrdinarySuspected(_))));
    }

    #[test]
    fn positive_orthant_restriction() {
        // σ(-x + 1): only the region x < 1 is on; on x > 0 that is (0, 1).
        let n = net(&[1, 1], &[-1, 1]);
        let r = functional_dim(&n, Strategy::Decisive1d, true).unwrap();
        assert_eq!(r.value, 2);
        assert!(r.witness_batch.points().iter().all(|p| p[0] > q(0, 1)));
        // σ(-x - 1) is off on the whole positive half-line.
        let n = net(&[1, 1], &[-1, -1]);
        assert!(functional_dim(&n, Strategy::Decisive1d, true).unwrap().value == 0);
    }

    #[test]
    fn fd_flags_kinks() {
        let n = Network::<f64>::from_ints(&[1, 1], &[0, 0]).unwrap();
        let fd = eval_jacobian_fd(&n, &Batch::from_scalars([1.0, -1.0, 2.0]), 1e-6).unwrap();
        for row in 0..3 {
            assert!(fd.flagged.contains(&(row, 0)), "{:?}", fd.flagged);
        }
        let n = Network::<f64>::from_ints(&[1, 1], &[1, 1]).unwrap();
        assert!(eval_jacobian_fd(&n, &Batch::from_scalars([1.0]), 1e-6).unwrap().flagged.is_empty());
    }
}

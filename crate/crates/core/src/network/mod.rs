//! Architectures, parameters, forward evaluation and ternary activation labels.
//!
//! Layers are numbered `1..=m` as in the usual notation `A¹, …, Aᵐ` (layer 0
//! is the input); neuron indices within a layer are 0-based. Layer `ℓ` is an
//! `n_ℓ × (n_{ℓ-1} + 1)` matrix whose last column is the bias, and the output
//! passes through a final ReLU like every other layer.

mod io;

pub use io::{load_network, save_network, AnyNetwork, NetworkFile};

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::Matrix;
use crate::scalar::Scalar;

/// Default float snapping threshold for the ternary sign.
pub const DEFAULT_ZERO_TOL: f64 = 1e-12;

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "Vec<usize>", into = "Vec<usize>")]
pub struct Architecture {
    widths: Vec<usize>,
}

impl Architecture {
    pub fn new(widths: impl Into<Vec<usize>>) -> Result<Self> {
        let widths = widths.into();
        if widths.len() < 2 {
            return Err(Error::InvalidArchitecture(format!("need at least one layer, got widths {widths:?}")));
        }
        if widths.contains(&0) {
            return Err(Error::InvalidArchitecture(format!("widths must be positive, got {widths:?}")));
        }
        Ok(Self { widths })
    }

    pub fn widths(&self) -> &[usize] {
        &self.widths
    }

    /// Number of layer maps `m`.
    pub fn depth(&self) -> usize {
        self.widths.len() - 1
    }

    pub fn input_dim(&self) -> usize {
        self.widths[0]
    }

    pub fn output_dim(&self) -> usize {
        self.widths[self.depth()]
    }

    /// Width `n_ℓ`; `width(0)` is the input dimension.
    pub fn width(&self, layer: usize) -> usize {
        self.widths[layer]
    }

    /// Dimension of the parameter space, `Σ n_ℓ (n_{ℓ-1} + 1)`.
    pub fn param_dim(&self) -> usize {
        param_dim(&self.widths)
    }

    /// Offset of layer `layer`'s block in the flattened parameter vector.
    pub fn layer_offset(&self, layer: usize) -> usize {
        (1..layer).map(|l| self.widths[l] * (self.widths[l - 1] + 1)).sum()
    }

    /// Flattened index of entry `(row, col)` of `A^layer`.
    pub fn param_index(&self, layer: usize, row: usize, col: usize) -> usize {
        self.layer_offset(layer) + row * (self.widths[layer - 1] + 1) + col
    }

    /// Strictly decreasing widths.
    pub fn is_narrowing(&self) -> bool {
        self.widths.windows(2).all(|w| w[0] > w[1])
    }

    pub fn hidden_neurons(&self) -> usize {
        self.widths[1..self.depth()].iter().sum()
    }
}

impl TryFrom<Vec<usize>> for Architecture {
    type Error = Error;
    fn try_from(v: Vec<usize>) -> Result<Self> {
        Self::new(v)
    }
}

impl From<Architecture> for Vec<usize> {
    fn from(a: Architecture) -> Self {
        a.widths
    }
}

impl fmt::Display for Architecture {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.widths.iter().map(|w| w.to_string()).collect();
        write!(f, "({})", parts.join(","))
    }
}

/// `Σ_{i=1}^m n_i (n_{i-1} + 1)` for a width list; layers of width 0 contribute nothing.
pub fn param_dim(widths: &[usize]) -> usize {
    widths.windows(2).map(|w| w[1] * (w[0] + 1)).sum()
}

/// Per-layer sign tuples `θ^ℓ ∈ {-1, 0, +1}^{n_ℓ}` for `ℓ = 1..=m`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct TernaryLabel(Vec<Vec<i8>>);

impl TernaryLabel {
    pub fn new(layers: Vec<Vec<i8>>) -> Self {
        Self(layers)
    }

    pub fn layers(&self) -> &[Vec<i8>] {
        &self.0
    }

    /// Signs of layer `layer` (1-based).
    pub fn layer(&self, layer: usize) -> &[i8] {
        &self.0[layer - 1]
    }

    pub fn has_zero(&self) -> bool {
        self.0.iter().flatten().any(|&s| s == 0)
    }

    pub fn len(&self) -> usize {
        self.0.iter().map(Vec::len).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Whether neuron `neuron` of layer `layer` is on (`θ > 0`).
    pub fn is_on(&self, layer: usize, neuron: usize) -> bool {
        self.0[layer - 1][neuron] > 0
    }

    pub fn off_count(&self, layer: usize) -> usize {
        self.0[layer - 1].iter().filter(|&&s| s <= 0).count()
    }

    pub fn all_on(arch: &Architecture) -> Self {
        Self((1..=arch.depth()).map(|l| vec![1; arch.width(l)]).collect())
    }

    pub fn all_off(arch: &Architecture) -> Self {
        Self((1..=arch.depth()).map(|l| vec![-1; arch.width(l)]).collect())
    }

    fn matches(&self, arch: &Architecture) -> bool {
        self.0.len() == arch.depth() && self.0.iter().enumerate().all(|(i, t)| t.len() == arch.width(i + 1))
    }
}

impl fmt::Display for TernaryLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .0
            .iter()
            .map(|t| format!("({})", t.iter().map(|s| s.to_string()).collect::<Vec<_>>().join(",")))
            .collect();
        write!(f, "({})", parts.join(","))
    }
}

/// Pre- and post-activations of every layer at one input.
#[derive(Clone, Debug, PartialEq)]
pub struct ForwardTrace<S> {
    pub input: Vec<S>,
    /// `pre[ℓ-1] = y^ℓ`.
    pub pre: Vec<Vec<S>>,
    /// `post[ℓ-1] = x^ℓ = max(0, y^ℓ)`.
    pub post: Vec<Vec<S>>,
    pub label: TernaryLabel,
}

impl<S: Scalar> ForwardTrace<S> {
    pub fn output(&self) -> &[S] {
        self.post.last().expect("at least one layer")
    }

    /// `x̂^ℓ`: post-activation of layer `layer` with a trailing 1 (`layer = 0` is the input).
    pub fn augmented(&self, layer: usize) -> Vec<S> {
        let mut v = if layer == 0 { self.input.clone() } else { self.post[layer - 1].clone() };
        v.push(S::one());
        v
    }
}

/// `A^ℓ_θ` (rows of off neurons zeroed) and its augmented form `Â^ℓ_θ`.
#[derive(Clone, Debug, PartialEq)]
pub struct MaskedLayer<S> {
    pub masked: Matrix<S>,
    pub augmented: Matrix<S>,
}

/// Local smoothness verdict for a (parameter, input) pair.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Smoothness {
    /// Label has no zero entries.
    SmoothNoZeros,
    /// Every zero neuron feeds a later layer whose neurons are all strictly
    /// negative at the input, so it cannot influence the output nearby.
    SmoothStableDead,
    Unknown,
}

/// Which points the Jacobian-based routines accept.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SmoothnessPolicy {
    #[default]
    Strict,
    /// Also admit [`Smoothness::SmoothStableDead`] points.
    Permissive,
}

impl SmoothnessPolicy {
    pub fn admits(self, s: Smoothness) -> bool {
        match s {
            Smoothness::SmoothNoZeros => true,
            Smoothness::SmoothStableDead => self == SmoothnessPolicy::Permissive,
            Smoothness::Unknown => false,
        }
    }
}

/// A parameter point together with its architecture.
///
/// The scalar type fixes the arithmetic: `Network<Rational>` is exact,
/// `Network<f64>` snaps `|y| <= zero_tol` to sign 0.
#[derive(Clone, Debug, PartialEq)]
pub struct Network<S> {
    arch: Architecture,
    layers: Vec<Matrix<S>>,
    zero_tol: f64,
}

impl<S: Scalar> Network<S> {
    pub fn new(arch: Architecture, layers: Vec<Matrix<S>>) -> Result<Self> {
        if layers.len() != arch.depth() {
            return Err(Error::DimensionMismatch(format!(
                "{} layer matrices for architecture {arch}",
                layers.len()
            )));
        }
        for (i, a) in layers.iter().enumerate() {
            let (r, c) = (arch.width(i + 1), arch.width(i) + 1);
            if a.rows() != r || a.cols() != c {
                return Err(Error::DimensionMismatch(format!(
                    "layer {} is {}x{}, expected {r}x{c}",
                    i + 1,
                    a.rows(),
                    a.cols()
                )));
            }
        }
        Ok(Self { arch, layers, zero_tol: DEFAULT_ZERO_TOL })
    }

    /// Builds a network from its flattened parameter vector (layer by layer,
    /// each row as weights followed by bias).
    pub fn from_flat(arch: Architecture, params: Vec<S>) -> Result<Self> {
        if params.len() != arch.param_dim() {
            return Err(Error::DimensionMismatch(format!(
                "{} parameters for architecture {arch} (D = {})",
                params.len(),
                arch.param_dim()
            )));
        }
        let mut it = params.into_iter();
        let mut layers = Vec::with_capacity(arch.depth());
        for l in 1..=arch.depth() {
            let (r, c) = (arch.width(l), arch.width(l - 1) + 1);
            layers.push(Matrix::new(r, c, it.by_ref().take(r * c).collect())?);
        }
        Self::new(arch, layers)
    }

    /// Convenience constructor from integer parameters.
    pub fn from_ints(widths: &[usize], params: &[i64]) -> Result<Self> {
        let arch = Architecture::new(widths.to_vec())?;
        Self::from_flat(arch, params.iter().map(|&v| S::from_ratio(v, 1)).collect())
    }

    pub fn with_zero_tol(mut self, zero_tol: f64) -> Self {
        self.zero_tol = zero_tol;
        self
    }

    pub fn zero_tol(&self) -> f64 {
        self.zero_tol
    }

    pub fn arch(&self) -> &Architecture {
        &self.arch
    }

    pub fn depth(&self) -> usize {
        self.arch.depth()
    }

    pub fn layers(&self) -> &[Matrix<S>] {
        &self.layers
    }

    /// `A^layer` (1-based).
    pub fn layer(&self, layer: usize) -> &Matrix<S> {
        &self.layers[layer - 1]
    }

    pub fn layer_mut(&mut self, layer: usize) -> &mut Matrix<S> {
        &mut self.layers[layer - 1]
    }

    pub fn flatten(&self) -> Vec<S> {
        self.layers.iter().flat_map(|a| a.data().iter().cloned()).collect()
    }

    pub fn param_dim(&self) -> usize {
        self.arch.param_dim()
    }

    /// Same architecture, parameters replaced.
    pub fn with_params(&self, params: Vec<S>) -> Result<Self> {
        Ok(Self::from_flat(self.arch.clone(), params)?.with_zero_tol(self.zero_tol))
    }

    pub fn to_float(&self) -> Network<f64> {
        Network {
            arch: self.arch.clone(),
            layers: self.layers.iter().map(Matrix::to_float).collect(),
            zero_tol: self.zero_tol,
        }
    }

    /// The network made of the first `depth` layers.
    pub fn truncate(&self, depth: usize) -> Result<Self> {
        if depth == 0 || depth > self.depth() {
            return Err(Error::IndexOutOfRange(format!("truncation depth {depth} of a depth-{} network", self.depth())));
        }
        let arch = Architecture::new(self.arch.widths()[..=depth].to_vec())?;
        Ok(Self { arch, layers: self.layers[..depth].to_vec(), zero_tol: self.zero_tol })
    }

    fn check_input(&self, x: &[S]) -> Result<()> {
        if x.len() != self.arch.input_dim() {
            return Err(Error::DimensionMismatch(format!(
                "input of length {} for input dimension {}",
                x.len(),
                self.arch.input_dim()
            )));
        }
        Ok(())
    }

    pub fn forward(&self, x: &[S]) -> Result<ForwardTrace<S>> {
        self.check_input(x)?;
        let mut pre = Vec::with_capacity(self.depth());
        let mut post: Vec<Vec<S>> = Vec::with_capacity(self.depth());
        let mut label = Vec::with_capacity(self.depth());
        let mut cur: Vec<S> = x.to_vec();
        for a in &self.layers {
            let n_in = a.cols() - 1;
            let y: Vec<S> = a
                .iter_rows()
                .map(|r| crate::linalg::dot(&r[..n_in], &cur) + r[n_in].clone())
                .collect();
            label.push(y.iter().map(|v| v.sign(self.zero_tol)).collect());
            cur = y.iter().map(Scalar::relu).collect();
            pre.push(y);
            post.push(cur.clone());
        }
        Ok(ForwardTrace { input: x.to_vec(), pre, post, label: TernaryLabel(label) })
    }

    /// `ρ(s)(x)`.
    pub fn output(&self, x: &[S]) -> Result<Vec<S>> {
        Ok(self.forward(x)?.post.pop().expect("at least one layer"))
    }

    pub fn ternary_label(&self, x: &[S]) -> Result<TernaryLabel> {
        Ok(self.forward(x)?.label)
    }

    /// Masked matrices `A^ℓ_θ` and augmented `Â^ℓ_θ` for every layer.
    pub fn masked_affine(&self, label: &TernaryLabel) -> Result<Vec<MaskedLayer<S>>> {
        if !label.matches(&self.arch) {
            return Err(Error::DimensionMismatch(format!("label {label} does not fit architecture {}", self.arch)));
        }
        Ok(self
            .layers
            .iter()
            .enumerate()
            .map(|(i, a)| {
                let mut masked = a.clone();
                for (r, &s) in label.layer(i + 1).iter().enumerate() {
                    if s <= 0 {
                        masked.row_mut(r).iter_mut().for_each(|v| *v = S::zero());
                    }
                }
                let mut augmented = masked.clone();
                let mut unit = vec![S::zero(); a.cols()];
                unit[a.cols() - 1] = S::one();
                augmented.push_row(&unit).expect("width matches");
                MaskedLayer { masked, augmented }
            })
            .collect())
    }

    /// Node map `F_{layer,neuron}(x)`: post-activation of one neuron.
    pub fn node_map(&self, layer: usize, neuron: usize, x: &[S]) -> Result<S> {
        if layer == 0 || layer > self.depth() || neuron >= self.arch.width(layer) {
            return Err(Error::IndexOutOfRange(format!(
                "node ({layer}, {neuron}) in architecture {}",
                self.arch
            )));
        }
        Ok(self.forward(x)?.post[layer - 1][neuron].clone())
    }

    /// Affine pre-activation of one neuron as `(weights, bias)`.
    pub fn neuron_row(&self, layer: usize, neuron: usize) -> (&[S], &S) {
        let row = self.layer(layer).row(neuron);
        let n = row.len() - 1;
        (&row[..n], &row[n])
    }

    /// All incoming weights and the bias strictly negative. Such a neuron
    /// (in layer ≥ 2, whose inputs are nonnegative) is off at every input,
    /// and stays off for every nearby parameter.
    pub fn sign_condition_dead(&self, layer: usize, neuron: usize) -> Result<bool> {
        if layer < 2 || layer > self.depth() || neuron >= self.arch.width(layer) {
            return Err(Error::IndexOutOfRange(format!(
                "sign condition needs a neuron in layers 2..={}, got ({layer}, {neuron})",
                self.depth()
            )));
        }
        let (w, b) = self.neuron_row(layer, neuron);
        Ok(*b < S::zero() && w.iter().all(|v| *v < S::zero()))
    }

    pub fn smoothness(&self, x: &[S]) -> Result<Smoothness> {
        let label = self.ternary_label(x)?;
        Ok(smoothness_of_label(&label))
    }
}

/// Smoothness verdict from a label alone: a zero neuron is harmless when some
/// later layer is entirely strictly negative, since that layer stays off under
/// small joint perturbations of parameters and input.
pub fn smoothness_of_label(label: &TernaryLabel) -> Smoothness {
    if !label.has_zero() {
        return Smoothness::SmoothNoZeros;
    }
    let layers = label.layers();
    let last_dead_layer = layers.iter().rposition(|t| t.iter().all(|&s| s < 0));
    let last_zero_layer = layers.iter().rposition(|t| t.contains(&0)).expect("has a zero");
    match last_dead_layer {
        Some(d) if d > last_zero_layer => Smoothness::SmoothStableDead,
        _ => Smoothness::Unknown,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{q, Rational};

    fn s0() -> Network<Rational> {
        Network::from_ints(&[1, 2, 1], &[2, -5, -1, 4, 1, 1, 1]).unwrap()
    }

    #[test]
    fn param_dim_examples() {
        assert_eq!(Architecture::new(vec![1, 2, 1]).unwrap().param_dim(), 7);
        assert_eq!(Architecture::new(vec![1, 1]).unwrap().param_dim(), 2);
        assert_eq!(Architecture::new(vec![3, 2, 1]).unwrap().param_dim(), 11);
        assert!(Architecture::new(vec![1]).is_err());
        assert!(Architecture::new(vec![1, 0, 1]).is_err());
    }

    #[test]
    fn forward_pieces() {
        let n = s0();
        assert_eq!(n.output(&[q(3, 1)]).unwrap(), vec![q(3, 1)]);
        assert_eq!(n.output(&[q(0, 1)]).unwrap(), vec![q(5, 1)]);
        let zero = Network::<Rational>::from_ints(&[1, 2, 1], &[0; 7]).unwrap();
        assert_eq!(zero.output(&[q(17, 3)]).unwrap(), vec![q(0, 1)]);
        assert!(n.forward(&[q(1, 1), q(2, 1)]).is_err());
    }

    #[test]
    fn labels() {
        let n = s0();
        assert_eq!(n.ternary_label(&[q(3, 1)]).unwrap().to_string(), "((1,1),(1))");
        assert_eq!(n.ternary_label(&[q(0, 1)]).unwrap().to_string(), "((-1,1),(1))");
        assert_eq!(n.ternary_label(&[q(5, 2)]).unwrap().to_string(), "((0,1),(1))");
    }

    #[test]
    fn masked_affine_rules() {
        let n = s0();
        let all_on = n.masked_affine(&TernaryLabel::all_on(n.arch())).unwrap();
        for (m, a) in all_on.iter().zip(n.layers()) {
            assert_eq!(&m.masked, a);
        }
        let all_off = n.masked_affine(&TernaryLabel::all_off(n.arch())).unwrap();
        assert!(all_off.iter().all(|m| m.masked.is_zero()));
        let left = n.masked_affine(&TernaryLabel::new(vec![vec![-1, 1], vec![1]])).unwrap();
        let expect = Matrix::new(2, 2, vec![q(0, 1), q(0, 1), q(-1, 1), q(4, 1)]).unwrap();
        assert_eq!(left[0].masked, expect);
        assert_eq!(left[0].augmented.row(2), &[q(0, 1), q(1, 1)]);
        assert!(n.masked_affine(&TernaryLabel::new(vec![vec![1]])).is_err());
    }

    #[test]
    fn node_map_examples() {
        let n = Network::<Rational>::from_ints(&[1, 1, 1], &[1, 0, 1, -1]).unwrap();
        assert_eq!(n.node_map(1, 0, &[q(2, 1)]).unwrap(), q(2, 1));
        assert_eq!(n.node_map(2, 0, &[q(2, 1)]).unwrap(), q(1, 1));
        assert_eq!(n.node_map(2, 0, &[q(0, 1)]).unwrap(), q(0, 1));
        assert!(n.node_map(3, 0, &[q(0, 1)]).is_err());
        assert!(n.node_map(1, 1, &[q(0, 1)]).is_err());
    }

    #[test]
    fn smoothness_examples() {
        let n = Network::<Rational>::from_ints(&[1, 1, 1], &[1, 0, 1, -1]).unwrap();
        assert_eq!(n.smoothness(&[q(0, 1)]).unwrap(), Smoothness::SmoothStableDead);
        assert_eq!(s0().smoothness(&[q(3, 1)]).unwrap(), Smoothness::SmoothNoZeros);
        let dead = Network::<Rational>::from_ints(&[1, 1], &[0, 0]).unwrap();
        for x in [-2, 0, 3] {
            assert_eq!(dead.smoothness(&[q(x, 1)]).unwrap(), Smoothness::Unknown);
        }
    }

    #[test]
    fn float_zero_snapping() {
        let n = Network::<f64>::from_ints(&[1, 1], &[1, 0]).unwrap();
        assert_eq!(n.ternary_label(&[1e-13]).unwrap().layer(1), &[0]);
        let n = n.with_zero_tol(1e-15);
        assert_eq!(n.ternary_label(&[1e-13]).unwrap().layer(1), &[1]);
    }

    #[test]
    fn sign_condition() {
        let n = Network::<Rational>::from_ints(&[1, 1, 3], &[1, 0, -1, -1, 1, -1, 0, 0]).unwrap();
        assert!(n.sign_condition_dead(2, 0).unwrap());
        assert!(!n.sign_condition_dead(2, 1).unwrap());
        assert!(!n.sign_condition_dead(2, 2).unwrap());
        assert!(n.sign_condition_dead(1, 0).is_err());
    }
}

//! Numerical probe for combinatorial stability of a one-dimensional complex.

use crate::error::Result;
use crate::network::{Network, TernaryLabel};
use crate::sampling;
use crate::scalar::Scalar;

use super::{complex_1d, Complex1D};

#[derive(Clone, Debug, PartialEq)]
pub enum StabilityVerdict<S> {
    /// No change seen in any trial with perturbations up to `eps`.
    StableUpTo(f64),
    UnstableWitness { perturbation: Vec<S>, reason: String },
}

impl<S> StabilityVerdict<S> {
    pub fn is_stable(&self) -> bool {
        matches!(self, StabilityVerdict::StableUpTo(_))
    }
}

fn signature<S: Scalar>(c: &Complex1D<S>) -> (Vec<&TernaryLabel>, Vec<&TernaryLabel>) {
    (c.interval_labels(), c.vertices.iter().map(|v| &v.label).collect())
}

/// Perturbs every parameter by at most `eps` in `trials` independent draws
/// and compares cell counts, left-to-right cell labels and vertex labels.
/// A numerical probe, not a proof.
pub fn probe_combinatorial_stability<S: Scalar>(
    net: &Network<S>,
    eps: f64,
    trials: usize,
    seed: u64,
) -> Result<StabilityVerdict<S>> {
    let base = complex_1d(net)?;
    let base_sig = signature(&base);
    let radius = S::from_f64(eps);
    for t in 0..trials {
        let mut rng = sampling::rng_for(seed, t as u64);
        let p = sampling::perturb(net, &radius, &mut rng);
        let c = complex_1d(&p)?;
        let reason = if c.intervals.len() != base.intervals.len() {
            Some(format!("{} cells became {}", base.intervals.len(), c.intervals.len()))
        } else if signature(&c) != base_sig {
            Some("cell or vertex labels changed".to_string())
        } else {
            None
        };
        if let Some(reason) = reason {
            let perturbation = p.flatten().into_iter().zip(net.flatten()).map(|(a, b)| a - b).collect();
            return Ok(StabilityVerdict::UnstableWitness { perturbation, reason });
        }
    }
    Ok(StabilityVerdict::StableUpTo(eps))
}

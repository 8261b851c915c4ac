//! Batch experiments on bounds, architecture families and random parameters.
//!
//! Every experiment draws trial `t` from the RNG stream `(seed, t)`, so
//! reports do not depend on thread scheduling, and every computed
//! dimension is checked against [`upper_bound`].

use serde::Serialize;
use serde_json::Value;

use crate::error::{Error, Result};
use crate::funcdim::{functional_dim, upper_bound, Strategy};
use crate::network::{Architecture, Network};
use crate::scalar::Scalar;

mod bounds;
mod depth1;
mod nonordinary;
mod ones_chain;
mod semicontinuity;
mod unactivated;

pub use bounds::{tightness_search, upper_bound_sweep};
pub use depth1::{depth1_network, depth1_witness};
pub use nonordinary::{nonordinary_demo, one_sided_quotients, OneSided};
pub use ones_chain::{classify_1d_type, ones_chain_dim, ones_chain_witness, OneDType};
pub use semicontinuity::{semicontinuity_at, semicontinuity_probe};
pub use unactivated::{stably_unactivated_frequency, stably_unactivated_sufficient};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    /// The expected value or property was observed.
    Confirmed,
    /// A bound was reached by some witness.
    Attained,
    /// The search budget ran out without a witness; not a counterexample.
    Inconclusive,
    /// The expected property failed.
    Failed,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ExperimentReport {
    pub name: String,
    pub seed: u64,
    pub config: Value,
    pub records: Vec<Value>,
    pub summary: Value,
    pub verdict: Verdict,
}

impl ExperimentReport {
    pub fn to_json_string(&self) -> String {
        serde_json::to_string_pretty(self).expect("report values serialize")
    }
}

/// Errors with [`Error::BoundViolation`] if `value` exceeds the bound for `arch`.
pub fn check_upper_bound(arch: &Architecture, value: usize) -> Result<()> {
    let bound = upper_bound(arch);
    if value > bound {
        return Err(Error::BoundViolation { value, bound, arch: arch.to_string() });
    }
    Ok(())
}

/// Decisive-set dimension for scalar inputs, random saturation otherwise.
/// Bound-checked.
pub(crate) fn dimension<S: Scalar>(net: &Network<S>, seed: u64) -> Result<usize> {
    let strategy = if net.arch().input_dim() == 1 { Strategy::Decisive1d } else { Strategy::saturation(seed) };
    let value = functional_dim(net, strategy, false)?.value;
    check_upper_bound(net.arch(), value)?;
    Ok(value)
}

/// Distinct per-trial seed for the saturation sampler.
pub(crate) fn trial_seed(seed: u64, trial: usize) -> u64 {
    seed.wrapping_mul(0x9E37_79B9_7F4A_7C15).wrapping_add(trial as u64)
}

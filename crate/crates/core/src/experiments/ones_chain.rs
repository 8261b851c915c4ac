use rayon::prelude::*;
use serde::Serialize;
use serde_json::json;

use super::{dimension, ExperimentReport, Verdict};
use crate::error::{Error, Result};
use crate::network::Network;
use crate::pwl_complex::complex_1d;
use crate::sampling::{self, PARAM_BOUND};
use crate::scalar::{Rational, Scalar};

/// Shapes of `R → R` functions realized by all-ones architectures, by the
/// sign pattern of slopes after merging equal adjacent pieces.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum OneDType {
    /// Constant.
    Type1,
    /// Constant, then increasing.
    Type2,
    /// Decreasing, then constant.
    Type3,
    /// Constant, increasing, constant.
    Type4,
    /// Constant, decreasing, constant.
    Type5,
    Other,
}

pub fn classify_1d_type<S: Scalar>(net: &Network<S>) -> Result<OneDType> {
    if net.arch().widths().iter().any(|&w| w != 1) {
        return Err(Error::InvalidArchitecture(format!("{} is not all ones", net.arch())));
    }
    let complex = complex_1d(net)?;
    let mut pieces: Vec<(&S, &S)> = Vec::new();
    for c in &complex.intervals {
        let piece = (&c.slope[0], &c.intercept[0]);
        if pieces.last() != Some(&piece) {
            pieces.push(piece);
        }
    }
    let signs: Vec<i8> = pieces.iter().map(|(a, _)| a.sign(0.0)).collect();
    Ok(match signs.as_slice() {
        [0] => OneDType::Type1,
        [0, 1] => OneDType::Type2,
        [-1, 0] => OneDType::Type3,
        [0, 1, 0] => OneDType::Type4,
        [0, -1, 0] => OneDType::Type5,
        _ => OneDType::Other,
    })
}

/// Deterministic witness for `len` ones: `σ(x + 1)`, then
/// `σ(-σ(x + 1) + 2)` (type 5 with positive image), then `y ↦ σ(y + 1)`
/// for each further layer.
pub fn ones_chain_witness(len: usize) -> Result<Network<Rational>> {
    if len < 2 {
        return Err(Error::InvalidArchitecture(format!("a chain needs at least 2 widths, got {len}")));
    }
    let mut params = vec![1, 1];
    if len >= 3 {
        params.extend([-1, 2]);
    }
    for _ in 4..=len {
        params.extend([1, 1]);
    }
    Network::from_ints(&vec![1; len], &params)
}

/// Classifies every truncation of `net`; errors if one falls outside types 1-5.
fn assert_type_closure(net: &Network<Rational>) -> Result<Vec<OneDType>> {
    (1..=net.depth())
        .map(|k| {
            let t = classify_1d_type(&net.truncate(k)?)?;
            if t == OneDType::Other {
                return Err(Error::InvalidArgument(format!(
                    "truncation to depth {k} of {:?} has an unexpected shape",
                    net.flatten()
                )));
            }
            Ok(t)
        })
        .collect()
}

/// Largest functional dimension over random parameters and the constructed
/// witness for an all-ones architecture of `len` widths.
pub fn ones_chain_dim(len: usize, trials: usize, seed: u64) -> Result<ExperimentReport> {
    let witness = ones_chain_witness(len)?;
    let arch = witness.arch().clone();
    let witness_types = assert_type_closure(&witness)?;
    let witness_dim = dimension(&witness, seed)?;
    let records: Vec<_> = (0..trials)
        .into_par_iter()
        .map(|t| -> Result<_> {
            let mut rng = sampling::rng_for(seed, t as u64);
            let net = sampling::random_dyadic_network::<Rational>(&arch, PARAM_BOUND, &mut rng);
            let types = assert_type_closure(&net)?;
            let dim = match dimension(&net, seed) {
                Ok(d) => Some(d),
                Err(Error::NonOrdinarySuspected(_)) => None,
                Err(e) => return Err(e),
            };
            Ok((dim, *types.last().expect("depth >= 1")))
        })
        .collect::<Result<_>>()?;
    let max_random = records.iter().filter_map(|r| r.0).max();
    let sup = max_random.unwrap_or(0).max(witness_dim);
    let expected = len.min(4);
    Ok(ExperimentReport {
        name: "ones-chain".into(),
        seed,
        config: json!({ "arch": arch.widths(), "trials": trials, "strategy": "decisive_1d" }),
        records: records
            .iter()
            .enumerate()
            .map(|(t, (d, ty))| json!({ "trial": t, "dim": d, "type": ty }))
            .collect(),
        summary: json!({
            "max": sup,
            "max_random": max_random,
            "witness": witness.flatten().iter().map(|v| v.to_string()).collect::<Vec<_>>(),
            "witness_dim": witness_dim,
            "witness_types": witness_types,
            "expected": expected,
            "formula_bound": crate::funcdim::upper_bound(&arch),
        }),
        verdict: if sup == expected { Verdict::Confirmed } else { Verdict::Failed },
    })
}

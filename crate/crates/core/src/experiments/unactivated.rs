use rayon::prelude::*;
use serde_json::json;

use super::{ExperimentReport, Verdict};
use crate::error::Result;
use crate::network::{Architecture, Network};
use crate::sampling;
use crate::scalar::Scalar;

/// Sufficient condition for a neuron in layer `i >= 2` to be stably
/// unactivated: every incoming weight and the bias are negative.
pub fn stably_unactivated_sufficient<S: Scalar>(net: &Network<S>, layer: usize, neuron: usize) -> Result<bool> {
    net.sign_condition_dead(layer, neuron)
}

/// Frequency of the sign condition for every neuron in layers `>= 2`, with
/// parameters i.i.d. uniform on `[-1, 1]`. The expected per-neuron rate is
/// `2^-(1 + n_{i-1})`.
pub fn stably_unactivated_frequency(arch: &Architecture, trials: usize, seed: u64) -> Result<ExperimentReport> {
    let neurons: Vec<(usize, usize)> =
        (2..=arch.depth()).flat_map(|l| (0..arch.width(l)).map(move |j| (l, j))).collect();
    let (counts, any) = (0..trials)
        .into_par_iter()
        .map(|t| {
            let mut rng = sampling::rng_for(seed, t as u64);
            let net = sampling::random_uniform_network(arch, &mut rng);
            let hits: Vec<u64> = neurons
                .iter()
                .map(|&(l, j)| u64::from(net.sign_condition_dead(l, j).expect("layer >= 2")))
                .collect();
            let any = u64::from(hits.iter().any(|&h| h > 0));
            (hits, any)
        })
        .reduce(
            || (vec![0; neurons.len()], 0),
            |(a, x), (b, y)| (a.iter().zip(&b).map(|(p, q)| p + q).collect(), x + y),
        );
    let mut records = Vec::new();
    let mut within = true;
    for (&(l, j), &c) in neurons.iter().zip(&counts) {
        let p = 0.5f64.powi(1 + arch.width(l - 1) as i32);
        let n = trials as f64;
        let stderr = (p * (1.0 - p) / n).sqrt();
        let freq = if trials == 0 { 0.0 } else { c as f64 / n };
        let z = if trials == 0 { 0.0 } else { (freq - p) / stderr };
        let ok = trials == 0 || z.abs() <= 3.0;
        within &= ok;
        records.push(json!({
            "layer": l,
            "neuron": j,
            "fan_in": arch.width(l - 1),
            "count": c,
            "frequency": freq,
            "expected": p,
            "stderr": stderr,
            "z": z,
            "within_3_stderr": ok,
        }));
    }
    let network_expected = 1.0
        - (2..=arch.depth())
            .map(|l| (1.0 - 0.5f64.powi(1 + arch.width(l - 1) as i32)).powi(arch.width(l) as i32))
            .product::<f64>();
    let network_frequency = if trials == 0 { 0.0 } else { any as f64 / trials as f64 };
    Ok(ExperimentReport {
        name: "unactivated".into(),
        seed,
        config: json!({ "arch": arch.widths(), "trials": trials, "distribution": "uniform[-1,1]" }),
        records: if trials == 0 { Vec::new() } else { records },
        summary: json!({
            "network_frequency": network_frequency,
            "network_expected": network_expected,
            "all_within_3_stderr": within,
        }),
        verdict: if within { Verdict::Confirmed } else { Verdict::Failed },
    })
}

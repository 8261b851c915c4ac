use rayon::prelude::*;
use serde_json::{json, Value};

use super::{dimension, trial_seed, ExperimentReport, Verdict};
use crate::error::{Error, Result};
use crate::network::{Architecture, Network};
use crate::sampling::{self, PARAM_BOUND};
use crate::scalar::{Rational, Scalar};

const PERTURBATIONS: usize = 20;

/// Nearest multiple of `2^-20`, so perturbed parameters stay short rationals.
fn dyadic(r: f64) -> Rational {
    Rational::from_ratio((r * f64::from(1 << 20)).round() as i64, 1 << 20)
}

/// Minimum dimension over `PERTURBATIONS` random perturbations of `net` at
/// each radius. Perturbations without smooth points are skipped.
pub fn semicontinuity_at(net: &Network<Rational>, radii: &[f64], seed: u64) -> Result<Value> {
    let base = dimension(net, seed)?;
    let mut per_radius = Vec::new();
    for (k, &r) in radii.iter().enumerate() {
        let radius = dyadic(r);
        let mut min: Option<usize> = None;
        for t in 0..PERTURBATIONS {
            let mut rng = sampling::rng_for(trial_seed(seed, k), t as u64);
            let p = sampling::perturb(net, &radius, &mut rng);
            match dimension(&p, seed) {
                Ok(d) => min = Some(min.map_or(d, |m| m.min(d))),
                Err(Error::NonOrdinarySuspected(_)) => {}
                Err(e) => return Err(e),
            }
        }
        per_radius.push(json!({ "radius": r, "min_dim": min }));
    }
    let holds = per_radius.last().is_none_or(|v| v["min_dim"].as_u64().is_none_or(|m| m as usize >= base));
    Ok(json!({ "base_dim": base, "radii": per_radius, "holds_at_smallest_radius": holds }))
}

/// Lower semicontinuity of the functional dimension: for random base
/// parameters, nearby parameters at the smallest radius should not have
/// smaller dimension. Passes when at least 99% of base points comply.
pub fn semicontinuity_probe(arch: &Architecture, trials: usize, radii: &[f64], seed: u64) -> Result<ExperimentReport> {
    if radii.windows(2).any(|w| w[0] <= w[1]) || radii.iter().any(|&r| !(r > 0.0)) {
        return Err(Error::InvalidArgument("radii must be positive and strictly decreasing".into()));
    }
    let records: Vec<Value> = (0..trials)
        .into_par_iter()
        .map(|t| -> Result<Value> {
            let mut rng = sampling::rng_for(seed, t as u64);
            let net = sampling::random_dyadic_network::<Rational>(arch, PARAM_BOUND, &mut rng);
            match semicontinuity_at(&net, radii, trial_seed(seed, t)) {
                Ok(mut v) => {
                    v["trial"] = json!(t);
                    Ok(v)
                }
                Err(Error::NonOrdinarySuspected(_)) => Ok(json!({ "trial": t, "skipped": "no smooth point" })),
                Err(e) => Err(e),
            }
        })
        .collect::<Result<_>>()?;
    let evaluated: Vec<&Value> = records.iter().filter(|r| r.get("base_dim").is_some()).collect();
    let exceptions: Vec<u64> = evaluated
        .iter()
        .filter(|r| r["holds_at_smallest_radius"] == false)
        .map(|r| r["trial"].as_u64().unwrap_or_default())
        .collect();
    let evaluated = evaluated.len();
    let rate = if evaluated == 0 { 1.0 } else { 1.0 - exceptions.len() as f64 / evaluated as f64 };
    Ok(ExperimentReport {
        name: "semicontinuity".into(),
        seed,
        config: json!({ "arch": arch.widths(), "trials": trials, "radii": radii, "perturbations": PERTURBATIONS }),
        records,
        summary: json!({ "evaluated": evaluated, "exceptions": exceptions, "compliance": rate }),
        verdict: if rate >= 0.99 { Verdict::Confirmed } else { Verdict::Failed },
    })
}

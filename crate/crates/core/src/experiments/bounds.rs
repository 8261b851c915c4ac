use rayon::prelude::*;
use serde_json::json;

use super::{check_upper_bound, trial_seed, ExperimentReport, Verdict};
use crate::error::{Error, Result};
use crate::funcdim::{functional_dim, upper_bound, Strategy};
use crate::network::Architecture;
use crate::sampling::{self, PARAM_BOUND};
use crate::scalar::Rational;

/// Random-saturation dimension of each trial's dyadic parameter, or `None`
/// when no smooth point was found.
fn sampled_dims(arch: &Architecture, trials: usize, seed: u64) -> Result<Vec<Option<usize>>> {
    (0..trials)
        .into_par_iter()
        .map(|t| {
            let mut rng = sampling::rng_for(seed, t as u64);
            let net = sampling::random_dyadic_network::<Rational>(arch, PARAM_BOUND, &mut rng);
            match functional_dim(&net, Strategy::saturation(trial_seed(seed, t)), false) {
                Ok(r) => {
                    check_upper_bound(arch, r.value)?;
                    Ok(Some(r.value))
                }
                Err(Error::NonOrdinarySuspected(_)) => Ok(None),
                Err(e) => Err(e),
            }
        })
        .collect()
}

/// Random search for a parameter of a strictly narrowing architecture whose
/// functional dimension attains the upper bound. Not reaching it is reported
/// as inconclusive.
pub fn tightness_search(arch: &Architecture, trials: usize, seed: u64) -> Result<ExperimentReport> {
    if !arch.is_narrowing() {
        return Err(Error::InvalidArchitecture(format!("{arch} is not strictly narrowing")));
    }
    let dims = sampled_dims(arch, trials, seed)?;
    let bound = upper_bound(arch);
    let max = dims.iter().flatten().copied().max();
    let witness = dims.iter().position(|d| *d == Some(bound));
    let non_ordinary = dims.iter().filter(|d| d.is_none()).count();
    Ok(ExperimentReport {
        name: "tightness".into(),
        seed,
        config: json!({ "arch": arch.widths(), "trials": trials, "strategy": "random_saturation" }),
        records: dims.iter().enumerate().map(|(t, d)| json!({ "trial": t, "dim": d })).collect(),
        summary: json!({
            "max": max,
            "bound": bound,
            "param_dim": arch.param_dim(),
            "witness_trial": witness,
            "no_smooth_point": non_ordinary,
        }),
        verdict: if witness.is_some() { Verdict::Attained } else { Verdict::Inconclusive },
    })
}

/// Random dyadic parameters of any architecture, checking that no computed
/// dimension exceeds the upper bound.
pub fn upper_bound_sweep(arch: &Architecture, trials: usize, seed: u64) -> Result<ExperimentReport> {
    let dims = sampled_dims(arch, trials, seed)?;
    let bound = upper_bound(arch);
    let computed = dims.iter().flatten().count();
    let mut histogram = vec![0usize; arch.param_dim() + 1];
    for d in dims.iter().flatten() {
        histogram[*d] += 1;
    }
    Ok(ExperimentReport {
        name: "upper-bound".into(),
        seed,
        config: json!({ "arch": arch.widths(), "trials": trials, "strategy": "random_saturation" }),
        records: dims.iter().enumerate().map(|(t, d)| json!({ "trial": t, "dim": d })).collect(),
        summary: json!({
            "bound": bound,
            "computed": computed,
            "no_smooth_point": trials - computed,
            "max": dims.iter().flatten().max(),
            "histogram": histogram,
            "violations": 0,
        }),
        verdict: Verdict::Confirmed,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn depth_one_reaches_full_dimension() {
        let arch = Architecture::new(vec![2, 1]).unwrap();
        let r = tightness_search(&arch, 20, 0).unwrap();
        assert_eq!(r.summary["max"], 3);
        assert_eq!(r.verdict, Verdict::Attained);
    }

    #[test]
    fn non_narrowing_rejected() {
        let arch = Architecture::new(vec![1, 2, 1]).unwrap();
        assert!(matches!(tightness_search(&arch, 1, 0), Err(Error::InvalidArchitecture(_))));
    }

    #[test]
    fn reproducible() {
        let arch = Architecture::new(vec![3, 2, 1]).unwrap();
        let a = tightness_search(&arch, 8, 5).unwrap();
        let b = tightness_search(&arch, 8, 5).unwrap();
        assert_eq!(a.to_json_string(), b.to_json_string());
    }

    #[test]
    fn sweep_within_bound() {
        let arch = Architecture::new(vec![1, 2, 1]).unwrap();
        let r = upper_bound_sweep(&arch, 30, 1).unwrap();
        assert!(r.summary["max"].as_u64().unwrap() <= 5);
    }
}

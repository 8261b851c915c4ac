//! Seeded random draws shared by the search routines and experiments.
//!
//! Every trial gets its own ChaCha stream derived from `(seed, stream)`, so
//! results do not depend on scheduling.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::network::{Architecture, Network};
use crate::scalar::{Scalar, ScalarMode};

/// Denominator of the dyadic grid used for random rational parameters.
pub const PARAM_DENOM: i64 = 64;
/// Denominator of the rational input grid on `[-10, 10]^{n_0}`.
pub const INPUT_DENOM: i64 = 16;
pub const INPUT_RADIUS: i64 = 10;
/// Default half-width of the box for random rational parameters.
pub const PARAM_BOUND: i64 = 2;

pub fn rng_for(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

/// Uniform on the grid `{k / den : lo <= k / den <= hi}`.
pub fn grid_value<S: Scalar>(rng: &mut impl Rng, lo: i64, hi: i64, den: i64) -> S {
    S::from_ratio(rng.random_range(lo * den..=hi * den), den)
}

/// Parameter with entries uniform on the dyadic grid of `[-bound, bound]`
/// with step `1/64`.
pub fn random_dyadic_network<S: Scalar>(arch: &Architecture, bound: i64, rng: &mut impl Rng) -> Network<S> {
    let params = (0..arch.param_dim())
        .map(|_| grid_value(rng, -bound, bound, PARAM_DENOM))
        .collect();
    Network::from_flat(arch.clone(), params).expect("length matches")
}

/// Parameter with entries i.i.d. uniform on `[-1, 1]` (float).
pub fn random_uniform_network(arch: &Architecture, rng: &mut impl Rng) -> Network<f64> {
    let params = (0..arch.param_dim()).map(|_| rng.random_range(-1.0..=1.0)).collect();
    Network::from_flat(arch.clone(), params).expect("length matches")
}

/// Random input: uniform on the rational grid of `[-10, 10]^{n_0}` in exact
/// mode, standard Gaussian in float mode. `positive` restricts to the open
/// positive orthant.
pub fn random_input<S: Scalar>(n0: usize, positive: bool, rng: &mut impl Rng) -> Vec<S> {
    (0..n0)
        .map(|_| match S::MODE {
            ScalarMode::Rational => {
                let lo = if positive { 1 } else { -INPUT_RADIUS * INPUT_DENOM };
                S::from_ratio(rng.random_range(lo..=INPUT_RADIUS * INPUT_DENOM), INPUT_DENOM)
            }
            ScalarMode::Float => {
                let v: f64 = rng.sample(StandardNormal);
                S::from_f64(if positive { v.abs().max(f64::MIN_POSITIVE) } else { v })
            }
        })
        .collect()
}

/// Adds independent perturbations of magnitude at most `radius` to every
/// parameter, drawn on a `2^-16` grid of `[-1, 1]` and scaled.
pub fn perturb<S: Scalar>(net: &Network<S>, radius: &S, rng: &mut impl Rng) -> Network<S> {
    let params = net
        .flatten()
        .into_iter()
        .map(|v| {
            let u: S = grid_value(rng, -1, 1, 1 << 16);
            v + u * radius.clone()
        })
        .collect();
    net.with_params(params).expect("length matches")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::Rational;

    #[test]
    fn streams_are_reproducible_and_distinct() {
        let a: Vec<u32> = (0..4).map(|_| rng_for(7, 3).random()).collect();
        let b: Vec<u32> = (0..4).map(|_| rng_for(7, 3).random()).collect();
        assert_eq!(a, b);
        assert_ne!(rng_for(7, 3).random::<u64>(), rng_for(7, 4).random::<u64>());
    }

    #[test]
    fn dyadic_entries_in_range() {
        let arch = Architecture::new(vec![2, 3, 1]).unwrap();
        let net: Network<Rational> = random_dyadic_network(&arch, 2, &mut rng_for(0, 0));
        for v in net.flatten() {
            assert!(v >= Rational::from_ratio(-2, 1) && v <= Rational::from_ratio(2, 1));
            assert!((v.clone() * Rational::from_ratio(64, 1)).is_integer());
        }
    }

    #[test]
    fn positive_inputs() {
        let mut rng = rng_for(1, 0);
        for _ in 0..100 {
            assert!(random_input::<Rational>(3, true, &mut rng).iter().all(|v| *v > Rational::from_ratio(0, 1)));
            assert!(random_input::<f64>(3, true, &mut rng).iter().all(|v| *v > 0.0));
        }
    }
}

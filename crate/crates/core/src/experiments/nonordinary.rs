use serde::Serialize;
use serde_json::json;

use super::{ExperimentReport, Verdict};
use crate::error::Result;
use crate::network::Network;
use crate::scalar::{q, Rational};

/// One-sided difference quotients of `ρ(s)(x)` in one parameter.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct OneSided {
    pub x: String,
    pub param: usize,
    pub right: String,
    pub left: String,
    pub agree: bool,
}

/// `(ρ(s ± ε e_j)(x) - ρ(s)(x)) / ±ε` for a small exact `ε`. On a piecewise
/// linear function these equal the one-sided derivatives once `ε` is below
/// the distance to the nearest kink.
pub fn one_sided_quotients(net: &Network<Rational>, x: &Rational, param: usize) -> Result<OneSided> {
    let eps = q(1, 1 << 20);
    let base = net.output(std::slice::from_ref(x))?[0].clone();
    let shifted = |delta: Rational| -> Result<Rational> {
        let mut p = net.flatten();
        p[param] += delta;
        Ok(net.with_params(p)?.output(std::slice::from_ref(x))?[0].clone())
    };
    let right = (shifted(eps.clone())? - base.clone()) / eps.clone();
    let left = (base - shifted(-eps.clone())?) / eps;
    Ok(OneSided { x: x.to_string(), param, agree: right == left, right: right.to_string(), left: left.to_string() })
}

/// `σ(a x + b)` at `(a, b) = (0, 0)` has no parametrically smooth point:
/// the derivative in `a` fails to exist for `x != 0` and the derivative in
/// `b` fails at `x = 0`. The control parameter `(1, 1)` is smooth at `x = 1`.
pub fn nonordinary_demo() -> Result<ExperimentReport> {
    let s = Network::<Rational>::from_ints(&[1, 1], &[0, 0])?;
    let control = Network::<Rational>::from_ints(&[1, 1], &[1, 1])?;
    let mut records = Vec::new();
    let mut all_disagree = true;
    for x in [-2, -1, 1, 2, 0] {
        let param = if x == 0 { 1 } else { 0 };
        let r = one_sided_quotients(&s, &q(x, 1), param)?;
        all_disagree &= !r.agree;
        records.push(json!({ "parameter": "(0,0)", "quotients": r }));
    }
    let mut control_agrees = true;
    for param in 0..2 {
        let r = one_sided_quotients(&control, &q(1, 1), param)?;
        control_agrees &= r.agree;
        records.push(json!({ "parameter": "(1,1)", "quotients": r }));
    }
    Ok(ExperimentReport {
        name: "nonordinary".into(),
        seed: 0,
        config: json!({ "arch": [1, 1], "points": [-2, -1, 1, 2, 0], "eps": "1/1048576" }),
        records,
        summary: json!({ "all_disagree": all_disagree, "control_agrees": control_agrees }),
        verdict: if all_disagree && control_agrees { Verdict::Confirmed } else { Verdict::Failed },
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn hand_values() {
        let s = Network::<Rational>::from_ints(&[1, 1], &[0, 0]).unwrap();
        let r = one_sided_quotients(&s, &q(1, 1), 0).unwrap();
        assert_eq!((r.right.as_str(), r.left.as_str()), ("1", "0"));
        let r = one_sided_quotients(&s, &q(-2, 1), 0).unwrap();
        assert_eq!((r.right.as_str(), r.left.as_str()), ("0", "-2"));
        let r = one_sided_quotients(&s, &q(0, 1), 1).unwrap();
        assert_eq!((r.right.as_str(), r.left.as_str()), ("1", "0"));
    }

    #[test]
    fn demo_passes() {
        assert_eq!(nonordinary_demo().unwrap().verdict, Verdict::Confirmed);
    }
}

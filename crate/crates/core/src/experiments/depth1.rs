use serde_json::json;

use super::{check_upper_bound, ExperimentReport, Verdict};
use crate::error::{Error, Result};
use crate::funcdim::batch_dim;
use crate::network::{Architecture, Network};
use crate::pwl_complex::{decisive_set, discover_regions, DecisiveSource};
use crate::scalar::{Rational, Scalar};

const BOX: i64 = 4;
const SAMPLES_PER_NEURON: usize = 4000;

/// Depth-one parameter in `(n1, n2)` whose rows are outward facet
/// hyperplanes of a polytope: the standard simplex when `n2 <= n1 + 1`,
/// the cube `[-1, 1]^{n1}` when `n2 <= 2 n1`.
pub fn depth1_network(n1: usize, n2: usize) -> Result<Network<Rational>> {
    if n1 == 0 || n2 == 0 {
        return Err(Error::InvalidArchitecture(format!("({n1},{n2}) needs positive widths")));
    }
    let mut rows: Vec<Vec<i64>> = Vec::new();
    if n2 <= n1 + 1 {
        for i in 0..n1 {
            let mut r = vec![0; n1 + 1];
            r[i] = -1;
            rows.push(r);
        }
        let mut r = vec![1; n1 + 1];
        r[n1] = -1;
        rows.push(r);
    } else if n2 <= 2 * n1 {
        for i in 0..n1 {
            let mut up = vec![0; n1 + 1];
            up[i] = 1;
            up[n1] = -1;
            let mut down = vec![0; n1 + 1];
            down[i] = -1;
            down[n1] = -1;
            rows.push(up);
            rows.push(down);
        }
    } else {
        return Err(Error::InvalidArgument(format!(
            "{n2} facets needed, the simplex and cube in R^{n1} have at most {}",
            (n1 + 1).max(2 * n1)
        )));
    }
    let params: Vec<i64> = rows.into_iter().take(n2).flatten().collect();
    Network::from_ints(&[n1, n2], &params)
}

/// Builds [`depth1_network`] and computes its dimension from sampled
/// activation regions; expected `n2 (n1 + 1)`.
pub fn depth1_witness(n1: usize, n2: usize, seed: u64) -> Result<(Network<Rational>, ExperimentReport)> {
    let net = depth1_network(n1, n2)?;
    let bounds = vec![(Rational::from_ratio(-BOX, 1), Rational::from_ratio(BOX, 1)); n1];
    let atlas = discover_regions(&net, &bounds, SAMPLES_PER_NEURON * n2, seed)?.complete();
    let decisive = decisive_set(&net, DecisiveSource::Atlas(&atlas))?;
    let dim = batch_dim(&net, &decisive.batch)?.value;
    check_upper_bound(net.arch(), dim)?;
    let d = Architecture::new(vec![n1, n2])?.param_dim();
    let report = ExperimentReport {
        name: "depth1".into(),
        seed,
        config: json!({ "arch": [n1, n2], "box": BOX, "samples": SAMPLES_PER_NEURON * n2 }),
        records: atlas
            .regions
            .iter()
            .map(|(l, reps)| json!({ "label": l, "representatives": reps.len() }))
            .collect(),
        summary: json!({ "dim": dim, "param_dim": d, "regions": atlas.regions.len() }),
        verdict: if dim == d { Verdict::Confirmed } else { Verdict::Failed },
    };
    Ok((net, report))
}

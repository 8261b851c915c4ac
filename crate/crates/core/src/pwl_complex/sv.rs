//! Slopes-and-values data and wall recovery from evaluations.

use crate::error::{Error, Result};
use crate::funcdim::{Batch, Certification, RankReport};
use crate::linalg::{self, FloatMatrix, Matrix, DEFAULT_RANK_TOL};
use crate::network::{Network, TernaryLabel};
use crate::scalar::{Backend, Scalar};

use super::{complex_1d, Complex1D, RegionAtlas};

/// Value and input-Jacobian of the network at one point of a top cell.
#[derive(Clone, Debug, PartialEq)]
pub struct SvCell<S> {
    pub label: TernaryLabel,
    pub point: Vec<S>,
    pub value: Vec<S>,
    /// `n_m × n_0`.
    pub jacobian_x: Matrix<S>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct SlopesValues<S> {
    pub cells: Vec<SvCell<S>>,
}

impl<S: Scalar> SlopesValues<S> {
    /// Per cell: the value, then the x-Jacobian row-major.
    pub fn flat(&self) -> Vec<S> {
        self.cells
            .iter()
            .flat_map(|c| c.value.iter().cloned().chain(c.jacobian_x.data().iter().cloned()))
            .collect()
    }
}

/// Product of masked linear parts `W^m_θ ⋯ W^1_θ`: the input-Jacobian on the
/// region with label `θ`.
fn region_jacobian<S: Scalar>(net: &Network<S>, label: &TernaryLabel) -> Result<Matrix<S>> {
    let masked = net.masked_affine(label)?;
    let n0 = net.arch().input_dim();
    let linear = |m: &Matrix<S>| {
        let rows = m.iter_rows().map(|r| r[..r.len() - 1].to_vec()).collect();
        Matrix::from_rows(rows, m.cols() - 1).expect("uniform rows")
    };
    let mut acc = Matrix::identity(n0);
    for m in &masked {
        acc = linear(&m.masked).matmul(&acc)?;
    }
    Ok(acc)
}

pub enum SvSource<'a, S> {
    Complex(&'a Complex1D<S>),
    Atlas(&'a RegionAtlas<S>),
}

/// Slopes-and-values record over the top cells with zero-free labels, one
/// representative per cell.
pub fn sv_map<S: Scalar>(net: &Network<S>, source: SvSource<'_, S>) -> Result<SlopesValues<S>> {
    let mut cells = Vec::new();
    match source {
        SvSource::Complex(c) => {
            for cell in c.intervals.iter().filter(|c| !c.label.has_zero()) {
                let jac = Matrix::new(cell.slope.len(), 1, cell.slope.clone())?;
                cells.push(SvCell {
                    label: cell.label.clone(),
                    point: vec![cell.representative.clone()],
                    value: cell.value.clone(),
                    jacobian_x: jac,
                });
            }
        }
        SvSource::Atlas(a) => {
            for (label, reps) in &a.regions {
                let point = reps
                    .first()
                    .ok_or_else(|| Error::InsufficientRepresentatives(format!("region {label} is empty")))?;
                cells.push(SvCell {
                    label: label.clone(),
                    point: point.clone(),
                    value: net.output(point)?,
                    jacobian_x: region_jacobian(net, label)?,
                });
            }
        }
    }
    Ok(SlopesValues { cells })
}

/// Numeric rank of the parameter-Jacobian of the slopes-and-values map.
pub fn sv_rank(net: &Network<f64>, h: f64) -> Result<RankReport<f64>> {
    sv_rank_with(net, h, DEFAULT_RANK_TOL)
}

/// As [`sv_rank`] with an explicit relative rank tolerance.
///
/// Each parameter is perturbed by `±h`; representatives stay fixed and must
/// keep their cell label, and the sequence of cell labels must not change,
/// otherwise [`Error::CombinatorialInstability`] is returned.
pub fn sv_rank_with(net: &Network<f64>, h: f64, tol: f64) -> Result<RankReport<f64>> {
    if !(h > 0.0) {
        return Err(Error::InvalidArgument(format!("step must be positive, got {h}")));
    }
    let base = complex_1d(net)?;
    let reps: Vec<(usize, f64)> = base
        .intervals
        .iter()
        .enumerate()
        .filter(|(_, c)| !c.label.has_zero())
        .map(|(i, c)| (i, c.representative))
        .collect();
    let base_labels = base.interval_labels();
    let params = net.flatten();
    let nm = net.arch().output_dim();
    let width = reps.len() * 2 * nm;
    let mut jac = FloatMatrix::zeros(width, params.len());
    let sv_at = |p: &Network<f64>| -> Result<Vec<f64>> {
        let c = complex_1d(p)?;
        if c.interval_labels() != base_labels {
            return Err(Error::CombinatorialInstability(format!(
                "{} cells before, {} after a step of {h}",
                base_labels.len(),
                c.intervals.len()
            )));
        }
        let mut out = Vec::with_capacity(width);
        for &(i, z) in &reps {
            let trace = p.forward(&[z])?;
            if trace.label != base.intervals[i].label {
                return Err(Error::CombinatorialInstability(format!("representative {z} left cell {i}")));
            }
            out.extend_from_slice(trace.output());
            out.extend_from_slice(&c.intervals[i].slope);
        }
        Ok(out)
    };
    for j in 0..params.len() {
        let mut plus = params.clone();
        plus[j] += h;
        let mut minus = params.clone();
        minus[j] -= h;
        let fp = sv_at(&net.with_params(plus)?)?;
        let fm = sv_at(&net.with_params(minus)?)?;
        for r in 0..width {
            jac.set(r, j, (fp[r] - fm[r]) / (2.0 * h));
        }
    }
    Ok(RankReport {
        value: linalg::rank_numeric(&jac, tol)?,
        backend: Backend::Numeric,
        tol: Some(tol),
        witness_batch: Batch::from_scalars(reps.iter().map(|&(_, z)| z)),
        saturated: None,
        certification: Certification::Batch,
        notes: Vec::new(),
    })
}

/// Points of one top cell with the network values there.
#[derive(Clone, Debug, PartialEq)]
pub struct CellSample<S> {
    pub points: Vec<Vec<S>>,
    pub values: Vec<Vec<S>>,
}

impl<S: Scalar> CellSample<S> {
    pub fn evaluate(net: &Network<S>, points: Vec<Vec<S>>) -> Result<Self> {
        let values = points.iter().map(|p| net.output(p)).collect::<Result<_>>()?;
        Ok(Self { points, values })
    }

    /// Affine map `x ↦ J x + c` interpolating the samples: `(J, c)` with
    /// `J` of shape `n_m × n_0`.
    pub fn affine_fit(&self, tol: f64) -> Result<(Matrix<S>, Vec<S>)> {
        let n0 = self.points.first().map_or(0, Vec::len);
        if self.points.len() < n0 + 1 {
            return Err(Error::InsufficientRepresentatives(format!(
                "{} points cannot pin an affine map on R^{n0}",
                self.points.len()
            )));
        }
        let rows = self.points[..=n0]
            .iter()
            .map(|p| p.iter().cloned().chain(std::iter::once(S::one())).collect())
            .collect();
        let a = Matrix::from_rows(rows, n0 + 1)?;
        let nm = self.values[0].len();
        let mut jac = Matrix::zeros(nm, n0);
        let mut c = Vec::with_capacity(nm);
        for r in 0..nm {
            let rhs: Vec<S> = self.values[..=n0].iter().map(|v| v[r].clone()).collect();
            let coef = linalg::solve(&a, &rhs, tol)?.ok_or_else(|| {
                Error::InsufficientRepresentatives("sample points are not affinely independent".into())
            })?;
            for k in 0..n0 {
                jac.set(r, k, coef[k].clone());
            }
            c.push(coef[n0].clone());
        }
        Ok((jac, c))
    }
}

/// `normal · x + offset = 0`, scaled so the first nonzero normal entry is 1.
#[derive(Clone, Debug, PartialEq)]
pub struct AffineEquation<S> {
    pub normal: Vec<S>,
    pub offset: S,
}

impl<S: Scalar> AffineEquation<S> {
    pub fn evaluate(&self, x: &[S]) -> S {
        linalg::dot(&self.normal, x) + self.offset.clone()
    }
}

/// Recovers the wall between two adjacent top cells from evaluations on
/// their decisive sets: the solution set of `(J_X - J_Y) x + (c_X - c_Y) = 0`.
/// For vector outputs the first output whose Jacobians differ is used.
pub fn detect_hyperplane<S: Scalar>(cell_x: &CellSample<S>, cell_y: &CellSample<S>) -> Result<AffineEquation<S>> {
    const TOL: f64 = 1e-9;
    let (jx, cx) = cell_x.affine_fit(TOL)?;
    let (jy, cy) = cell_y.affine_fit(TOL)?;
    if jx.rows() != jy.rows() || jx.cols() != jy.cols() {
        return Err(Error::DimensionMismatch("cell samples of different shapes".into()));
    }
    for r in 0..jx.rows() {
        let normal: Vec<S> = jx.row(r).iter().zip(jy.row(r)).map(|(a, b)| a.clone() - b.clone()).collect();
        let Some(lead) = normal.iter().find(|v| !v.approx_eq(&S::zero(), TOL)).cloned() else {
            continue;
        };
        return Ok(AffineEquation {
            normal: normal.into_iter().map(|v| v / lead.clone()).collect(),
            offset: (cx[r].clone() - cy[r].clone()) / lead,
        });
    }
    Err(Error::NoDetectableWall)
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::Zero;
    use crate::pwl_complex::{decisive_set, DecisiveSource};
    use crate::scalar::{q, Rational};

    fn s0() -> Network<Rational> {
        Network::from_ints(&[1, 2, 1], &[2, -5, -1, 4, 1, 1, 1]).unwrap()
    }

    #[test]
    fn s0_slopes_and_values() {
        let n = s0();
        let c = complex_1d(&n).unwrap();
        let sv = sv_map(&n, SvSource::Complex(&c)).unwrap();
        assert_eq!(sv.cells.len(), 3);
        assert_eq!(sv.cells[0].jacobian_x.data(), &[q(-1, 1)]);
        assert_eq!(sv.cells[1].jacobian_x.data(), &[q(1, 1)]);
        // Middle cell is x ↦ x.
        assert_eq!(n.output(&[q(3, 1)]).unwrap(), vec![q(3, 1)]);
        assert_eq!(sv.cells[1].value, c.intervals[1].eval(&c.intervals[1].representative));
        assert_eq!(sv.flat().len(), 3 * 2);
    }

    #[test]
    fn atlas_slopes_use_masked_product() {
        let n = s0();
        let atlas = crate::pwl_complex::discover_regions(&n, &[(q(-10, 1), q(10, 1))], 200, 1).unwrap();
        let sv = sv_map(&n, SvSource::Atlas(&atlas)).unwrap();
        let mut slopes: Vec<Rational> = sv.cells.iter().map(|c| c.jacobian_x.data()[0].clone()).collect();
        slopes.sort();
        assert_eq!(slopes, vec![q(-1, 1), q(1, 1), q(2, 1)]);
    }

    #[test]
    fn constant_net_has_zero_slopes() {
        let n = Network::<Rational>::from_ints(&[1, 1], &[0, 2]).unwrap();
        let c = complex_1d(&n).unwrap();
        let sv = sv_map(&n, SvSource::Complex(&c)).unwrap();
        assert!(sv.cells.iter().all(|c| c.jacobian_x.is_zero()));
    }

    #[test]
    fn s0_sv_rank_is_five() {
        assert_eq!(sv_rank(&s0().to_float(), 1e-5).unwrap().value, 5);
    }

    #[test]
    fn dead_output_sv_rank_zero() {
        let n = Network::<f64>::from_ints(&[1, 1, 1], &[1, 0, -1, -1]).unwrap();
        assert_eq!(sv_rank(&n, 1e-5).unwrap().value, 0);
    }

    #[test]
    fn far_wall_is_unstable() {
        // A weight perturbation of σ(0·x - 1) creates a wall at 1/δ.
        let n = Network::<f64>::from_ints(&[1, 1], &[0, -1]).unwrap();
        assert!(matches!(sv_rank(&n, 1e-5), Err(Error::CombinatorialInstability(_))));
    }

    #[test]
    fn walls_of_s0() {
        let n = s0();
        let c = complex_1d(&n).unwrap();
        let d = decisive_set(&n, DecisiveSource::Complex(&c)).unwrap();
        let sample = |cell: usize| {
            let pts: Vec<Vec<Rational>> = d
                .batch
                .points()
                .iter()
                .zip(&d.cell_of_point)
                .filter(|(_, &k)| k == cell)
                .map(|(p, _)| p.clone())
                .collect();
            CellSample::evaluate(&n, pts).unwrap()
        };
        let left_mid = detect_hyperplane(&sample(0), &sample(1)).unwrap();
        assert_eq!(left_mid.normal, vec![q(1, 1)]);
        assert_eq!(left_mid.offset, q(-5, 2));
        let mid_right = detect_hyperplane(&sample(1), &sample(2)).unwrap();
        assert_eq!(mid_right.offset, q(-4, 1));
        assert!(mid_right.evaluate(&[q(4, 1)]).is_zero());
        assert!(matches!(detect_hyperplane(&sample(1), &sample(1)), Err(Error::NoDetectableWall)));
    }
}

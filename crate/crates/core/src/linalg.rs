//! Dense linear algebra over the two scalar backends.
//!
//! The exact backend ranks matrices by rational Gaussian elimination; the
//! numeric backend counts singular values above `tol * max(rows, cols) * σ_max`.

use nalgebra::DMatrix;

use crate::error::{Error, Result};
use crate::scalar::{Rational, Scalar};

/// Default relative cutoff for numeric rank.
pub const DEFAULT_RANK_TOL: f64 = 1e-9;

/// Row-major dense matrix.
#[derive(Clone, Debug, PartialEq)]
pub struct Matrix<S> {
    rows: usize,
    cols: usize,
    data: Vec<S>,
}

pub type RationalMatrix = Matrix<Rational>;
pub type FloatMatrix = Matrix<f64>;

impl<S: Scalar> Matrix<S> {
    pub fn new(rows: usize, cols: usize, data: Vec<S>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(Error::DimensionMismatch(format!(
                "{} entries for a {rows}x{cols} matrix",
                data.len()
            )));
        }
        if let Some(i) = data.iter().position(|v| !v.is_finite()) {
            return Err(Error::NonFinite { row: i / cols.max(1), col: i % cols.max(1) });
        }
        Ok(Self { rows, cols, data })
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self { rows, cols, data: vec![S::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.data[i * n + i] = S::one();
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<S>>, cols: usize) -> Result<Self> {
        let n = rows.len();
        let mut data = Vec::with_capacity(n * cols);
        for (i, r) in rows.into_iter().enumerate() {
            if r.len() != cols {
                return Err(Error::DimensionMismatch(format!("row {i} has {} entries, expected {cols}", r.len())));
            }
            data.extend(r);
        }
        Self::new(n, cols, data)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn data(&self) -> &[S] {
        &self.data
    }

    pub fn get(&self, r: usize, c: usize) -> &S {
        &self.data[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: S) {
        self.data[r * self.cols + c] = v;
    }

    pub fn row(&self, r: usize) -> &[S] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn row_mut(&mut self, r: usize) -> &mut [S] {
        &mut self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn col(&self, c: usize) -> Vec<S> {
        (0..self.rows).map(|r| self.get(r, c).clone()).collect()
    }

    pub fn iter_rows(&self) -> impl Iterator<Item = &[S]> {
        (0..self.rows).map(move |r| self.row(r))
    }

    pub fn transpose(&self) -> Self {
        let mut data = Vec::with_capacity(self.data.len());
        for c in 0..self.cols {
            for r in 0..self.rows {
                data.push(self.get(r, c).clone());
            }
        }
        Self { rows: self.cols, cols: self.rows, data }
    }

    pub fn matmul(&self, other: &Self) -> Result<Self> {
        if self.cols != other.rows {
            return Err(Error::DimensionMismatch(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = other.get(k, j);
                    if b.is_zero() {
                        continue;
                    }
                    let v = out.get(i, j).clone() + a.clone() * b.clone();
                    out.set(i, j, v);
                }
            }
        }
        Ok(out)
    }

    pub fn mul_vec(&self, v: &[S]) -> Result<Vec<S>> {
        if v.len() != self.cols {
            return Err(Error::DimensionMismatch(format!(
                "vector of length {} against {} columns",
                v.len(),
                self.cols
            )));
        }
        Ok(self.iter_rows().map(|r| dot(r, v)).collect())
    }

    /// `M Mᵀ`.
    pub fn gram(&self) -> Self {
        let mut out = Self::zeros(self.rows, self.rows);
        for i in 0..self.rows {
            for j in i..self.rows {
                let v = dot(self.row(i), self.row(j));
                out.set(j, i, v.clone());
                out.set(i, j, v);
            }
        }
        out
    }

    pub fn push_row(&mut self, row: &[S]) -> Result<()> {
        if self.rows == 0 && self.cols == 0 {
            self.cols = row.len();
        }
        if row.len() != self.cols {
            return Err(Error::DimensionMismatch(format!(
                "row of length {} appended to a matrix with {} columns",
                row.len(),
                self.cols
            )));
        }
        if let Some(c) = row.iter().position(|v| !v.is_finite()) {
            return Err(Error::NonFinite { row: self.rows, col: c });
        }
        self.data.extend_from_slice(row);
        self.rows += 1;
        Ok(())
    }

    pub fn vstack(&self, other: &Self) -> Result<Self> {
        let mut out = self.clone();
        for r in other.iter_rows() {
            out.push_row(r)?;
        }
        Ok(out)
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|v| v.is_zero())
    }

    pub fn map<T: Scalar>(&self, f: impl Fn(&S) -> T) -> Matrix<T> {
        Matrix { rows: self.rows, cols: self.cols, data: self.data.iter().map(f).collect() }
    }

    pub fn to_float(&self) -> FloatMatrix {
        self.map(|v| v.to_f64())
    }

    pub fn rank(&self, tol: f64) -> usize {
        S::rank(self, tol)
    }
}

pub fn dot<S: Scalar>(a: &[S], b: &[S]) -> S {
    a.iter()
        .zip(b)
        .filter(|(x, y)| !x.is_zero() && !y.is_zero())
        .fold(S::zero(), |acc, (x, y)| acc + x.clone() * y.clone())
}

/// Incremental row echelon basis over an exact field.
///
/// Each stored row has a leading 1 in its pivot column and zeros in the pivot
/// columns of every other stored row.
#[derive(Clone, Debug)]
pub struct EchelonBasis<S> {
    cols: usize,
    rows: Vec<Vec<S>>,
    pivots: Vec<usize>,
}

impl<S: Scalar> EchelonBasis<S> {
    pub fn new(cols: usize) -> Self {
        Self { cols, rows: Vec::new(), pivots: Vec::new() }
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    /// Reduces `v` against the basis, returning the remainder.
    pub fn reduce(&self, v: &[S]) -> Vec<S> {
        let mut v = v.to_vec();
        for (row, &p) in self.rows.iter().zip(&self.pivots) {
            if v[p].is_zero() {
                continue;
            }
            let f = v[p].clone();
            for (x, r) in v.iter_mut().zip(row).skip(p) {
                if !r.is_zero() {
                    *x = x.clone() - f.clone() * r.clone();
                }
            }
        }
        v
    }

    pub fn contains(&self, v: &[S]) -> bool {
        self.reduce(v).iter().all(|x| x.is_zero())
    }

    /// Adds `v` to the spanned space; returns whether the rank grew.
    pub fn insert(&mut self, v: &[S]) -> bool {
        assert_eq!(v.len(), self.cols, "row length must match basis width");
        let mut r = self.reduce(v);
        let Some(p) = r.iter().position(|x| !x.is_zero()) else {
            return false;
        };
        let inv = S::one() / r[p].clone();
        for x in r.iter_mut().skip(p) {
            if !x.is_zero() {
                *x = x.clone() * inv.clone();
            }
        }
        // Keep the basis fully reduced so `reduce` needs one pass.
        for row in &mut self.rows {
            if row[p].is_zero() {
                continue;
            }
            let f = row[p].clone();
            for (x, y) in row.iter_mut().zip(&r).skip(p) {
                if !y.is_zero() {
                    *x = x.clone() - f.clone() * y.clone();
                }
            }
        }
        self.rows.push(r);
        self.pivots.push(p);
        true
    }
}

/// Rank over the rationals.
pub fn rank_exact(m: &RationalMatrix) -> usize {
    // Eliminating along the shorter side keeps the basis small.
    let m = if m.rows() > m.cols() { m.transpose() } else { m.clone() };
    let mut basis = EchelonBasis::new(m.cols());
    for r in m.iter_rows() {
        basis.insert(r);
        if basis.rank() == m.cols() {
            break;
        }
    }
    basis.rank()
}

fn to_nalgebra(m: &FloatMatrix) -> DMatrix<f64> {
    DMatrix::from_row_slice(m.rows(), m.cols(), m.data())
}

pub fn singular_values(m: &FloatMatrix) -> Vec<f64> {
    if m.rows() == 0 || m.cols() == 0 {
        return Vec::new();
    }
    let mut sv: Vec<f64> = to_nalgebra(m).singular_values().iter().copied().collect();
    sv.sort_by(|a, b| b.total_cmp(a));
    sv
}

/// Count of singular values above `tol * max(rows, cols) * σ_max`.
pub fn rank_numeric(m: &FloatMatrix, tol: f64) -> Result<usize> {
    if !(tol > 0.0) {
        return Err(Error::InvalidArgument(format!("rank tolerance must be positive, got {tol}")));
    }
    if let Some(i) = m.data().iter().position(|v| !v.is_finite()) {
        return Err(Error::NonFinite { row: i / m.cols().max(1), col: i % m.cols().max(1) });
    }
    let sv = singular_values(m);
    let Some(&smax) = sv.first() else { return Ok(0) };
    if smax == 0.0 {
        return Ok(0);
    }
    let cutoff = tol * m.rows().max(m.cols()) as f64 * smax;
    Ok(sv.iter().filter(|&&s| s > cutoff).count())
}

/// Whether `v` lies in the row space of `m`, i.e. `rank([m; v]) == rank(m)`.
pub fn row_space_contains<S: Scalar>(m: &Matrix<S>, v: &[S], tol: f64) -> Result<bool> {
    if v.len() != m.cols() {
        return Err(Error::DimensionMismatch(format!(
            "vector of length {} against {} columns",
            v.len(),
            m.cols()
        )));
    }
    let mut stacked = m.clone();
    stacked.push_row(v)?;
    Ok(stacked.rank(tol) == m.rank(tol))
}

/// Determinant by exact elimination.
pub fn determinant(m: &RationalMatrix) -> Result<Rational> {
    use num_traits::{One, Zero};
    if m.rows() != m.cols() {
        return Err(Error::DimensionMismatch("determinant of a non-square matrix".into()));
    }
    let n = m.rows();
    let mut a = m.clone();
    let mut det = Rational::one();
    for c in 0..n {
        let Some(p) = (c..n).find(|&r| !a.get(r, c).is_zero()) else {
            return Ok(Rational::zero());
        };
        if p != c {
            for k in 0..n {
                let t = a.get(p, k).clone();
                a.set(p, k, a.get(c, k).clone());
                a.set(c, k, t);
            }
            det = -det;
        }
        let piv = a.get(c, c).clone();
        det *= piv.clone();
        for r in c + 1..n {
            if a.get(r, c).is_zero() {
                continue;
            }
            let f = a.get(r, c).clone() / piv.clone();
            for k in c..n {
                let v = a.get(r, k).clone() - f.clone() * a.get(c, k).clone();
                a.set(r, k, v);
            }
        }
    }
    Ok(det)
}

/// Solves the square system `a x = b` by elimination with largest-magnitude
/// pivots. `None` if `a` is singular (exactly, or below `tol` in float mode).
pub fn solve<S: Scalar>(a: &Matrix<S>, b: &[S], tol: f64) -> Result<Option<Vec<S>>> {
    let n = a.rows();
    if a.cols() != n || b.len() != n {
        return Err(Error::DimensionMismatch(format!(
            "system {}x{} with right-hand side of length {}",
            a.rows(),
            a.cols(),
            b.len()
        )));
    }
    let mut m: Vec<Vec<S>> = (0..n)
        .map(|r| {
            let mut row = a.row(r).to_vec();
            row.push(b[r].clone());
            row
        })
        .collect();
    for c in 0..n {
        let p = (c..n)
            .max_by(|&i, &j| m[i][c].abs().partial_cmp(&m[j][c].abs()).unwrap_or(std::cmp::Ordering::Equal))
            .expect("nonempty range");
        if m[p][c].approx_eq(&S::zero(), tol) {
            return Ok(None);
        }
        m.swap(p, c);
        let piv = m[c][c].clone();
        for r in 0..n {
            if r == c || m[r][c].is_zero() {
                continue;
            }
            let f = m[r][c].clone() / piv.clone();
            for k in c..=n {
                let v = m[r][k].clone() - f.clone() * m[c][k].clone();
                m[r][k] = v;
            }
        }
    }
    Ok(Some((0..n).map(|r| m[r][n].clone() / m[r][r].clone()).collect()))
}

/// Smallest eigenvalue of a symmetric matrix.
pub fn min_eigenvalue_symmetric(m: &FloatMatrix) -> Result<f64> {
    if m.rows() != m.cols() {
        return Err(Error::DimensionMismatch("eigenvalues of a non-square matrix".into()));
    }
    if m.rows() == 0 {
        return Ok(0.0);
    }
    let eig = to_nalgebra(m).symmetric_eigen();
    Ok(eig.eigenvalues.iter().copied().fold(f64::INFINITY, f64::min))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::q;

    fn qm(rows: &[&[i64]]) -> RationalMatrix {
        let cols = rows.first().map_or(0, |r| r.len());
        Matrix::from_rows(rows.iter().map(|r| r.iter().map(|&v| q(v, 1)).collect()).collect(), cols).unwrap()
    }

    #[test]
    fn exact_rank_examples() {
        assert_eq!(rank_exact(&Matrix::identity(2)), 2);
        assert_eq!(rank_exact(&RationalMatrix::zeros(3, 3)), 0);
        assert_eq!(rank_exact(&qm(&[&[1, 2], &[2, 4], &[3, 6]])), 1);
        assert_eq!(rank_exact(&RationalMatrix::zeros(0, 0)), 0);
    }

    #[test]
    fn numeric_rank_examples() {
        assert_eq!(rank_numeric(&FloatMatrix::identity(4), 1e-9).unwrap(), 4);
        let near = Matrix::new(2, 2, vec![1.0, 1.0, 1.0, 1.0 + 1e-15]).unwrap();
        assert_eq!(rank_numeric(&near, 1e-9).unwrap(), 1);
        assert_eq!(rank_numeric(&FloatMatrix::zeros(3, 2), 1e-9).unwrap(), 0);
        assert!(rank_numeric(&FloatMatrix::identity(2), 0.0).is_err());
    }

    #[test]
    fn nan_rejected() {
        assert!(matches!(Matrix::new(1, 2, vec![1.0, f64::NAN]), Err(Error::NonFinite { row: 0, col: 1 })));
        let mut m = FloatMatrix::zeros(0, 2);
        assert!(m.push_row(&[f64::INFINITY, 0.0]).is_err());
    }

    #[test]
    fn row_space_examples() {
        let m = qm(&[&[1, 0]]);
        assert!(row_space_contains(&m, &[q(2, 1), q(0, 1)], 0.0).unwrap());
        assert!(!row_space_contains(&m, &[q(0, 1), q(1, 1)], 0.0).unwrap());
        assert!(row_space_contains(&m, &[q(0, 1)], 0.0).is_err());
    }

    #[test]
    fn echelon_insert_tracks_rank() {
        let mut b = EchelonBasis::new(3);
        assert!(b.insert(&[q(1, 1), q(2, 1), q(0, 1)]));
        assert!(!b.insert(&[q(2, 1), q(4, 1), q(0, 1)]));
        assert!(b.insert(&[q(0, 1), q(1, 1), q(1, 1)]));
        assert!(b.contains(&[q(1, 1), q(3, 1), q(1, 1)]));
        assert!(!b.contains(&[q(0, 1), q(0, 1), q(1, 1)]));
        assert_eq!(b.rank(), 2);
    }

    #[test]
    fn solve_small_systems() {
        let a = qm(&[&[2, 1], &[1, 3]]);
        let x = solve(&a, &[q(3, 1), q(5, 1)], 0.0).unwrap().unwrap();
        assert_eq!(x, vec![q(4, 5), q(7, 5)]);
        assert!(solve(&qm(&[&[1, 2], &[2, 4]]), &[q(1, 1), q(1, 1)], 0.0).unwrap().is_none());
    }

    #[test]
    fn determinant_and_eigen() {
        assert_eq!(determinant(&qm(&[&[2, 1], &[1, 3]])).unwrap(), q(5, 1));
        assert_eq!(determinant(&qm(&[&[0, 1], &[1, 0]])).unwrap(), q(-1, 1));
        let m = Matrix::new(2, 2, vec![2.0, 1.0, 1.0, 2.0]).unwrap();
        assert!((min_eigenvalue_symmetric(&m).unwrap() - 1.0).abs() < 1e-12);
    }
}

//! Property tests for the invariants of the rank, Jacobian, kernel,
//! symmetry and complex routines.

mod common;

use common::{oracle_bound, oracle_forward_q, oracle_param_dim, oracle_rank, qq, Q};
use fundim::funcdim::{
    batch_dim, eval_jacobian, nonzero_columns, off_neuron_bound, point_jacobian, stochastic_dim, upper_bound, Batch,
};
use fundim::linalg::{self, Matrix};
use fundim::network::{Architecture, Network};
use fundim::ntk::batch_ntk;
use fundim::pwl_complex::complex_1d;
use fundim::scalar::{Rational, Scalar};
use fundim::symmetry::{apply_symmetry, Generator, SymmetryElement};
use proptest::prelude::*;

const ARCHS: [&[usize]; 6] = [&[1, 2, 1], &[2, 3, 2], &[3, 2, 1], &[1, 3, 2, 1], &[2, 2, 2, 1], &[1, 1, 1, 1]];

fn network() -> impl Strategy<Value = Network<Rational>> {
    (0..ARCHS.len()).prop_flat_map(|i| {
        let widths = ARCHS[i];
        prop::collection::vec(-128i64..=128, oracle_param_dim(widths)).prop_map(move |p| {
            let params = p.into_iter().map(|v| qq(v, 64)).collect();
            Network::from_flat(Architecture::new(widths.to_vec()).unwrap(), params).unwrap()
        })
    })
}

fn scalar_network() -> impl Strategy<Value = Network<Rational>> {
    (1usize..=4, 1usize..=3).prop_flat_map(|(w1, w2)| {
        let widths = vec![1, w1, w2, 1];
        prop::collection::vec(-128i64..=128, oracle_param_dim(&widths)).prop_map(move |p| {
            let params = p.into_iter().map(|v| qq(v, 64)).collect();
            Network::from_flat(Architecture::new(widths.clone()).unwrap(), params).unwrap()
        })
    })
}

fn inputs(n0: usize, k: usize) -> impl Strategy<Value = Vec<Vec<Rational>>> {
    prop::collection::vec(prop::collection::vec((-160i64..=160).prop_map(|v| qq(v, 16)), n0), 1..=k)
}

fn int_matrix() -> impl Strategy<Value = Matrix<Rational>> {
    (1usize..=6, 1usize..=6).prop_flat_map(|(r, c)| {
        prop::collection::vec(-3i64..=3, r * c)
            .prop_map(move |v| Matrix::new(r, c, v.into_iter().map(|x| qq(x, 1)).collect()).unwrap())
    })
}

fn rows_of(m: &Matrix<Rational>) -> Vec<Vec<Q>> {
    m.iter_rows().map(<[Q]>::to_vec).collect()
}

/// Keeps only points whose label has no zeros.
fn smooth(n: &Network<Rational>, pts: Vec<Vec<Rational>>) -> Batch<Rational> {
    let keep = pts.into_iter().filter(|z| !n.ternary_label(z).unwrap().has_zero()).collect();
    Batch::new(n.arch().input_dim(), keep).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn exact_rank_matches_oracle_and_transpose(m in int_matrix()) {
        let r = linalg::rank_exact(&m);
        prop_assert_eq!(r, oracle_rank(rows_of(&m)));
        prop_assert_eq!(r, linalg::rank_exact(&m.transpose()));
    }

    #[test]
    fn rank_invariant_under_row_permutation(m in int_matrix(), shift in 0usize..6) {
        let mut rows = rows_of(&m);
        let k = shift % rows.len();
        rows.rotate_left(k);
        let p = Matrix::from_rows(rows, m.cols()).unwrap();
        prop_assert_eq!(linalg::rank_exact(&m), linalg::rank_exact(&p));
    }

    #[test]
    fn numeric_rank_agrees_on_small_integers(m in int_matrix()) {
        let numeric = linalg::rank_numeric(&m.to_float(), linalg::DEFAULT_RANK_TOL).unwrap();
        prop_assert_eq!(numeric, linalg::rank_exact(&m));
    }

    #[test]
    fn forward_matches_oracle(n in network(), pts in inputs(3, 4)) {
        let p = n.flatten();
        for z in pts {
            let z = &z[..n.arch().input_dim()];
            prop_assert_eq!(n.output(z).unwrap(), oracle_forward_q(n.arch().widths(), &p, z));
        }
    }

    #[test]
    fn masked_product_gives_output(n in network(), pts in inputs(3, 4)) {
        for z in pts {
            let z = &z[..n.arch().input_dim()];
            let trace = n.forward(z).unwrap();
            let masked = n.masked_affine(&trace.label).unwrap();
            let mut h: Vec<Rational> = z.iter().cloned().chain(std::iter::once(qq(1, 1))).collect();
            for m in &masked {
                h = m.augmented.mul_vec(&h).unwrap();
            }
            h.pop();
            prop_assert_eq!(h, trace.output().to_vec());
        }
    }

    #[test]
    fn batch_dim_bounds_and_monotone(n in network(), a in inputs(3, 4), b in inputs(3, 4)) {
        let n0 = n.arch().input_dim();
        let cut = |v: Vec<Vec<Rational>>| v.into_iter().map(|z| z[..n0].to_vec()).collect::<Vec<_>>();
        let za = smooth(&n, cut(a));
        let zb = smooth(&n, cut(b));
        prop_assume!(!za.is_empty());
        let da = batch_dim(&n, &za).unwrap().value;
        let dab = batch_dim(&n, &za.union(&zb).unwrap()).unwrap().value;
        prop_assert!(da <= dab);
        prop_assert!(dab <= upper_bound(n.arch()));
        prop_assert_eq!(upper_bound(n.arch()), oracle_bound(n.arch().widths()));
        prop_assert!(da <= n.arch().output_dim() * za.len());
        let j = eval_jacobian(&n, &za).unwrap();
        prop_assert!(da <= nonzero_columns(&j.matrix));
        prop_assert_eq!(da, oracle_rank(rows_of(&j.matrix)));
    }

    #[test]
    fn stochastic_dim_within_off_neuron_bound(n in network(), pts in inputs(3, 1)) {
        let z = &pts[0][..n.arch().input_dim()];
        prop_assume!(!n.ternary_label(z).unwrap().has_zero());
        let d = stochastic_dim(&n, z).unwrap().value;
        prop_assert!(d <= off_neuron_bound(&n, z).unwrap());
        prop_assert!(d <= n.arch().output_dim());
    }

    #[test]
    fn jacobian_blocks_are_point_jacobians(n in network(), pts in inputs(3, 3)) {
        let n0 = n.arch().input_dim();
        let z = smooth(&n, pts.into_iter().map(|z| z[..n0].to_vec()).collect());
        prop_assume!(!z.is_empty());
        let j = eval_jacobian(&n, &z).unwrap();
        for (i, p) in z.points().iter().enumerate() {
            prop_assert_eq!(j.block(i), point_jacobian(&n, &n.forward(p).unwrap()));
        }
    }

    #[test]
    fn batch_ntk_symmetric_psd_same_rank(n in network(), pts in inputs(3, 4)) {
        let n0 = n.arch().input_dim();
        let z = smooth(&n, pts.into_iter().map(|z| z[..n0].to_vec()).collect());
        prop_assume!(!z.is_empty());
        let k = batch_ntk(&n, &z).unwrap();
        prop_assert_eq!(&k.matrix, &k.matrix.transpose());
        let f = k.matrix.to_float();
        let scale = f.data().iter().fold(1.0f64, |m, v| m.max(v.abs()));
        prop_assert!(linalg::min_eigenvalue_symmetric(&f).unwrap() >= -1e-9 * scale);
        for i in 0..z.len() {
            for jj in 0..z.len() {
                prop_assert_eq!(k.block(i, jj), k.block(jj, i).transpose());
            }
        }
        prop_assert_eq!(linalg::rank_exact(&k.matrix), batch_dim(&n, &z).unwrap().value);
        // Leading principal minors of small kernels are nonnegative.
        if k.matrix.rows() <= 4 {
            for size in 1..=k.matrix.rows() {
                let rows = (0..size).map(|r| k.matrix.row(r)[..size].to_vec()).collect();
                let minor = Matrix::from_rows(rows, size).unwrap();
                prop_assert!(linalg::determinant(&minor).unwrap() >= qq(0, 1));
            }
        }
    }

    #[test]
    fn symmetry_preserves_function_and_inverts(
        n in network(),
        picks in prop::collection::vec((0usize..8, 0usize..8, 1i64..=32, any::<bool>()), 1..4),
        pts in inputs(3, 4),
    ) {
        let arch = n.arch().clone();
        let gens = picks
            .into_iter()
            .map(|(l, j, c, perm)| {
                let layer = 1 + l % (arch.depth() - 1);
                let w = arch.width(layer);
                if perm && w > 1 {
                    Generator::permute(layer, j % w, (j + 1) % w).unwrap()
                } else {
                    Generator::rescale(layer, j % w, qq(c, 8)).unwrap()
                }
            })
            .collect();
        let g = SymmetryElement(gens);
        let moved = apply_symmetry(&g, &n).unwrap();
        for z in pts {
            let z = &z[..arch.input_dim()];
            prop_assert_eq!(n.output(z).unwrap(), moved.output(z).unwrap());
        }
        prop_assert_eq!(apply_symmetry(&g.inverse(), &moved).unwrap(), n);
    }

    #[test]
    fn complex_matches_forward(n in scalar_network(), xs in prop::collection::vec(-400i64..=400, 1..20)) {
        let c = complex_1d(&n).unwrap();
        prop_assert_eq!(c.intervals.len(), c.breakpoints.len() + 1);
        prop_assert!(c.breakpoints.windows(2).all(|w| w[0] < w[1]));
        for k in xs {
            let x = qq(k, 32);
            let out = n.output(std::slice::from_ref(&x)).unwrap();
            match c.cell_of(&x) {
                Some(i) => {
                    prop_assert_eq!(c.intervals[i].eval(&x), out);
                    prop_assert_eq!(&n.ternary_label(std::slice::from_ref(&x)).unwrap(), &c.intervals[i].label);
                }
                None => prop_assert!(c.breakpoints.contains(&x)),
            }
        }
        // Brute force: the label is constant strictly between consecutive breakpoints.
        for (i, cell) in c.intervals.iter().enumerate() {
            let x = cell.representative.clone();
            prop_assert_eq!(c.cell_of(&x), Some(i));
        }
    }

    #[test]
    fn json_round_trip(n in network()) {
        let text = n.to_json_string();
        prop_assert_eq!(Network::<Rational>::from_json_str(&text).unwrap(), n);
    }
}

#[test]
fn float_and_exact_rank_agree_on_dyadic_jacobians() {
    let n = Network::<Rational>::from_ints(&[1, 2, 1], &[2, -5, -1, 4, 1, 1, 1]).unwrap();
    let z = Batch::from_ints(&[0, 3, 5, 1, 7]);
    let exact = batch_dim(&n, &z).unwrap().value;
    let zf = Batch::new(1, z.points().iter().map(|p| vec![p[0].to_f64()]).collect()).unwrap();
    assert_eq!(batch_dim(&n.to_float(), &zf).unwrap().value, exact);
}

//! Functional dimension of feedforward ReLU networks.
//!
//! A network with architecture `(n_0, …, n_m)` is parametrised by a flat
//! vector in `R^D`. Its functional dimension at a parameter is the rank of the
//! Jacobian of the realization map, sampled over enough inputs. This crate
//! computes that rank exactly over the rationals or numerically over `f64`,
//! builds the one-dimensional canonical polyhedral complex, and provides the
//! neural tangent kernel, hidden symmetries and batch experiments.

// `!(a > b)` guards are deliberate: they also reject NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod cli;
pub mod demo;
pub mod error;
pub mod funcdim;
pub mod linalg;
pub mod network;
pub mod experiments;
pub mod ntk;
pub mod pwl_complex;
pub mod sampling;
pub mod scalar;
pub mod symmetry;

pub use error::{Error, Result};
pub use funcdim::{functional_dim, upper_bound, Batch, RankReport, Strategy};
pub use network::{Architecture, Network, TernaryLabel};
pub use scalar::{Rational, Scalar, ScalarMode};

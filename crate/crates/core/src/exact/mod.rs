//! Exact integer and rational linear algebra.
//!
//! Everything here is arbitrary precision: characteristic polynomials,
//! determinants, kernels over `Q`, Hermite forms and lattice saturation.
//! Nothing in this module ever rounds.

mod lattice;
mod matrix;
mod poly;
mod subspace;

pub use lattice::{lattice_saturate, try_lattice_saturate, LatticeBasis};
pub use matrix::IntegerMatrix;
pub use poly::IntegerPolynomial;
pub use subspace::{intersect_subspaces, primitive_integer_vector, rational_kernel, RationalSubspace};

use crate::error::Result;

/// `det(xI - M)`, monic of degree `dim`.
pub fn charpoly(m: &IntegerMatrix) -> IntegerPolynomial {
    m.charpoly()
}

pub fn unimodular_inverse(m: &IntegerMatrix) -> Result<IntegerMatrix> {
    m.unimodular_inverse()
}

/// Converts a small integer vector.
pub fn int_vec(v: &[i64]) -> Vec<num_bigint::BigInt> {
    v.iter().map(|&x| x.into()).collect()
}

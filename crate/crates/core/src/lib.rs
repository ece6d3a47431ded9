//! Decides whether a non-affine continuous equivariant map exists between
//! two actions of `Z^r` on tori by unimodular integer matrices, and when it
//! does, builds one and checks it numerically.
//!
//! ```
//! use torus_rigidity::{decide_nonaffine, IntegerMatrix, MatrixAction};
//!
//! let rho = MatrixAction::cyclic(IntegerMatrix::from_rows(&[vec![1, 1], vec![0, 1]]))?;
//! let sigma = MatrixAction::identity(1, 1);
//! assert!(decide_nonaffine(&rho, &sigma)?.exists_nonaffine);
//! # Ok::<(), torus_rigidity::Error>(())
//! ```

pub mod action;
pub mod cyclo;
pub mod decide;
pub mod error;
pub mod exact;
pub mod verify;
pub mod witness;

pub use action::{MatrixAction, SubgroupLattice};
pub use cyclo::{cyclotomic, k_index, root_of_unity_orders, RootOfUnitySpectrum};
pub use decide::{
    check_certificate, decide_almost, decide_cyclic, decide_factor, decide_nonaffine,
    rigidity_certificate, Certificate, DecisionReport, Diagnostics, Mode,
};
pub use error::{Error, Result};
pub use exact::{IntegerMatrix, IntegerPolynomial, LatticeBasis, RationalSubspace};
pub use verify::{
    brute_orbit_finite, check_equivariance, check_nonaffine, oracle_prop42, oracle_prop43,
    OrbitSearch, VerificationReport,
};
pub use witness::{build_witness, BumpFunction, WitnessParts, WitnessSpec};

// The guide's code listings run as doctests of this crate.
#[cfg(doctest)]
mod guide {
    #[doc = include_str!("../../../README.md")]
    mod readme {}
    #[doc = include_str!("../../../book/src/introduction.md")]
    mod introduction {}
    #[doc = include_str!("../../../book/src/actions.md")]
    mod actions {}
    #[doc = include_str!("../../../book/src/finite_orbits.md")]
    mod finite_orbits {}
    #[doc = include_str!("../../../book/src/decisions.md")]
    mod decisions {}
    #[doc = include_str!("../../../book/src/witness.md")]
    mod witness {}
    #[doc = include_str!("../../../book/src/verification.md")]
    mod verification {}
}

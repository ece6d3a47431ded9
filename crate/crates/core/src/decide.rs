//! Decision procedures for the existence of non-affine equivariant maps
//! between toral automorphism actions, each returning a report with a
//! certificate that can be re-checked exactly.

use std::fmt;

use num_bigint::BigInt;
use num_traits::Zero;

use crate::action::{MatrixAction, SubgroupLattice};
use crate::cyclo::k_index;
use crate::error::{Error, Result};
use crate::exact::{rational_kernel, IntegerMatrix, LatticeBasis, RationalSubspace};

/// Which criterion produced a report.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Mode {
    /// Exactly equivariant maps, general abelian actions.
    Exact,
    /// Maps equivariant on some finite-index subgroup.
    Almost,
    /// Exactly equivariant maps between single automorphisms, via `k_A`.
    Cyclic,
    /// Exactly equivariant maps when the target is a toral factor.
    Factor,
}

impl Mode {
    pub fn as_str(self) -> &'static str {
        match self {
            Mode::Exact => "exact",
            Mode::Almost => "almost",
            Mode::Cyclic => "cyclic",
            Mode::Factor => "factor",
        }
    }
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl std::str::FromStr for Mode {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "exact" => Ok(Mode::Exact),
            "almost" => Ok(Mode::Almost),
            "cyclic" => Ok(Mode::Cyclic),
            "factor" => Ok(Mode::Factor),
            other => Err(format!("unknown mode `{other}`")),
        }
    }
}

/// Evidence for a decision.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Certificate {
    /// The source has no nonzero character with finite dual orbit.
    SourceErgodic,
    /// No nonzero vector of the target Lie algebra has a finite orbit.
    NoFiniteOrbitTargetVector,
    /// Nothing nonzero in the target is fixed by the given subgroup.
    NoGammaRhoFixedVector { subgroup: SubgroupLattice },
    /// The target (a factor of the source) is ergodic.
    TargetErgodic,
    /// `fixed_vector` is a nonzero integer vector fixed by every element of
    /// `subgroup`, which acts trivially on the character lattice
    /// `f_lattice`.
    Exists {
        f_lattice: LatticeBasis,
        subgroup: SubgroupLattice,
        fixed_vector: Vec<BigInt>,
    },
}

impl Certificate {
    pub fn name(&self) -> &'static str {
        match self {
            Certificate::SourceErgodic => "SourceErgodic",
            Certificate::NoFiniteOrbitTargetVector => "NoFiniteOrbitTargetVector",
            Certificate::NoGammaRhoFixedVector { .. } => "NoGammaRhoFixedVector",
            Certificate::TargetErgodic => "TargetErgodic",
            Certificate::Exists { .. } => "Exists",
        }
    }
}

/// Numbers computed along the way; informational only.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Diagnostics {
    pub source_k: Vec<u64>,
    pub target_k: Vec<u64>,
    /// Rank of the finite-orbit character lattice of the source.
    pub f_rank: usize,
    /// Index of the stabilizer subgroup, when it was computed.
    pub gamma_index: Option<u64>,
    /// `k_A` for the cyclic mode.
    pub k_a: Option<u64>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DecisionReport {
    pub exists_nonaffine: bool,
    pub mode: Mode,
    pub certificate: Certificate,
    pub diagnostics: Diagnostics,
}

fn check_ranks(rho: &MatrixAction, sigma: &MatrixAction) -> Result<()> {
    if rho.rank() != sigma.rank() {
        return Err(Error::RankMismatch {
            source_rank: rho.rank(),
            target_rank: sigma.rank(),
        });
    }
    Ok(())
}

fn first_integer_vector(space: &RationalSubspace) -> Option<Vec<BigInt>> {
    space.integer_basis().into_iter().next()
}

fn base_diagnostics(rho: &MatrixAction, sigma: &MatrixAction, f_rank: usize) -> Diagnostics {
    Diagnostics {
        source_k: rho.k_indices(),
        target_k: sigma.k_indices(),
        f_rank,
        gamma_index: None,
        k_a: None,
    }
}

/// Decides whether a non-affine continuous map `f` with
/// `f ∘ ρ(γ) = σ(γ) ∘ f` for all `γ` exists.
///
/// The answer is yes exactly when `ρ` is not ergodic and some nonzero
/// vector is fixed by `σ` restricted to the subgroup acting trivially on
/// the finite-orbit characters of `ρ`.
pub fn decide_nonaffine(rho: &MatrixAction, sigma: &MatrixAction) -> Result<DecisionReport> {
    check_ranks(rho, sigma)?;
    let f = rho.finite_orbit_characters();
    let mut diagnostics = base_diagnostics(rho, sigma, f.rank());
    if f.rank() == 0 {
        return Ok(DecisionReport {
            exists_nonaffine: false,
            mode: Mode::Exact,
            certificate: Certificate::SourceErgodic,
            diagnostics,
        });
    }
    let subgroup = rho.gamma_rho();
    diagnostics.gamma_index = Some(subgroup.index());
    let fixed = sigma.fixed_subspace(&subgroup);
    let certificate = match first_integer_vector(&fixed) {
        Some(v) => Certificate::Exists {
            f_lattice: f,
            subgroup,
            fixed_vector: v,
        },
        None => Certificate::NoGammaRhoFixedVector { subgroup },
    };
    Ok(DecisionReport {
        exists_nonaffine: matches!(certificate, Certificate::Exists { .. }),
        mode: Mode::Exact,
        certificate,
        diagnostics,
    })
}

fn cyclic_action(m: &IntegerMatrix) -> Result<MatrixAction> {
    MatrixAction::cyclic(m.clone()).map_err(|e| match e {
        Error::GeneratorNotUnimodular { det, .. } => Error::NotUnimodular { det },
        other => other,
    })
}

/// Single-automorphism criterion: yes exactly when `A` is not ergodic and
/// 1 is an eigenvalue of `B^{k_A}`, tested as `det(B^{k_A} - I) = 0`.
pub fn decide_cyclic(a: &IntegerMatrix, b: &IntegerMatrix) -> Result<DecisionReport> {
    let rho = cyclic_action(a)?;
    let sigma = cyclic_action(b)?;
    let k = k_index(a)?;
    let f = rho.finite_orbit_characters();
    let mut diagnostics = base_diagnostics(&rho, &sigma, f.rank());
    diagnostics.k_a = Some(k);
    if f.rank() == 0 {
        return Ok(DecisionReport {
            exists_nonaffine: false,
            mode: Mode::Cyclic,
            certificate: Certificate::SourceErgodic,
            diagnostics,
        });
    }
    // A^{k_A} has finite order on F and no root-of-unity eigenvalue but 1,
    // so it is trivial there; every smaller power keeps one of the roots
    let subgroup = SubgroupLattice::diagonal(&[k]);
    diagnostics.gamma_index = Some(k);
    let shifted = b.pow(k).minus_identity();
    let certificate = if shifted.determinant().is_zero() {
        let v = first_integer_vector(&rational_kernel(&shifted))
            .expect("singular matrix has a nonzero kernel");
        Certificate::Exists {
            f_lattice: f,
            subgroup,
            fixed_vector: v,
        }
    } else {
        Certificate::NoGammaRhoFixedVector { subgroup }
    };
    Ok(DecisionReport {
        exists_nonaffine: matches!(certificate, Certificate::Exists { .. }),
        mode: Mode::Cyclic,
        certificate,
        diagnostics,
    })
}

/// Whether a non-affine map equivariant on some finite-index subgroup
/// exists: `ρ` not ergodic and some nonzero target vector has a finite
/// `σ`-orbit.
pub fn decide_almost(rho: &MatrixAction, sigma: &MatrixAction) -> Result<DecisionReport> {
    check_ranks(rho, sigma)?;
    let f = rho.finite_orbit_characters();
    let diagnostics = base_diagnostics(rho, sigma, f.rank());
    let certificate = if f.rank() == 0 {
        Certificate::SourceErgodic
    } else {
        let w = sigma.finite_orbit_subspace();
        match first_integer_vector(&w) {
            // every vector of W is fixed by σ(k_j e_j) for all j
            Some(v) => Certificate::Exists {
                f_lattice: f,
                subgroup: SubgroupLattice::diagonal(&diagnostics.target_k),
                fixed_vector: v,
            },
            None => Certificate::NoFiniteOrbitTargetVector,
        }
    };
    Ok(DecisionReport {
        exists_nonaffine: matches!(certificate, Certificate::Exists { .. }),
        mode: Mode::Almost,
        certificate,
        diagnostics,
    })
}

/// A certificate that every equivariant map between the two actions is
/// affine, if one of the two sufficient conditions holds.
pub fn rigidity_certificate(rho: &MatrixAction, sigma: &MatrixAction) -> Option<Certificate> {
    if rho.is_ergodic() {
        Some(Certificate::SourceErgodic)
    } else if sigma.finite_orbit_subspace().is_zero() {
        Some(Certificate::NoFiniteOrbitTargetVector)
    } else {
        None
    }
}

/// Checks that `theta` (an `n x m` integer matrix) defines a surjective
/// homomorphism `T^m → T^n` intertwining the two actions.
pub fn check_factor_map(
    rho: &MatrixAction,
    sigma: &MatrixAction,
    theta: &IntegerMatrix,
) -> Result<()> {
    check_ranks(rho, sigma)?;
    if theta.rows() != sigma.dim() {
        return Err(Error::DimensionMismatch {
            expected: sigma.dim(),
            found: theta.rows(),
        });
    }
    if theta.cols() != rho.dim() {
        return Err(Error::DimensionMismatch {
            expected: rho.dim(),
            found: theta.cols(),
        });
    }
    // rank(theta) = cols - dim ker
    let rank = theta.cols() - rational_kernel(theta).rank();
    if rank < sigma.dim() {
        return Err(Error::NotSurjective {
            rank,
            target_dim: sigma.dim(),
        });
    }
    for (j, (s, r)) in sigma.generators().iter().zip(rho.generators()).enumerate() {
        if s * theta != theta * r {
            return Err(Error::NotEquivariant(j));
        }
    }
    Ok(())
}

/// Factor criterion: when `theta` makes `σ` a toral factor of `ρ`, a
/// non-affine equivariant map exists exactly when `σ` is not ergodic.
///
/// A yes answer is cross-checked against [`decide_nonaffine`], whose
/// certificate is reused.
pub fn decide_factor(
    rho: &MatrixAction,
    sigma: &MatrixAction,
    theta: &IntegerMatrix,
) -> Result<DecisionReport> {
    check_factor_map(rho, sigma, theta)?;
    if sigma.is_ergodic() {
        let f = rho.finite_orbit_characters();
        return Ok(DecisionReport {
            exists_nonaffine: false,
            mode: Mode::Factor,
            certificate: Certificate::TargetErgodic,
            diagnostics: base_diagnostics(rho, sigma, f.rank()),
        });
    }
    let general = decide_nonaffine(rho, sigma)?;
    if !general.exists_nonaffine {
        return Err(Error::InvalidReport(format!(
            "factor criterion says yes but the general criterion answers {}",
            general.certificate.name()
        )));
    }
    Ok(DecisionReport {
        mode: Mode::Factor,
        ..general
    })
}

/// Re-checks every claim a report's certificate makes, by exact
/// recomputation against the two actions.
pub fn check_certificate(
    report: &DecisionReport,
    rho: &MatrixAction,
    sigma: &MatrixAction,
) -> Result<()> {
    let fail = |msg: &str| Err(Error::InvalidReport(msg.to_string()));
    let claims_yes = matches!(report.certificate, Certificate::Exists { .. });
    if claims_yes != report.exists_nonaffine {
        return fail("existence flag disagrees with the certificate");
    }
    match &report.certificate {
        Certificate::SourceErgodic => {
            if !rho.is_ergodic() {
                return fail("source has finite-orbit characters");
            }
        }
        Certificate::NoFiniteOrbitTargetVector => {
            if !sigma.finite_orbit_subspace().is_zero() {
                return fail("target has a finite-orbit vector");
            }
        }
        Certificate::TargetErgodic => {
            if !sigma.is_ergodic() {
                return fail("target is not ergodic");
            }
        }
        Certificate::NoGammaRhoFixedVector { subgroup } => {
            if *subgroup != rho.gamma_rho() {
                return fail("subgroup is not the stabilizer of the finite-orbit characters");
            }
            if !sigma.fixed_subspace(subgroup).is_zero() {
                return fail("target has a vector fixed by the subgroup");
            }
        }
        Certificate::Exists {
            f_lattice,
            subgroup,
            fixed_vector,
        } => {
            if fixed_vector.len() != sigma.dim() || fixed_vector.iter().all(Zero::is_zero) {
                return fail("fixed vector is zero or has the wrong length");
            }
            if f_lattice.ambient_dim() != rho.dim() || f_lattice.rank() == 0 {
                return fail("finite-orbit lattice is empty or has the wrong dimension");
            }
            if subgroup.rank() != rho.rank() {
                return fail("subgroup has the wrong rank");
            }
            let dual = rho.dual();
            for b in subgroup.basis_i64() {
                if sigma.apply(&b).mul_vec(fixed_vector) != *fixed_vector {
                    return fail("fixed vector is moved by a subgroup generator");
                }
                let g = dual.apply(&b);
                if f_lattice.basis().iter().any(|z| g.mul_vec(z) != *z) {
                    return fail("subgroup moves a finite-orbit character");
                }
            }
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(rows: &[Vec<i64>]) -> IntegerMatrix {
        IntegerMatrix::from_rows(rows)
    }

    fn cyc(rows: &[Vec<i64>]) -> MatrixAction {
        MatrixAction::cyclic(m(rows)).unwrap()
    }

    fn cat() -> MatrixAction {
        cyc(&[vec![2, 1], vec![1, 1]])
    }

    fn shear() -> MatrixAction {
        cyc(&[vec![1, 1], vec![0, 1]])
    }

    #[test]
    fn identity_to_reflection_is_rigid() {
        let rho = MatrixAction::identity(1, 1);
        let sigma = cyc(&[vec![-1]]);
        let r = decide_nonaffine(&rho, &sigma).unwrap();
        assert!(!r.exists_nonaffine);
        assert_eq!(r.certificate.name(), "NoGammaRhoFixedVector");
        check_certificate(&r, &rho, &sigma).unwrap();
    }

    #[test]
    fn shear_to_identity_exists() {
        let rho = shear();
        let sigma = MatrixAction::identity(1, 1);
        let r = decide_nonaffine(&rho, &sigma).unwrap();
        assert!(r.exists_nonaffine);
        match &r.certificate {
            Certificate::Exists {
                subgroup,
                fixed_vector,
                ..
            } => {
                assert_eq!(subgroup.index(), 1);
                assert_eq!(fixed_vector, &vec![BigInt::from(1)]);
            }
            other => panic!("unexpected {other:?}"),
        }
        check_certificate(&r, &rho, &sigma).unwrap();
    }

    #[test]
    fn ergodic_source_is_rigid() {
        for sigma in [MatrixAction::identity(3, 1), shear(), cat()] {
            let r = decide_nonaffine(&cat(), &sigma).unwrap();
            assert_eq!(r.certificate, Certificate::SourceErgodic);
        }
    }

    #[test]
    fn rank_mismatch() {
        let two = MatrixAction::identity(2, 2);
        assert!(matches!(
            decide_nonaffine(&shear(), &two),
            Err(Error::RankMismatch { .. })
        ));
    }

    #[test]
    fn cyclic_examples() {
        let a = m(&[vec![0, -1], vec![1, -1]]);
        let no = decide_cyclic(&a, &m(&[vec![0, -1], vec![1, 0]])).unwrap();
        assert!(!no.exists_nonaffine);
        assert_eq!(no.diagnostics.k_a, Some(3));
        let yes = decide_cyclic(&a, &m(&[vec![1, 1], vec![0, 1]])).unwrap();
        assert!(yes.exists_nonaffine);
        let r = decide_cyclic(&IntegerMatrix::identity(1), &IntegerMatrix::scalar(-1)).unwrap();
        assert!(!r.exists_nonaffine);
        assert_eq!(r.diagnostics.k_a, Some(1));
        assert!(matches!(
            decide_cyclic(&m(&[vec![2, 0], vec![0, 1]]), &a),
            Err(Error::NotUnimodular { .. })
        ));
    }

    #[test]
    fn ergodic_source_overrides_eigenvalue_one() {
        // the cat map has k = 1 and the identity target has eigenvalue 1,
        // but an ergodic source admits no non-affine map
        let r = decide_cyclic(&m(&[vec![2, 1], vec![1, 1]]), &IntegerMatrix::identity(1)).unwrap();
        assert!(!r.exists_nonaffine);
        assert_eq!(r.certificate, Certificate::SourceErgodic);
    }

    #[test]
    fn almost_examples() {
        let order3 = cyc(&[vec![0, -1], vec![1, -1]]);
        let r = decide_almost(&shear(), &order3).unwrap();
        assert!(r.exists_nonaffine);
        check_certificate(&r, &shear(), &order3).unwrap();
        let r = decide_almost(&shear(), &cat()).unwrap();
        assert_eq!(r.certificate, Certificate::NoFiniteOrbitTargetVector);
        let r = decide_almost(&cat(), &order3).unwrap();
        assert_eq!(r.certificate, Certificate::SourceErgodic);
    }

    #[test]
    fn rigidity_certificate_examples() {
        assert_eq!(rigidity_certificate(&cat(), &shear()), Some(Certificate::SourceErgodic));
        assert_eq!(
            rigidity_certificate(&shear(), &cat()),
            Some(Certificate::NoFiniteOrbitTargetVector)
        );
        let id = MatrixAction::identity(2, 1);
        assert_eq!(rigidity_certificate(&id, &id), None);
    }

    #[test]
    fn factor_examples() {
        let sigma = MatrixAction::identity(1, 1);
        let theta = m(&[vec![0, 1]]);
        let r = decide_factor(&shear(), &sigma, &theta).unwrap();
        assert!(r.exists_nonaffine);
        assert_eq!(r.mode, Mode::Factor);
        assert!(decide_nonaffine(&shear(), &sigma).unwrap().exists_nonaffine);

        let r = decide_factor(&cat(), &cat(), &IntegerMatrix::identity(2)).unwrap();
        assert_eq!(r.certificate, Certificate::TargetErgodic);

        assert!(matches!(
            decide_factor(&shear(), &sigma, &m(&[vec![0, 0]])),
            Err(Error::NotSurjective { .. })
        ));
        assert_eq!(
            decide_factor(&shear(), &sigma, &m(&[vec![1, 0]])),
            Err(Error::NotEquivariant(0))
        );
    }

    #[test]
    fn forged_certificates_are_rejected() {
        let rho = shear();
        let sigma = MatrixAction::identity(1, 1);
        let mut r = decide_nonaffine(&rho, &sigma).unwrap();
        r.certificate = Certificate::SourceErgodic;
        r.exists_nonaffine = false;
        assert!(check_certificate(&r, &rho, &sigma).is_err());

        let sigma = cyc(&[vec![1, 1], vec![0, 1]]);
        let mut r = decide_nonaffine(&rho, &sigma).unwrap();
        if let Certificate::Exists { fixed_vector, .. } = &mut r.certificate {
            *fixed_vector = vec![BigInt::from(0), BigInt::from(1)];
        }
        assert!(check_certificate(&r, &rho, &sigma).is_err());
    }

    #[test]
    fn mode_round_trip() {
        for mode in [Mode::Exact, Mode::Almost, Mode::Cyclic, Mode::Factor] {
            assert_eq!(mode.as_str().parse::<Mode>().unwrap(), mode);
        }
        assert!("fast".parse::<Mode>().is_err());
    }
}

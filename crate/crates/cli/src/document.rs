//! JSON documents read and written by the command-line tool.
//!
//! Integers are written as decimal strings so that no consumer truncates
//! them to 64 bits; JSON numbers are accepted on input as well. Floats are
//! written as decimal strings with 17 significant digits, which round-trips
//! every `f64` exactly.

use std::fmt;

use num_bigint::BigInt;
use serde::de::{self, Deserializer, Visitor};
use serde::{Deserialize, Serialize, Serializer};

use torus_rigidity::{
    Certificate, DecisionReport, Diagnostics, IntegerMatrix, LatticeBasis, MatrixAction, Mode,
    SubgroupLattice, VerificationReport, WitnessParts,
};

/// Arbitrary-precision integer as it appears in documents.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Int(pub BigInt);

impl Serialize for Int {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.0.to_string())
    }
}

struct IntVisitor;

impl Visitor<'_> for IntVisitor {
    type Value = Int;

    fn expecting(&self, f: &mut fmt::Formatter) -> fmt::Result {
        f.write_str("an integer or a decimal string")
    }

    fn visit_str<E: de::Error>(self, v: &str) -> Result<Int, E> {
        v.trim()
            .parse::<BigInt>()
            .map(Int)
            .map_err(|_| E::custom(format!("`{v}` is not an integer")))
    }

    fn visit_i64<E: de::Error>(self, v: i64) -> Result<Int, E> {
        Ok(Int(v.into()))
    }

    fn visit_u64<E: de::Error>(self, v: u64) -> Result<Int, E> {
        Ok(Int(v.into()))
    }

    fn visit_f64<E: de::Error>(self, v: f64) -> Result<Int, E> {
        Err(E::custom(format!("{v} is not an integer; write large integers as strings")))
    }
}

impl<'de> Deserialize<'de> for Int {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        d.deserialize_any(IntVisitor)
    }
}

/// Formats with 17 significant digits in plain positional notation.
pub fn format_f64(x: f64) -> String {
    if x == 0.0 || !x.is_finite() {
        return if x.is_finite() { "0".into() } else { x.to_string() };
    }
    let exponent = x.abs().log10().floor() as i32;
    let decimals = (16 - exponent).clamp(0, 400) as usize;
    format!("{x:.decimals$}")
}

/// A float written as a decimal string.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Real(pub f64);

impl Serialize for Real {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&format_f64(self.0))
    }
}

struct RealVisitor;

impl Visitor<'_> for RealVisitor {
    type Value = Real;

    fn expecting(&self, f: &mut fmt::Formatter) -> fmt::Result {
        f.write_str("a number or a decimal string")
    }

    fn visit_str<E: de::Error>(self, v: &str) -> Result<Real, E> {
        v.trim()
            .parse::<f64>()
            .map(Real)
            .map_err(|_| E::custom(format!("`{v}` is not a number")))
    }

    fn visit_f64<E: de::Error>(self, v: f64) -> Result<Real, E> {
        Ok(Real(v))
    }

    fn visit_i64<E: de::Error>(self, v: i64) -> Result<Real, E> {
        Ok(Real(v as f64))
    }

    fn visit_u64<E: de::Error>(self, v: u64) -> Result<Real, E> {
        Ok(Real(v as f64))
    }
}

impl<'de> Deserialize<'de> for Real {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        d.deserialize_any(RealVisitor)
    }
}

pub type Vector = Vec<Int>;
pub type Matrix = Vec<Vec<Int>>;

pub fn to_vector(v: &[BigInt]) -> Vector {
    v.iter().cloned().map(Int).collect()
}

pub fn from_vector(v: &[Int]) -> Vec<BigInt> {
    v.iter().map(|x| x.0.clone()).collect()
}

pub fn to_matrix(m: &IntegerMatrix) -> Matrix {
    m.to_rows().into_iter().map(|r| to_vector(&r)).collect()
}

fn small_rows(rows: &[Vec<i64>]) -> Matrix {
    rows.iter()
        .map(|r| r.iter().map(|&x| Int(x.into())).collect())
        .collect()
}

/// Validation failure with a message meant for the user.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Invalid(pub String);

impl fmt::Display for Invalid {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

fn invalid<T>(msg: impl Into<String>) -> Result<T, Invalid> {
    Err(Invalid(msg.into()))
}

pub fn parse_matrix(m: &Matrix, what: &str) -> Result<IntegerMatrix, Invalid> {
    let rows: Vec<Vec<BigInt>> = m.iter().map(|r| from_vector(r)).collect();
    IntegerMatrix::try_from_rows(rows).map_err(|e| Invalid(format!("{what}: {e}")))
}

fn small(x: &Int, what: &str) -> Result<i64, Invalid> {
    i64::try_from(&x.0).map_err(|_| Invalid(format!("{what}: {} does not fit in 64 bits", x.0)))
}

fn small_matrix(m: &Matrix, what: &str) -> Result<Vec<Vec<i64>>, Invalid> {
    m.iter()
        .map(|r| r.iter().map(|x| small(x, what)).collect())
        .collect()
}

/// One action: torus dimension and one matrix per generator.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ActionDocument {
    pub dim: usize,
    pub generators: Vec<Matrix>,
}

impl ActionDocument {
    pub fn from_action(a: &MatrixAction) -> Self {
        Self {
            dim: a.dim(),
            generators: a.generators().iter().map(to_matrix).collect(),
        }
    }

    /// Checks shape, unimodularity and commutativity. Messages name the
    /// action (`role`) and the offending generators.
    pub fn to_action(&self, role: &str, rank: usize) -> Result<MatrixAction, Invalid> {
        if self.dim == 0 {
            return invalid(format!("{role}: torus dimension must be positive"));
        }
        if self.generators.len() != rank {
            return invalid(format!(
                "{role}: expected {rank} generators, found {}",
                self.generators.len()
            ));
        }
        let mut gens = Vec::with_capacity(rank);
        for (i, g) in self.generators.iter().enumerate() {
            let m = parse_matrix(g, &format!("{role} generator {i}"))?;
            if !m.is_square() || m.rows() != self.dim {
                return invalid(format!(
                    "{role} generator {i}: expected a {d}x{d} matrix, found {}x{}",
                    m.rows(),
                    m.cols(),
                    d = self.dim
                ));
            }
            gens.push(m);
        }
        MatrixAction::new(gens).map_err(|e| {
            Invalid(match e {
                torus_rigidity::Error::NonCommuting(i, j) => {
                    format!("{role}: generators {i} and {j} do not commute")
                }
                torus_rigidity::Error::GeneratorNotUnimodular { index, det } => {
                    format!("{role}: generator {index} is not unimodular (determinant {det})")
                }
                other => format!("{role}: {other}"),
            })
        })
    }
}

/// A source action, a target action of the same rank, and optionally a
/// factor matrix `θ` (target dim x source dim).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SystemPairDocument {
    pub rank: usize,
    pub source: ActionDocument,
    pub target: ActionDocument,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub factor_matrix: Option<Matrix>,
}

/// A validated pair.
#[derive(Debug, Clone)]
pub struct SystemPair {
    pub source: MatrixAction,
    pub target: MatrixAction,
    pub factor: Option<IntegerMatrix>,
}

impl SystemPairDocument {
    pub fn from_pair(source: &MatrixAction, target: &MatrixAction, factor: Option<&IntegerMatrix>) -> Self {
        Self {
            rank: source.rank(),
            source: ActionDocument::from_action(source),
            target: ActionDocument::from_action(target),
            factor_matrix: factor.map(to_matrix),
        }
    }

    pub fn validate(&self) -> Result<SystemPair, Invalid> {
        if self.rank == 0 {
            return invalid("rank must be positive");
        }
        let source = self.source.to_action("source", self.rank)?;
        let target = self.target.to_action("target", self.rank)?;
        let factor = match &self.factor_matrix {
            None => None,
            Some(m) => {
                let theta = parse_matrix(m, "factor_matrix")?;
                if theta.rows() != target.dim() || theta.cols() != source.dim() {
                    return invalid(format!(
                        "factor_matrix: expected {}x{}, found {}x{}",
                        target.dim(),
                        source.dim(),
                        theta.rows(),
                        theta.cols()
                    ));
                }
                Some(theta)
            }
        };
        Ok(SystemPair {
            source,
            target,
            factor,
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", deny_unknown_fields)]
pub enum CertificateDocument {
    SourceErgodic,
    NoFiniteOrbitTargetVector,
    NoGammaRhoFixedVector {
        subgroup: Matrix,
        subgroup_index: Int,
    },
    TargetErgodic,
    Exists {
        f_lattice: Matrix,
        subgroup: Matrix,
        subgroup_index: Int,
        fixed_vector: Vector,
    },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DiagnosticsDocument {
    pub source_k: Vector,
    pub target_k: Vector,
    pub f_rank: usize,
    pub gamma_index: Option<Int>,
    pub k_a: Option<Int>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DecisionDocument {
    pub exists_nonaffine: bool,
    pub mode: String,
    pub certificate: CertificateDocument,
    pub diagnostics: DiagnosticsDocument,
}

fn u64s(v: &[u64]) -> Vector {
    v.iter().map(|&x| Int(x.into())).collect()
}

fn parse_u64s(v: &[Int], what: &str) -> Result<Vec<u64>, Invalid> {
    v.iter()
        .map(|x| u64::try_from(&x.0).map_err(|_| Invalid(format!("{what}: {} is not a small positive integer", x.0))))
        .collect()
}

fn subgroup_from(m: &Matrix, rank: usize, what: &str) -> Result<SubgroupLattice, Invalid> {
    let rows = small_matrix(m, what)?;
    if rows.iter().any(|r| r.len() != rank) {
        return invalid(format!("{what}: rows must have length {rank}"));
    }
    SubgroupLattice::from_basis(LatticeBasis::from_generators_i64(rank, &rows))
        .ok_or_else(|| Invalid(format!("{what}: not a finite-index subgroup")))
}

impl DecisionDocument {
    pub fn from_report(r: &DecisionReport) -> Self {
        let certificate = match &r.certificate {
            Certificate::SourceErgodic => CertificateDocument::SourceErgodic,
            Certificate::NoFiniteOrbitTargetVector => CertificateDocument::NoFiniteOrbitTargetVector,
            Certificate::TargetErgodic => CertificateDocument::TargetErgodic,
            Certificate::NoGammaRhoFixedVector { subgroup } => CertificateDocument::NoGammaRhoFixedVector {
                subgroup: small_rows(&subgroup.basis_i64()),
                subgroup_index: Int(subgroup.index().into()),
            },
            Certificate::Exists {
                f_lattice,
                subgroup,
                fixed_vector,
            } => CertificateDocument::Exists {
                f_lattice: f_lattice.basis().iter().map(|r| to_vector(r)).collect(),
                subgroup: small_rows(&subgroup.basis_i64()),
                subgroup_index: Int(subgroup.index().into()),
                fixed_vector: to_vector(fixed_vector),
            },
        };
        let d = &r.diagnostics;
        Self {
            exists_nonaffine: r.exists_nonaffine,
            mode: r.mode.as_str().to_string(),
            certificate,
            diagnostics: DiagnosticsDocument {
                source_k: u64s(&d.source_k),
                target_k: u64s(&d.target_k),
                f_rank: d.f_rank,
                gamma_index: d.gamma_index.map(|x| Int(x.into())),
                k_a: d.k_a.map(|x| Int(x.into())),
            },
        }
    }

    /// Rebuilds the report; `source_dim` and `rank` fix the shapes of the
    /// lattices it mentions.
    pub fn to_report(&self, source_dim: usize, rank: usize) -> Result<DecisionReport, Invalid> {
        let mode: Mode = self.mode.parse().map_err(Invalid)?;
        let check_index = |sub: &SubgroupLattice, idx: &Int| {
            if BigInt::from(sub.index()) == idx.0 {
                Ok(())
            } else {
                invalid("subgroup_index does not match the subgroup")
            }
        };
        let certificate = match &self.certificate {
            CertificateDocument::SourceErgodic => Certificate::SourceErgodic,
            CertificateDocument::NoFiniteOrbitTargetVector => Certificate::NoFiniteOrbitTargetVector,
            CertificateDocument::TargetErgodic => Certificate::TargetErgodic,
            CertificateDocument::NoGammaRhoFixedVector {
                subgroup,
                subgroup_index,
            } => {
                let subgroup = subgroup_from(subgroup, rank, "subgroup")?;
                check_index(&subgroup, subgroup_index)?;
                Certificate::NoGammaRhoFixedVector { subgroup }
            }
            CertificateDocument::Exists {
                f_lattice,
                subgroup,
                subgroup_index,
                fixed_vector,
            } => {
                let rows: Vec<Vec<BigInt>> = f_lattice.iter().map(|r| from_vector(r)).collect();
                if rows.iter().any(|r| r.len() != source_dim) {
                    return invalid(format!("f_lattice: rows must have length {source_dim}"));
                }
                let subgroup = subgroup_from(subgroup, rank, "subgroup")?;
                check_index(&subgroup, subgroup_index)?;
                Certificate::Exists {
                    f_lattice: LatticeBasis::from_generators(source_dim, &rows),
                    subgroup,
                    fixed_vector: from_vector(fixed_vector),
                }
            }
        };
        let d = &self.diagnostics;
        let single = |x: &Option<Int>, what: &str| -> Result<Option<u64>, Invalid> {
            x.as_ref()
                .map(|v| parse_u64s(std::slice::from_ref(v), what).map(|v| v[0]))
                .transpose()
        };
        Ok(DecisionReport {
            exists_nonaffine: self.exists_nonaffine,
            mode,
            certificate,
            diagnostics: Diagnostics {
                source_k: parse_u64s(&d.source_k, "source_k")?,
                target_k: parse_u64s(&d.target_k, "target_k")?,
                f_rank: d.f_rank,
                gamma_index: single(&d.gamma_index, "gamma_index")?,
                k_a: single(&d.k_a, "k_a")?,
            },
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BumpDocument {
    pub center: Real,
    pub radius: Real,
    pub direction: Vector,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct WitnessBody {
    pub chi0: Vector,
    pub x0: Vec<Real>,
    pub reps: Matrix,
    pub c: Vec<Real>,
    pub bump: BumpDocument,
    pub subgroup: Matrix,
    pub rho_reps: Vec<Matrix>,
    pub sigma_inv_reps: Vec<Matrix>,
}

/// A witness together with the two actions it was built for, so that it
/// can be verified on its own.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct WitnessDocument {
    pub rank: usize,
    pub source: ActionDocument,
    pub target: ActionDocument,
    pub witness: WitnessBody,
}

fn reals(v: &[f64]) -> Vec<Real> {
    v.iter().copied().map(Real).collect()
}

fn floats(v: &[Real]) -> Vec<f64> {
    v.iter().map(|r| r.0).collect()
}

impl WitnessBody {
    pub fn from_parts(p: &WitnessParts) -> Self {
        Self {
            chi0: to_vector(&p.chi0),
            x0: reals(&p.x0),
            reps: small_rows(&p.reps),
            c: reals(&p.c),
            bump: BumpDocument {
                center: Real(p.bump.center),
                radius: Real(p.bump.radius),
                direction: to_vector(&p.bump.direction),
            },
            subgroup: small_rows(&p.subgroup),
            rho_reps: p.rho_reps.iter().map(to_matrix).collect(),
            sigma_inv_reps: p.sigma_inv_reps.iter().map(to_matrix).collect(),
        }
    }

    pub fn to_parts(&self) -> Result<WitnessParts, Invalid> {
        let matrices = |ms: &[Matrix], what: &str| -> Result<Vec<IntegerMatrix>, Invalid> {
            ms.iter()
                .enumerate()
                .map(|(i, m)| parse_matrix(m, &format!("{what} {i}")))
                .collect()
        };
        Ok(WitnessParts {
            chi0: from_vector(&self.chi0),
            x0: floats(&self.x0),
            reps: small_matrix(&self.reps, "reps")?,
            c: floats(&self.c),
            bump: torus_rigidity::BumpFunction {
                center: self.bump.center.0,
                radius: self.bump.radius.0,
                direction: from_vector(&self.bump.direction),
            },
            subgroup: small_matrix(&self.subgroup, "subgroup")?,
            rho_reps: matrices(&self.rho_reps, "rho_reps")?,
            sigma_inv_reps: matrices(&self.sigma_inv_reps, "sigma_inv_reps")?,
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct VerificationDocument {
    pub samples: usize,
    pub seed: Int,
    pub tolerance: Real,
    pub max_equivariance_error: Real,
    pub per_generator: Vec<Real>,
    pub nonconstancy_gap: Real,
    pub nonconstancy_threshold: Real,
    pub pass: bool,
}

impl VerificationDocument {
    pub fn from_report(r: &VerificationReport) -> Self {
        Self {
            samples: r.samples,
            seed: Int(r.seed.into()),
            tolerance: Real(r.tolerance),
            max_equivariance_error: Real(r.max_equivariance_error),
            per_generator: reals(&r.per_generator),
            nonconstancy_gap: Real(r.nonconstancy_gap),
            nonconstancy_threshold: Real(r.nonconstancy_threshold),
            pass: r.pass,
        }
    }
}

/// Canonical text form: pretty JSON with a trailing newline.
pub fn to_text<T: Serialize>(doc: &T) -> String {
    let mut s = serde_json::to_string_pretty(doc).expect("documents always serialize");
    s.push('\n');
    s
}

pub fn from_text<T: for<'de> Deserialize<'de>>(text: &str) -> Result<T, Invalid> {
    serde_json::from_str(text).map_err(|e| Invalid(format!("malformed document: {e}")))
}

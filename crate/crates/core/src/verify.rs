//! Independent checks: sampled equivariance and non-constancy of witness
//! maps, a brute-force orbit search, and two linear-algebra oracles.

use std::collections::{HashSet, VecDeque};

use num_bigint::BigInt;
use num_traits::Signed;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::action::MatrixAction;
use crate::error::{Error, Result};
use crate::exact::{intersect_subspaces, rational_kernel, IntegerMatrix, RationalSubspace};
use crate::witness::{circle_distance, frac, WitnessSpec};

pub const DEFAULT_SAMPLES: usize = 1000;
pub const DEFAULT_SEED: u64 = 0;
pub const DEFAULT_TOLERANCE: f64 = 1e-9;
/// Non-constancy threshold, relative to `‖v‖`.
pub const NONCONSTANCY_FACTOR: f64 = 1e-3;

/// Outcome of a sampled verification run.
#[derive(Debug, Clone, PartialEq)]
pub struct VerificationReport {
    pub samples: usize,
    pub seed: u64,
    pub tolerance: f64,
    /// Largest torus distance between `f(ρ(e_j)x)` and `σ(e_j)f(x)`.
    pub max_equivariance_error: f64,
    /// The same maximum, per generator.
    pub per_generator: Vec<f64>,
    /// Largest distance between two sampled values of `S`.
    pub nonconstancy_gap: f64,
    pub nonconstancy_threshold: f64,
    pub pass: bool,
}

/// Max over coordinates of the circle distance.
pub fn torus_distance(a: &[f64], b: &[f64]) -> f64 {
    a.iter()
        .zip(b)
        .map(|(&x, &y)| circle_distance(x, y))
        .fold(0.0, f64::max)
}

/// `g x mod 1`.
pub fn act_on_torus(g: &[Vec<f64>], x: &[f64]) -> Vec<f64> {
    g.iter()
        .map(|row| frac(row.iter().zip(x).map(|(a, b)| a * b).sum()))
        .collect()
}

/// Uniform points of `T^dim` from a seeded ChaCha8 stream.
pub fn sample_points(dim: usize, count: usize, seed: u64) -> Vec<Vec<f64>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| (0..dim).map(|_| rng.random::<f64>()).collect())
        .collect()
}

/// Samples `n_samples` points and measures, for every generator, how far
/// `f` is from intertwining `ρ` and `σ`. Also runs [`check_nonaffine`] on
/// the same points; `pass` requires both.
pub fn check_equivariance(
    w: &WitnessSpec,
    rho: &MatrixAction,
    sigma: &MatrixAction,
    n_samples: usize,
    seed: u64,
    tol: f64,
) -> Result<VerificationReport> {
    if rho.dim() != w.source_dim() || sigma.dim() != w.target_dim() {
        return Err(Error::DimensionMismatch {
            expected: w.source_dim(),
            found: rho.dim(),
        });
    }
    if rho.rank() != sigma.rank() {
        return Err(Error::RankMismatch {
            source_rank: rho.rank(),
            target_rank: sigma.rank(),
        });
    }
    let points = sample_points(w.source_dim(), n_samples, seed);
    let rho_f: Vec<Vec<Vec<f64>>> = rho.generators().iter().map(IntegerMatrix::to_f64_rows).collect();
    let sigma_f: Vec<Vec<Vec<f64>>> = sigma.generators().iter().map(IntegerMatrix::to_f64_rows).collect();
    let mut per_generator = vec![0.0f64; rho.rank()];
    for x in &points {
        let fx = w.eval_f(x);
        for (j, (r, s)) in rho_f.iter().zip(&sigma_f).enumerate() {
            let lhs = w.eval_f(&act_on_torus(r, x));
            let rhs = act_on_torus(s, &fx);
            per_generator[j] = per_generator[j].max(torus_distance(&lhs, &rhs));
        }
    }
    let max_equivariance_error = per_generator.iter().copied().fold(0.0, f64::max);
    let nonconstancy_gap = gap_over(w, &points);
    let nonconstancy_threshold = NONCONSTANCY_FACTOR * w.direction_norm();
    Ok(VerificationReport {
        samples: n_samples,
        seed,
        tolerance: tol,
        max_equivariance_error,
        per_generator,
        nonconstancy_gap,
        nonconstancy_threshold,
        pass: max_equivariance_error < tol && nonconstancy_gap > nonconstancy_threshold,
    })
}

fn gap_over(w: &WitnessSpec, samples: &[Vec<f64>]) -> f64 {
    let mut values = vec![w.eval_s(&vec![0.0; w.source_dim()]), w.eval_s(w.x0())];
    values.extend(samples.iter().map(|x| w.eval_s(x)));
    let mut gap = 0.0f64;
    for i in 0..values.len() {
        for j in i + 1..values.len() {
            let d = values[i]
                .iter()
                .zip(&values[j])
                .map(|(a, b)| (a - b) * (a - b))
                .sum::<f64>()
                .sqrt();
            gap = gap.max(d);
        }
    }
    gap
}

/// Largest distance between values of `S` at `0`, `x₀` and `n_samples`
/// seeded points. A positive gap means `S`, hence the witness, is not
/// constant.
pub fn check_nonaffine(w: &WitnessSpec, n_samples: usize, seed: u64) -> f64 {
    gap_over(w, &sample_points(w.source_dim(), n_samples, seed))
}

/// Result of a bounded orbit search.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum OrbitSearch {
    /// The orbit closed up with this many elements.
    Finite(usize),
    /// The search stopped after visiting `visited` vectors, either because
    /// the size bound was hit or because a vector exceeded the norm bound
    /// (`escaped`). Neither proves the orbit infinite.
    Inconclusive { visited: usize, escaped: bool },
}

/// Breadth-first search of the orbit of `z` under the group generated by
/// `generators` and their inverses. The generators need not commute.
pub fn brute_orbit_finite(
    generators: &[IntegerMatrix],
    z: &[BigInt],
    size_bound: usize,
    norm_bound: &BigInt,
) -> Result<OrbitSearch> {
    let mut moves = Vec::with_capacity(2 * generators.len());
    for g in generators {
        moves.push(g.clone());
        moves.push(g.unimodular_inverse()?);
    }
    let mut seen: HashSet<Vec<BigInt>> = HashSet::new();
    let mut queue = VecDeque::new();
    seen.insert(z.to_vec());
    queue.push_back(z.to_vec());
    while let Some(v) = queue.pop_front() {
        for g in &moves {
            let w = g.mul_vec(&v);
            if seen.contains(&w) {
                continue;
            }
            if w.iter().any(|x| x.abs() > *norm_bound) {
                return Ok(OrbitSearch::Inconclusive {
                    visited: seen.len(),
                    escaped: true,
                });
            }
            if seen.len() >= size_bound {
                return Ok(OrbitSearch::Inconclusive {
                    visited: seen.len(),
                    escaped: false,
                });
            }
            seen.insert(w.clone());
            queue.push_back(w);
        }
    }
    Ok(OrbitSearch::Finite(seen.len()))
}

fn common_fixed_space(dim: usize, generators: &[IntegerMatrix]) -> RationalSubspace {
    let kernels: Vec<RationalSubspace> = generators
        .iter()
        .map(|g| rational_kernel(&g.minus_identity()))
        .collect();
    if kernels.is_empty() {
        return RationalSubspace::full(dim);
    }
    intersect_subspaces(&kernels).expect("equal dimensions")
}

/// For a commuting family of integer matrices (not necessarily
/// invertible): if the transposed family has a nonzero common fixed
/// vector, so does the family itself. Returns whether that holds.
pub fn oracle_prop42(generators: &[IntegerMatrix]) -> Result<bool> {
    let dim = generators
        .first()
        .ok_or(Error::Degenerate("empty family"))?
        .rows();
    for g in generators {
        if !g.is_square() {
            return Err(Error::NotSquare {
                rows: g.rows(),
                cols: g.cols(),
            });
        }
        if g.rows() != dim {
            return Err(Error::DimensionMismatch {
                expected: dim,
                found: g.rows(),
            });
        }
    }
    for i in 0..generators.len() {
        for j in i + 1..generators.len() {
            if &generators[i] * &generators[j] != &generators[j] * &generators[i] {
                return Err(Error::NonCommuting(i, j));
            }
        }
    }
    let transposed: Vec<IntegerMatrix> = generators.iter().map(IntegerMatrix::transpose).collect();
    let fix_t = common_fixed_space(dim, &transposed);
    let fix = common_fixed_space(dim, generators);
    Ok(fix_t.is_zero() || !fix.is_zero())
}

/// Ergodicity agrees with the absence of finite-orbit vectors in the Lie
/// algebra.
pub fn oracle_prop43(a: &MatrixAction) -> bool {
    a.is_ergodic() == a.finite_orbit_subspace().is_zero()
}

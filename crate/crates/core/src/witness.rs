//! Explicit non-affine equivariant maps.
//!
//! Given a character `χ₀` whose stabilizer is exactly the subgroup `Λ`
//! acting trivially on the finite-orbit characters, a point `x₀`, and a
//! tent bump `g` on the circle with values along a `Λ`-fixed vector `v`,
//!
//! ```text
//! S(x) = Σ_i σ(γ_i)⁻¹ · g(⟨χ₀, ρ(γ_i) x⟩ mod 1)
//! ```
//!
//! summed over coset representatives `γ_i` of `Λ`, is equivariant from
//! `(T^m, ρ)` to `(R^n, σ)`, vanishes at `0` and not at `x₀`. Reducing
//! mod `Z^n` gives the map `f`.

use num_bigint::BigInt;
use num_integer::Roots;
use num_traits::{Signed, ToPrimitive, Zero};

use crate::action::{MatrixAction, SubgroupLattice};
use crate::decide::{Certificate, DecisionReport};
use crate::error::{Error, Result};
use crate::exact::{IntegerMatrix, LatticeBasis};

/// Minimum pairwise arc distance required of the circle values.
pub const DEFAULT_SEPARATION: f64 = 1e-3;

/// How many shifts of the `√p` sequence `select_x0` tries.
pub const MAX_X0_ATTEMPTS: usize = 64;

/// Distance on `R/Z`.
pub fn circle_distance(a: f64, b: f64) -> f64 {
    let d = (a - b).rem_euclid(1.0);
    d.min(1.0 - d)
}

/// Reduces into `[0, 1)`.
pub fn frac(t: f64) -> f64 {
    let r = t.rem_euclid(1.0);
    // rem_euclid can round up to exactly 1.0 for tiny negative inputs
    if r >= 1.0 {
        0.0
    } else {
        r
    }
}

/// Tent on the circle: 1 at `center`, 0 from arc distance `radius` on.
#[derive(Debug, Clone, PartialEq)]
pub struct BumpFunction {
    pub center: f64,
    pub radius: f64,
    pub direction: Vec<BigInt>,
}

impl BumpFunction {
    /// Scalar profile; the bump's value is this times `direction`.
    pub fn weight(&self, t: f64) -> f64 {
        let d = circle_distance(t, self.center);
        if d >= self.radius {
            0.0
        } else {
            1.0 - d / self.radius
        }
    }
}

/// Everything that defines a witness map. Derived data (the characters
/// `ρ(γ_i)ᵀχ₀` and directions `σ(γ_i)⁻¹v`) is recomputed from these by
/// [`WitnessSpec::new`].
#[derive(Debug, Clone, PartialEq)]
pub struct WitnessParts {
    pub chi0: Vec<BigInt>,
    pub x0: Vec<f64>,
    pub reps: Vec<Vec<i64>>,
    /// `c[0] = 0` and `c[i] = ⟨χ₀, ρ(γ_i) x₀⟩ mod 1` for `i = 1..=d`.
    pub c: Vec<f64>,
    pub bump: BumpFunction,
    /// Basis of the stabilizer subgroup.
    pub subgroup: Vec<Vec<i64>>,
    /// `ρ(γ_i)` per representative.
    pub rho_reps: Vec<IntegerMatrix>,
    /// `σ(γ_i)⁻¹` per representative.
    pub sigma_inv_reps: Vec<IntegerMatrix>,
}

#[derive(Debug, Clone, PartialEq)]
struct Term {
    character: Vec<f64>,
    direction: Vec<f64>,
}

/// A validated witness ready for evaluation.
#[derive(Debug, Clone, PartialEq)]
pub struct WitnessSpec {
    parts: WitnessParts,
    terms: Vec<Term>,
}

fn to_f64(v: &[BigInt]) -> Vec<f64> {
    v.iter().map(|x| x.to_f64().expect("finite")).collect()
}

impl WitnessSpec {
    /// Checks shapes and precomputes the evaluation terms. The direction
    /// must be nonzero; nothing else about the mathematics is checked here
    /// (that is the job of the verifier).
    pub fn new(parts: WitnessParts) -> Result<Self> {
        let bad = |msg: &str| Err(Error::InvalidReport(msg.to_string()));
        let m = parts.chi0.len();
        let n = parts.bump.direction.len();
        let d = parts.reps.len();
        if m == 0 || n == 0 || d == 0 {
            return bad("empty character, direction or representative list");
        }
        if parts.x0.len() != m {
            return bad("x0 has the wrong dimension");
        }
        if parts.c.len() != d + 1 {
            return bad("expected one circle value per representative plus c0");
        }
        if parts.rho_reps.len() != d || parts.sigma_inv_reps.len() != d {
            return bad("expected one matrix pair per representative");
        }
        if parts.rho_reps.iter().any(|g| !g.is_square() || g.rows() != m)
            || parts.sigma_inv_reps.iter().any(|g| !g.is_square() || g.rows() != n)
        {
            return bad("representative matrices have the wrong shape");
        }
        if parts.bump.direction.iter().all(Zero::is_zero) {
            return bad("bump direction is zero");
        }
        if !(parts.bump.radius > 0.0 && parts.bump.radius.is_finite()) {
            return bad("bump radius must be positive");
        }
        let terms = parts
            .rho_reps
            .iter()
            .zip(&parts.sigma_inv_reps)
            .map(|(r, s)| Term {
                character: to_f64(&r.transpose().mul_vec(&parts.chi0)),
                direction: to_f64(&s.mul_vec(&parts.bump.direction)),
            })
            .collect();
        Ok(Self { parts, terms })
    }

    pub fn parts(&self) -> &WitnessParts {
        &self.parts
    }

    pub fn into_parts(self) -> WitnessParts {
        self.parts
    }

    pub fn source_dim(&self) -> usize {
        self.parts.chi0.len()
    }

    pub fn target_dim(&self) -> usize {
        self.parts.bump.direction.len()
    }

    /// Number of coset representatives `d`.
    pub fn degree(&self) -> usize {
        self.parts.reps.len()
    }

    pub fn chi0(&self) -> &[BigInt] {
        &self.parts.chi0
    }

    pub fn x0(&self) -> &[f64] {
        &self.parts.x0
    }

    pub fn direction(&self) -> &[BigInt] {
        &self.parts.bump.direction
    }

    /// Euclidean norm of `v`.
    pub fn direction_norm(&self) -> f64 {
        to_f64(&self.parts.bump.direction)
            .iter()
            .map(|x| x * x)
            .sum::<f64>()
            .sqrt()
    }

    /// The lift `S : T^m → R^n`.
    pub fn eval_s(&self, x: &[f64]) -> Vec<f64> {
        assert_eq!(x.len(), self.source_dim());
        let mut out = vec![0.0; self.target_dim()];
        for term in &self.terms {
            let t: f64 = term.character.iter().zip(x).map(|(z, xi)| z * xi).sum();
            let w = self.parts.bump.weight(frac(t));
            if w == 0.0 {
                continue;
            }
            for (o, u) in out.iter_mut().zip(&term.direction) {
                *o += w * u;
            }
        }
        out
    }

    /// The witness map `f = S mod Z^n`.
    pub fn eval_f(&self, x: &[f64]) -> Vec<f64> {
        self.eval_s(x).into_iter().map(frac).collect()
    }
}

pub fn eval_s(w: &WitnessSpec, x: &[f64]) -> Vec<f64> {
    w.eval_s(x)
}

pub fn eval_f(w: &WitnessSpec, x: &[f64]) -> Vec<f64> {
    w.eval_f(x)
}

/// `{dual(γ)χ - χ : γ}` over the given representatives.
fn orbit_differences(chi: &[BigInt], dual_reps: &[IntegerMatrix]) -> Vec<Vec<BigInt>> {
    dual_reps
        .iter()
        .map(|g| {
            g.mul_vec(chi)
                .into_iter()
                .zip(chi)
                .map(|(a, b)| a - b)
                .collect()
        })
        .collect()
}

/// Smallest `n >= 1` with `n·A₁ ∩ A₂ ⊆ {0}`.
///
/// If `n a = b` with `a ≠ 0` then `n <= ‖b‖∞`, so `n = max ‖b‖∞ + 1`
/// always works and bounds the search.
pub fn smallest_separating_multiplier(a1: &[Vec<BigInt>], a2: &[Vec<BigInt>]) -> u64 {
    let bound = a2
        .iter()
        .flatten()
        .map(|x| x.abs().to_u64().unwrap_or(u64::MAX - 1))
        .max()
        .unwrap_or(0)
        + 1;
    let nonzero_a1: Vec<&Vec<BigInt>> = a1.iter().filter(|v| v.iter().any(|x| !x.is_zero())).collect();
    let nonzero_a2: Vec<&Vec<BigInt>> = a2.iter().filter(|v| v.iter().any(|x| !x.is_zero())).collect();
    (1..=bound)
        .find(|&n| {
            let n = BigInt::from(n);
            !nonzero_a1.iter().any(|a| {
                let scaled: Vec<BigInt> = a.iter().map(|x| x * &n).collect();
                nonzero_a2.iter().any(|b| **b == scaled)
            })
        })
        .unwrap_or(bound)
}

/// A character in `f_lattice` whose stabilizer under `dual` is exactly
/// `subgroup`, built by folding the lattice basis `χ ← nχ - χ_next`.
pub fn select_chi0(
    f_lattice: &LatticeBasis,
    dual: &MatrixAction,
    subgroup: &SubgroupLattice,
) -> Result<Vec<BigInt>> {
    let basis = f_lattice.basis();
    let first = basis.first().ok_or(Error::EmptyF)?;
    let reps = subgroup.coset_representatives();
    let dual_reps: Vec<IntegerMatrix> = reps.iter().map(|g| dual.apply(g)).collect();
    let mut chi = first.clone();
    for next in &basis[1..] {
        let a1 = orbit_differences(&chi, &dual_reps);
        let a2 = orbit_differences(next, &dual_reps);
        let n = BigInt::from(smallest_separating_multiplier(&a1, &a2));
        chi = chi.iter().zip(next).map(|(a, b)| &n * a - b).collect();
    }
    for (g, gamma) in dual_reps.iter().zip(&reps) {
        if gamma.iter().any(|&x| x != 0) && g.mul_vec(&chi) == chi {
            return Err(Error::InvalidReport(format!(
                "character {chi:?} is fixed by representative {gamma:?} outside the subgroup"
            )));
        }
    }
    Ok(chi)
}

/// The first `count` primes after skipping `skip`.
fn primes(skip: usize, count: usize) -> Vec<u64> {
    let mut out = Vec::with_capacity(count);
    let mut seen = 0;
    let mut n = 2u64;
    while out.len() < count {
        if (2..).take_while(|p| p * p <= n).all(|p| !n.is_multiple_of(p)) {
            if seen >= skip {
                out.push(n);
            }
            seen += 1;
        }
        n += 1;
    }
    out
}

/// Fractional part of `√p`. The integer part is exact, so only the
/// fractional part carries rounding.
fn frac_sqrt(p: u64) -> f64 {
    let floor = p.sqrt();
    (p as f64).sqrt() - floor as f64
}

/// Candidate base point number `attempt`: coordinates `frac(√p)` for
/// consecutive primes, starting `attempt` primes in.
pub fn x0_candidate(dim: usize, attempt: usize) -> Vec<f64> {
    primes(attempt, dim).into_iter().map(frac_sqrt).collect()
}

/// `c_0 = 0` followed by `⟨ρ(γ_i)ᵀχ₀, x₀⟩ mod 1`.
pub fn circle_values(rho_reps: &[IntegerMatrix], chi0: &[BigInt], x0: &[f64]) -> Vec<f64> {
    let mut c = vec![0.0];
    for r in rho_reps {
        let z = to_f64(&r.transpose().mul_vec(chi0));
        c.push(frac(z.iter().zip(x0).map(|(a, b)| a * b).sum()));
    }
    c
}

fn min_pairwise_gap(c: &[f64]) -> f64 {
    let mut best = f64::INFINITY;
    for i in 0..c.len() {
        for j in i + 1..c.len() {
            best = best.min(circle_distance(c[i], c[j]));
        }
    }
    best
}

/// Searches the `√p` sequence for a base point whose circle values are
/// pairwise more than `tol` apart.
pub fn select_x0(rho_reps: &[IntegerMatrix], chi0: &[BigInt], tol: f64) -> Result<Vec<f64>> {
    let mut best = 0.0f64;
    for attempt in 0..MAX_X0_ATTEMPTS {
        let x0 = x0_candidate(chi0.len(), attempt);
        let gap = min_pairwise_gap(&circle_values(rho_reps, chi0, &x0));
        if gap > tol {
            return Ok(x0);
        }
        best = best.max(gap);
    }
    Err(Error::SeparationFailure { min_gap: best })
}

/// Ensures the report claims existence and that its subgroup, lattice and
/// fixed vector are the ones this pair actually has.
fn validated_certificate(
    rho: &MatrixAction,
    sigma: &MatrixAction,
    report: &DecisionReport,
) -> Result<(LatticeBasis, SubgroupLattice, Vec<BigInt>)> {
    if rho.rank() != sigma.rank() {
        return Err(Error::RankMismatch {
            source_rank: rho.rank(),
            target_rank: sigma.rank(),
        });
    }
    if !report.exists_nonaffine {
        return Err(Error::NotNonaffine);
    }
    let Certificate::Exists {
        f_lattice,
        subgroup,
        fixed_vector,
    } = &report.certificate
    else {
        return Err(Error::InvalidReport("certificate does not assert existence".into()));
    };
    let f = rho.finite_orbit_characters();
    if f.rank() == 0 {
        return Err(Error::EmptyF);
    }
    if *f_lattice != f {
        return Err(Error::InvalidReport("finite-orbit lattice does not match the source".into()));
    }
    if *subgroup != rho.gamma_rho() {
        return Err(Error::InvalidReport("subgroup is not the stabilizer of the finite-orbit lattice".into()));
    }
    if fixed_vector.len() != sigma.dim() || fixed_vector.iter().all(Zero::is_zero) {
        return Err(Error::InvalidReport("fixed vector is zero or has the wrong length".into()));
    }
    if subgroup
        .basis_i64()
        .iter()
        .any(|b| sigma.apply(b).mul_vec(fixed_vector) != *fixed_vector)
    {
        return Err(Error::InvalidReport("fixed vector is moved by the subgroup".into()));
    }
    Ok((f, subgroup.clone(), fixed_vector.clone()))
}

/// Builds the witness for a pair with a positive decision, with the
/// default separation tolerance.
pub fn build_witness(
    rho: &MatrixAction,
    sigma: &MatrixAction,
    report: &DecisionReport,
) -> Result<WitnessSpec> {
    build_witness_with_tol(rho, sigma, report, DEFAULT_SEPARATION)
}

pub fn build_witness_with_tol(
    rho: &MatrixAction,
    sigma: &MatrixAction,
    report: &DecisionReport,
    tol: f64,
) -> Result<WitnessSpec> {
    let (f, subgroup, v) = validated_certificate(rho, sigma, report)?;
    let chi0 = select_chi0(&f, &rho.dual(), &subgroup)?;
    let reps = subgroup.coset_representatives();
    let rho_reps: Vec<IntegerMatrix> = reps.iter().map(|g| rho.apply(g)).collect();
    let sigma_inv_reps: Vec<IntegerMatrix> = reps.iter().map(|g| sigma.apply(&negate(g))).collect();
    let x0 = select_x0(&rho_reps, &chi0, tol)?;
    let c = circle_values(&rho_reps, &chi0, &x0);
    let center = *c.last().expect("at least one representative");
    let gap = c[..c.len() - 1]
        .iter()
        .map(|&ci| circle_distance(ci, center))
        .fold(f64::INFINITY, f64::min);
    WitnessSpec::new(WitnessParts {
        chi0,
        x0,
        reps,
        c,
        bump: BumpFunction {
            center,
            radius: gap / 2.0,
            direction: v,
        },
        subgroup: subgroup.basis_i64(),
        rho_reps,
        sigma_inv_reps,
    })
}

fn negate(g: &[i64]) -> Vec<i64> {
    g.iter().map(|x| -x).collect()
}

/// The same witness over another set of representatives of the same
/// cosets, listed in the same order. Only the matrices change.
pub fn with_representatives(
    w: &WitnessSpec,
    rho: &MatrixAction,
    sigma: &MatrixAction,
    reps: Vec<Vec<i64>>,
) -> Result<WitnessSpec> {
    let parts = w.parts();
    let subgroup = SubgroupLattice::from_basis(LatticeBasis::from_generators_i64(
        rho.rank(),
        &parts.subgroup,
    ))
    .ok_or_else(|| Error::InvalidReport("subgroup is not of finite index".into()))?;
    if reps.len() != parts.reps.len() {
        return Err(Error::InvalidReport("wrong number of representatives".into()));
    }
    for (new, old) in reps.iter().zip(&parts.reps) {
        if subgroup.reduce(new) != subgroup.reduce(old) {
            return Err(Error::InvalidReport(format!(
                "{new:?} does not represent the coset of {old:?}"
            )));
        }
    }
    let mut next = parts.clone();
    next.rho_reps = reps.iter().map(|g| rho.apply(g)).collect();
    next.sigma_inv_reps = reps.iter().map(|g| sigma.apply(&negate(g))).collect();
    next.reps = reps;
    WitnessSpec::new(next)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::decide::decide_nonaffine;

    fn m(rows: &[Vec<i64>]) -> IntegerMatrix {
        IntegerMatrix::from_rows(rows)
    }

    fn big(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&x| x.into()).collect()
    }

    fn shear_to_identity() -> (MatrixAction, MatrixAction) {
        (
            MatrixAction::cyclic(m(&[vec![1, 1], vec![0, 1]])).unwrap(),
            MatrixAction::identity(1, 1),
        )
    }

    fn order3_to_shear() -> (MatrixAction, MatrixAction) {
        (
            MatrixAction::cyclic(m(&[vec![0, -1], vec![1, -1]])).unwrap(),
            MatrixAction::cyclic(m(&[vec![1, 1], vec![0, 1]])).unwrap(),
        )
    }

    fn build(pair: &(MatrixAction, MatrixAction)) -> WitnessSpec {
        let report = decide_nonaffine(&pair.0, &pair.1).unwrap();
        build_witness(&pair.0, &pair.1, &report).unwrap()
    }

    #[test]
    fn circle_distance_wraps() {
        assert!((circle_distance(0.95, 0.05) - 0.1).abs() < 1e-15);
        assert_eq!(circle_distance(0.25, 0.25), 0.0);
        assert!((circle_distance(-0.25, 0.25) - 0.5).abs() < 1e-15);
    }

    #[test]
    fn multiplier_examples() {
        let a = big(&[1, 0]);
        let zero = big(&[0, 0]);
        let set = vec![zero.clone(), a.clone()];
        assert_eq!(smallest_separating_multiplier(&set, &set), 2);
        assert_eq!(smallest_separating_multiplier(std::slice::from_ref(&zero), &set), 1);
        let twice = vec![zero, big(&[2, 0])];
        assert_eq!(smallest_separating_multiplier(&set, &twice), 1);
    }

    #[test]
    fn chi0_rank_one_is_the_generator() {
        let (rho, _) = shear_to_identity();
        let f = rho.finite_orbit_characters();
        let chi = select_chi0(&f, &rho.dual(), &rho.gamma_rho()).unwrap();
        assert_eq!(chi, big(&[0, 1]));
    }

    #[test]
    fn chi0_for_order_three() {
        let (rho, _) = order3_to_shear();
        let f = rho.finite_orbit_characters();
        assert_eq!(f.rank(), 2);
        let g = rho.gamma_rho();
        let dual = rho.dual();
        let chi = select_chi0(&f, &dual, &g).unwrap();
        for e in 1..3 {
            assert_ne!(dual.apply(&[e]).mul_vec(&chi), chi);
        }
        assert_eq!(dual.apply(&[3]).mul_vec(&chi), chi);
    }

    #[test]
    fn chi0_needs_empty_check() {
        let rho = MatrixAction::cyclic(m(&[vec![2, 1], vec![1, 1]])).unwrap();
        let f = rho.finite_orbit_characters();
        assert_eq!(
            select_chi0(&f, &rho.dual(), &rho.gamma_rho()),
            Err(Error::EmptyF)
        );
    }

    #[test]
    fn x0_sequence() {
        let x = x0_candidate(1, 0);
        assert!((x[0] - (2f64.sqrt() - 1.0)).abs() < 1e-15);
        let x = x0_candidate(3, 1);
        assert!((x[0] - (3f64.sqrt() - 1.0)).abs() < 1e-15);
        assert!((x[2] - (7f64.sqrt() - 2.0)).abs() < 1e-15);
    }

    #[test]
    fn x0_for_unit_character() {
        let reps = vec![IntegerMatrix::identity(1)];
        let x0 = select_x0(&reps, &big(&[1]), DEFAULT_SEPARATION).unwrap();
        let c = circle_values(&reps, &big(&[1]), &x0);
        assert_eq!(c[0], 0.0);
        assert!((c[1] - 0.41421356).abs() < 1e-8);
    }

    #[test]
    fn impossible_separation() {
        let (rho, _) = order3_to_shear();
        let reps: Vec<IntegerMatrix> = (0..3).map(|e| rho.apply(&[e])).collect();
        let err = select_x0(&reps, &big(&[1, 0]), 0.5).unwrap_err();
        assert!(matches!(err, Error::SeparationFailure { min_gap } if min_gap <= 0.5));
    }

    #[test]
    fn unipotent_witness_shape() {
        let w = build(&shear_to_identity());
        assert_eq!(w.degree(), 1);
        assert_eq!(w.chi0(), big(&[0, 1]).as_slice());
        assert_eq!(w.direction(), big(&[1]).as_slice());
        assert_eq!(w.parts().bump.center, w.parts().c[1]);
    }

    #[test]
    fn order_three_witness_shape() {
        let w = build(&order3_to_shear());
        assert_eq!(w.degree(), 3);
        assert_eq!(w.direction(), big(&[1, 0]).as_slice());
        let c = &w.parts().c;
        let delta = w.parts().bump.radius;
        for &ci in &c[..3] {
            assert!(circle_distance(ci, c[3]) >= 2.0 * delta - 1e-15);
        }
    }

    #[test]
    fn s_vanishes_at_origin_and_not_at_x0() {
        for pair in [shear_to_identity(), order3_to_shear()] {
            let w = build(&pair);
            let zero = vec![0.0; w.source_dim()];
            assert!(w.eval_s(&zero).iter().all(|&s| s == 0.0));
            let s = w.eval_s(w.x0());
            let last = w.parts().sigma_inv_reps.last().unwrap();
            let expected = to_f64(&last.mul_vec(w.direction()));
            for (a, b) in s.iter().zip(&expected) {
                assert!((a - b).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn f_reduces_mod_one() {
        assert_eq!(frac(1.25), 0.25);
        assert_eq!(frac(-0.5), 0.5);
        assert_eq!(frac(-1e-300), 0.0);
        let w = build(&shear_to_identity());
        assert_eq!(w.eval_f(w.x0()), vec![0.0]);
    }

    #[test]
    fn build_rejects_negative_report() {
        let rho = MatrixAction::identity(1, 1);
        let sigma = MatrixAction::cyclic(IntegerMatrix::scalar(-1)).unwrap();
        let report = decide_nonaffine(&rho, &sigma).unwrap();
        assert_eq!(build_witness(&rho, &sigma, &report), Err(Error::NotNonaffine));
    }

    #[test]
    fn shifted_representatives_are_checked() {
        let pair = order3_to_shear();
        let w = build(&pair);
        let shifted = with_representatives(&w, &pair.0, &pair.1, vec![vec![3], vec![-2], vec![5]]);
        assert!(shifted.is_ok());
        let wrong = with_representatives(&w, &pair.0, &pair.1, vec![vec![1], vec![2], vec![3]]);
        assert!(wrong.is_err());
    }

    #[test]
    fn zero_direction_rejected() {
        let mut parts = build(&shear_to_identity()).into_parts();
        parts.bump.direction = big(&[0]);
        assert!(WitnessSpec::new(parts).is_err());
    }
}

//! Actions of `Z^r` on the torus `T^m = R^m / Z^m` by commuting unimodular
//! matrices, together with the lattices and subspaces the rigidity
//! decisions are phrased in.
//!
//! Group elements are exponent vectors `γ ∈ Z^r`, acting by
//! `G_1^{γ_1} ⋯ G_r^{γ_r}`. The same matrices act linearly on the Lie
//! algebra `R^m`. Characters of `T^m` are integer vectors `z`, and the dual
//! action sends `z` to `G^T z`.

use num_bigint::BigInt;
use num_traits::{ToPrimitive, Zero};

use crate::cyclo::{k_index, matrix_root_of_unity_orders};
use crate::error::{Error, Result};
use crate::exact::{
    intersect_subspaces, lattice_saturate, rational_kernel, IntegerMatrix, LatticeBasis,
    RationalSubspace,
};

/// An action of `Z^r` on `T^m` by pairwise commuting unimodular generators.
#[derive(Clone, PartialEq, Eq)]
pub struct MatrixAction {
    dim: usize,
    generators: Vec<IntegerMatrix>,
    inverses: Vec<IntegerMatrix>,
}

impl std::fmt::Debug for MatrixAction {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("MatrixAction")
            .field("dim", &self.dim)
            .field("generators", &self.generators)
            .finish()
    }
}

impl MatrixAction {
    /// Validates squareness, dimension agreement, unimodularity and
    /// commutativity, in that order.
    pub fn new(generators: Vec<IntegerMatrix>) -> Result<Self> {
        let first = generators
            .first()
            .ok_or(Error::Degenerate("an action needs at least one generator"))?;
        let dim = first.rows();
        if dim == 0 {
            return Err(Error::Degenerate("torus dimension must be positive"));
        }
        for g in &generators {
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
        let mut inverses = Vec::with_capacity(generators.len());
        for (index, g) in generators.iter().enumerate() {
            match g.unimodular_inverse() {
                Ok(inv) => inverses.push(inv),
                Err(Error::NotUnimodular { det }) => {
                    return Err(Error::GeneratorNotUnimodular { index, det })
                }
                Err(e) => return Err(e),
            }
        }
        for i in 0..generators.len() {
            for j in i + 1..generators.len() {
                if &generators[i] * &generators[j] != &generators[j] * &generators[i] {
                    return Err(Error::NonCommuting(i, j));
                }
            }
        }
        Ok(Self {
            dim,
            generators,
            inverses,
        })
    }

    /// Rank-one action generated by a single matrix.
    pub fn cyclic(generator: IntegerMatrix) -> Result<Self> {
        Self::new(vec![generator])
    }

    pub fn identity(dim: usize, rank: usize) -> Self {
        Self::new(vec![IntegerMatrix::identity(dim); rank]).expect("identity action is valid")
    }

    /// Rank `r` of the acting group `Z^r`.
    pub fn rank(&self) -> usize {
        self.generators.len()
    }

    /// Dimension `m` of the torus.
    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn generators(&self) -> &[IntegerMatrix] {
        &self.generators
    }

    /// The matrix of the group element `γ`.
    pub fn apply(&self, gamma: &[i64]) -> IntegerMatrix {
        assert_eq!(gamma.len(), self.rank(), "exponent vector has wrong length");
        let mut acc = IntegerMatrix::identity(self.dim);
        for (j, &e) in gamma.iter().enumerate() {
            if e == 0 {
                continue;
            }
            let base = if e > 0 {
                &self.generators[j]
            } else {
                &self.inverses[j]
            };
            acc = &acc * &base.pow(e.unsigned_abs());
        }
        acc
    }

    /// The dual action on characters: every generator transposed.
    pub fn dual(&self) -> Self {
        Self {
            dim: self.dim,
            generators: self.generators.iter().map(IntegerMatrix::transpose).collect(),
            inverses: self.inverses.iter().map(IntegerMatrix::transpose).collect(),
        }
    }

    /// `k_index` of each generator.
    pub fn k_indices(&self) -> Vec<u64> {
        self.generators
            .iter()
            .map(|g| k_index(g).expect("generators are unimodular"))
            .collect()
    }

    /// Vectors of `Q^m` with finite orbit: `∩_j ker(G_j^{k_j} - I)`.
    ///
    /// `G^{k}` has no root-of-unity eigenvalue besides 1, so a vector with
    /// finite `G`-orbit is already fixed by `G^{k}`; conversely commuting
    /// generators keep the orbit of a common fixed vector of the `G_j^{k_j}`
    /// inside a finite box.
    pub fn finite_orbit_subspace(&self) -> RationalSubspace {
        let kernels: Vec<RationalSubspace> = self
            .generators
            .iter()
            .zip(self.k_indices())
            .map(|(g, k)| rational_kernel(&g.pow(k).minus_identity()))
            .collect();
        intersect_subspaces(&kernels).expect("kernels share the ambient dimension")
    }

    /// Integer points with finite orbit, as a saturated lattice.
    pub fn finite_orbit_lattice(&self) -> LatticeBasis {
        let w = self.finite_orbit_subspace();
        lattice_saturate(self.dim, &w.integer_basis())
    }

    /// The lattice `F` of characters with finite dual orbit.
    pub fn finite_orbit_characters(&self) -> LatticeBasis {
        self.dual().finite_orbit_lattice()
    }

    /// Ergodic exactly when no nonzero character has a finite dual orbit.
    pub fn is_ergodic(&self) -> bool {
        self.finite_orbit_characters().rank() == 0
    }

    /// Subgroup of exponents acting trivially on the finite-orbit character
    /// lattice `F`.
    ///
    /// Each dual generator restricted to `F` has finite order `o_j`; the
    /// kernel of `Z^r → Aut(F)` contains `⊕ o_j Z`, so it is found by
    /// scanning the box `∏ [0, o_j)`.
    pub fn gamma_rho(&self) -> SubgroupLattice {
        let r = self.rank();
        let f = self.finite_orbit_characters();
        if f.rank() == 0 {
            return SubgroupLattice::full(r);
        }
        let dual = self.dual();
        let restricted: Vec<IntegerMatrix> = dual
            .generators
            .iter()
            .map(|g| restrict_to_lattice(g, &f))
            .collect();
        let orders: Vec<u64> = restricted.iter().map(finite_order).collect();

        // powers[j][a] = R_j^a for a < o_j
        let powers: Vec<Vec<IntegerMatrix>> = restricted
            .iter()
            .zip(&orders)
            .map(|(rj, &o)| {
                let mut v = Vec::with_capacity(o as usize);
                let mut acc = IntegerMatrix::identity(f.rank());
                for _ in 0..o {
                    v.push(acc.clone());
                    acc = &acc * rj;
                }
                v
            })
            .collect();

        let mut generators: Vec<Vec<i64>> = (0..r)
            .map(|j| {
                let mut e = vec![0i64; r];
                e[j] = orders[j] as i64;
                e
            })
            .collect();
        for gamma in MixedRadix::new(orders.iter().map(|&o| o as i64).collect()) {
            if gamma.iter().all(|&x| x == 0) {
                continue;
            }
            let mut acc = IntegerMatrix::identity(f.rank());
            for (j, &e) in gamma.iter().enumerate() {
                acc = &acc * &powers[j][e as usize];
            }
            if acc.is_identity() {
                generators.push(gamma);
            }
        }
        SubgroupLattice::from_basis(LatticeBasis::from_generators_i64(r, &generators))
            .expect("kernel contains a full-rank diagonal sublattice")
    }

    /// Vectors of `Q^m` fixed by every element of `subgroup`.
    pub fn fixed_subspace(&self, subgroup: &SubgroupLattice) -> RationalSubspace {
        assert_eq!(subgroup.rank(), self.rank());
        let kernels: Vec<RationalSubspace> = subgroup
            .basis_i64()
            .iter()
            .map(|b| rational_kernel(&self.apply(b).minus_identity()))
            .collect();
        intersect_subspaces(&kernels).expect("kernels share the ambient dimension")
    }
}

/// Matrix of `g` restricted to an invariant lattice, acting on coordinate
/// columns: column `i` holds the coordinates of `g f_i`.
fn restrict_to_lattice(g: &IntegerMatrix, lattice: &LatticeBasis) -> IntegerMatrix {
    let s = lattice.rank();
    let mut out = IntegerMatrix::zeros(s, s);
    for (i, f) in lattice.basis().iter().enumerate() {
        let image = g.mul_vec(f);
        let coords = lattice
            .coordinates(&image)
            .expect("finite-orbit lattice is invariant");
        for (k, c) in coords.into_iter().enumerate() {
            out.set(k, i, c);
        }
    }
    out
}

/// Order of a finite-order integer matrix. The order divides the lcm of its
/// root-of-unity eigenvalue orders, which caps the search.
fn finite_order(m: &IntegerMatrix) -> u64 {
    let cap = matrix_root_of_unity_orders(m).lcm();
    let mut acc = m.clone();
    for i in 1..=cap {
        if acc.is_identity() {
            return i;
        }
        acc = &acc * m;
    }
    panic!("restriction to the finite-orbit lattice must have finite order");
}

/// A finite-index subgroup of `Z^r`, in Hermite normal form.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct SubgroupLattice {
    lattice: LatticeBasis,
    index: u64,
}

impl SubgroupLattice {
    pub fn full(rank: usize) -> Self {
        Self {
            lattice: LatticeBasis::full(rank),
            index: 1,
        }
    }

    /// Wraps a full-rank lattice; `None` if the rank is deficient.
    pub fn from_basis(lattice: LatticeBasis) -> Option<Self> {
        let index = lattice.index()?.to_u64()?;
        Some(Self { lattice, index })
    }

    /// `⊕ k_j Z`.
    pub fn diagonal(multiples: &[u64]) -> Self {
        let r = multiples.len();
        let rows: Vec<Vec<i64>> = (0..r)
            .map(|j| {
                let mut v = vec![0; r];
                v[j] = multiples[j] as i64;
                v
            })
            .collect();
        Self::from_basis(LatticeBasis::from_generators_i64(r, &rows)).expect("positive diagonal")
    }

    pub fn rank(&self) -> usize {
        self.lattice.ambient_dim()
    }

    pub fn index(&self) -> u64 {
        self.index
    }

    pub fn lattice(&self) -> &LatticeBasis {
        &self.lattice
    }

    pub fn basis_i64(&self) -> Vec<Vec<i64>> {
        self.lattice.basis_i64()
    }

    pub fn contains(&self, gamma: &[i64]) -> bool {
        let z: Vec<BigInt> = gamma.iter().map(|&x| x.into()).collect();
        self.lattice.contains(&z)
    }

    /// Diagonal of the Hermite basis (the mixed radix of the quotient).
    pub fn diagonal_entries(&self) -> Vec<i64> {
        self.lattice
            .pivots()
            .into_iter()
            .map(|(_, p)| p.to_i64().expect("index fits in i64"))
            .collect()
    }

    /// Canonical representative of the coset `γ + Λ`: the unique vector in
    /// the box `∏ [0, d_i)` congruent to `γ`.
    pub fn reduce(&self, gamma: &[i64]) -> Vec<i64> {
        let basis = self.basis_i64();
        let mut v = gamma.to_vec();
        for (i, row) in basis.iter().enumerate() {
            let q = v[i].div_euclid(row[i]);
            if q.is_zero() {
                continue;
            }
            for (x, b) in v.iter_mut().zip(row) {
                *x -= q * b;
            }
        }
        v
    }

    /// One exponent vector per coset of `Z^r / Λ`, first coordinate varying
    /// fastest. The zero vector comes first.
    pub fn coset_representatives(&self) -> Vec<Vec<i64>> {
        MixedRadix::new(self.diagonal_entries()).collect()
    }
}

/// Mixed-radix counter over `∏ [0, radix_i)`, first digit fastest.
struct MixedRadix {
    radix: Vec<i64>,
    next: Option<Vec<i64>>,
}

impl MixedRadix {
    fn new(radix: Vec<i64>) -> Self {
        let next = radix.iter().all(|&d| d > 0).then(|| vec![0; radix.len()]);
        Self { radix, next }
    }
}

impl Iterator for MixedRadix {
    type Item = Vec<i64>;

    fn next(&mut self) -> Option<Vec<i64>> {
        let current = self.next.take()?;
        let mut succ = current.clone();
        for (digit, &radix) in succ.iter_mut().zip(&self.radix) {
            *digit += 1;
            if *digit < radix {
                self.next = Some(succ);
                return Some(current);
            }
            *digit = 0;
        }
        Some(current)
    }
}

/// Free-function forms of the action operations.
pub fn apply(action: &MatrixAction, gamma: &[i64]) -> IntegerMatrix {
    action.apply(gamma)
}

pub fn dual_action(action: &MatrixAction) -> MatrixAction {
    action.dual()
}

pub fn finite_orbit_subspace(action: &MatrixAction) -> RationalSubspace {
    action.finite_orbit_subspace()
}

pub fn finite_orbit_lattice(action: &MatrixAction) -> LatticeBasis {
    action.finite_orbit_lattice()
}

pub fn is_ergodic(action: &MatrixAction) -> bool {
    action.is_ergodic()
}

pub fn gamma_rho(action: &MatrixAction) -> SubgroupLattice {
    action.gamma_rho()
}

pub fn coset_representatives(subgroup: &SubgroupLattice) -> Vec<Vec<i64>> {
    subgroup.coset_representatives()
}

pub fn fixed_subspace(action: &MatrixAction, subgroup: &SubgroupLattice) -> RationalSubspace {
    action.fixed_subspace(subgroup)
}

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::matrix::IntegerMatrix;
use crate::error::{Error, Result};

/// Row-style Hermite normal form with transform.
///
/// Returns `(H, U)` with `U * M = H`, `U` unimodular, `H` in upper echelon
/// form: positive pivots, entries above each pivot reduced into
/// `[0, pivot)`, zero rows last.
pub(crate) fn hermite_rows(
    mut a: Vec<Vec<BigInt>>,
    ncols: usize,
) -> (Vec<Vec<BigInt>>, Vec<Vec<BigInt>>) {
    let k = a.len();
    let mut u: Vec<Vec<BigInt>> = (0..k)
        .map(|i| {
            (0..k)
                .map(|j| if i == j { BigInt::one() } else { BigInt::zero() })
                .collect()
        })
        .collect();

    fn axpy(dst: &mut [BigInt], q: &BigInt, src: &[BigInt]) {
        for (d, s) in dst.iter_mut().zip(src) {
            *d -= q * s;
        }
    }

    let mut r = 0;
    for c in 0..ncols {
        if r == k {
            break;
        }
        // Euclid down column c until a single nonzero entry remains at row r.
        while let Some(p) = (r..k)
            .filter(|&i| !a[i][c].is_zero())
            .min_by(|&i, &j| a[i][c].abs().cmp(&a[j][c].abs()))
        {
            a.swap(r, p);
            u.swap(r, p);
            let mut clean = true;
            for i in r + 1..k {
                if a[i][c].is_zero() {
                    continue;
                }
                let q = a[i][c].div_floor(&a[r][c]);
                let (top, bottom) = a.split_at_mut(i);
                axpy(&mut bottom[0], &q, &top[r]);
                let (top, bottom) = u.split_at_mut(i);
                axpy(&mut bottom[0], &q, &top[r]);
                if !a[i][c].is_zero() {
                    clean = false;
                }
            }
            if clean {
                break;
            }
        }
        if a[r][c].is_zero() {
            continue;
        }
        if a[r][c].is_negative() {
            for x in a[r].iter_mut() {
                *x = -&*x;
            }
            for x in u[r].iter_mut() {
                *x = -&*x;
            }
        }
        for i in 0..r {
            let q = a[i][c].div_floor(&a[r][c]);
            if q.is_zero() {
                continue;
            }
            let (top, bottom) = a.split_at_mut(r);
            axpy(&mut top[i], &q, &bottom[0]);
            let (top, bottom) = u.split_at_mut(r);
            axpy(&mut top[i], &q, &bottom[0]);
        }
        r += 1;
    }
    (a, u)
}

/// A sublattice of `Z^m` held in canonical Hermite normal form, basis
/// vectors as rows. Equal lattices have identical bases.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct LatticeBasis {
    ambient_dim: usize,
    basis: Vec<Vec<BigInt>>,
}

impl LatticeBasis {
    pub fn zero(ambient_dim: usize) -> Self {
        Self {
            ambient_dim,
            basis: Vec::new(),
        }
    }

    pub fn full(ambient_dim: usize) -> Self {
        Self::from_generators(
            ambient_dim,
            &IntegerMatrix::identity(ambient_dim).to_rows(),
        )
    }

    /// Lattice generated by arbitrary integer vectors (no saturation).
    pub fn from_generators(ambient_dim: usize, vectors: &[Vec<BigInt>]) -> Self {
        assert!(vectors.iter().all(|v| v.len() == ambient_dim));
        let (h, _) = hermite_rows(vectors.to_vec(), ambient_dim);
        let basis = h
            .into_iter()
            .filter(|row| row.iter().any(|x| !x.is_zero()))
            .collect();
        Self { ambient_dim, basis }
    }

    pub fn from_generators_i64(ambient_dim: usize, vectors: &[Vec<i64>]) -> Self {
        let big: Vec<Vec<BigInt>> = vectors
            .iter()
            .map(|v| v.iter().map(|&x| BigInt::from(x)).collect())
            .collect();
        Self::from_generators(ambient_dim, &big)
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient_dim
    }

    pub fn rank(&self) -> usize {
        self.basis.len()
    }

    pub fn is_full_rank(&self) -> bool {
        self.rank() == self.ambient_dim
    }

    pub fn basis(&self) -> &[Vec<BigInt>] {
        &self.basis
    }

    /// Pivot entries of the echelon basis.
    pub fn pivots(&self) -> Vec<(usize, BigInt)> {
        self.basis
            .iter()
            .map(|row| {
                let p = row.iter().position(|x| !x.is_zero()).expect("nonzero row");
                (p, row[p].clone())
            })
            .collect()
    }

    /// `[Z^m : L]` for a full-rank lattice.
    pub fn index(&self) -> Option<BigInt> {
        self.is_full_rank()
            .then(|| self.pivots().into_iter().map(|(_, p)| p).product())
    }

    /// Integer coordinates of `z` in the basis, or `None` if `z` is not a
    /// lattice point.
    pub fn coordinates(&self, z: &[BigInt]) -> Option<Vec<BigInt>> {
        assert_eq!(z.len(), self.ambient_dim);
        let mut rest = z.to_vec();
        let mut coords = Vec::with_capacity(self.rank());
        let mut col = 0;
        for row in &self.basis {
            let p = row.iter().position(|x| !x.is_zero()).expect("nonzero row");
            if rest[col..p].iter().any(|x| !x.is_zero()) {
                return None;
            }
            let (q, r) = rest[p].div_rem(&row[p]);
            if !r.is_zero() {
                return None;
            }
            for (x, b) in rest.iter_mut().zip(row) {
                *x -= &q * b;
            }
            coords.push(q);
            col = p + 1;
        }
        rest.iter().all(Zero::is_zero).then_some(coords)
    }

    pub fn contains(&self, z: &[BigInt]) -> bool {
        self.coordinates(z).is_some()
    }

    /// Whether `(Q L) ∩ Z^m = L`.
    pub fn is_saturated(&self) -> bool {
        lattice_saturate(self.ambient_dim, &self.basis) == *self
    }

    pub fn is_sublattice_of(&self, other: &LatticeBasis) -> bool {
        self.ambient_dim == other.ambient_dim && self.basis.iter().all(|v| other.contains(v))
    }

    /// Basis as `i64` rows; panics on overflow.
    pub fn basis_i64(&self) -> Vec<Vec<i64>> {
        self.basis
            .iter()
            .map(|r| r.iter().map(|x| x.to_i64().expect("fits in i64")).collect())
            .collect()
    }
}

/// Saturation `(Q·span) ∩ Z^m` of the lattice spanned by `vectors`.
///
/// Column-reduce the generator matrix `V` (rows are the vectors): with
/// `V U^T = H^T` the rows of `V` are combinations of the first `rank`
/// columns of `U^{-1}`, which extend to a basis of `Z^m` and therefore span
/// a saturated lattice of the same rational span.
pub fn lattice_saturate(ambient_dim: usize, vectors: &[Vec<BigInt>]) -> LatticeBasis {
    if vectors.is_empty() {
        return LatticeBasis::zero(ambient_dim);
    }
    assert!(vectors.iter().all(|v| v.len() == ambient_dim));
    let vt = IntegerMatrix::from_rows(vectors).transpose();
    let (h, u) = hermite_rows(vt.to_rows(), vt.cols());
    let rank = h
        .iter()
        .take_while(|row| row.iter().any(|x| !x.is_zero()))
        .count();
    let u_inv = IntegerMatrix::from_rows(&u)
        .unimodular_inverse()
        .expect("Hermite transform is unimodular");
    let cols: Vec<Vec<BigInt>> = (0..rank)
        .map(|j| (0..ambient_dim).map(|i| u_inv.get(i, j).clone()).collect())
        .collect();
    LatticeBasis::from_generators(ambient_dim, &cols)
}

/// Convenience wrapper checking vector lengths.
pub fn try_lattice_saturate(ambient_dim: usize, vectors: &[Vec<BigInt>]) -> Result<LatticeBasis> {
    if let Some(v) = vectors.iter().find(|v| v.len() != ambient_dim) {
        return Err(Error::DimensionMismatch {
            expected: ambient_dim,
            found: v.len(),
        });
    }
    Ok(lattice_saturate(ambient_dim, vectors))
}

impl fmt::Debug for LatticeBasis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "LatticeBasis(rank {} in Z^{}: ", self.rank(), self.ambient_dim)?;
        fmt::Display::fmt(self, f)?;
        write!(f, ")")
    }
}

impl fmt::Display for LatticeBasis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for (i, row) in self.basis.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "(")?;
            for (j, x) in row.iter().enumerate() {
                if j > 0 {
                    write!(f, ", ")?;
                }
                write!(f, "{x}")?;
            }
            write!(f, ")")?;
        }
        write!(f, "]")
    }
}

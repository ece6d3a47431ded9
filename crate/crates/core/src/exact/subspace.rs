use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};

use super::matrix::IntegerMatrix;
use crate::error::{Error, Result};

/// A subspace of `Q^m`, held as the rows of a reduced row-echelon basis.
///
/// Two equal subspaces always have identical bases, so `==` is subspace
/// equality.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct RationalSubspace {
    ambient_dim: usize,
    basis: Vec<Vec<BigRational>>,
}

/// Reduced row-echelon form in place. Returns the pivot columns; zero rows
/// are dropped.
fn rref(rows: &mut Vec<Vec<BigRational>>, ncols: usize) -> Vec<usize> {
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..ncols {
        if r == rows.len() {
            break;
        }
        let Some(p) = (r..rows.len()).find(|&i| !rows[i][c].is_zero()) else {
            continue;
        };
        rows.swap(r, p);
        let inv = rows[r][c].recip();
        for x in rows[r].iter_mut() {
            *x *= &inv;
        }
        for i in 0..rows.len() {
            if i == r || rows[i][c].is_zero() {
                continue;
            }
            let f = rows[i][c].clone();
            let (pivot_row, row) = if i < r {
                let (lo, hi) = rows.split_at_mut(r);
                (&hi[0], &mut lo[i])
            } else {
                let (lo, hi) = rows.split_at_mut(i);
                (&lo[r], &mut hi[0])
            };
            for (x, p) in row[c..].iter_mut().zip(&pivot_row[c..]) {
                *x -= &f * p;
            }
        }
        pivots.push(c);
        r += 1;
    }
    rows.truncate(r);
    pivots
}

fn to_rational(v: &[BigInt]) -> Vec<BigRational> {
    v.iter().map(|x| BigRational::from_integer(x.clone())).collect()
}

/// Kernel `{v : R v = 0}` of a rational matrix given by rows.
pub(crate) fn kernel_of_rows(rows: &[Vec<BigRational>], ncols: usize) -> RationalSubspace {
    let mut reduced = rows.to_vec();
    let pivots = rref(&mut reduced, ncols);
    let mut is_pivot = vec![false; ncols];
    for &p in &pivots {
        is_pivot[p] = true;
    }
    let mut basis = Vec::new();
    for free in (0..ncols).filter(|&c| !is_pivot[c]) {
        let mut v = vec![BigRational::zero(); ncols];
        v[free] = BigRational::one();
        for (row, &p) in reduced.iter().zip(&pivots) {
            v[p] = -row[free].clone();
        }
        basis.push(v);
    }
    RationalSubspace::from_spanning(ncols, basis)
}

/// `{v in Q^cols : M v = 0}`.
pub fn rational_kernel(m: &IntegerMatrix) -> RationalSubspace {
    let rows: Vec<Vec<BigRational>> = (0..m.rows()).map(|i| to_rational(m.row(i))).collect();
    kernel_of_rows(&rows, m.cols())
}

/// Intersection of subspaces of a common `Q^m`. An empty list has no
/// ambient dimension to report and is rejected.
pub fn intersect_subspaces(spaces: &[RationalSubspace]) -> Result<RationalSubspace> {
    let first = spaces.first().ok_or(Error::Degenerate("empty subspace list"))?;
    let m = first.ambient_dim;
    let mut constraints = Vec::new();
    for s in spaces {
        if s.ambient_dim != m {
            return Err(Error::DimensionMismatch {
                expected: m,
                found: s.ambient_dim,
            });
        }
        constraints.extend(s.annihilator().basis);
    }
    Ok(kernel_of_rows(&constraints, m))
}

impl RationalSubspace {
    pub fn zero(ambient_dim: usize) -> Self {
        Self {
            ambient_dim,
            basis: Vec::new(),
        }
    }

    pub fn full(ambient_dim: usize) -> Self {
        let basis = (0..ambient_dim)
            .map(|i| {
                (0..ambient_dim)
                    .map(|j| if i == j { BigRational::one() } else { BigRational::zero() })
                    .collect()
            })
            .collect();
        Self { ambient_dim, basis }
    }

    /// Span of arbitrary (possibly dependent) vectors.
    pub fn from_spanning(ambient_dim: usize, mut vectors: Vec<Vec<BigRational>>) -> Self {
        assert!(vectors.iter().all(|v| v.len() == ambient_dim));
        rref(&mut vectors, ambient_dim);
        Self {
            ambient_dim,
            basis: vectors,
        }
    }

    pub fn from_integer_spanning(ambient_dim: usize, vectors: &[Vec<BigInt>]) -> Self {
        Self::from_spanning(ambient_dim, vectors.iter().map(|v| to_rational(v)).collect())
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient_dim
    }

    pub fn rank(&self) -> usize {
        self.basis.len()
    }

    pub fn is_zero(&self) -> bool {
        self.basis.is_empty()
    }

    pub fn is_full(&self) -> bool {
        self.basis.len() == self.ambient_dim
    }

    pub fn basis(&self) -> &[Vec<BigRational>] {
        &self.basis
    }

    /// Basis vectors cleared of denominators and divided by their content.
    pub fn integer_basis(&self) -> Vec<Vec<BigInt>> {
        self.basis.iter().map(|v| primitive_integer_vector(v)).collect()
    }

    pub fn contains(&self, v: &[BigRational]) -> bool {
        assert_eq!(v.len(), self.ambient_dim);
        let mut rest = v.to_vec();
        for row in &self.basis {
            let p = row.iter().position(|x| !x.is_zero()).expect("nonzero basis row");
            if rest[p].is_zero() {
                continue;
            }
            let f = rest[p].clone();
            for (r, b) in rest.iter_mut().zip(row) {
                *r -= &f * b;
            }
        }
        rest.iter().all(Zero::is_zero)
    }

    pub fn contains_integer(&self, v: &[BigInt]) -> bool {
        self.contains(&to_rational(v))
    }

    /// Row vectors vanishing on the subspace.
    pub fn annihilator(&self) -> RationalSubspace {
        kernel_of_rows(&self.basis, self.ambient_dim)
    }

    pub fn is_subspace_of(&self, other: &RationalSubspace) -> bool {
        self.ambient_dim == other.ambient_dim && self.basis.iter().all(|v| other.contains(v))
    }
}

/// Scales a rational vector to a primitive integer vector with the same
/// direction (the sign is kept).
pub fn primitive_integer_vector(v: &[BigRational]) -> Vec<BigInt> {
    let lcm = v
        .iter()
        .fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
    let ints: Vec<BigInt> = v.iter().map(|x| x.numer() * (&lcm / x.denom())).collect();
    let g = ints.iter().fold(BigInt::zero(), |acc, x| acc.gcd(x));
    if g.is_zero() {
        return ints;
    }
    ints.into_iter().map(|x| x / &g).collect()
}

impl fmt::Debug for RationalSubspace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "RationalSubspace(dim {} in Q^{}: [", self.rank(), self.ambient_dim)?;
        for (i, v) in self.basis.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "(")?;
            for (j, x) in v.iter().enumerate() {
                if j > 0 {
                    write!(f, ", ")?;
                }
                if x.is_integer() {
                    write!(f, "{}", x.numer())?;
                } else {
                    write!(f, "{}/{}", x.numer(), x.denom())?;
                }
            }
            write!(f, ")")?;
        }
        write!(f, "])")
    }
}

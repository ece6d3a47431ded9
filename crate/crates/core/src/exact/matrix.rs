use std::fmt;
use std::ops::Mul;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::lattice::hermite_rows;
use super::poly::IntegerPolynomial;
use crate::error::{Error, Result};

/// Dense integer matrix with arbitrary-precision entries, stored row-major.
///
/// Most of the crate works with square matrices (action generators), but
/// rectangular ones show up as factor maps and kernel inputs.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct IntegerMatrix {
    rows: usize,
    cols: usize,
    data: Vec<BigInt>,
}

impl IntegerMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![BigInt::zero(); rows * cols],
        }
    }

    pub fn identity(dim: usize) -> Self {
        let mut m = Self::zeros(dim, dim);
        for i in 0..dim {
            m.data[i * dim + i] = BigInt::one();
        }
        m
    }

    /// Builds a matrix from rows. Panics if the rows are ragged.
    pub fn from_rows<T: Into<BigInt> + Clone>(rows: &[Vec<T>]) -> Self {
        let cols = rows.first().map_or(0, Vec::len);
        let mut data = Vec::with_capacity(rows.len() * cols);
        for row in rows {
            assert_eq!(row.len(), cols, "ragged matrix rows");
            data.extend(row.iter().cloned().map(Into::into));
        }
        Self {
            rows: rows.len(),
            cols,
            data,
        }
    }

    /// Like [`IntegerMatrix::from_rows`] but reports ragged input as an error.
    pub fn try_from_rows(rows: Vec<Vec<BigInt>>) -> Result<Self> {
        let cols = rows.first().map_or(0, Vec::len);
        let mut data = Vec::with_capacity(rows.len() * cols);
        let nrows = rows.len();
        for row in rows {
            if row.len() != cols {
                return Err(Error::DimensionMismatch {
                    expected: cols,
                    found: row.len(),
                });
            }
            data.extend(row);
        }
        Ok(Self {
            rows: nrows,
            cols,
            data,
        })
    }

    /// 1x1 matrix holding `value`.
    pub fn scalar(value: i64) -> Self {
        Self::from_rows(&[vec![value]])
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    /// Side length of a square matrix.
    pub fn dim(&self) -> usize {
        debug_assert!(self.is_square());
        self.rows
    }

    pub fn get(&self, i: usize, j: usize) -> &BigInt {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, value: BigInt) {
        self.data[i * self.cols + j] = value;
    }

    pub fn row(&self, i: usize) -> &[BigInt] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn to_rows(&self) -> Vec<Vec<BigInt>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.data[j * self.rows + i] = self.get(i, j).clone();
            }
        }
        t
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Zero::is_zero)
    }

    pub fn is_identity(&self) -> bool {
        self.is_square()
            && (0..self.rows).all(|i| {
                (0..self.cols).all(|j| {
                    let e = self.get(i, j);
                    if i == j {
                        e.is_one()
                    } else {
                        e.is_zero()
                    }
                })
            })
    }

    pub fn mul_vec(&self, v: &[BigInt]) -> Vec<BigInt> {
        assert_eq!(v.len(), self.cols);
        (0..self.rows)
            .map(|i| self.row(i).iter().zip(v).map(|(a, b)| a * b).sum())
            .collect()
    }

    /// `self - c * I`, for square matrices.
    pub fn sub_scalar_identity(&self, c: &BigInt) -> Self {
        let mut m = self.clone();
        for i in 0..self.rows.min(self.cols) {
            m.data[i * self.cols + i] -= c;
        }
        m
    }

    /// `self - I`; the fixed space of `self` is the kernel of this.
    pub fn minus_identity(&self) -> Self {
        self.sub_scalar_identity(&BigInt::one())
    }

    pub fn neg(&self) -> Self {
        Self {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|x| -x).collect(),
        }
    }

    pub fn pow(&self, mut exp: u64) -> Self {
        assert!(self.is_square());
        let mut base = self.clone();
        let mut acc = Self::identity(self.rows);
        while exp > 0 {
            if exp & 1 == 1 {
                acc = &acc * &base;
            }
            exp >>= 1;
            if exp > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    pub fn trace(&self) -> BigInt {
        (0..self.rows.min(self.cols))
            .map(|i| self.get(i, i).clone())
            .sum()
    }

    /// Largest absolute entry.
    pub fn max_abs(&self) -> BigInt {
        self.data
            .iter()
            .map(Signed::abs)
            .max()
            .unwrap_or_else(BigInt::zero)
    }

    /// Determinant by fraction-free (Bareiss) elimination.
    pub fn determinant(&self) -> BigInt {
        assert!(self.is_square(), "determinant of a non-square matrix");
        let n = self.rows;
        if n == 0 {
            return BigInt::one();
        }
        let mut a: Vec<Vec<BigInt>> = self.to_rows();
        let mut sign = BigInt::one();
        let mut prev = BigInt::one();
        for k in 0..n - 1 {
            if a[k][k].is_zero() {
                match (k + 1..n).find(|&i| !a[i][k].is_zero()) {
                    Some(i) => {
                        a.swap(i, k);
                        sign = -sign;
                    }
                    None => return BigInt::zero(),
                }
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let v = &a[i][j] * &a[k][k] - &a[i][k] * &a[k][j];
                    a[i][j] = v / &prev;
                }
            }
            prev = a[k][k].clone();
        }
        sign * &a[n - 1][n - 1]
    }

    pub fn is_unimodular(&self) -> bool {
        self.is_square() && self.determinant().abs().is_one()
    }

    /// Characteristic polynomial `det(xI - M)` by Faddeev–LeVerrier.
    ///
    /// Every division in the recurrence is exact over the integers, so no
    /// rationals are ever formed.
    pub fn charpoly(&self) -> IntegerPolynomial {
        assert!(self.is_square(), "charpoly of a non-square matrix");
        let n = self.rows;
        // coefficients c_n = 1, c_{n-1}, ..., c_0 of x^n + c_{n-1}x^{n-1} + ...
        let mut coeffs = vec![BigInt::zero(); n + 1];
        coeffs[n] = BigInt::one();
        let mut m_k = Self::zeros(n, n);
        for k in 1..=n {
            // M_k = A M_{k-1} + c_{n-k+1} I
            let prod = self * &m_k;
            m_k = prod.sub_scalar_identity(&-coeffs[n - k + 1].clone());
            let am = self * &m_k;
            let (q, r) = am.trace().div_rem(&BigInt::from(k));
            debug_assert!(r.is_zero(), "Faddeev-LeVerrier division must be exact");
            coeffs[n - k] = -q;
        }
        IntegerPolynomial::new(coeffs)
    }

    /// Exact inverse of a unimodular matrix.
    ///
    /// The Hermite form of a unimodular matrix is the identity, so the
    /// accumulated row transform is the inverse.
    pub fn unimodular_inverse(&self) -> Result<Self> {
        if !self.is_square() {
            return Err(Error::NotSquare {
                rows: self.rows,
                cols: self.cols,
            });
        }
        let det = self.determinant();
        if !det.abs().is_one() {
            return Err(Error::NotUnimodular {
                det: det.to_string(),
            });
        }
        let (h, u) = hermite_rows(self.to_rows(), self.cols);
        debug_assert!(Self::from_rows(&h).is_identity());
        Ok(Self::from_rows(&u))
    }

    /// Rows as `f64`, for numerical evaluation only.
    pub fn to_f64_rows(&self) -> Vec<Vec<f64>> {
        (0..self.rows)
            .map(|i| {
                self.row(i)
                    .iter()
                    .map(|x| x.to_f64().unwrap_or(f64::NAN))
                    .collect()
            })
            .collect()
    }

    /// Stacks `self` on top of `other` (same column count).
    pub fn vstack(&self, other: &Self) -> Self {
        assert_eq!(self.cols, other.cols);
        let mut data = self.data.clone();
        data.extend(other.data.iter().cloned());
        Self {
            rows: self.rows + other.rows,
            cols: self.cols,
            data,
        }
    }
}

impl Mul for &IntegerMatrix {
    type Output = IntegerMatrix;

    fn mul(self, rhs: &IntegerMatrix) -> IntegerMatrix {
        assert_eq!(self.cols, rhs.rows, "incompatible matrix product");
        let mut out = IntegerMatrix::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..rhs.cols {
                    out.data[i * rhs.cols + j] += a * rhs.get(k, j);
                }
            }
        }
        out
    }
}

impl fmt::Debug for IntegerMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl fmt::Display for IntegerMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for i in 0..self.rows {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "[")?;
            for (j, x) in self.row(i).iter().enumerate() {
                if j > 0 {
                    write!(f, ", ")?;
                }
                write!(f, "{x}")?;
            }
            write!(f, "]")?;
        }
        write!(f, "]")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(rows: &[Vec<i64>]) -> IntegerMatrix {
        IntegerMatrix::from_rows(rows)
    }

    /// Leibniz expansion; exponential but independent of Bareiss.
    fn leibniz_det(a: &IntegerMatrix) -> BigInt {
        fn perms(n: usize) -> Vec<(Vec<usize>, i32)> {
            if n == 0 {
                return vec![(vec![], 1)];
            }
            let mut out = Vec::new();
            for (p, s) in perms(n - 1) {
                for pos in 0..n {
                    let mut q = p.clone();
                    q.insert(pos, n - 1);
                    // inserting at pos shifts n-1-pos elements past the new max
                    let sign = if (n - 1 - pos).is_multiple_of(2) { s } else { -s };
                    out.push((q, sign));
                }
            }
            out
        }
        let n = a.rows();
        perms(n)
            .into_iter()
            .map(|(p, s)| {
                let prod: BigInt = (0..n).map(|i| a.get(i, p[i]).clone()).product();
                if s > 0 {
                    prod
                } else {
                    -prod
                }
            })
            .sum()
    }

    #[test]
    fn charpoly_examples() {
        assert_eq!(IntegerMatrix::identity(2).charpoly().coeffs_i64(), vec![1, -2, 1]);
        assert_eq!(m(&[vec![2, 1], vec![1, 1]]).charpoly().coeffs_i64(), vec![1, -3, 1]);
        assert_eq!(m(&[vec![0, -1], vec![1, -1]]).charpoly().coeffs_i64(), vec![1, 1, 1]);
    }

    #[test]
    fn charpoly_matches_determinant_at_integer_points() {
        let a = m(&[vec![1, 2, 0, -1], vec![3, -1, 2, 0], vec![0, 1, 1, 1], vec![2, 0, -3, 4]]);
        let p = a.charpoly();
        for t in -4..=4 {
            let tb = BigInt::from(t);
            let shifted = a.neg().sub_scalar_identity(&-tb.clone());
            assert_eq!(p.eval(&tb), shifted.determinant(), "t = {t}");
        }
    }

    #[test]
    fn bareiss_agrees_with_leibniz() {
        let cases = [
            m(&[vec![0, 2, 1], vec![3, 0, 0], vec![1, 1, 5]]),
            m(&[vec![0, 0], vec![0, 0]]),
            m(&[vec![0, 1, 2, 3], vec![1, 0, 4, 1], vec![2, 4, 0, 1], vec![3, 1, 1, 0]]),
            m(&[vec![1, 2], vec![2, 4]]),
        ];
        for a in &cases {
            assert_eq!(a.determinant(), leibniz_det(a), "{a}");
        }
    }

    #[test]
    fn unimodular_inverse_examples() {
        let i = IntegerMatrix::identity(3);
        assert_eq!(i.unimodular_inverse().unwrap(), i);
        let u = m(&[vec![1, 1], vec![0, 1]]);
        assert_eq!(u.unimodular_inverse().unwrap(), m(&[vec![1, -1], vec![0, 1]]));
        assert!(matches!(
            m(&[vec![2, 0], vec![0, 1]]).unimodular_inverse(),
            Err(Error::NotUnimodular { .. })
        ));
    }

    #[test]
    fn inverse_of_negative_determinant() {
        let a = m(&[vec![0, 1, 0], vec![1, 0, 0], vec![3, -2, 1]]);
        assert_eq!(a.determinant(), BigInt::from(-1));
        let inv = a.unimodular_inverse().unwrap();
        assert!((&a * &inv).is_identity());
        assert!((&inv * &a).is_identity());
    }

    #[test]
    fn pow_matches_repeated_product() {
        let a = m(&[vec![2, 1], vec![1, 1]]);
        let mut acc = IntegerMatrix::identity(2);
        for k in 0..10u64 {
            assert_eq!(a.pow(k), acc);
            acc = &acc * &a;
        }
    }
}

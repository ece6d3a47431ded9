//! Root-of-unity eigenvalues of integer matrices, detected exactly through
//! divisibility of the characteristic polynomial by cyclotomic polynomials.
//!
//! A primitive `n`-th root of unity is an eigenvalue of `M` exactly when
//! `Φ_n` divides `charpoly(M)`. Since `φ(n) >= sqrt(n/2)`, only `n <= 2m²`
//! can contribute for an `m x m` matrix, so the search is finite.

use std::collections::{BTreeMap, HashMap};
use std::sync::{Mutex, OnceLock};

use num_integer::Integer;

use crate::error::{Error, Result};
use crate::exact::{IntegerMatrix, IntegerPolynomial};

fn cache() -> &'static Mutex<HashMap<u64, IntegerPolynomial>> {
    static CACHE: OnceLock<Mutex<HashMap<u64, IntegerPolynomial>>> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(HashMap::new()))
}

fn divisors(n: u64) -> Vec<u64> {
    let mut small = Vec::new();
    let mut large = Vec::new();
    let mut d = 1;
    while d * d <= n {
        if n.is_multiple_of(d) {
            small.push(d);
            if d * d != n {
                large.push(n / d);
            }
        }
        d += 1;
    }
    small.extend(large.into_iter().rev());
    small
}

/// The `n`-th cyclotomic polynomial, by exact division of `x^n - 1` by
/// `Φ_d` for every proper divisor `d` of `n`. Results are memoized.
pub fn cyclotomic(n: u64) -> IntegerPolynomial {
    assert!(n >= 1, "cyclotomic polynomial index must be positive");
    if let Some(p) = cache().lock().expect("cyclotomic cache").get(&n) {
        return p.clone();
    }
    let mut p = IntegerPolynomial::x_pow_minus_one(n as usize);
    for d in divisors(n).into_iter().filter(|&d| d < n) {
        p = p
            .exact_div_monic(&cyclotomic(d))
            .expect("Φ_d divides x^n - 1 for d | n");
    }
    cache()
        .lock()
        .expect("cyclotomic cache")
        .insert(n, p.clone());
    p
}

/// Euler totients `φ(0..=limit)` by sieve (`φ(0)` is reported as 0).
pub fn totients(limit: u64) -> Vec<u64> {
    let mut phi: Vec<u64> = (0..=limit).collect();
    for p in 2..=limit as usize {
        if phi[p] == p as u64 {
            for k in (p..=limit as usize).step_by(p) {
                phi[k] -= phi[k] / p as u64;
            }
        }
    }
    phi
}

/// Every `n` with `φ(n) <= degree`, ascending.
pub fn candidate_orders(degree: usize) -> Vec<u64> {
    let bound = 2 * (degree as u64).pow(2);
    let phi = totients(bound.max(1));
    (1..=bound.max(1))
        .filter(|&n| phi[n as usize] <= degree as u64)
        .collect()
}

/// Orders of the root-of-unity roots of a polynomial, with the exact
/// multiplicity of each `Φ_n` factor.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct RootOfUnitySpectrum {
    multiplicities: BTreeMap<u64, u32>,
}

impl RootOfUnitySpectrum {
    pub fn is_empty(&self) -> bool {
        self.multiplicities.is_empty()
    }

    pub fn orders(&self) -> impl Iterator<Item = u64> + '_ {
        self.multiplicities.keys().copied()
    }

    pub fn multiplicity(&self, order: u64) -> u32 {
        self.multiplicities.get(&order).copied().unwrap_or(0)
    }

    pub fn entries(&self) -> impl Iterator<Item = (u64, u32)> + '_ {
        self.multiplicities.iter().map(|(&n, &k)| (n, k))
    }

    /// Whether some root of unity other than 1 occurs.
    pub fn has_proper_root(&self) -> bool {
        self.orders().any(|n| n > 1)
    }

    /// lcm of all orders; 1 for the empty spectrum.
    pub fn lcm(&self) -> u64 {
        self.orders().fold(1, |acc, n| acc.lcm(&n))
    }
}

pub fn root_of_unity_orders(p: &IntegerPolynomial) -> RootOfUnitySpectrum {
    assert!(p.is_monic(), "root_of_unity_orders expects a monic polynomial");
    let mut multiplicities = BTreeMap::new();
    let mut rest = p.clone();
    for n in candidate_orders(p.degree()) {
        let phi = cyclotomic(n);
        let mut k = 0;
        while rest.degree() >= phi.degree() {
            match rest.exact_div_monic(&phi) {
                Some(q) => {
                    rest = q;
                    k += 1;
                }
                None => break,
            }
        }
        if k > 0 {
            multiplicities.insert(n, k);
        }
    }
    RootOfUnitySpectrum { multiplicities }
}

/// Spectrum of root-of-unity eigenvalues of a square matrix.
pub fn matrix_root_of_unity_orders(m: &IntegerMatrix) -> RootOfUnitySpectrum {
    root_of_unity_orders(&m.charpoly())
}

/// Smallest `k >= 1` such that `A^k` has no root-of-unity eigenvalue other
/// than 1: the lcm of the orders of the root-of-unity eigenvalues of `A`.
pub fn k_index(a: &IntegerMatrix) -> Result<u64> {
    if !a.is_square() {
        return Err(Error::NotSquare {
            rows: a.rows(),
            cols: a.cols(),
        });
    }
    if !a.is_unimodular() {
        return Err(Error::NotUnimodular {
            det: a.determinant().to_string(),
        });
    }
    Ok(matrix_root_of_unity_orders(a).lcm())
}

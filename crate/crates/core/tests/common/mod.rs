//! Fixtures and random generators shared by the integration tests.
#![allow(dead_code)]

use rand::Rng;
use rand_chacha::ChaCha8Rng;
use torus_rigidity::{IntegerMatrix, MatrixAction};

pub fn m(rows: &[Vec<i64>]) -> IntegerMatrix {
    IntegerMatrix::from_rows(rows)
}

pub fn cat() -> IntegerMatrix {
    m(&[vec![2, 1], vec![1, 1]])
}

pub fn shear() -> IntegerMatrix {
    m(&[vec![1, 1], vec![0, 1]])
}

pub fn order3() -> IntegerMatrix {
    m(&[vec![0, -1], vec![1, -1]])
}

pub fn quarter_turn() -> IntegerMatrix {
    m(&[vec![0, -1], vec![1, 0]])
}

pub fn cyclic(g: IntegerMatrix) -> MatrixAction {
    MatrixAction::cyclic(g).unwrap()
}

/// Block-diagonal matrix from square blocks.
pub fn block_diag(blocks: &[IntegerMatrix]) -> IntegerMatrix {
    let n: usize = blocks.iter().map(IntegerMatrix::rows).sum();
    let mut out = IntegerMatrix::zeros(n, n);
    let mut at = 0;
    for b in blocks {
        for i in 0..b.rows() {
            for j in 0..b.cols() {
                out.set(at + i, at + j, b.get(i, j).clone());
            }
        }
        at += b.rows();
    }
    out
}

/// The five actions used for the orbit-search comparison.
pub fn orbit_fixtures() -> Vec<(&'static str, MatrixAction)> {
    vec![
        ("identity on T^2", MatrixAction::identity(2, 1)),
        ("shear", cyclic(shear())),
        ("order three", cyclic(order3())),
        ("cat map", cyclic(cat())),
        (
            "rank two on T^3",
            MatrixAction::new(vec![
                block_diag(&[cat(), IntegerMatrix::identity(1)]),
                block_diag(&[IntegerMatrix::identity(2), IntegerMatrix::scalar(-1)]),
            ])
            .unwrap(),
        ),
    ]
}

/// Random product of elementary row operations, keeping every entry in
/// `[-bound, bound]`.
pub fn random_unimodular(rng: &mut ChaCha8Rng, dim: usize, steps: usize, bound: i64) -> IntegerMatrix {
    let mut a: Vec<Vec<i64>> = (0..dim)
        .map(|i| (0..dim).map(|j| i64::from(i == j)).collect())
        .collect();
    for _ in 0..steps {
        let mut next = a.clone();
        match rng.random_range(0..4) {
            0 | 1 if dim > 1 => {
                let i = rng.random_range(0..dim);
                let mut j = rng.random_range(0..dim - 1);
                if j >= i {
                    j += 1;
                }
                let s = if rng.random_bool(0.5) { 1 } else { -1 };
                for k in 0..dim {
                    next[i][k] += s * a[j][k];
                }
            }
            2 if dim > 1 => {
                let i = rng.random_range(0..dim);
                let j = rng.random_range(0..dim);
                next.swap(i, j);
            }
            _ => {
                let i = rng.random_range(0..dim);
                for x in next[i].iter_mut() {
                    *x = -*x;
                }
            }
        }
        if next.iter().flatten().all(|x| x.abs() <= bound) {
            a = next;
        }
    }
    m(&a)
}

/// Small blocks with a known spectrum.
pub fn spectral_blocks() -> Vec<IntegerMatrix> {
    vec![
        IntegerMatrix::identity(1),
        IntegerMatrix::scalar(-1),
        shear(),
        order3(),
        cat(),
        quarter_turn(),
    ]
}

/// A unimodular matrix conjugate to a random block-diagonal one, so that
/// root-of-unity eigenvalues occur often.
pub fn random_structured_unimodular(rng: &mut ChaCha8Rng, max_dim: usize) -> IntegerMatrix {
    let blocks = spectral_blocks();
    let mut chosen = Vec::new();
    let mut dim = 0;
    loop {
        let b = &blocks[rng.random_range(0..blocks.len())];
        if dim + b.rows() > max_dim {
            break;
        }
        dim += b.rows();
        chosen.push(b.clone());
        if dim == max_dim || rng.random_bool(0.4) {
            break;
        }
    }
    if chosen.is_empty() {
        chosen.push(blocks[rng.random_range(0..2)].clone());
        dim = 1;
    }
    let d = block_diag(&chosen);
    let p = random_unimodular(rng, dim, 6, 2);
    let p_inv = p.unimodular_inverse().unwrap();
    &(&p * &d) * &p_inv
}

/// Either a plain random elementary product or a conjugated block matrix.
pub fn random_test_unimodular(rng: &mut ChaCha8Rng, max_dim: usize) -> IntegerMatrix {
    if rng.random_bool(0.5) {
        let dim = rng.random_range(1..=max_dim);
        random_unimodular(rng, dim, 12, 3)
    } else {
        random_structured_unimodular(rng, max_dim)
    }
}

/// `p(u)` for a random integer polynomial of degree at most 3.
pub fn random_polynomial_in(rng: &mut ChaCha8Rng, u: &IntegerMatrix) -> IntegerMatrix {
    let dim = u.rows();
    let mut acc = IntegerMatrix::zeros(dim, dim);
    let mut power = IntegerMatrix::identity(dim);
    for _ in 0..=rng.random_range(0..=3) {
        let c = rng.random_range(-2i64..=2);
        for i in 0..dim {
            for j in 0..dim {
                let v = acc.get(i, j) + power.get(i, j) * c;
                acc.set(i, j, v);
            }
        }
        power = &power * u;
    }
    acc
}

/// Commuting family of one to three polynomials in one random matrix.
pub fn random_polynomial_family(rng: &mut ChaCha8Rng, max_dim: usize) -> Vec<IntegerMatrix> {
    let u = random_test_unimodular(rng, max_dim);
    (0..rng.random_range(1..=3))
        .map(|_| random_polynomial_in(rng, &u))
        .collect()
}

/// Commuting unimodular family `±u^k`.
pub fn random_power_action(rng: &mut ChaCha8Rng, max_dim: usize) -> MatrixAction {
    let u = random_test_unimodular(rng, max_dim);
    let u_inv = u.unimodular_inverse().unwrap();
    let gens = (0..rng.random_range(1..=3))
        .map(|_| {
            let k: i64 = rng.random_range(-2..=2);
            let g = if k >= 0 { u.pow(k as u64) } else { u_inv.pow((-k) as u64) };
            if rng.random_bool(0.3) {
                g.neg()
            } else {
                g
            }
        })
        .collect();
    MatrixAction::new(gens).unwrap()
}

/// All integer vectors of length `dim` with entries in `[-r, r]`.
pub fn box_points(dim: usize, r: i64) -> Vec<Vec<i64>> {
    let mut out = vec![vec![]];
    for _ in 0..dim {
        out = out
            .into_iter()
            .flat_map(|v| {
                (-r..=r).map(move |x| {
                    let mut w = v.clone();
                    w.push(x);
                    w
                })
            })
            .collect();
    }
    out
}

/// Generators of the affine group of `Z^2` inside `GL(3, Z)`: a linear
/// part generating `GL(2, Z)` and the two unit translations.
pub fn affine_generators() -> Vec<IntegerMatrix> {
    vec![
        m(&[vec![0, -1, 0], vec![1, 0, 0], vec![0, 0, 1]]),
        m(&[vec![1, 1, 0], vec![0, 1, 0], vec![0, 0, 1]]),
        m(&[vec![0, 1, 0], vec![1, 0, 0], vec![0, 0, 1]]),
        m(&[vec![1, 0, 1], vec![0, 1, 0], vec![0, 0, 1]]),
        m(&[vec![1, 0, 0], vec![0, 1, 1], vec![0, 0, 1]]),
    ]
}

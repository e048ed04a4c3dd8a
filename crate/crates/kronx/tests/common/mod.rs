//! Shared oracles and generators for the integration tests.
#![allow(dead_code)]

use std::time::{Duration, Instant};

use kronx::exactnum::rat;
use kronx::hubbard::Dense;
use kronx::{ExactRational, XSum};
use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

pub type Q = ExactRational;
pub type C = Complex64;

pub fn rng(seed: u64) -> StdRng {
    StdRng::seed_from_u64(seed)
}

/// Small rationals with denominators up to 4.
pub fn rand_rational(rng: &mut StdRng) -> Q {
    rat(rng.random_range(-6..=6), rng.random_range(1..=4))
}

/// Sparse rational matrix, each entry present with probability `density`.
pub fn rand_xsum(rng: &mut StdRng, n: usize, density: f64) -> XSum<Q> {
    let mut terms = Vec::new();
    for i in 1..=n {
        for j in 1..=n {
            if rng.random_bool(density) {
                terms.push((i, j, rand_rational(rng)));
            }
        }
    }
    XSum::from_terms(n, terms).unwrap()
}

pub fn rand_complex_xsum(rng: &mut StdRng, n: usize, density: f64) -> XSum<C> {
    let mut terms = Vec::new();
    for i in 1..=n {
        for j in 1..=n {
            if rng.random_bool(density) {
                terms.push((i, j, C::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0))));
            }
        }
    }
    XSum::from_terms(n, terms).unwrap()
}

pub fn rand_hermitian(rng: &mut StdRng, n: usize) -> XSum<C> {
    let a = rand_complex_xsum(rng, n, 0.8);
    a.add(&a.adjoint())
}

pub fn rand_ket(rng: &mut StdRng, n: usize) -> kronx::Ket<Q> {
    kronx::Ket::new((0..n).map(|_| rand_rational(rng)).collect())
}

/// Block replication [a_ij B] written out entry by entry.
pub fn dense_kron(a: &XSum<Q>, b: &XSum<Q>) -> XSum<Q> {
    let (m, n) = (a.order(), b.order());
    let (da, db) = (a.to_dense(), b.to_dense());
    let mut out = Dense::zero(m * n);
    for i in 1..=m {
        for j in 1..=m {
            for k in 1..=n {
                for l in 1..=n {
                    out.set((i - 1) * n + k, (j - 1) * n + l, da.get(i, j) * db.get(k, l));
                }
            }
        }
    }
    XSum::from_dense(&out)
}

pub fn dense_mul(a: &XSum<Q>, b: &XSum<Q>) -> XSum<Q> {
    XSum::from_dense(&a.to_dense().mul(&b.to_dense()).unwrap())
}

pub fn to_na(a: &XSum<C>) -> DMatrix<C> {
    let n = a.order();
    let mut m = DMatrix::zeros(n, n);
    for (i, j, c) in a.terms() {
        m[(i - 1, j - 1)] = *c;
    }
    m
}

pub fn from_na(m: &DMatrix<C>) -> XSum<C> {
    let n = m.nrows();
    let terms = (0..n).flat_map(|i| (0..n).map(move |j| (i + 1, j + 1, m[(i, j)])));
    XSum::from_terms(n, terms).unwrap()
}

/// Ascending eigenvalues of a Hermitian matrix.
pub fn eigvals(h: &XSum<C>) -> Vec<f64> {
    let mut v: Vec<f64> = to_na(h).symmetric_eigen().eigenvalues.iter().copied().collect();
    v.sort_by(f64::total_cmp);
    v
}

/// e^{−iHt} for Hermitian H by eigendecomposition.
pub fn expm_hermitian(h: &XSum<C>, t: f64) -> XSum<C> {
    let eig = to_na(h).symmetric_eigen();
    let v = eig.eigenvectors;
    let d = DMatrix::from_diagonal(&eig.eigenvalues.map(|l| C::from_polar(1.0, -l * t)));
    from_na(&(&v * d * v.adjoint()))
}

pub fn timed<T>(f: impl FnOnce() -> T) -> (T, Duration) {
    let start = Instant::now();
    let out = f();
    (out, start.elapsed())
}

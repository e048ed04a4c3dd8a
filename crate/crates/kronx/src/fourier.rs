//! Fourier matrices, butterflies and the Cooley–Tukey Kronecker factorization;
//! complex Hadamard dephasing.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{check_dim, KronError, Result};
use crate::hubbard::XSum;
use crate::kron::kron;
use crate::perm::{perm_matrix, Permutation};

type C = Complex64;

/// e^{2πik/n}, exact at quarter turns.
pub fn root_of_unity(k: usize, n: usize) -> C {
    let k = k % n;
    match (4 * k % n == 0).then_some(4 * k / n) {
        Some(0) => C::new(1.0, 0.0),
        Some(1) => C::new(0.0, 1.0),
        Some(2) => C::new(-1.0, 0.0),
        Some(3) => C::new(0.0, -1.0),
        _ => C::from_polar(1.0, 2.0 * PI * k as f64 / n as f64),
    }
}

/// f_{ij} = w^{(i−1)(j−1)}, w = e^{2πi/n}.
pub fn fourier_matrix(n: usize) -> XSum<C> {
    let terms = (1..=n).flat_map(|i| (1..=n).map(move |j| (i, j, root_of_unity((i - 1) * (j - 1), n))));
    XSum::from_terms(n, terms).expect("indices in range")
}

/// Ω_k = diag(1, w, …, w^{k−1}) with w = e^{2πi/(2k)}, the diagonal used inside B_{2k}.
pub fn omega_diag(k: usize) -> XSum<C> {
    XSum::diagonal((0..k).map(|s| root_of_unity(s, 2 * k)))
}

/// B_n = [[I_m, Ω_m], [I_m, −Ω_m]], m = n/2.
pub fn butterfly(n: usize) -> Result<XSum<C>> {
    if n == 0 || n % 2 == 1 {
        return Err(KronError::Domain(format!("butterfly needs an even order, got {n}")));
    }
    let m = n / 2;
    let x = |i, j| XSum::<C>::x_op(2, i, j).expect("2x2 index");
    let id = XSum::identity(m);
    let om = omega_diag(m);
    Ok(kron(&x(1, 1), &id)
        .add(&kron(&x(1, 2), &om))
        .add(&kron(&x(2, 1), &id))
        .sub(&kron(&x(2, 2), &om)))
}

/// Odd indices first, then even: (1, 3, 5, …, 2, 4, …).
pub fn odd_even_perm(k: usize) -> Permutation {
    let images = (1..=k).step_by(2).chain((2..=k).step_by(2)).collect();
    Permutation::new(images).expect("bijection")
}

/// Π_k: the identity with its odd columns moved to the front.
pub fn odd_even_matrix(k: usize) -> XSum<C> {
    perm_matrix::<C>(&odd_even_perm(k)).transpose()
}

/// j ↦ 1 + (bits of j−1 reversed over t bits).
pub fn bit_reversal(t: u32) -> Permutation {
    let images = (0..1usize << t)
        .map(|j| if t == 0 { 1 } else { (j.reverse_bits() >> (usize::BITS - t)) + 1 })
        .collect();
    Permutation::new(images).expect("bijection")
}

#[derive(Debug, Clone)]
pub struct FourierFactorization {
    pub n: usize,
    /// I_{2^s} ⊗ B_{n/2^s}, s = 0, …, t−1, in multiplication order.
    pub stages: Vec<XSum<C>>,
    pub bit_reversal: Permutation,
}

impl FourierFactorization {
    /// stage₀ · stage₁ ⋯ · P_nᵀ.
    pub fn product(&self) -> XSum<C> {
        let p = perm_matrix::<C>(&self.bit_reversal).transpose();
        self.stages.iter().rev().fold(p, |acc, s| s.mul(&acc))
    }

    pub fn stage_nnz(&self) -> Vec<usize> {
        self.stages.iter().map(XSum::nnz).collect()
    }

    /// ‖product − F_n‖_max.
    pub fn reconstruction_error(&self) -> f64 {
        self.product()
            .max_abs_diff(&fourier_matrix(self.n))
            .expect("same order")
    }
}

pub fn cooley_tukey(n: usize) -> Result<FourierFactorization> {
    if n == 0 || !n.is_power_of_two() {
        return Err(KronError::Domain(format!("{n} is not a power of two")));
    }
    let t = n.trailing_zeros();
    let stages = (0..t)
        .map(|s| Ok(kron(&XSum::identity(1 << s), &butterfly(n >> s)?)))
        .collect::<Result<_>>()?;
    Ok(FourierFactorization {
        n,
        stages,
        bit_reversal: bit_reversal(t),
    })
}

/// |h_ij| = 1 everywhere and HH† = nI, both within tol.
pub fn is_hadamard(h: &XSum<C>, tol: f64) -> bool {
    let n = h.order();
    if h.nnz() != n * n || h.terms().any(|(_, _, c)| (c.norm() - 1.0).abs() > tol) {
        return false;
    }
    let nn = XSum::identity(n).scale(&C::new(n as f64, 0.0));
    h.mul(&h.adjoint()).approx_eq(&nn, tol)
}

/// (D_r, H₀, D_c) with H₀ = D_r H D_c dephased: column 1 is fixed first by D_r,
/// then row 1 by D_c.
pub fn dephase(h: &XSum<C>, tol: f64) -> Result<(XSum<C>, XSum<C>, XSum<C>)> {
    if !is_hadamard(h, tol) {
        return Err(KronError::Domain("not a complex Hadamard matrix".into()));
    }
    let n = h.order();
    let dr = XSum::diagonal((1..=n).map(|i| {
        let c = h.coeff(i, 1);
        (c / c.norm()).conj()
    }));
    let h1 = dr.mul(h);
    let dc = XSum::diagonal((1..=n).map(|j| {
        let c = h1.coeff(1, j);
        (c / c.norm()).conj()
    }));
    let h0 = h1.mul(&dc);
    Ok((dr, h0, dc))
}

/// ‖H₁ − D₁P₁H₂P₂D₂‖_max for caller-supplied factors.
pub fn equivalence_residual(
    h1: &XSum<C>,
    h2: &XSum<C>,
    d1: &XSum<C>,
    p1: &Permutation,
    p2: &Permutation,
    d2: &XSum<C>,
) -> Result<f64> {
    check_dim(h1.order(), h2.order())?;
    let rhs = d1.mul(&perm_matrix(p1)).mul(h2).mul(&perm_matrix(p2)).mul(d2);
    h1.max_abs_diff(&rhs)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_fourier() {
        assert_eq!(fourier_matrix(1), XSum::identity(1));
        let f2 = fourier_matrix(2);
        assert_eq!(f2.coeff(2, 2), C::new(-1.0, 0.0));
        assert_eq!(f2.coeff(1, 2), C::new(1.0, 0.0));
        let f5 = fourier_matrix(5);
        for k in 1..=5 {
            assert_eq!(f5.coeff(1, k), C::new(1.0, 0.0));
            assert_eq!(f5.coeff(k, 1), C::new(1.0, 0.0));
        }
    }

    #[test]
    fn butterflies() {
        let b2 = butterfly(2).unwrap();
        assert_eq!(b2, fourier_matrix(2));
        assert!(butterfly(3).is_err());
        for n in (2..=64).step_by(2) {
            let b = butterfly(n).unwrap();
            assert!((1..=n).all(|i| b.row(i).count() == 2));
        }
        assert_eq!(omega_diag(2).coeff(2, 2), C::new(0.0, 1.0));
    }

    #[test]
    fn odd_even() {
        assert_eq!(odd_even_perm(4).images(), &[1, 3, 2, 4]);
        assert!(odd_even_perm(1).is_identity());
    }

    #[test]
    fn bitrev() {
        assert_eq!(bit_reversal(3).images(), &[1, 5, 3, 7, 2, 6, 4, 8]);
        assert!(bit_reversal(0).is_identity());
    }

    #[test]
    fn factorization_n2() {
        let f = cooley_tukey(2).unwrap();
        assert_eq!(f.stages.len(), 1);
        assert!(f.bit_reversal.is_identity());
        assert!(cooley_tukey(12).is_err());
    }

    #[test]
    fn dephasing_fourier() {
        let (dr, h0, dc) = dephase(&fourier_matrix(4), 1e-10).unwrap();
        assert!(dr.approx_eq(&XSum::identity(4), 1e-12));
        assert!(dc.approx_eq(&XSum::identity(4), 1e-12));
        assert!(h0.approx_eq(&fourier_matrix(4), 1e-12));
        assert!(dephase(&XSum::identity(2), 1e-10).is_err());
    }
}

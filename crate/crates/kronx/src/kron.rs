//! Kronecker products by index arithmetic.
//!
//! X_m^{i,j} ⊗ X_n^{k,l} = X_{mn}^{n(i-1)+k, n(j-1)+l}; everything else here is
//! that rule plus the ceiling map p ↦ ⌈p/n⌉ that undoes it.

use std::collections::BTreeMap;

use num_complex::Complex64;
use rayon::prelude::*;

use crate::error::{check_index, Result};
use crate::exactnum::{ceil_ratio, int, ExactRational, Scalar, SqrtRational};
use crate::hubbard::{HubbardTerm, Ket, XSum};

const PAR_THRESHOLD: usize = 1 << 14;

pub fn kron_term(a: HubbardTerm, b: HubbardTerm) -> HubbardTerm {
    let n = b.order;
    HubbardTerm {
        order: a.order * n,
        row: n * (a.row - 1) + b.row,
        col: n * (a.col - 1) + b.col,
    }
}

/// Position of e_{i1} ⊗ e_{i2} in the product basis.
pub fn basis_kron_index(i1: usize, n1: usize, i2: usize, n2: usize) -> Result<usize> {
    check_index(i1, n1)?;
    check_index(i2, n2)?;
    Ok((i1 - 1) * n2 + i2)
}

/// A ⊗ B by mapping term pairs.
pub fn kron<S: Scalar>(a: &XSum<S>, b: &XSum<S>) -> XSum<S> {
    let n = b.order();
    let bt: Vec<(usize, usize, &S)> = b.terms().collect();
    let expand = |(i, j, x): (usize, usize, &S)| {
        bt.iter()
            .map(move |&(k, l, y)| ((n * (i - 1) + k, n * (j - 1) + l), x.times(y)))
            .collect::<Vec<_>>()
    };
    let terms: BTreeMap<_, _> = if a.nnz() * b.nnz() >= PAR_THRESHOLD {
        let at: Vec<_> = a.terms().collect();
        at.into_par_iter().flat_map_iter(expand).collect::<Vec<_>>().into_iter().collect()
    } else {
        a.terms().flat_map(expand).collect()
    };
    XSum::from_map(a.order() * n, terms)
}

/// A ⊗ B through the coefficient formula c_{p,q} = a_{p',q'} b_{p+m-mp', q+m-mq'},
/// p' = ⌈p/m⌉, m the order of B.
pub fn kron_dense<S: Scalar>(a: &XSum<S>, b: &XSum<S>) -> XSum<S> {
    let m = b.order();
    let n = a.order() * m;
    let mut terms = BTreeMap::new();
    for p in 1..=n {
        let pp = ceil_ratio(p, m);
        for q in 1..=n {
            let qq = ceil_ratio(q, m);
            let Some(x) = a.get(pp, qq) else { continue };
            if let Some(y) = b.get(p + m - m * pp, q + m - m * qq) {
                terms.insert((p, q), x.times(y));
            }
        }
    }
    XSum::from_map(n, terms)
}

/// Left fold of [`kron`]. Panics on an empty factor list.
pub fn kron_many<S: Scalar>(factors: &[&XSum<S>]) -> XSum<S> {
    let (first, rest) = factors.split_first().expect("kron_many needs a factor");
    rest.iter().fold((*first).clone(), |acc, f| kron(&acc, f))
}

/// Coefficients of A⁽¹⁾ ⊗ … ⊗ A⁽ᵏ⁺¹⁾ read off directly: with p_0 = p and
/// p_{s+1} = ⌈p_s / n_{k+1-s}⌉, factor k+1−s contributes its entry at
/// p_s − n_{k+1-s}(p_{s+1} − 1), and the first factor its entry at p_k.
pub fn kron_many_closed<S: Scalar>(factors: &[&XSum<S>]) -> XSum<S> {
    assert!(!factors.is_empty(), "kron_many_closed needs a factor");
    let orders: Vec<usize> = factors.iter().map(|f| f.order()).collect();
    let total: usize = orders.iter().product();
    let split = |p: usize| {
        // factor indices, last factor first
        let mut idx = Vec::with_capacity(orders.len());
        let mut ps = p;
        for &n in orders.iter().rev() {
            let next = ceil_ratio(ps, n);
            idx.push(ps - n * (next - 1));
            ps = next;
        }
        idx.reverse();
        idx
    };
    let rows: Vec<Vec<usize>> = (1..=total).map(split).collect();
    let mut terms = BTreeMap::new();
    for (p, pi) in rows.iter().enumerate() {
        'col: for (q, qi) in rows.iter().enumerate() {
            let mut c = S::one();
            for (f, (&i, &j)) in factors.iter().zip(pi.iter().zip(qi)) {
                match f.get(i, j) {
                    Some(x) => c = c.times(x),
                    None => continue 'col,
                }
            }
            terms.insert((p + 1, q + 1), c);
        }
    }
    XSum::from_map(total, terms)
}

/// A^{⊗t}. Panics for t = 0.
pub fn kron_power<S: Scalar>(a: &XSum<S>, t: usize) -> XSum<S> {
    assert!(t >= 1, "kron_power needs t >= 1");
    kron_many(&vec![a; t])
}

/// A^{⊗t} via a^{(t)}_{p,q} = a_{p_k,q_k} ∏_s a_{p_s+n-np_{s+1}, q_s+n-nq_{s+1}}, p_s = ⌈p/n^s⌉.
pub fn kron_power_closed<S: Scalar>(a: &XSum<S>, t: usize) -> XSum<S> {
    assert!(t >= 1, "kron_power needs t >= 1");
    kron_many_closed(&vec![a; t])
}

/// A ⊗ I + I ⊗ B.
pub fn kron_sum<S: Scalar>(a: &XSum<S>, b: &XSum<S>) -> Result<XSum<S>> {
    kron(a, &XSum::identity(b.order())).try_add(&kron(&XSum::identity(a.order()), b))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum HadamardForm {
    /// exponent Σ_s (⌈p/2^s⌉−1)(⌈q/2^s⌉−1)
    Ceiling,
    /// exponent = popcount((p−1) & (q−1))
    Binary,
}

/// H^{⊗t} kept as an exact ±1 sign lattice times the common scale 2^{−t/2}.
#[derive(Debug, Clone, PartialEq)]
pub struct HadamardPower {
    pub t: u32,
    pub signs: XSum<ExactRational>,
}

impl HadamardPower {
    pub fn scale(&self) -> SqrtRational {
        SqrtRational::sqrt(ExactRational::new(1.into(), num_bigint::BigInt::from(1) << self.t))
            .expect("positive radicand")
    }

    pub fn to_xsum(&self) -> XSum<SqrtRational> {
        let s = self.scale();
        self.signs.map(|c| SqrtRational::from_rational(c).mul(&s))
    }
}

/// The 2×2 Hadamard matrix (1/√2)[[1, 1], [1, −1]].
pub fn hadamard() -> XSum<SqrtRational> {
    hadamard_power(1, HadamardForm::Binary).to_xsum()
}

pub fn hadamard_power(t: u32, form: HadamardForm) -> HadamardPower {
    assert!(t >= 1, "hadamard_power needs t >= 1");
    let n = 1usize << t;
    let exponent = |p: usize, q: usize| -> usize {
        match form {
            HadamardForm::Ceiling => (0..t)
                .map(|s| {
                    let d = 1usize << s;
                    (ceil_ratio(p, d) - 1) * (ceil_ratio(q, d) - 1)
                })
                .sum(),
            HadamardForm::Binary => ((p - 1) & (q - 1)).count_ones() as usize,
        }
    };
    let mut terms = BTreeMap::new();
    for p in 1..=n {
        for q in 1..=n {
            terms.insert((p, q), int(if exponent(p, q) % 2 == 0 { 1 } else { -1 }));
        }
    }
    HadamardPower {
        t,
        signs: XSum::from_map(n, terms),
    }
}

#[derive(Debug, Clone, Default)]
pub struct EigenReport {
    pub checked: usize,
    pub max_residual: f64,
    /// (index into A's pairs, index into B's pairs, residual) beyond tolerance.
    pub failures: Vec<(usize, usize, f64)>,
}

impl EigenReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

pub type EigenPair = (Complex64, Ket<Complex64>);

/// Checks that a⊗b is an eigenvector of A⊗B (eigenvalue αβ) and of the
/// Kronecker sum A⊗I + I⊗B (eigenvalue α+β) for every supplied pair.
pub fn eigen_pair_check(
    a: &XSum<Complex64>,
    b: &XSum<Complex64>,
    pairs_a: &[EigenPair],
    pairs_b: &[EigenPair],
    tol: f64,
) -> Result<EigenReport> {
    let prod = kron(a, b);
    let sum = kron_sum(a, b)?;
    let mut report = EigenReport::default();
    for (ia, (alpha, x)) in pairs_a.iter().enumerate() {
        for (ib, (beta, y)) in pairs_b.iter().enumerate() {
            let v = x.kron(y);
            let r1 = prod.apply(&v)?.max_abs_diff(&v.scale(&(alpha * beta)));
            let r2 = sum.apply(&v)?.max_abs_diff(&v.scale(&(alpha + beta)));
            let r = r1.max(r2);
            report.checked += 1;
            report.max_residual = report.max_residual.max(r);
            if r >= tol {
                report.failures.push((ia, ib, r));
            }
        }
    }
    Ok(report)
}

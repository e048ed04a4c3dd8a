//! Hubbard operators and the sparse `XSum` representation.
//!
//! Every square matrix is kept as Σ a_{ij} X^{i,j}, where X_n^{i,j} is the
//! order-n matrix with a single unit entry at (i, j). All indices are 1-based.

use std::collections::BTreeMap;
use std::ops::{Add, Mul, Neg, Sub};

use num_complex::Complex64;

use crate::error::{check_dim, check_index, Result};
use crate::exactnum::{ExactRational, Field, Scalar};

/// A single X_n^{i,j}.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct HubbardTerm {
    pub order: usize,
    pub row: usize,
    pub col: usize,
}

impl HubbardTerm {
    pub fn new(order: usize, row: usize, col: usize) -> Result<Self> {
        check_index(row, order)?;
        check_index(col, order)?;
        Ok(HubbardTerm { order, row, col })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Bracket {
    Commutator,
    Anticommutator,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Dagger {
    Transpose,
    Conjugate,
    Adjoint,
}

#[derive(Debug, Clone, PartialEq)]
pub struct XSum<S> {
    order: usize,
    terms: BTreeMap<(usize, usize), S>,
}

impl<S: Scalar> XSum<S> {
    pub fn zero(order: usize) -> Self {
        XSum {
            order,
            terms: BTreeMap::new(),
        }
    }

    pub fn identity(order: usize) -> Self {
        XSum {
            order,
            terms: (1..=order).map(|i| ((i, i), S::one())).collect(),
        }
    }

    pub fn x_op(order: usize, i: usize, j: usize) -> Result<Self> {
        Self::from_term(HubbardTerm::new(order, i, j)?, S::one())
    }

    pub fn from_term(t: HubbardTerm, c: S) -> Result<Self> {
        Self::from_terms(t.order, [(t.row, t.col, c)])
    }

    /// Builds a sum from (row, col, coeff) triples; repeated positions accumulate.
    pub fn from_terms(order: usize, terms: impl IntoIterator<Item = (usize, usize, S)>) -> Result<Self> {
        let mut out = Self::zero(order);
        for (i, j, c) in terms {
            check_index(i, order)?;
            check_index(j, order)?;
            out.accumulate(i, j, &c)?;
        }
        out.prune();
        Ok(out)
    }

    /// Diagonal matrix with the given entries.
    pub fn diagonal(entries: impl IntoIterator<Item = S>) -> Self {
        let entries: Vec<S> = entries.into_iter().collect();
        let mut out = Self::zero(entries.len());
        for (k, c) in entries.into_iter().enumerate() {
            out.set(k + 1, k + 1, c);
        }
        out
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn nnz(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Terms in (row, col) lexicographic order.
    pub fn terms(&self) -> impl Iterator<Item = (usize, usize, &S)> + '_ {
        self.terms.iter().map(|(&(i, j), c)| (i, j, c))
    }

    pub fn get(&self, i: usize, j: usize) -> Option<&S> {
        self.terms.get(&(i, j))
    }

    pub fn coeff(&self, i: usize, j: usize) -> S {
        self.get(i, j).cloned().unwrap_or_else(S::zero)
    }

    /// Row i as (col, coeff) pairs.
    pub fn row(&self, i: usize) -> impl Iterator<Item = (usize, &S)> + '_ {
        self.terms.range((i, 0)..=(i, usize::MAX)).map(|(&(_, j), c)| (j, c))
    }

    /// Overwrites one coefficient; a zero removes the term.
    pub(crate) fn set(&mut self, i: usize, j: usize, c: S) {
        if c.is_zero() {
            self.terms.remove(&(i, j));
        } else {
            self.terms.insert((i, j), c);
        }
    }

    /// Adds into one position without pruning; callers prune once at the end.
    pub(crate) fn accumulate(&mut self, i: usize, j: usize, c: &S) -> Result<()> {
        match self.terms.get_mut(&(i, j)) {
            Some(old) => *old = old.try_plus(c)?,
            None => {
                self.terms.insert((i, j), c.clone());
            }
        }
        Ok(())
    }

    pub(crate) fn prune(&mut self) {
        self.terms.retain(|_, c| !c.is_zero());
    }

    pub(crate) fn from_map(order: usize, mut terms: BTreeMap<(usize, usize), S>) -> Self {
        terms.retain(|_, c| !c.is_zero());
        XSum { order, terms }
    }

    pub fn map<T: Scalar>(&self, mut f: impl FnMut(&S) -> T) -> XSum<T> {
        XSum::from_map(self.order, self.terms.iter().map(|(&k, c)| (k, f(c))).collect())
    }

    pub fn to_complex(&self) -> XSum<Complex64> {
        self.map(S::to_complex)
    }

    pub fn try_add(&self, other: &Self) -> Result<Self> {
        check_dim(self.order, other.order)?;
        let mut out = self.clone();
        for (&(i, j), c) in &other.terms {
            out.accumulate(i, j, c)?;
        }
        out.prune();
        Ok(out)
    }

    pub fn try_sub(&self, other: &Self) -> Result<Self> {
        self.try_add(&other.neg())
    }

    pub fn scale(&self, c: &S) -> Self {
        self.map(|a| c.times(a))
    }

    pub fn neg(&self) -> Self {
        self.map(S::negated)
    }

    /// Matrix product by the contraction X^{i,j} X^{k,l} = δ_{jk} X^{i,l}.
    pub fn try_mul(&self, other: &Self) -> Result<Self> {
        check_dim(self.order, other.order)?;
        let mut out = Self::zero(self.order);
        for (&(i, j), a) in &self.terms {
            for (l, b) in other.row(j) {
                out.accumulate(i, l, &a.times(b))?;
            }
        }
        out.prune();
        Ok(out)
    }

    /// AB − BA or AB + BA.
    pub fn try_bracket(&self, other: &Self, kind: Bracket) -> Result<Self> {
        let ab = self.try_mul(other)?;
        let ba = other.try_mul(self)?;
        match kind {
            Bracket::Commutator => ab.try_sub(&ba),
            Bracket::Anticommutator => ab.try_add(&ba),
        }
    }

    pub fn dagger(&self, mode: Dagger) -> Self {
        let terms = self.terms.iter().map(|(&(i, j), c)| match mode {
            Dagger::Transpose => ((j, i), c.clone()),
            Dagger::Conjugate => ((i, j), c.conj()),
            Dagger::Adjoint => ((j, i), c.conj()),
        });
        XSum::from_map(self.order, terms.collect())
    }

    pub fn transpose(&self) -> Self {
        self.dagger(Dagger::Transpose)
    }

    pub fn adjoint(&self) -> Self {
        self.dagger(Dagger::Adjoint)
    }

    pub fn try_trace(&self) -> Result<S> {
        (1..=self.order)
            .filter_map(|i| self.get(i, i))
            .try_fold(S::zero(), |acc, c| acc.try_plus(c))
    }

    pub fn try_apply(&self, x: &Ket<S>) -> Result<Ket<S>> {
        check_dim(self.order, x.dim())?;
        let mut y = vec![S::zero(); self.order];
        for (&(k, l), a) in &self.terms {
            y[k - 1] = y[k - 1].try_plus(&a.times(&x.entries[l - 1]))?;
        }
        Ok(Ket::new(y))
    }

    pub fn to_dense(&self) -> Dense<S> {
        let mut d = Dense::zero(self.order);
        for (&(i, j), c) in &self.terms {
            d.set(i, j, c.clone());
        }
        d
    }

    pub fn from_dense(m: &Dense<S>) -> Self {
        let mut out = Self::zero(m.order());
        for i in 1..=m.order() {
            for j in 1..=m.order() {
                out.set(i, j, m.get(i, j).clone());
            }
        }
        out
    }

    pub fn is_diagonal(&self) -> bool {
        self.terms.keys().all(|&(i, j)| i == j)
    }
}

impl<S: Field> XSum<S> {
    pub fn add(&self, other: &Self) -> Self {
        self.try_add(other).expect("field addition is total")
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.try_sub(other).expect("field addition is total")
    }

    pub fn mul(&self, other: &Self) -> Self {
        self.try_mul(other).expect("field addition is total")
    }

    pub fn bracket(&self, other: &Self, kind: Bracket) -> Self {
        self.try_bracket(other, kind).expect("field addition is total")
    }

    pub fn trace(&self) -> S {
        self.try_trace().expect("field addition is total")
    }

    pub fn apply(&self, x: &Ket<S>) -> Result<Ket<S>> {
        self.try_apply(x)
    }
}

impl<S: Field> Add for &XSum<S> {
    type Output = XSum<S>;
    fn add(self, rhs: Self) -> XSum<S> {
        XSum::add(self, rhs)
    }
}

impl<S: Field> Sub for &XSum<S> {
    type Output = XSum<S>;
    fn sub(self, rhs: Self) -> XSum<S> {
        XSum::sub(self, rhs)
    }
}

impl<S: Field> Mul for &XSum<S> {
    type Output = XSum<S>;
    fn mul(self, rhs: Self) -> XSum<S> {
        XSum::mul(self, rhs)
    }
}

impl<S: Scalar> Neg for &XSum<S> {
    type Output = XSum<S>;
    fn neg(self) -> XSum<S> {
        XSum::neg(self)
    }
}

impl XSum<Complex64> {
    /// Drops terms with |c| < tol. The only place float terms are pruned.
    pub fn chop(&self, tol: f64) -> Self {
        let mut out = self.clone();
        out.terms.retain(|_, c| c.norm() >= tol);
        out
    }

    /// Max-norm of the difference; orders must agree.
    pub fn max_abs_diff(&self, other: &Self) -> Result<f64> {
        check_dim(self.order, other.order)?;
        let d = self.sub(other);
        Ok(d.terms.values().map(|c| c.norm()).fold(0.0, f64::max))
    }

    /// Tolerance-based equality; 1e-10 is the usual choice.
    pub fn approx_eq(&self, other: &Self, tol: f64) -> bool {
        self.max_abs_diff(other).is_ok_and(|d| d < tol)
    }

    pub fn max_norm(&self) -> f64 {
        self.terms.values().map(|c| c.norm()).fold(0.0, f64::max)
    }

    pub fn is_hermitian(&self, tol: f64) -> bool {
        self.approx_eq(&self.adjoint(), tol)
    }
}

impl XSum<ExactRational> {
    pub fn det(&self) -> ExactRational {
        det_dense(&self.to_dense())
    }
}

/// Column vector with 1-based access.
#[derive(Debug, Clone, PartialEq)]
pub struct Ket<S> {
    entries: Vec<S>,
}

impl<S: Scalar> Ket<S> {
    pub fn new(entries: Vec<S>) -> Self {
        Ket { entries }
    }

    /// |e_i^n⟩.
    pub fn basis(dim: usize, i: usize) -> Result<Self> {
        check_index(i, dim)?;
        let mut entries = vec![S::zero(); dim];
        entries[i - 1] = S::one();
        Ok(Ket { entries })
    }

    pub fn dim(&self) -> usize {
        self.entries.len()
    }

    pub fn get(&self, i: usize) -> &S {
        &self.entries[i - 1]
    }

    pub fn entries(&self) -> &[S] {
        &self.entries
    }

    /// x ⊗ y; component (i−1)·dim(y) + k is x_i y_k.
    pub fn kron(&self, other: &Self) -> Self {
        let entries = self
            .entries
            .iter()
            .flat_map(|a| other.entries.iter().map(move |b| a.times(b)))
            .collect();
        Ket { entries }
    }

    pub fn scale(&self, c: &S) -> Self {
        Ket::new(self.entries.iter().map(|a| c.times(a)).collect())
    }

    pub fn to_complex(&self) -> Ket<Complex64> {
        Ket::new(self.entries.iter().map(S::to_complex).collect())
    }
}

impl Ket<Complex64> {
    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        self.entries
            .iter()
            .zip(&other.entries)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    pub fn norm(&self) -> f64 {
        self.entries.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt()
    }
}

/// Row-major dense square matrix, 1-based access. Used for I/O and oracles.
#[derive(Debug, Clone, PartialEq)]
pub struct Dense<S> {
    order: usize,
    data: Vec<S>,
}

impl<S: Scalar> Dense<S> {
    pub fn zero(order: usize) -> Self {
        Dense {
            order,
            data: vec![S::zero(); order * order],
        }
    }

    pub fn identity(order: usize) -> Self {
        let mut d = Self::zero(order);
        for i in 1..=order {
            d.set(i, i, S::one());
        }
        d
    }

    pub fn from_rows(rows: Vec<Vec<S>>) -> Result<Self> {
        let order = rows.len();
        let mut data = Vec::with_capacity(order * order);
        for r in rows {
            check_dim(order, r.len())?;
            data.extend(r);
        }
        Ok(Dense { order, data })
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn get(&self, i: usize, j: usize) -> &S {
        &self.data[(i - 1) * self.order + j - 1]
    }

    pub fn set(&mut self, i: usize, j: usize, c: S) {
        self.data[(i - 1) * self.order + j - 1] = c;
    }

    pub fn rows(&self) -> impl Iterator<Item = &[S]> {
        self.data.chunks(self.order.max(1))
    }
}

impl<S: Field> Dense<S> {
    pub fn mul(&self, other: &Self) -> Result<Self> {
        check_dim(self.order, other.order)?;
        let n = self.order;
        let mut out = Self::zero(n);
        for i in 1..=n {
            for j in 1..=n {
                let mut acc = S::zero();
                for k in 1..=n {
                    acc = acc.plus(&self.get(i, k).times(other.get(k, j)));
                }
                out.set(i, j, acc);
            }
        }
        Ok(out)
    }
}

/// Exact determinant by fraction-free (Bareiss) elimination.
pub fn det_dense(m: &Dense<ExactRational>) -> ExactRational {
    let n = m.order();
    if n == 0 {
        return ExactRational::from_i64(1);
    }
    let mut a: Vec<Vec<ExactRational>> = m.rows().map(|r| r.to_vec()).collect();
    let mut sign = 1i64;
    let mut prev = ExactRational::from_i64(1);
    for k in 0..n - 1 {
        if Scalar::is_zero(&a[k][k]) {
            match (k + 1..n).find(|&r| !Scalar::is_zero(&a[r][k])) {
                Some(r) => {
                    a.swap(k, r);
                    sign = -sign;
                }
                None => return ExactRational::from_i64(0),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                a[i][j] = (&a[i][j] * &a[k][k] - &a[i][k] * &a[k][j]) / &prev;
            }
        }
        prev = a[k][k].clone();
    }
    ExactRational::from_i64(sign) * &a[n - 1][n - 1]
}

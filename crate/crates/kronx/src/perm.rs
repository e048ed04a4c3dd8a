//! Permutations and their matrices P_π = Σ_j X^{j,π(j)}.
//!
//! With this convention (P_π x)_j = x_{π(j)} and P_σ P_π = P_{π∘σ}.

use std::collections::BTreeMap;
use std::fmt;

use itertools::Itertools;
use rayon::prelude::*;

use crate::error::{check_dim, KronError, Result};
use crate::exactnum::{ceil_ratio, factorial, ExactRational, Scalar};
use crate::hubbard::{Ket, XSum};

/// Default cap on matrix orders built by the combinatorial constructors.
pub const DEFAULT_MAX_DIM: usize = 4096;

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Permutation {
    images: Vec<usize>,
}

impl Permutation {
    /// From the image list (π(1), …, π(n)), 1-based.
    pub fn new(images: Vec<usize>) -> Result<Self> {
        let n = images.len();
        let mut seen = vec![false; n];
        for &v in &images {
            if v == 0 || v > n || seen[v - 1] {
                return Err(KronError::Domain(format!("{images:?} is not a permutation")));
            }
            seen[v - 1] = true;
        }
        Ok(Permutation { images })
    }

    pub fn identity(n: usize) -> Self {
        Permutation {
            images: (1..=n).collect(),
        }
    }

    pub fn degree(&self) -> usize {
        self.images.len()
    }

    pub fn image(&self, j: usize) -> usize {
        self.images[j - 1]
    }

    pub fn images(&self) -> &[usize] {
        &self.images
    }

    /// self ∘ other, i.e. k ↦ self(other(k)).
    pub fn compose(&self, other: &Self) -> Result<Self> {
        check_dim(self.degree(), other.degree())?;
        Ok(Permutation {
            images: other.images.iter().map(|&k| self.image(k)).collect(),
        })
    }

    pub fn inverse(&self) -> Self {
        let mut inv = vec![0; self.degree()];
        for (j, &v) in self.images.iter().enumerate() {
            inv[v - 1] = j + 1;
        }
        Permutation { images: inv }
    }

    pub fn cycles(&self) -> Vec<Vec<usize>> {
        let mut seen = vec![false; self.degree()];
        let mut out = Vec::new();
        for start in 1..=self.degree() {
            if seen[start - 1] {
                continue;
            }
            let mut cycle = vec![];
            let mut k = start;
            while !seen[k - 1] {
                seen[k - 1] = true;
                cycle.push(k);
                k = self.image(k);
            }
            out.push(cycle);
        }
        out
    }

    /// χ(π) = ±1.
    pub fn parity(&self) -> i64 {
        if (self.degree() - self.cycles().len()) % 2 == 0 {
            1
        } else {
            -1
        }
    }

    pub fn is_identity(&self) -> bool {
        self.images.iter().enumerate().all(|(j, &v)| v == j + 1)
    }

    /// All n! permutations of degree n, lexicographic.
    pub fn all(n: usize) -> impl Iterator<Item = Permutation> {
        (1..=n).permutations(n).map(|images| Permutation { images })
    }
}

impl fmt::Debug for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Permutation{:?}", self.images)
    }
}

pub fn perm_matrix<S: Scalar>(pi: &Permutation) -> XSum<S> {
    XSum::from_map(
        pi.degree(),
        pi.images.iter().enumerate().map(|(j, &v)| ((j + 1, v), S::one())).collect(),
    )
}

/// y_j = x_{π(j)}.
pub fn apply_perm<S: Scalar>(pi: &Permutation, x: &Ket<S>) -> Result<Ket<S>> {
    check_dim(pi.degree(), x.dim())?;
    Ok(Ket::new(pi.images.iter().map(|&v| x.get(v).clone()).collect()))
}

/// The swap Π on C^n ⊗ C^n: π(p) = n(p+n−1) − (n²−1)⌈p/n⌉.
pub fn swap_perm(n: usize) -> Permutation {
    let images = (1..=n * n)
        .map(|p| n * (p + n - 1) - (n * n - 1) * ceil_ratio(p, n))
        .collect();
    Permutation { images }
}

/// α with P_α = P_π ⊗ P_σ: α(p) = m[π(p')−1] + σ(p−mp'+m), p' = ⌈p/m⌉.
pub fn kron_perm(pi: &Permutation, sigma: &Permutation) -> Permutation {
    let m = sigma.degree();
    let images = (1..=pi.degree() * m)
        .map(|p| {
            let pp = ceil_ratio(p, m);
            m * (pi.image(pp) - 1) + sigma.image(p + m - m * pp)
        })
        .collect();
    Permutation { images }
}

/// π(m(i−1)+k) = n(k−1)+i, so that Pᵀ(A⊗B)P = B⊗A for A of order n, B of order m.
pub fn commutation_perm(n: usize, m: usize) -> Permutation {
    let mut images = vec![0; n * m];
    for i in 1..=n {
        for k in 1..=m {
            images[m * (i - 1) + k - 1] = n * (k - 1) + i;
        }
    }
    Permutation { images }
}

/// Index permutation of (C^n)^{⊗p} realizing x₁⊗…⊗x_p ↦ x_{π(1)}⊗…⊗x_{π(p)}:
/// the new factor slot s holds the old factor π(s).
pub fn factor_perm(pi: &Permutation, n: usize) -> Permutation {
    let p = pi.degree();
    let total = n.pow(p as u32);
    let mut images = Vec::with_capacity(total);
    let mut digits = vec![0usize; p];
    let mut old = vec![0usize; p];
    for j in 0..total {
        let mut rest = j;
        for s in (0..p).rev() {
            digits[s] = rest % n;
            rest /= n;
        }
        for s in 0..p {
            old[pi.images[s] - 1] = digits[s];
        }
        images.push(old.iter().fold(0, |acc, &d| acc * n + d) + 1);
    }
    Permutation { images }
}

fn guard(n: usize, p: usize, cap: usize) -> Result<usize> {
    match n.checked_pow(p as u32) {
        Some(d) if d <= cap => Ok(d),
        other => Err(KronError::Resource {
            requested: other.unwrap_or(usize::MAX),
            limit: cap,
        }),
    }
}

fn group_average(p: usize, n: usize, cap: usize, signed: bool) -> Result<XSum<ExactRational>> {
    let dim = guard(n, p, cap)?;
    let group: Vec<Permutation> = Permutation::all(p).collect();
    let images: Vec<(i64, Permutation)> = group
        .par_iter()
        .map(|pi| (if signed { pi.parity() } else { 1 }, factor_perm(pi, n)))
        .collect();
    let mut counts: BTreeMap<(usize, usize), i64> = BTreeMap::new();
    for (chi, tau) in &images {
        for (j, &v) in tau.images.iter().enumerate() {
            *counts.entry((j + 1, v)).or_default() += chi;
        }
    }
    let norm = ExactRational::from_integer(factorial(p as u64));
    Ok(XSum::from_map(
        dim,
        counts
            .into_iter()
            .map(|(k, c)| (k, ExactRational::from_integer(c.into()) / &norm))
            .collect(),
    ))
}

/// (1/p!) Σ_π P_π over the factor permutations of (C^n)^{⊗p}.
pub fn symmetrizer(p: usize, n: usize, cap: usize) -> Result<XSum<ExactRational>> {
    group_average(p, n, cap, false)
}

/// (1/p!) Σ_π χ(π) P_π.
pub fn antisymmetrizer(p: usize, n: usize, cap: usize) -> Result<XSum<ExactRational>> {
    group_average(p, n, cap, true)
}

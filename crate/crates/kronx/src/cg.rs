//! The Clebsch–Gordan matrix S with J^{(j1,j2)}_α S = S J̃_α.
//!
//! Rows: p = α·n2 + β with m1 = j1 − α, m2 = j2 + 1 − β.
//! Columns: q = z_{k−1} + r for block k (J = j1 + j2 + 1 − k), M = J + 1 − r.
//! Entries vanish unless k + r = α + β + 1.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_complex::Complex64;

use crate::coupling::{block_gen, layout, product_gen, CouplingLayout};
use crate::error::{KronError, Result};
use crate::exactnum::{
    binomial, factorial, falling, hyp3f2_terminating, rising, scaled_3f2_sum, ExactRational,
    SqrtRational,
};
use crate::hubbard::XSum;
use crate::su2::{Generator, Irrep};

type C = Complex64;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CgIndex {
    pub alpha: usize,
    pub beta: usize,
    pub k: usize,
    pub r: usize,
}

impl CgIndex {
    pub fn row(&self, lay: &CouplingLayout) -> usize {
        self.alpha * lay.n2 + self.beta
    }

    pub fn col(&self, lay: &CouplingLayout) -> usize {
        lay.offset(self.k - 1) + self.r
    }
}

/// Every index tuple admitted by the selection rule.
pub fn admissible(lay: &CouplingLayout) -> Vec<CgIndex> {
    let mut out = Vec::new();
    for k in 1..=lay.n0 {
        for r in 1..=lay.dim(k) {
            for alpha in 0..lay.n1 {
                let Some(beta) = (k + r).checked_sub(alpha + 1) else { continue };
                if (1..=lay.n2).contains(&beta) {
                    out.push(CgIndex { alpha, beta, k, r });
                }
            }
        }
    }
    out
}

fn fact(n: i64) -> ExactRational {
    ExactRational::from_integer(factorial(n as u64))
}

fn binom(n: usize, m: i64) -> ExactRational {
    ExactRational::from_integer(binomial(n as u64, m))
}

fn in_range(lay: &CouplingLayout, idx: CgIndex) -> bool {
    idx.k >= 1
        && idx.k <= lay.n0
        && idx.r >= 1
        && idx.r <= lay.dim(idx.k)
        && idx.alpha < lay.n1
        && (1..=lay.n2).contains(&idx.beta)
        && idx.k + idx.r == idx.alpha + idx.beta + 1
}

/// Block k = 1, r = α + β: √[C(2j1,α) C(2j2,β−1) / C(2j,r−1)].
pub fn s_first_block(two_j1: usize, two_j2: usize, alpha: usize, beta: usize) -> SqrtRational {
    let lay = layout(two_j1, two_j2);
    let idx = CgIndex { alpha, beta, k: 1, r: alpha + beta };
    if beta == 0 || !in_range(&lay, idx) {
        return SqrtRational::zero();
    }
    let den = binom(two_j1 + two_j2, idx.r as i64 - 1);
    let v = binom(two_j1, alpha as i64) * binom(two_j2, beta as i64 - 1) / den;
    SqrtRational::sqrt(v).expect("nonnegative")
}

/// Top column (r = 1) of block k, α + β = k:
/// (−1)^α √[ (β)↑α/α! · (2j2−β+1)↓α · (2j1−α)↓(k−1−α) / (2j−k+2)↓(k−1) ].
pub fn s_rone(two_j1: usize, two_j2: usize, k: usize, alpha: usize, beta: usize) -> SqrtRational {
    let lay = layout(two_j1, two_j2);
    if !in_range(&lay, CgIndex { alpha, beta, k, r: 1 }) {
        return SqrtRational::zero();
    }
    let (a, b, k) = (alpha as i64, beta as i64, k as i64);
    let (tj1, tj2) = (two_j1 as i64, two_j2 as i64);
    let v = rising(b, alpha) / fact(a) * falling(tj2 - b + 1, alpha) * falling(tj1 - a, (k - 1 - a) as usize)
        / falling(tj1 + tj2 - k + 2, (k - 1) as usize);
    let s = SqrtRational::sqrt(v).expect("nonnegative");
    if alpha % 2 == 1 {
        s.neg()
    } else {
        s
    }
}

/// General entry S^{k,r}_{α,β} = (−1)^α F Θ, with ρ = r − 1,
/// F = (β−ρ)↑ρ (2j2−β+2)↑ρ ₃F₂(−ρ, −α, 2j1−α+1; β−ρ, −(2j2−β+ρ+1)) and
/// Θ² = (k−1)!(2j1−α)!(2j2−β+1)! / [α!(β−1)!(2j1−k+1)!(2j2−k+1)!
///      (2j−k+2)↓(k−1) ρ! (2j−2k+2)↓ρ].
pub fn s_general(two_j1: usize, two_j2: usize, k: usize, r: usize, alpha: usize, beta: usize) -> SqrtRational {
    let lay = layout(two_j1, two_j2);
    if !in_range(&lay, CgIndex { alpha, beta, k, r }) {
        return SqrtRational::zero();
    }
    let rho = (r - 1) as u32;
    let (a, b, ki, rh) = (alpha as i64, beta as i64, k as i64, rho as i64);
    let (tj1, tj2) = (two_j1 as i64, two_j2 as i64);
    let tj = tj1 + tj2;
    let (c, d, e) = (tj1 - a + 1, b - rh, tj2 - b + rh + 1);
    let f = if d > 0 {
        hyp3f2_terminating(rho, a, c, d, e)
            .map(|h| rising(d, rho as usize) * falling(e, rho as usize) * h)
            .unwrap_or_else(|_| scaled_3f2_sum(rho, a, c, d, e))
    } else {
        // the hypergeometric form is 0·∞ here; the finite sum is not
        scaled_3f2_sum(rho, a, c, d, e)
    };
    let theta2 = fact(ki - 1) * fact(tj1 - a) * fact(tj2 - b + 1)
        / (fact(a)
            * fact(b - 1)
            * fact(tj1 - ki + 1)
            * fact(tj2 - ki + 1)
            * falling(tj - ki + 2, k - 1)
            * fact(rh)
            * falling(tj - 2 * ki + 2, rho as usize));
    let f = if alpha % 2 == 1 { -f } else { f };
    SqrtRational::scaled(&f, theta2).expect("nonnegative radicand")
}

/// Entry by index, using the cheapest closed form that applies.
pub fn s_entry(two_j1: usize, two_j2: usize, idx: CgIndex) -> SqrtRational {
    match idx {
        CgIndex { k: 1, .. } => s_first_block(two_j1, two_j2, idx.alpha, idx.beta),
        CgIndex { r: 1, .. } => s_rone(two_j1, two_j2, idx.k, idx.alpha, idx.beta),
        _ => s_general(two_j1, two_j2, idx.k, idx.r, idx.alpha, idx.beta),
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum CgEntries {
    Exact(XSum<SqrtRational>),
    /// Only produced by the ladder construction.
    Numeric(XSum<C>),
}

#[derive(Debug, Clone, PartialEq)]
pub struct CgMatrix {
    pub layout: CouplingLayout,
    pub entries: CgEntries,
}

impl CgMatrix {
    pub fn exact(&self) -> Option<&XSum<SqrtRational>> {
        match &self.entries {
            CgEntries::Exact(s) => Some(s),
            CgEntries::Numeric(_) => None,
        }
    }

    pub fn to_complex(&self) -> XSum<C> {
        match &self.entries {
            CgEntries::Exact(s) => s.to_complex(),
            CgEntries::Numeric(s) => s.clone(),
        }
    }

    pub fn get_f64(&self, p: usize, q: usize) -> f64 {
        match &self.entries {
            CgEntries::Exact(s) => s.get(p, q).map_or(0.0, SqrtRational::to_f64),
            CgEntries::Numeric(s) => s.coeff(p, q).re,
        }
    }

    /// Σ_p S_{p,q}² per column, exact; `None` for numeric entries.
    pub fn column_norms_exact(&self) -> Option<Vec<ExactRational>> {
        let s = self.exact()?;
        let mut norms = vec![ExactRational::from_integer(BigInt::from(0)); self.layout.total()];
        for (_, q, c) in s.terms() {
            norms[q - 1] += c.square();
        }
        Some(norms)
    }
}

/// Assembles S from the closed forms. Falls back to the ladder construction
/// should the closed forms ever fail the intertwining check.
pub fn build_s(two_j1: usize, two_j2: usize) -> CgMatrix {
    let lay = layout(two_j1, two_j2);
    let terms: BTreeMap<(usize, usize), SqrtRational> = admissible(&lay)
        .into_iter()
        .map(|idx| ((idx.row(&lay), idx.col(&lay)), s_entry(two_j1, two_j2, idx)))
        .collect();
    let s = CgMatrix {
        entries: CgEntries::Exact(XSum::from_map(lay.total(), terms)),
        layout: lay,
    };
    if verify_intertwining(&s).max_residual() > 1e-8 {
        return ladder_oracle_s(two_j1, two_j2);
    }
    s
}

#[derive(Debug, Clone, PartialEq)]
pub struct IntertwiningReport {
    pub residual_j3: f64,
    pub residual_plus: f64,
    pub residual_minus: f64,
    /// m1 + m2 = M for every stored entry, checked exactly.
    pub diagonal_exact: bool,
    /// ‖SᵀS − I‖_max.
    pub orthogonality: f64,
}

impl IntertwiningReport {
    pub fn max_residual(&self) -> f64 {
        self.residual_j3.max(self.residual_plus).max(self.residual_minus)
    }

    pub fn passed(&self, tol: f64) -> bool {
        self.diagonal_exact && self.max_residual() < tol && self.orthogonality < tol
    }
}

/// Residuals of J_α S − S J̃_α for α ∈ {3, +, −}, plus the exact weight condition.
pub fn verify_intertwining(s: &CgMatrix) -> IntertwiningReport {
    let lay = &s.layout;
    let sc = s.to_complex();
    let residual = |g| {
        let j = product_gen(lay.two_j1, lay.two_j2, g).to_complex();
        let jt = block_gen(lay.two_j1, lay.two_j2, g).flatten().to_complex();
        j.mul(&sc).max_abs_diff(&sc.mul(&jt)).expect("same order")
    };
    let (a, b) = (Irrep::new(lay.two_j1), Irrep::new(lay.two_j2));
    let weight_ok = |p: usize, q: usize| {
        let alpha = (p - 1) / lay.n2;
        let beta = p - alpha * lay.n2;
        let (k, r) = lay.column_block(q);
        a.m(alpha + 1) + b.m(beta) == Irrep::new(lay.block_two_j(k)).m(r)
    };
    let diagonal_exact = match &s.entries {
        CgEntries::Exact(x) => x.terms().all(|(p, q, _)| weight_ok(p, q)),
        CgEntries::Numeric(x) => x.terms().filter(|(_, _, c)| c.norm() > 1e-12).all(|(p, q, _)| weight_ok(p, q)),
    };
    let orthogonality = sc
        .transpose()
        .mul(&sc)
        .max_abs_diff(&XSum::identity(lay.total()))
        .expect("same order");
    IntertwiningReport {
        residual_j3: residual(Generator::J3),
        residual_plus: residual(Generator::Plus),
        residual_minus: residual(Generator::Minus),
        diagonal_exact,
        orthogonality,
    }
}

/// Independent construction: the top state of each block is the unit vector
/// of weight J orthogonal to the earlier blocks (α = 0 component positive),
/// and the block is filled by repeated J₋ with normalization.
pub fn ladder_oracle_s(two_j1: usize, two_j2: usize) -> CgMatrix {
    let lay = layout(two_j1, two_j2);
    let n = lay.total();
    let jm: Vec<(usize, usize, f64)> = product_gen(two_j1, two_j2, Generator::Minus)
        .terms()
        .map(|(i, j, c)| (i, j, c.to_f64()))
        .collect();
    let lower = |v: &[f64]| {
        let mut w = vec![0.0; n];
        for &(i, j, c) in &jm {
            w[i - 1] += c * v[j - 1];
        }
        w
    };
    let dot = |x: &[f64], y: &[f64]| x.iter().zip(y).map(|(a, b)| a * b).sum::<f64>();
    let mut columns: Vec<Vec<f64>> = Vec::with_capacity(n);
    for k in 1..=lay.n0 {
        // weight J_k: product states with α + β = k
        let mut best: Option<Vec<f64>> = None;
        let mut best_norm = 0.0;
        for alpha in 0..lay.n1.min(k) {
            let beta = k - alpha;
            if beta > lay.n2 {
                continue;
            }
            let mut v = vec![0.0; n];
            v[alpha * lay.n2 + beta - 1] = 1.0;
            for c in &columns {
                let d = dot(c, &v);
                v.iter_mut().zip(c).for_each(|(x, y)| *x -= d * y);
            }
            let norm = dot(&v, &v).sqrt();
            if norm > best_norm {
                best_norm = norm;
                best = Some(v);
            }
        }
        let mut top = best.expect("a top state exists");
        let sign = if top[k - 1] < 0.0 { -1.0 } else { 1.0 };
        top.iter_mut().for_each(|x| *x *= sign / best_norm);
        let mut v = top;
        for r in 1..=lay.dim(k) {
            if r > 1 {
                v = lower(&v);
                let norm = dot(&v, &v).sqrt();
                v.iter_mut().for_each(|x| *x /= norm);
            }
            columns.push(v.clone());
        }
    }
    let mut terms = BTreeMap::new();
    for (q, col) in columns.iter().enumerate() {
        for (p, &x) in col.iter().enumerate() {
            if x != 0.0 {
                terms.insert((p + 1, q + 1), C::new(x, 0.0));
            }
        }
    }
    CgMatrix {
        entries: CgEntries::Numeric(XSum::from_map(n, terms)),
        layout: lay,
    }
}

fn check_pair(two_j: usize, two_m: i64, what: &str) -> Result<()> {
    if two_m.unsigned_abs() as usize > two_j || (two_j as i64 - two_m) % 2 != 0 {
        return Err(KronError::Domain(format!("2m = {two_m} is not a projection of 2j = {two_j} ({what})")));
    }
    Ok(())
}

/// ⟨j1 m1; j2 m2 | J M⟩, all arguments doubled.
pub fn cg_coefficient(
    two_j1: usize,
    two_m1: i64,
    two_j2: usize,
    two_m2: i64,
    two_j: usize,
    two_m: i64,
) -> Result<SqrtRational> {
    check_pair(two_j1, two_m1, "m1")?;
    check_pair(two_j2, two_m2, "m2")?;
    check_pair(two_j, two_m, "M")?;
    let (lo, hi) = (two_j1.abs_diff(two_j2), two_j1 + two_j2);
    if two_j < lo || two_j > hi || (hi - two_j) % 2 != 0 {
        return Err(KronError::Domain(format!(
            "2J = {two_j} outside the coupling range {lo}..={hi}"
        )));
    }
    if two_m != two_m1 + two_m2 {
        return Ok(SqrtRational::zero());
    }
    let alpha = ((two_j1 as i64 - two_m1) / 2) as usize;
    let beta = ((two_j2 as i64 - two_m2) / 2) as usize + 1;
    let k = (hi - two_j) / 2 + 1;
    let r = ((two_j as i64 - two_m) / 2) as usize + 1;
    Ok(s_entry(two_j1, two_j2, CgIndex { alpha, beta, k, r }))
}

/// One row of the coefficient table.
#[derive(Debug, Clone, PartialEq)]
pub struct CgRow {
    pub two_j: usize,
    pub two_m: i64,
    pub two_m1: i64,
    pub two_m2: i64,
    pub value: SqrtRational,
}

/// All nonzero coefficients, grouped by descending J then descending M.
pub fn cg_table(two_j1: usize, two_j2: usize) -> Vec<CgRow> {
    let lay = layout(two_j1, two_j2);
    let mut rows: Vec<CgRow> = admissible(&lay)
        .into_iter()
        .map(|idx| CgRow {
            two_j: lay.block_two_j(idx.k),
            two_m: lay.block_two_j(idx.k) as i64 + 2 - 2 * idx.r as i64,
            two_m1: two_j1 as i64 - 2 * idx.alpha as i64,
            two_m2: two_j2 as i64 + 2 - 2 * idx.beta as i64,
            value: s_entry(two_j1, two_j2, idx),
        })
        .filter(|row| !row.value.is_zero())
        .collect();
    rows.sort_by(|a, b| (b.two_j, b.two_m, b.two_m1).cmp(&(a.two_j, a.two_m, a.two_m1)));
    rows
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactnum::{int, rat};

    fn sq(n: i64, d: i64) -> SqrtRational {
        SqrtRational::sqrt(rat(n, d)).unwrap()
    }

    #[test]
    fn first_block() {
        assert_eq!(s_first_block(3, 2, 0, 1), SqrtRational::one());
        assert_eq!(s_first_block(1, 1, 0, 2), sq(1, 2));
        assert_eq!(s_first_block(1, 1, 1, 1), sq(1, 2));
        assert!(s_first_block(1, 1, 2, 1).is_zero());
    }

    #[test]
    fn top_column() {
        assert_eq!(s_rone(3, 3, 1, 0, 1), SqrtRational::one());
        assert_eq!(s_rone(1, 1, 2, 0, 2), sq(1, 2));
        assert_eq!(s_rone(1, 1, 2, 1, 1), sq(1, 2).neg());
        assert_eq!(s_rone(2, 1, 2, 0, 2), sq(2, 3));
        assert_eq!(s_rone(2, 1, 2, 1, 1), sq(1, 3).neg());
    }

    #[test]
    fn general_entries() {
        assert_eq!(s_general(2, 1, 2, 2, 1, 2), sq(1, 3));
        assert_eq!(s_general(2, 1, 2, 2, 2, 1), sq(2, 3).neg());
        // r = 2 reduces to F = (β−1)(2j2−β+2) − α(2j1−α+1)
        let (tj1, tj2, k, alpha, beta) = (3i64, 2i64, 2usize, 1i64, 2i64);
        let f = scaled_3f2_sum(1, alpha, tj1 - alpha + 1, beta - 1, tj2 - beta + 2);
        assert_eq!(f, int((beta - 1) * (tj2 - beta + 2) - alpha * (tj1 - alpha + 1)));
        assert!(!s_general(3, 2, k, 2, 1, 2).is_zero());
    }

    #[test]
    fn printed_half_half() {
        let s = build_s(1, 1);
        let s = s.exact().unwrap();
        let h = sq(1, 2);
        let expect = XSum::from_terms(
            4,
            [
                (1, 1, SqrtRational::one()),
                (2, 2, h.clone()),
                (2, 4, h.clone()),
                (3, 2, h.clone()),
                (3, 4, h.neg()),
                (4, 3, SqrtRational::one()),
            ],
        )
        .unwrap();
        assert_eq!(s, &expect);
    }

    #[test]
    fn coefficients() {
        assert_eq!(cg_coefficient(1, 1, 1, -1, 2, 0).unwrap(), sq(1, 2));
        assert_eq!(cg_coefficient(1, 1, 1, -1, 0, 0).unwrap(), sq(1, 2));
        assert_eq!(cg_coefficient(1, -1, 1, 1, 0, 0).unwrap(), sq(1, 2).neg());
        assert!(cg_coefficient(1, 1, 1, 1, 2, 0).unwrap().is_zero());
        assert!(cg_coefficient(1, 2, 1, 1, 2, 0).is_err());
        assert!(cg_coefficient(1, 1, 1, 1, 4, 2).is_err());
    }

    #[test]
    fn trivial_coupling() {
        let s = build_s(0, 3);
        assert_eq!(s.exact().unwrap().to_complex(), XSum::identity(4));
    }
}

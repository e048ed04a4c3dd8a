//! Deterministic invariant suites with residual reporting, shared by the CLI
//! `verify` command and the test harness.

use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;

use crate::cg::{build_s, ladder_oracle_s, verify_intertwining};
use crate::coupling::{block_gen, product_gen};
use crate::error::{KronError, Result};
use crate::exactnum::{int, ExactRational, Scalar, SqrtRational};
use crate::fourier::cooley_tukey;
use crate::hubbard::{Bracket, XSum};
use crate::kron::{hadamard_power, kron, kron_dense, kron_many, kron_many_closed, HadamardForm};
use crate::models::{
    heisenberg_h, heisenberg_two_site_printed, jc_evolution, jc_hamiltonian, excitation_number, total_sz, JcConfig,
    SpinChainParams,
};
use crate::perm::{commutation_perm, kron_perm, perm_matrix, swap_perm, Permutation};
use crate::su2::{Generator, Irrep};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Suite {
    Intertwining,
    Su2,
    Kron,
    Perm,
    Hadamard,
    Fft,
    Models,
    All,
}

impl FromStr for Suite {
    type Err = KronError;
    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "intertwining" | "cg" => Suite::Intertwining,
            "su2" => Suite::Su2,
            "kron" => Suite::Kron,
            "perm" => Suite::Perm,
            "hadamard" => Suite::Hadamard,
            "fft" => Suite::Fft,
            "models" => Suite::Models,
            "all" => Suite::All,
            _ => return Err(KronError::Domain(format!("unknown suite {s:?}"))),
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Check {
    pub name: String,
    /// Max residual; 0 for exact checks that held, 1 for exact checks that failed.
    pub residual: f64,
    pub passed: bool,
}

impl fmt::Display for Check {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let tag = if self.passed { "ok  " } else { "FAIL" };
        write!(f, "{tag} {:<48} {:.3e}", self.name, self.residual)
    }
}

#[derive(Debug, Clone, Default)]
pub struct Report {
    pub checks: Vec<Check>,
}

impl Report {
    fn exact(&mut self, name: impl Into<String>, ok: bool) {
        self.checks.push(Check {
            name: name.into(),
            residual: if ok { 0.0 } else { 1.0 },
            passed: ok,
        });
    }

    fn residual(&mut self, name: impl Into<String>, r: f64, tol: f64) {
        self.checks.push(Check {
            name: name.into(),
            residual: r,
            passed: r < tol,
        });
    }

    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn max_residual(&self) -> f64 {
        self.checks.iter().map(|c| c.residual).fold(0.0, f64::max)
    }
}

/// Runs a suite; `max_two_j` bounds the angular momenta and the sizes of the
/// enumerated cases.
pub fn run(suite: Suite, max_two_j: usize) -> Report {
    let mut r = Report::default();
    match suite {
        Suite::Intertwining => intertwining(&mut r, max_two_j),
        Suite::Su2 => su2(&mut r, max_two_j),
        Suite::Kron => kron_suite(&mut r),
        Suite::Perm => perm_suite(&mut r),
        Suite::Hadamard => hadamard(&mut r, 6),
        Suite::Fft => fft(&mut r),
        Suite::Models => models(&mut r),
        Suite::All => {
            for s in [
                Suite::Intertwining,
                Suite::Su2,
                Suite::Kron,
                Suite::Perm,
                Suite::Hadamard,
                Suite::Fft,
                Suite::Models,
            ] {
                r.checks.extend(run(s, max_two_j).checks);
            }
        }
    }
    r
}

fn intertwining(r: &mut Report, max: usize) {
    for a in 0..=max {
        for b in 0..=max {
            let s = build_s(a, b);
            let rep = verify_intertwining(&s);
            r.residual(format!("cg ({a},{b}) intertwining"), rep.max_residual(), 1e-10);
            r.residual(format!("cg ({a},{b}) orthogonality"), rep.orthogonality, 1e-10);
            r.exact(format!("cg ({a},{b}) weight rule"), rep.diagonal_exact);
            if let Some(norms) = s.column_norms_exact() {
                r.exact(format!("cg ({a},{b}) column norms"), norms.iter().all(|n| *n == int(1)));
            } else {
                r.exact(format!("cg ({a},{b}) exact entries"), false);
            }
            if a <= 4 && b <= 4 {
                let d = s
                    .to_complex()
                    .max_abs_diff(&ladder_oracle_s(a, b).to_complex())
                    .expect("same order");
                r.residual(format!("cg ({a},{b}) ladder oracle"), d, 1e-10);
            }
            let lay = &s.layout;
            let positive = (1..=lay.n0).all(|k| s.get_f64(k, lay.offset(k - 1) + 1) > 0.0);
            r.exact(format!("cg ({a},{b}) sign convention"), positive);
        }
    }
}

/// [J₊, J₋] = 2J₃ and [J₃, J±] = ±J±, exactly.
pub fn su2_laws(jp: &XSum<SqrtRational>, jm: &XSum<SqrtRational>, j3: &XSum<SqrtRational>) -> bool {
    let two = SqrtRational::from_rational(&int(2));
    let ok = |lhs: Result<XSum<SqrtRational>>, rhs: XSum<SqrtRational>| lhs.map(|l| l == rhs).unwrap_or(false);
    ok(jp.try_bracket(jm, Bracket::Commutator), j3.scale(&two))
        && ok(j3.try_bracket(jp, Bracket::Commutator), jp.clone())
        && ok(j3.try_bracket(jm, Bracket::Commutator), jm.neg())
}

/// J₃² + ½(J₊J₋ + J₋J₊), exact.
pub fn casimir(jp: &XSum<SqrtRational>, jm: &XSum<SqrtRational>, j3: &XSum<SqrtRational>) -> Result<XSum<SqrtRational>> {
    let half = SqrtRational::from_rational(&crate::exactnum::rat(1, 2));
    let pm = jp.try_mul(jm)?.try_add(&jm.try_mul(jp)?)?;
    j3.try_mul(j3)?.try_add(&pm.scale(&half))
}

fn su2(r: &mut Report, max: usize) {
    for tj in 0..=2 * max {
        let rep = Irrep::new(tj);
        let g = |x| rep.generator(x);
        let (jp, jm, j3) = (g(Generator::Plus), g(Generator::Minus), g(Generator::J3));
        r.exact(format!("su2 2j={tj} commutators"), su2_laws(&jp, &jm, &j3));
        let c = SqrtRational::from_rational(&rep.casimir());
        let cas = casimir(&jp, &jm, &j3).map(|m| m == XSum::identity(rep.dim()).scale(&c));
        r.exact(format!("su2 2j={tj} casimir"), cas.unwrap_or(false));
    }
    for a in 0..=max {
        for b in 0..=max {
            let p = |x| product_gen(a, b, x);
            r.exact(
                format!("su2 product ({a},{b}) commutators"),
                su2_laws(&p(Generator::Plus), &p(Generator::Minus), &p(Generator::J3)),
            );
            let q = |x| block_gen(a, b, x).flatten();
            r.exact(
                format!("su2 block ({a},{b}) commutators"),
                su2_laws(&q(Generator::Plus), &q(Generator::Minus), &q(Generator::J3)),
            );
        }
    }
}

fn sample(n: usize, seed: usize) -> XSum<ExactRational> {
    let terms = (1..=n).flat_map(|i| (1..=n).map(move |j| (i, j)));
    let terms = terms.filter_map(move |(i, j)| {
        let v = ((i * 7 + j * 13 + seed * 5) % 11) as i64 - 5;
        (v != 0).then(|| (i, j, crate::exactnum::rat(v, 1 + ((i + j + seed) % 3) as i64)))
    });
    XSum::from_terms(n, terms).expect("in range")
}

fn kron_suite(r: &mut Report) {
    for n in 1..=5 {
        for m in 1..=5 {
            let (a, b) = (sample(n, m), sample(m, n + 1));
            r.exact(format!("kron sparse = dense ({n},{m})"), kron(&a, &b) == kron_dense(&a, &b));
        }
    }
    for n in 1..=3 {
        let (a, b, c) = (sample(n, 1), sample(n + 1, 2), sample(4 - n, 3));
        r.exact(
            format!("kron triple closed form ({n})"),
            kron_many(&[&a, &b, &c]) == kron_many_closed(&[&a, &b, &c]),
        );
    }
}

fn perm_suite(r: &mut Report) {
    for n in 1..=4 {
        let a = sample(n, 2);
        let b = sample(n, 5);
        let p = perm_matrix::<ExactRational>(&swap_perm(n));
        r.exact(format!("perm swap conjugation n={n}"), p.transpose().mul(&kron(&a, &b)).mul(&p) == kron(&b, &a));
    }
    for n in 1..=4 {
        for m in 1..=4 {
            let (a, b) = (sample(n, m), sample(m, n));
            let p = perm_matrix::<ExactRational>(&commutation_perm(n, m));
            r.exact(
                format!("perm commutation ({n},{m})"),
                p.transpose().mul(&kron(&a, &b)).mul(&p) == kron(&b, &a),
            );
        }
    }
    for n in 1..=3 {
        for m in 1..=3 {
            let ok = Permutation::all(n).all(|pi| {
                Permutation::all(m).all(|s| {
                    perm_matrix::<ExactRational>(&kron_perm(&pi, &s))
                        == kron(&perm_matrix(&pi), &perm_matrix(&s))
                })
            });
            r.exact(format!("perm kron law ({n},{m})"), ok);
        }
    }
}

fn hadamard(r: &mut Report, max_t: u32) {
    for t in 1..=max_t {
        let c = hadamard_power(t, HadamardForm::Ceiling);
        let b = hadamard_power(t, HadamardForm::Binary);
        r.exact(format!("hadamard t={t} ceiling = binary"), c == b);
        let n = 1usize << t;
        // H H† = (sign lattice)² / 2^t
        let prod = c.signs.mul(&c.signs.transpose());
        r.exact(
            format!("hadamard t={t} unitary"),
            prod == XSum::identity(n).scale(&int(n as i64)),
        );
    }
}

fn fft(r: &mut Report) {
    for t in 1..=5 {
        let n = 1usize << t;
        let f = cooley_tukey(n).expect("power of two");
        r.residual(format!("fft n={n} reconstruction"), f.reconstruction_error(), 1e-10);
        r.exact(format!("fft n={n} stage sparsity 2n"), f.stage_nnz().iter().all(|&z| z == 2 * n));
    }
}

fn models(r: &mut Report) {
    for n in 2..=4 {
        let h = heisenberg_h(&SpinChainParams::xxx(n, int(1)), n > 2).expect("n >= 2");
        let sz = total_sz(n).expect("n >= 2");
        r.exact(format!("heisenberg n={n} conserves Sz"), h.bracket(&sz, Bracket::Commutator).is_zero());
        r.exact(format!("heisenberg n={n} symmetric"), h == h.transpose());
    }
    let p = SpinChainParams {
        sites: 2,
        jx: int(2),
        jy: int(2),
        jz: crate::exactnum::rat(1, 2),
    };
    r.exact(
        "heisenberg printed two-site form",
        heisenberg_h(&p, false).expect("n = 2") == heisenberg_two_site_printed(&int(1)),
    );
    let cfg = JcConfig { gamma: 1.0, cutoff: 12 };
    let h = jc_hamiltonian(&cfg).expect("cutoff >= 1");
    let comm = h.bracket(&excitation_number(&cfg), Bracket::Commutator);
    r.residual("jc excitation number conserved", comm.max_norm(), 1e-12);
    let top = cfg.index(1, cfg.cutoff);
    let mut worst: f64 = 0.0;
    for &t in &[0.3, 1.7, 3.14] {
        let u = jc_evolution(&cfg, t).expect("cutoff >= 1");
        let v = jc_evolution(&cfg, -t).expect("cutoff >= 1");
        let id = u.mul(&v);
        for i in (1..=cfg.dim()).filter(|&i| i != top) {
            for j in (1..=cfg.dim()).filter(|&j| j != top) {
                let e = if i == j { Complex64::new(1.0, 0.0) } else { Scalar::zero() };
                worst = worst.max((id.coeff(i, j) - e).norm());
            }
        }
    }
    r.residual("jc U(t)U(-t) below cutoff", worst, 1e-10);
}

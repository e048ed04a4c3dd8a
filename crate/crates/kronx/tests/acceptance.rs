//! Acceptance criteria; one PASS/FAIL line per criterion.

mod common;

use std::process::ExitCode;
use std::time::Duration;

use common::*;
use kronx::cg::{build_s, ladder_oracle_s, verify_intertwining};
use kronx::coupling::{block_gen, layout, product_gen, product_j3};
use kronx::exactnum::{
    binomial, ceil_ratio, floor_ratio, hyp3f2_terminating, int, rat, rising, scaled_3f2_sum, falling, SqrtRational,
};
use kronx::fourier::{cooley_tukey, fourier_matrix};
use kronx::kron::{hadamard, hadamard_power, kron, kron_dense, kron_many, kron_many_closed, kron_power, kron_power_closed, HadamardForm};
use kronx::models::*;
use kronx::perm::{commutation_perm, kron_perm, perm_matrix, swap_perm, Permutation};
use kronx::su2::{Generator, Irrep};
use kronx::verify::su2_laws;
use kronx::XSum;
use num_rational::BigRational;
use rand::Rng;

struct Outcome {
    passed: bool,
    detail: String,
}

fn outcome(passed: bool, detail: impl Into<String>) -> Outcome {
    Outcome { passed, detail: detail.into() }
}

fn sq(n: i64, d: i64) -> SqrtRational {
    SqrtRational::sqrt(rat(n, d)).unwrap()
}

fn one() -> SqrtRational {
    SqrtRational::one()
}

fn sx(n: usize, terms: Vec<(usize, usize, SqrtRational)>) -> XSum<SqrtRational> {
    XSum::from_terms(n, terms).unwrap()
}

fn sdiag(entries: &[(i64, i64)]) -> XSum<SqrtRational> {
    XSum::diagonal(entries.iter().map(|&(n, d)| SqrtRational::from_rational(&rat(n, d))))
}

fn printed_fixtures() -> Outcome {
    let half = SqrtRational::from_rational(&rat(1, 2));
    let signs = [[1, 1, 1, 1], [1, -1, 1, -1], [1, 1, -1, -1], [1, -1, -1, 1]];
    let h4 = sx(
        4,
        signs
            .iter()
            .enumerate()
            .flat_map(|(p, row)| {
                let half = half.clone();
                row.iter().enumerate().map(move |(q, &s)| (p + 1, q + 1, if s > 0 { half.clone() } else { half.neg() }))
            })
            .collect(),
    );
    let two = || SqrtRational::from_rational(&int(2));
    let fixtures: Vec<(&str, XSum<SqrtRational>, XSum<SqrtRational>)> = vec![
        ("H4", kron(&hadamard(), &hadamard()), h4),
        ("J3 2j=1", Irrep::new(1).generator(Generator::J3), sdiag(&[(1, 2), (-1, 2)])),
        ("J3 2j=2", Irrep::new(2).generator(Generator::J3), sdiag(&[(1, 1), (0, 1), (-1, 1)])),
        ("J3 2j=3", Irrep::new(3).generator(Generator::J3), sdiag(&[(3, 2), (1, 2), (-1, 2), (-3, 2)])),
        ("J+ 2j=1", Irrep::new(1).jpm(Generator::Plus), sx(2, vec![(1, 2, one())])),
        ("J+ 2j=2", Irrep::new(2).jpm(Generator::Plus), sx(3, vec![(1, 2, sq(2, 1)), (2, 3, sq(2, 1))])),
        ("J+ 2j=3", Irrep::new(3).jpm(Generator::Plus), sx(4, vec![(1, 2, sq(3, 1)), (2, 3, two()), (3, 4, sq(3, 1))])),
        (
            "J+ (1/2,1/2)",
            product_gen(1, 1, Generator::Plus),
            sx(4, vec![(1, 2, one()), (1, 3, one()), (2, 4, one()), (3, 4, one())]),
        ),
        (
            "J+ (1/2,1)",
            product_gen(1, 2, Generator::Plus),
            sx(
                6,
                vec![
                    (1, 2, sq(2, 1)),
                    (2, 3, sq(2, 1)),
                    (4, 5, sq(2, 1)),
                    (5, 6, sq(2, 1)),
                    (1, 4, one()),
                    (2, 5, one()),
                    (3, 6, one()),
                ],
            ),
        ),
        (
            "J+ (1,1/2)",
            product_gen(2, 1, Generator::Plus),
            sx(
                6,
                vec![
                    (1, 2, one()),
                    (1, 3, sq(2, 1)),
                    (2, 4, sq(2, 1)),
                    (3, 4, one()),
                    (3, 5, sq(2, 1)),
                    (4, 6, sq(2, 1)),
                    (5, 6, one()),
                ],
            ),
        ),
        ("J~3 (1/2,1/2)", block_gen(1, 1, Generator::J3).flatten(), sdiag(&[(1, 1), (0, 1), (-1, 1), (0, 1)])),
        ("J~+ (1/2,1/2)", block_gen(1, 1, Generator::Plus).flatten(), sx(4, vec![(1, 2, sq(2, 1)), (2, 3, sq(2, 1))])),
        (
            "J~3 (1,1/2)",
            block_gen(2, 1, Generator::J3).flatten(),
            sdiag(&[(3, 2), (1, 2), (-1, 2), (-3, 2), (1, 2), (-1, 2)]),
        ),
        (
            "J~+ (1,1/2)",
            block_gen(2, 1, Generator::Plus).flatten(),
            sx(6, vec![(1, 2, sq(3, 1)), (2, 3, two()), (3, 4, sq(3, 1)), (5, 6, one())]),
        ),
        (
            "S (1/2,1/2)",
            build_s(1, 1).exact().unwrap().clone(),
            sx(4, vec![(1, 1, one()), (2, 2, sq(1, 2)), (3, 2, sq(1, 2)), (4, 3, one()), (2, 4, sq(1, 2)), (3, 4, sq(1, 2).neg())]),
        ),
        (
            "S (1,1/2)",
            build_s(2, 1).exact().unwrap().clone(),
            sx(
                6,
                vec![
                    (1, 1, one()),
                    (2, 2, sq(1, 3)),
                    (3, 2, sq(2, 3)),
                    (4, 3, sq(2, 3)),
                    (5, 3, sq(1, 3)),
                    (6, 4, one()),
                    (2, 5, sq(2, 3)),
                    (3, 5, sq(1, 3).neg()),
                    (4, 6, sq(1, 3)),
                    (5, 6, sq(2, 3).neg()),
                ],
            ),
        ),
    ];
    let bad: Vec<&str> = fixtures.iter().filter(|(_, got, want)| got != want).map(|(n, _, _)| *n).collect();
    if bad.is_empty() {
        outcome(true, format!("{} fixtures exact", fixtures.len()))
    } else {
        outcome(false, format!("mismatch: {}", bad.join(", ")))
    }
}

fn heisenberg_spectrum() -> Outcome {
    let h = rational_to_complex(&heisenberg_two_site_printed(&int(1)));
    let lvl = NLevelHamiltonian::from_xsum(&h, 1e-12).unwrap();
    let single = jacobi_sweep(&lvl);
    let e = diagonalize(&lvl, 1e-14, 50).unwrap();
    let mut want = [-0.25, 2.25, -1.75, -0.25];
    want.sort_by(f64::total_cmp);
    let err = e.values.iter().zip(want).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max);
    let one_pass: Vec<f64> = (1..=4).map(|p| single.eps(p)).collect();
    let literal = eigvals(&rational_to_complex(&heisenberg_h(&SpinChainParams::xxx(2, int(1)), false).unwrap()));
    outcome(
        err < 1e-12,
        format!(
            "printed 2-site matrix: {:?}, max err {err:.1e}; single sweep diagonal {one_pass:?}; \
             literal -1/2 sum of sigma.sigma at J=1 gives {literal:?}",
            e.values
        ),
    )
}

fn kron_oracle() -> Outcome {
    let mut g = rng(0xC0FFEE);
    let mut bad = 0;
    for _ in 0..200 {
        let (m, n) = (g.random_range(1..=8), g.random_range(1..=8));
        let density = g.random_range(0.1..0.9);
        let (a, b) = (rand_xsum(&mut g, m, density), rand_xsum(&mut g, n, density));
        let oracle = dense_kron(&a, &b);
        bad += usize::from(kron(&a, &b) != oracle || kron_dense(&a, &b) != oracle);
    }
    for _ in 0..50 {
        let f: Vec<_> = (0..3).map(|_| {
            let n = g.random_range(1..=4);
            rand_xsum(&mut g, n, 0.5)
        }).collect();
        let oracle = dense_kron(&dense_kron(&f[0], &f[1]), &f[2]);
        let refs = [&f[0], &f[1], &f[2]];
        bad += usize::from(kron_many(&refs) != oracle || kron_many_closed(&refs) != oracle);
    }
    for _ in 0..20 {
        let n = g.random_range(2..=3);
        let t = g.random_range(1..=4);
        let a = rand_xsum(&mut g, n, 0.7);
        let oracle = (1..t).fold(a.clone(), |acc, _| dense_kron(&acc, &a));
        bad += usize::from(kron_power(&a, t) != oracle || kron_power_closed(&a, t) != oracle);
    }
    outcome(bad == 0, format!("200 pairs, 50 triples, 20 powers; {bad} mismatches"))
}

fn permutation_laws() -> Outcome {
    let mut g = rng(7);
    let mut bad = 0;
    for _ in 0..100 {
        let n = g.random_range(1..=6);
        let (x, y) = (rand_ket(&mut g, n), rand_ket(&mut g, n));
        bad += usize::from(perm_matrix(&swap_perm(n)).apply(&x.kron(&y)).unwrap() != y.kron(&x));
    }
    for _ in 0..100 {
        let (n, m) = (g.random_range(1..=5), g.random_range(1..=5));
        let (a, b) = (rand_xsum(&mut g, n, 0.5), rand_xsum(&mut g, m, 0.5));
        let p = perm_matrix::<Q>(&commutation_perm(n, m));
        bad += usize::from(p.transpose().mul(&kron(&a, &b)).mul(&p) != kron(&b, &a));
    }
    let mut pairs = 0;
    for n in 1..=4 {
        for m in 1..=4 {
            for pi in Permutation::all(n) {
                for s in Permutation::all(m) {
                    pairs += 1;
                    let lhs = perm_matrix::<Q>(&kron_perm(&pi, &s));
                    bad += usize::from(lhs != kron(&perm_matrix(&pi), &perm_matrix(&s)));
                }
            }
        }
    }
    outcome(bad == 0, format!("100 swaps, 100 commutations, {pairs} kron_perm pairs; {bad} failures"))
}

fn hadamard_forms() -> Outcome {
    let mut bad = Vec::new();
    for t in 1..=6 {
        let c = hadamard_power(t, HadamardForm::Ceiling);
        let b = hadamard_power(t, HadamardForm::Binary);
        let h = c.to_xsum();
        let unitary = h.try_mul(&h.adjoint()).map(|p| p == XSum::identity(h.order())).unwrap_or(false);
        if c.signs != b.signs || c.scale() != b.scale() || h != kron_power(&hadamard(), t as usize) || !unitary {
            bad.push(t);
        }
    }
    outcome(bad.is_empty(), format!("t = 1..6, failing t: {bad:?}"))
}

fn su2_algebra() -> Outcome {
    let mut bad = Vec::new();
    for tj in 0..=10 {
        let rep = Irrep::new(tj);
        let (jp, jm, j3) = (rep.generator(Generator::Plus), rep.generator(Generator::Minus), rep.generator(Generator::J3));
        let jj = SqrtRational::from_rational(&(rat(tj as i64, 2) * rat(tj as i64 + 2, 2)));
        let cas = jm.try_mul(&jp).and_then(|x| x.try_add(&j3.try_mul(&j3)?)).and_then(|x| x.try_add(&j3));
        if !su2_laws(&jp, &jm, &j3) || cas.ok() != Some(XSum::identity(rep.dim()).scale(&jj)) {
            bad.push(format!("irrep 2j={tj}"));
        }
    }
    for a in 0..=5 {
        for b in 0..=5 {
            let p3 = product_j3(a, b).map(SqrtRational::from_rational);
            let pg = |g| product_gen(a, b, g);
            if !su2_laws(&pg(Generator::Plus), &pg(Generator::Minus), &p3) {
                bad.push(format!("product ({a},{b})"));
            }
            let bg = |g| block_gen(a, b, g).flatten();
            if !su2_laws(&bg(Generator::Plus), &bg(Generator::Minus), &bg(Generator::J3)) {
                bad.push(format!("block ({a},{b})"));
            }
        }
    }
    outcome(bad.is_empty(), format!("11 irreps, 36 product and 36 block pairs; failures: {bad:?}"))
}

fn clebsch_gordan() -> Outcome {
    let mut bad = Vec::new();
    let mut worst = 0.0f64;
    for a in 0..=5 {
        for b in 0..=5 {
            let s = build_s(a, b);
            let rep = verify_intertwining(&s);
            worst = worst.max(rep.max_residual());
            let f = s.to_complex();
            let unitary = f.transpose().mul(&f).approx_eq(&XSum::identity(f.order()), 1e-10);
            let normalized = s.column_norms_exact().is_some_and(|n| n.iter().all(|x| *x == int(1)));
            let l = layout(a, b);
            let positive = (1..=l.n0).all(|k| s.get_f64(k, l.offset(k - 1) + 1) > 0.0);
            let oracle = a > 4 || b > 4 || f.max_abs_diff(&ladder_oracle_s(a, b).to_complex()).unwrap() < 1e-10;
            if !(rep.passed(1e-10) && unitary && normalized && positive && oracle) {
                bad.push((a, b));
            }
        }
    }
    outcome(bad.is_empty(), format!("2j1, 2j2 <= 5, max intertwining residual {worst:.1e}; failing {bad:?}"))
}

fn combinatorial_identities() -> Outcome {
    let mut bad = 0usize;
    for p in 1..=10_000 {
        for n in 1..=64 {
            let cn = ceil_ratio(p, n);
            for m in 1..=64 {
                bad += usize::from(ceil_ratio(p, n * m) != ceil_ratio(cn, m));
            }
        }
    }
    for n in 0..=10_000 {
        for m in 1..=64 {
            bad += usize::from(ceil_ratio(n + 1, m) != floor_ratio(n, m) + 1);
        }
    }
    let mut g = rng(42);
    for _ in 0..500 {
        let (a, b, n) = (g.random_range(-6..=12), g.random_range(-6..=12), g.random_range(0..=8usize));
        let lhs: BigRational = (0..=n)
            .map(|s| BigRational::from_integer(binomial(n as u64, s as i64)) * rising(a, s) * rising(b, n - s))
            .sum();
        bad += usize::from(lhs != rising(a + b, n));
    }
    let mut tuples = 0;
    while tuples < 500 {
        let r = g.random_range(0..=6u32);
        let [b, c, d, e] = [(); 4].map(|_| g.random_range(-12..=12i64));
        let Ok(f) = hyp3f2_terminating(r, b, c, d, e) else { continue };
        let scale = rising(d, r as usize) * falling(e, r as usize);
        if scale == int(0) {
            continue;
        }
        tuples += 1;
        bad += usize::from(f * scale != scaled_3f2_sum(r, b, c, d, e));
    }
    outcome(bad == 0, format!("ceil/floor identities exhaustive over p<=1e4, n,m<=64; 500 addition-formula and 500 3F2 tuples; {bad} failures"))
}

fn cooley_tukey_factors() -> Outcome {
    let mut worst = 0.0f64;
    let mut ok = true;
    for n in [2, 4, 8, 16, 32] {
        let f = cooley_tukey(n).unwrap();
        let err = f.product().max_abs_diff(&fourier_matrix(n)).unwrap();
        worst = worst.max(err);
        ok &= err < 1e-10 && f.stage_nnz().iter().all(|&z| z == 2 * n);
    }
    outcome(ok, format!("n = 2..32, max error {worst:.1e}, every stage 2n nonzeros"))
}

fn jaynes_cummings() -> Outcome {
    let cfg = JcConfig { gamma: 0.7, cutoff: 32 };
    let h = jc_hamiltonian(&cfg).unwrap();
    let top = cfg.index(1, cfg.cutoff);
    let (mut survival, mut oracle, mut unitary) = (0.0f64, 0.0f64, 0.0f64);
    for s in 0..20 {
        let t = 0.37 * s as f64;
        let u = jc_evolution(&cfg, t).unwrap();
        let exact = expm_hermitian(&h, t);
        for n in 0..=8 {
            let e = cfg.index(1, n);
            let p = u.coeff(e, e).norm_sqr();
            let want = (cfg.gamma * t * ((n + 1) as f64).sqrt()).cos().powi(2);
            survival = survival.max((p - want).abs());
            oracle = oracle.max((exact.coeff(e, e).norm_sqr() - want).abs());
        }
        let id = u.mul(&jc_evolution(&cfg, -t).unwrap());
        for i in (1..=cfg.dim()).filter(|&i| i != top) {
            for j in (1..=cfg.dim()).filter(|&j| j != top) {
                let e = if i == j { 1.0 } else { 0.0 };
                unitary = unitary.max((id.coeff(i, j) - C::new(e, 0.0)).norm());
            }
        }
    }
    outcome(
        survival < 1e-9 && oracle < 1e-9 && unitary < 1e-10,
        format!("cutoff 32, n <= 8, 20 times: survival err {survival:.1e}, oracle err {oracle:.1e}, U(t)U(-t) err {unitary:.1e}"),
    )
}

fn main() -> ExitCode {
    let criteria: [(&str, fn() -> Outcome); 10] = [
        ("printed fixtures", printed_fixtures),
        ("heisenberg spectrum", heisenberg_spectrum),
        ("kron oracle", kron_oracle),
        ("permutation laws", permutation_laws),
        ("hadamard forms", hadamard_forms),
        ("su2 algebra", su2_algebra),
        ("clebsch-gordan", clebsch_gordan),
        ("combinatorial identities", combinatorial_identities),
        ("cooley-tukey", cooley_tukey_factors),
        ("jaynes-cummings", jaynes_cummings),
    ];
    let mut failed = 0;
    let mut total = Duration::ZERO;
    for (i, (name, f)) in criteria.iter().enumerate() {
        let (o, dt) = timed(f);
        total += dt;
        failed += usize::from(!o.passed);
        let verdict = if o.passed { "PASS" } else { "FAIL" };
        println!("criterion {}: {verdict} {name} ({}, {:.3}s)", i + 1, o.detail, dt.as_secs_f64());
    }
    println!("acceptance: {}/10 passed in {:.2}s", 10 - failed, total.as_secs_f64());
    if failed == 0 { ExitCode::SUCCESS } else { ExitCode::FAILURE }
}

//! Physics payloads in X-operator form: n-level Hamiltonians with Jacobi
//! rotations, Heisenberg chains, small Hubbard clusters and Jaynes–Cummings
//! evolution.

use std::f64::consts::FRAC_PI_4;

use num_complex::Complex64;

use crate::error::{check_index, KronError, Result};
use crate::exactnum::{int, rat, ExactRational, Field, Scalar};
use crate::hubbard::XSum;
use crate::kron::{kron, kron_many};
use crate::perm::Permutation;

type C = Complex64;
type Q = ExactRational;

/// H = Σ ε_p X^{p,p} + Σ_{p≠q} V_{p,q} X^{p,q}, Hermitian, stored densely.
#[derive(Debug, Clone, PartialEq)]
pub struct NLevelHamiltonian {
    n: usize,
    data: Vec<C>,
}

impl NLevelHamiltonian {
    /// From the diagonal and the upper-triangle couplings (p < q); the lower
    /// triangle is filled with conjugates.
    pub fn new(eps: &[f64], couplings: &[(usize, usize, C)]) -> Result<Self> {
        let n = eps.len();
        let mut data = vec![C::new(0.0, 0.0); n * n];
        for (p, &e) in eps.iter().enumerate() {
            data[p * n + p] = C::new(e, 0.0);
        }
        for &(p, q, v) in couplings {
            check_index(p, n)?;
            check_index(q, n)?;
            if p == q {
                return Err(KronError::Domain("coupling on the diagonal".into()));
            }
            data[(p - 1) * n + q - 1] = v;
            data[(q - 1) * n + p - 1] = v.conj();
        }
        Ok(NLevelHamiltonian { n, data })
    }

    pub fn from_xsum(h: &XSum<C>, tol: f64) -> Result<Self> {
        if !h.is_hermitian(tol) {
            return Err(KronError::Domain("Hamiltonian is not Hermitian".into()));
        }
        let n = h.order();
        let mut data = vec![C::new(0.0, 0.0); n * n];
        for (i, j, c) in h.terms() {
            data[(i - 1) * n + j - 1] = if i == j { C::new(c.re, 0.0) } else { *c };
        }
        Ok(NLevelHamiltonian { n, data })
    }

    pub fn order(&self) -> usize {
        self.n
    }

    pub fn eps(&self, p: usize) -> f64 {
        self.at(p, p).re
    }

    pub fn v(&self, p: usize, q: usize) -> C {
        self.at(p, q)
    }

    fn at(&self, p: usize, q: usize) -> C {
        self.data[(p - 1) * self.n + q - 1]
    }

    fn at_mut(&mut self, p: usize, q: usize) -> &mut C {
        &mut self.data[(p - 1) * self.n + q - 1]
    }

    pub fn to_xsum(&self) -> XSum<C> {
        let n = self.n;
        let terms = (0..n * n).map(|k| (k / n + 1, k % n + 1, self.data[k]));
        XSum::from_terms(n, terms).expect("in range")
    }

    /// max_{p≠q} |V_{p,q}|.
    pub fn off_norm(&self) -> f64 {
        let mut m: f64 = 0.0;
        for p in 1..=self.n {
            for q in 1..=self.n {
                if p != q {
                    m = m.max(self.at(p, q).norm());
                }
            }
        }
        m
    }
}

/// Rotation parameters of U_{k,m}(α) with α = |α|e^{iμ}.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Rotation {
    pub abs_alpha: f64,
    pub mu: f64,
}

/// exp(α X^{k,m} − ᾱ X^{m,k}): cos|α| on the (k,m) diagonal, e^{iμ}sin|α| at
/// (k,m), −e^{−iμ}sin|α| at (m,k), identity elsewhere.
pub fn givens_unitary(n: usize, k: usize, m: usize, abs_alpha: f64, mu: f64) -> Result<XSum<C>> {
    check_index(k, n)?;
    check_index(m, n)?;
    if k >= m {
        return Err(KronError::Index { index: k, order: m });
    }
    let (s, c) = abs_alpha.sin_cos();
    let e = C::from_polar(1.0, mu);
    let mut u = XSum::identity(n);
    u.set(k, k, C::new(c, 0.0));
    u.set(m, m, C::new(c, 0.0));
    u.set(k, m, e * s);
    u.set(m, k, -e.conj() * s);
    Ok(u)
}

/// One Jacobi rotation H ↦ U H U† zeroing V_{k,m}, k < m.
///
/// The angle is taken in (0, π/4]; the phase μ is chosen so that the rotation
/// stays on that small-angle branch. In the degenerate case ε_k = ε_m the
/// lower eigenvalue lands on k.
pub fn rotate_step(h: &NLevelHamiltonian, k: usize, m: usize) -> Result<(NLevelHamiltonian, Rotation)> {
    check_index(k, h.n)?;
    check_index(m, h.n)?;
    if k >= m {
        return Err(KronError::Index { index: k, order: m });
    }
    let v = h.at(k, m);
    if v.norm() == 0.0 {
        return Ok((h.clone(), Rotation { abs_alpha: 0.0, mu: 0.0 }));
    }
    let (a, b) = (h.eps(k), h.eps(m));
    let phi = v.arg();
    let theta = 0.5 * (2.0 * v.norm()).atan2((a - b).abs());
    let mu = if a > b { phi } else { phi + std::f64::consts::PI };
    let rot = Rotation { abs_alpha: theta, mu };
    let mut out = h.clone();
    apply_rotation(&mut out, k, m, rot);
    // the rotated coupling is zero up to roundoff; make it exact
    *out.at_mut(k, m) = C::new(0.0, 0.0);
    *out.at_mut(m, k) = C::new(0.0, 0.0);
    let (ek, em) = (out.at(k, k).re, out.at(m, m).re);
    *out.at_mut(k, k) = C::new(ek, 0.0);
    *out.at_mut(m, m) = C::new(em, 0.0);
    Ok((out, rot))
}

/// H ← U H U† touching only rows and columns k, m.
fn apply_rotation(h: &mut NLevelHamiltonian, k: usize, m: usize, rot: Rotation) {
    let (s, c) = rot.abs_alpha.sin_cos();
    let e = C::from_polar(1.0, rot.mu);
    let n = h.n;
    for j in 1..=n {
        let (hk, hm) = (h.at(k, j), h.at(m, j));
        *h.at_mut(k, j) = hk * c + e * s * hm;
        *h.at_mut(m, j) = -e.conj() * s * hk + hm * c;
    }
    for i in 1..=n {
        let (hk, hm) = (h.at(i, k), h.at(i, m));
        *h.at_mut(i, k) = hk * c + hm * e.conj() * s;
        *h.at_mut(i, m) = -hk * e * s + hm * c;
    }
}

/// Rows k, m of W ← U W.
fn accumulate(w: &mut [C], n: usize, k: usize, m: usize, rot: Rotation) {
    let (s, c) = rot.abs_alpha.sin_cos();
    let e = C::from_polar(1.0, rot.mu);
    for j in 0..n {
        let (wk, wm) = (w[(k - 1) * n + j], w[(m - 1) * n + j]);
        w[(k - 1) * n + j] = wk * c + e * s * wm;
        w[(m - 1) * n + j] = -e.conj() * s * wk + wm * c;
    }
}

#[derive(Debug, Clone)]
pub struct Eigen {
    /// Ascending.
    pub values: Vec<f64>,
    /// Column j is the eigenvector of `values[j]`; V†HV is diagonal.
    pub vectors: XSum<C>,
    /// Sorted position j came from diagonal slot `order.image(j)`.
    pub order: Permutation,
    pub sweeps: usize,
}

/// One cyclic pass over all pairs k < m with a nonzero coupling.
pub fn jacobi_sweep(h: &NLevelHamiltonian) -> NLevelHamiltonian {
    let mut out = h.clone();
    sweep(&mut out, None);
    out
}

fn sweep(h: &mut NLevelHamiltonian, mut w: Option<&mut Vec<C>>) {
    let n = h.n;
    for k in 1..n {
        for m in k + 1..=n {
            if h.at(k, m).norm() == 0.0 {
                continue;
            }
            let (next, rot) = rotate_step(h, k, m).expect("valid pair");
            *h = next;
            if let Some(w) = w.as_deref_mut() {
                accumulate(w, n, k, m, rot);
            }
        }
    }
}

/// Cyclic Jacobi sweeps until every off-diagonal |V| < tol.
pub fn diagonalize(h: &NLevelHamiltonian, tol: f64, max_sweeps: usize) -> Result<Eigen> {
    let n = h.n;
    let mut cur = h.clone();
    let mut w = vec![C::new(0.0, 0.0); n * n];
    for i in 0..n {
        w[i * n + i] = C::new(1.0, 0.0);
    }
    let mut sweeps = 0;
    while cur.off_norm() >= tol {
        if sweeps == max_sweeps {
            return Err(KronError::Convergence {
                sweeps,
                residual: cur.off_norm(),
            });
        }
        sweep(&mut cur, Some(&mut w));
        sweeps += 1;
    }
    let mut idx: Vec<usize> = (1..=n).collect();
    idx.sort_by(|&a, &b| cur.eps(a).total_cmp(&cur.eps(b)));
    let values = idx.iter().map(|&p| cur.eps(p)).collect();
    // W H W† = D, so the eigenvectors are the columns of W†
    let mut vectors = XSum::zero(n);
    for (col, &p) in idx.iter().enumerate() {
        for i in 1..=n {
            vectors.set(i, col + 1, w[(p - 1) * n + i - 1].conj());
        }
    }
    Ok(Eigen {
        values,
        vectors,
        order: Permutation::new(idx).expect("bijection"),
        sweeps,
    })
}

/// Groups sorted eigenvalues closer than `tol` into (value, multiplicity).
pub fn multiplicities(values: &[f64], tol: f64) -> Vec<(f64, usize)> {
    let mut out: Vec<(f64, usize, f64)> = Vec::new();
    for &v in values {
        match out.last_mut() {
            Some((_, count, last)) if (v - *last).abs() < tol => {
                *count += 1;
                *last = v;
            }
            _ => out.push((v, 1, v)),
        }
    }
    out.into_iter().map(|(v, c, _)| (v, c)).collect()
}

/// I^{⊗(j−1)} ⊗ op ⊗ I^{⊗(n−j)}.
pub fn site_embed<S: Scalar>(op: &XSum<S>, j: usize, n: usize) -> Result<XSum<S>> {
    check_index(j, n)?;
    let d = op.order();
    let left = XSum::identity(d.pow(j as u32 - 1));
    let right = XSum::identity(d.pow((n - j) as u32));
    Ok(kron_many(&[&left, op, &right]))
}

/// σ^x, σ^y, σ^z in the basis (↑, ↓).
pub fn pauli() -> [XSum<C>; 3] {
    let c = |re, im| C::new(re, im);
    [
        XSum::from_terms(2, [(1, 2, c(1.0, 0.0)), (2, 1, c(1.0, 0.0))]).unwrap(),
        XSum::from_terms(2, [(1, 2, c(0.0, -1.0)), (2, 1, c(0.0, 1.0))]).unwrap(),
        XSum::from_terms(2, [(1, 1, c(1.0, 0.0)), (2, 2, c(-1.0, 0.0))]).unwrap(),
    ]
}

#[derive(Debug, Clone, PartialEq)]
pub struct SpinChainParams {
    pub sites: usize,
    pub jx: Q,
    pub jy: Q,
    pub jz: Q,
}

impl SpinChainParams {
    pub fn xxx(sites: usize, j: Q) -> Self {
        SpinChainParams {
            sites,
            jx: j.clone(),
            jy: j.clone(),
            jz: j,
        }
    }
}

fn bonds(n: usize, periodic: bool) -> Vec<(usize, usize)> {
    let mut b: Vec<_> = (1..n).map(|j| (j, j + 1)).collect();
    if periodic {
        b.push((n, 1));
    }
    b
}

/// −½ Σ_j (Jx σˣ_jσˣ_{j+1} + Jy σʸ_jσʸ_{j+1} + Jz σᶻ_jσᶻ_{j+1}), exact.
///
/// σˣσˣ and σʸσʸ are rewritten through σ± = X^{1,2}, X^{2,1} so every entry
/// stays rational. `periodic` adds the bond (n, 1).
pub fn heisenberg_h(params: &SpinChainParams, periodic: bool) -> Result<XSum<Q>> {
    let n = params.sites;
    if n < 2 {
        return Err(KronError::Domain("a spin chain needs at least two sites".into()));
    }
    let sp = XSum::<Q>::x_op(2, 1, 2)?;
    let sm = XSum::<Q>::x_op(2, 2, 1)?;
    let sz = XSum::diagonal([int(1), int(-1)]);
    let sx = sp.add(&sm);
    let isy = sp.sub(&sm); // i·σʸ
    let mut h = XSum::zero(1 << n);
    for (a, b) in bonds(n, periodic) {
        let pair = |op: &XSum<Q>| -> Result<XSum<Q>> { Ok(site_embed(op, a, n)?.mul(&site_embed(op, b, n)?)) };
        let xx = pair(&sx)?.scale(&params.jx);
        let yy = pair(&isy)?.scale(&-&params.jy);
        let zz = pair(&sz)?.scale(&params.jz);
        h = h.add(&xx.add(&yy).add(&zz).scale(&rat(-1, 2)));
    }
    Ok(h)
}

/// The same Hamiltonian assembled literally from the complex Pauli matrices.
pub fn heisenberg_h_pauli(sites: usize, jx: f64, jy: f64, jz: f64, periodic: bool) -> Result<XSum<C>> {
    if sites < 2 {
        return Err(KronError::Domain("a spin chain needs at least two sites".into()));
    }
    let [sx, sy, sz] = pauli();
    let mut h = XSum::zero(1 << sites);
    for (a, b) in bonds(sites, periodic) {
        for (op, j) in [(&sx, jx), (&sy, jy), (&sz, jz)] {
            let t = site_embed(op, a, sites)?.mul(&site_embed(op, b, sites)?);
            h = h.add(&t.scale(&C::new(-0.5 * j, 0.0)));
        }
    }
    Ok(h)
}

/// −(J/4)(X^{11} − X^{22} − X^{33} + X^{44}) − 2J(X^{23} + X^{32}): the two-site
/// form whose rotated spectrum is (−J/4, 9J/4, −7J/4, −J/4).
///
/// This is `heisenberg_h` with (Jx, Jy, Jz) = (2J, 2J, J/2), not the XXX chain.
pub fn heisenberg_two_site_printed(j: &Q) -> XSum<Q> {
    let d = j * rat(-1, 4);
    let off = j * int(-2);
    XSum::from_terms(
        4,
        [
            (1, 1, d.clone()),
            (2, 2, -d.clone()),
            (3, 3, -d.clone()),
            (4, 4, d),
            (2, 3, off.clone()),
            (3, 2, off),
        ],
    )
    .expect("in range")
}

/// Σ_j σᶻ_j.
pub fn total_sz(sites: usize) -> Result<XSum<Q>> {
    let sz = XSum::diagonal([int(1), int(-1)]);
    (1..=sites).try_fold(XSum::zero(1 << sites), |acc, j| Ok(acc.add(&site_embed(&sz, j, sites)?)))
}

/// Ladder operators on one site, basis (0, +, −, 2) = indices 1..4:
/// c†_σ = X^{σ,0} + 2σX^{2,−σ}, c_σ = X^{0,σ} + 2σX^{−σ,2}.
#[derive(Debug, Clone, PartialEq)]
pub struct HubbardSiteOps {
    pub c_up: XSum<Q>,
    pub c_dn: XSum<Q>,
    pub cdag_up: XSum<Q>,
    pub cdag_dn: XSum<Q>,
}

pub fn hubbard_site_ops() -> HubbardSiteOps {
    let x = |i, j| XSum::<Q>::x_op(4, i, j).expect("4x4");
    let (zero, up, dn, two) = (1, 2, 3, 4);
    let cdag_up = x(up, zero).add(&x(two, dn));
    let cdag_dn = x(dn, zero).sub(&x(two, up));
    HubbardSiteOps {
        c_up: cdag_up.transpose(),
        c_dn: cdag_dn.transpose(),
        cdag_up,
        cdag_dn,
    }
}

/// Default cap on Hubbard cluster sizes (4^N grows fast).
pub const HUBBARD_MAX_SITES: usize = 4;

#[derive(Debug, Clone, PartialEq)]
pub struct HubbardParams {
    pub sites: usize,
    pub e0: Q,
    pub e1: Q,
    pub e2: Q,
    /// Symmetric hopping matrix, `t[i][j]` for sites i+1, j+1.
    pub t: Vec<Vec<Q>>,
}

impl HubbardParams {
    /// E₀ = 0, E₁ = ε − μ, E₂ = 2E₁ + U, uniform nearest-neighbour hopping on
    /// an open chain.
    pub fn chain(sites: usize, eps: Q, mu: Q, u: Q, t: Q) -> Self {
        let e1 = eps - mu;
        let mut hop = vec![vec![int(0); sites]; sites];
        for i in 1..sites {
            hop[i - 1][i] = t.clone();
            hop[i][i - 1] = t.clone();
        }
        HubbardParams {
            sites,
            e0: int(0),
            e2: &e1 * int(2) + u,
            e1,
            t: hop,
        }
    }
}

/// H₀ + H₁ with H₁ = Σ_{i,j} t_ij Σ_σ c†_{iσ} c_{jσ}, sites joined by plain
/// Kronecker embedding (no fermionic sign strings).
pub fn hubbard_h(params: &HubbardParams, max_sites: usize) -> Result<XSum<Q>> {
    let n = params.sites;
    if n == 0 {
        return Err(KronError::Domain("need at least one site".into()));
    }
    if n > max_sites {
        return Err(KronError::Resource {
            requested: n,
            limit: max_sites,
        });
    }
    if params.t.len() != n || params.t.iter().any(|r| r.len() != n) {
        return Err(KronError::Dimension {
            expected: n,
            found: params.t.len(),
        });
    }
    for i in 0..n {
        for j in 0..n {
            if params.t[i][j] != params.t[j][i] {
                return Err(KronError::Domain("hopping matrix must be symmetric".into()));
            }
        }
    }
    let local = XSum::diagonal([params.e0.clone(), params.e1.clone(), params.e1.clone(), params.e2.clone()]);
    let ops = hubbard_site_ops();
    let mut h = XSum::zero(4usize.pow(n as u32));
    for i in 1..=n {
        h = h.add(&site_embed(&local, i, n)?);
    }
    for i in 1..=n {
        for j in 1..=n {
            let t = &params.t[i - 1][j - 1];
            if Scalar::is_zero(t) {
                continue;
            }
            for (cd, c) in [(&ops.cdag_up, &ops.c_up), (&ops.cdag_dn, &ops.c_dn)] {
                let hop = site_embed(cd, i, n)?.mul(&site_embed(c, j, n)?);
                h = h.add(&hop.scale(t));
            }
        }
    }
    Ok(h)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct JcConfig {
    pub gamma: f64,
    /// Highest photon number kept.
    pub cutoff: usize,
}

impl JcConfig {
    pub fn dim(&self) -> usize {
        2 * (self.cutoff + 1)
    }

    /// Index of |p, n⟩ (p = 1 excited, p = 2 ground) in atom ⊗ field order.
    pub fn index(&self, p: usize, photons: usize) -> usize {
        (p - 1) * (self.cutoff + 1) + photons + 1
    }
}

fn check_cutoff(cfg: &JcConfig) -> Result<()> {
    if cfg.cutoff == 0 {
        return Err(KronError::Domain("Fock cutoff must be at least 1".into()));
    }
    Ok(())
}

/// Truncated annihilation operator a|n⟩ = √n|n−1⟩ on photon numbers 0..=cutoff.
pub fn annihilation(cutoff: usize) -> XSum<C> {
    let terms = (1..=cutoff).map(|n| (n, n + 1, C::new((n as f64).sqrt(), 0.0)));
    XSum::from_terms(cutoff + 1, terms).expect("in range")
}

fn fock_diag(cutoff: usize, f: impl Fn(f64) -> f64) -> XSum<C> {
    XSum::diagonal((0..=cutoff).map(|n| C::new(f(n as f64), 0.0)))
}

/// H_I = γ(σ⁺a + σ⁻a†), σ⁺ = X^{1,2} raising the atom to level 1.
pub fn jc_hamiltonian(cfg: &JcConfig) -> Result<XSum<C>> {
    check_cutoff(cfg)?;
    let a = annihilation(cfg.cutoff);
    let sp = XSum::<C>::x_op(2, 1, 2)?;
    let h = kron(&sp, &a).add(&kron(&sp.adjoint(), &a.adjoint()));
    Ok(h.scale(&C::new(cfg.gamma, 0.0)))
}

/// U(t) = e^{−iH_I t} in closed form: Σ_{p,q} X^{p,q} ⊗ u_{p,q} with
/// u_{p,q} = e^{−iπ|p−q|/2} cos(γtN_p − π|p−q|/2), N₁ = √(N+1), N₂ = √N,
/// the off-diagonal blocks carrying the photon shift a or a†.
///
/// Exact below the cutoff; the state |1, cutoff⟩ sees the untruncated formula.
pub fn jc_evolution(cfg: &JcConfig, t: f64) -> Result<XSum<C>> {
    check_cutoff(cfg)?;
    let gt = cfg.gamma * t;
    let nc = cfg.cutoff;
    let a = annihilation(nc);
    let x = |i, j| XSum::<C>::x_op(2, i, j).expect("2x2");
    let u11 = fock_diag(nc, |n| (gt * (n + 1.0).sqrt()).cos());
    let u22 = fock_diag(nc, |n| (gt * n.sqrt()).cos());
    // sin(γt√(N+1))/√(N+1), then the photon shift
    let s = fock_diag(nc, |n| (gt * (n + 1.0).sqrt()).sin() / (n + 1.0).sqrt());
    let minus_i = C::new(0.0, -1.0);
    let u12 = s.mul(&a).scale(&minus_i);
    let u21 = a.adjoint().mul(&s).scale(&minus_i);
    Ok(kron(&x(1, 1), &u11)
        .add(&kron(&x(2, 2), &u22))
        .add(&kron(&x(1, 2), &u12))
        .add(&kron(&x(2, 1), &u21)))
}

/// U₁(t) ⊗ U₂(t).
pub fn two_cavity_evolution(cfg1: &JcConfig, cfg2: &JcConfig, t: f64) -> Result<XSum<C>> {
    Ok(kron(&jc_evolution(cfg1, t)?, &jc_evolution(cfg2, t)?))
}

/// Atomic excitation plus photon number.
pub fn excitation_number(cfg: &JcConfig) -> XSum<C> {
    let at = XSum::<C>::x_op(2, 1, 1).expect("2x2");
    let n = fock_diag(cfg.cutoff, |n| n);
    kron(&at, &XSum::identity(cfg.cutoff + 1)).add(&kron(&XSum::identity(2), &n))
}

/// Dense 2×2 eigenvalue pair of [[a, v], [v̄, b]], ascending.
pub fn two_level_pair(a: f64, b: f64, v: C) -> (f64, f64) {
    let mean = 0.5 * (a + b);
    let r = (0.25 * (b - a).powi(2) + v.norm_sqr()).sqrt();
    (mean - r, mean + r)
}

/// The smallest rotation angle is π/4 exactly when ε_k = ε_m.
pub const DEGENERATE_ANGLE: f64 = FRAC_PI_4;

pub fn rational_to_complex(h: &XSum<Q>) -> XSum<C> {
    h.map(|q| <C as Field>::from_rational(q))
}

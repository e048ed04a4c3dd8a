//! Exact scalars and the integer/combinatorial toolkit behind every index formula.
//!
//! Half-integers never appear as floats: angular momenta travel as `twoJ = 2j`.

use std::fmt;
use std::ops::{Mul, Neg};

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{KronError, Result};

pub type ExactRational = BigRational;

pub fn rat(num: i64, den: i64) -> ExactRational {
    BigRational::new(num.into(), den.into())
}

pub fn int(n: i64) -> ExactRational {
    BigRational::from_integer(n.into())
}

/// ⌈p/n⌉.
///
/// # Panics
/// On a zero divisor.
pub fn ceil_ratio(p: usize, n: usize) -> usize {
    assert!(n > 0, "ceil_ratio: zero divisor");
    p.div_ceil(n)
}

/// ⌊p/n⌋.
///
/// # Panics
/// On a zero divisor.
pub fn floor_ratio(p: usize, n: usize) -> usize {
    assert!(n > 0, "floor_ratio: zero divisor");
    p / n
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Direction {
    Rising,
    Falling,
}

pub fn pochhammer(x: &ExactRational, n: usize, dir: Direction) -> ExactRational {
    let mut acc = <ExactRational as One>::one();
    let mut f = x.clone();
    let step = match dir {
        Direction::Rising => <ExactRational as One>::one(),
        Direction::Falling => -<ExactRational as One>::one(),
    };
    for _ in 0..n {
        acc *= &f;
        f += &step;
    }
    acc
}

pub fn rising(x: i64, n: usize) -> ExactRational {
    pochhammer(&int(x), n, Direction::Rising)
}

pub fn falling(x: i64, n: usize) -> ExactRational {
    pochhammer(&int(x), n, Direction::Falling)
}

pub fn factorial(n: u64) -> BigInt {
    (1..=n).fold(BigInt::one(), |acc, k| acc * k)
}

/// n!/((n−m)! m!), and 0 when m is outside [0, n].
pub fn binomial(n: u64, m: i64) -> BigInt {
    if m < 0 || m as u64 > n {
        return BigInt::zero();
    }
    let m = (m as u64).min(n - m as u64);
    let mut acc = BigInt::one();
    for k in 0..m {
        acc = acc * (n - k) / (k + 1);
    }
    acc
}

/// Terminating ₃F₂(−r, −b, c; d, −e; 1) as an exact finite sum.
///
/// Terms after the first vanishing upper Pochhammer are skipped; a vanishing
/// lower Pochhammer before that point is a domain error.
pub fn hyp3f2_terminating(r: u32, b: i64, c: i64, d: i64, e: i64) -> Result<ExactRational> {
    let mut sum = <ExactRational as One>::one();
    let mut term = <ExactRational as One>::one();
    for s in 0..r as i64 {
        let upper = int(-(r as i64) + s) * int(-b + s) * int(c + s);
        if Zero::is_zero(&upper) {
            break;
        }
        let lower = int(d + s) * int(-e + s) * int(s + 1);
        if Zero::is_zero(&lower) {
            return Err(KronError::Domain(format!(
                "3F2(-{r},-{b},{c};{d},-{e}): lower Pochhammer vanishes at s={s}"
            )));
        }
        term = term * upper / lower;
        sum += &term;
    }
    Ok(sum)
}

/// (d)↑r (e)↓r · ₃F₂(−r,−b,c; d,−e), written as the pole-free finite sum
/// Σ_s (−1)^s C(r,s) (b)↓s (c)↑s (d+s)↑(r−s) (e−s)↓(r−s).
///
/// Agrees with [`hyp3f2_terminating`] wherever that is defined, and stays
/// finite where the hypergeometric form would divide by zero.
pub fn scaled_3f2_sum(r: u32, b: i64, c: i64, d: i64, e: i64) -> ExactRational {
    let r = r as usize;
    let mut sum = <ExactRational as Zero>::zero();
    for s in 0..=r {
        let mut t = BigRational::from_integer(binomial(r as u64, s as i64))
            * falling(b, s)
            * rising(c, s)
            * rising(d + s as i64, r - s)
            * falling(e - s as i64, r - s);
        if s % 2 == 1 {
            t = -t;
        }
        sum += t;
    }
    sum
}

fn exact_isqrt(n: &BigInt) -> Option<BigInt> {
    if n.is_negative() {
        return None;
    }
    let s = n.sqrt();
    (&s * &s == *n).then_some(s)
}

/// √q when q is the square of a rational.
pub fn rational_sqrt(q: &ExactRational) -> Option<ExactRational> {
    Some(BigRational::new(
        exact_isqrt(q.numer())?,
        exact_isqrt(q.denom())?,
    ))
}

/// sign · √radicand, exact.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct SqrtRational {
    sign: i8,
    radicand: ExactRational,
}

impl SqrtRational {
    pub fn new(sign: i8, radicand: ExactRational) -> Result<Self> {
        if radicand.is_negative() {
            return Err(KronError::Domain(format!("negative radicand {radicand}")));
        }
        if Zero::is_zero(&radicand) || sign == 0 {
            return Ok(Self::zero());
        }
        Ok(SqrtRational {
            sign: sign.signum(),
            radicand,
        })
    }

    /// +√q.
    pub fn sqrt(q: ExactRational) -> Result<Self> {
        Self::new(1, q)
    }

    pub fn zero() -> Self {
        SqrtRational {
            sign: 0,
            radicand: <ExactRational as Zero>::zero(),
        }
    }

    pub fn one() -> Self {
        Self::from_rational(&<ExactRational as One>::one())
    }

    pub fn from_rational(q: &ExactRational) -> Self {
        SqrtRational {
            sign: if Zero::is_zero(q) { 0 } else if q.is_negative() { -1 } else { 1 },
            radicand: q * q,
        }
    }

    /// q·√x for rational q and x ≥ 0.
    pub fn scaled(q: &ExactRational, x: ExactRational) -> Result<Self> {
        let base = Self::sqrt(x)?;
        Ok(Self::from_rational(q).mul(&base))
    }

    pub fn sign(&self) -> i8 {
        self.sign
    }

    pub fn radicand(&self) -> &ExactRational {
        &self.radicand
    }

    pub fn is_zero(&self) -> bool {
        self.sign == 0
    }

    /// The value squared, sign discarded.
    pub fn square(&self) -> ExactRational {
        self.radicand.clone()
    }

    /// The exact value, when it happens to be rational.
    pub fn to_rational(&self) -> Option<ExactRational> {
        rational_sqrt(&self.radicand).map(|r| if self.sign < 0 { -r } else { r })
    }

    pub fn to_f64(&self) -> f64 {
        let num = self.radicand.numer().to_f64().unwrap_or(f64::INFINITY);
        let den = self.radicand.denom().to_f64().unwrap_or(f64::INFINITY);
        let mag = if num.is_finite() && den.is_finite() {
            (num / den).sqrt()
        } else {
            self.radicand.to_f64().unwrap_or(f64::NAN).sqrt()
        };
        self.sign as f64 * mag
    }

    pub fn mul(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::zero();
        }
        SqrtRational {
            sign: self.sign * other.sign,
            radicand: &self.radicand * &other.radicand,
        }
    }

    pub fn neg(&self) -> Self {
        SqrtRational {
            sign: -self.sign,
            radicand: self.radicand.clone(),
        }
    }

    /// Sum of two like surds: √x·(s₁ + s₂q) with q = √(y/x) rational.
    pub fn add_like(&self, other: &Self) -> Result<Self> {
        if self.is_zero() {
            return Ok(other.clone());
        }
        if other.is_zero() {
            return Ok(self.clone());
        }
        let q = rational_sqrt(&(&other.radicand / &self.radicand))
            .ok_or_else(|| KronError::Closure(format!("{self} + {other}")))?;
        let coeff = int(self.sign as i64) + int(other.sign as i64) * q;
        Self::scaled(&coeff, self.radicand.clone())
    }
}

impl Mul for &SqrtRational {
    type Output = SqrtRational;
    fn mul(self, rhs: &SqrtRational) -> SqrtRational {
        SqrtRational::mul(self, rhs)
    }
}

impl Neg for &SqrtRational {
    type Output = SqrtRational;
    fn neg(self) -> SqrtRational {
        SqrtRational::neg(self)
    }
}

impl fmt::Display for SqrtRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if let Some(q) = self.to_rational() {
            return write!(f, "{q}");
        }
        let s = if self.sign < 0 { "-" } else { "" };
        if self.radicand.is_integer() {
            write!(f, "{s}√{}", self.radicand)
        } else {
            write!(f, "{s}√({})", self.radicand)
        }
    }
}

impl fmt::Debug for SqrtRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// Coefficient type of an [`XSum`](crate::hubbard::XSum).
///
/// Addition is fallible because [`SqrtRational`] is only closed under sums of
/// like surds; genuine fields also implement [`Field`].
pub trait Scalar: Clone + PartialEq + fmt::Debug + Send + Sync + 'static {
    fn zero() -> Self;
    fn one() -> Self;
    fn is_zero(&self) -> bool;
    fn times(&self, other: &Self) -> Self;
    fn negated(&self) -> Self;
    fn conj(&self) -> Self;
    fn try_plus(&self, other: &Self) -> Result<Self>;
    fn to_complex(&self) -> Complex64;
    fn from_i64(v: i64) -> Self;
}

pub trait Field: Scalar {
    fn plus(&self, other: &Self) -> Self;
    fn recip(&self) -> Option<Self>;
    fn from_rational(q: &ExactRational) -> Self;
}

impl Scalar for ExactRational {
    fn zero() -> Self {
        Zero::zero()
    }
    fn one() -> Self {
        One::one()
    }
    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }
    fn times(&self, other: &Self) -> Self {
        self * other
    }
    fn negated(&self) -> Self {
        -self
    }
    fn conj(&self) -> Self {
        self.clone()
    }
    fn try_plus(&self, other: &Self) -> Result<Self> {
        Ok(self + other)
    }
    fn to_complex(&self) -> Complex64 {
        Complex64::new(self.to_f64().unwrap_or(f64::NAN), 0.0)
    }
    fn from_i64(v: i64) -> Self {
        int(v)
    }
}

impl Field for ExactRational {
    fn plus(&self, other: &Self) -> Self {
        self + other
    }
    fn recip(&self) -> Option<Self> {
        (!Zero::is_zero(self)).then(|| BigRational::recip(self))
    }
    fn from_rational(q: &ExactRational) -> Self {
        q.clone()
    }
}

impl Scalar for SqrtRational {
    fn zero() -> Self {
        SqrtRational::zero()
    }
    fn one() -> Self {
        SqrtRational::one()
    }
    fn is_zero(&self) -> bool {
        SqrtRational::is_zero(self)
    }
    fn times(&self, other: &Self) -> Self {
        self.mul(other)
    }
    fn negated(&self) -> Self {
        self.neg()
    }
    fn conj(&self) -> Self {
        self.clone()
    }
    fn try_plus(&self, other: &Self) -> Result<Self> {
        self.add_like(other)
    }
    fn to_complex(&self) -> Complex64 {
        Complex64::new(self.to_f64(), 0.0)
    }
    fn from_i64(v: i64) -> Self {
        SqrtRational::from_rational(&int(v))
    }
}

impl Scalar for Complex64 {
    fn zero() -> Self {
        Complex64::new(0.0, 0.0)
    }
    fn one() -> Self {
        Complex64::new(1.0, 0.0)
    }
    fn is_zero(&self) -> bool {
        self.re == 0.0 && self.im == 0.0
    }
    fn times(&self, other: &Self) -> Self {
        self * other
    }
    fn negated(&self) -> Self {
        -self
    }
    fn conj(&self) -> Self {
        Complex64::conj(self)
    }
    fn try_plus(&self, other: &Self) -> Result<Self> {
        Ok(self + other)
    }
    fn to_complex(&self) -> Complex64 {
        *self
    }
    fn from_i64(v: i64) -> Self {
        Complex64::new(v as f64, 0.0)
    }
}

impl Field for Complex64 {
    fn plus(&self, other: &Self) -> Self {
        self + other
    }
    fn recip(&self) -> Option<Self> {
        (!Scalar::is_zero(self)).then(|| Complex64::new(1.0, 0.0) / self)
    }
    fn from_rational(q: &ExactRational) -> Self {
        Complex64::new(q.to_f64().unwrap_or(f64::NAN), 0.0)
    }
}

/// A complex number with finite parts.
pub fn complex(re: f64, im: f64) -> Result<Complex64> {
    if re.is_finite() && im.is_finite() {
        Ok(Complex64::new(re, im))
    } else {
        Err(KronError::Domain(format!("non-finite complex ({re}, {im})")))
    }
}

/// Parses `7`, `-3/4`, `0.125` or `2.5e-3` into an exact rational.
pub fn parse_rational(s: &str) -> Result<ExactRational> {
    let bad = || KronError::Domain(format!("not a rational number: {s:?}"));
    let s = s.trim();
    if let Some((n, d)) = s.split_once('/') {
        let n: BigInt = n.trim().parse().map_err(|_| bad())?;
        let d: BigInt = d.trim().parse().map_err(|_| bad())?;
        if d.is_zero() {
            return Err(bad());
        }
        return Ok(BigRational::new(n, d));
    }
    let (mantissa, exp) = match s.find(['e', 'E']) {
        Some(k) => (&s[..k], s[k + 1..].parse::<i32>().map_err(|_| bad())?),
        None => (s, 0),
    };
    let (neg, digits) = match mantissa.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, mantissa.strip_prefix('+').unwrap_or(mantissa)),
    };
    let (whole, frac) = digits.split_once('.').unwrap_or((digits, ""));
    if whole.is_empty() && frac.is_empty()
        || !whole.chars().chain(frac.chars()).all(|c| c.is_ascii_digit())
    {
        return Err(bad());
    }
    let all: BigInt = format!("{whole}{frac}0").parse().map_err(|_| bad())?;
    let scale = exp - frac.len() as i32 - 1;
    let ten = BigInt::from(10);
    let mut q = BigRational::from_integer(all);
    if scale >= 0 {
        q *= BigRational::from_integer(num_traits::pow(ten, scale as usize));
    } else {
        q /= BigRational::from_integer(num_traits::pow(ten, (-scale) as usize));
    }
    Ok(if neg { -q } else { q })
}

//! SU(2) irreps in Hubbard form, basis ordered by descending m (k = 1 is the
//! highest weight, m_k = j + 1 − k).

use std::fmt;
use std::str::FromStr;

use crate::error::{check_index, KronError, Result};
use crate::exactnum::{factorial, int, rat, ExactRational, SqrtRational};
use crate::hubbard::XSum;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Generator {
    J3,
    Plus,
    Minus,
}

impl FromStr for Generator {
    type Err = KronError;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "j3" | "3" | "jz" => Ok(Generator::J3),
            "jplus" | "plus" | "+" => Ok(Generator::Plus),
            "jminus" | "minus" | "-" => Ok(Generator::Minus),
            _ => Err(KronError::Domain(format!("unknown generator {s:?}"))),
        }
    }
}

/// A half-integer stored as its double.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct HalfInt {
    pub twice: i64,
}

impl HalfInt {
    pub fn to_rational(self) -> ExactRational {
        rat(self.twice, 2)
    }
}

impl FromStr for HalfInt {
    type Err = KronError;
    /// Accepts `3`, `-1/2`, `1.5`.
    fn from_str(s: &str) -> Result<Self> {
        let q = crate::exactnum::parse_rational(s)?;
        let twice = q * int(2);
        if !twice.is_integer() {
            return Err(KronError::Domain(format!("{s} is not a half-integer")));
        }
        let twice: i64 = twice
            .to_integer()
            .try_into()
            .map_err(|_| KronError::Domain(format!("{s} out of range")))?;
        Ok(HalfInt { twice })
    }
}

impl fmt::Display for HalfInt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.twice % 2 == 0 {
            write!(f, "{}", self.twice / 2)
        } else {
            write!(f, "{}/2", self.twice)
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Irrep {
    two_j: usize,
}

impl Irrep {
    pub fn new(two_j: usize) -> Self {
        Irrep { two_j }
    }

    pub fn two_j(&self) -> usize {
        self.two_j
    }

    pub fn dim(&self) -> usize {
        self.two_j + 1
    }

    /// m_k = j + 1 − k.
    pub fn m(&self, k: usize) -> ExactRational {
        rat(self.two_j as i64 + 2 - 2 * k as i64, 2)
    }

    /// c_k = √(k(2j+1−k)); zero at k = 0 and k = n.
    pub fn c(&self, k: usize) -> SqrtRational {
        let v = k as i64 * (self.two_j as i64 + 1 - k as i64);
        SqrtRational::sqrt(int(v.max(0))).expect("nonnegative")
    }

    pub fn j3(&self) -> XSum<ExactRational> {
        XSum::diagonal((1..=self.dim()).map(|k| self.m(k)))
    }

    pub fn jpm(&self, g: Generator) -> XSum<SqrtRational> {
        let n = self.dim();
        let terms = (1..n).map(|k| match g {
            Generator::Minus => (k + 1, k, self.c(k)),
            _ => (k, k + 1, self.c(k)),
        });
        XSum::from_terms(n, terms).expect("indices in range")
    }

    pub fn generator(&self, g: Generator) -> XSum<SqrtRational> {
        match g {
            Generator::J3 => self.j3().map(SqrtRational::from_rational),
            _ => self.jpm(g),
        }
    }

    /// j(j+1).
    pub fn casimir(&self) -> ExactRational {
        let tj = self.two_j as i64;
        rat(tj * (tj + 2), 4)
    }

    /// C_r = √(r!(2j)!/(2j−r)!), the norm of J₋^r applied to the top state.
    pub fn ladder_norm(&self, r: usize) -> Result<SqrtRational> {
        if r > self.two_j {
            return Err(KronError::Index {
                index: r,
                order: self.two_j,
            });
        }
        let tj = self.two_j as u64;
        let sq = factorial(r as u64) * factorial(tj) / factorial(tj - r as u64);
        SqrtRational::sqrt(ExactRational::from_integer(sq))
    }

    /// Action on basis ket k: (coefficient, target) with target `None` when
    /// the ket is annihilated.
    pub fn act(&self, g: Generator, k: usize) -> Result<(SqrtRational, Option<usize>)> {
        check_index(k, self.dim())?;
        Ok(match g {
            Generator::J3 => (SqrtRational::from_rational(&self.m(k)), Some(k)),
            Generator::Plus if k == 1 => (SqrtRational::zero(), None),
            Generator::Plus => (self.c(k - 1), Some(k - 1)),
            Generator::Minus if k == self.dim() => (SqrtRational::zero(), None),
            Generator::Minus => (self.c(k), Some(k + 1)),
        })
    }
}

//! The shared JSON matrix schema:
//! `{"order": n, "kind": "rational" | "complex" | "sqrt", "terms": [...]}` with
//! terms `[i, j, num, den]`, `[i, j, re, im]` or `[i, j, sign, num, den]`.
//! Large integers travel as strings.

use std::str::FromStr;

use kronx::exactnum::complex;
use kronx::{ExactRational, SqrtRational, XSum};
use num_bigint::BigInt;
use num_complex::Complex64;
use num_traits::ToPrimitive;
use serde_json::{json, Value};

use crate::error::{CliError, CliResult};

#[derive(Debug, Clone, PartialEq)]
pub enum Matrix {
    Rational(XSum<ExactRational>),
    Complex(XSum<Complex64>),
    Sqrt(XSum<SqrtRational>),
}

impl Matrix {
    pub fn kind(&self) -> &'static str {
        match self {
            Matrix::Rational(_) => "rational",
            Matrix::Complex(_) => "complex",
            Matrix::Sqrt(_) => "sqrt",
        }
    }

    pub fn order(&self) -> usize {
        match self {
            Matrix::Rational(m) => m.order(),
            Matrix::Complex(m) => m.order(),
            Matrix::Sqrt(m) => m.order(),
        }
    }

    pub fn to_complex(&self) -> XSum<Complex64> {
        match self {
            Matrix::Rational(m) => m.to_complex(),
            Matrix::Complex(m) => m.clone(),
            Matrix::Sqrt(m) => m.to_complex(),
        }
    }

    pub fn to_json(&self) -> Value {
        let terms: Vec<Value> = match self {
            Matrix::Rational(m) => m
                .terms()
                .map(|(i, j, q)| json!([i, j, int_value(q.numer()), int_value(q.denom())]))
                .collect(),
            Matrix::Complex(m) => m.terms().map(|(i, j, c)| json!([i, j, c.re, c.im])).collect(),
            Matrix::Sqrt(m) => m
                .terms()
                .map(|(i, j, s)| {
                    let r = s.radicand();
                    json!([i, j, s.sign(), int_value(r.numer()), int_value(r.denom())])
                })
                .collect(),
        };
        json!({ "order": self.order(), "kind": self.kind(), "terms": terms })
    }

    /// Without a `kind` field, all-integer four-element terms read as rational
    /// and anything else as complex.
    pub fn from_json(v: &Value) -> CliResult<Self> {
        let obj = v.as_object().ok_or_else(|| schema("top level must be an object"))?;
        let order = obj
            .get("order")
            .and_then(Value::as_u64)
            .ok_or_else(|| schema("missing positive integer \"order\""))? as usize;
        if order == 0 {
            return Err(schema("order must be positive"));
        }
        let terms = obj
            .get("terms")
            .and_then(Value::as_array)
            .ok_or_else(|| schema("missing \"terms\" array"))?;
        let kind = match obj.get("kind") {
            Some(k) => k.as_str().ok_or_else(|| schema("\"kind\" must be a string"))?.to_string(),
            None if terms.iter().all(|t| t.as_array().is_some_and(|a| a[2..].iter().all(is_integer))) => {
                "rational".into()
            }
            None => "complex".into(),
        };
        let rows = terms
            .iter()
            .map(|t| t.as_array().ok_or_else(|| schema("each term must be an array")))
            .collect::<CliResult<Vec<_>>>()?;
        let width = if kind == "sqrt" { 5 } else { 4 };
        for t in &rows {
            if t.len() != width {
                return Err(schema(&format!("{kind} terms have {width} elements")));
            }
        }
        let index = |t: &[Value], k: usize| -> CliResult<usize> {
            t[k].as_u64()
                .map(|x| x as usize)
                .ok_or_else(|| schema("term indices must be positive integers"))
        };
        Ok(match kind.as_str() {
            "rational" => {
                let mut out = Vec::with_capacity(rows.len());
                for t in &rows {
                    let den = big_int(&t[3])?;
                    if den == BigInt::from(0) {
                        return Err(schema("zero denominator"));
                    }
                    out.push((index(t, 0)?, index(t, 1)?, ExactRational::new(big_int(&t[2])?, den)));
                }
                Matrix::Rational(XSum::from_terms(order, out)?)
            }
            "complex" => {
                let mut out = Vec::with_capacity(rows.len());
                for t in &rows {
                    let (re, im) = (float(&t[2])?, float(&t[3])?);
                    out.push((index(t, 0)?, index(t, 1)?, complex(re, im)?));
                }
                Matrix::Complex(XSum::from_terms(order, out)?)
            }
            "sqrt" => {
                let mut out = Vec::with_capacity(rows.len());
                for t in &rows {
                    let sign = t[2].as_i64().filter(|s| (-1..=1).contains(s)).ok_or_else(|| schema("sign must be -1, 0 or 1"))?;
                    let den = big_int(&t[4])?;
                    if den == BigInt::from(0) {
                        return Err(schema("zero denominator"));
                    }
                    let s = SqrtRational::new(sign as i8, ExactRational::new(big_int(&t[3])?, den))?;
                    out.push((index(t, 0)?, index(t, 1)?, s));
                }
                Matrix::Sqrt(XSum::from_terms(order, out)?)
            }
            other => return Err(schema(&format!("unknown kind {other:?}"))),
        })
    }
}

fn schema(msg: &str) -> CliError {
    CliError::Schema(msg.to_string())
}

fn is_integer(v: &Value) -> bool {
    v.is_i64() || v.is_u64() || v.as_str().is_some_and(|s| BigInt::from_str(s).is_ok())
}

fn int_value(n: &BigInt) -> Value {
    match n.to_i64() {
        Some(x) => json!(x),
        None => json!(n.to_string()),
    }
}

fn big_int(v: &Value) -> CliResult<BigInt> {
    if let Some(x) = v.as_i64() {
        return Ok(x.into());
    }
    if let Some(x) = v.as_u64() {
        return Ok(x.into());
    }
    v.as_str()
        .and_then(|s| BigInt::from_str(s).ok())
        .ok_or_else(|| schema("expected an integer"))
}

fn float(v: &Value) -> CliResult<f64> {
    v.as_f64().ok_or_else(|| schema("expected a number"))
}

pub fn read_matrix(path: &str) -> CliResult<Matrix> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::Io(format!("{path}: {e}")))?;
    let v: Value = serde_json::from_str(&text).map_err(|e| CliError::Schema(format!("{path}: {e}")))?;
    Matrix::from_json(&v)
}

/// `eigenvalue,multiplicity` rows, ascending.
pub fn spectrum_csv(groups: &[(f64, usize)]) -> String {
    let mut out = String::from("eigenvalue,multiplicity\n");
    for &(v, m) in groups {
        let v = if v == 0.0 { 0.0 } else { v };
        out.push_str(&format!("{v:.12},{m}\n"));
    }
    out
}

//! JSON job payloads.

use std::fmt;

use mixshape::limits::TrigPoly;
use mixshape::{ComplexRational, EpiSet, IntMat, IntVec};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;
use serde::Deserialize;
use serde_json::Value;

#[derive(Debug)]
pub enum CliError {
    /// Malformed input; exit status 2.
    Parse(String),
    /// Well-formed input violating a precondition; exit status 3.
    Contract(mixshape::Error),
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Parse(msg) => write!(f, "parse error: {msg}"),
            CliError::Contract(e) => write!(f, "contract violation: {e}"),
        }
    }
}

impl From<mixshape::Error> for CliError {
    fn from(e: mixshape::Error) -> Self {
        CliError::Contract(e)
    }
}

pub fn parse_err(msg: impl Into<String>) -> CliError {
    CliError::Parse(msg.into())
}

#[derive(Debug, Deserialize)]
pub struct Payload {
    pub dim: Option<usize>,
    #[serde(default)]
    pub matrices: Vec<Vec<Vec<Value>>>,
    #[serde(default)]
    pub options: serde_json::Map<String, Value>,
    /// Present when a `mixing-set` report is fed back in.
    pub verdict: Option<Value>,
}

pub fn parse_payload(text: &str) -> Result<Payload, CliError> {
    serde_json::from_str(text).map_err(|e| parse_err(e.to_string()))
}

pub fn parse_int(v: &Value) -> Result<BigInt, CliError> {
    match v {
        Value::String(s) => s.trim().parse().map_err(|_| parse_err(format!("not an integer: {s:?}"))),
        Value::Number(n) if n.is_i64() => Ok(BigInt::from(n.as_i64().expect("checked"))),
        other => Err(parse_err(format!("not an integer: {other}"))),
    }
}

pub fn parse_rational(v: &Value) -> Result<BigRational, CliError> {
    match v {
        Value::String(s) => s.trim().parse().map_err(|_| parse_err(format!("not a rational: {s:?}"))),
        Value::Number(_) => parse_int(v).map(BigRational::from_integer),
        other => Err(parse_err(format!("not a rational: {other}"))),
    }
}

pub fn parse_vec(v: &Value) -> Result<IntVec, CliError> {
    v.as_array().ok_or_else(|| parse_err("expected an array of integers"))?.iter().map(parse_int).collect()
}

fn parse_matrix(rows: &[Vec<Value>]) -> Result<IntMat, CliError> {
    let rows: Vec<IntVec> =
        rows.iter().map(|r| r.iter().map(parse_int).collect()).collect::<Result<_, _>>()?;
    IntMat::from_rows(rows).map_err(|e| parse_err(format!("matrix: {e}")))
}

impl Payload {
    pub fn matrices(&self) -> Result<Vec<IntMat>, CliError> {
        self.matrices.iter().map(|m| parse_matrix(m)).collect()
    }

    /// The family, validated; shape and determinant problems are contract
    /// violations.
    pub fn family(&self) -> Result<EpiSet, CliError> {
        let maps = self.matrices()?;
        if maps.is_empty() {
            return Err(parse_err("no matrices given"));
        }
        if let Some(d) = self.dim {
            for m in &maps {
                if m.rows() != d || m.cols() != d {
                    return Err(CliError::Contract(mixshape::Error::DimensionMismatch {
                        expected: d,
                        found: if m.rows() != d { m.rows() } else { m.cols() },
                    }));
                }
            }
        }
        Ok(EpiSet::new(maps)?)
    }

    pub fn opt(&self, key: &str) -> Option<&Value> {
        self.options.get(key)
    }

    pub fn opt_u64(&self, key: &str) -> Result<Option<u64>, CliError> {
        match self.opt(key) {
            None | Some(Value::Null) => Ok(None),
            Some(v) => v.as_u64().map(Some).ok_or_else(|| parse_err(format!("option {key}: expected a non-negative integer"))),
        }
    }

    pub fn opt_bool(&self, key: &str) -> Result<Option<bool>, CliError> {
        match self.opt(key) {
            None | Some(Value::Null) => Ok(None),
            Some(v) => v.as_bool().map(Some).ok_or_else(|| parse_err(format!("option {key}: expected a boolean"))),
        }
    }
}

/// One trigonometric polynomial per map: either a bare character
/// (`["1", "0"]`) or a list of terms `{"chi": [...], "re": "1/2", "im": "0"}`.
pub fn parse_functions(v: &Value, dim: usize) -> Result<Vec<TrigPoly>, CliError> {
    let list = v.as_array().ok_or_else(|| parse_err("functions: expected an array"))?;
    list.iter()
        .map(|f| {
            let arr = f.as_array().ok_or_else(|| parse_err("function: expected an array"))?;
            if arr.iter().all(|x| !x.is_object()) {
                return Ok(TrigPoly::character(parse_vec(f)?));
            }
            let mut p = TrigPoly::new(dim);
            for term in arr {
                let chi = parse_vec(term.get("chi").ok_or_else(|| parse_err("term without chi"))?)?;
                let re = term.get("re").map(parse_rational).transpose()?.unwrap_or_else(|| BigRational::from_integer(1.into()));
                let im = term.get("im").map(parse_rational).transpose()?.unwrap_or_else(BigRational::zero);
                p.add_term(chi, ComplexRational::new(re, im))?;
            }
            Ok(p)
        })
        .collect()
}

pub fn parse_box(v: &Value) -> Result<mixshape::oracle::BoxSet, CliError> {
    let sides = v.as_array().ok_or_else(|| parse_err("box: expected an array of [a, b] pairs"))?;
    let intervals = sides
        .iter()
        .map(|side| match side.as_array().map(Vec::as_slice) {
            Some([a, b]) => Ok((parse_rational(a)?, parse_rational(b)?)),
            _ => Err(parse_err("box side must be [a, b]")),
        })
        .collect::<Result<Vec<_>, _>>()?;
    Ok(mixshape::oracle::BoxSet::new(intervals)?)
}

//! JSON encoding of series.
//!
//! Bivariate: `{"vars": ["x","y"], "order": N, "terms": [[i, j, re, im], ...]}`.
//! Univariate: `{"vars": ["y"], "order": N, "terms": [[j, re, im], ...]}`.
//! Floating coefficients are JSON numbers; exact coefficients are strings
//! `"p/q"`. Decoding accepts either form for both backends.

use serde_json::{json, Value};

use super::{Series1, Series2, SeriesError, Var};
use crate::coeff::{Coeff, CoeffParseError};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum SeriesJsonError {
    #[error("{path}: {message}")]
    Schema { path: String, message: String },
    #[error("{path}: {source}")]
    Coeff {
        path: String,
        source: CoeffParseError,
    },
    #[error(transparent)]
    Series(#[from] SeriesError),
}

fn schema(path: &str, message: impl Into<String>) -> SeriesJsonError {
    SeriesJsonError::Schema {
        path: path.to_string(),
        message: message.into(),
    }
}

fn read_order(obj: &Value, path: &str) -> Result<usize, SeriesJsonError> {
    obj.get("order")
        .and_then(Value::as_u64)
        .map(|n| n as usize)
        .ok_or_else(|| schema(&format!("{path}.order"), "expected a non-negative integer"))
}

fn read_terms<'a>(obj: &'a Value, path: &str) -> Result<&'a Vec<Value>, SeriesJsonError> {
    obj.get("terms")
        .and_then(Value::as_array)
        .ok_or_else(|| schema(&format!("{path}.terms"), "expected an array"))
}

fn read_vars(obj: &Value, path: &str) -> Result<Vec<String>, SeriesJsonError> {
    let vars = obj
        .get("vars")
        .and_then(Value::as_array)
        .ok_or_else(|| schema(&format!("{path}.vars"), "expected an array of names"))?;
    vars.iter()
        .map(|v| {
            v.as_str()
                .map(str::to_string)
                .ok_or_else(|| schema(&format!("{path}.vars"), "expected strings"))
        })
        .collect()
}

fn read_index(v: &Value, path: &str) -> Result<usize, SeriesJsonError> {
    v.as_u64()
        .map(|n| n as usize)
        .ok_or_else(|| schema(path, "expected a non-negative integer exponent"))
}

/// Whether a JSON value looks like a univariate series (one variable name).
pub fn is_univariate(v: &Value) -> bool {
    v.get("vars")
        .and_then(Value::as_array)
        .is_some_and(|a| a.len() == 1)
}

impl<C: Coeff> Series2<C> {
    pub fn to_json(&self) -> Value {
        let terms: Vec<Value> = self
            .terms()
            .map(|(k, c)| {
                let [re, im] = c.to_json_parts();
                json!([k.i, k.j, re, im])
            })
            .collect();
        json!({"vars": ["x", "y"], "order": self.order(), "terms": terms})
    }

    pub fn from_json(v: &Value) -> Result<Self, SeriesJsonError> {
        Self::from_json_at(v, "$")
    }

    pub fn from_json_at(v: &Value, path: &str) -> Result<Self, SeriesJsonError> {
        let vars = read_vars(v, path)?;
        if vars != ["x", "y"] {
            return Err(schema(&format!("{path}.vars"), "expected [\"x\", \"y\"]"));
        }
        let order = read_order(v, path)?;
        let mut triples = Vec::new();
        for (n, t) in read_terms(v, path)?.iter().enumerate() {
            let tp = format!("{path}.terms[{n}]");
            let t = t
                .as_array()
                .filter(|a| a.len() == 4)
                .ok_or_else(|| schema(&tp, "expected [i, j, re, im]"))?;
            let i = read_index(&t[0], &tp)?;
            let j = read_index(&t[1], &tp)?;
            let c = C::from_json_parts(&t[2], &t[3])
                .map_err(|source| SeriesJsonError::Coeff { path: tp, source })?;
            triples.push((i, j, c));
        }
        Ok(Series2::from_terms(order, triples)?)
    }
}

impl<C: Coeff> Series1<C> {
    /// Encodes with the given variable name (`"y"` for series in `y`,
    /// `"x"` for series in `x`).
    pub fn to_json(&self, var: Var) -> Value {
        let terms: Vec<Value> = self
            .coeffs()
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(k, c)| {
                let [re, im] = c.to_json_parts();
                json!([k, re, im])
            })
            .collect();
        json!({"vars": [var.to_string()], "order": self.order(), "terms": terms})
    }

    pub fn from_json(v: &Value) -> Result<Self, SeriesJsonError> {
        Self::from_json_at(v, "$")
    }

    pub fn from_json_at(v: &Value, path: &str) -> Result<Self, SeriesJsonError> {
        let vars = read_vars(v, path)?;
        if vars.len() != 1 {
            return Err(schema(&format!("{path}.vars"), "expected a single variable"));
        }
        let order = read_order(v, path)?;
        super::check_order(order)?;
        let mut coeffs = vec![C::zero(); order + 1];
        for (n, t) in read_terms(v, path)?.iter().enumerate() {
            let tp = format!("{path}.terms[{n}]");
            let t = t
                .as_array()
                .filter(|a| a.len() == 3)
                .ok_or_else(|| schema(&tp, "expected [j, re, im]"))?;
            let k = read_index(&t[0], &tp)?;
            if k > order {
                return Err(SeriesError::TermAboveOrder {
                    index: super::MultiIndex::new(k, 0),
                    order,
                }
                .into());
            }
            let c = C::from_json_parts(&t[1], &t[2])
                .map_err(|source| SeriesJsonError::Coeff { path: tp, source })?;
            coeffs[k] += c;
        }
        Ok(Series1::new(order, coeffs)?)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coeff::{Exact, Float};

    #[test]
    fn bivariate_float_layout() {
        let f = Series2::<Float>::from_terms(
            3,
            [(2, 0, Float::new(1.0, 0.0)), (0, 1, Float::new(0.5, -2.0))],
        )
        .unwrap();
        let v = f.to_json();
        assert_eq!(
            v.to_string(),
            r#"{"order":3,"terms":[[0,1,0.5,-2.0],[2,0,1.0,0.0]],"vars":["x","y"]}"#
        );
        assert_eq!(Series2::<Float>::from_json(&v).unwrap(), f);
    }

    #[test]
    fn exact_uses_rational_strings() {
        let f = Series2::<Exact>::from_terms(2, [(1, 1, Exact::from_gaussian(1, -3, 4))]).unwrap();
        let v = f.to_json();
        assert_eq!(v["terms"][0][2], "1/4");
        assert_eq!(v["terms"][0][3], "-3/4");
        assert_eq!(Series2::<Exact>::from_json(&v).unwrap(), f);
        // Floating numbers are read exactly through their decimal form.
        let w: Value = serde_json::from_str(r#"{"vars":["x","y"],"order":2,"terms":[[1,1,0.25,-0.75]]}"#).unwrap();
        assert_eq!(Series2::<Exact>::from_json(&w).unwrap(), f);
    }

    #[test]
    fn univariate_round_trip_and_errors() {
        let s = Series1::<Exact>::new(3, vec![Exact::zero(), Exact::zero(), Exact::from_ratio(1, 2)]).unwrap();
        let v = s.to_json(Var::Y);
        assert!(is_univariate(&v));
        assert_eq!(Series1::<Exact>::from_json(&v).unwrap(), s);

        let bad: Value = serde_json::from_str(r#"{"vars":["y"],"order":1,"terms":[[2,1,0]]}"#).unwrap();
        assert!(Series1::<Float>::from_json(&bad).is_err());
        let bad: Value = serde_json::from_str(r#"{"vars":["x","y"],"order":1,"terms":[[0,1,"a",0]]}"#).unwrap();
        match Series2::<Float>::from_json(&bad) {
            Err(SeriesJsonError::Coeff { path, .. }) => assert_eq!(path, "$.terms[0]"),
            other => panic!("unexpected {other:?}"),
        }
    }
}

//! JSON encodings of matrices, elements, linear maps and invariant values.
//!
//! Keys are emitted in sorted order, so equal values always serialize to
//! identical bytes.

use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;
use serde_json::{json, Map, Value};
use thiserror::Error;

use crate::algebra::{Element, TowerDescriptor};
use crate::exactla::{format_rational, parse_rational, ExactMatrix, Field, Poly, Scalar};
use crate::invariants::RadicalValue;
use crate::preserver::{MatLinearMap, Verdict, Witness};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum JsonError {
    #[error("invalid JSON: {0}")]
    Syntax(String),
    #[error("{path}: {msg}")]
    Shape { path: String, msg: String },
}

fn shape(path: &str, msg: impl Into<String>) -> JsonError {
    JsonError::Shape {
        path: path.to_string(),
        msg: msg.into(),
    }
}

pub fn parse(text: &str) -> Result<Value, JsonError> {
    serde_json::from_str(text).map_err(|e| JsonError::Syntax(e.to_string()))
}

fn field_of<'a>(obj: &'a Map<String, Value>, key: &str, path: &str) -> Result<&'a Value, JsonError> {
    obj.get(key).ok_or_else(|| shape(path, format!("missing key \"{key}\"")))
}

fn as_object<'a>(v: &'a Value, path: &str) -> Result<&'a Map<String, Value>, JsonError> {
    v.as_object().ok_or_else(|| shape(path, "expected an object"))
}

fn as_array<'a>(v: &'a Value, path: &str) -> Result<&'a Vec<Value>, JsonError> {
    v.as_array().ok_or_else(|| shape(path, "expected an array"))
}

fn as_usize(v: &Value, path: &str) -> Result<usize, JsonError> {
    v.as_u64()
        .and_then(|x| usize::try_from(x).ok())
        .ok_or_else(|| shape(path, "expected a nonnegative integer"))
}

fn as_u64_list(v: &Value, path: &str) -> Result<Vec<u64>, JsonError> {
    as_array(v, path)?
        .iter()
        .enumerate()
        .map(|(i, x)| x.as_u64().ok_or_else(|| shape(&format!("{path}[{i}]"), "expected a nonnegative integer")))
        .collect()
}

pub fn rational_to_json(r: &BigRational) -> Value {
    Value::String(format_rational(r))
}

/// Accepts `"p/q"`, `"p"` or a JSON integer.
pub fn rational_from_json(v: &Value, path: &str) -> Result<BigRational, JsonError> {
    match v {
        Value::String(s) => parse_rational(s).map_err(|e| shape(path, e.to_string())),
        Value::Number(n) => n
            .as_i64()
            .map(|x| BigRational::from_integer(BigInt::from(x)))
            .ok_or_else(|| shape(path, "numbers must be integers; write fractions as \"p/q\"")),
        _ => Err(shape(path, "expected a rational")),
    }
}

pub fn scalar_to_json(s: &Scalar) -> Value {
    match s.field() {
        Field::Q => rational_to_json(s.re()),
        Field::Qi => json!({"re": rational_to_json(s.re()), "im": rational_to_json(s.im())}),
    }
}

/// Over `Q(i)` a bare rational is read as a real number.
pub fn scalar_from_json(field: Field, v: &Value, path: &str) -> Result<Scalar, JsonError> {
    match (field, v) {
        (Field::Qi, Value::Object(obj)) => {
            let re = rational_from_json(field_of(obj, "re", path)?, &format!("{path}.re"))?;
            let im = rational_from_json(field_of(obj, "im", path)?, &format!("{path}.im"))?;
            Ok(Scalar::gaussian(re, im))
        }
        (Field::Q, Value::Object(_)) => Err(shape(path, "Gaussian entry in a matrix over Q")),
        _ => Ok(Scalar::from_rational(field, rational_from_json(v, path)?)),
    }
}

pub fn matrix_to_json(a: &ExactMatrix) -> Value {
    let rows: Vec<Value> = a
        .to_rows()
        .iter()
        .map(|row| Value::Array(row.iter().map(scalar_to_json).collect()))
        .collect();
    json!({"field": a.field().tag(), "rows": rows})
}

pub fn matrix_from_json(v: &Value, path: &str) -> Result<ExactMatrix, JsonError> {
    let obj = as_object(v, path)?;
    let tag = field_of(obj, "field", path)?
        .as_str()
        .ok_or_else(|| shape(path, "\"field\" must be a string"))?;
    let field = Field::from_tag(tag).ok_or_else(|| shape(path, format!("unknown field \"{tag}\"")))?;
    let rows_path = format!("{path}.rows");
    let rows = as_array(field_of(obj, "rows", path)?, &rows_path)?;
    let mut parsed = Vec::with_capacity(rows.len());
    for (i, row) in rows.iter().enumerate() {
        let row_path = format!("{rows_path}[{i}]");
        let entries = as_array(row, &row_path)?;
        let row: Result<Vec<Scalar>, JsonError> = entries
            .iter()
            .enumerate()
            .map(|(j, x)| scalar_from_json(field, x, &format!("{row_path}[{j}]")))
            .collect();
        parsed.push(row?);
    }
    if parsed.is_empty() {
        return Err(shape(path, "matrix has no rows"));
    }
    ExactMatrix::from_rows(field, parsed).map_err(|e| shape(path, e.to_string()))
}

pub fn tower_to_json(t: &TowerDescriptor) -> Value {
    json!({"n1": t.n1(), "prefix": t.prefix(), "cycle": t.cycle()})
}

pub fn tower_from_json(v: &Value, path: &str) -> Result<TowerDescriptor, JsonError> {
    let obj = as_object(v, path)?;
    let n1 = field_of(obj, "n1", path)?
        .as_u64()
        .ok_or_else(|| shape(path, "\"n1\" must be a positive integer"))?;
    let prefix = match obj.get("prefix") {
        Some(p) => as_u64_list(p, &format!("{path}.prefix"))?,
        None => Vec::new(),
    };
    let cycle = as_u64_list(field_of(obj, "cycle", path)?, &format!("{path}.cycle"))?;
    TowerDescriptor::new(n1, prefix, cycle).map_err(|e| shape(path, e.to_string()))
}

pub fn element_to_json(a: &Element) -> Value {
    json!({"tower": tower_to_json(a.tower()), "stage": a.stage(), "matrix": matrix_to_json(a.matrix())})
}

pub fn element_from_json(v: &Value) -> Result<Element, JsonError> {
    let obj = as_object(v, "$")?;
    let tower = tower_from_json(field_of(obj, "tower", "$")?, "$.tower")?;
    let stage = as_usize(field_of(obj, "stage", "$")?, "$.stage")?;
    let mat = matrix_from_json(field_of(obj, "matrix", "$")?, "$.matrix")?;
    Element::new(Arc::new(tower), stage, mat).map_err(|e| shape("$", e.to_string()))
}

pub fn map_to_json(f: &MatLinearMap) -> Value {
    json!({
        "n": f.source_size(),
        "m": f.target_size(),
        "field": f.field().tag(),
        "coeffs": matrix_to_json(f.coeffs()),
    })
}

pub fn map_from_json(v: &Value) -> Result<MatLinearMap, JsonError> {
    let obj = as_object(v, "$")?;
    let n = as_usize(field_of(obj, "n", "$")?, "$.n")?;
    let m = as_usize(field_of(obj, "m", "$")?, "$.m")?;
    if n == 0 || m == 0 {
        return Err(shape("$", "n and m must be positive"));
    }
    let coeffs = matrix_from_json(field_of(obj, "coeffs", "$")?, "$.coeffs")?;
    if let Some(tag) = obj.get("field") {
        if tag.as_str() != Some(coeffs.field().tag()) {
            return Err(shape("$.field", "disagrees with the coefficient matrix"));
        }
    }
    MatLinearMap::new(n, m, coeffs).map_err(|e| shape("$.coeffs", e.to_string()))
}

pub fn radical_to_json(r: &RadicalValue) -> Value {
    json!({"v": rational_to_json(r.radicand()), "n": r.index()})
}

pub fn poly_to_json(p: &Poly) -> Value {
    json!({
        "coeffs": p.coeffs().iter().map(scalar_to_json).collect::<Vec<_>>(),
        "degree": p.degree(),
        "text": p.to_string(),
    })
}

pub fn witness_to_json(w: &Witness) -> Value {
    match w {
        Witness::Element(a) => json!({"element": matrix_to_json(a)}),
        Witness::Pair(x, y) => json!({"pair": [matrix_to_json(x), matrix_to_json(y)]}),
    }
}

pub fn pair_to_json(pair: &(ExactMatrix, ExactMatrix)) -> Value {
    json!([matrix_to_json(&pair.0), matrix_to_json(&pair.1)])
}

pub fn verdict_to_json(v: &Verdict) -> Value {
    match v {
        Verdict::Certified => json!({"verdict": "Certified"}),
        Verdict::PassedSamples { samples } => json!({"verdict": "PassedSamples", "samples": samples}),
        Verdict::CertifiedFail(w) => json!({"verdict": "CertifiedFail", "witness": witness_to_json(w)}),
    }
}

//! JSON input and output: tensors, characteristic polynomials and report
//! envelopes.
//!
//! A tensor file is `{"n": 1, "d": 3, "kind": "sym", "coeffs": [...]}` where
//! `kind` is `sym` (coefficients of the form in descending graded-lex
//! order), `ps` (the `n+1` component forms, block by block) or `dense` (the
//! full coordinate array, first index slowest). Coefficients are strings
//! such as `"-3/4"` or `"0.5"`, or JSON integers.

use num_complex::Complex64;
use serde::ser::SerializeSeq;
use serde::{Serialize, Serializer};
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::resultant::CharPoly;
use crate::scalar::{format_rational, parse_rational, Rational};
use crate::spectra::{EigenschemeReport, Lambda};
use crate::tensor::{project_partially_symmetric, DenseTensor, PSTensor, SymForm};
use crate::zeros::ProjPoint;

pub const SCHEMA: &str = "tenspec/1";

pub fn ser_complex_vec<S: Serializer>(v: &[Complex64], s: S) -> std::result::Result<S::Ok, S::Error> {
    let mut seq = s.serialize_seq(Some(v.len()))?;
    for c in v {
        seq.serialize_element(&[c.re, c.im])?;
    }
    seq.end()
}

pub fn ser_rational_vec<S: Serializer>(v: &[Rational], s: S) -> std::result::Result<S::Ok, S::Error> {
    let mut seq = s.serialize_seq(Some(v.len()))?;
    for c in v {
        seq.serialize_element(&format_rational(c))?;
    }
    seq.end()
}

#[derive(Debug, Clone, PartialEq)]
pub enum TensorInput {
    Sym(SymForm),
    Ps(PSTensor),
    Dense(DenseTensor),
}

impl TensorInput {
    pub fn n(&self) -> usize {
        match self {
            TensorInput::Sym(f) => f.n(),
            TensorInput::Ps(t) => t.n(),
            TensorInput::Dense(a) => a.n(),
        }
    }

    pub fn d(&self) -> usize {
        match self {
            TensorInput::Sym(f) => f.d(),
            TensorInput::Ps(t) => t.d(),
            TensorInput::Dense(a) => a.d(),
        }
    }

    pub fn kind(&self) -> &'static str {
        match self {
            TensorInput::Sym(_) => "sym",
            TensorInput::Ps(_) => "ps",
            TensorInput::Dense(_) => "dense",
        }
    }

    pub fn to_ps(&self) -> PSTensor {
        match self {
            TensorInput::Sym(f) => f.to_ps(),
            TensorInput::Ps(t) => t.clone(),
            TensorInput::Dense(a) => project_partially_symmetric(a),
        }
    }

    pub fn as_sym(&self) -> Option<&SymForm> {
        match self {
            TensorInput::Sym(f) => Some(f),
            _ => None,
        }
    }
}

fn invalid(field: &str, reason: impl Into<String>) -> Error {
    Error::InvalidField {
        field: field.to_string(),
        reason: reason.into(),
    }
}

fn usize_field(v: &Value, field: &str) -> Result<usize> {
    let x = v.get(field).ok_or_else(|| invalid(field, "missing"))?;
    x.as_u64()
        .map(|k| k as usize)
        .ok_or_else(|| invalid(field, "expected a nonnegative integer"))
}

fn rational_list(v: &Value, field: &str) -> Result<Vec<Rational>> {
    let arr = v
        .get(field)
        .ok_or_else(|| invalid(field, "missing"))?
        .as_array()
        .ok_or_else(|| invalid(field, "expected an array"))?;
    arr.iter()
        .enumerate()
        .map(|(i, c)| {
            let parsed = match c {
                Value::String(s) => parse_rational(s),
                Value::Number(n) => n.as_i64().map(|k| Rational::from_integer(k.into())).or_else(|| {
                    n.as_f64().and_then(|x| parse_rational(&x.to_string()))
                }),
                _ => None,
            };
            parsed.ok_or_else(|| invalid(&format!("{field}[{i}]"), format!("not a rational number: {c}")))
        })
        .collect()
}

fn with_field(field: &str, e: Error) -> Error {
    match e {
        Error::InvalidField { .. } => e,
        other => invalid(field, other.to_string()),
    }
}

pub fn parse_tensor_value(v: &Value) -> Result<TensorInput> {
    let n = usize_field(v, "n")?;
    let d = usize_field(v, "d")?;
    if n < 1 || d < 2 {
        return Err(invalid("d", format!("need n >= 1 and d >= 2, got ({n}, {d})")));
    }
    let kind = v
        .get("kind")
        .ok_or_else(|| invalid("kind", "missing"))?
        .as_str()
        .ok_or_else(|| invalid("kind", "expected a string"))?;
    let coeffs = rational_list(v, "coeffs")?;
    match kind {
        "sym" => SymForm::from_dense(n, d, &coeffs)
            .map(TensorInput::Sym)
            .map_err(|e| with_field("coeffs", e)),
        "ps" => PSTensor::from_flat(n, d, &coeffs)
            .map(TensorInput::Ps)
            .map_err(|e| with_field("coeffs", e)),
        "dense" => DenseTensor::new(n, d, coeffs)
            .map(TensorInput::Dense)
            .map_err(|e| with_field("coeffs", e)),
        other => Err(invalid("kind", format!("expected sym, ps or dense, got {other:?}"))),
    }
}

pub fn parse_tensor(text: &str) -> Result<TensorInput> {
    let v: Value = serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
    parse_tensor_value(&v)
}

pub fn tensor_to_value(t: &TensorInput) -> Value {
    let coeffs: Vec<Rational> = match t {
        TensorInput::Sym(f) => f.to_dense(),
        TensorInput::Ps(p) => p.to_flat(),
        TensorInput::Dense(a) => a.entries().to_vec(),
    };
    json!({
        "n": t.n(),
        "d": t.d(),
        "kind": t.kind(),
        "coeffs": coeffs.iter().map(format_rational).collect::<Vec<_>>(),
    })
}

/// A characteristic polynomial file: `{"n", "d", "coeffs": [c_1, ..., c_D]}`
/// for `lambda^D + c_1 lambda^{D-1} + ... + c_D`.
pub fn parse_charpoly(text: &str) -> Result<(usize, usize, CharPoly)> {
    let v: Value = serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
    let n = usize_field(&v, "n")?;
    let d = usize_field(&v, "d")?;
    let coeffs = rational_list(&v, "coeffs")?;
    if n < 1 || d < 2 {
        return Err(invalid("d", format!("need n >= 1 and d >= 2, got ({n}, {d})")));
    }
    let big_d = crate::tensor::eigencount(n, d);
    if coeffs.len() != big_d {
        return Err(invalid("coeffs", format!("expected {big_d} coefficients c_1..c_D, got {}", coeffs.len())));
    }
    Ok((n, d, CharPoly::new(coeffs)))
}

pub fn charpoly_to_value(p: &CharPoly) -> Value {
    json!({
        "degree": p.degree(),
        "coeffs": p.coeffs().iter().map(format_rational).collect::<Vec<_>>(),
    })
}

/// Exact eigenvalues as `"p/q"`, numeric ones as `[re, im]`.
pub fn lambda_to_value(l: &Lambda) -> Value {
    match l {
        Lambda::Exact(q) => json!(format_rational(q)),
        Lambda::Numeric(z) => json!([z.re, z.im]),
    }
}

pub fn point_to_value(p: &ProjPoint) -> Value {
    let mut v = json!({ "coords": p.coords.iter().map(|c| [c.re, c.im]).collect::<Vec<_>>() });
    if let Some(e) = &p.exact {
        v["exact"] = json!(e.iter().map(format_rational).collect::<Vec<_>>());
    }
    v
}

pub fn eigenscheme_to_value(r: &EigenschemeReport) -> Value {
    json!({
        "eigenvalues": r.eigenvalues.iter().map(|e| json!({
            "lambda": lambda_to_value(&e.lambda),
            "multiplicity": e.multiplicity,
        })).collect::<Vec<_>>(),
        "pairs": r.pairs.iter().map(|p| json!({
            "lambda": lambda_to_value(&p.lambda),
            "w": point_to_value(&p.w),
            "algebraic_multiplicity": p.algebraic_multiplicity,
            "residual": p.residual,
        })).collect::<Vec<_>>(),
        "reduced": r.reduced,
        "infinite": r.infinite,
    })
}

/// Wraps a result in the versioned report envelope.
pub fn envelope<T: Serialize>(command: &str, seed: Option<u64>, result: &T) -> Result<Value> {
    let result = serde_json::to_value(result).map_err(|e| Error::Parse(e.to_string()))?;
    let mut v = json!({ "schema": SCHEMA, "command": command });
    if let Some(s) = seed {
        v["seed"] = json!(s);
    }
    v["result"] = result;
    Ok(v)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{q, qf};

    #[test]
    fn tensor_round_trip() {
        let text = r#"{"n": 1, "d": 3, "kind": "sym", "coeffs": ["1", "-3/4", 0, "0.5"]}"#;
        let t = parse_tensor(text).unwrap();
        let TensorInput::Sym(f) = &t else { panic!() };
        assert_eq!(f.to_dense(), vec![q(1), qf(-3, 4), q(0), qf(1, 2)]);
        let back = parse_tensor_value(&tensor_to_value(&t)).unwrap();
        assert_eq!(back, t);
    }

    #[test]
    fn errors_name_the_field() {
        let cases = [
            (r#"{"d": 3, "kind": "sym", "coeffs": []}"#, "n"),
            (r#"{"n": 1, "d": 3, "kind": "cube", "coeffs": []}"#, "kind"),
            (r#"{"n": 1, "d": 3, "kind": "sym", "coeffs": ["1", "x"]}"#, "coeffs[1]"),
            (r#"{"n": 1, "d": 3, "kind": "sym", "coeffs": ["1"]}"#, "coeffs"),
            (r#"{"n": 1, "d": "3", "kind": "sym", "coeffs": []}"#, "d"),
        ];
        for (text, field) in cases {
            match parse_tensor(text) {
                Err(Error::InvalidField { field: f, .. }) => assert_eq!(f, field, "{text}"),
                other => panic!("{text}: {other:?}"),
            }
        }
        assert!(matches!(parse_tensor("{"), Err(Error::Parse(_))));
    }

    #[test]
    fn dense_and_ps_inputs() {
        let t = parse_tensor(r#"{"n": 1, "d": 2, "kind": "dense", "coeffs": [1, 2, 3, 4]}"#).unwrap();
        assert_eq!(t.to_ps().to_flat(), vec![q(1), q(2), q(3), q(4)]);
        let t = parse_tensor(r#"{"n": 1, "d": 3, "kind": "ps", "coeffs": [1, 0, 0, 0, 0, 1]}"#).unwrap();
        assert_eq!(t.to_ps(), PSTensor::unit(1, 3));
    }

    #[test]
    fn charpoly_file() {
        let (n, d, p) = parse_charpoly(r#"{"n": 1, "d": 3, "coeffs": ["-4", 6, -4, 1]}"#).unwrap();
        assert_eq!((n, d, p.degree()), (1, 3, 4));
        assert!(parse_charpoly(r#"{"n": 1, "d": 3, "coeffs": [1]}"#).is_err());
    }

    #[test]
    fn diagonal_eigen_report() {
        let t = parse_tensor(r#"{"n": 1, "d": 3, "kind": "sym", "coeffs": [2, 0, 0, 5]}"#).unwrap();
        let r = crate::spectra::eigenscheme(&t.to_ps(), &PSTensor::unit(1, 3), &Default::default()).unwrap();
        let v = eigenscheme_to_value(&r);
        let mut got: Vec<(String, u64)> = v["eigenvalues"]
            .as_array()
            .unwrap()
            .iter()
            .map(|e| (e["lambda"].as_str().unwrap().to_string(), e["multiplicity"].as_u64().unwrap()))
            .collect();
        got.sort();
        assert_eq!(got, vec![("2".to_string(), 2), ("5".to_string(), 2)]);
    }

    #[test]
    fn envelope_has_schema() {
        let v = envelope("charpoly", Some(7), &json!({"a": 1})).unwrap();
        assert_eq!(v["schema"], SCHEMA);
        assert_eq!(v["seed"], 7);
        assert_eq!(v["result"]["a"], 1);
    }
}

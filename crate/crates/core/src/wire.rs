//! JSON encodings of matrices, words, conjugate products, factorizations and
//! verification reports. Indices are 1-based on the wire.
//!
//! Ring elements are written as JSON numbers when they are integers that fit
//! an `i64` and as literal strings otherwise; both forms are accepted on input.
//! Generator arguments and target values are always strings.

use serde_json::{json, Map, Value};
use thiserror::Error;

use crate::factorizer::{Factorization, Target, Theorem, VerifyReport, WhoseEntry};
use crate::matgroup::{GlElement, MatError, Matrix, Subset, Word};
use crate::reduction::{ConjFactor, ConjProduct, ReductionError, Sign};
use crate::ring::{Ring, RingElement, RingError};

#[derive(Debug, Error)]
#[error("{0}")]
pub struct WireError(pub String);

impl From<RingError> for WireError {
    fn from(e: RingError) -> Self {
        WireError(e.to_string())
    }
}

impl From<MatError> for WireError {
    fn from(e: MatError) -> Self {
        WireError(e.to_string())
    }
}

impl From<ReductionError> for WireError {
    fn from(e: ReductionError) -> Self {
        WireError(e.to_string())
    }
}

impl From<serde_json::Error> for WireError {
    fn from(e: serde_json::Error) -> Self {
        WireError(format!("invalid JSON: {e}"))
    }
}

fn err<T>(msg: impl Into<String>) -> Result<T, WireError> {
    Err(WireError(msg.into()))
}

fn field<'a>(v: &'a Value, name: &str) -> Result<&'a Value, WireError> {
    v.get(name).ok_or_else(|| WireError(format!("missing field `{name}`")))
}

fn as_usize(v: &Value, name: &str) -> Result<usize, WireError> {
    v.as_u64()
        .map(|x| x as usize)
        .ok_or_else(|| WireError(format!("`{name}` must be a non-negative integer")))
}

fn index(v: &Value, name: &str, n: usize) -> Result<usize, WireError> {
    let i = as_usize(field(v, name)?, name)?;
    if i == 0 || i > n {
        return err(format!("`{name}` = {i} is outside 1..{n}"));
    }
    Ok(i - 1)
}

pub fn element_to_json(ring: &Ring, x: &RingElement) -> Value {
    match ring.to_i64(x) {
        Some(v) if matches!(x, RingElement::Int(_) | RingElement::Residue(_)) => json!(v),
        _ => json!(x.to_string()),
    }
}

pub fn element_from_json(ring: &Ring, v: &Value) -> Result<RingElement, WireError> {
    match v {
        Value::Number(num) => Ok(ring.parse_element(&num.to_string())?),
        Value::String(s) => Ok(ring.parse_element(s)?),
        other => err(format!("expected a ring element, got {other}")),
    }
}

pub fn matrix_to_json(m: &Matrix) -> Value {
    let ring = m.ring();
    let rows: Vec<Value> = (0..m.n())
        .map(|i| Value::Array(m.row(i).iter().map(|x| element_to_json(ring, x)).collect()))
        .collect();
    json!({ "ring": ring.to_string(), "n": m.n(), "entries": rows })
}

/// Parses `{"ring", "n", "entries"}`; `ring` may be omitted when `default`
/// is given.
pub fn matrix_from_json(v: &Value, default: Option<&Ring>) -> Result<Matrix, WireError> {
    let ring = match (v.get("ring"), default) {
        (Some(Value::String(s)), _) => s.parse::<Ring>()?,
        (None, Some(r)) => r.clone(),
        _ => return err("matrix needs a `ring` string"),
    };
    if let Some(d) = default {
        if *d != ring {
            return err(format!("matrix ring {ring} differs from {d}"));
        }
    }
    let rows = field(v, "entries")?
        .as_array()
        .ok_or_else(|| WireError("`entries` must be an array of rows".into()))?;
    let n = rows.len();
    if let Some(declared) = v.get("n") {
        if as_usize(declared, "n")? != n {
            return err(format!("`n` = {declared} but {n} rows were given"));
        }
    }
    let mut m = Matrix::zero(&ring, n);
    for (i, row) in rows.iter().enumerate() {
        let row = row.as_array().filter(|r| r.len() == n).ok_or_else(|| {
            WireError(format!("row {} must have {n} entries", i + 1))
        })?;
        for (j, x) in row.iter().enumerate() {
            m.set(i, j, element_from_json(&ring, x)?);
        }
    }
    Ok(m)
}

/// A matrix given either as `{"ring", "n", "entries"}` or, with an explicit
/// ring, as a bare array of rows.
pub fn matrix_from_str(text: &str, ring: Option<&Ring>) -> Result<Matrix, WireError> {
    let v: Value = serde_json::from_str(text)?;
    match v {
        Value::Array(_) => match ring {
            Some(r) => matrix_from_json(&json!({ "entries": v }), Some(r)),
            None => err("a bare array of rows needs a ring"),
        },
        _ => matrix_from_json(&v, ring),
    }
}

pub fn word_to_json(w: &Word) -> Value {
    Value::Array(
        w.generators()
            .iter()
            .map(|g| json!({ "i": g.i + 1, "j": g.j + 1, "x": g.x.to_string() }))
            .collect(),
    )
}

pub fn word_from_json(ring: &Ring, n: usize, subset: Subset, v: &Value) -> Result<Word, WireError> {
    let gens = v.as_array().ok_or_else(|| WireError("a word is an array of generators".into()))?;
    let mut w = Word::with_subset(ring.clone(), n, subset);
    for g in gens {
        let i = index(g, "i", n)?;
        let j = index(g, "j", n)?;
        let x = element_from_json(ring, field(g, "x")?)?;
        w.push(i, j, x)?;
    }
    Ok(w)
}

fn subset_tag(s: Subset) -> Option<&'static str> {
    match s {
        Subset::Full => None,
        Subset::EStar => Some("e-star"),
        Subset::EDoubleStar => Some("e-double-star"),
    }
}

fn subset_from_tag(tag: Option<&Value>) -> Result<Subset, WireError> {
    match tag.and_then(Value::as_str) {
        None => Ok(Subset::Full),
        Some("e-star") => Ok(Subset::EStar),
        Some("e-double-star") => Ok(Subset::EDoubleStar),
        Some(other) => err(format!("unknown subset `{other}`")),
    }
}

fn factor_to_json(f: &ConjFactor, human: bool) -> Value {
    let mut obj = Map::new();
    obj.insert("eps".into(), json!(f.sign.as_i8()));
    obj.insert(
        "conj".into(),
        if human { json!(f.conj.to_human()) } else { word_to_json(&f.conj) },
    );
    if let Some(tag) = subset_tag(f.conj.subset()) {
        obj.insert("subset".into(), json!(tag));
    }
    Value::Object(obj)
}

pub fn product_to_json(p: &ConjProduct, human: bool) -> Value {
    json!({ "factors": factors_to_json(p, human) })
}

fn factors_to_json(p: &ConjProduct, human: bool) -> Value {
    Value::Array(p.factors().iter().map(|f| factor_to_json(f, human)).collect())
}

fn factors_from_json(ring: &Ring, n: usize, v: &Value) -> Result<ConjProduct, WireError> {
    let list = v.as_array().ok_or_else(|| WireError("`factors` must be an array".into()))?;
    let mut p = ConjProduct::empty(ring, n);
    for (pos, f) in list.iter().enumerate() {
        let sign = match field(f, "eps")?.as_i64() {
            Some(1) => Sign::Plus,
            Some(-1) => Sign::Minus,
            _ => return err(format!("factor {}: `eps` must be 1 or -1", pos + 1)),
        };
        let subset = subset_from_tag(f.get("subset"))?;
        let conj = word_from_json(ring, n, subset, field(f, "conj")?)
            .map_err(|e| WireError(format!("factor {}: {e}", pos + 1)))?;
        p.push(sign, conj);
    }
    Ok(p)
}

pub fn product_from_json(ring: &Ring, n: usize, v: &Value) -> Result<ConjProduct, WireError> {
    factors_from_json(ring, n, field(v, "factors")?)
}

pub fn factorization_to_json(f: &Factorization, human: bool) -> Value {
    let ring = f.product.ring();
    let intermediates: Vec<Value> = f
        .intermediates
        .iter()
        .map(|(name, value)| json!({ "name": name, "value": value }))
        .collect();
    json!({
        "theorem": f.theorem.to_string(),
        "ring": ring.to_string(),
        "n": f.product.n(),
        "bound": f.bound,
        "factor_count": f.product.len(),
        "target": {
            "k": f.target.k + 1,
            "l": f.target.l + 1,
            "value": f.target.value.to_string(),
        },
        "whose_entry": f.whose_entry.tag(),
        "intermediates": intermediates,
        "factors": factors_to_json(&f.product, human),
    })
}

pub fn factorization_from_json(v: &Value) -> Result<Factorization, WireError> {
    let ring: Ring = field(v, "ring")?
        .as_str()
        .ok_or_else(|| WireError("`ring` must be a string".into()))?
        .parse()?;
    let n = as_usize(field(v, "n")?, "n")?;
    let theorem: Theorem = field(v, "theorem")?
        .as_str()
        .ok_or_else(|| WireError("`theorem` must be a string".into()))?
        .parse()
        .map_err(WireError)?;
    let bound = as_usize(field(v, "bound")?, "bound")?;
    let t = field(v, "target")?;
    let target = Target {
        k: index(t, "k", n)?,
        l: index(t, "l", n)?,
        value: element_from_json(&ring, field(t, "value")?)?,
    };
    let whose_entry = match field(v, "whose_entry")?.as_str() {
        Some("sigma") => WhoseEntry::Sigma,
        Some("sigma_inverse") => WhoseEntry::SigmaInverse,
        _ => return err("`whose_entry` must be \"sigma\" or \"sigma_inverse\""),
    };
    let intermediates = match v.get("intermediates") {
        None => Vec::new(),
        Some(list) => list
            .as_array()
            .ok_or_else(|| WireError("`intermediates` must be an array".into()))?
            .iter()
            .map(|e| {
                let s = |k: &str| field(e, k)?.as_str().map(str::to_string).ok_or_else(|| WireError(format!("`{k}` must be a string")));
                Ok((s("name")?, s("value")?))
            })
            .collect::<Result<_, WireError>>()?,
    };
    Ok(Factorization {
        product: factors_from_json(&ring, n, field(v, "factors")?)?,
        target,
        whose_entry,
        theorem,
        bound,
        intermediates,
    })
}

pub fn report_to_json(r: &VerifyReport) -> Value {
    json!({
        "passed": r.passed(),
        "evaluation_matches": r.evaluation_matches,
        "mismatch": r.mismatch.map(|(i, j)| json!({ "row": i + 1, "col": j + 1 })),
        "factor_count": r.factor_count,
        "bound": r.bound,
        "within_bound": r.within_bound,
        "conjugators_elementary": r.conjugators_elementary,
        "conjugators_in_estar": r.conjugators_in_estar,
        "conjugators_in_edoublestar": r.conjugators_in_edoublestar,
    })
}

/// The invertible element of `m`, with the inverse computed internally.
pub fn gl_from_matrix(m: Matrix) -> Result<GlElement, WireError> {
    Ok(GlElement::from_matrix(m)?)
}

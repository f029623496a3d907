//! Textual ring specs (`Z`, `Z/12`, `GF(3)`, `M2(GF(2))`, `Z/4xGF(3)`) and
//! element literals.
//!
//! Element literals are decimal integers (mapped into the ring), row-major
//! bracketed lists such as `[[1,0],[1,1]]` for matrix rings, and parenthesised
//! component tuples such as `(1,2)` for products.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;

use super::{Ring, RingElement, RingError, RingSpec};

impl FromStr for RingSpec {
    type Err = RingError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let text: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        let parts = split_top_level(&text, 'x');
        if parts.len() > 1 {
            let factors = parts
                .into_iter()
                .map(parse_factor)
                .collect::<Result<Vec<_>, _>>()?;
            return Ok(RingSpec::Product(factors));
        }
        parse_factor(&text)
    }
}

impl FromStr for Ring {
    type Err = RingError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Ring::new(s.parse()?)
    }
}

fn bad_spec(spec: &str, reason: &str) -> RingError {
    RingError::InvalidSpec {
        spec: spec.to_string(),
        reason: reason.to_string(),
    }
}

fn parse_number(spec: &str, digits: &str) -> Result<u64, RingError> {
    if digits.is_empty() || !digits.chars().all(|c| c.is_ascii_digit()) {
        return Err(bad_spec(spec, "expected a decimal number"));
    }
    digits
        .parse()
        .map_err(|_| bad_spec(spec, "number out of range"))
}

fn parse_field(spec: &str, text: &str) -> Result<Option<u64>, RingError> {
    match text.strip_prefix("GF(").and_then(|r| r.strip_suffix(')')) {
        Some(inner) => Ok(Some(parse_number(spec, inner)?)),
        None => Ok(None),
    }
}

fn parse_factor(text: &str) -> Result<RingSpec, RingError> {
    if text == "Z" {
        return Ok(RingSpec::Integers);
    }
    if let Some(m) = text.strip_prefix("Z/") {
        return Ok(RingSpec::IntegersMod(parse_number(text, m)?));
    }
    if let Some(q) = parse_field(text, text)? {
        return Ok(RingSpec::Field(q));
    }
    if let Some(rest) = text.strip_prefix('M') {
        let open = rest
            .find('(')
            .ok_or_else(|| bad_spec(text, "expected M<k>(GF(<q>))"))?;
        let k = parse_number(text, &rest[..open])? as usize;
        let inner = rest[open..]
            .strip_prefix('(')
            .and_then(|r| r.strip_suffix(')'))
            .ok_or_else(|| bad_spec(text, "unbalanced parentheses"))?;
        let q = parse_field(text, inner)?
            .ok_or_else(|| bad_spec(text, "matrix rings are taken over GF(q)"))?;
        return Ok(RingSpec::MatrixRing { k, q });
    }
    Err(bad_spec(text, "unknown ring"))
}

/// Splits on `sep` outside any parentheses or brackets.
fn split_top_level(text: &str, sep: char) -> Vec<&str> {
    let mut parts = Vec::new();
    let mut depth = 0i32;
    let mut start = 0;
    for (idx, ch) in text.char_indices() {
        match ch {
            '(' | '[' => depth += 1,
            ')' | ']' => depth -= 1,
            c if c == sep && depth == 0 => {
                parts.push(&text[start..idx]);
                start = idx + ch.len_utf8();
            }
            _ => {}
        }
    }
    parts.push(&text[start..]);
    parts
}

impl Ring {
    pub fn parse_element(&self, literal: &str) -> Result<RingElement, RingError> {
        let text: String = literal.chars().filter(|c| !c.is_whitespace()).collect();
        let fail = |reason: &str| RingError::InvalidLiteral {
            literal: literal.to_string(),
            ring: self.to_string(),
            reason: reason.to_string(),
        };
        if let Ok(v) = text.parse::<BigInt>() {
            return Ok(self.from_bigint(&v));
        }
        match self.spec() {
            RingSpec::MatrixRing { k, q } if text.starts_with('[') => {
                let rows: Vec<Vec<i64>> =
                    serde_json::from_str(&text).map_err(|_| fail("expected [[..],..] of integers"))?;
                if rows.len() != *k || rows.iter().any(|r| r.len() != *k) {
                    return Err(fail(&format!("expected a {k}x{k} matrix")));
                }
                let field = Ring::field(*q).expect("matrix ring field is valid");
                let entries = rows
                    .iter()
                    .flatten()
                    .map(|&v| match field.from_i64(v) {
                        RingElement::Residue(r) => r,
                        _ => unreachable!(),
                    })
                    .collect();
                Ok(RingElement::Matrix(entries))
            }
            RingSpec::Product(_) if text.starts_with('(') && text.ends_with(')') => {
                let inner = &text[1..text.len() - 1];
                let parts = split_top_level(inner, ',');
                if parts.len() != self.components().len() {
                    return Err(fail("wrong number of components"));
                }
                let comps = self
                    .components()
                    .iter()
                    .zip(parts)
                    .map(|(c, p)| c.parse_element(p))
                    .collect::<Result<Vec<_>, _>>()?;
                Ok(RingElement::Tuple(comps))
            }
            _ => Err(fail("not a literal of this ring")),
        }
    }
}

impl fmt::Display for RingElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RingElement::Int(v) => write!(f, "{v}"),
            RingElement::Residue(r) => write!(f, "{r}"),
            RingElement::Matrix(entries) => {
                let k = (entries.len() as f64).sqrt().round() as usize;
                write!(f, "[")?;
                for r in 0..k {
                    if r > 0 {
                        write!(f, ",")?;
                    }
                    write!(f, "[")?;
                    for c in 0..k {
                        if c > 0 {
                            write!(f, ",")?;
                        }
                        write!(f, "{}", entries[r * k + c])?;
                    }
                    write!(f, "]")?;
                }
                write!(f, "]")
            }
            RingElement::Tuple(parts) => {
                write!(f, "(")?;
                for (idx, p) in parts.iter().enumerate() {
                    if idx > 0 {
                        write!(f, ",")?;
                    }
                    write!(f, "{p}")?;
                }
                write!(f, ")")
            }
        }
    }
}

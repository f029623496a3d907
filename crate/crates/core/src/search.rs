//! Exhaustive minimal conjugate-product lengths over `GL_3(GF(q))`, `q` in
//! `{2, 3}`.
//!
//! Elements are stored as row-major `[u8; 9]` and encoded as the base-`q`
//! number whose most significant digit is the `(1,1)` entry. The identity has
//! index 0; the remaining elements follow in increasing encoding order.

use std::collections::BTreeMap;
use std::fs;
use std::io;
use std::path::Path;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::exec::Execution;
use crate::matgroup::{GlElement, Matrix, Word};
use crate::ring::{Ring, RingSpec};

pub type Mat3 = [u8; 9];

/// Products of more than this many conjugates are never searched.
pub const DEFAULT_MAX_LEN: usize = 8;

#[derive(Debug, Error)]
pub enum SearchError {
    #[error("unsupported size: exhaustive search covers n = 3 and q in {{2, 3}}, got n = {n}, q = {q}")]
    Unsupported { n: usize, q: u64 },
    #[error("cache file {path}: {reason}")]
    Cache { path: String, reason: String },
    #[error(transparent)]
    Io(#[from] io::Error),
}

const ABSENT: u32 = u32::MAX;

/// `GL_3(GF(q))` with a constant-time index lookup and `SL_3` membership.
#[derive(Clone, Debug)]
pub struct GroupTable {
    q: u8,
    elements: Vec<Mat3>,
    /// encoding -> index, `ABSENT` for singular matrices
    lookup: Vec<u32>,
    inverse: Vec<u32>,
    special: Vec<bool>,
    sl: Vec<u32>,
}

fn check_size(n: usize, q: u64) -> Result<u8, SearchError> {
    if n == 3 && (q == 2 || q == 3) {
        Ok(q as u8)
    } else {
        Err(SearchError::Unsupported { n, q })
    }
}

pub fn encode(m: &Mat3, q: u8) -> usize {
    m.iter().fold(0usize, |acc, &d| acc * q as usize + d as usize)
}

pub fn decode(mut code: usize, q: u8) -> Mat3 {
    let mut m = [0u8; 9];
    for slot in m.iter_mut().rev() {
        *slot = (code % q as usize) as u8;
        code /= q as usize;
    }
    m
}

pub fn mat_mul(x: &Mat3, y: &Mat3, q: u8) -> Mat3 {
    let mut out = [0u8; 9];
    for r in 0..3 {
        for c in 0..3 {
            let s = x[3 * r] as u16 * y[c] as u16 + x[3 * r + 1] as u16 * y[3 + c] as u16 + x[3 * r + 2] as u16 * y[6 + c] as u16;
            out[3 * r + c] = (s % q as u16) as u8;
        }
    }
    out
}

/// Cofactor expansion along the first row.
pub fn det(m: &Mat3, q: u8) -> u8 {
    let q = q as i32;
    let e = |i: usize| m[i] as i32;
    let d = e(0) * (e(4) * e(8) - e(5) * e(7)) - e(1) * (e(3) * e(8) - e(5) * e(6)) + e(2) * (e(3) * e(7) - e(4) * e(6));
    d.rem_euclid(q) as u8
}

const IDENTITY: Mat3 = [1, 0, 0, 0, 1, 0, 0, 0, 1];

impl GroupTable {
    /// Enumerates `GL_n(GF(q))`.
    pub fn enumerate(n: usize, q: u64) -> Result<GroupTable, SearchError> {
        let q = check_size(n, q)?;
        let total = (q as usize).pow(9);
        let codes: Vec<usize> = (0..total).filter(|&c| det(&decode(c, q), q) != 0).collect();
        Ok(GroupTable::from_codes(q, &codes))
    }

    /// `codes` must be exactly the sorted encodings of the invertible matrices.
    fn from_codes(q: u8, codes: &[usize]) -> GroupTable {
        let id = encode(&IDENTITY, q);
        let mut elements = Vec::with_capacity(codes.len());
        elements.push(IDENTITY);
        elements.extend(codes.iter().filter(|&&c| c != id).map(|&c| decode(c, q)));
        let mut lookup = vec![ABSENT; (q as usize).pow(9)];
        for (idx, m) in elements.iter().enumerate() {
            lookup[encode(m, q)] = idx as u32;
        }
        let special: Vec<bool> = elements.iter().map(|m| det(m, q) == 1).collect();
        let sl = (0..elements.len() as u32).filter(|&i| special[i as usize]).collect();
        let mut table = GroupTable {
            q,
            elements,
            lookup,
            inverse: Vec::new(),
            special,
            sl,
        };
        // the inverse is a power: g^(|GL| - 1)
        let inverse = (0..table.len())
            .map(|i| {
                let g = table.elements[i];
                let mut acc = g;
                loop {
                    let next = mat_mul(&acc, &g, q);
                    if next == IDENTITY {
                        return table.lookup[encode(&acc, q)];
                    }
                    acc = next;
                }
            })
            .collect();
        table.inverse = inverse;
        table
    }

    /// Loads the cached enumeration at `path` if it matches `(n, q)`,
    /// otherwise enumerates and writes the cache.
    pub fn load_or_build(n: usize, q: u64, path: &Path) -> Result<GroupTable, SearchError> {
        let qq = check_size(n, q)?;
        if path.exists() {
            let text = fs::read_to_string(path)?;
            let codes = parse_cache(&text, n, qq).map_err(|reason| SearchError::Cache {
                path: path.display().to_string(),
                reason,
            })?;
            return Ok(GroupTable::from_codes(qq, &codes));
        }
        let table = GroupTable::enumerate(n, q)?;
        fs::write(path, table.cache_text())?;
        Ok(table)
    }

    /// Header `n q count`, then one encoding per line in increasing order.
    pub fn cache_text(&self) -> String {
        let mut codes: Vec<usize> = self.elements.iter().map(|m| encode(m, self.q)).collect();
        codes.sort_unstable();
        let mut out = format!("3 {} {}\n", self.q, codes.len());
        for c in codes {
            out.push_str(&c.to_string());
            out.push('\n');
        }
        out
    }

    pub fn n(&self) -> usize {
        3
    }

    pub fn q(&self) -> u8 {
        self.q
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn element(&self, idx: usize) -> &Mat3 {
        &self.elements[idx]
    }

    pub fn index_of(&self, m: &Mat3) -> Option<usize> {
        match self.lookup.get(encode(m, self.q)) {
            Some(&i) if i != ABSENT => Some(i as usize),
            _ => None,
        }
    }

    pub fn inverse(&self, idx: usize) -> usize {
        self.inverse[idx] as usize
    }

    pub fn mul(&self, x: usize, y: usize) -> usize {
        self.lookup[encode(&mat_mul(&self.elements[x], &self.elements[y], self.q), self.q)] as usize
    }

    pub fn is_special(&self, idx: usize) -> bool {
        self.special[idx]
    }

    /// Indices of `SL_3(GF(q))`, which equals `E_3(GF(q))`.
    pub fn special_indices(&self) -> &[u32] {
        &self.sl
    }

    pub fn ring(&self) -> Ring {
        Ring::new(RingSpec::Field(self.q as u64)).expect("2 and 3 are prime")
    }

    /// Index of a `3 x 3` matrix over `GF(q)`.
    pub fn index_of_matrix(&self, m: &Matrix) -> Option<usize> {
        if m.n() != 3 || m.ring().spec() != &RingSpec::Field(self.q as u64) {
            return None;
        }
        let mut out = [0u8; 9];
        for (slot, x) in out.iter_mut().zip(m.entries()) {
            *slot = m.ring().to_i64(x)? as u8;
        }
        self.index_of(&out)
    }

    pub fn to_matrix(&self, idx: usize) -> Matrix {
        let ring = self.ring();
        let rows: Vec<Vec<i64>> = self.elements[idx].chunks(3).map(|r| r.iter().map(|&x| x as i64).collect()).collect();
        let rows: Vec<&[i64]> = rows.iter().map(Vec::as_slice).collect();
        Matrix::from_i64_rows(&ring, &rows).expect("3 x 3")
    }

    fn transvection(&self, k: usize, l: usize, x: u8) -> usize {
        let mut m = IDENTITY;
        m[3 * k + l] = x;
        self.index_of(&m).expect("transvections are invertible")
    }

    /// `S_1 = { sigma^xi, (sigma^-1)^xi : xi in E_3 }` as a membership table.
    pub fn conjugate_set(&self, sigma: usize) -> ConjugateSet {
        let mut member = vec![false; self.len()];
        let mut list = Vec::new();
        let s = self.elements[sigma];
        for &xi in &self.sl {
            let xi = xi as usize;
            let c = mat_mul(&mat_mul(&self.elements[self.inverse(xi)], &s, self.q), &self.elements[xi], self.q);
            let c = self.lookup[encode(&c, self.q)] as usize;
            for e in [c, self.inverse(c)] {
                if !member[e] {
                    member[e] = true;
                    list.push(e as u32);
                }
            }
        }
        list.sort_unstable();
        ConjugateSet { member, list }
    }

    /// Whether `idx` is `sigma^xi` or `(sigma^-1)^xi` for the word `xi`,
    /// evaluated over `GF(q)`.
    pub fn conjugate_index(&self, sigma: usize, inverse: bool, xi: &Word) -> Option<usize> {
        let g = GlElement::from_word(xi);
        let base = if inverse { self.inverse(sigma) } else { sigma };
        let m = g.inv().mul(&self.to_matrix(base)).mul(g.mat());
        self.index_of_matrix(&m)
    }
}

fn parse_cache(text: &str, n: usize, q: u8) -> Result<Vec<usize>, String> {
    let mut lines = text.lines();
    let header: Vec<usize> = lines
        .next()
        .ok_or("empty file")?
        .split_whitespace()
        .map(|t| t.parse::<usize>().map_err(|e| e.to_string()))
        .collect::<Result<_, _>>()?;
    if header.len() != 3 || header[0] != n || header[1] != q as usize {
        return Err(format!("header {header:?} does not describe n = {n}, q = {q}"));
    }
    let codes: Vec<usize> = lines
        .map(|l| l.trim().parse::<usize>().map_err(|e| format!("bad encoding {l:?}: {e}")))
        .collect::<Result<_, _>>()?;
    if codes.len() != header[2] {
        return Err(format!("header announces {} encodings, found {}", header[2], codes.len()));
    }
    if !codes.windows(2).all(|w| w[0] < w[1]) {
        return Err("encodings are not strictly increasing".into());
    }
    let total = (q as usize).pow(9);
    if codes.iter().any(|&c| c >= total || det(&decode(c, q), q) == 0) {
        return Err("an encoding is not an invertible matrix".into());
    }
    let expected = order_formula(q);
    if codes.len() != expected {
        return Err(format!("{} elements, expected {expected}", codes.len()));
    }
    Ok(codes)
}

/// `|GL_3(GF(q))| = (q^3 - 1)(q^3 - q)(q^3 - q^2)`.
pub fn order_formula(q: u8) -> usize {
    let q = q as usize;
    let q3 = q * q * q;
    (q3 - 1) * (q3 - q) * (q3 - q * q)
}

/// Membership table and sorted list of a conjugate set.
#[derive(Clone, Debug)]
pub struct ConjugateSet {
    member: Vec<bool>,
    list: Vec<u32>,
}

impl ConjugateSet {
    pub fn contains(&self, idx: usize) -> bool {
        self.member[idx]
    }

    pub fn len(&self) -> usize {
        self.list.len()
    }

    pub fn is_empty(&self) -> bool {
        self.list.is_empty()
    }

    pub fn indices(&self) -> &[u32] {
        &self.list
    }
}

/// Minimal `m <= max_len` with `target` a product of `m` elements of `S_1`.
pub fn min_length_in(table: &GroupTable, s1: &ConjugateSet, target: usize, max_len: usize) -> Option<usize> {
    if target == 0 {
        return Some(0);
    }
    if max_len >= 1 && s1.contains(target) {
        return Some(1);
    }
    // S_1 is closed under inverses: target = s t with s, t in S_1 iff
    // s^-1 target lies in S_1 for some s in S_1
    if max_len >= 2 && s1.indices().iter().any(|&s| s1.contains(table.mul(table.inverse(s as usize), target))) {
        return Some(2);
    }
    // layered closure L_m = L_(m-1) S_1
    let mut layer = s1.member.clone();
    for m in 2..=max_len {
        let mut next = vec![false; table.len()];
        for (r, _) in layer.iter().enumerate().filter(|(_, &b)| b) {
            for &s in s1.indices() {
                next[table.mul(r, s as usize)] = true;
            }
        }
        if next[target] {
            return Some(m);
        }
        if next == layer {
            return None;
        }
        layer = next;
    }
    None
}

/// Minimal number of `E_3`-conjugates of `sigma^(+-1)` whose product is
/// `target`, or `None` beyond `max_len`.
pub fn min_conjugate_length(table: &GroupTable, sigma: usize, target: usize, max_len: usize) -> Option<usize> {
    min_length_in(table, &table.conjugate_set(sigma), target, max_len)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Witness {
    pub index: usize,
    pub matrix: Vec<Vec<u8>>,
}

/// Minimal lengths for the targets `t_kl(sigma_ij)`, `i != j`, `k != l`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BoundReport {
    pub n: usize,
    pub q: u8,
    pub group_order: usize,
    pub special_order: usize,
    /// Examined elements (indices into the table).
    pub sigmas: Vec<usize>,
    /// Per examined element, the largest minimal length over its targets;
    /// `None` if some target needs more than `max_len` conjugates.
    pub per_sigma: Vec<Option<u8>>,
    pub optimum: Option<u8>,
    pub witness: Option<Witness>,
    /// Number of examined elements per largest minimal length.
    pub sigma_histogram: BTreeMap<String, usize>,
    /// Number of `(sigma, target)` pairs per minimal length.
    pub target_histogram: BTreeMap<String, usize>,
    pub max_len: usize,
}

fn bucket(v: Option<u8>) -> String {
    v.map_or_else(|| "unreachable".to_string(), |m| m.to_string())
}

struct SigmaOutcome {
    worst: Option<u8>,
    per_target: Vec<Option<u8>>,
}

/// Per-`sigma` evaluation. Targets are transvections, so `s^-1 t` is looked up
/// through precomputed right-multiplication tables.
struct Evaluator<'a> {
    table: &'a GroupTable,
    /// `t_kl(x)` for `x != 0`, keyed by `(k, l, x)`
    transvections: BTreeMap<(usize, usize, u8), usize>,
    /// for each transvection index, `idx -> idx * t`
    right_mul: BTreeMap<usize, Vec<u32>>,
    max_len: usize,
}

impl<'a> Evaluator<'a> {
    fn new(table: &'a GroupTable, max_len: usize) -> Evaluator<'a> {
        let mut transvections = BTreeMap::new();
        let mut right_mul = BTreeMap::new();
        for k in 0..3 {
            for l in (0..3).filter(|&l| l != k) {
                for x in 1..table.q {
                    let t = table.transvection(k, l, x);
                    transvections.insert((k, l, x), t);
                    right_mul.insert(t, (0..table.len()).map(|g| table.mul(g, t) as u32).collect());
                }
            }
        }
        Evaluator {
            table,
            transvections,
            right_mul,
            max_len,
        }
    }

    fn target_length(&self, s1: &ConjugateSet, target: usize) -> Option<u8> {
        if target == 0 {
            return Some(0);
        }
        if s1.contains(target) {
            return Some(1);
        }
        // s^-1 t in S_1 for s in S_1  <=>  s t in S_1 for s in S_1
        let rm = &self.right_mul[&target];
        if self.max_len >= 2 && s1.indices().iter().any(|&s| s1.contains(rm[s as usize] as usize)) {
            return Some(2);
        }
        min_length_in(self.table, s1, target, self.max_len).map(|m| m as u8)
    }

    fn evaluate(&self, sigma: usize) -> SigmaOutcome {
        let s1 = self.table.conjugate_set(sigma);
        let m = self.table.element(sigma);
        let mut cache: BTreeMap<usize, Option<u8>> = BTreeMap::new();
        let mut per_target = Vec::with_capacity(36);
        for i in 0..3 {
            for j in (0..3).filter(|&j| j != i) {
                let x = m[3 * i + j];
                for k in 0..3 {
                    for l in (0..3).filter(|&l| l != k) {
                        let target = if x == 0 { 0 } else { self.transvections[&(k, l, x)] };
                        let len = *cache.entry(target).or_insert_with(|| self.target_length(&s1, target));
                        per_target.push(len);
                    }
                }
            }
        }
        let worst = per_target.iter().try_fold(0u8, |acc, v| v.map(|v| acc.max(v)));
        SigmaOutcome { worst, per_target }
    }
}

/// [`optimal_rdu_bound`] restricted to the elements `sigmas`.
pub fn bound_over(table: &GroupTable, sigmas: &[usize], max_len: usize, exec: Execution) -> BoundReport {
    let eval = Evaluator::new(table, max_len);
    let outcomes = exec.map(sigmas, |&s| eval.evaluate(s));
    let mut sigma_histogram = BTreeMap::new();
    let mut target_histogram = BTreeMap::new();
    let mut per_sigma = Vec::with_capacity(sigmas.len());
    for o in &outcomes {
        *sigma_histogram.entry(bucket(o.worst)).or_insert(0) += 1;
        for t in &o.per_target {
            *target_histogram.entry(bucket(*t)).or_insert(0) += 1;
        }
        per_sigma.push(o.worst);
    }
    // unreachable dominates every length; the first element attaining the
    // maximum is the witness
    let rank = |v: &Option<u8>| v.map_or(u16::MAX, u16::from);
    let best = per_sigma
        .iter()
        .enumerate()
        .fold(None::<(usize, Option<u8>)>, |acc, (pos, v)| match acc {
            Some((_, w)) if rank(&w) >= rank(v) => acc,
            _ => Some((pos, *v)),
        });
    let (optimum, witness) = match best {
        Some((pos, v)) => (
            v,
            Some(Witness {
                index: sigmas[pos],
                matrix: table.element(sigmas[pos]).chunks(3).map(<[u8]>::to_vec).collect(),
            }),
        ),
        None => (Some(0), None),
    };
    BoundReport {
        n: 3,
        q: table.q,
        group_order: table.len(),
        special_order: table.special_indices().len(),
        sigmas: sigmas.to_vec(),
        per_sigma,
        optimum,
        witness,
        sigma_histogram,
        target_histogram,
        max_len,
    }
}

/// The optimal bound over all of `GL_3(GF(q))`.
pub fn optimal_rdu_bound(table: &GroupTable, exec: Execution) -> BoundReport {
    let all: Vec<usize> = (0..table.len()).collect();
    bound_over(table, &all, DEFAULT_MAX_LEN, exec)
}

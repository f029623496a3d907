//! Capability oracles: right inverses, von Neumann regularity witnesses,
//! property-(1) witnesses, unimodular rows, stable-range reduction and
//! Euclidean reduction.
//!
//! Every oracle is deterministic. Where a witness is not unique it is the first
//! hit in the canonical enumeration order of [`Ring::elements`].

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::{big_is_unit, gf, Ring, RingElement, RingError, RingSpec, PROPERTY_ONE_LIMIT};
use crate::matgroup::Word;

/// Largest candidate space `sr_reduce` will exhaust for a finite ring.
const SR_SEARCH_LIMIT: u128 = 1 << 20;

/// Output of [`Ring::sr_reduce`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SrReduction {
    /// Correction coefficients `x_1..x_p`.
    pub xs: Vec<RingElement>,
    /// The shortened row `(u_i + u_{p+1} x_i)`.
    pub reduced: Vec<RingElement>,
    /// Column `v` with `reduced . v = 1`.
    pub witness: Vec<RingElement>,
}

fn residue(x: &RingElement) -> u64 {
    match x {
        RingElement::Residue(r) => *r,
        other => panic!("expected a residue, got {other:?}"),
    }
}

fn int(x: &RingElement) -> &BigInt {
    match x {
        RingElement::Int(v) => v,
        other => panic!("expected an integer, got {other:?}"),
    }
}

/// Bezout coefficients for a list of integers: returns `(g, c)` with
/// `sum v_i c_i = g = gcd(v)` and `g >= 0`.
fn bezout(values: &[BigInt]) -> (BigInt, Vec<BigInt>) {
    let mut g = BigInt::zero();
    let mut coeffs: Vec<BigInt> = Vec::with_capacity(values.len());
    for v in values {
        let e = g.extended_gcd(v);
        for c in coeffs.iter_mut() {
            *c *= &e.x;
        }
        coeffs.push(e.y);
        g = e.gcd;
    }
    if g.is_negative() {
        g = -g;
        for c in coeffs.iter_mut() {
            *c = -c.clone();
        }
    }
    (g, coeffs)
}

/// Largest divisor of `a` coprime to `b` (`a != 0`).
fn coprime_part(a: &BigInt, b: &BigInt) -> BigInt {
    let mut t = a.abs();
    let mut g = t.gcd(b);
    while !g.is_one() {
        t /= &g;
        g = t.gcd(&g);
    }
    t
}

impl Ring {
    fn capability(&self, what: &str) -> RingError {
        RingError::CapabilityMissing {
            ring: self.to_string(),
            capability: what.to_string(),
        }
    }

    /// Some `z` with `x z = 1`, or `None`.
    ///
    /// Every ring of the catalogue is Dedekind-finite, so a right inverse is
    /// two-sided and unique; it is computed directly rather than by search.
    pub fn right_inverse(&self, x: &RingElement) -> Option<RingElement> {
        match self.spec() {
            RingSpec::Integers => big_is_unit(int(x)).then(|| x.clone()),
            RingSpec::IntegersMod(m) => {
                let e = (residue(x) as i128).extended_gcd(&(*m as i128));
                e.gcd
                    .is_one()
                    .then(|| RingElement::Residue(e.x.rem_euclid(*m as i128) as u64))
            }
            RingSpec::Field(q) => gf::field_inv(residue(x), *q).map(RingElement::Residue),
            RingSpec::MatrixRing { k, q } => match x {
                RingElement::Matrix(e) => gf::inverse(*q, *k, e).map(RingElement::Matrix),
                _ => None,
            },
            RingSpec::Product(_) => match x {
                RingElement::Tuple(parts) => self
                    .components()
                    .iter()
                    .zip(parts)
                    .map(|(c, p)| c.right_inverse(p))
                    .collect::<Option<Vec<_>>>()
                    .map(RingElement::Tuple),
                _ => None,
            },
        }
    }

    pub fn is_right_invertible(&self, x: &RingElement) -> bool {
        self.right_inverse(x).is_some()
    }

    /// Some `y` with `x y x = x`.
    pub fn vnr_witness(&self, x: &RingElement) -> Result<RingElement, RingError> {
        if !self.is_vn_regular() {
            return Err(self.capability("von Neumann regular"));
        }
        Ok(match (self.spec(), x) {
            (RingSpec::Field(_), _) => self.right_inverse(x).unwrap_or_else(|| self.zero()),
            (RingSpec::MatrixRing { k, q }, RingElement::Matrix(e)) => match self.elements() {
                Some(elems) if elems.len() <= 4096 => elems
                    .iter()
                    .find(|y| self.mul(&self.mul(x, y), x) == *x)
                    .cloned()
                    .expect("matrix rings over fields are regular"),
                _ => RingElement::Matrix(gf::pseudo_inverse(*q, *k, *k, e).0),
            },
            (RingSpec::Product(_), RingElement::Tuple(parts)) => RingElement::Tuple(
                self.components()
                    .iter()
                    .zip(parts)
                    .map(|(c, p)| c.vnr_witness(p))
                    .collect::<Result<Vec<_>, _>>()?,
            ),
            _ => return Err(self.capability("von Neumann regular")),
        })
    }

    /// A right invertible `y` such that `1 + x y z` is right invertible.
    ///
    /// Candidates are tried as `1` first, then in canonical order.
    pub fn banach_unit_witness(
        &self,
        x: &RingElement,
        z: &RingElement,
    ) -> Result<RingElement, RingError> {
        let elems = self
            .elements()
            .ok_or_else(|| self.capability("finite enumerable ring for property (1)"))?;
        let one = self.one();
        std::iter::once(&one)
            .chain(elems.iter().filter(|e| **e != one))
            .find(|y| {
                self.is_right_invertible(y)
                    && self.is_right_invertible(&self.add(&one, &self.product_of([x, *y, z])))
            })
            .cloned()
            .ok_or_else(|| RingError::NoWitness {
                ring: self.to_string(),
                x: x.to_string(),
                z: z.to_string(),
            })
    }

    /// Whether every pair `(x, z)` admits a [`Ring::banach_unit_witness`].
    /// Certified exhaustively once per ring; rings larger than
    /// [`PROPERTY_ONE_LIMIT`] are reported as not certified.
    pub fn has_property_one(&self) -> bool {
        *self.0.property_one.get_or_init(|| {
            let Some(order) = self.order() else {
                return false;
            };
            if order > PROPERTY_ONE_LIMIT {
                return false;
            }
            let elems = self.elements().expect("small ring is enumerable");
            let one = self.one();
            let units: Vec<&RingElement> = std::iter::once(&one)
                .chain(elems.iter().filter(|e| **e != one && self.is_right_invertible(e)))
                .collect();
            elems.iter().all(|x| {
                elems.iter().all(|z| {
                    units.iter().any(|y| {
                        self.is_right_invertible(&self.add(&one, &self.product_of([x, *y, z])))
                    })
                })
            })
        })
    }

    /// A column `v` with `row . v = 1`, or `None` if the row is not unimodular.
    pub fn unimodular_witness(&self, row: &[RingElement]) -> Option<Vec<RingElement>> {
        match self.spec() {
            RingSpec::Integers => {
                let values: Vec<BigInt> = row.iter().map(|x| int(x).clone()).collect();
                let (g, coeffs) = bezout(&values);
                g.is_one()
                    .then(|| coeffs.into_iter().map(RingElement::Int).collect())
            }
            RingSpec::IntegersMod(m) => {
                let mut values: Vec<BigInt> = row.iter().map(|x| BigInt::from(residue(x))).collect();
                values.push(BigInt::from(*m));
                let (g, coeffs) = bezout(&values);
                g.is_one().then(|| {
                    coeffs[..row.len()]
                        .iter()
                        .map(|c| self.from_bigint(c))
                        .collect()
                })
            }
            RingSpec::Field(_) => {
                let pos = row.iter().position(|x| !self.is_zero(x))?;
                let mut v = vec![self.zero(); row.len()];
                v[pos] = self.right_inverse(&row[pos])?;
                Some(v)
            }
            RingSpec::MatrixRing { k, q } => {
                let (k, q) = (*k, *q);
                let p = row.len();
                let cols = k * p;
                let mut wide = vec![0u64; k * cols];
                for (t, x) in row.iter().enumerate() {
                    let RingElement::Matrix(e) = x else {
                        return None;
                    };
                    for r in 0..k {
                        for c in 0..k {
                            wide[r * cols + t * k + c] = e[r * k + c];
                        }
                    }
                }
                let (g, rank) = gf::pseudo_inverse(q, k, cols, &wide);
                (rank == k).then(|| {
                    (0..p)
                        .map(|t| RingElement::Matrix(g[t * k * k..(t + 1) * k * k].to_vec()))
                        .collect()
                })
            }
            RingSpec::Product(_) => {
                let per_comp = self
                    .components()
                    .iter()
                    .enumerate()
                    .map(|(idx, comp)| {
                        let proj: Vec<RingElement> = row
                            .iter()
                            .map(|x| match x {
                                RingElement::Tuple(parts) => parts[idx].clone(),
                                other => panic!("expected a tuple, got {other:?}"),
                            })
                            .collect();
                        comp.unimodular_witness(&proj)
                    })
                    .collect::<Option<Vec<_>>>()?;
                Some(
                    (0..row.len())
                        .map(|t| RingElement::Tuple(per_comp.iter().map(|v| v[t].clone()).collect()))
                        .collect(),
                )
            }
        }
    }

    /// Shortens the unimodular row `(u_1, .., u_{p+1})` to the unimodular row
    /// `(u_1 + u_{p+1} x_1, .., u_p + u_{p+1} x_p)`. Requires `p >= sr(R)`.
    ///
    /// A supplied `witness` must satisfy `row . witness = 1`; otherwise one is
    /// computed.
    pub fn sr_reduce(
        &self,
        row: &[RingElement],
        witness: Option<&[RingElement]>,
    ) -> Result<SrReduction, RingError> {
        let sr = self
            .stable_rank()
            .ok_or_else(|| self.capability("known stable rank"))?;
        if row.len() < 2 {
            return Err(RingError::Precondition("row needs at least two entries".into()));
        }
        let p = row.len() - 1;
        if p < sr {
            return Err(RingError::Precondition(format!(
                "cannot shorten to length {p} below the stable rank {sr}"
            )));
        }
        match witness {
            Some(v) => {
                if v.len() != row.len() || !self.is_one(&self.dot(row, v)) {
                    return Err(RingError::NotUnimodular);
                }
            }
            None => {
                self.unimodular_witness(row).ok_or(RingError::NotUnimodular)?;
            }
        }
        let last = &row[p];
        let apply = |xs: &[RingElement]| -> Vec<RingElement> {
            row[..p]
                .iter()
                .zip(xs)
                .map(|(u, x)| self.add(u, &self.mul(last, x)))
                .collect()
        };
        let finish = |xs: Vec<RingElement>| -> Option<SrReduction> {
            let reduced = apply(&xs);
            let witness = self.unimodular_witness(&reduced)?;
            Some(SrReduction { xs, reduced, witness })
        };
        let zeros = vec![self.zero(); p];
        if let Some(done) = finish(zeros.clone()) {
            return Ok(done);
        }
        match self.spec() {
            RingSpec::Integers => {
                // gcd(u_1..u_p, c) = 1 with c = u_{p+1}. Make the first entry a
                // nonzero a; then adding c*t to u_2, where t is the largest
                // divisor of a coprime to gcd(u_2..u_p), leaves no prime of a
                // dividing all of the remaining entries.
                let c = int(last);
                let mut xs = zeros;
                let mut a = int(&row[0]).clone();
                if a.is_zero() {
                    xs[0] = RingElement::Int(BigInt::one());
                    a = c.clone();
                }
                let rest: Vec<BigInt> = row[1..p].iter().map(|x| int(x).clone()).collect();
                let g = rest.iter().fold(BigInt::zero(), |acc, v| acc.gcd(v));
                xs[1] = RingElement::Int(coprime_part(&a, &g));
                finish(xs).ok_or_else(|| {
                    RingError::Precondition("integer stable-range reduction failed".into())
                })
            }
            _ => {
                let elems = self
                    .elements()
                    .ok_or_else(|| self.capability("enumerable ring for stable-range search"))?;
                let size = (elems.len() as u128).checked_pow(p as u32).unwrap_or(u128::MAX);
                if size > SR_SEARCH_LIMIT {
                    return Err(RingError::TooLarge { size });
                }
                let mut counters = vec![0usize; p];
                loop {
                    let xs: Vec<RingElement> = counters.iter().map(|&c| elems[c].clone()).collect();
                    if let Some(done) = finish(xs) {
                        return Ok(done);
                    }
                    // increment, last coordinate fastest
                    let mut pos = p;
                    loop {
                        if pos == 0 {
                            return Err(RingError::Precondition(
                                "declared stable rank does not hold".into(),
                            ));
                        }
                        pos -= 1;
                        counters[pos] += 1;
                        if counters[pos] < elems.len() {
                            break;
                        }
                        counters[pos] = 0;
                    }
                }
            }
        }
    }

    /// An elementary word `w` over `E_m` (`m = row.len()`) such that the last
    /// entry of `row . eval(w)` is zero. With `strong`, additionally
    /// `eval(w)_{11} = 1` (fields only).
    pub fn euclid_reduce(&self, row: &[RingElement], strong: bool) -> Result<Word, RingError> {
        let m = row.len();
        if m < 2 {
            return Err(RingError::Precondition("Euclidean reduction needs m >= 2".into()));
        }
        let mut word = Word::new(self.clone(), m);
        let last = m - 1;
        if self.is_zero(&row[last]) {
            return Ok(word);
        }
        let push = |w: &mut Word, i: usize, j: usize, x: RingElement| {
            w.push(i, j, x).expect("indices are in range");
        };
        match self.spec() {
            RingSpec::Field(_) => {
                let vm = &row[last];
                let coef = |vj: &RingElement| {
                    let inv = self.right_inverse(vj).expect("nonzero field element");
                    self.neg(&self.mul(&inv, vm))
                };
                if let Some(j) = (1..last).find(|&j| !self.is_zero(&row[j])) {
                    push(&mut word, j, last, coef(&row[j]));
                } else if !self.is_zero(&row[0]) {
                    push(&mut word, 0, last, coef(&row[0]));
                } else if m >= 3 {
                    word.extend(&Word::perm(self.clone(), m, 1, last));
                } else {
                    // (0, v) with m = 2: no word with unit corner moves v left
                    // without touching the first column's diagonal entry.
                    if strong {
                        return Err(RingError::Precondition(
                            "strong reduction of (0, v) needs m >= 3".into(),
                        ));
                    }
                    push(&mut word, last, 0, self.one());
                    push(&mut word, 0, last, self.neg(&self.one()));
                }
                Ok(word)
            }
            RingSpec::Integers if !strong => {
                let mut a = int(&row[last - 1]).clone();
                let mut b = int(&row[last]).clone();
                while !a.is_zero() && !b.is_zero() {
                    if a.abs() <= b.abs() {
                        let q = &b / &a;
                        b -= &q * &a;
                        push(&mut word, last - 1, last, RingElement::Int(-q));
                    } else {
                        let q = &a / &b;
                        a -= &q * &b;
                        push(&mut word, last, last - 1, RingElement::Int(-q));
                    }
                }
                if !b.is_zero() {
                    push(&mut word, last, last - 1, self.one());
                    push(&mut word, last - 1, last, self.neg(&self.one()));
                }
                Ok(word)
            }
            _ if strong => Err(self.capability("strong Euclidean algorithm")),
            _ => Err(self.capability("Euclidean algorithm")),
        }
    }

    /// `sum_i u_i v_i`.
    pub fn dot(&self, u: &[RingElement], v: &[RingElement]) -> RingElement {
        u.iter()
            .zip(v)
            .fold(self.zero(), |acc, (a, b)| self.add(&acc, &self.mul(a, b)))
    }
}

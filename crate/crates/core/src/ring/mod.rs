//! Exact arithmetic over a closed catalogue of rings.
//!
//! The catalogue is: the integers, residue rings `Z/m`, prime fields `GF(q)`,
//! full matrix rings `M_k(GF(q))` and finite direct products of these. A
//! [`Ring`] is a cheap handle (an `Arc`) around a [`RingSpec`]; elements are
//! plain [`RingElement`] values in canonical form, so equality of values is
//! equality of representations.
//!
//! Elements do not carry their ring. The infallible operations (`add`, `mul`,
//! ...) expect operands that belong to the ring and panic otherwise; the
//! checked entry point is [`Ring::arith`], and all parsing goes through
//! [`Ring::contains`].

pub(crate) mod gf;
mod oracles;
mod parse;

use std::fmt;
use std::sync::{Arc, OnceLock};

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rand::Rng;
use thiserror::Error;

pub use oracles::SrReduction;

/// Largest finite ring whose elements are materialised for enumeration.
pub const ENUMERATION_LIMIT: u128 = 1 << 16;

/// Largest finite ring for which property (1) is certified exhaustively.
pub const PROPERTY_ONE_LIMIT: u128 = 256;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum RingError {
    #[error("invalid ring spec `{spec}`: {reason}")]
    InvalidSpec { spec: String, reason: String },
    #[error("invalid element literal `{literal}` for {ring}: {reason}")]
    InvalidLiteral {
        literal: String,
        ring: String,
        reason: String,
    },
    #[error("operand {element:?} does not belong to {ring}")]
    RingMismatch { ring: String, element: String },
    #[error("{ring} lacks capability: {capability}")]
    CapabilityMissing { ring: String, capability: String },
    #[error("{ring} has no property-(1) witness for x = {x}, z = {z}")]
    NoWitness { ring: String, x: String, z: String },
    #[error("row is not unimodular")]
    NotUnimodular,
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("search space of {size} candidates exceeds the enumeration limit")]
    TooLarge { size: u128 },
}

/// Which ring a [`Ring`] handle stands for.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum RingSpec {
    Integers,
    IntegersMod(u64),
    /// Prime field of the given order.
    Field(u64),
    /// `k x k` matrices over the prime field of order `q`.
    MatrixRing { k: usize, q: u64 },
    /// Direct product; components are never products themselves.
    Product(Vec<RingSpec>),
}

/// Canonical value of a ring element.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum RingElement {
    Int(BigInt),
    /// Residue in `[0, m)`, used for `Z/m` and `GF(q)`.
    Residue(u64),
    /// Row-major `k x k` entries in `[0, q)`.
    Matrix(Vec<u64>),
    Tuple(Vec<RingElement>),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ArithOp {
    Add,
    Mul,
    Neg,
}

/// Shared handle to a ring from the catalogue.
#[derive(Clone)]
pub struct Ring(Arc<RingInner>);

struct RingInner {
    spec: RingSpec,
    components: Vec<Ring>,
    elements: OnceLock<Option<Vec<RingElement>>>,
    property_one: OnceLock<bool>,
}

impl PartialEq for Ring {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0) || self.0.spec == other.0.spec
    }
}

impl Eq for Ring {}

impl fmt::Debug for Ring {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Ring({})", self.0.spec)
    }
}

impl fmt::Display for Ring {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.spec.fmt(f)
    }
}

impl fmt::Display for RingSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RingSpec::Integers => write!(f, "Z"),
            RingSpec::IntegersMod(m) => write!(f, "Z/{m}"),
            RingSpec::Field(q) => write!(f, "GF({q})"),
            RingSpec::MatrixRing { k, q } => write!(f, "M{k}(GF({q}))"),
            RingSpec::Product(parts) => {
                for (idx, part) in parts.iter().enumerate() {
                    if idx > 0 {
                        write!(f, "x")?;
                    }
                    part.fmt(f)?;
                }
                Ok(())
            }
        }
    }
}

pub(crate) fn is_prime(q: u64) -> bool {
    if q < 2 {
        return false;
    }
    let mut d = 2u64;
    while d.saturating_mul(d) <= q {
        if q % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

fn invalid(spec: &RingSpec, reason: impl Into<String>) -> RingError {
    RingError::InvalidSpec {
        spec: spec.to_string(),
        reason: reason.into(),
    }
}

impl RingSpec {
    fn validate(&self) -> Result<(), RingError> {
        match self {
            RingSpec::Integers => Ok(()),
            RingSpec::IntegersMod(m) if *m < 2 => Err(invalid(self, "modulus must be at least 2")),
            RingSpec::IntegersMod(m) if *m > u32::MAX as u64 => {
                Err(invalid(self, "modulus must fit in 32 bits"))
            }
            RingSpec::IntegersMod(_) => Ok(()),
            RingSpec::Field(q) | RingSpec::MatrixRing { q, .. } if !is_prime(*q) => {
                Err(invalid(self, format!("{q} is not prime")))
            }
            RingSpec::Field(q) | RingSpec::MatrixRing { q, .. } if *q > u32::MAX as u64 => {
                Err(invalid(self, "field order must fit in 32 bits"))
            }
            RingSpec::MatrixRing { k: 0, .. } => Err(invalid(self, "matrix size must be at least 1")),
            RingSpec::Field(_) | RingSpec::MatrixRing { .. } => Ok(()),
            RingSpec::Product(parts) => {
                if parts.len() < 2 {
                    return Err(invalid(self, "a product needs at least two factors"));
                }
                for part in parts {
                    if matches!(part, RingSpec::Product(_)) {
                        return Err(invalid(self, "nested products must be flattened"));
                    }
                    if matches!(part, RingSpec::Integers) {
                        return Err(invalid(self, "products must have finite factors"));
                    }
                    part.validate()?;
                }
                Ok(())
            }
        }
    }
}

impl Ring {
    pub fn new(spec: RingSpec) -> Result<Ring, RingError> {
        let spec = match spec {
            RingSpec::Product(parts) => {
                let mut flat = Vec::new();
                for part in parts {
                    match part {
                        RingSpec::Product(inner) => flat.extend(inner),
                        other => flat.push(other),
                    }
                }
                RingSpec::Product(flat)
            }
            other => other,
        };
        spec.validate()?;
        let components = match &spec {
            RingSpec::Product(parts) => parts
                .iter()
                .map(|p| Ring::new(p.clone()))
                .collect::<Result<Vec<_>, _>>()?,
            _ => Vec::new(),
        };
        Ok(Ring(Arc::new(RingInner {
            spec,
            components,
            elements: OnceLock::new(),
            property_one: OnceLock::new(),
        })))
    }

    pub fn integers() -> Ring {
        Ring::new(RingSpec::Integers).expect("Z is valid")
    }

    pub fn integers_mod(m: u64) -> Result<Ring, RingError> {
        Ring::new(RingSpec::IntegersMod(m))
    }

    pub fn field(q: u64) -> Result<Ring, RingError> {
        Ring::new(RingSpec::Field(q))
    }

    pub fn matrix_ring(k: usize, q: u64) -> Result<Ring, RingError> {
        Ring::new(RingSpec::MatrixRing { k, q })
    }

    pub fn product(parts: Vec<RingSpec>) -> Result<Ring, RingError> {
        Ring::new(RingSpec::Product(parts))
    }

    pub fn spec(&self) -> &RingSpec {
        &self.0.spec
    }

    /// Factor rings of a direct product (empty otherwise).
    pub fn components(&self) -> &[Ring] {
        &self.0.components
    }

    pub fn is_commutative(&self) -> bool {
        match self.spec() {
            RingSpec::MatrixRing { k, .. } => *k == 1,
            RingSpec::Product(_) => self.components().iter().all(Ring::is_commutative),
            _ => true,
        }
    }

    pub fn is_vn_regular(&self) -> bool {
        match self.spec() {
            RingSpec::Field(_) | RingSpec::MatrixRing { .. } => true,
            RingSpec::Product(_) => self.components().iter().all(Ring::is_vn_regular),
            _ => false,
        }
    }

    pub fn is_finite(&self) -> bool {
        !matches!(self.spec(), RingSpec::Integers)
    }

    pub fn is_field(&self) -> bool {
        matches!(self.spec(), RingSpec::Field(_))
    }

    /// Number of elements, `None` for the integers or on overflow.
    pub fn order(&self) -> Option<u128> {
        match self.spec() {
            RingSpec::Integers => None,
            RingSpec::IntegersMod(m) | RingSpec::Field(m) => Some(*m as u128),
            RingSpec::MatrixRing { k, q } => {
                let mut acc: u128 = 1;
                for _ in 0..k * k {
                    acc = acc.checked_mul(*q as u128)?;
                }
                Some(acc)
            }
            RingSpec::Product(_) => self
                .components()
                .iter()
                .try_fold(1u128, |acc, c| acc.checked_mul(c.order()?)),
        }
    }

    /// Declared stable rank: 2 for the integers, 1 for every finite ring of the
    /// catalogue (finite rings are semilocal).
    pub fn stable_rank(&self) -> Option<usize> {
        match self.spec() {
            RingSpec::Integers => Some(2),
            _ => Some(1),
        }
    }

    pub fn zero(&self) -> RingElement {
        match self.spec() {
            RingSpec::Integers => RingElement::Int(BigInt::zero()),
            RingSpec::IntegersMod(_) | RingSpec::Field(_) => RingElement::Residue(0),
            RingSpec::MatrixRing { k, .. } => RingElement::Matrix(vec![0; k * k]),
            RingSpec::Product(_) => {
                RingElement::Tuple(self.components().iter().map(Ring::zero).collect())
            }
        }
    }

    pub fn one(&self) -> RingElement {
        self.from_i64(1)
    }

    pub fn from_i64(&self, v: i64) -> RingElement {
        self.from_bigint(&BigInt::from(v))
    }

    /// Image of an integer under the unique ring map from `Z`.
    pub fn from_bigint(&self, v: &BigInt) -> RingElement {
        match self.spec() {
            RingSpec::Integers => RingElement::Int(v.clone()),
            RingSpec::IntegersMod(m) | RingSpec::Field(m) => RingElement::Residue(reduce_big(v, *m)),
            RingSpec::MatrixRing { k, q } => {
                let d = reduce_big(v, *q);
                let mut entries = vec![0; k * k];
                for t in 0..*k {
                    entries[t * k + t] = d;
                }
                RingElement::Matrix(entries)
            }
            RingSpec::Product(_) => RingElement::Tuple(
                self.components().iter().map(|c| c.from_bigint(v)).collect(),
            ),
        }
    }

    /// Whether `x` is a canonical element of this ring.
    pub fn contains(&self, x: &RingElement) -> bool {
        match (self.spec(), x) {
            (RingSpec::Integers, RingElement::Int(_)) => true,
            (RingSpec::IntegersMod(m) | RingSpec::Field(m), RingElement::Residue(r)) => r < m,
            (RingSpec::MatrixRing { k, q }, RingElement::Matrix(e)) => {
                e.len() == k * k && e.iter().all(|v| v < q)
            }
            (RingSpec::Product(_), RingElement::Tuple(parts)) => {
                parts.len() == self.components().len()
                    && self.components().iter().zip(parts).all(|(c, p)| c.contains(p))
            }
            _ => false,
        }
    }

    pub fn check(&self, x: &RingElement) -> Result<(), RingError> {
        if self.contains(x) {
            Ok(())
        } else {
            Err(RingError::RingMismatch {
                ring: self.to_string(),
                element: format!("{x:?}"),
            })
        }
    }

    /// Checked arithmetic; `y` is ignored for negation.
    pub fn arith(
        &self,
        op: ArithOp,
        x: &RingElement,
        y: &RingElement,
    ) -> Result<RingElement, RingError> {
        self.check(x)?;
        if op != ArithOp::Neg {
            self.check(y)?;
        }
        Ok(match op {
            ArithOp::Add => self.add(x, y),
            ArithOp::Mul => self.mul(x, y),
            ArithOp::Neg => self.neg(x),
        })
    }

    pub fn add(&self, x: &RingElement, y: &RingElement) -> RingElement {
        use RingElement::*;
        match (self.spec(), x, y) {
            (RingSpec::Integers, Int(a), Int(b)) => Int(a + b),
            (RingSpec::IntegersMod(m) | RingSpec::Field(m), Residue(a), Residue(b)) => {
                Residue(((*a as u128 + *b as u128) % *m as u128) as u64)
            }
            (RingSpec::MatrixRing { q, .. }, Matrix(a), Matrix(b)) => {
                Matrix(a.iter().zip(b).map(|(s, t)| (s + t) % q).collect())
            }
            (RingSpec::Product(_), Tuple(a), Tuple(b)) => Tuple(
                self.components()
                    .iter()
                    .zip(a.iter().zip(b))
                    .map(|(c, (s, t))| c.add(s, t))
                    .collect(),
            ),
            _ => self.mismatch(x, y),
        }
    }

    pub fn neg(&self, x: &RingElement) -> RingElement {
        use RingElement::*;
        match (self.spec(), x) {
            (RingSpec::Integers, Int(a)) => Int(-a),
            (RingSpec::IntegersMod(m) | RingSpec::Field(m), Residue(a)) => {
                Residue(if *a == 0 { 0 } else { m - a })
            }
            (RingSpec::MatrixRing { q, .. }, Matrix(a)) => {
                Matrix(a.iter().map(|v| if *v == 0 { 0 } else { q - v }).collect())
            }
            (RingSpec::Product(_), Tuple(a)) => Tuple(
                self.components()
                    .iter()
                    .zip(a)
                    .map(|(c, s)| c.neg(s))
                    .collect(),
            ),
            _ => self.mismatch(x, x),
        }
    }

    pub fn sub(&self, x: &RingElement, y: &RingElement) -> RingElement {
        self.add(x, &self.neg(y))
    }

    pub fn mul(&self, x: &RingElement, y: &RingElement) -> RingElement {
        use RingElement::*;
        match (self.spec(), x, y) {
            (RingSpec::Integers, Int(a), Int(b)) => Int(a * b),
            (RingSpec::IntegersMod(m) | RingSpec::Field(m), Residue(a), Residue(b)) => {
                Residue(((*a as u128 * *b as u128) % *m as u128) as u64)
            }
            (RingSpec::MatrixRing { k, q }, Matrix(a), Matrix(b)) => Matrix(gf::mat_mul(*q, *k, *k, *k, a, b)),
            (RingSpec::Product(_), Tuple(a), Tuple(b)) => Tuple(
                self.components()
                    .iter()
                    .zip(a.iter().zip(b))
                    .map(|(c, (s, t))| c.mul(s, t))
                    .collect(),
            ),
            _ => self.mismatch(x, y),
        }
    }

    /// Product of a sequence, left to right.
    pub fn product_of<'a>(&self, factors: impl IntoIterator<Item = &'a RingElement>) -> RingElement {
        factors
            .into_iter()
            .fold(self.one(), |acc, f| self.mul(&acc, f))
    }

    pub fn is_zero(&self, x: &RingElement) -> bool {
        *x == self.zero()
    }

    pub fn is_one(&self, x: &RingElement) -> bool {
        *x == self.one()
    }

    /// Whether `x` commutes with every element of the ring.
    pub fn is_central(&self, x: &RingElement) -> bool {
        match (self.spec(), x) {
            (RingSpec::MatrixRing { k, .. }, RingElement::Matrix(e)) => (0..*k).all(|r| {
                (0..*k).all(|c| if r == c { e[r * k + c] == e[0] } else { e[r * k + c] == 0 })
            }),
            (RingSpec::Product(_), RingElement::Tuple(parts)) => self
                .components()
                .iter()
                .zip(parts)
                .all(|(c, p)| c.is_central(p)),
            _ => true,
        }
    }

    /// Elements in canonical enumeration order, when the ring is finite and
    /// small enough (see [`ENUMERATION_LIMIT`]).
    ///
    /// Order: `0, 1, ..., m-1` for residues; lexicographic by row-major entries
    /// for matrix rings; lexicographic by components (first component most
    /// significant) for products.
    pub fn elements(&self) -> Option<&[RingElement]> {
        self.0
            .elements
            .get_or_init(|| {
                let order = self.order()?;
                if order > ENUMERATION_LIMIT {
                    return None;
                }
                Some(self.enumerate(order as usize))
            })
            .as_deref()
    }

    fn enumerate(&self, order: usize) -> Vec<RingElement> {
        match self.spec() {
            RingSpec::IntegersMod(m) | RingSpec::Field(m) => {
                (0..*m).map(RingElement::Residue).collect()
            }
            RingSpec::MatrixRing { k, q } => (0..order as u64)
                .map(|code| {
                    let mut entries = vec![0; k * k];
                    let mut rest = code;
                    for slot in entries.iter_mut().rev() {
                        *slot = rest % q;
                        rest /= q;
                    }
                    RingElement::Matrix(entries)
                })
                .collect(),
            RingSpec::Product(_) => {
                let mut acc: Vec<Vec<RingElement>> = vec![Vec::new()];
                for comp in self.components() {
                    let elems = comp.elements().expect("factor of a small product is small");
                    acc = acc
                        .into_iter()
                        .flat_map(|prefix| {
                            elems.iter().map(move |e| {
                                let mut next = prefix.clone();
                                next.push(e.clone());
                                next
                            })
                        })
                        .collect();
                }
                acc.into_iter().map(RingElement::Tuple).collect()
            }
            RingSpec::Integers => unreachable!("Z is infinite"),
        }
    }

    /// Uniform element for finite rings; for `Z`, uniform in `[-bound, bound]`
    /// with `bound = 5`.
    pub fn random_element<R: Rng + ?Sized>(&self, rng: &mut R) -> RingElement {
        match self.spec() {
            RingSpec::Integers => RingElement::Int(BigInt::from(rng.gen_range(-5i64..=5))),
            RingSpec::IntegersMod(m) | RingSpec::Field(m) => RingElement::Residue(rng.gen_range(0..*m)),
            RingSpec::MatrixRing { k, q } => {
                RingElement::Matrix((0..k * k).map(|_| rng.gen_range(0..*q)).collect())
            }
            RingSpec::Product(_) => RingElement::Tuple(
                self.components()
                    .iter()
                    .map(|c| c.random_element(rng))
                    .collect(),
            ),
        }
    }

    /// Integer value of an element of `Z`, if it fits an `i64`.
    pub fn to_i64(&self, x: &RingElement) -> Option<i64> {
        match x {
            RingElement::Int(v) => v.to_i64(),
            RingElement::Residue(r) => i64::try_from(*r).ok(),
            _ => None,
        }
    }

    fn mismatch(&self, x: &RingElement, y: &RingElement) -> ! {
        panic!("operands {x:?}, {y:?} do not belong to {self}")
    }
}

fn reduce_big(v: &BigInt, m: u64) -> u64 {
    let modulus = BigInt::from(m);
    let mut r = v % &modulus;
    if r.is_negative() {
        r += &modulus;
    }
    r.to_u64().expect("residue fits u64")
}

pub(crate) fn big_is_unit(v: &BigInt) -> bool {
    v.abs().is_one()
}

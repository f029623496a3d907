//! Simultaneous reduction of pairs and its expansion into signed conjugate
//! products.
//!
//! A pair `(a, b)` is reduced by `g` to `([a^-1, g], [g, b])`. If `a b` is a
//! product of `m` conjugates of a base element, then so is each side of
//!
//! ```text
//! [a^-1, g] [g, b] = (ab)^(g^-1 a) ((ab)^-1)^a
//! ```
//!
//! with `2m` factors, which is what [`expand_conjugates`] builds symbolically.

use thiserror::Error;

use crate::matgroup::{GlElement, Matrix, Subset, Word};
use crate::ring::Ring;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ReductionError {
    #[error("dimension mismatch: {0} vs {1}")]
    DimensionMismatch(usize, usize),
    #[error("integrity check failed: {0}")]
    Integrity(String),
    #[error("shape precondition violated: {0}")]
    Shape(String),
}

/// Exponent of a conjugate factor.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    pub fn flip(self) -> Sign {
        match self {
            Sign::Plus => Sign::Minus,
            Sign::Minus => Sign::Plus,
        }
    }

    pub fn is_plus(self) -> bool {
        self == Sign::Plus
    }

    pub fn as_i8(self) -> i8 {
        match self {
            Sign::Plus => 1,
            Sign::Minus => -1,
        }
    }

    /// Product of two signs.
    pub fn times(self, other: Sign) -> Sign {
        if self == other {
            Sign::Plus
        } else {
            Sign::Minus
        }
    }
}

/// The factor `(base^sign)^eval(conj)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConjFactor {
    pub sign: Sign,
    pub conj: Word,
}

/// An ordered product of signed conjugates of a base element.
///
/// The base is not stored: the same product can be evaluated against any
/// element of the right dimension, which is how derived bases are lifted.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConjProduct {
    ring: Ring,
    n: usize,
    factors: Vec<ConjFactor>,
}

impl ConjProduct {
    pub fn empty(ring: &Ring, n: usize) -> ConjProduct {
        ConjProduct {
            ring: ring.clone(),
            n,
            factors: Vec::new(),
        }
    }

    /// The single factor `(base^sign)^eval(conj)`.
    pub fn single(sign: Sign, conj: Word) -> ConjProduct {
        ConjProduct {
            ring: conj.ring().clone(),
            n: conj.n(),
            factors: vec![ConjFactor { sign, conj }],
        }
    }

    /// The base itself.
    pub fn base(ring: &Ring, n: usize) -> ConjProduct {
        ConjProduct::single(Sign::Plus, Word::new(ring.clone(), n))
    }

    pub fn from_factors(ring: &Ring, n: usize, factors: Vec<ConjFactor>) -> Result<ConjProduct, ReductionError> {
        if let Some(f) = factors.iter().find(|f| f.conj.n() != n) {
            return Err(ReductionError::DimensionMismatch(n, f.conj.n()));
        }
        Ok(ConjProduct {
            ring: ring.clone(),
            n,
            factors,
        })
    }

    pub fn push(&mut self, sign: Sign, conj: Word) {
        assert_eq!(conj.n(), self.n, "conjugator dimension differs");
        self.factors.push(ConjFactor { sign, conj });
    }

    pub fn factors(&self) -> &[ConjFactor] {
        &self.factors
    }

    pub fn factors_mut(&mut self) -> &mut Vec<ConjFactor> {
        &mut self.factors
    }

    pub fn len(&self) -> usize {
        self.factors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.factors.is_empty()
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn ring(&self) -> &Ring {
        &self.ring
    }

    /// Multiplies out every conjugate `eval(c)^-1 base^eps eval(c)`.
    pub fn evaluate(&self, base: &GlElement) -> Matrix {
        let mut acc = Matrix::identity(&self.ring, self.n);
        for f in &self.factors {
            acc = acc.mul(&base.power(f.sign.is_plus()).conjugate_by(&f.conj));
        }
        acc
    }

    /// Reversed order with flipped signs.
    pub fn inverse(&self) -> ConjProduct {
        ConjProduct {
            ring: self.ring.clone(),
            n: self.n,
            factors: self
                .factors
                .iter()
                .rev()
                .map(|f| ConjFactor {
                    sign: f.sign.flip(),
                    conj: f.conj.clone(),
                })
                .collect(),
        }
    }

    /// The product conjugated by `w`: `w` is appended to every conjugator.
    pub fn conjugate_by(&self, w: &Word) -> ConjProduct {
        let mut out = self.clone();
        for f in &mut out.factors {
            f.conj.extend(w);
        }
        out
    }

    /// The same product over the base `base^w`, rewritten over `base`: `w` is
    /// prepended to every conjugator.
    pub fn prefix(&self, w: &Word) -> ConjProduct {
        let mut out = self.clone();
        for f in &mut out.factors {
            f.conj = w.then(&f.conj);
        }
        out
    }

    /// Every sign flipped; rewrites a product over `base^-1` over `base`.
    pub fn flip_signs(&self) -> ConjProduct {
        let mut out = self.clone();
        for f in &mut out.factors {
            f.sign = f.sign.flip();
        }
        out
    }

    pub fn extend(&mut self, other: &ConjProduct) {
        assert_eq!(self.n, other.n, "product dimensions differ");
        self.factors.extend(other.factors.iter().cloned());
    }

    pub fn then(&self, other: &ConjProduct) -> ConjProduct {
        let mut out = self.clone();
        out.extend(other);
        out
    }

    /// Lifts a product over a derived base `B` to a product over the original
    /// base, given `B` as a product `expr` over the original base.
    ///
    /// `B^c` becomes `expr` conjugated by `c`, and `(B^-1)^c` becomes the
    /// inverse of `expr` conjugated by `c`; the length is multiplied by
    /// `expr.len()`.
    pub fn substitute(&self, expr: &ConjProduct) -> ConjProduct {
        let inverse = expr.inverse();
        let mut out = ConjProduct::empty(&self.ring, self.n);
        for f in &self.factors {
            let body = if f.sign.is_plus() { expr } else { &inverse };
            out.extend(&body.conjugate_by(&f.conj));
        }
        out
    }
}

/// A pair of invertible matrices.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Pair {
    pub a: GlElement,
    pub b: GlElement,
}

impl Pair {
    pub fn new(a: GlElement, b: GlElement) -> Result<Pair, ReductionError> {
        if a.n() != b.n() {
            return Err(ReductionError::DimensionMismatch(a.n(), b.n()));
        }
        Ok(Pair { a, b })
    }

    pub fn product(&self) -> Matrix {
        self.a.mat().mul(self.b.mat())
    }
}

/// `[g, h] = g h g^-1 h^-1` on invertible elements.
fn commutator(g: &GlElement, h: &GlElement) -> GlElement {
    g.mul(h).mul(&g.inverse()).mul(&h.inverse())
}

/// `(a, b) -> ([a^-1, g], [g, b])`.
pub fn reduce_step(p: &Pair, g: &Word) -> Result<Pair, ReductionError> {
    if g.n() != p.a.n() {
        return Err(ReductionError::DimensionMismatch(p.a.n(), g.n()));
    }
    let gg = GlElement::from_word(g);
    Ok(Pair {
        a: commutator(&p.a.inverse(), &gg),
        b: commutator(&gg, &p.b),
    })
}

pub fn reduce_chain(p: &Pair, gs: &[Word]) -> Result<Pair, ReductionError> {
    gs.iter().try_fold(p.clone(), |acc, g| reduce_step(&acc, g))
}

/// Expands `initial` (a product over the base evaluating to `a_1 b_1`, with
/// `a_1 = eval(a1)`) along the chain `gs`.
///
/// Each step maps the factor list `F` to `(eps, c || g^-1 || a_k)` for `F`
/// followed by `(-eps, c || a_k)` for `F` reversed, and updates the word
/// `a_{k+1} = [a_k^-1, g_k]`. The result has `|initial| * 2^|gs|` factors and
/// evaluates to `a_{m+1} b_{m+1}`.
pub fn expand_conjugates(initial: &ConjProduct, a1: &Word, gs: &[Word]) -> ConjProduct {
    let mut factors = initial.clone();
    let mut a = a1.clone();
    for g in gs {
        let shift = g.inverse().then(&a);
        let mut next = ConjProduct::empty(initial.ring(), initial.n());
        for f in factors.factors() {
            next.push(f.sign, f.conj.then(&shift));
        }
        for f in factors.factors().iter().rev() {
            next.push(f.sign.flip(), f.conj.then(&a));
        }
        factors = next;
        a = Word::commutator(&a.inverse(), g);
    }
    factors
}

/// [`expand_conjugates`] with both ends checked against [`reduce_chain`]:
/// `initial` must evaluate to `a_1 b_1`, and the result to `a_{m+1} b_{m+1}`.
pub fn expand_checked(
    base: &GlElement,
    initial: &ConjProduct,
    a1: &Word,
    b1: &GlElement,
    gs: &[Word],
) -> Result<ConjProduct, ReductionError> {
    let pair = Pair::new(GlElement::from_word(a1), b1.clone())?;
    if initial.evaluate(base) != pair.product() {
        return Err(ReductionError::Integrity(
            "initial product does not evaluate to a_1 b_1".into(),
        ));
    }
    let out = expand_conjugates(initial, a1, gs);
    let end = reduce_chain(&pair, gs)?;
    if out.evaluate(base) != end.product() {
        return Err(ReductionError::Integrity(
            "expanded product differs from the reduced pair".into(),
        ));
    }
    Ok(out)
}

/// Which product of a word and the base [`split_commutator`] rewrites.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SplitShape {
    /// `[tau, sigma] = (sigma)^(tau^-1) sigma^-1`.
    Commutator,
    /// `tau (tau^-1 sigma^-1) = sigma^-1`.
    InverseProduct,
    /// `u^-1 u^(sigma tau) = (sigma^-1)^(tau u) sigma^tau` for `u = t_n1(y)`;
    /// valid because `tau` is built from generators `t_p1`, which commute
    /// with `u`.
    ThirdCase { u: Word },
}

/// Writes the designated product as at most two signed conjugates of the base.
pub fn split_commutator(t: &Word, shape: &SplitShape) -> Result<ConjProduct, ReductionError> {
    let ring = t.ring();
    let n = t.n();
    Ok(match shape {
        SplitShape::Commutator => {
            let mut p = ConjProduct::single(Sign::Plus, t.inverse());
            p.push(Sign::Minus, Word::new(ring.clone(), n));
            p
        }
        SplitShape::InverseProduct => ConjProduct::single(Sign::Minus, Word::new(ring.clone(), n)),
        SplitShape::ThirdCase { u } => {
            if !t.lies_in(Subset::EDoubleStar) || !u.lies_in(Subset::EDoubleStar) {
                return Err(ReductionError::Shape(
                    "third-case split needs tau and u built from t_p1 generators".into(),
                ));
            }
            let mut p = ConjProduct::single(Sign::Minus, t.then(u));
            p.push(Sign::Plus, t.clone());
            p
        }
    })
}

//! The three-case extraction and its corollaries.
//!
//! All functions here work over an arbitrary base `s` (not necessarily the
//! user's `sigma`); class constructions feed them derived bases and lift the
//! results with [`ConjProduct::substitute`].

use crate::matgroup::{route, GlElement, Subset, Word};
use crate::reduction::{expand_checked, split_commutator, ConjProduct, SplitShape};
use crate::ring::{Ring, RingElement};

use super::{certify, check_indices, FactorError, Factorization, Target, Theorem, WhoseEntry};

/// Normalisations of the relation witness `y * sum_p s_1p x_p = 0`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum CoreMode {
    /// `x_n = 0`, `y = 1`; extracts `a x_1 b`.
    I,
    /// `x_n = 1`, `y = 1`; extracts `a x_1 b`.
    II,
    /// `x_1 = 1`; extracts `a y b`.
    III,
}

impl CoreMode {
    pub fn tag(self) -> &'static str {
        match self {
            CoreMode::I => "i",
            CoreMode::II => "ii",
            CoreMode::III => "iii",
        }
    }

    pub fn from_tag(s: &str) -> Option<CoreMode> {
        match s {
            "i" => Some(CoreMode::I),
            "ii" => Some(CoreMode::II),
            "iii" => Some(CoreMode::III),
            _ => None,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum CorollaryVariant {
    /// `s_1n = 0`; extracts `a s'_1j b`.
    ZeroCorner,
    /// `s_11` right invertible; extracts `a s_1n b`.
    RightInvertibleCorner,
    /// `s_1n` idempotent; extracts `a s_1n b`.
    IdempotentCorner,
    /// Given `sum_{p<n} s_1p x_p + s_1n = 0`; extracts `a s'_1j b` with 16
    /// factors.
    Sixteen,
}

impl CorollaryVariant {
    pub fn tag(self) -> &'static str {
        match self {
            CorollaryVariant::ZeroCorner => "zero-corner",
            CorollaryVariant::RightInvertibleCorner => "right-invertible-corner",
            CorollaryVariant::IdempotentCorner => "idempotent-corner",
            CorollaryVariant::Sixteen => "sixteen",
        }
    }

    pub fn from_tag(s: &str) -> Option<CorollaryVariant> {
        [
            CorollaryVariant::ZeroCorner,
            CorollaryVariant::RightInvertibleCorner,
            CorollaryVariant::IdempotentCorner,
            CorollaryVariant::Sixteen,
        ]
        .into_iter()
        .find(|v| v.tag() == s)
    }

    pub fn bound(self) -> usize {
        match self {
            CorollaryVariant::Sixteen => 16,
            _ => 8,
        }
    }
}

/// `y` and `x_1..x_n` with `y * sum_p sigma_1p x_p = 0`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RelationWitness {
    pub y: RingElement,
    pub xs: Vec<RingElement>,
}

/// A product over some base evaluating to `t_kl(value)` at a fixed position.
pub(crate) struct Native {
    pub product: ConjProduct,
    pub k: usize,
    pub l: usize,
    pub value: RingElement,
}

/// A product over some base evaluating to `t_kl(value)` at the requested
/// position.
pub(crate) struct Placed {
    pub product: ConjProduct,
    pub value: RingElement,
}

impl Native {
    /// Conjugates by a permutation word moving `(self.k, self.l)` to `(k, l)`.
    pub fn place(self, k: usize, l: usize) -> Result<Placed, FactorError> {
        let ring = self.product.ring().clone();
        let (_, rho) = route(&ring, self.product.n(), k, l, self.k, self.l)?;
        Ok(Placed {
            product: self.product.conjugate_by(&rho),
            value: self.value,
        })
    }
}

impl Placed {
    pub fn then(mut self, other: Placed) -> Placed {
        let ring = self.product.ring().clone();
        self.product.extend(&other.product);
        self.value = ring.add(&self.value, &other.value);
        self
    }
}

/// Hypothesis failures inside a construction are implementation errors.
pub(crate) fn internal(e: FactorError) -> FactorError {
    match e {
        FactorError::Hypothesis(m) => FactorError::Integrity(m),
        other => other,
    }
}

pub(crate) fn t(ring: &Ring, n: usize, i: usize, j: usize, x: RingElement) -> Word {
    Word::transvection(ring.clone(), n, i, j, x).expect("generator indices are valid")
}

/// `sum_p s_1p x_p`.
fn first_row_dot(s: &GlElement, xs: &[RingElement]) -> RingElement {
    s.ring().dot(s.mat().row(0), xs)
}

fn check_len(s: &GlElement, xs: &[RingElement]) -> Result<(), FactorError> {
    if s.n() < 3 {
        return Err(FactorError::Hypothesis("the construction needs n >= 3".into()));
    }
    if xs.len() != s.n() {
        return Err(FactorError::Hypothesis(format!(
            "witness has {} entries, expected {}",
            xs.len(),
            s.n()
        )));
    }
    for x in xs {
        s.ring().check(x)?;
    }
    Ok(())
}

fn expect_target(product: &ConjProduct, s: &GlElement, k: usize, l: usize, value: &RingElement) -> Result<(), FactorError> {
    let target = crate::matgroup::Matrix::transvection(s.ring(), s.n(), k, l, value.clone())?;
    if product.evaluate(s) != target {
        return Err(FactorError::Integrity(format!(
            "extraction at ({}, {}) does not evaluate to its target",
            k + 1,
            l + 1
        )));
    }
    Ok(())
}

/// `prod_{p < n-1} t_{p, n-1}(x_p)`.
fn column_word(ring: &Ring, n: usize, xs: &[RingElement]) -> Word {
    let mut w = Word::new(ring.clone(), n);
    for (p, x) in xs.iter().enumerate().take(n - 1) {
        w.push(p, n - 1, x.clone()).expect("valid generator");
    }
    w
}

/// Case `x_n = 0`, `y = 1`: `t_21(a x_1 b)` from `(tau, s tau^-1 s^-1)`.
pub(crate) fn case_one(s: &GlElement, xs: &[RingElement], a: &RingElement, b: &RingElement) -> Result<Native, FactorError> {
    check_len(s, xs)?;
    let ring = s.ring();
    let n = s.n();
    if !ring.is_zero(&xs[n - 1]) {
        return Err(FactorError::Hypothesis("mode I needs x_n = 0".into()));
    }
    if !ring.is_zero(&first_row_dot(s, xs)) {
        return Err(FactorError::Integrity("relation witness: sum_p s_1p x_p != 0".into()));
    }
    let tau = column_word(ring, n, xs);
    let initial = split_commutator(&tau, &SplitShape::Commutator)?;
    let b1 = s.mul(&GlElement::from_word(&tau.inverse())).mul(&s.inverse());
    let gs = [t(ring, n, 1, 0, a.clone()), t(ring, n, n - 1, 0, ring.neg(b))];
    let product = expand_checked(s, &initial, &tau, &b1, &gs)?;
    let value = ring.product_of([a, &xs[0], b]);
    expect_target(&product, s, 1, 0, &value)?;
    Ok(Native { product, k: 1, l: 0, value })
}

/// Case `x_n = 1`, `y = 1`: `t_n1(a x_1 b)` from `(tau, tau^-1 s^-1)`.
pub(crate) fn case_two(s: &GlElement, xs: &[RingElement], a: &RingElement, b: &RingElement) -> Result<Native, FactorError> {
    check_len(s, xs)?;
    let ring = s.ring();
    let n = s.n();
    if !ring.is_one(&xs[n - 1]) {
        return Err(FactorError::Hypothesis("mode II needs x_n = 1".into()));
    }
    if !ring.is_zero(&first_row_dot(s, xs)) {
        return Err(FactorError::Integrity("relation witness: sum_p s_1p x_p != 0".into()));
    }
    let tau = column_word(ring, n, xs);
    let initial = split_commutator(&tau, &SplitShape::InverseProduct)?;
    let b1 = GlElement::from_word(&tau.inverse()).mul(&s.inverse());
    let gs = [
        t(ring, n, 1, 0, a.clone()),
        t(ring, n, n - 1, 0, ring.neg(b)),
        t(ring, n, n - 1, 1, ring.one()),
    ];
    let product = expand_checked(s, &initial, &tau, &b1, &gs)?;
    let value = ring.product_of([a, &xs[0], b]);
    expect_target(&product, s, n - 1, 0, &value)?;
    Ok(Native {
        product,
        k: n - 1,
        l: 0,
        value,
    })
}

/// Case `x_1 = 1`: `t_12(a y b)` from `(t_n1(-y), t_n1(y)^(s tau))`.
pub(crate) fn case_three(
    s: &GlElement,
    y: &RingElement,
    xs: &[RingElement],
    a: &RingElement,
    b: &RingElement,
) -> Result<Native, FactorError> {
    check_len(s, xs)?;
    let ring = s.ring();
    ring.check(y)?;
    let n = s.n();
    if !ring.is_one(&xs[0]) {
        return Err(FactorError::Hypothesis("mode III needs x_1 = 1".into()));
    }
    if !ring.is_zero(&ring.mul(y, &first_row_dot(s, xs))) {
        return Err(FactorError::Integrity("relation witness: y sum_p s_1p x_p != 0".into()));
    }
    let mut tau = Word::with_subset(ring.clone(), n, Subset::EDoubleStar);
    for (p, x) in xs.iter().enumerate().skip(1) {
        tau.push(p, 0, x.clone()).expect("valid generator");
    }
    let u = t(ring, n, n - 1, 0, y.clone());
    let initial = split_commutator(&tau, &SplitShape::ThirdCase { u: u.clone() })?;
    let st = s.mul(&GlElement::from_word(&tau));
    let b1 = GlElement::from_word(&u).conjugate_by_element(&st);
    let gs = [t(ring, n, 0, 1, b.clone()), t(ring, n, 0, n - 1, a.clone())];
    let product = expand_checked(s, &initial, &u.inverse(), &b1, &gs)?;
    let value = ring.product_of([a, y, b]);
    expect_target(&product, s, 0, 1, &value)?;
    Ok(Native { product, k: 0, l: 1, value })
}

/// `s_1n = 0`: `t_kl(a s'_1j b)`, 8 factors.
pub(crate) fn zero_corner(
    s: &GlElement,
    j: usize,
    a: &RingElement,
    b: &RingElement,
    k: usize,
    l: usize,
) -> Result<Placed, FactorError> {
    let ring = s.ring();
    let n = s.n();
    if j == 0 || j >= n {
        return Err(FactorError::Hypothesis(format!("zero corner needs 2 <= j <= n, got {}", j + 1)));
    }
    if !ring.is_zero(s.entry(0, n - 1)) {
        return Err(FactorError::Hypothesis("zero corner needs sigma_1n = 0".into()));
    }
    let mut xs: Vec<RingElement> = (0..n - 1).map(|p| s.inv_entry(p, j).clone()).collect();
    xs.push(ring.zero());
    case_one(s, &xs, a, b)?.place(k, l)
}

/// `s_11` right invertible: `t_kl(a s_1n b)`, 8 factors.
pub(crate) fn right_invertible_corner(
    s: &GlElement,
    a: &RingElement,
    b: &RingElement,
    k: usize,
    l: usize,
) -> Result<Placed, FactorError> {
    let ring = s.ring();
    let n = s.n();
    let z = ring
        .right_inverse(s.entry(0, 0))
        .ok_or_else(|| FactorError::Hypothesis("sigma_11 is not right invertible".into()))?;
    let corner = s.entry(0, n - 1);
    let mut xs = vec![ring.zero(); n];
    xs[0] = ring.neg(&ring.mul(&z, corner));
    xs[n - 1] = ring.one();
    let a2 = ring.neg(&ring.mul(a, s.entry(0, 0)));
    let mut placed = case_two(s, &xs, &a2, b)?.place(k, l)?;
    let value = ring.product_of([a, corner, b]);
    if placed.value != value {
        return Err(FactorError::Integrity("right-invertible corner value".into()));
    }
    placed.value = value;
    Ok(placed)
}

/// `s_1n` idempotent: `t_kl(a s_1n b)`, 8 factors.
pub(crate) fn idempotent_corner(
    s: &GlElement,
    a: &RingElement,
    b: &RingElement,
    k: usize,
    l: usize,
) -> Result<Placed, FactorError> {
    let ring = s.ring();
    let n = s.n();
    let y = s.entry(0, n - 1).clone();
    if ring.mul(&y, &y) != y {
        return Err(FactorError::Hypothesis("sigma_1n is not idempotent".into()));
    }
    let mut xs = vec![ring.zero(); n];
    xs[0] = ring.one();
    xs[n - 1] = ring.neg(s.entry(0, 0));
    case_three(s, &y, &xs, a, b)?.place(k, l)
}

/// Given `sum_{p<n} s_1p x_p + s_1n = 0` (`xs` has `n - 1` entries):
/// `t_kl(a s'_1j b)`, 16 factors.
pub(crate) fn sixteen(
    s: &GlElement,
    j: usize,
    xs: &[RingElement],
    a: &RingElement,
    b: &RingElement,
    k: usize,
    l: usize,
) -> Result<Placed, FactorError> {
    let ring = s.ring();
    let n = s.n();
    if j == 0 || j >= n {
        return Err(FactorError::Hypothesis(format!("needs 2 <= j <= n, got {}", j + 1)));
    }
    if xs.len() != n - 1 {
        return Err(FactorError::Hypothesis(format!("expected {} coefficients, got {}", n - 1, xs.len())));
    }
    let lhs = ring.add(&ring.dot(&s.mat().row(0)[..n - 1], xs), s.entry(0, n - 1));
    if !ring.is_zero(&lhs) {
        return Err(FactorError::Hypothesis("sum_{p<n} sigma_1p x_p + sigma_1n != 0".into()));
    }
    let last = s.inv_entry(n - 1, j);
    let mut first: Vec<RingElement> = (0..n - 1)
        .map(|p| ring.sub(s.inv_entry(p, j), &ring.mul(&xs[p], last)))
        .collect();
    first.push(ring.zero());
    let part1 = case_one(s, &first, a, b)?.place(k, l)?;
    let mut second = xs.to_vec();
    second.push(ring.one());
    let part2 = case_two(s, &second, a, &ring.mul(last, b))?.place(k, l)?;
    Ok(part1.then(part2))
}

fn wrap(
    sigma: &GlElement,
    placed: Placed,
    k: usize,
    l: usize,
    whose_entry: WhoseEntry,
    theorem: Theorem,
    bound: usize,
) -> Result<Factorization, FactorError> {
    certify(
        Factorization {
            product: placed.product,
            target: Target {
                k,
                l,
                value: placed.value,
            },
            whose_entry,
            theorem,
            bound,
            intermediates: Vec::new(),
        },
        sigma,
    )
}

fn check_elements(ring: &Ring, xs: &[&RingElement]) -> Result<(), FactorError> {
    for x in xs {
        ring.check(x)?;
    }
    Ok(())
}

/// Extraction from an explicit relation witness: `t_kl(a x_1 b)` (modes I,
/// II) or `t_kl(a y b)` (mode III), 8 factors.
pub fn extract_core(
    sigma: &GlElement,
    w: &RelationWitness,
    mode: CoreMode,
    a: &RingElement,
    b: &RingElement,
    k: usize,
    l: usize,
) -> Result<Factorization, FactorError> {
    let ring = sigma.ring();
    check_indices(sigma.n(), k, l)?;
    check_elements(ring, &[a, b, &w.y])?;
    let native = match mode {
        CoreMode::I | CoreMode::II if !ring.is_one(&w.y) => {
            return Err(FactorError::Hypothesis(format!("mode {} needs y = 1", mode.tag())));
        }
        CoreMode::I => case_one(sigma, &w.xs, a, b)?,
        CoreMode::II => case_two(sigma, &w.xs, a, b)?,
        CoreMode::III => case_three(sigma, &w.y, &w.xs, a, b)?,
    };
    wrap(sigma, native.place(k, l)?, k, l, WhoseEntry::Sigma, Theorem::Core(mode), 8)
}

/// The corollaries of the three-case extraction. `j` is needed by
/// [`CorollaryVariant::ZeroCorner`] and [`CorollaryVariant::Sixteen`], `xs`
/// (with `n - 1` entries) by the latter.
#[allow(clippy::too_many_arguments)]
pub fn extract_corollary(
    sigma: &GlElement,
    variant: CorollaryVariant,
    j: Option<usize>,
    xs: Option<&[RingElement]>,
    a: &RingElement,
    b: &RingElement,
    k: usize,
    l: usize,
) -> Result<Factorization, FactorError> {
    let ring = sigma.ring();
    check_indices(sigma.n(), k, l)?;
    check_elements(ring, &[a, b])?;
    let need_j = || j.ok_or_else(|| FactorError::Hypothesis(format!("{} needs a column j", variant.tag())));
    let (placed, whose) = match variant {
        CorollaryVariant::ZeroCorner => (zero_corner(sigma, need_j()?, a, b, k, l)?, WhoseEntry::SigmaInverse),
        CorollaryVariant::RightInvertibleCorner => (right_invertible_corner(sigma, a, b, k, l)?, WhoseEntry::Sigma),
        CorollaryVariant::IdempotentCorner => (idempotent_corner(sigma, a, b, k, l)?, WhoseEntry::Sigma),
        CorollaryVariant::Sixteen => {
            let xs = xs.ok_or_else(|| FactorError::Hypothesis("sixteen needs coefficients x_1..x_{n-1}".into()))?;
            check_elements(ring, &xs.iter().collect::<Vec<_>>())?;
            (sixteen(sigma, need_j()?, xs, a, b, k, l)?, WhoseEntry::SigmaInverse)
        }
    };
    wrap(sigma, placed, k, l, whose, Theorem::Corollary(variant), variant.bound())
}

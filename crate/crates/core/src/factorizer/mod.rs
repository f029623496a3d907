//! Bounded factorizations of transvections as products of elementary
//! conjugates of `sigma` and `sigma^-1`.
//!
//! Every public entry point multiplies its result out and compares it with the
//! target before returning, so a returned [`Factorization`] is always valid.
//! Intermediate hypotheses of the constructions (right invertibility of
//! pivots, vanishing corners) are checked where they are used; a failure there
//! is reported as [`FactorError::Integrity`].

mod banach;
mod batch;
mod classes;
mod engine;

use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use crate::matgroup::{GlElement, MatError, Matrix, Subset};
use crate::reduction::{ConjProduct, ReductionError};
use crate::ring::{Ring, RingElement, RingError};

pub use batch::{factorize_batch, Job, JobKind};
pub use classes::{
    extract_almost_commutative, extract_diag_difference, extract_offdiag, AlmostCommutativePart,
    CentralMultipleWitness,
};
pub use engine::{extract_core, extract_corollary, CoreMode, CorollaryVariant, RelationWitness};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FactorError {
    #[error("class {class} is unavailable over {ring}: {reason}")]
    ClassUnavailable {
        class: String,
        ring: String,
        reason: String,
    },
    #[error("hypothesis not satisfied: {0}")]
    Hypothesis(String),
    #[error("integrity check failed: {0}")]
    Integrity(String),
    #[error(transparent)]
    Ring(#[from] RingError),
    #[error(transparent)]
    Matrix(#[from] MatError),
}

impl From<ReductionError> for FactorError {
    fn from(e: ReductionError) -> Self {
        match e {
            ReductionError::Shape(m) => FactorError::Hypothesis(m),
            other => FactorError::Integrity(other.to_string()),
        }
    }
}

/// Ring classes with a constructive off-diagonal extraction.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum RingClass {
    Commutative,
    VonNeumannRegular,
    /// Rings with property (1), such as Banach algebras.
    PropertyOne,
    StableRankOne,
    /// Stable rank strictly between 1 and `n`.
    StableRankMid,
    /// `m`-term Euclidean algorithm, `2 <= m <= n - 1`.
    Euclidean { m: usize },
    /// Strong `n`-term Euclidean algorithm.
    StrongEuclidean,
}

impl RingClass {
    /// Off-diagonal factor count in dimension `n`.
    pub fn bound(self, n: usize) -> usize {
        match self {
            RingClass::Commutative | RingClass::VonNeumannRegular | RingClass::StableRankOne => 8,
            RingClass::PropertyOne => 160,
            RingClass::StableRankMid => 16,
            RingClass::Euclidean { m } if m + 2 <= n => 8,
            RingClass::Euclidean { .. } => 8 * (n - 1),
            RingClass::StrongEuclidean => 80 * (n - 1),
        }
    }

    /// Checks that `ring` supports the class's oracles in dimension `n`.
    pub fn check_available(self, ring: &Ring, n: usize) -> Result<(), FactorError> {
        let fail = |reason: &str| {
            Err(FactorError::ClassUnavailable {
                class: self.to_string(),
                ring: ring.to_string(),
                reason: reason.to_string(),
            })
        };
        if n < 3 {
            return fail("the constructions need n >= 3");
        }
        match self {
            RingClass::Commutative if !ring.is_commutative() => fail("ring is not commutative"),
            RingClass::VonNeumannRegular if !ring.is_vn_regular() => {
                fail("ring is not von Neumann regular")
            }
            RingClass::PropertyOne if !ring.has_property_one() => {
                fail("property (1) is not certified for this ring")
            }
            RingClass::StableRankOne if ring.stable_rank() != Some(1) || ring.elements().is_none() => {
                fail("needs a small finite ring of stable rank 1")
            }
            RingClass::StableRankMid => match ring.stable_rank() {
                Some(sr) if sr > 1 && sr < n => Ok(()),
                _ => fail("needs 1 < sr(R) < n"),
            },
            RingClass::Euclidean { m } => {
                if !(ring.is_field() || ring.spec() == &crate::ring::RingSpec::Integers) {
                    fail("Euclidean reduction is implemented for Z and prime fields")
                } else if m < 2 || m >= n {
                    fail("needs 2 <= m <= n - 1")
                } else {
                    Ok(())
                }
            }
            RingClass::StrongEuclidean if !ring.is_field() => {
                fail("strong Euclidean reduction is implemented for prime fields")
            }
            _ => Ok(()),
        }
    }
}

impl fmt::Display for RingClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RingClass::Commutative => write!(f, "commutative"),
            RingClass::VonNeumannRegular => write!(f, "von-neumann-regular"),
            RingClass::PropertyOne => write!(f, "banach"),
            RingClass::StableRankOne => write!(f, "sr1"),
            RingClass::StableRankMid => write!(f, "sr-mid"),
            RingClass::Euclidean { m } => write!(f, "euclidean-{m}"),
            RingClass::StrongEuclidean => write!(f, "strong-euclidean"),
        }
    }
}

impl FromStr for RingClass {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Ok(match s {
            "commutative" => RingClass::Commutative,
            "von-neumann-regular" | "vnr" => RingClass::VonNeumannRegular,
            "banach" | "property-one" => RingClass::PropertyOne,
            "sr1" | "stable-rank-one" => RingClass::StableRankOne,
            "sr-mid" | "stable-rank-mid" => RingClass::StableRankMid,
            "euclidean" => RingClass::Euclidean { m: 2 },
            "strong-euclidean" => RingClass::StrongEuclidean,
            other => match other.strip_prefix("euclidean-").map(str::parse) {
                Some(Ok(m)) => RingClass::Euclidean { m },
                _ => return Err(format!("unknown class `{other}`")),
            },
        })
    }
}

/// Which statement a factorization instantiates.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Theorem {
    Core(CoreMode),
    Corollary(CorollaryVariant),
    OffDiagonal(RingClass),
    DiagonalDifference(RingClass),
    AlmostCommutative,
}

impl fmt::Display for Theorem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Theorem::Core(m) => write!(f, "core-{}", m.tag()),
            Theorem::Corollary(v) => write!(f, "corollary-{}", v.tag()),
            Theorem::OffDiagonal(c) => write!(f, "offdiag-{c}"),
            Theorem::DiagonalDifference(c) => write!(f, "diag-{c}"),
            Theorem::AlmostCommutative => write!(f, "almost-commutative"),
        }
    }
}

impl FromStr for Theorem {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        if s == "almost-commutative" {
            return Ok(Theorem::AlmostCommutative);
        }
        if let Some(rest) = s.strip_prefix("core-") {
            return CoreMode::from_tag(rest)
                .map(Theorem::Core)
                .ok_or_else(|| format!("unknown theorem `{s}`"));
        }
        if let Some(rest) = s.strip_prefix("corollary-") {
            return CorollaryVariant::from_tag(rest)
                .map(Theorem::Corollary)
                .ok_or_else(|| format!("unknown theorem `{s}`"));
        }
        if let Some(rest) = s.strip_prefix("offdiag-") {
            return rest.parse().map(Theorem::OffDiagonal);
        }
        if let Some(rest) = s.strip_prefix("diag-") {
            return rest.parse().map(Theorem::DiagonalDifference);
        }
        Err(format!("unknown theorem `{s}`"))
    }
}

/// Whose entries the target value is built from.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum WhoseEntry {
    Sigma,
    SigmaInverse,
}

impl WhoseEntry {
    pub fn tag(self) -> &'static str {
        match self {
            WhoseEntry::Sigma => "sigma",
            WhoseEntry::SigmaInverse => "sigma_inverse",
        }
    }
}

/// The transvection `t_kl(value)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Target {
    pub k: usize,
    pub l: usize,
    pub value: RingElement,
}

impl Target {
    pub fn matrix(&self, ring: &Ring, n: usize) -> Result<Matrix, MatError> {
        Matrix::transvection(ring, n, self.k, self.l, self.value.clone())
    }
}

/// A conjugate product over `sigma` claimed to equal `t_kl(value)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Factorization {
    pub product: ConjProduct,
    pub target: Target,
    pub whose_entry: WhoseEntry,
    pub theorem: Theorem,
    pub bound: usize,
    /// Named intermediate values of the construction, for auditing.
    pub intermediates: Vec<(String, String)>,
}

/// Outcome of [`verify_factorization`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VerifyReport {
    pub evaluation_matches: bool,
    /// First entry (row-major) where the product differs from the target.
    pub mismatch: Option<(usize, usize)>,
    pub factor_count: usize,
    pub bound: usize,
    pub within_bound: bool,
    /// Every conjugator is a well-formed elementary word of the right size.
    pub conjugators_elementary: bool,
    pub conjugators_in_estar: usize,
    pub conjugators_in_edoublestar: usize,
}

impl VerifyReport {
    pub fn passed(&self) -> bool {
        self.evaluation_matches && self.within_bound && self.conjugators_elementary
    }
}

/// Multiplies out every conjugate and compares with the target.
pub fn verify_factorization(f: &Factorization, sigma: &GlElement) -> VerifyReport {
    let n = sigma.n();
    let ring = sigma.ring();
    let factors = f.product.factors();
    let conjugators_elementary = f.product.n() == n
        && f.product.ring() == ring
        && factors.iter().all(|fc| {
            fc.conj.n() == n
                && fc.conj.ring() == ring
                && fc.conj.generators().iter().all(|g| {
                    g.i != g.j && g.i < n && g.j < n && ring.contains(&g.x)
                })
        });
    let (evaluation_matches, mismatch) = match f.target.matrix(ring, n) {
        Ok(target) if conjugators_elementary => {
            let got = f.product.evaluate(sigma);
            let mismatch = got.first_mismatch(&target);
            (mismatch.is_none(), mismatch)
        }
        _ => (false, Some((0, 0))),
    };
    VerifyReport {
        evaluation_matches,
        mismatch,
        factor_count: factors.len(),
        bound: f.bound,
        within_bound: factors.len() <= f.bound,
        conjugators_elementary,
        conjugators_in_estar: factors.iter().filter(|fc| fc.conj.lies_in(Subset::EStar)).count(),
        conjugators_in_edoublestar: factors
            .iter()
            .filter(|fc| fc.conj.lies_in(Subset::EDoubleStar))
            .count(),
    }
}

/// Verifies a freshly built factorization; any failure is an integrity error.
pub(crate) fn certify(f: Factorization, sigma: &GlElement) -> Result<Factorization, FactorError> {
    let report = verify_factorization(&f, sigma);
    if !report.evaluation_matches {
        return Err(FactorError::Integrity(format!(
            "{} product does not evaluate to its target (first mismatch at {:?})",
            f.theorem, report.mismatch
        )));
    }
    if !report.within_bound {
        return Err(FactorError::Integrity(format!(
            "{} product has {} factors, above the bound {}",
            f.theorem, report.factor_count, f.bound
        )));
    }
    Ok(f)
}

pub(crate) fn check_indices(n: usize, i: usize, j: usize) -> Result<(), FactorError> {
    crate::matgroup::check_pair(n, i, j).map_err(FactorError::from)
}

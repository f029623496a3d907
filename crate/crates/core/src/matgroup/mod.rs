//! Dense matrices over a catalogue ring, symbolic elementary words and
//! generalized-permutation routing.
//!
//! Conventions used throughout the crate: indices are 0-based, conjugation is
//! `g^h = h^-1 g h`, and the commutator is `[g, h] = g h g^-1 h^-1`.

mod matrix;
mod route;
mod word;

use thiserror::Error;

use crate::ring::RingError;

pub use matrix::{GlElement, Matrix};
pub use route::route;
pub use word::{Generator, Subset, Word};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum MatError {
    /// Indices are reported 1-based.
    #[error("invalid index pair ({}, {}) for dimension {n}", .i + 1, .j + 1)]
    InvalidIndex { i: usize, j: usize, n: usize },
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("operands live over different rings ({0} and {1})")]
    RingMismatch(String, String),
    #[error("matrix is not invertible")]
    NotInvertible,
    #[error("supplied inverse does not satisfy {0}")]
    WrongInverse(&'static str),
    #[error("generator t_{}{}(..) is not allowed in {subset:?}", .i + 1, .j + 1)]
    SubsetViolation { i: usize, j: usize, subset: Subset },
    #[error("no signed permutation routes ({}, {}) to ({}, {}) in dimension {n}", .i + 1, .j + 1, .k + 1, .l + 1)]
    Unroutable {
        n: usize,
        i: usize,
        j: usize,
        k: usize,
        l: usize,
    },
    #[error(transparent)]
    Ring(#[from] RingError),
}

pub(crate) fn check_pair(n: usize, i: usize, j: usize) -> Result<(), MatError> {
    if i == j || i >= n || j >= n {
        Err(MatError::InvalidIndex { i, j, n })
    } else {
        Ok(())
    }
}

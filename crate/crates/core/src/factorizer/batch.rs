//! Independent extraction jobs run under an [`Execution`] mode.

use crate::exec::Execution;
use crate::matgroup::GlElement;
use crate::ring::RingElement;

use super::classes::{extract_diag_difference, extract_offdiag};
use super::{FactorError, Factorization, RingClass};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum JobKind {
    /// `t_kl(a sigma_ij b)`.
    OffDiagonal,
    /// `t_kl(a (c sigma_ii - sigma_jj c) b)`.
    Diagonal { c: RingElement },
}

/// One extraction request; indices are 0-based.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Job {
    pub sigma: GlElement,
    pub class: RingClass,
    pub i: usize,
    pub j: usize,
    pub k: usize,
    pub l: usize,
    pub a: RingElement,
    pub b: RingElement,
    pub kind: JobKind,
}

impl Job {
    pub fn run(&self) -> Result<Factorization, FactorError> {
        match &self.kind {
            JobKind::OffDiagonal => {
                extract_offdiag(&self.sigma, self.class, self.i, self.j, self.k, self.l, &self.a, &self.b)
            }
            JobKind::Diagonal { c } => extract_diag_difference(
                &self.sigma,
                self.class,
                self.i,
                self.j,
                self.k,
                self.l,
                &self.a,
                &self.b,
                c,
            ),
        }
    }
}

/// Results in job order; the output does not depend on `exec`.
pub fn factorize_batch(jobs: &[Job], exec: Execution) -> Vec<Result<Factorization, FactorError>> {
    exec.map(jobs, Job::run)
}

use crate::ring::{Ring, RingElement};

use super::{check_pair, MatError, Matrix};

/// The generator `t_ij(x)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Generator {
    pub i: usize,
    pub j: usize,
    pub x: RingElement,
}

/// Subgroup of `E_n(R)` a word is constrained to.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Default)]
pub enum Subset {
    /// All of `E_n(R)`.
    #[default]
    Full,
    /// `E*_n(R)`: generators `t_kl` with `k != 1` and `l != n` (1-based).
    EStar,
    /// `E**_n(R)`: generators `t_k1` (1-based).
    EDoubleStar,
}

impl Subset {
    pub fn admits(self, n: usize, i: usize, j: usize) -> bool {
        match self {
            Subset::Full => true,
            Subset::EStar => i != 0 && j != n - 1,
            Subset::EDoubleStar => j == 0,
        }
    }
}

/// A product `t_{i1 j1}(x1) t_{i2 j2}(x2) ...` kept literally.
///
/// Generators with argument zero are dropped on insertion; nothing else is
/// rewritten.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Word {
    ring: Ring,
    n: usize,
    gens: Vec<Generator>,
    subset: Subset,
}

impl Word {
    pub fn new(ring: Ring, n: usize) -> Word {
        Word::with_subset(ring, n, Subset::Full)
    }

    pub fn with_subset(ring: Ring, n: usize, subset: Subset) -> Word {
        Word {
            ring,
            n,
            gens: Vec::new(),
            subset,
        }
    }

    /// The one-letter word `t_ij(x)`.
    pub fn transvection(ring: Ring, n: usize, i: usize, j: usize, x: RingElement) -> Result<Word, MatError> {
        let mut w = Word::new(ring, n);
        w.push(i, j, x)?;
        Ok(w)
    }

    pub fn from_generators(
        ring: Ring,
        n: usize,
        subset: Subset,
        gens: impl IntoIterator<Item = (usize, usize, RingElement)>,
    ) -> Result<Word, MatError> {
        let mut w = Word::with_subset(ring, n, subset);
        for (i, j, x) in gens {
            w.push(i, j, x)?;
        }
        Ok(w)
    }

    /// The generalized permutation word `p_ij = t_ij(1) t_ji(-1) t_ij(1)`.
    pub fn perm(ring: Ring, n: usize, i: usize, j: usize) -> Word {
        let one = ring.one();
        let minus = ring.neg(&one);
        Word::from_generators(ring, n, Subset::Full, [(i, j, one.clone()), (j, i, minus), (i, j, one)])
            .expect("valid permutation indices")
    }

    pub fn push(&mut self, i: usize, j: usize, x: RingElement) -> Result<(), MatError> {
        check_pair(self.n, i, j)?;
        self.ring.check(&x)?;
        if !self.subset.admits(self.n, i, j) {
            return Err(MatError::SubsetViolation {
                i,
                j,
                subset: self.subset,
            });
        }
        if !self.ring.is_zero(&x) {
            self.gens.push(Generator { i, j, x });
        }
        Ok(())
    }

    /// Appends `other`; the subset flag survives only if both words carry it.
    pub fn extend(&mut self, other: &Word) {
        assert_eq!(self.n, other.n, "word dimensions differ");
        if self.subset != other.subset {
            self.subset = Subset::Full;
        }
        self.gens.extend(other.gens.iter().cloned());
    }

    /// Concatenation `self || other`.
    pub fn then(&self, other: &Word) -> Word {
        let mut w = self.clone();
        w.extend(other);
        w
    }

    /// Concatenation of several words of dimension `n`.
    pub fn concat<'a>(ring: &Ring, n: usize, parts: impl IntoIterator<Item = &'a Word>) -> Word {
        let mut parts = parts.into_iter();
        let mut w = match parts.next() {
            Some(first) => first.clone(),
            None => return Word::new(ring.clone(), n),
        };
        for p in parts {
            w.extend(p);
        }
        w
    }

    /// Reversed generators with negated arguments.
    pub fn inverse(&self) -> Word {
        Word {
            ring: self.ring.clone(),
            n: self.n,
            gens: self
                .gens
                .iter()
                .rev()
                .map(|g| Generator {
                    i: g.i,
                    j: g.j,
                    x: self.ring.neg(&g.x),
                })
                .collect(),
            subset: self.subset,
        }
    }

    /// The word `[a, b] = a b a^-1 b^-1`.
    pub fn commutator(a: &Word, b: &Word) -> Word {
        Word::concat(&a.ring, a.n, [a, b, &a.inverse(), &b.inverse()])
    }

    /// The same generators with indices shifted by `offset`, in dimension `n`.
    pub fn embed(&self, n: usize, offset: usize) -> Result<Word, MatError> {
        Word::from_generators(
            self.ring.clone(),
            n,
            Subset::Full,
            self.gens.iter().map(|g| (g.i + offset, g.j + offset, g.x.clone())),
        )
    }

    pub fn eval(&self) -> Matrix {
        let mut m = Matrix::identity(&self.ring, self.n);
        for g in &self.gens {
            m.right_transvect(g.i, g.j, &g.x);
        }
        m
    }

    /// Whether every generator lies in `subset` (syntactic check).
    pub fn lies_in(&self, subset: Subset) -> bool {
        self.gens.iter().all(|g| subset.admits(self.n, g.i, g.j))
    }

    pub fn generators(&self) -> &[Generator] {
        &self.gens
    }

    pub fn len(&self) -> usize {
        self.gens.len()
    }

    pub fn is_empty(&self) -> bool {
        self.gens.is_empty()
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn ring(&self) -> &Ring {
        &self.ring
    }

    pub fn subset(&self) -> Subset {
        self.subset
    }

    /// Renders as `t_12(5) t_23(-1)` with 1-based indices.
    pub fn to_human(&self) -> String {
        if self.gens.is_empty() {
            return "e".to_string();
        }
        self.gens
            .iter()
            .map(|g| format!("t_{}{}({})", g.i + 1, g.j + 1, g.x))
            .collect::<Vec<_>>()
            .join(" ")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn t(ring: &Ring, n: usize, i: usize, j: usize, x: RingElement) -> Word {
        Word::transvection(ring.clone(), n, i, j, x).unwrap()
    }

    fn z() -> Ring {
        Ring::integers()
    }

    #[test]
    fn zero_generators_are_dropped() {
        let r = z();
        let w = Word::transvection(r.clone(), 3, 0, 1, r.zero()).unwrap();
        assert!(w.is_empty());
        assert_eq!(w.eval(), Matrix::identity(&r, 3));
    }

    #[test]
    fn push_validates() {
        let r = z();
        let mut w = Word::new(r.clone(), 3);
        assert!(matches!(w.push(1, 1, r.one()), Err(MatError::InvalidIndex { .. })));
        assert!(matches!(w.push(0, 3, r.one()), Err(MatError::InvalidIndex { .. })));
        let mut s = Word::with_subset(r.clone(), 3, Subset::EStar);
        assert!(s.push(0, 1, r.one()).is_err());
        assert!(s.push(1, 2, r.one()).is_err());
        assert!(s.push(2, 0, r.one()).is_ok());
        let mut d = Word::with_subset(r.clone(), 3, Subset::EDoubleStar);
        assert!(d.push(2, 1, r.one()).is_err());
        assert!(d.push(2, 0, r.one()).is_ok());
    }

    #[test]
    fn relation_r1_over_integers() {
        let r = z();
        let w = Word::from_generators(r.clone(), 3, Subset::Full, [(0, 1, r.from_i64(2)), (0, 1, r.from_i64(3))]).unwrap();
        assert_eq!(w.eval(), t(&r, 3, 0, 1, r.from_i64(5)).eval());
    }

    #[test]
    fn inverse_reverses_and_negates() {
        let r = z();
        let w = Word::from_generators(r.clone(), 3, Subset::Full, [(0, 1, r.one()), (1, 2, r.one())]).unwrap();
        let inv = w.inverse();
        let expect = Word::from_generators(r.clone(), 3, Subset::Full, [(1, 2, r.from_i64(-1)), (0, 1, r.from_i64(-1))]).unwrap();
        assert_eq!(inv, expect);
        assert!(w.eval().mul(&inv.eval()).is_identity());
        assert!(Word::new(r, 3).inverse().is_empty());
    }

    #[test]
    fn permutation_word_matrix() {
        let r = z();
        let p = Word::perm(r.clone(), 3, 0, 1).eval();
        let expect = Matrix::from_i64_rows(&r, &[&[0, 1, 0], &[-1, 0, 0], &[0, 0, 1]]).unwrap();
        assert_eq!(p, expect);
        let q = Word::perm(r, 3, 1, 0).eval();
        assert!(p.mul(&q).is_identity());
    }

    #[test]
    fn commutator_of_transvections() {
        let r = Ring::integers_mod(12).unwrap();
        let c = Word::commutator(
            &t(&r, 3, 0, 1, r.from_i64(5)),
            &t(&r, 3, 1, 2, r.from_i64(7)),
        );
        assert_eq!(c.eval(), t(&r, 3, 0, 2, r.from_i64(11)).eval());
    }

    #[test]
    fn human_rendering() {
        let r = z();
        let w = Word::from_generators(r.clone(), 3, Subset::Full, [(0, 2, r.from_i64(-4))]).unwrap();
        assert_eq!(w.to_human(), "t_13(-4)");
        assert_eq!(Word::new(r, 3).to_human(), "e");
    }
}

use crate::ring::{gf, Ring, RingElement, RingSpec};

use super::{check_pair, MatError, Word};

/// Dense `n x n` matrix over a catalogue ring, row-major.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Matrix {
    ring: Ring,
    n: usize,
    entries: Vec<RingElement>,
}

impl Matrix {
    pub fn identity(ring: &Ring, n: usize) -> Matrix {
        let mut m = Matrix::zero(ring, n);
        for t in 0..n {
            m.entries[t * n + t] = ring.one();
        }
        m
    }

    pub fn zero(ring: &Ring, n: usize) -> Matrix {
        Matrix {
            ring: ring.clone(),
            n,
            entries: vec![ring.zero(); n * n],
        }
    }

    pub fn from_rows(ring: &Ring, rows: Vec<Vec<RingElement>>) -> Result<Matrix, MatError> {
        let n = rows.len();
        let mut entries = Vec::with_capacity(n * n);
        for row in rows {
            if row.len() != n {
                return Err(MatError::DimensionMismatch {
                    expected: n,
                    found: row.len(),
                });
            }
            for x in row {
                ring.check(&x)?;
                entries.push(x);
            }
        }
        Ok(Matrix {
            ring: ring.clone(),
            n,
            entries,
        })
    }

    pub fn from_i64_rows(ring: &Ring, rows: &[&[i64]]) -> Result<Matrix, MatError> {
        Matrix::from_rows(
            ring,
            rows.iter()
                .map(|r| r.iter().map(|&v| ring.from_i64(v)).collect())
                .collect(),
        )
    }

    /// The transvection `t_ij(x)`, identity plus `x` at `(i, j)`.
    pub fn transvection(ring: &Ring, n: usize, i: usize, j: usize, x: RingElement) -> Result<Matrix, MatError> {
        check_pair(n, i, j)?;
        ring.check(&x)?;
        let mut m = Matrix::identity(ring, n);
        m.entries[i * n + j] = x;
        Ok(m)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn ring(&self) -> &Ring {
        &self.ring
    }

    pub fn get(&self, i: usize, j: usize) -> &RingElement {
        &self.entries[i * self.n + j]
    }

    pub fn set(&mut self, i: usize, j: usize, x: RingElement) {
        self.entries[i * self.n + j] = x;
    }

    pub fn row(&self, i: usize) -> &[RingElement] {
        &self.entries[i * self.n..(i + 1) * self.n]
    }

    pub fn rows(&self) -> impl Iterator<Item = &[RingElement]> {
        self.entries.chunks(self.n.max(1))
    }

    pub fn entries(&self) -> &[RingElement] {
        &self.entries
    }

    pub fn is_identity(&self) -> bool {
        *self == Matrix::identity(&self.ring, self.n)
    }

    pub fn mul(&self, other: &Matrix) -> Matrix {
        assert_eq!(self.n, other.n, "matrix dimensions differ");
        let r = &self.ring;
        let n = self.n;
        let mut out = Matrix::zero(r, n);
        for i in 0..n {
            for t in 0..n {
                let s = self.get(i, t);
                if r.is_zero(s) {
                    continue;
                }
                for j in 0..n {
                    let v = r.add(out.get(i, j), &r.mul(s, other.get(t, j)));
                    out.set(i, j, v);
                }
            }
        }
        out
    }

    /// Row vector times matrix.
    pub fn row_times(ring: &Ring, row: &[RingElement], m: &Matrix) -> Vec<RingElement> {
        (0..m.n)
            .map(|j| {
                row.iter()
                    .enumerate()
                    .fold(ring.zero(), |acc, (t, v)| ring.add(&acc, &ring.mul(v, m.get(t, j))))
            })
            .collect()
    }

    /// `self <- t_ij(x) self`: row `i` gains `x` times row `j`.
    pub fn left_transvect(&mut self, i: usize, j: usize, x: &RingElement) {
        let r = self.ring.clone();
        for c in 0..self.n {
            let v = r.add(self.get(i, c), &r.mul(x, self.get(j, c)));
            self.set(i, c, v);
        }
    }

    /// `self <- self t_ij(x)`: column `j` gains column `i` times `x`.
    pub fn right_transvect(&mut self, i: usize, j: usize, x: &RingElement) {
        let r = self.ring.clone();
        for row in 0..self.n {
            let v = r.add(self.get(row, j), &r.mul(self.get(row, i), x));
            self.set(row, j, v);
        }
    }

    /// `eval(w)^-1 self eval(w)`, applied generator by generator.
    pub fn conjugate_by(&self, w: &Word) -> Matrix {
        let mut m = self.clone();
        for g in w.generators() {
            m.left_transvect(g.i, g.j, &self.ring.neg(&g.x));
            m.right_transvect(g.i, g.j, &g.x);
        }
        m
    }

    /// First position (row-major) where the matrices differ.
    pub fn first_mismatch(&self, other: &Matrix) -> Option<(usize, usize)> {
        if self.n != other.n {
            return Some((0, 0));
        }
        (0..self.n * self.n)
            .find(|&t| self.entries[t] != other.entries[t])
            .map(|t| (t / self.n, t % self.n))
    }

    /// Two-sided inverse, if it exists.
    ///
    /// Scalar commutative rings use the adjugate; matrix rings are flattened to
    /// `nk x nk` matrices over `GF(q)`; products are inverted componentwise.
    pub fn inverse(&self) -> Option<Matrix> {
        let n = self.n;
        match self.ring.spec() {
            RingSpec::Product(_) => {
                let parts = self
                    .ring
                    .components()
                    .iter()
                    .enumerate()
                    .map(|(idx, comp)| self.component(idx, comp).inverse())
                    .collect::<Option<Vec<_>>>()?;
                let entries = (0..n * n)
                    .map(|t| RingElement::Tuple(parts.iter().map(|p| p.entries[t].clone()).collect()))
                    .collect();
                Some(Matrix {
                    ring: self.ring.clone(),
                    n,
                    entries,
                })
            }
            RingSpec::MatrixRing { k, q } => {
                let (k, q) = (*k, *q);
                let big = n * k;
                let mut flat = vec![0u64; big * big];
                for r in 0..n {
                    for c in 0..n {
                        let RingElement::Matrix(e) = self.get(r, c) else {
                            unreachable!("entries belong to the ring")
                        };
                        for a in 0..k {
                            for b in 0..k {
                                flat[(r * k + a) * big + c * k + b] = e[a * k + b];
                            }
                        }
                    }
                }
                let inv = gf::inverse(q, big, &flat)?;
                let entries = (0..n * n)
                    .map(|t| {
                        let (r, c) = (t / n, t % n);
                        let mut e = vec![0u64; k * k];
                        for a in 0..k {
                            for b in 0..k {
                                e[a * k + b] = inv[(r * k + a) * big + c * k + b];
                            }
                        }
                        RingElement::Matrix(e)
                    })
                    .collect();
                Some(Matrix {
                    ring: self.ring.clone(),
                    n,
                    entries,
                })
            }
            _ => {
                let ring = &self.ring;
                let det_inv = ring.right_inverse(&self.minor_det(None, None))?;
                let mut inv = Matrix::zero(ring, n);
                for i in 0..n {
                    for j in 0..n {
                        let mut cof = self.minor_det(Some(i), Some(j));
                        if (i + j) % 2 == 1 {
                            cof = ring.neg(&cof);
                        }
                        inv.set(j, i, ring.mul(&cof, &det_inv));
                    }
                }
                Some(inv)
            }
        }
    }

    /// Determinant (commutative rings only).
    pub fn det(&self) -> RingElement {
        assert!(self.ring.is_commutative(), "determinant needs a commutative ring");
        self.minor_det(None, None)
    }

    /// Determinant of the matrix with the given row and column removed, by
    /// Laplace expansion memoised over column subsets.
    fn minor_det(&self, skip_row: Option<usize>, skip_col: Option<usize>) -> RingElement {
        let ring = &self.ring;
        let rows: Vec<usize> = (0..self.n).filter(|&r| Some(r) != skip_row).collect();
        let cols: Vec<usize> = (0..self.n).filter(|&c| Some(c) != skip_col).collect();
        let m = rows.len();
        // table[S] = det of rows[m - |S|..] against columns in S
        let mut table: Vec<RingElement> = vec![ring.zero(); 1 << m];
        table[0] = ring.one();
        for set in 1usize..(1 << m) {
            let row = rows[m - set.count_ones() as usize];
            let mut acc = ring.zero();
            for (pos, &col) in cols.iter().enumerate() {
                if set & (1 << pos) == 0 {
                    continue;
                }
                let term = ring.mul(self.get(row, col), &table[set & !(1 << pos)]);
                let below = (set & ((1 << pos) - 1)).count_ones();
                acc = if below % 2 == 0 {
                    ring.add(&acc, &term)
                } else {
                    ring.sub(&acc, &term)
                };
            }
            table[set] = acc;
        }
        table[(1 << m) - 1].clone()
    }

    fn component(&self, idx: usize, comp: &Ring) -> Matrix {
        Matrix {
            ring: comp.clone(),
            n: self.n,
            entries: self
                .entries
                .iter()
                .map(|e| match e {
                    RingElement::Tuple(parts) => parts[idx].clone(),
                    _ => unreachable!("entries belong to the product ring"),
                })
                .collect(),
        }
    }

    pub fn to_human(&self) -> String {
        self.rows()
            .map(|r| r.iter().map(ToString::to_string).collect::<Vec<_>>().join(" "))
            .collect::<Vec<_>>()
            .join("\n")
    }
}

/// An invertible matrix together with its verified inverse.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GlElement {
    mat: Matrix,
    inv: Matrix,
}

impl GlElement {
    /// Checks `mat inv = inv mat = e`.
    pub fn new(mat: Matrix, inv: Matrix) -> Result<GlElement, MatError> {
        if mat.n != inv.n {
            return Err(MatError::DimensionMismatch {
                expected: mat.n,
                found: inv.n,
            });
        }
        if mat.ring != inv.ring {
            return Err(MatError::RingMismatch(mat.ring.to_string(), inv.ring.to_string()));
        }
        if !mat.mul(&inv).is_identity() {
            return Err(MatError::WrongInverse("sigma * inverse = e"));
        }
        if !inv.mul(&mat).is_identity() {
            return Err(MatError::WrongInverse("inverse * sigma = e"));
        }
        Ok(GlElement { mat, inv })
    }

    pub fn from_matrix(mat: Matrix) -> Result<GlElement, MatError> {
        let inv = mat.inverse().ok_or(MatError::NotInvertible)?;
        GlElement::new(mat, inv)
    }

    pub fn identity(ring: &Ring, n: usize) -> GlElement {
        GlElement {
            mat: Matrix::identity(ring, n),
            inv: Matrix::identity(ring, n),
        }
    }

    pub fn from_word(w: &Word) -> GlElement {
        GlElement {
            mat: w.eval(),
            inv: w.inverse().eval(),
        }
    }

    pub fn mat(&self) -> &Matrix {
        &self.mat
    }

    pub fn inv(&self) -> &Matrix {
        &self.inv
    }

    pub fn n(&self) -> usize {
        self.mat.n
    }

    pub fn ring(&self) -> &Ring {
        &self.mat.ring
    }

    /// `sigma_ij`.
    pub fn entry(&self, i: usize, j: usize) -> &RingElement {
        self.mat.get(i, j)
    }

    /// `sigma'_ij`, the entry of the inverse.
    pub fn inv_entry(&self, i: usize, j: usize) -> &RingElement {
        self.inv.get(i, j)
    }

    /// The inverse element (matrix and inverse exchanged).
    pub fn inverse(&self) -> GlElement {
        GlElement {
            mat: self.inv.clone(),
            inv: self.mat.clone(),
        }
    }

    pub fn mul(&self, other: &GlElement) -> GlElement {
        GlElement {
            mat: self.mat.mul(&other.mat),
            inv: other.inv.mul(&self.inv),
        }
    }

    pub fn conjugate_by(&self, w: &Word) -> GlElement {
        GlElement {
            mat: self.mat.conjugate_by(w),
            inv: self.inv.conjugate_by(w),
        }
    }

    /// `h^-1 self h`.
    pub fn conjugate_by_element(&self, h: &GlElement) -> GlElement {
        h.inverse().mul(self).mul(h)
    }

    /// `sigma^eps`.
    pub fn power(&self, positive: bool) -> &Matrix {
        if positive {
            &self.mat
        } else {
            &self.inv
        }
    }
}

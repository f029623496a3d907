//! Random invertible matrices for tests, benches and the CLI.

use rand::Rng;

use crate::matgroup::{GlElement, Matrix, Word};
use crate::ring::Ring;

/// A word of `len` random generators with random entries.
pub fn random_elementary_word<R: Rng + ?Sized>(ring: &Ring, n: usize, len: usize, rng: &mut R) -> Word {
    let mut w = Word::new(ring.clone(), n);
    while w.len() < len {
        let i = rng.gen_range(0..n);
        let j = rng.gen_range(0..n - 1);
        let j = if j >= i { j + 1 } else { j };
        w.push(i, j, ring.random_element(rng)).expect("indices are distinct and in range");
    }
    w
}

/// A random element of `GL_n(R)`: uniform by rejection for finite rings,
/// a random elementary word of length `3 n` over `Z`.
pub fn random_gl<R: Rng + ?Sized>(ring: &Ring, n: usize, rng: &mut R) -> GlElement {
    if ring.is_finite() {
        for _ in 0..256 {
            let mut m = Matrix::zero(ring, n);
            for i in 0..n {
                for j in 0..n {
                    m.set(i, j, ring.random_element(rng));
                }
            }
            if let Ok(g) = GlElement::from_matrix(m) {
                return g;
            }
        }
    }
    GlElement::from_word(&random_elementary_word(ring, n, 3 * n, rng))
}

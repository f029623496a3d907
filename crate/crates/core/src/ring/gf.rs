//! Dense linear algebra over a prime field with `u64` entries in `[0, q)`.

pub(crate) fn mat_mul(q: u64, rows: usize, inner: usize, cols: usize, a: &[u64], b: &[u64]) -> Vec<u64> {
    let mut out = vec![0u64; rows * cols];
    for r in 0..rows {
        for t in 0..inner {
            let s = a[r * inner + t];
            if s == 0 {
                continue;
            }
            for c in 0..cols {
                out[r * cols + c] = ((out[r * cols + c] as u128 + s as u128 * b[t * cols + c] as u128)
                    % q as u128) as u64;
            }
        }
    }
    out
}

pub(crate) fn pow_mod(base: u64, mut exp: u64, m: u64) -> u64 {
    let m128 = m as u128;
    let mut acc: u128 = 1 % m128;
    let mut b = base as u128 % m128;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = acc * b % m128;
        }
        b = b * b % m128;
        exp >>= 1;
    }
    acc as u64
}

/// Inverse in the prime field of order `q`.
pub(crate) fn field_inv(a: u64, q: u64) -> Option<u64> {
    if a % q == 0 {
        None
    } else {
        Some(pow_mod(a, q - 2, q))
    }
}

/// For a `rows x cols` matrix `a`, returns `(g, rank)` where `g` is
/// `cols x rows` with `a g a = a`; `a g` is the identity exactly when
/// `rank == rows`.
///
/// With `e a = r` in reduced row echelon form and pivot columns `c_t`, `g` has
/// row `c_t` equal to row `t` of `e` and zeros elsewhere.
pub(crate) fn pseudo_inverse(q: u64, rows: usize, cols: usize, a: &[u64]) -> (Vec<u64>, usize) {
    let mut red = a.to_vec();
    let mut e = vec![0u64; rows * rows];
    for t in 0..rows {
        e[t * rows + t] = 1;
    }
    let mut pivots = Vec::new();
    let mut row = 0;
    for col in 0..cols {
        if row == rows {
            break;
        }
        let Some(p) = (row..rows).find(|&r| red[r * cols + col] != 0) else {
            continue;
        };
        if p != row {
            for c in 0..cols {
                red.swap(p * cols + c, row * cols + c);
            }
            for c in 0..rows {
                e.swap(p * rows + c, row * rows + c);
            }
        }
        let inv = field_inv(red[row * cols + col], q).expect("pivot is nonzero");
        for c in 0..cols {
            red[row * cols + c] = mulm(red[row * cols + c], inv, q);
        }
        for c in 0..rows {
            e[row * rows + c] = mulm(e[row * rows + c], inv, q);
        }
        for r in 0..rows {
            if r == row {
                continue;
            }
            let f = red[r * cols + col];
            if f == 0 {
                continue;
            }
            for c in 0..cols {
                red[r * cols + c] = subm(red[r * cols + c], mulm(f, red[row * cols + c], q), q);
            }
            for c in 0..rows {
                e[r * rows + c] = subm(e[r * rows + c], mulm(f, e[row * rows + c], q), q);
            }
        }
        pivots.push(col);
        row += 1;
    }
    let mut g = vec![0u64; cols * rows];
    for (t, &c) in pivots.iter().enumerate() {
        g[c * rows..(c + 1) * rows].copy_from_slice(&e[t * rows..(t + 1) * rows]);
    }
    (g, pivots.len())
}

pub(crate) fn inverse(q: u64, n: usize, a: &[u64]) -> Option<Vec<u64>> {
    let (g, rank) = pseudo_inverse(q, n, n, a);
    (rank == n).then_some(g)
}

fn mulm(a: u64, b: u64, q: u64) -> u64 {
    ((a as u128 * b as u128) % q as u128) as u64
}

fn subm(a: u64, b: u64, q: u64) -> u64 {
    (a + q - b) % q
}

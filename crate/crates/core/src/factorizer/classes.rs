//! Off-diagonal and diagonal-difference extractions per ring class, and the
//! partition-of-unity extraction for almost commutative rings.

use crate::matgroup::{route, GlElement, Subset, Word};
use crate::reduction::{ConjProduct, Sign};
use crate::ring::{Ring, RingElement, RingError};

use super::engine::{case_one, case_three, internal, right_invertible_corner, sixteen, t, zero_corner, Placed};
use super::{banach, certify, check_indices, FactorError, Factorization, RingClass, Target, Theorem, WhoseEntry};

pub(crate) type Log = Vec<(String, String)>;

/// Maps an oracle failure: missing capabilities make the class unavailable,
/// anything else means a construction step went wrong.
pub(crate) fn oracle_error(class: RingClass, ring: &Ring) -> impl Fn(RingError) -> FactorError + '_ {
    move |e| match e {
        RingError::CapabilityMissing { .. } | RingError::NoWitness { .. } | RingError::TooLarge { .. } => {
            FactorError::ClassUnavailable {
                class: class.to_string(),
                ring: ring.to_string(),
                reason: e.to_string(),
            }
        }
        other => FactorError::Integrity(other.to_string()),
    }
}

fn integrity(cond: bool, what: &str) -> Result<(), FactorError> {
    if cond {
        Ok(())
    } else {
        Err(FactorError::Integrity(what.to_string()))
    }
}

/// `sigma^tau` with `(sigma^tau)_(k0, l0) = sigma_ij`.
fn routed(sigma: &GlElement, i: usize, j: usize, k0: usize, l0: usize) -> Result<(Word, GlElement), FactorError> {
    let (tau, _) = route(sigma.ring(), sigma.n(), i, j, k0, l0)?;
    let s = sigma.conjugate_by(&tau);
    Ok((tau, s))
}

/// A word `rho` in `E*_n` such that the first row of `s^rho` keeps its last
/// entry and has a unimodular prefix of length `down_to`, built by repeated
/// stable-range reductions.
fn stable_range_word(s: &GlElement, down_to: usize, class: RingClass) -> Result<Word, FactorError> {
    let ring = s.ring();
    let n = s.n();
    let mut row = s.mat().row(0).to_vec();
    let mut witness: Vec<RingElement> = (0..n).map(|p| s.inv_entry(p, 0).clone()).collect();
    let mut w = Word::with_subset(ring.clone(), n, Subset::EStar);
    for len in (down_to + 1..=n).rev() {
        let red = ring
            .sr_reduce(&row[..len], Some(&witness))
            .map_err(oracle_error(class, ring))?;
        for (p, x) in red.xs.iter().enumerate() {
            w.push(len - 1, p, x.clone())?;
        }
        row[..len - 1].clone_from_slice(&red.reduced);
        witness = red.witness;
    }
    let sh = s.conjugate_by(&w);
    integrity(sh.mat().row(0)[..down_to] == row[..down_to], "stable-range prefix")?;
    integrity(sh.entry(0, n - 1) == s.entry(0, n - 1), "E* conjugation moved the corner")?;
    Ok(w)
}

/// A product over `sigma` evaluating to `t_kl(a sigma_ij b)`.
#[allow(clippy::too_many_arguments)]
pub(crate) fn offdiag_product(
    sigma: &GlElement,
    class: RingClass,
    i: usize,
    j: usize,
    k: usize,
    l: usize,
    a: &RingElement,
    b: &RingElement,
    log: &mut Log,
) -> Result<ConjProduct, FactorError> {
    let ring = sigma.ring();
    let n = sigma.n();
    let last = n - 1;
    match class {
        RingClass::Commutative => {
            let (tau, s) = routed(sigma, i, j, 0, 1)?;
            let mut xs = vec![ring.zero(); n];
            xs[0] = s.entry(0, 1).clone();
            xs[1] = ring.neg(s.entry(0, 0));
            let placed = case_one(&s, &xs, a, b).map_err(internal)?.place(k, l)?;
            Ok(placed.product.prefix(&tau))
        }
        RingClass::VonNeumannRegular => {
            let (tau, s) = routed(sigma, i, j, 0, 1)?;
            let s01 = s.entry(0, 1);
            let z = ring.vnr_witness(s01).map_err(oracle_error(class, ring))?;
            log.push(("z".into(), z.to_string()));
            let y = ring.mul(s01, &z);
            let mut xs = vec![ring.zero(); n];
            xs[0] = ring.one();
            xs[1] = ring.neg(&ring.mul(&z, s.entry(0, 0)));
            let placed = case_three(&s, &y, &xs, a, &ring.mul(s01, b))
                .map_err(internal)?
                .place(k, l)?;
            Ok(placed.product.prefix(&tau))
        }
        RingClass::PropertyOne => banach::property_one_product(sigma, i, j, k, l, a, b, log),
        RingClass::StableRankOne => {
            let (tau, s) = routed(sigma, i, j, 0, last)?;
            let rho = stable_range_word(&s, 1, class)?;
            let sh = s.conjugate_by(&rho);
            log.push(("rho".into(), rho.to_human()));
            log.push(("sigma_hat_11".into(), sh.entry(0, 0).to_string()));
            let placed = right_invertible_corner(&sh, a, b, k, l).map_err(internal)?;
            Ok(placed.product.prefix(&tau.then(&rho)))
        }
        RingClass::StableRankMid => {
            let sr = ring.stable_rank().expect("checked by availability");
            let (tau, mt) = routed(&sigma.inverse(), i, j, 0, last)?;
            let rho = stable_range_word(&mt, sr, class)?;
            let mh = mt.conjugate_by(&rho);
            let v = ring
                .unimodular_witness(&mh.mat().row(0)[..sr])
                .ok_or_else(|| FactorError::Integrity("reduced prefix is not unimodular".into()))?;
            let corner = mh.entry(0, last);
            let mut xs = vec![ring.zero(); last];
            for (p, vp) in v.iter().enumerate() {
                xs[p] = ring.neg(&ring.mul(vp, corner));
            }
            log.push(("rho".into(), rho.to_human()));
            log.push(("xs".into(), render(&xs)));
            integrity(mh.inv_entry(0, last) == sigma.entry(i, j), "routed inverse entry")?;
            let placed = sixteen(&mh, last, &xs, a, b, k, l).map_err(internal)?;
            Ok(placed.product.substitute(&ConjProduct::single(Sign::Minus, tau.then(&rho))))
        }
        RingClass::Euclidean { m } => {
            let (tau, mt) = routed(&sigma.inverse(), i, j, 0, 1)?;
            let off = n - m;
            let w = ring
                .euclid_reduce(&mt.mat().row(0)[off..], false)
                .map_err(oracle_error(class, ring))?
                .embed(n, off)?;
            let xi = mt.conjugate_by(&w);
            integrity(ring.is_zero(xi.entry(0, last)), "Euclidean reduction left a nonzero corner")?;
            log.push(("w".into(), w.to_human()));
            let placed = if m + 2 <= n {
                integrity(xi.inv_entry(0, 1) == sigma.entry(i, j), "untouched column")?;
                zero_corner(&xi, 1, a, b, k, l).map_err(internal)?
            } else {
                let w_inv = w.inverse().eval();
                let mut acc: Option<Placed> = None;
                for p in 1..n {
                    let bp = ring.mul(w_inv.get(p, 1), b);
                    let part = zero_corner(&xi, p, a, &bp, k, l).map_err(internal)?;
                    acc = Some(match acc {
                        None => part,
                        Some(prev) => prev.then(part),
                    });
                }
                acc.expect("n >= 3")
            };
            Ok(placed.product.substitute(&ConjProduct::single(Sign::Minus, tau.then(&w))))
        }
        RingClass::StrongEuclidean => strong_euclidean_product(sigma, i, j, k, l, a, b, log),
    }
}

/// The strong `n`-term construction, run on `mu = sigma^-1` so that the
/// extracted inverse entry is an entry of `sigma`.
#[allow(clippy::too_many_arguments)]
fn strong_euclidean_product(
    sigma: &GlElement,
    i: usize,
    j: usize,
    k: usize,
    l: usize,
    a: &RingElement,
    b: &RingElement,
    log: &mut Log,
) -> Result<ConjProduct, FactorError> {
    let class = RingClass::StrongEuclidean;
    let ring = sigma.ring();
    let n = sigma.n();
    let last = n - 1;
    let (tau, mt) = routed(&sigma.inverse(), i, j, 0, 1)?;
    let w = ring
        .euclid_reduce(mt.mat().row(0), true)
        .map_err(oracle_error(class, ring))?;
    let t0 = w.eval();
    integrity(ring.is_one(t0.get(0, 0)), "strong reduction needs (1,1) entry 1")?;
    // normalise the first row to (1, 0, .., 0, *)
    let mut wn = w.clone();
    for c in 1..last {
        wn.push(0, c, ring.neg(t0.get(0, c)))?;
    }
    let tn = wn.eval();
    integrity(
        ring.is_one(tn.get(0, 0)) && (1..last).all(|c| ring.is_zero(tn.get(0, c))),
        "normalised first row",
    )?;
    let t1n = tn.get(0, last).clone();
    let rho = wn.then(&t(ring, n, 0, last, ring.neg(&t1n)));
    let rho_m = rho.eval();
    integrity(
        ring.is_one(rho_m.get(0, 0)) && (1..n).all(|c| ring.is_zero(rho_m.get(0, c))),
        "rho has a trivial first row",
    )?;
    let xi = GlElement::from_word(&t(ring, n, 0, last, t1n.clone())).mul(&mt.conjugate_by(&wn));
    integrity(ring.is_zero(xi.entry(0, last)), "xi_1n = 0")?;
    log.push(("tau".into(), wn.to_human()));
    log.push(("tau_1n".into(), t1n.to_string()));

    // t_k'l'(a' t1n b') from (t_1n(-t1n), xi) over mt: 8 factors
    let step1 = |kk: usize, ll: usize, a1: &RingElement, b1: &RingElement| -> Result<Placed, FactorError> {
        let initial = ConjProduct::single(Sign::Plus, wn.clone());
        let start = t(ring, n, 0, last, ring.neg(&t1n));
        let gs = [
            t(ring, n, last, 1, b1.clone()),
            t(ring, n, 2, 0, a1.clone()),
            t(ring, n, 1, 0, ring.neg(&ring.one())),
        ];
        let product = crate::reduction::expand_checked(&mt, &initial, &start, &xi, &gs)?;
        let value = ring.product_of([a1, &t1n, b1]);
        let native = super::engine::Native { product, k: 2, l: 0, value };
        let target = native.value.clone();
        let placed = native.place(kk, ll)?;
        integrity(
            placed.product.evaluate(&mt)
                == crate::matgroup::Matrix::transvection(ring, n, kk, ll, target)?,
            "strong Euclidean step 1",
        )?;
        Ok(placed)
    };
    // xi = t_1n(t1n) mt^wn as 9 factors over mt
    let xi_expr = step1(0, last, &ring.one(), &ring.one())?
        .product
        .then(&ConjProduct::single(Sign::Plus, wn.clone()));
    integrity(xi_expr.evaluate(&mt) == *xi.mat(), "xi expression")?;

    let rho_inv = rho.inverse().eval();
    let mut acc = ConjProduct::empty(ring, n);
    for c in 1..n {
        let r = rho_inv.get(c, 1);
        let zc = zero_corner(&xi, c, a, &ring.mul(r, b), k, l).map_err(internal)?;
        acc.extend(&zc.product.substitute(&xi_expr));
        let tail = ring.product_of([xi.inv_entry(last, c), r, b]);
        acc.extend(&step1(k, l, a, &tail)?.product);
    }
    Ok(acc.substitute(&ConjProduct::single(Sign::Minus, tau)))
}

fn render(xs: &[RingElement]) -> String {
    let parts: Vec<String> = xs.iter().map(ToString::to_string).collect();
    format!("({})", parts.join(", "))
}

fn check_common(sigma: &GlElement, class: RingClass, ijkl: [usize; 4], elems: &[&RingElement]) -> Result<(), FactorError> {
    let n = sigma.n();
    check_indices(n, ijkl[0], ijkl[1])?;
    check_indices(n, ijkl[2], ijkl[3])?;
    class.check_available(sigma.ring(), n)?;
    for x in elems {
        sigma.ring().check(x)?;
    }
    Ok(())
}

/// `t_kl(a sigma_ij b)` with the class's off-diagonal bound.
#[allow(clippy::too_many_arguments)]
pub fn extract_offdiag(
    sigma: &GlElement,
    class: RingClass,
    i: usize,
    j: usize,
    k: usize,
    l: usize,
    a: &RingElement,
    b: &RingElement,
) -> Result<Factorization, FactorError> {
    check_common(sigma, class, [i, j, k, l], &[a, b])?;
    let ring = sigma.ring();
    let mut log = Log::new();
    let product = offdiag_product(sigma, class, i, j, k, l, a, b, &mut log)?;
    certify(
        Factorization {
            product,
            target: Target {
                k,
                l,
                value: ring.product_of([a, sigma.entry(i, j), b]),
            },
            whose_entry: WhoseEntry::Sigma,
            theorem: Theorem::OffDiagonal(class),
            bound: class.bound(sigma.n()),
            intermediates: log,
        },
        sigma,
    )
}

/// `t_kl(a (c sigma_ii - sigma_jj c) b)` with three times the off-diagonal
/// bound: one extraction at `(j, i)` from `sigma^(t_ji(-c))` and two from
/// `sigma`, using
/// `(sigma^(t_ji(-c)))_ji = sigma_ji + c sigma_ii - sigma_jj c - c sigma_ij c`.
#[allow(clippy::too_many_arguments)]
pub fn extract_diag_difference(
    sigma: &GlElement,
    class: RingClass,
    i: usize,
    j: usize,
    k: usize,
    l: usize,
    a: &RingElement,
    b: &RingElement,
    c: &RingElement,
) -> Result<Factorization, FactorError> {
    check_common(sigma, class, [i, j, k, l], &[a, b, c])?;
    let ring = sigma.ring();
    let n = sigma.n();
    let mut log = Log::new();
    let shift = t(ring, n, j, i, ring.neg(c));
    let shifted = sigma.conjugate_by(&shift);
    log.push(("shifted_ji".into(), shifted.entry(j, i).to_string()));
    let mut product = offdiag_product(&shifted, class, j, i, k, l, a, b, &mut log)?.prefix(&shift);
    product.extend(&offdiag_product(sigma, class, i, j, k, l, &ring.mul(a, c), &ring.mul(c, b), &mut log)?);
    product.extend(&offdiag_product(sigma, class, j, i, k, l, &ring.neg(a), b, &mut log)?);
    let diff = ring.sub(&ring.mul(c, sigma.entry(i, i)), &ring.mul(sigma.entry(j, j), c));
    certify(
        Factorization {
            product,
            target: Target {
                k,
                l,
                value: ring.product_of([a, &diff, b]),
            },
            whose_entry: WhoseEntry::Sigma,
            theorem: Theorem::DiagonalDifference(class),
            bound: 3 * class.bound(n),
            intermediates: log,
        },
        sigma,
    )
}

/// A central element `z = x y = y x`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CentralMultipleWitness {
    pub z: RingElement,
    pub y: RingElement,
    pub x: RingElement,
}

/// One part of a partition of unity: `tau` in `E**_n` and a witness whose `x`
/// is `(sigma^tau)_11`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AlmostCommutativePart {
    pub tau: Word,
    pub witness: CentralMultipleWitness,
}

/// `t_kl(a sigma_12 b)` with `8q` factors from a partition of unity
/// `z_1 + .. + z_q = 1` of central multiples of the `(1,1)` entries of
/// `sigma^(tau_p)`.
pub fn extract_almost_commutative(
    sigma: &GlElement,
    parts: &[AlmostCommutativePart],
    a: &RingElement,
    b: &RingElement,
    k: usize,
    l: usize,
) -> Result<Factorization, FactorError> {
    let ring = sigma.ring();
    let n = sigma.n();
    check_indices(n, k, l)?;
    if n < 3 {
        return Err(FactorError::Hypothesis("the construction needs n >= 3".into()));
    }
    for x in [a, b] {
        ring.check(x)?;
    }
    if parts.is_empty() {
        return Err(FactorError::Hypothesis("the partition of unity is empty".into()));
    }
    let total = parts.iter().fold(ring.zero(), |acc, p| ring.add(&acc, &p.witness.z));
    if !ring.is_one(&total) {
        return Err(FactorError::Hypothesis(format!("z_1 + .. + z_q = {total}, not 1")));
    }
    let s01 = sigma.entry(0, 1);
    let mut product = ConjProduct::empty(ring, n);
    let mut log = Log::new();
    for (idx, part) in parts.iter().enumerate() {
        let CentralMultipleWitness { z, y, x } = &part.witness;
        for e in [z, y, x] {
            ring.check(e)?;
        }
        if part.tau.subset() != Subset::EDoubleStar || part.tau.n() != n {
            return Err(FactorError::Hypothesis(format!("part {} is not a word in E**_n", idx + 1)));
        }
        let sp = sigma.conjugate_by(&part.tau);
        integrity(sp.entry(0, 0) == x, &format!("part {}: x != (sigma^tau)_11", idx + 1))?;
        integrity(
            ring.mul(x, y) == *z && ring.mul(y, x) == *z && ring.is_central(z),
            &format!("part {}: z is not a central multiple of x", idx + 1),
        )?;
        let mut xs = vec![ring.zero(); n];
        xs[0] = ring.mul(y, s01);
        xs[1] = ring.neg(&ring.mul(x, y));
        let placed = case_one(&sp, &xs, &ring.mul(a, x), b).map_err(internal)?.place(k, l)?;
        log.push((format!("part_{}", idx + 1), placed.value.to_string()));
        product.extend(&placed.product.prefix(&part.tau));
    }
    certify(
        Factorization {
            product,
            target: Target {
                k,
                l,
                value: ring.product_of([a, s01, b]),
            },
            whose_entry: WhoseEntry::Sigma,
            theorem: Theorem::AlmostCommutative,
            bound: 8 * parts.len(),
            intermediates: log,
        },
        sigma,
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::factorizer::verify_factorization;
    use crate::sample::random_gl;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn quadruples(n: usize) -> Vec<[usize; 4]> {
        let mut out = Vec::new();
        for i in 0..n {
            for j in (0..n).filter(|&j| j != i) {
                for k in 0..n {
                    for l in (0..n).filter(|&l| l != k) {
                        out.push([i, j, k, l]);
                    }
                }
            }
        }
        out
    }

    /// Runs every quadruple (or every `stride`-th) on `samples` random
    /// matrices and checks exact evaluation and the exact count.
    fn exercise(ring: &Ring, n: usize, class: RingClass, samples: usize, stride: usize, seed: u64) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        for _ in 0..samples {
            let sigma = random_gl(ring, n, &mut rng);
            for q in quadruples(n).into_iter().step_by(stride) {
                let [i, j, k, l] = q;
                let a = ring.random_element(&mut rng);
                let b = ring.random_element(&mut rng);
                let f = extract_offdiag(&sigma, class, i, j, k, l, &a, &b)
                    .unwrap_or_else(|e| panic!("{class} over {ring}, {q:?}: {e}"));
                let report = verify_factorization(&f, &sigma);
                assert!(report.passed(), "{class} {q:?}: {report:?}");
                assert_eq!(f.product.len(), class.bound(n), "{class} {q:?}");
                assert_eq!(f.target.value, ring.product_of([&a, sigma.entry(i, j), &b]));
            }
        }
    }

    #[test]
    fn commutative_rings() {
        exercise(&Ring::integers_mod(12).unwrap(), 3, RingClass::Commutative, 3, 1, 1);
        exercise(&Ring::integers_mod(12).unwrap(), 4, RingClass::Commutative, 1, 5, 2);
        exercise(&Ring::integers(), 3, RingClass::Commutative, 2, 1, 3);
    }

    #[test]
    fn commutative_example_transvection() {
        let r = Ring::integers_mod(12).unwrap();
        let sigma = GlElement::from_word(&t(&r, 3, 0, 1, r.from_i64(5)));
        let f = extract_offdiag(&sigma, RingClass::Commutative, 0, 1, 2, 0, &r.one(), &r.one()).unwrap();
        assert_eq!(f.target.value, r.from_i64(5));
        assert_eq!(f.product.len(), 8);
    }

    #[test]
    fn von_neumann_regular_rings() {
        exercise(&Ring::matrix_ring(2, 2).unwrap(), 3, RingClass::VonNeumannRegular, 3, 1, 4);
        exercise(&Ring::field(5).unwrap(), 4, RingClass::VonNeumannRegular, 1, 7, 5);
    }

    #[test]
    fn property_one_rings() {
        exercise(&Ring::field(3).unwrap(), 3, RingClass::PropertyOne, 2, 3, 6);
        exercise(&Ring::integers_mod(9).unwrap(), 3, RingClass::PropertyOne, 1, 5, 7);
    }

    #[test]
    fn property_one_logs_alpha() {
        let r = Ring::field(3).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        let sigma = random_gl(&r, 3, &mut rng);
        let f = extract_offdiag(&sigma, RingClass::PropertyOne, 0, 2, 1, 0, &r.one(), &r.one()).unwrap();
        let names: Vec<&str> = f.intermediates.iter().map(|(k, _)| k.as_str()).collect();
        for want in ["x", "alpha", "y", "xi_11", "rho_12"] {
            assert!(names.contains(&want), "{names:?}");
        }
        // alpha = x s'_nn x^-1 - x s'_n1 on the unrouted matrix
        let get = |k: &str| f.intermediates.iter().find(|(n, _)| n == k).unwrap().1.clone();
        let x: i64 = get("x").parse().unwrap();
        let x = r.from_i64(x);
        let x_inv = r.right_inverse(&x).unwrap();
        let alpha = r.sub(
            &r.product_of([&x, sigma.inv_entry(2, 2), &x_inv]),
            &r.mul(&x, sigma.inv_entry(2, 0)),
        );
        assert_eq!(get("alpha"), alpha.to_string());
    }

    #[test]
    fn property_one_is_gated() {
        let r = Ring::field(2).unwrap();
        let sigma = GlElement::identity(&r, 3);
        let err = extract_offdiag(&sigma, RingClass::PropertyOne, 0, 1, 0, 2, &r.one(), &r.one()).unwrap_err();
        assert!(matches!(err, FactorError::ClassUnavailable { .. }), "{err}");
    }

    #[test]
    fn stable_rank_one_rings() {
        exercise(&Ring::field(5).unwrap(), 3, RingClass::StableRankOne, 2, 1, 9);
        exercise(&Ring::integers_mod(12).unwrap(), 4, RingClass::StableRankOne, 1, 5, 10);
        exercise(&Ring::matrix_ring(2, 2).unwrap(), 3, RingClass::StableRankOne, 1, 2, 11);
    }

    #[test]
    fn stable_rank_mid_over_integers() {
        exercise(&Ring::integers(), 3, RingClass::StableRankMid, 3, 1, 12);
    }

    #[test]
    fn euclidean_over_integers() {
        exercise(&Ring::integers(), 3, RingClass::Euclidean { m: 2 }, 2, 1, 13);
        exercise(&Ring::integers(), 4, RingClass::Euclidean { m: 2 }, 1, 3, 14);
        exercise(&Ring::integers(), 4, RingClass::Euclidean { m: 3 }, 1, 5, 15);
        exercise(&Ring::field(7).unwrap(), 3, RingClass::Euclidean { m: 2 }, 1, 2, 16);
    }

    #[test]
    fn strong_euclidean_over_fields() {
        exercise(&Ring::field(3).unwrap(), 3, RingClass::StrongEuclidean, 1, 3, 17);
        exercise(&Ring::field(5).unwrap(), 4, RingClass::StrongEuclidean, 1, 23, 18);
    }

    #[test]
    fn diagonal_differences() {
        let mut rng = ChaCha8Rng::seed_from_u64(19);
        let cases = [
            (Ring::integers_mod(12).unwrap(), RingClass::Commutative),
            (Ring::matrix_ring(2, 2).unwrap(), RingClass::VonNeumannRegular),
            (Ring::integers(), RingClass::StableRankMid),
            (Ring::field(3).unwrap(), RingClass::PropertyOne),
        ];
        for (r, class) in cases {
            let sigma = random_gl(&r, 3, &mut rng);
            let [a, b, c] = [0; 3].map(|_| r.random_element(&mut rng));
            let f = extract_diag_difference(&sigma, class, 0, 2, 1, 2, &a, &b, &c).unwrap();
            assert_eq!(f.product.len(), 3 * class.bound(3));
            assert!(verify_factorization(&f, &sigma).passed());
            let diff = r.sub(&r.mul(&c, sigma.entry(0, 0)), &r.mul(sigma.entry(2, 2), &c));
            assert_eq!(f.target.value, r.product_of([&a, &diff, &b]));
        }
    }

    #[test]
    fn identity_diagonal_difference_is_trivial() {
        let r = Ring::integers_mod(12).unwrap();
        let sigma = GlElement::identity(&r, 3);
        let one = r.one();
        let f = extract_diag_difference(&sigma, RingClass::Commutative, 0, 1, 2, 1, &one, &one, &one).unwrap();
        assert_eq!(f.product.len(), 24);
        assert!(f.product.evaluate(&sigma).is_identity());
    }

    fn witness(z: RingElement, y: RingElement, x: RingElement) -> CentralMultipleWitness {
        CentralMultipleWitness { z, y, x }
    }

    #[test]
    fn almost_commutative_single_unit() {
        let r = Ring::integers_mod(12).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(20);
        let sigma = loop {
            let s = random_gl(&r, 3, &mut rng);
            if r.to_i64(s.entry(0, 0)) == Some(5) {
                break s;
            }
        };
        let parts = [AlmostCommutativePart {
            tau: Word::with_subset(r.clone(), 3, Subset::EDoubleStar),
            witness: witness(r.one(), r.from_i64(5), r.from_i64(5)),
        }];
        let a = r.from_i64(7);
        let f = extract_almost_commutative(&sigma, &parts, &a, &r.one(), 1, 2).unwrap();
        assert_eq!(f.product.len(), 8);
        assert!(verify_factorization(&f, &sigma).passed());
    }

    #[test]
    fn almost_commutative_two_part_partition() {
        use crate::ring::RingSpec;
        let r = Ring::product(vec![RingSpec::IntegersMod(2), RingSpec::IntegersMod(3)]).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(21);
        // sigma_11 = (1, 0) and a tau moving a unit of the second component to (1,1)
        for _ in 0..20 {
            let sigma = random_gl(&r, 3, &mut rng);
            let e1 = r.from_i64(3); // (1, 0)
            let e2 = r.from_i64(4); // (0, 1)
            let mut parts = Vec::new();
            for (z, idem) in [(&e1, &e1), (&e2, &e2)] {
                // search tau = t_21(u) t_31(v) with z a multiple of the (1,1) entry
                let found = r.elements().unwrap().iter().flat_map(|u| {
                    r.elements().unwrap().iter().map(move |v| (u.clone(), v.clone()))
                }).find_map(|(u, v)| {
                    let mut tau = Word::with_subset(r.clone(), 3, Subset::EDoubleStar);
                    tau.push(1, 0, u).unwrap();
                    tau.push(2, 0, v).unwrap();
                    let x = sigma.conjugate_by(&tau).entry(0, 0).clone();
                    let y = r.elements().unwrap().iter().find(|y| r.mul(&x, y) == *z)?.clone();
                    let _ = idem;
                    Some(AlmostCommutativePart { tau, witness: witness(z.clone(), y, x) })
                });
                match found {
                    Some(p) => parts.push(p),
                    None => break,
                }
            }
            if parts.len() < 2 {
                continue;
            }
            let f = extract_almost_commutative(&sigma, &parts, &r.one(), &r.one(), 2, 0).unwrap();
            assert_eq!(f.product.len(), 16);
            assert!(verify_factorization(&f, &sigma).passed());
            return;
        }
        panic!("no sample admitted a two-part partition");
    }

    #[test]
    fn almost_commutative_rejects_bad_partitions() {
        let r = Ring::integers_mod(12).unwrap();
        let sigma = GlElement::identity(&r, 3);
        let parts = [AlmostCommutativePart {
            tau: Word::with_subset(r.clone(), 3, Subset::EDoubleStar),
            witness: witness(r.from_i64(5), r.from_i64(5), r.one()),
        }];
        let err = extract_almost_commutative(&sigma, &parts, &r.one(), &r.one(), 0, 1).unwrap_err();
        assert!(matches!(err, FactorError::Hypothesis(_)), "{err}");
        let parts = [AlmostCommutativePart {
            tau: Word::with_subset(r.clone(), 3, Subset::EDoubleStar),
            witness: witness(r.one(), r.one(), r.from_i64(5)),
        }];
        let err = extract_almost_commutative(&sigma, &parts, &r.one(), &r.one(), 0, 1).unwrap_err();
        assert!(matches!(err, FactorError::Integrity(_)), "{err}");
    }
}

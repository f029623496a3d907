use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use rdu_core::factorizer::{
    extract_core, extract_diag_difference, extract_offdiag, verify_factorization, CoreMode, FactorError,
    RelationWitness, RingClass,
};
use rdu_core::matgroup::{route, GlElement, Matrix, Word};
use rdu_core::reduction::{expand_conjugates, reduce_step, ConjProduct, Pair, Sign};
use rdu_core::ring::Ring;
use rdu_core::sample::{random_elementary_word, random_gl};
use rdu_core::wire;

fn rings() -> Vec<Ring> {
    ["Z", "Z/12", "GF(5)", "Z/9", "M2(GF(2))", "Z/4xGF(3)"]
        .iter()
        .map(|s| s.parse().unwrap())
        .collect()
}

fn ring_strategy() -> impl Strategy<Value = Ring> {
    (0..rings().len()).prop_map(|i| rings()[i].clone())
}

fn pair_strategy(n: usize) -> impl Strategy<Value = (usize, usize)> {
    (0..n, 0..n - 1).prop_map(|(i, j)| (i, if j >= i { j + 1 } else { j }))
}

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn t(r: &Ring, n: usize, i: usize, j: usize, x: rdu_core::ring::RingElement) -> Matrix {
    Matrix::transvection(r, n, i, j, x).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn ring_laws(r in ring_strategy(), seed in any::<u64>()) {
        let mut g = rng(seed);
        let [x, y, z] = [0; 3].map(|_| r.random_element(&mut g));
        prop_assert_eq!(r.mul(&r.mul(&x, &y), &z), r.mul(&x, &r.mul(&y, &z)));
        prop_assert_eq!(r.mul(&x, &r.add(&y, &z)), r.add(&r.mul(&x, &y), &r.mul(&x, &z)));
        prop_assert_eq!(r.mul(&r.add(&x, &y), &z), r.add(&r.mul(&x, &z), &r.mul(&y, &z)));
        prop_assert!(r.is_zero(&r.add(&x, &r.neg(&x))));
        prop_assert_eq!(r.mul(&r.one(), &x), x.clone());
        if r.is_commutative() {
            prop_assert_eq!(r.mul(&x, &y), r.mul(&y, &x));
        }
    }

    #[test]
    fn elementary_relations(r in ring_strategy(), n in 3usize..6, seed in any::<u64>(),
                            (i, j) in pair_strategy(5), (h, k) in pair_strategy(5)) {
        prop_assume!(i < n && j < n && h < n && k < n);
        let mut g = rng(seed);
        let (x, y) = (r.random_element(&mut g), r.random_element(&mut g));
        // R1
        prop_assert_eq!(t(&r, n, i, j, x.clone()).mul(&t(&r, n, i, j, y.clone())), t(&r, n, i, j, r.add(&x, &y)));
        let comm = |a: &Matrix, b: &Matrix| {
            let ai = a.inverse().unwrap();
            let bi = b.inverse().unwrap();
            a.mul(b).mul(&ai).mul(&bi)
        };
        let a = t(&r, n, i, j, x.clone());
        // R2: [t_ij(x), t_hk(y)] = e for i != k, j != h
        if i != k && j != h {
            prop_assert!(comm(&a, &t(&r, n, h, k, y.clone())).is_identity());
        }
        // R3: [t_ij(x), t_jk(y)] = t_ik(xy) for i != k
        if i != k && j != k {
            prop_assert_eq!(comm(&a, &t(&r, n, j, k, y.clone())), t(&r, n, i, k, r.mul(&x, &y)));
        }
    }

    #[test]
    fn route_postconditions(n in 3usize..6, (i, j) in pair_strategy(5), (k, l) in pair_strategy(5),
                            seed in any::<u64>(), finite in any::<bool>()) {
        prop_assume!(i < n && j < n && k < n && l < n);
        let r: Ring = if finite { "GF(3)".parse().unwrap() } else { "Z/12".parse().unwrap() };
        let mut g = rng(seed);
        let sigma = random_gl(&r, n, &mut g);
        let x = r.random_element(&mut g);
        let (tau, rho) = route(&r, n, i, j, k, l).unwrap();
        let moved = sigma.conjugate_by(&tau);
        prop_assert_eq!(moved.entry(k, l), sigma.entry(i, j));
        prop_assert_eq!(t(&r, n, k, l, x.clone()).conjugate_by(&rho), t(&r, n, i, j, x));
    }

    #[test]
    fn one_step_identity(seed in any::<u64>()) {
        let r = Ring::field(5).unwrap();
        let mut g = rng(seed);
        let a = random_gl(&r, 3, &mut g);
        let b = random_gl(&r, 3, &mut g);
        let w = random_elementary_word(&r, 3, 4, &mut g);
        let gg = GlElement::from_word(&w);
        let next = reduce_step(&Pair::new(a.clone(), b.clone()).unwrap(), &w).unwrap();
        let ab = a.mul(&b);
        let lhs = ab.conjugate_by_element(&gg.inverse().mul(&a)).mul(&ab.inverse().conjugate_by_element(&a));
        prop_assert_eq!(next.product(), lhs.mat().clone());
    }

    #[test]
    fn expansion_doubles_per_step(seed in any::<u64>(), steps in 0usize..6, initial_len in 1usize..4) {
        let r = Ring::integers_mod(12).unwrap();
        let mut g = rng(seed);
        let mut initial = ConjProduct::empty(&r, 3);
        for p in 0..initial_len {
            let sign = if p % 2 == 0 { Sign::Plus } else { Sign::Minus };
            initial.push(sign, random_elementary_word(&r, 3, 2, &mut g));
        }
        let a1 = random_elementary_word(&r, 3, 3, &mut g);
        let gs: Vec<Word> = (0..steps).map(|_| random_elementary_word(&r, 3, 1, &mut g)).collect();
        prop_assert_eq!(expand_conjugates(&initial, &a1, &gs).len(), initial_len << steps);
    }

    #[test]
    fn corrupted_witnesses_are_integrity_errors(seed in any::<u64>(), bump in 1i64..12) {
        let r = Ring::integers_mod(12).unwrap();
        let mut g = rng(seed);
        let sigma = random_gl(&r, 3, &mut g);
        let (s00, s01) = (sigma.entry(0, 0).clone(), sigma.entry(0, 1).clone());
        let x0 = r.add(&s01, &r.from_i64(bump));
        let w = RelationWitness { y: r.one(), xs: vec![x0, r.neg(&s00), r.zero()] };
        let broken = !r.is_zero(&r.mul(&s00, &r.from_i64(bump)));
        let res = extract_core(&sigma, &w, CoreMode::I, &r.one(), &r.one(), 0, 2);
        if broken {
            prop_assert!(matches!(res, Err(FactorError::Integrity(_))));
        } else {
            prop_assert!(res.is_ok());
        }
    }
}

/// (ring, class, n) combinations the class constructions cover.
fn class_cases() -> Vec<(&'static str, RingClass, usize)> {
    vec![
        ("Z/12", RingClass::Commutative, 3),
        ("Z/12", RingClass::Commutative, 4),
        ("Z", RingClass::Commutative, 3),
        ("M2(GF(2))", RingClass::VonNeumannRegular, 3),
        ("Z/4xGF(3)", RingClass::StableRankOne, 3),
        ("GF(5)", RingClass::StableRankOne, 4),
        ("GF(3)", RingClass::PropertyOne, 3),
        ("Z/9", RingClass::PropertyOne, 3),
        ("Z", RingClass::StableRankMid, 3),
        ("Z", RingClass::Euclidean { m: 2 }, 3),
        ("Z", RingClass::Euclidean { m: 2 }, 4),
        ("Z", RingClass::Euclidean { m: 3 }, 4),
        ("GF(3)", RingClass::StrongEuclidean, 3),
    ]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(40))]

    #[test]
    fn soundness(case in 0..class_cases().len(), seed in any::<u64>(),
                 (i, j) in pair_strategy(4), (k, l) in pair_strategy(4), diag in any::<bool>()) {
        let (spec, class, n) = class_cases()[case];
        prop_assume!(i < n && j < n && k < n && l < n);
        let r: Ring = spec.parse().unwrap();
        let mut g = rng(seed);
        let sigma = random_gl(&r, n, &mut g);
        let [a, b, c] = [0; 3].map(|_| r.random_element(&mut g));
        let (f, bound) = if diag {
            (extract_diag_difference(&sigma, class, i, j, k, l, &a, &b, &c).unwrap(), 3 * class.bound(n))
        } else {
            (extract_offdiag(&sigma, class, i, j, k, l, &a, &b).unwrap(), class.bound(n))
        };
        let report = verify_factorization(&f, &sigma);
        prop_assert!(report.passed(), "{:?}", report);
        prop_assert!(report.conjugators_elementary);
        prop_assert_eq!(f.product.len(), bound);
        let want = if diag {
            r.product_of([&a, &r.sub(&r.mul(&c, sigma.entry(i, i)), &r.mul(sigma.entry(j, j), &c)), &b])
        } else {
            r.product_of([&a, sigma.entry(i, j), &b])
        };
        prop_assert_eq!(&f.target.value, &want);
    }

    #[test]
    fn json_round_trips(r in ring_strategy(), seed in any::<u64>(), n in 3usize..5) {
        let mut g = rng(seed);
        let sigma = random_gl(&r, n, &mut g);
        prop_assert_eq!(wire::matrix_from_json(&wire::matrix_to_json(sigma.mat()), None).unwrap(), sigma.mat().clone());
        let w = random_elementary_word(&r, n, 5, &mut g);
        prop_assert_eq!(wire::word_from_json(&r, n, w.subset(), &wire::word_to_json(&w)).unwrap(), w);
        if r.is_commutative() {
            let f = extract_offdiag(&sigma, RingClass::Commutative, 0, 1, n - 1, 0, &r.one(), &r.one()).unwrap();
            let v = wire::factorization_to_json(&f, false);
            prop_assert_eq!(wire::factorization_from_json(&v).unwrap(), f);
        }
    }

    #[test]
    fn tampering_is_detected(seed in any::<u64>(), pos in 0usize..8) {
        let r = Ring::integers_mod(12).unwrap();
        let mut g = rng(seed);
        let sigma = random_gl(&r, 3, &mut g);
        let f = extract_offdiag(&sigma, RingClass::Commutative, 0, 1, 0, 2, &r.one(), &r.one()).unwrap();
        // a flipped sign changes the product unless that conjugate is an involution
        let mut bad = f.clone();
        let fc = &mut bad.product.factors_mut()[pos];
        fc.sign = fc.sign.flip();
        let conj = GlElement::from_word(&fc.conj);
        let factor = sigma.conjugate_by_element(&conj);
        let involution = factor.mat() == factor.inv();
        prop_assert_eq!(verify_factorization(&bad, &sigma).passed(), involution);
        let mut over = f.clone();
        over.bound = 7;
        prop_assert!(!verify_factorization(&over, &sigma).within_bound);
    }
}

//! Acceptance gate: one `[PASS]` or `[FAIL]` line per criterion. Exits
//! non-zero if any criterion fails.

use std::panic::{self, AssertUnwindSafe};
use std::process::Command;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::Value;

use rdu_core::factorizer::{
    extract_diag_difference, extract_offdiag, verify_factorization, Factorization, RingClass,
};
use rdu_core::matgroup::{route, GlElement, Matrix, Word};
use rdu_core::reduction::{expand_conjugates, reduce_step, ConjProduct, Pair, Sign};
use rdu_core::ring::{Ring, RingElement};
use rdu_core::sample::{random_elementary_word, random_gl};
use rdu_core::search::{min_length_in, GroupTable};

type Outcome = Result<String, String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn ring(spec: &str) -> Ring {
    spec.parse().expect("catalogue ring")
}

fn random_pair<R: Rng>(n: usize, rng: &mut R) -> (usize, usize) {
    let i = rng.gen_range(0..n);
    let j = rng.gen_range(0..n - 1);
    (i, if j >= i { j + 1 } else { j })
}

fn pairs(n: usize) -> Vec<(usize, usize)> {
    (0..n).flat_map(|i| (0..n).filter(move |&j| j != i).map(move |j| (i, j))).collect()
}

fn search(q: &str, jobs: Option<&str>) -> Result<(Value, Duration), String> {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_rdu"));
    cmd.args(["search", "--n", "3", "--q", q]);
    if let Some(j) = jobs {
        cmd.args(["--jobs", j]);
    }
    let start = Instant::now();
    let out = cmd.output().map_err(|e| e.to_string())?;
    let elapsed = start.elapsed();
    if !out.status.success() {
        return Err(format!("search exited with {:?}", out.status.code()));
    }
    let v = serde_json::from_slice(&out.stdout).map_err(|e| e.to_string())?;
    Ok((v, elapsed))
}

fn optimal_bound() -> Outcome {
    let (v2, t2) = search("2", None)?;
    ensure(v2["optimum"] == 2, || format!("GL3(F2) optimum {}", v2["optimum"]))?;
    ensure(t2 < Duration::from_secs(10), || format!("GL3(F2) took {t2:?}"))?;
    let (v3, t3) = search("3", Some("8"))?;
    ensure(v3["optimum"] == 2, || format!("GL3(F3) optimum {}", v3["optimum"]))?;
    ensure(t3 < Duration::from_secs(15 * 60), || format!("GL3(F3) took {t3:?}"))?;
    Ok(format!(
        "GL3(F2) optimum 2 in {:.2}s, GL3(F3) optimum 2 in {:.2}s",
        t2.as_secs_f64(),
        t3.as_secs_f64()
    ))
}

fn check(f: &Factorization, sigma: &GlElement, exact: Option<usize>, cap: usize) -> Result<(), String> {
    let report = verify_factorization(f, sigma);
    ensure(report.passed(), || format!("{}: {report:?}", f.theorem))?;
    ensure(f.product.len() <= cap, || format!("{}: {} factors > {cap}", f.theorem, f.product.len()))?;
    if let Some(e) = exact {
        ensure(f.product.len() == e, || format!("{}: {} factors, expected {e}", f.theorem, f.product.len()))?;
    }
    Ok(())
}

/// Off-diagonal and diagonal extractions on `samples` random matrices, one
/// random index choice each; `exact` demands the count equal the bound.
#[allow(clippy::too_many_arguments)]
fn protocol(
    r: &Ring,
    n: usize,
    class: RingClass,
    samples: usize,
    exact: bool,
    sample: &mut dyn FnMut(&mut ChaCha8Rng) -> GlElement,
    rng: &mut ChaCha8Rng,
    mut inspect: impl FnMut(&Factorization) -> Result<(), String>,
) -> Result<usize, String> {
    let bound = class.bound(n);
    let mut count = 0;
    for _ in 0..samples {
        let sigma = sample(rng);
        let (i, j) = random_pair(n, rng);
        let (k, l) = random_pair(n, rng);
        let [a, b, c] = [0; 3].map(|_| r.random_element(rng));
        let f = extract_offdiag(&sigma, class, i, j, k, l, &a, &b).map_err(|e| format!("{class}: {e}"))?;
        ensure(f.target.value == r.product_of([&a, sigma.entry(i, j), &b]), || "off-diagonal target".into())?;
        check(&f, &sigma, exact.then_some(bound), bound)?;
        inspect(&f)?;
        let c = if class == RingClass::Commutative { r.one() } else { c };
        let d = extract_diag_difference(&sigma, class, i, j, k, l, &a, &b, &c).map_err(|e| format!("{class}: {e}"))?;
        let diff = r.sub(&r.mul(&c, sigma.entry(i, i)), &r.mul(sigma.entry(j, j), &c));
        ensure(d.target.value == r.product_of([&a, &diff, &b]), || "diagonal target".into())?;
        check(&d, &sigma, exact.then_some(3 * bound), 3 * bound)?;
        inspect(&d)?;
        count += 2;
    }
    Ok(count)
}

fn uniform(r: &Ring, n: usize) -> impl FnMut(&mut ChaCha8Rng) -> GlElement + '_ {
    move |g| random_gl(r, n, g)
}

fn commutative() -> Outcome {
    let start = Instant::now();
    let r = ring("Z/12");
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let mut total = protocol(&r, 3, RingClass::Commutative, 200, true, &mut uniform(&r, 3), &mut rng, |_| Ok(()))?;
    total += protocol(&r, 4, RingClass::Commutative, 100, true, &mut uniform(&r, 4), &mut rng, |_| Ok(()))?;
    let t = start.elapsed();
    ensure(t < Duration::from_secs(60), || format!("took {t:?}"))?;
    Ok(format!("{total} factorizations over Z/12, exact 8/24, {:.2}s", t.as_secs_f64()))
}

fn von_neumann_regular() -> Outcome {
    let r = ring("M2(GF(2))");
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let mut noncommuting = 0;
    let mut total = protocol(&r, 3, RingClass::VonNeumannRegular, 200, true, &mut uniform(&r, 3), &mut rng, |f| {
        if f.theorem.to_string().starts_with("diag") {
            noncommuting += 1;
        }
        Ok(())
    })?;
    total += protocol(&r, 4, RingClass::VonNeumannRegular, 100, true, &mut uniform(&r, 4), &mut rng, |_| Ok(()))?;
    Ok(format!("{total} factorizations over M2(GF(2)) ({noncommuting} diagonal with random c), exact 8/24"))
}

fn property_one() -> Outcome {
    let mut total = 0;
    for (spec, seed) in [("GF(3)", 4), ("Z/9", 5)] {
        let r = ring(spec);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let audit = |f: &Factorization| -> Result<(), String> {
            let get = |name: &str| -> Result<RingElement, String> {
                let (_, v) = f
                    .intermediates
                    .iter()
                    .find(|(k, _)| k == name)
                    .ok_or_else(|| format!("intermediate {name} missing"))?;
                r.parse_element(v).map_err(|e| e.to_string())
            };
            let x = get("x")?;
            let x_inv = get("x_inv")?;
            ensure(r.is_one(&r.mul(&x, &x_inv)), || "x x^-1 != 1".into())?;
            ensure(r.is_right_invertible(&get("xi_11")?), || "xi_11 not right invertible".into())?;
            ensure(r.is_zero(&get("rho_12")?), || "rho_12 != 0".into())?;
            get("alpha").map(|_| ())
        };
        total += protocol(&r, 3, RingClass::PropertyOne, 100, false, &mut uniform(&r, 3), &mut rng, audit)?;
    }
    Ok(format!("{total} factorizations over GF(3) and Z/9 within 160/480, intermediates audited"))
}

fn stable_range() -> Outcome {
    let f5 = ring("GF(5)");
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let a = protocol(&f5, 3, RingClass::StableRankOne, 100, true, &mut uniform(&f5, 3), &mut rng, |_| Ok(()))?;
    let z = ring("Z");
    let mut words = |g: &mut ChaCha8Rng| {
        let len = g.gen_range(0..=12);
        GlElement::from_word(&random_elementary_word(&z, 3, len, g))
    };
    let b = protocol(&z, 3, RingClass::StableRankMid, 100, true, &mut words, &mut rng, |_| Ok(()))?;
    Ok(format!("{a} over GF(5) exact 8/24, {b} over Z exact 16/48"))
}

fn euclidean() -> Outcome {
    let z = ring("Z");
    let f3 = ring("GF(3)");
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let words = |n: usize| {
        let z = z.clone();
        move |g: &mut ChaCha8Rng| GlElement::from_word(&random_elementary_word(&z, n, 12, g))
    };
    let cases: [(&Ring, usize, RingClass, usize); 3] = [
        (&z, 3, RingClass::Euclidean { m: 2 }, 16),
        (&z, 4, RingClass::Euclidean { m: 2 }, 8),
        (&f3, 3, RingClass::StrongEuclidean, 160),
    ];
    let mut parts = Vec::new();
    for (r, n, class, expect) in cases {
        ensure(class.bound(n) == expect, || format!("{class} bound {} for n = {n}", class.bound(n)))?;
        let done = if r.is_finite() {
            protocol(r, n, class, 50, true, &mut uniform(r, n), &mut rng, |_| Ok(()))?
        } else {
            protocol(r, n, class, 50, true, &mut words(n), &mut rng, |_| Ok(()))?
        };
        parts.push(format!("{class} over {r} n={n}: {done} exact {expect}"));
    }
    Ok(parts.join("; "))
}

fn reduction_calculus() -> Outcome {
    let r = ring("GF(5)");
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    for _ in 0..1000 {
        let a = random_gl(&r, 3, &mut rng);
        let b = random_gl(&r, 3, &mut rng);
        let w = random_elementary_word(&r, 3, rng.gen_range(1..5), &mut rng);
        let g = GlElement::from_word(&w);
        let next = reduce_step(&Pair::new(a.clone(), b.clone()).map_err(|e| e.to_string())?, &w)
            .map_err(|e| e.to_string())?;
        let ab = a.mul(&b);
        let lhs = ab.conjugate_by_element(&g.inverse().mul(&a)).mul(&ab.inverse().conjugate_by_element(&a));
        ensure(*lhs.mat() == next.product(), || "one-step identity fails".into())?;
    }
    let z12 = ring("Z/12");
    for calls in 0..500 {
        let init_len = rng.gen_range(1..4);
        let mut initial = ConjProduct::empty(&z12, 3);
        for _ in 0..init_len {
            initial.push(Sign::Plus, random_elementary_word(&z12, 3, 2, &mut rng));
        }
        let steps = calls % 6;
        let gs: Vec<Word> = (0..steps).map(|_| random_elementary_word(&z12, 3, 1, &mut rng)).collect();
        let a1 = random_elementary_word(&z12, 3, 2, &mut rng);
        let out = expand_conjugates(&initial, &a1, &gs);
        ensure(out.len() == init_len << steps, || format!("{} factors from {init_len} and {steps} steps", out.len()))?;
    }
    Ok("1000 one-step identities over GL3(GF(5)); 500 expansion counts exact".into())
}

fn routing_and_relations() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let mut checked = 0;
    for spec in ["Z/12", "GF(3)"] {
        let r = ring(spec);
        for n in 3..=5 {
            let sigma = random_gl(&r, n, &mut rng);
            let t = |i, j, x: RingElement| Matrix::transvection(&r, n, i, j, x).expect("valid indices");
            let comm = |a: &Matrix, b: &Matrix| {
                a.mul(b).mul(&a.inverse().expect("invertible")).mul(&b.inverse().expect("invertible"))
            };
            for (i, j) in pairs(n) {
                for (k, l) in pairs(n) {
                    let x = r.random_element(&mut rng);
                    let y = r.random_element(&mut rng);
                    let (tau, rho) = route(&r, n, i, j, k, l).map_err(|e| e.to_string())?;
                    ensure(sigma.conjugate_by(&tau).entry(k, l) == sigma.entry(i, j), || {
                        format!("route ({i},{j})->({k},{l}) over {r}")
                    })?;
                    ensure(t(k, l, x.clone()).conjugate_by(&rho) == t(i, j, x.clone()), || {
                        format!("inverse route ({k},{l})->({i},{j}) over {r}")
                    })?;
                    // (i, j) and (k, l) double as the index pairs of R1-R3
                    ensure(t(i, j, x.clone()).mul(&t(i, j, y.clone())) == t(i, j, r.add(&x, &y)), || "R1".into())?;
                    if i != l && j != k {
                        ensure(comm(&t(i, j, x.clone()), &t(k, l, y.clone())).is_identity(), || "R2".into())?;
                    }
                    if k == j && i != l {
                        ensure(comm(&t(i, j, x.clone()), &t(j, l, y.clone())) == t(i, l, r.mul(&x, &y)), || "R3".into())?;
                    }
                    checked += 1;
                }
            }
        }
    }
    Ok(format!("{checked} index quadruples over Z/12 and GF(3), n = 3, 4, 5"))
}

fn cross_validation() -> Outcome {
    let table = GroupTable::enumerate(3, 2).map_err(|e| e.to_string())?;
    let mut pairs_checked = 0;
    let mut worst = 0;
    for s in 0..table.len() {
        let sigma = GlElement::from_matrix(table.to_matrix(s)).map_err(|e| e.to_string())?;
        let r = sigma.ring().clone();
        let s1 = table.conjugate_set(s);
        for (i, j) in pairs(3) {
            for (k, l) in pairs(3) {
                let f = extract_offdiag(&sigma, RingClass::Commutative, i, j, k, l, &r.one(), &r.one())
                    .map_err(|e| e.to_string())?;
                for fc in f.product.factors() {
                    let idx = table
                        .conjugate_index(s, fc.sign == Sign::Minus, &fc.conj)
                        .ok_or("factor outside GL3(F2)")?;
                    ensure(s1.contains(idx), || format!("sigma {s}: factor outside S_1"))?;
                }
                let target = table
                    .index_of_matrix(&f.target.matrix(&r, 3).map_err(|e| e.to_string())?)
                    .ok_or("target outside GL3(F2)")?;
                let m = min_length_in(&table, &s1, target, 8)
                    .ok_or_else(|| format!("sigma {s}: target unreachable within 8"))?;
                ensure(m <= f.product.len(), || format!("sigma {s}: BFS {m} > {}", f.product.len()))?;
                worst = worst.max(m);
                pairs_checked += 1;
            }
        }
    }
    Ok(format!("{pairs_checked} (sigma, target) pairs over GL3(F2); BFS minimum at most {worst} <= 8"))
}

fn main() {
    let criteria: [(&str, fn() -> Outcome); 9] = [
        ("optimal RDU bound 2 for GL3(F2) and GL3(F3)", optimal_bound),
        ("commutative 8/24 over Z/12", commutative),
        ("von Neumann regular 8/24 over M2(GF(2))", von_neumann_regular),
        ("property (1) within 160/480 over GF(3), Z/9", property_one),
        ("stable range 8/24 and 16/48", stable_range),
        ("Euclidean 16, 8 and strong 160", euclidean),
        ("reduction calculus identities", reduction_calculus),
        ("routing and relations R1-R3", routing_and_relations),
        ("cross-validation with exhaustive search", cross_validation),
    ];
    panic::set_hook(Box::new(|_| {}));
    let mut failed = 0;
    for (idx, (name, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = panic::catch_unwind(AssertUnwindSafe(run)).unwrap_or_else(|p| {
            let msg = p
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_default();
            Err(format!("panicked: {msg}"))
        });
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("[PASS] {}. {name}: {detail} ({secs:.1}s)", idx + 1),
            Err(why) => {
                failed += 1;
                println!("[FAIL] {}. {name}: {why} ({secs:.1}s)", idx + 1);
            }
        }
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed > 0 {
        std::process::exit(1);
    }
}

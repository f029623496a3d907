use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use rdu_core::exec::Execution;
use rdu_core::factorizer::{factorize_batch, Job, JobKind, RingClass};
use rdu_core::ring::Ring;
use rdu_core::sample::random_gl;

fn jobs(spec: &str, class: RingClass, n: usize, count: usize) -> Vec<Job> {
    let ring: Ring = spec.parse().expect("catalogue ring");
    let mut rng = ChaCha8Rng::seed_from_u64(17);
    let pair = |rng: &mut ChaCha8Rng| {
        let i = rng.gen_range(0..n);
        let j = (i + rng.gen_range(1..n)) % n;
        (i, j)
    };
    (0..count)
        .map(|_| {
            let ((i, j), (k, l)) = (pair(&mut rng), pair(&mut rng));
            Job {
                sigma: random_gl(&ring, n, &mut rng),
                class,
                i,
                j,
                k,
                l,
                a: ring.random_element(&mut rng),
                b: ring.random_element(&mut rng),
                kind: JobKind::OffDiagonal,
            }
        })
        .collect()
}

fn bench_factorize(c: &mut Criterion) {
    let workloads = [
        ("commutative Z/12 n=4", jobs("Z/12", RingClass::Commutative, 4, 64)),
        ("banach GF(3) n=3", jobs("GF(3)", RingClass::PropertyOne, 3, 16)),
        ("sr-mid Z n=3", jobs("Z", RingClass::StableRankMid, 3, 32)),
    ];
    let mut modes = vec![("sequential", Execution::Sequential)];
    if Execution::parallel_available() {
        modes.push(("parallel", Execution::Parallel));
    }
    let mut group = c.benchmark_group("factorize_batch");
    group.sample_size(10);
    for (label, batch) in &workloads {
        for &(name, exec) in &modes {
            group.bench_with_input(BenchmarkId::new(name, label), batch, |bch, b| {
                bch.iter(|| factorize_batch(b, exec))
            });
        }
    }
    group.finish();
}

criterion_group!(benches, bench_factorize);
criterion_main!(benches);

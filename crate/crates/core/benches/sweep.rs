use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use poncelet_core::gen::random_pair_of_type;
use poncelet_core::par;
use poncelet_core::poncelet::{default_max_steps, porism_check, PonceletConfig};
use poncelet_core::projective::IntersectionType;
use poncelet_core::Field;

fn configs(p: u64, n: usize) -> Vec<PonceletConfig> {
    let f = Field::prime(p).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(p);
    (0..n)
        .map(|i| {
            let itype = IntersectionType::ALL[i % IntersectionType::ALL.len()];
            let (c, d) = random_pair_of_type(&f, itype, &mut rng).unwrap();
            PonceletConfig::new(c, d).unwrap()
        })
        .collect()
}

fn porism_sweep(c: &mut Criterion) {
    let mut group = c.benchmark_group("porism_sweep");
    group.sample_size(10);
    for p in [31u64, 101] {
        let cfgs = configs(p, 40);
        let steps = default_max_steps(&Field::prime(p).unwrap());
        let check = |cfg: &PonceletConfig| porism_check(cfg, 8, steps, 1).unwrap().pass;
        group.bench_with_input(BenchmarkId::new("sequential", p), &cfgs, |b, cfgs| {
            b.iter(|| par::map_sequential(cfgs, check))
        });
        group.bench_with_input(BenchmarkId::new(if par::is_parallel() { "parallel" } else { "fallback" }, p), &cfgs, |b, cfgs| {
            b.iter(|| par::map(cfgs, check))
        });
    }
    group.finish();
}

criterion_group!(benches, porism_sweep);
criterion_main!(benches);

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use cornertree::algebra::builtin_formula;
use cornertree::profile::{profile4_with, Profile4Options};
use cornertree::stats::{tstar_pvalue_perm, tstar_with};
use cornertree::{Execution, Permutation};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

const MODES: [(&str, Execution); 2] = [("sequential", Execution::Sequential), ("parallel", Execution::Parallel)];

fn random(n: usize, seed: u64) -> Permutation {
    Permutation::random(n, &mut ChaCha8Rng::seed_from_u64(seed))
}

fn tstar(c: &mut Criterion) {
    let mut group = c.benchmark_group("tstar");
    group.sample_size(10);
    for n in [1 << 12, 1 << 15] {
        let pi = random(n, 1);
        for (name, exec) in MODES {
            group.bench_with_input(BenchmarkId::new(name, n), &pi, |b, pi| b.iter(|| tstar_with(pi, exec).unwrap()));
        }
    }
    group.finish();
}

fn profile4(c: &mut Criterion) {
    let mut group = c.benchmark_group("profile4");
    group.sample_size(10);
    let pi = random(1 << 12, 2);
    for (name, exec) in MODES {
        let options = Profile4Options { exec, ..Default::default() };
        group.bench_function(name, |b| b.iter(|| profile4_with(&pi, options).unwrap()));
    }
    group.finish();
}

fn pvalue(c: &mut Criterion) {
    let mut group = c.benchmark_group("tstar_pvalue");
    group.sample_size(10);
    let pi = random(500, 3);
    for (name, exec) in MODES {
        group.bench_function(name, |b| b.iter(|| tstar_pvalue_perm(&pi, 200, 7, exec).unwrap()));
    }
    group.finish();
}

fn formula(c: &mut Criterion) {
    let mut group = c.benchmark_group("formula_2143");
    group.sample_size(10);
    let f = builtin_formula("2143").unwrap();
    let pi = random(1 << 14, 4);
    for (name, exec) in MODES {
        group.bench_function(name, |b| b.iter(|| f.evaluate_with(&pi, exec)));
    }
    group.finish();
}

criterion_group!(benches, tstar, profile4, pvalue, formula);
criterion_main!(benches);

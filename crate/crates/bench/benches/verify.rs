use criterion::{criterion_group, criterion_main, BatchSize, Criterion};

use oaforge_bench::{q4_large_set, strength_workloads};
use oaforge_core::algebraic::q4_oa;
use oaforge_core::{brute_force_strength, expand_shift, verify_large_set, verify_strength};

fn strength(c: &mut Criterion) {
    let mut group = c.benchmark_group("verify_strength");
    for w in strength_workloads().unwrap() {
        group.bench_function(w.name, |b| b.iter(|| verify_strength(&w.array, w.t).unwrap()));
    }
    group.finish();

    let w = &strength_workloads().unwrap()[0];
    c.bench_function("brute_force_strength sylvester3 n=4 k=16", |b| {
        b.iter(|| brute_force_strength(&w.array, w.t).unwrap())
    });
}

fn large_sets(c: &mut Criterion) {
    let (a, p) = q4_oa(3, 10).unwrap();
    c.bench_function("expand_shift q4t3 q=3 k=10", |b| b.iter(|| expand_shift(&a, &p).unwrap()));
    c.bench_function("verify_large_set q4t3 q=3 k=10", |b| {
        b.iter_batched(|| q4_large_set().unwrap(), |l| verify_large_set(&l, 3).unwrap(), BatchSize::LargeInput)
    });
}

criterion_group! {
    name = benches;
    config = Criterion::default().sample_size(10);
    targets = strength, large_sets
}
criterion_main!(benches);

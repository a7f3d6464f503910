use std::hint::black_box;

use criterion::{criterion_group, criterion_main, Criterion};
use polord::completion::complete_preorder;
use polord::extension::{extend_interpretation, random_instance, InstanceShape};
use polord::proof::{build_universe, congruence_closure};
use polord::{find_countermodel, prove, CalculusConfig, ModelFilter, SearchBudget, SizeBounds, UniversePolicy};
use polord_bench::{antichain, chain, key_problem, part3};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn proof_search(c: &mut Criterion) {
    let (thy, goal) = key_problem();
    c.bench_function("prove/key/base", |b| {
        b.iter(|| {
            prove(
                black_box(&thy),
                &goal,
                &CalculusConfig::base(),
                UniversePolicy::AppClosure(1),
                &SearchBudget::default(),
            )
        })
    });
    let (thy, goal) = part3();
    c.bench_function("prove/part3/wc", |b| {
        b.iter(|| {
            prove(
                black_box(&thy),
                &goal,
                &CalculusConfig::wc(),
                UniversePolicy::AppClosure(1),
                &SearchBudget::default(),
            )
        })
    });
}

fn model_search(c: &mut Criterion) {
    let (thy, goal) = part3();
    let mut g = c.benchmark_group("countermodel");
    g.sample_size(10);
    g.bench_function("part3/any", |b| {
        b.iter(|| find_countermodel(black_box(&thy), &goal, &SizeBounds::default(), ModelFilter::default()))
    });
    g.bench_function("part3/wc-exhaustive", |b| {
        b.iter(|| find_countermodel(black_box(&thy), &goal, &SizeBounds::default(), ModelFilter::wc()))
    });
    g.finish();
}

fn completion(c: &mut Criterion) {
    for (name, p) in [
        ("chain-4", chain(4)),
        ("antichain-4", antichain(4)),
        ("chain-8", chain(8)),
    ] {
        c.bench_function(&format!("complete/{name}"), |b| {
            b.iter(|| complete_preorder(black_box(&p)))
        });
    }
}

fn extension(c: &mut Criterion) {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let inst = random_instance(&mut rng, InstanceShape::default(), 500).expect("an instance");
    c.bench_function("extend/random", |b| b.iter(|| extend_interpretation(black_box(&inst))));
}

fn congruence(c: &mut Criterion) {
    let (thy, goal) = key_problem();
    let terms = build_universe(&thy, &goal, UniversePolicy::AppClosure(2), &SearchBudget::default());
    c.bench_function("congruence/key-apps2", |b| {
        b.iter(|| congruence_closure(black_box(&thy), &terms))
    });
}

criterion_group!(benches, proof_search, model_search, completion, extension, congruence);
criterion_main!(benches);

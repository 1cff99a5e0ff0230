use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BatchSize, Criterion};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use tqcsp_bench::gadget_language;
use tqcsp_core::classifier::classify;
use tqcsp_core::definability::{goh_search, ordhorn_definition};
use tqcsp_core::polymorphisms::{preserves, BinaryOp, ImageTable, Operation};
use tqcsp_core::qcsp::{evaluate, random_instance};
use tqcsp_core::sweep::{run_suite, Suite};
use tqcsp_core::{catalog, enumerate_weak_orders, parse, pp_evaluate, pp_search, Bounds, Language};

fn orders(c: &mut Criterion) {
    c.bench_function("enumerate_weak_orders/6", |b| b.iter(|| enumerate_weak_orders(black_box(6)).unwrap()));
}

fn polymorphisms(c: &mut Criterion) {
    let lele = Operation::Binary(BinaryOp::Lele);
    let i = catalog::i();
    c.bench_function("preserves/lele-on-I", |b| b.iter(|| preserves(&lele, black_box(&i))));
    c.bench_function("image_table/lele-arity-3", |b| b.iter(|| ImageTable::new(&lele, black_box(3))));
}

fn pp(c: &mut Criterion) {
    let lang = Language::new(vec![catalog::betwc()]).unwrap();
    let f = parse("E u. E v. betwc(x,y,u) & betwc(x,y,v) & betwc(u,v,z)").unwrap();
    c.bench_function("pp_evaluate/gadget", |b| b.iter(|| pp_evaluate(black_box(&f), &lang, &["x", "y", "z"]).unwrap()));
    let bounds = Bounds { max_existentials: 2, max_atoms: 3, ..Bounds::default() };
    c.bench_function("pp_search/I-from-BetwC", |b| b.iter(|| pp_search(&catalog::i(), &lang, &bounds).unwrap()));
}

fn definability(c: &mut Criterion) {
    let s = catalog::s();
    c.bench_function("ordhorn_definition/S", |b| b.iter(|| ordhorn_definition(black_box(&s)).unwrap()));
    let bounds = Bounds::default();
    c.bench_function("goh_search/I", |b| b.iter(|| goh_search(&catalog::i(), &bounds).unwrap()));
}

fn qcsp(c: &mut Criterion) {
    let lang = gadget_language();
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    c.bench_function("qcsp/random-12-vars", |b| {
        b.iter_batched(|| random_instance(&mut rng, &lang, 12, 8, 0.5), |inst| evaluate(&inst), BatchSize::SmallInput)
    });
}

fn pipeline(c: &mut Criterion) {
    let mut group = c.benchmark_group("pipeline");
    group.sample_size(10);
    group.bench_function("sweep/ord-horn-arity-3", |b| b.iter(|| run_suite(Suite::OrdHorn, 3).unwrap()));
    let lang = Language::new(vec![catalog::betwc()]).unwrap();
    group.bench_function("classify/BetwC", |b| b.iter(|| classify(&lang, &Bounds::default()).unwrap()));
    group.finish();
}

criterion_group!(benches, orders, polymorphisms, pp, definability, qcsp, pipeline);
criterion_main!(benches);

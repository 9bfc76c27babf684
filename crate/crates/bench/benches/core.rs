use std::hint::black_box;

use criterion::{criterion_group, criterion_main, Criterion};
use goedel_core::audit::{canonical_script, check_script, minimal_inconsistent_subsets};
use goedel_core::codec::{index_of, sub_num, Enumerator};
use goedel_core::diag::goedel_sentence;
use goedel_core::kernel::{check_proof, identity_proof};
use goedel_core::modal::{find_model, is_valid, schema_verdicts};
use goedel_core::{decode_formula, encode_formula, parse_formula, parse_modal, Logic, Nat};

fn codec(c: &mut Criterion) {
    let f = parse_formula("forall x1. (Dem(sub(x0, x1)) -> ~S(S(x1)) = diag(x0))").unwrap();
    let g = encode_formula(&f);
    c.bench_function("encode", |b| b.iter(|| encode_formula(black_box(&f))));
    c.bench_function("decode", |b| b.iter(|| decode_formula(black_box(&g)).unwrap()));
    let e = parse_formula("~Dem(sub(x0, x0))").unwrap();
    index_of(&e).unwrap();
    c.bench_function("index_of E (warm)", |b| b.iter(|| index_of(black_box(&e)).unwrap()));
    c.bench_function("enumerate first 300 (cold)", |b| {
        b.iter(|| Enumerator::new().first(black_box(300)).unwrap())
    });
    let q = Nat::from(169u64);
    c.bench_function("sub_num(q, q)", |b| {
        b.iter(|| sub_num(black_box(&q), black_box(&q)).unwrap())
    });
    c.bench_function("goedel_sentence", |b| b.iter(|| goedel_sentence().unwrap()));
}

fn kernel(c: &mut Criterion) {
    let p = identity_proof(&parse_formula("Dem(sub(x0, x0)) -> ~x0 = 0").unwrap());
    c.bench_function("check identity proof", |b| b.iter(|| check_proof(black_box(&p))));
}

fn audit(c: &mut Criterion) {
    let s = canonical_script();
    c.bench_function("check canonical script", |b| {
        b.iter(|| check_script(black_box(&s)).unwrap())
    });
    c.bench_function("minimal inconsistent subsets", |b| {
        b.iter(|| minimal_inconsistent_subsets(black_box(&s)).unwrap())
    });
}

fn modal(c: &mut Criterion) {
    let loeb = parse_modal("[]([]p0 -> p0) -> []p0").unwrap();
    let liar = parse_modal("[]p0 <-> ~[]p0").unwrap();
    c.bench_function("tableau Loeb GL", |b| {
        b.iter(|| is_valid(black_box(&loeb), Logic::GL).unwrap())
    });
    c.bench_function("search liar K up to 6", |b| {
        b.iter(|| find_model(black_box(&liar), Logic::K, 6).unwrap())
    });
    c.bench_function("schema verdicts", |b| b.iter(|| schema_verdicts().unwrap()));
}

criterion_group!(benches, codec, kernel, audit, modal);
criterion_main!(benches);

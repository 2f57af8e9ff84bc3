use criterion::{black_box, criterion_group, criterion_main, Criterion};

use ordtopo_bench::{convergent_families, e1_interval, long_sequence};
use ordtopo_core::nets::{eventually_in, order_converges, Family};
use ordtopo_core::theorems::verify_example_e1;
use ordtopo_core::topology::{check_quasi_order_closed, is_order_open};
use ordtopo_core::{Carrier, SearchConfig, SetExpr};

fn lattice(c: &mut Criterion) {
    let x = long_sequence(64);
    let y = long_sequence(48).negate();
    c.bench_function("sup/tail-seq/64", |b| {
        b.iter(|| black_box(&x).sup(black_box(&y)).unwrap())
    });
    c.bench_function("abs/tail-seq/64", |b| {
        b.iter(|| black_box(&x).sub(&y).unwrap().abs())
    });
}

fn nets(c: &mut Criterion) {
    for (name, f, x) in convergent_families(4) {
        c.bench_function(&format!("order-converges/{name}"), |b| {
            b.iter(|| order_converges(&f, &x).unwrap())
        });
        c.bench_function(&format!("values/{name}/1000"), |b| {
            b.iter(|| f.values(0..1000).unwrap())
        });
    }
    let outside = SetExpr::complement(e1_interval());
    c.bench_function("eventually-in/shift", |b| {
        b.iter(|| eventually_in(&Family::shift(), &outside).unwrap())
    });
}

fn search(c: &mut Criterion) {
    let cfg = SearchConfig::default();
    let mut g = c.benchmark_group("search");
    g.sample_size(20);
    g.bench_function("order-open/e1", |b| {
        b.iter(|| is_order_open(&e1_interval(), Carrier::TailSeq, &cfg).unwrap())
    });
    g.bench_function("quasi-closed/tail-zero", |b| {
        b.iter(|| check_quasi_order_closed(&SetExpr::TailZero, Carrier::TailSeq, &cfg).unwrap())
    });
    g.bench_function("verify/example-e1", |b| {
        b.iter(|| verify_example_e1().unwrap())
    });
    g.finish();
}

criterion_group!(benches, lattice, nets, search);
criterion_main!(benches);

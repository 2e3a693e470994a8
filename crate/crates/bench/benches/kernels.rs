//! Benchmarks for the hot paths: bit-packed duality, bounded minimum
//! distance, stabilizer chains on the wreath centralizers, the
//! partition-refinement automorphism search, and isotropic enumeration.

use criterion::{black_box, criterion_group, criterion_main, Criterion};
use sdsearch_bench::{additive_batch, golay, random_self_dual_72};
use sdsearch_core::extend;
use sdsearch_core::gf4;
use sdsearch_core::perm::{wreath_centralizer, GroupKind};
use std::ops::ControlFlow;

fn bench_gf2(c: &mut Criterion) {
    let code = random_self_dual_72();
    c.bench_function("dual [72,36]", |b| b.iter(|| black_box(&code).dual()));
    let g24 = golay();
    c.bench_function("min distance golay exact", |b| {
        b.iter(|| black_box(&g24).min_distance(None).unwrap())
    });
    c.bench_function("min distance [72,36] bound 15", |b| {
        b.iter(|| black_box(&code).min_distance(Some(15)).unwrap())
    });
}

fn bench_groups(c: &mut Criterion) {
    c.bench_function("wreath centralizer order-2 at 72", |b| {
        b.iter(|| wreath_centralizer(GroupKind::D8, 72).unwrap())
    });
    c.bench_function("automorphism group golay", |b| {
        b.iter(|| sdsearch_core::equiv::automorphism_group(&golay()).unwrap())
    });
}

fn bench_isotropic(c: &mut Criterion) {
    // the standard Hermitian space of F4-dimension 6 has 891 maximal
    // isotropic subspaces
    let mut gram = Vec::new();
    for i in 0..6 {
        let mut row = gf4::F4Vector::zeros(6);
        row.set(i, gf4::F4::ONE);
        gram.push(row);
    }
    let space = extend::HermitianSpace {
        basis: (0..6)
            .map(|i| {
                let mut v = sdsearch_core::bits::BitVec::zeros(12);
                v.set(2 * i, true);
                v
            })
            .collect(),
        action: vec![sdsearch_core::bits::BitVec::zeros(12); 12],
        gram,
    };
    c.bench_function("max isotropic stream rank 3", |b| {
        b.iter(|| {
            let mut count = 0u64;
            extend::for_each_max_isotropic(black_box(&space), |_| {
                count += 1;
                ControlFlow::Continue(())
            })
            .unwrap();
            count
        })
    });
}

fn bench_filter(c: &mut Criterion) {
    let batch = additive_batch(5, 32);
    c.bench_function("lift distance batch of 32 length-5", |b| {
        b.iter(|| {
            let mut acc = 0usize;
            for x in &batch {
                let e = gf4::phi_lift(black_box(x));
                if let gf4::F4Distance::Exact(d) = e.min_distance_bounded(7).unwrap() {
                    acc += d;
                }
            }
            acc
        })
    });
}

criterion_group!(benches, bench_gf2, bench_groups, bench_isotropic, bench_filter);
criterion_main!(benches);

//! Benchmarks for the hot kernels: Chevalley table construction,
//! exhaustive Jacobi verification, centralisers, p-th powers and
//! subalgebra generation at the E7/E8 scale.

use criterion::{criterion_group, criterion_main, Criterion};
use modlie::chevalley::ChevalleyZ;
use modlie::rootsys::{RootSystem, TypeLabel};

fn bench_build(c: &mut Criterion) {
    c.bench_function("build_e7_table", |b| {
        let rs = RootSystem::new(TypeLabel::E, 7).unwrap();
        b.iter(|| ChevalleyZ::new(&rs))
    });
    c.bench_function("build_e8_table", |b| {
        let rs = RootSystem::new(TypeLabel::E, 8).unwrap();
        b.iter(|| ChevalleyZ::new(&rs))
    });
}

fn bench_jacobi(c: &mut Criterion) {
    let chev = ChevalleyZ::new(&RootSystem::new(TypeLabel::E, 8).unwrap());
    let mut g = c.benchmark_group("jacobi");
    g.sample_size(10);
    g.bench_function("e8_exhaustive", |b| {
        b.iter(|| assert!(chev.verify_jacobi()))
    });
    g.finish();
}

fn bench_linear(c: &mut Criterion) {
    let chev = ChevalleyZ::new(&RootSystem::new(TypeLabel::E, 7).unwrap());
    let alg = chev.over_fp(5);
    let h = alg.from_coords(&[
        (chev.coroot_index(0), 2),
        (chev.coroot_index(1), 1),
        (chev.coroot_index(2), 2),
        (chev.coroot_index(4), 3),
        (chev.coroot_index(5), 4),
        (chev.coroot_index(6), 3),
    ]);
    c.bench_function("centralizer_e7", |b| b.iter(|| alg.centralizer_elem(&h)));
    c.bench_function("p_power_e7", |b| {
        let x: Vec<u64> = (0..alg.dim() as u64).map(|i| i % 5).collect();
        b.iter(|| alg.p_power(&x).unwrap())
    });
}

fn bench_generate(c: &mut Criterion) {
    let rs = RootSystem::new(TypeLabel::E, 8).unwrap();
    let chev = ChevalleyZ::new(&rs);
    let alg = chev.over_fp(31);
    let e_top = alg.basis_element(rs.root_index(&rs.highest_root).unwrap());
    let mut reg_neg = alg.zero();
    for i in 0..8 {
        let mut r = vec![0i64; 8];
        r[i] = -1;
        reg_neg[rs.root_index(&r).unwrap()] = 1;
    }
    let mut g = c.benchmark_group("generate");
    g.sample_size(10);
    g.bench_function("witt_e8_f31", |b| {
        b.iter(|| {
            let s = alg.generate_subalgebra(&[e_top.clone(), reg_neg.clone()]);
            assert_eq!(s.dim(), 31);
        })
    });
    g.finish();
}

criterion_group!(
    benches,
    bench_build,
    bench_jacobi,
    bench_linear,
    bench_generate
);
criterion_main!(benches);

use criterion::{black_box, criterion_group, criterion_main, BenchmarkId, Criterion};
use ratarnoldi::krylov::ArnoldiDecomposition;
use ratarnoldi::linalg::factor_auto;
use ratarnoldi::solvers::{ra_solve, ShiftInvertOperator};
use ratarnoldi::SolveOptions;
use ratarnoldi_bench::shaw;

fn factorization(c: &mut Criterion) {
    let mut group = c.benchmark_group("factor_shifted");
    for n in [64, 128, 256] {
        let p = shaw(n);
        let shifted = p.a.shifted(1e-9);
        group.bench_with_input(BenchmarkId::from_parameter(n), &shifted, |bch, m| {
            bch.iter(|| factor_auto(black_box(m)).unwrap())
        });
    }
    group.finish();
}

fn arnoldi(c: &mut Criterion) {
    let p = shaw(128);
    let op = ShiftInvertOperator::new(&p.a, 1e-9).unwrap();
    c.bench_function("arnoldi_15_steps_n128", |bch| {
        bch.iter(|| {
            let mut d = ArnoldiDecomposition::start(&op, &p.b).unwrap();
            for _ in 0..15 {
                d = d.extend(&op).unwrap();
            }
            black_box(d.m())
        })
    });
}

fn ra_end_to_end(c: &mut Criterion) {
    let p = shaw(64);
    let opts = SolveOptions::with_max_iter(15);
    c.bench_function("ra_solve_shaw64", |bch| {
        bch.iter(|| ra_solve(&p.a, &p.b, 1e-9, &opts, p.x_true.as_deref()).unwrap())
    });
}

criterion_group!(benches, factorization, arnoldi, ra_end_to_end);
criterion_main!(benches);

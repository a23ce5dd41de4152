use criterion::{black_box, criterion_group, criterion_main, Criterion};

use weightlab::labels::{count, GroupKind};
use weightlab::par;
use weightlab::roots::GlobalContext;
use weightlab::symplectic::{default_grid, verify_section3, Tamper};

fn contexts() -> Vec<(GlobalContext, u64)> {
    let mut out = Vec::new();
    for q in [2u64, 3, 4, 5, 7] {
        for eta in [1i8, -1] {
            for ell in [2u64, 3, 5, 7] {
                if let Ok(ctx) = GlobalContext::new(q, eta, ell) {
                    for n in 1..=4 {
                        out.push((ctx, n));
                    }
                }
            }
        }
    }
    out
}

fn label_counts(c: &mut Criterion) {
    let items = contexts();
    let work = |(ctx, n): &(GlobalContext, u64)| count(ctx, *n, GroupKind::Sl);
    let mut g = c.benchmark_group("label_counts");
    g.sample_size(10);
    g.bench_function("parallel", |b| b.iter(|| black_box(par::map(&items, work))));
    g.bench_function("sequential", |b| b.iter(|| black_box(par::map_seq(&items, work))));
    g.finish();
}

fn matrix_grid(c: &mut Criterion) {
    let points = default_grid();
    let mut g = c.benchmark_group("matrix_grid");
    g.sample_size(10);
    g.bench_function("verify", |b| b.iter(|| black_box(verify_section3(&points, Tamper::None).unwrap())));
    g.finish();
}

criterion_group!(benches, label_counts, matrix_grid);
criterion_main!(benches);

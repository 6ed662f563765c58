use std::hint::black_box;

use abc_core::specfun::{bessel_i_scaled, gamma_ln, tricomi_u, whittaker_w};
use abc_core::RealOrder;
use criterion::{criterion_group, criterion_main, Criterion};

fn specfun(c: &mut Criterion) {
    let nu = RealOrder::new(1.3).unwrap();
    c.bench_function("bessel_i_scaled", |b| b.iter(|| bessel_i_scaled(nu, black_box(7.5)).unwrap()));
    c.bench_function("gamma_ln", |b| b.iter(|| gamma_ln(black_box(12.7)).unwrap()));
    c.bench_function("tricomi_u", |b| b.iter(|| tricomi_u(black_box(0.7), 2.3, 1.9).unwrap()));
    c.bench_function("whittaker_w", |b| b.iter(|| whittaker_w(black_box(1.4), 0.8, 3.2).unwrap()));
}

criterion_group!(benches, specfun);
criterion_main!(benches);

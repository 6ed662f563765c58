use std::hint::black_box;

use abc_core::amplitude::{green_partial_wave, green_q_integral};
use abc_core::{EndpointPair, FixedEnergy, PhysParams, SphericalPoint, TruncationSpec};
use criterion::{criterion_group, criterion_main, Criterion};

fn setup(flux: f64) -> (PhysParams, EndpointPair, FixedEnergy, TruncationSpec) {
    let params = PhysParams::new(1.0, -1.0, flux).unwrap();
    let pts = EndpointPair::new(
        SphericalPoint::new(1.0, 0.9, 0.2).unwrap(),
        SphericalPoint::new(2.0, 2.0, 1.1).unwrap(),
    );
    let fe = FixedEnergy::new(&params, -0.2).unwrap();
    (params, pts, fe, TruncationSpec::default())
}

fn amplitude(c: &mut Criterion) {
    let mut g = c.benchmark_group("amplitude");
    for flux in [0.0, 0.3] {
        let (params, pts, fe, trunc) = setup(flux);
        g.bench_function(format!("q_integral/flux={flux}"), |b| {
            b.iter(|| green_q_integral(black_box(&params), &pts, &fe, &trunc).unwrap())
        });
        g.bench_function(format!("partial_wave/flux={flux}"), |b| {
            b.iter(|| green_partial_wave(black_box(&params), &pts, &fe, &trunc).unwrap())
        });
    }
    g.finish();
}

criterion_group!(benches, amplitude);
criterion_main!(benches);

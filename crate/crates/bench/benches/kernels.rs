use std::f64::consts::TAU;
use std::hint::black_box;

use criterion::{criterion_group, criterion_main, Criterion};
use isowave::hamlab::{Domain, Lab, Model, ModelKind};
use isowave::kinetic::{collision_rate, QuadSettings};
use isowave::triads::Coupling;
use isowave::{Cutoffs, PhysicalParams, PowerLawSpectrum, Wavevector};

fn v_squared(c: &mut Criterion) {
    let coupling = Coupling::new(PhysicalParams::new(1e-4, 1.0, 1.0, 1.0).unwrap());
    let k = [1.0, 0.7, 0.45];
    let w = [1.3, 0.9, 0.4];
    c.bench_function("v_squared_raw", |b| {
        b.iter(|| coupling.v_squared_raw(black_box(k), black_box(w)))
    });
}

fn collision(c: &mut Criterion) {
    let params = PhysicalParams::new(0.0, 1.0, 1.0, 1.0).unwrap();
    let law = PowerLawSpectrum::new(1.0, -3.5, -0.5).unwrap();
    let quad = QuadSettings::default().with_cutoffs(Cutoffs::around(1.0, 1.0, 2.0).unwrap());
    let node = Wavevector::new(1.0, 1.0).unwrap();
    c.bench_function("collision_rate", |b| {
        b.iter(|| collision_rate(&law, black_box(node), &params, &quad).unwrap())
    });
}

fn hamlab_rhs(c: &mut Criterion) {
    let lab = Lab::new(
        Model::standard(ModelKind::RotatingNonlinearSW),
        Domain::horizontal(64, 64, TAU, TAU).unwrap(),
    )
    .unwrap();
    let state = lab.random_state(1, 1e-2);
    c.bench_function("hamlab_rhs_64x64", |b| {
        b.iter(|| lab.rhs(black_box(&state)).unwrap())
    });
    let lab = Lab::new(
        Model::standard(ModelKind::RotatingInternalWaves),
        Domain::cube(16).unwrap(),
    )
    .unwrap();
    let state = lab.random_state(1, 1e-3);
    c.bench_function("hamlab_rhs_16cube", |b| {
        b.iter(|| lab.rhs(black_box(&state)).unwrap())
    });
}

criterion_group!(benches, v_squared, collision, hamlab_rhs);
criterion_main!(benches);

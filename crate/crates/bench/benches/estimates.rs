use std::hint::black_box;
use std::sync::Arc;

use criterion::{criterion_group, criterion_main, Criterion};

use nearquad::estimates::{estimate_curve, estimate_surface, EstimateOptions};
use nearquad::geometry::{CurveDiscretization, DirectionSpec, FourierTorus, Potato, SurfaceDiscretization};
use nearquad::potentials::{DensitySpec, KernelSpec, Layer, LayerPotential};
use nearquad::rules::{est_factor, gauss_legendre_rule};
use nearquad::targets::{generate, Source, TargetGenerator};
use nearquad::{Complex64, HalfIntegerP, RuleKind, TargetPoint};

fn rules(c: &mut Criterion) {
    c.bench_function("gauss_legendre_rule/64", |b| b.iter(|| gauss_legendre_rule(black_box(64)).unwrap()));
    let t0 = Complex64::new(0.3, 0.2);
    c.bench_function("est_factor/gauss-legendre", |b| {
        b.iter(|| est_factor(RuleKind::GaussLegendre, black_box(t0), 16, HalfIntegerP::THREE_HALVES).unwrap())
    });
}

fn curve(c: &mut Criterion) {
    let disc = CurveDiscretization::with_rule(Arc::new(Potato::default()), RuleKind::GaussLegendre, 16, 20).unwrap();
    let pot = LayerPotential::new(KernelSpec::harmonic(Layer::Double), DensitySpec::Constant(1.0), HalfIntegerP::ONE);
    let targets = level_targets(Source::Curve(&disc));
    let opts = EstimateOptions::default();
    c.bench_function("estimate_curve/potato-gl-20x16", |b| {
        b.iter(|| targets.iter().map(|x| estimate_curve(&disc, &pot, x, &opts).unwrap().value).sum::<f64>())
    });
}

fn surface(c: &mut Criterion) {
    let pot = LayerPotential::new(KernelSpec::harmonic(Layer::Double), DensitySpec::CosSSinT, HalfIntegerP::THREE_HALVES);
    let opts = EstimateOptions::default();
    for (name, specs) in [
        ("trapezoidal-50x150", [DirectionSpec::trapezoidal(50), DirectionSpec::trapezoidal(150)]),
        ("gauss-legendre-12x36", [DirectionSpec::gauss_legendre(8, 12), DirectionSpec::gauss_legendre(8, 36)]),
    ] {
        let disc = SurfaceDiscretization::with_rules(Arc::new(FourierTorus::default_perturbed()), specs).unwrap();
        let targets: Vec<TargetPoint> =
            generate(&TargetGenerator::RandomNormalOffset { h: 0.3, count: 10 }, Source::Surface(&disc), 7)
                .unwrap()
                .into_iter()
                .map(|t| t.point)
                .collect();
        c.bench_function(&format!("estimate_surface/{name}"), |b| {
            b.iter(|| targets.iter().map(|x| estimate_surface(&disc, &pot, x, &opts).unwrap().value).sum::<f64>())
        });
    }
}

fn level_targets(source: Source) -> Vec<TargetPoint> {
    generate(&TargetGenerator::LevelSet { level: 1.1, count: 10 }, source, 7)
        .unwrap()
        .into_iter()
        .map(|t| t.point)
        .collect()
}

criterion_group! {
    name = benches;
    config = Criterion::default().sample_size(20);
    targets = rules, curve, surface
}
criterion_main!(benches);

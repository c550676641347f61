//! Target-point generators for experiments.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{invalid, Result};
use crate::geometry::{complexify_planar, CurveDiscretization, SurfaceDiscretization, TargetPoint};
use crate::rng::Rng;
use crate::rules::{joukowski, RuleKind};

/// Ways of placing evaluation points near a geometry.
#[derive(Debug, Clone, PartialEq)]
pub enum TargetGenerator {
    /// origin + (i/(n_u−1))·u + (j/(n_v−1))·v.
    PlaneGrid { origin: [f64; 3], u: [f64; 3], v: [f64; 3], counts: [usize; 2] },
    /// x = ω(t) for t on a grid in the complex parameter plane (planar curves).
    ComplexifiedGrid { re: (f64, f64), im: (f64, f64), counts: [usize; 2] },
    /// γ + d·n̂ with parameters uniform over the domain and d ~ U(−h, h).
    RandomNormalOffset { h: f64, count: usize },
    /// Pre-images on a level set: Bernstein radius `level` on a random
    /// Gauss-Legendre panel, or |Im t| = `level` for the trapezoidal rule.
    LevelSet { level: f64, count: usize },
    /// Points on a torus of the given radii, on an n_s × n_t grid.
    ToroidalShell { major: f64, minor: f64, counts: [usize; 2] },
    List(Vec<TargetPoint>),
}

/// A target, with its pre-image when the generator constructs one.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GeneratedTarget {
    pub point: TargetPoint,
    /// Global parameter t0 with R²(t0) = 0 (complexified and level-set targets).
    pub preimage: Option<Complex64>,
}

impl GeneratedTarget {
    fn plain(point: TargetPoint) -> Self {
        GeneratedTarget { point, preimage: None }
    }
}

/// What the targets are generated around.
#[derive(Debug, Clone, Copy)]
pub enum Source<'a> {
    Curve(&'a CurveDiscretization),
    Surface(&'a SurfaceDiscretization),
}

impl Source<'_> {
    fn dim(&self) -> usize {
        match self {
            Source::Curve(d) => d.dim,
            Source::Surface(_) => 3,
        }
    }
}

fn lin(a: f64, b: f64, k: usize, n: usize) -> f64 {
    if n <= 1 {
        a
    } else {
        a + (b - a) * k as f64 / (n - 1) as f64
    }
}

fn point(v: [f64; 3], dim: usize) -> TargetPoint {
    TargetPoint { coords: v, dim }
}

/// Generates targets; random generators draw from a stream seeded by `seed`.
pub fn generate(generator: &TargetGenerator, source: Source<'_>, seed: u64) -> Result<Vec<GeneratedTarget>> {
    let mut rng = Rng::new(seed);
    let dim = source.dim();
    match generator {
        TargetGenerator::List(points) => {
            if points.iter().any(|p| p.dim != dim) {
                return invalid(format!("listed targets must have {dim} coordinates"));
            }
            Ok(points.iter().copied().map(GeneratedTarget::plain).collect())
        }
        TargetGenerator::PlaneGrid { origin, u, v, counts } => {
            let mut out = Vec::with_capacity(counts[0] * counts[1]);
            for i in 0..counts[0] {
                for j in 0..counts[1] {
                    let (a, b) = (lin(0.0, 1.0, i, counts[0]), lin(0.0, 1.0, j, counts[1]));
                    let p: [f64; 3] = std::array::from_fn(|k| origin[k] + a * u[k] + b * v[k]);
                    out.push(GeneratedTarget::plain(point(p, dim)));
                }
            }
            Ok(out)
        }
        TargetGenerator::ComplexifiedGrid { re, im, counts } => {
            let Source::Curve(disc) = source else {
                return invalid("complexified grids need a planar curve");
            };
            let chart = disc.chart.as_ref().ok_or_else(|| crate::Error::InvalidArgument("no analytic chart".into()))?;
            let mut out = Vec::with_capacity(counts[0] * counts[1]);
            for i in 0..counts[0] {
                for j in 0..counts[1] {
                    let t = Complex64::new(lin(re.0, re.1, i, counts[0]), lin(im.0, im.1, j, counts[1]));
                    out.push(GeneratedTarget { point: complexify_planar(chart.as_ref(), t)?, preimage: Some(t) });
                }
            }
            Ok(out)
        }
        TargetGenerator::RandomNormalOffset { h, count } => random_normal_offset(source, *h, *count, &mut rng),
        TargetGenerator::LevelSet { level, count } => {
            let Source::Curve(disc) = source else {
                return invalid("level-set targets need a planar curve");
            };
            level_set(disc, *level, *count, &mut rng)
        }
        TargetGenerator::ToroidalShell { major, minor, counts } => {
            if dim != 3 {
                return invalid("toroidal shells live in three dimensions");
            }
            let mut out = Vec::with_capacity(counts[0] * counts[1]);
            for i in 0..counts[0] {
                for j in 0..counts[1] {
                    let s = 2.0 * PI * i as f64 / counts[0] as f64;
                    let t = 2.0 * PI * j as f64 / counts[1] as f64;
                    let rho = major + minor * t.cos();
                    out.push(GeneratedTarget::plain(TargetPoint::new3(rho * s.cos(), rho * s.sin(), minor * t.sin())));
                }
            }
            Ok(out)
        }
    }
}

fn random_normal_offset(source: Source<'_>, h: f64, count: usize, rng: &mut Rng) -> Result<Vec<GeneratedTarget>> {
    if !(h >= 0.0) {
        return invalid("offset h must be nonnegative");
    }
    let mut out = Vec::with_capacity(count);
    match source {
        Source::Surface(disc) => {
            let chart = disc.chart.as_ref().ok_or_else(|| crate::Error::InvalidArgument("no analytic chart".into()))?;
            let [is, it] = chart.base_intervals();
            for _ in 0..count {
                let s = rng.uniform_in(is.0, is.1);
                let t = rng.uniform_in(it.0, it.1);
                let d = rng.uniform_in(-h, h);
                let f = chart.frame(Complex64::new(s, 0.0), Complex64::new(t, 0.0));
                let (a, b) = (f.ds.map(|c| c.re), f.dt.map(|c| c.re));
                let n = [a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]];
                let len = (n[0] * n[0] + n[1] * n[1] + n[2] * n[2]).sqrt();
                let p: [f64; 3] = std::array::from_fn(|k| f.pos[k].re + d * n[k] / len);
                out.push(GeneratedTarget::plain(TargetPoint::new3(p[0], p[1], p[2])));
            }
        }
        Source::Curve(disc) => {
            if disc.dim != 2 {
                return invalid("normal offsets on curves need a planar curve");
            }
            let chart = disc.chart.as_ref().ok_or_else(|| crate::Error::InvalidArgument("no analytic chart".into()))?;
            let (lo, hi) = chart.base_interval();
            for _ in 0..count {
                let t = rng.uniform_in(lo, hi);
                let d = rng.uniform_in(-h, h);
                let (g, dg) = chart.eval_d1(Complex64::new(t, 0.0));
                let speed = dg[0].re.hypot(dg[1].re);
                let p = TargetPoint::new2(g[0].re + d * dg[1].re / speed, g[1].re - d * dg[0].re / speed);
                out.push(GeneratedTarget::plain(p));
            }
        }
    }
    Ok(out)
}

fn level_set(disc: &CurveDiscretization, level: f64, count: usize, rng: &mut Rng) -> Result<Vec<GeneratedTarget>> {
    let chart = disc.chart.as_ref().ok_or_else(|| crate::Error::InvalidArgument("no analytic chart".into()))?;
    let mut out = Vec::with_capacity(count);
    match disc.kind() {
        RuleKind::GaussLegendre => {
            if !(level > 1.0) {
                return invalid("Bernstein radius level must exceed 1");
            }
            while out.len() < count {
                let panel = &disc.panels[rng.below(disc.panels.len())];
                let theta = rng.uniform_in(0.0, PI);
                let sign = if rng.uniform() < 0.5 { 1.0 } else { -1.0 };
                let local = joukowski(Complex64::from_polar(level, sign * theta))?;
                if local.re.abs() >= 1.0 {
                    continue;
                }
                let t = panel.map.to_global(local);
                out.push(GeneratedTarget { point: complexify_planar(chart.as_ref(), t)?, preimage: Some(t) });
            }
        }
        _ => {
            if !(level > 0.0) {
                return invalid("|Im t| level must be positive");
            }
            let (lo, hi) = chart.base_interval();
            let scale = disc.panels[0].map.scale;
            for _ in 0..count {
                let sign = if rng.uniform() < 0.5 { 1.0 } else { -1.0 };
                let t = Complex64::new(rng.uniform_in(lo, hi), sign * level * scale);
                out.push(GeneratedTarget { point: complexify_planar(chart.as_ref(), t)?, preimage: Some(t) });
            }
        }
    }
    Ok(out)
}

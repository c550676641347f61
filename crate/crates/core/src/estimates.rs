//! Closed-form quadrature error estimates for curves and surfaces.

use std::f64::consts::PI;

use num_complex::Complex64;
use rayon::prelude::*;

use crate::error::{invalid, Error, Result};
use crate::geometry::jet::{Jet, Scalar};
use crate::geometry::{
    dist, CurveChart, CurveDiscretization, Direction, SurfaceDiscretization, SurfaceFrame, SurfaceNodeId, TargetPoint,
};
use crate::potentials::{DensitySpec, LayerPotential};
use crate::rootfind::{
    approximate_curve, approximate_surface_line, find_root, guess_from, initial_guess, line_nodes,
    smooth_part_at_root, ApproxCurve, ApproximationMode, RootResult, RootStatus, SeriesModel, SmoothPartStrategy,
};
use crate::rules::{
    est_factor_unchecked, generalized_factorial, kn_gauss_legendre_asymptotic, kn_trapz_asymptotic, rule, sqrt_t2_minus_1,
    bernstein_radius, HalfIntegerP, RuleKind,
};

/// Decay factor e^{n|Im t0|} (or ρ^{2n+1}) below which the asymptotic
/// remainder is not trusted.
pub const MIN_DECAY: f64 = 100.0;
/// Nodes of the Gauss-Laguerre rule used on each half line.
pub const LAGUERRE_POINTS: usize = 8;
/// |s*| below which the Gauss-Legendre direction integral is split at s*.
pub const SPLIT_THRESHOLD: f64 = 0.9;

/// Tuning of the estimators.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EstimateOptions {
    pub approximation: ApproximationMode,
    pub smooth_part: SmoothPartStrategy,
    /// Nearest panels summed for Gauss-Legendre curves.
    pub panels_to_sum: usize,
    /// Surface panels within this many panel diameters of x contribute.
    pub neighborhood: f64,
    /// Keep Im[...] in the complex-kernel estimates (p = 1 only).
    pub keep_oscillation: bool,
}

impl Default for EstimateOptions {
    fn default() -> Self {
        EstimateOptions {
            approximation: ApproximationMode::Default,
            smooth_part: SmoothPartStrategy::Interpolated,
            panels_to_sum: 3,
            neighborhood: 2.0,
            keep_oscillation: false,
        }
    }
}

/// One panel (curves) or one panel and root direction (surfaces).
#[derive(Debug, Clone, PartialEq)]
pub struct Contribution {
    pub panel: usize,
    /// Direction of the root for surfaces; the error term is integrated over
    /// the other direction.
    pub direction: Option<Direction>,
    pub value: f64,
    pub root: RootResult,
    pub reliable: bool,
    /// The linearized discriminant 4ac − b² was clamped at some abscissa.
    pub clamped: bool,
}

/// Estimated |E_n| with its breakdown.
#[derive(Debug, Clone, PartialEq)]
pub struct EstimateResult {
    pub value: f64,
    pub contributions: Vec<Contribution>,
    pub reliable: bool,
}

impl EstimateResult {
    /// Sums contributions. Failed roots fall back to the initial guess only
    /// when no root converged; otherwise they contribute nothing. The result
    /// is reliable when some root converged, every converged contribution is
    /// reliable and x is not on the geometry.
    fn from_parts(mut contributions: Vec<Contribution>) -> Self {
        let any_converged = contributions.iter().any(|c| c.root.converged());
        if any_converged {
            for c in contributions.iter_mut().filter(|c| !c.root.converged()) {
                c.value = 0.0;
            }
        }
        let value = contributions.iter().map(|c| c.value).sum();
        let reliable = any_converged
            && contributions.iter().filter(|c| c.root.converged()).all(|c| c.reliable)
            && !contributions.iter().any(|c| c.root.status == RootStatus::OnCurve);
        EstimateResult { value, contributions, reliable }
    }
}

fn decays(kind: RuleKind, t0: Complex64, n: usize) -> bool {
    let exponent = match kind {
        RuleKind::GaussLegendre => (2 * n + 1) as f64 * bernstein_radius(t0).ln(),
        _ => n as f64 * t0.im.abs(),
    };
    exponent > MIN_DECAY.ln()
}

/// G = 1/(dR̃²/dt) at t, used for the fallback when no root was found.
fn inverse_derivative(approx: &dyn CurveChart, t: Complex64, x: &TargetPoint) -> Complex64 {
    let (g, d) = approx.eval_d1(t);
    let dr2: Complex64 = (0..3).map(|i| 2.0 * (g[i] - x.coords[i]) * d[i]).sum();
    dr2.inv()
}

fn pow_p(v: f64, p: HalfIntegerP) -> f64 {
    if p.is_integer() {
        v.powi((p.two_p() / 2) as i32)
    } else {
        v.powf(p.value())
    }
}

fn check_target(x: &TargetPoint, dim: usize) -> Result<()> {
    if x.dim != dim {
        return invalid(format!("target has {} coordinates, geometry needs {dim}", x.dim));
    }
    if x.coords.iter().any(|c| !c.is_finite()) {
        return invalid("target coordinates must be finite");
    }
    Ok(())
}

/// Panels (with their nearest node) that contribute for a curve target.
fn curve_panels(disc: &CurveDiscretization, x: &TargetPoint, opts: &EstimateOptions) -> Result<Vec<(usize, usize)>> {
    if opts.panels_to_sum == 0 {
        return invalid("panels_to_sum must be at least 1");
    }
    Ok(disc
        .panels_by_distance(x)
        .into_iter()
        .take(opts.panels_to_sum)
        .map(|(p, i, _)| (p, i))
        .collect())
}

/// Real-kernel estimate for a layer potential on a curve:
/// (4π/Γ(p))·|f(t0)|·|G(t0)|^p × (n^{p−1}e^{−n|Im t0|} or |(2n+1)/√(t0²−1)|^{p−1}ρ^{−(2n+1)}).
pub fn estimate_curve(
    disc: &CurveDiscretization,
    pot: &LayerPotential,
    x: &TargetPoint,
    opts: &EstimateOptions,
) -> Result<EstimateResult> {
    check_target(x, disc.dim)?;
    pot.check_curve(disc.dim)?;
    let mut parts = Vec::new();
    for (panel, center) in curve_panels(disc, x, opts)? {
        parts.push(curve_contribution(disc, pot, x, panel, center, opts)?);
    }
    Ok(EstimateResult::from_parts(parts))
}

fn curve_contribution(
    disc: &CurveDiscretization,
    pot: &LayerPotential,
    x: &TargetPoint,
    panel: usize,
    center: usize,
    opts: &EstimateOptions,
) -> Result<Contribution> {
    let kind = disc.kind();
    let approx = approximate_curve(disc, panel, opts.approximation, center)?;
    let guess = initial_guess(disc, panel, center, x);
    let mut root = find_root(&approx, x, guess);
    let ok = root.converged();
    let (t0, g, strategy) = if ok {
        (root.t0, root.g, opts.smooth_part)
    } else {
        (guess, inverse_derivative(&approx, guess, x), SmoothPartStrategy::MaxBound)
    };
    let f = smooth_part_at_root(disc, panel, pot, x, t0, opts.approximation, center, strategy)?;
    root.f_at_root = f;
    let value = f.norm() * pow_p(g.norm(), pot.p) * est_factor_unchecked(kind, t0, disc.n(), pot.p);
    Ok(Contribution {
        panel,
        direction: None,
        value: if value.is_nan() { f64::INFINITY } else { value },
        root,
        reliable: ok && decays(kind, t0, disc.n()),
        clamped: false,
    })
}

/// Estimate for ∫ g(t)·ω'(t)/(ω(t) − z0)^p dt on a planar curve with ω = γ₁ + iγ₂.
///
/// The pre-image of z0 is whichever root of R̃² (the upper one or its
/// conjugate) is mapped closer to z0 by ω̃.
pub fn estimate_complex_kernel(
    disc: &CurveDiscretization,
    z0: Complex64,
    p: u32,
    g: &DensitySpec,
    opts: &EstimateOptions,
) -> Result<EstimateResult> {
    if disc.dim != 2 {
        return invalid("complex kernels need a planar curve");
    }
    if p == 0 {
        return invalid("complex kernels need an integer p >= 1");
    }
    if opts.keep_oscillation && p != 1 {
        return invalid("the oscillation-retaining form is defined for p = 1 only");
    }
    let x = TargetPoint::new2(z0.re, z0.im);
    let mut parts = Vec::new();
    for (panel, center) in curve_panels(disc, &x, opts)? {
        parts.push(complex_contribution(disc, z0, &x, p, g, panel, center, opts)?);
    }
    Ok(EstimateResult::from_parts(parts))
}

fn omega(approx: &ApproxCurve, t: Complex64) -> (Complex64, Complex64) {
    let (g, d) = approx.eval_d1(t);
    (g[0] + Complex64::i() * g[1], d[0] + Complex64::i() * d[1])
}

#[allow(clippy::too_many_arguments)]
fn complex_contribution(
    disc: &CurveDiscretization,
    z0: Complex64,
    x: &TargetPoint,
    p: u32,
    density: &DensitySpec,
    panel: usize,
    center: usize,
    opts: &EstimateOptions,
) -> Result<Contribution> {
    let kind = disc.kind();
    let n = disc.n();
    let approx = approximate_curve(disc, panel, opts.approximation, center)?;
    let guess = initial_guess(disc, panel, center, x);
    let mut root = find_root(&approx, x, guess);
    let ok = root.converged();
    let upper = if ok { root.t0 } else { guess };
    let t = [upper, upper.conj()]
        .into_iter()
        .min_by(|a, b| (omega(&approx, *a).0 - z0).norm().total_cmp(&(omega(&approx, *b).0 - z0).norm()))
        .expect("two candidates");
    let strategy = if ok { opts.smooth_part } else { SmoothPartStrategy::MaxBound };
    let gv = density_at(disc, panel, center, density, t, opts.approximation, strategy)?;
    root.f_at_root = gv;
    let (_, dw) = omega(&approx, t);
    let q = p as i32 - 1;
    let fact = generalized_factorial(HalfIntegerP::new(2 * p)?);
    let value = if opts.keep_oscillation {
        let k = match kind {
            RuleKind::GaussLegendre => kn_gauss_legendre_asymptotic(t, n),
            _ => kn_trapz_asymptotic(t, n),
        };
        match k {
            Ok(k) => (gv * k).im.abs(),
            Err(_) => f64::INFINITY,
        }
    } else {
        let ratio = (gv / dw.powi(q)).norm();
        match kind {
            RuleKind::GaussLegendre => {
                let m = (2 * n + 1) as f64;
                let d = (m / sqrt_t2_minus_1(t).norm()).powi(q);
                2.0 * PI / fact * d * ratio * (-m * bernstein_radius(t).ln()).exp()
            }
            _ => 2.0 * PI * (n as f64).powi(q) / fact * ratio * (-(n as f64) * t.im.abs()).exp(),
        }
    };
    Ok(Contribution {
        panel,
        direction: None,
        value,
        root: RootResult { t0: t, ..root },
        reliable: ok && decays(kind, t, n),
        clamped: false,
    })
}

/// Density continued to t with the geometry's basis.
fn density_at(
    disc: &CurveDiscretization,
    panel: usize,
    center: usize,
    density: &DensitySpec,
    t: Complex64,
    mode: ApproximationMode,
    strategy: SmoothPartStrategy,
) -> Result<Complex64> {
    let c = |v: f64| Complex64::new(v, 0.0);
    let p = &disc.panels[panel];
    let values = || -> Vec<Complex64> {
        p.nodes.iter().map(|n| density.eval([c(n.t), c(0.0)], &n.position().map(c))).collect()
    };
    if strategy == SmoothPartStrategy::MaxBound {
        return Ok(c(values().iter().map(|v| v.norm()).fold(0.0, f64::max)));
    }
    Ok(match mode.resolve(disc.kind()) {
        ApproximationMode::GlobalPolynomial => SeriesModel::legendre_fit(&values())?.eval(t),
        ApproximationMode::GlobalTrigonometric => SeriesModel::fourier_fit(&values())?.eval(t),
        ApproximationMode::LocalTaylor(q) => {
            let node = &p.nodes[center];
            let pos: [Jet; 3] = std::array::from_fn(|i| {
                let d: Vec<Complex64> = node.derivs[..=q].iter().map(|v| c(v[i])).collect();
                Jet::from_derivatives(&d)
            });
            let tj = Jet::affine(c(node.t), p.map.scale, q);
            density.eval([tj, Jet::from_f64(0.0)], &pos).eval_at(t - node.local)
        }
        ApproximationMode::Analytic => {
            let chart = disc.chart.as_ref().ok_or_else(|| Error::InvalidArgument("no analytic chart".into()))?;
            let tg = p.map.to_global(t);
            density.eval([tg, c(0.0)], &chart.eval(tg))
        }
        ApproximationMode::Default => unreachable!("resolved"),
    })
}

/// Quadratic model R² ≈ a(Δs) + b(Δs)Δt + cΔt² around a grid node, with s
/// the integration direction and t the root direction.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LinearRootModel {
    pub a0: f64,
    pub a1: f64,
    pub a2: f64,
    pub b0: f64,
    pub b1: f64,
    pub c: f64,
    pub t_star: f64,
    pub s_star: f64,
    pub r: [f64; 3],
    pub gamma_s: [f64; 3],
    pub gamma_t: [f64; 3],
}

fn dot3(a: &[f64; 3], b: &[f64; 3]) -> f64 {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}

impl LinearRootModel {
    /// `r` = γ(s*, t*) − x; `gamma_s`, `gamma_t` the first partials there.
    pub fn new(r: [f64; 3], gamma_s: [f64; 3], gamma_t: [f64; 3], s_star: f64, t_star: f64) -> Result<Self> {
        let c = dot3(&gamma_t, &gamma_t);
        if c < 1e-14 {
            return Err(Error::DegenerateParameterization(c));
        }
        Ok(LinearRootModel {
            a0: dot3(&r, &r),
            a1: 2.0 * dot3(&r, &gamma_s),
            a2: dot3(&gamma_s, &gamma_s),
            b0: 2.0 * dot3(&r, &gamma_t),
            b1: 2.0 * dot3(&gamma_s, &gamma_t),
            c,
            t_star,
            s_star,
            r,
            gamma_s,
            gamma_t,
        })
    }

    pub fn a(&self, ds: f64) -> f64 {
        self.a0 + self.a1 * ds + self.a2 * ds * ds
    }

    pub fn b(&self, ds: f64) -> f64 {
        self.b0 + self.b1 * ds
    }

    /// 4a(Δs)c − b(Δs)².
    pub fn discriminant(&self, ds: f64) -> f64 {
        4.0 * self.a(ds) * self.c - self.b(ds).powi(2)
    }

    /// t0^L(Δs) = t* − b/(2c) + i√max(0, 4ac − b²)/(2c).
    pub fn linear_root(&self, ds: f64) -> Complex64 {
        let b = self.b(ds);
        Complex64::new(
            self.t_star - b / (2.0 * self.c),
            self.discriminant(ds).max(0.0).sqrt() / (2.0 * self.c),
        )
    }

    /// k = ‖γ_s‖/‖γ_t‖, the rate at which Im t0^L grows with |Δs|.
    pub fn anisotropy(&self) -> f64 {
        (self.a2 / self.c).sqrt()
    }
}

/// Linear model at node `id` of a surface with the root sought along `dir`.
pub fn linear_root_model(
    disc: &SurfaceDiscretization,
    id: SurfaceNodeId,
    dir: Direction,
    x: &TargetPoint,
) -> Result<LinearRootModel> {
    let node = disc.node(id);
    let (d, o) = (dir.index(), dir.other().index());
    let pos = node.position();
    let r = [pos[0] - x.coords[0], pos[1] - x.coords[1], pos[2] - x.coords[2]];
    LinearRootModel::new(r, node.along[o][1], node.along[d][1], node.local[o], node.local[d])
}

/// t̃0(s) = t0* − t0^L(0) + t0^L(s − s*).
pub fn combined_root(t0_star: Complex64, model: &LinearRootModel, ds: f64) -> Complex64 {
    t0_star - model.linear_root(0.0) + model.linear_root(ds)
}

/// ∫_{−∞}^{∞} est(t̃0(s)) ds by Gauss-Laguerre on each half line after the
/// substitution x = nkΔs.
pub fn integrate_est_trapezoidal(
    model: &LinearRootModel,
    t0_star: Complex64,
    est_kind: RuleKind,
    n: usize,
    p: HalfIntegerP,
) -> Result<f64> {
    Ok(laguerre_integral(model, t0_star, n, |t| est_factor_unchecked(est_kind, t, n, p))?.0)
}

fn laguerre_integral(
    model: &LinearRootModel,
    t0_star: Complex64,
    n: usize,
    est: impl Fn(Complex64) -> f64,
) -> Result<(f64, bool)> {
    let k = model.anisotropy();
    if k < 1e-14 {
        return Err(Error::DegenerateAnisotropy(k));
    }
    let scale = n as f64 * k;
    let lag = rule(RuleKind::GaussLaguerre, LAGUERRE_POINTS)?;
    let mut sum = 0.0;
    let mut clamped = false;
    for sign in [1.0, -1.0] {
        for (&xi, &wi) in lag.nodes.iter().zip(&lag.weights) {
            let ds = sign * xi / scale;
            clamped |= model.discriminant(ds) < 0.0;
            sum += wi * xi.exp() * est(combined_root(t0_star, model, ds));
        }
    }
    Ok((sum / scale, clamped))
}

/// ∫_{−1}^{1} est(t̃0(s)) ds with two 4-point Gauss-Legendre rules split at
/// s* when |s*| < 0.9, otherwise one 8-point rule.
pub fn integrate_est_gauss_legendre(
    model: &LinearRootModel,
    t0_star: Complex64,
    est_kind: RuleKind,
    n: usize,
    p: HalfIntegerP,
    s_star: f64,
) -> f64 {
    legendre_integral(model, t0_star, s_star, |t| est_factor_unchecked(est_kind, t, n, p)).0
}

fn legendre_integral(
    model: &LinearRootModel,
    t0_star: Complex64,
    s_star: f64,
    est: impl Fn(Complex64) -> f64,
) -> (f64, bool) {
    let pieces: Vec<(f64, f64, usize)> = if s_star.abs() < SPLIT_THRESHOLD {
        vec![(-1.0, s_star, 4), (s_star, 1.0, 4)]
    } else {
        vec![(-1.0, 1.0, 8)]
    };
    let mut sum = 0.0;
    let mut clamped = false;
    for (a, b, m) in pieces {
        let r = rule(RuleKind::GaussLegendre, m).expect("small Gauss-Legendre rules exist");
        let (mid, half) = (0.5 * (a + b), 0.5 * (b - a));
        for (&xi, &wi) in r.nodes.iter().zip(&r.weights) {
            let ds = mid + half * xi - s_star;
            clamped |= model.discriminant(ds) < 0.0;
            sum += half * wi * est(combined_root(t0_star, model, ds));
        }
    }
    (sum, clamped)
}

/// Surface estimate: for each nearby panel and each parameter direction,
/// the one-dimensional estimate along the coordinate line through the
/// nearest node, integrated over the other direction.
pub fn estimate_surface(
    disc: &SurfaceDiscretization,
    pot: &LayerPotential,
    x: &TargetPoint,
    opts: &EstimateOptions,
) -> Result<EstimateResult> {
    check_target(x, 3)?;
    let mut parts = Vec::new();
    for (panel, node) in surface_panels(disc, x, opts.neighborhood) {
        for dir in [Direction::T, Direction::S] {
            parts.push(surface_contribution(disc, pot, x, panel, node, dir, opts)?);
        }
    }
    Ok(EstimateResult::from_parts(parts))
}

/// Panels whose nearest node lies within `neighborhood` diameters of x; the
/// closest panel is always included.
fn surface_panels(disc: &SurfaceDiscretization, x: &TargetPoint, neighborhood: f64) -> Vec<(usize, (usize, usize))> {
    let nearest = disc.nearest_node(x);
    let mut out = vec![(nearest.panel, (nearest.i, nearest.j))];
    for (pi, p) in disc.panels.iter().enumerate() {
        if pi == nearest.panel {
            continue;
        }
        let reach = neighborhood * p.diameter();
        if dist(&p.center, &x.coords) - p.radius > reach {
            continue;
        }
        let (ij, d) = p.nearest(x);
        if d <= reach {
            out.push((pi, ij));
        }
    }
    out.sort_by_key(|e| e.0);
    out
}

#[allow(clippy::too_many_arguments)]
fn surface_contribution(
    disc: &SurfaceDiscretization,
    pot: &LayerPotential,
    x: &TargetPoint,
    panel: usize,
    ij: (usize, usize),
    dir: Direction,
    opts: &EstimateOptions,
) -> Result<Contribution> {
    let (d, o) = (dir.index(), dir.other().index());
    let (spec_d, spec_o) = (disc.specs[d], disc.specs[o]);
    let p = &disc.panels[panel];
    let node = p.node(ij.0, ij.1);
    let approx = approximate_surface_line(disc, panel, ij, dir, opts.approximation)?;
    let guess = guess_from(node.local[d], &node.position(), &node.along[d][1], x, spec_d.local_length());
    let mut root = find_root(&approx, x, guess);
    let ok = root.converged();
    let (t0, g, strategy) = if ok {
        (root.t0, root.g, opts.smooth_part)
    } else {
        (guess, inverse_derivative(&approx, guess, x), SmoothPartStrategy::MaxBound)
    };
    let f = surface_smooth_part(disc, panel, ij, dir, pot, x, t0, opts.approximation, strategy)?;
    root.f_at_root = f;
    let model = linear_root_model(disc, SurfaceNodeId { panel, i: ij.0, j: ij.1 }, dir, x)?;
    let est = |t: Complex64| est_factor_unchecked(spec_d.kind, t, spec_d.n, pot.p);
    let (integral, clamped) = match spec_o.kind {
        RuleKind::Trapezoidal => laguerre_integral(&model, t0, spec_d.n, est)?,
        _ => legendre_integral(&model, t0, node.local[o], est),
    };
    let value = f.norm() * pow_p(g.norm(), pot.p) * integral;
    Ok(Contribution {
        panel,
        direction: Some(dir),
        value: if value.is_nan() { f64::INFINITY } else { value },
        root,
        reliable: ok && decays(spec_d.kind, t0, spec_d.n),
        clamped,
    })
}

fn local_frame(node: &crate::geometry::SurfaceNode) -> SurfaceFrame<Complex64> {
    let c = |v: [f64; 3]| v.map(|e| Complex64::new(e, 0.0));
    SurfaceFrame { pos: c(node.position()), ds: c(node.along[0][1]), dt: c(node.along[1][1]) }
}

/// f = k(0)·ã at parameter t0 along the coordinate line through node `ij`.
#[allow(clippy::too_many_arguments)]
fn surface_smooth_part(
    disc: &SurfaceDiscretization,
    panel: usize,
    ij: (usize, usize),
    dir: Direction,
    pot: &LayerPotential,
    x: &TargetPoint,
    t0: Complex64,
    mode: ApproximationMode,
    strategy: SmoothPartStrategy,
) -> Result<Complex64> {
    let c = |v: f64| Complex64::new(v, 0.0);
    let d = dir.index();
    let p = &disc.panels[panel];
    let k0 = pot.kernel.root_factor();
    let line_values = || -> Vec<Complex64> {
        line_nodes(p, ij, dir)
            .map(|(i, j)| {
                let n = p.node(i, j);
                pot.surface_part(n.params.map(c), &local_frame(n), x)
            })
            .collect()
    };
    if strategy == SmoothPartStrategy::MaxBound {
        return Ok(k0 * line_values().iter().map(|v| v.norm()).fold(0.0, f64::max));
    }
    let node = p.node(ij.0, ij.1);
    let a = match mode.resolve(disc.specs[d].kind) {
        ApproximationMode::GlobalPolynomial => SeriesModel::legendre_fit(&line_values())?.eval(t0),
        ApproximationMode::GlobalTrigonometric => SeriesModel::fourier_fit(&line_values())?.eval(t0),
        ApproximationMode::LocalTaylor(q) => {
            let jets = |samples: &[[f64; 3]]| -> [Jet; 3] {
                std::array::from_fn(|i| {
                    let v: Vec<Complex64> = samples.iter().map(|s| c(s[i])).collect();
                    Jet::from_derivatives(&v)
                })
            };
            let pos = jets(&node.along[d][..=q]);
            let along = pos.map(|j| j.differentiate());
            let across = jets(&node.cross[d][..q]);
            let mut params = node.params.map(|v| Jet::from_f64(v));
            params[d] = Jet::affine(c(node.params[d]), p.maps[d].scale, q - 1);
            let frame = match dir {
                Direction::S => SurfaceFrame { pos, ds: along, dt: across },
                Direction::T => SurfaceFrame { pos, ds: across, dt: along },
            };
            pot.surface_part(params, &frame, x).eval_at(t0 - node.local[d])
        }
        ApproximationMode::Analytic => {
            let chart = disc.chart.as_ref().ok_or_else(|| Error::InvalidArgument("no analytic chart".into()))?;
            let mut params = node.params.map(c);
            params[d] = p.maps[d].to_global(t0);
            let f = chart.frame(params[0], params[1]);
            let frame = SurfaceFrame {
                pos: f.pos,
                ds: f.ds.map(|v| v * p.maps[0].scale),
                dt: f.dt.map(|v| v * p.maps[1].scale),
            };
            pot.surface_part(params, &frame, x)
        }
        ApproximationMode::Default => unreachable!("resolved"),
    };
    Ok(k0 * a)
}

/// [`estimate_curve`] over many targets in parallel; results keep input order.
pub fn estimate_curve_batch(
    disc: &CurveDiscretization,
    pot: &LayerPotential,
    targets: &[TargetPoint],
    opts: &EstimateOptions,
) -> Vec<Result<EstimateResult>> {
    targets.par_iter().map(|x| estimate_curve(disc, pot, x, opts)).collect()
}

/// [`estimate_surface`] over many targets in parallel; results keep input order.
pub fn estimate_surface_batch(
    disc: &SurfaceDiscretization,
    pot: &LayerPotential,
    targets: &[TargetPoint],
    opts: &EstimateOptions,
) -> Vec<Result<EstimateResult>> {
    targets.par_iter().map(|x| estimate_surface(disc, pot, x, opts)).collect()
}

/// Whether every contribution's root converged.
pub fn all_converged(result: &EstimateResult) -> bool {
    result.contributions.iter().all(|c| c.root.status == RootStatus::Converged)
}

//! Complex roots of the squared distance function via approximations of γ
//! built from quadrature-node samples.

use std::sync::Arc;

use num_complex::Complex64;

use crate::error::{invalid, Result};
use crate::geometry::jet::{Jet, Scalar};
use crate::geometry::{
    CurveChart, CurveDiscretization, Direction, PanelMap, SurfaceChart, SurfaceDiscretization, TargetPoint,
};
use crate::potentials::LayerPotential;
use crate::rules::{bernstein_radius, rule, RuleKind};

/// Newton iteration cap.
pub const MAX_ITERATIONS: usize = 30;
/// Relative residual and step tolerance of the Newton iteration.
pub const NEWTON_TOL: f64 = 1e-13;
/// An iterate with |Im t| beyond this many base-interval widths counts as
/// diverged. Targets a few panel lengths off a surface have genuine roots
/// just past one width, and those dominate the error.
pub const ESCAPE_WIDTHS: f64 = 2.0;
/// Taylor order used for trapezoidal directions by default.
pub const DEFAULT_TAYLOR_ORDER: usize = 5;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);

/// How γ is continued into the complex plane.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ApproximationMode {
    /// Per-panel polynomial for Gauss-Legendre, local Taylor for trapezoidal.
    Default,
    /// Legendre expansion of degree n − 1 on one panel.
    GlobalPolynomial,
    /// Trigonometric interpolant of degree n/2.
    GlobalTrigonometric,
    /// Taylor polynomial of order q around the nearest node.
    LocalTaylor(usize),
    /// The chart itself; requires an analytic chart.
    Analytic,
}

impl ApproximationMode {
    /// Replaces `Default` by the rule's standard choice.
    pub fn resolve(self, kind: RuleKind) -> ApproximationMode {
        match (self, kind) {
            (ApproximationMode::Default, RuleKind::Trapezoidal) => ApproximationMode::LocalTaylor(DEFAULT_TAYLOR_ORDER),
            (ApproximationMode::Default, _) => ApproximationMode::GlobalPolynomial,
            (m, _) => m,
        }
    }

    fn check(self, kind: RuleKind, order: usize, has_chart: bool) -> Result<ApproximationMode> {
        let mode = self.resolve(kind);
        match mode {
            ApproximationMode::GlobalPolynomial if kind != RuleKind::GaussLegendre => {
                invalid("global polynomial approximation needs a Gauss-Legendre panel")
            }
            ApproximationMode::GlobalTrigonometric if kind != RuleKind::Trapezoidal => {
                invalid("global trigonometric approximation needs the trapezoidal rule")
            }
            ApproximationMode::LocalTaylor(q) if q == 0 || q > order => {
                invalid(format!("Taylor order must be in 1..={order} (stored derivative samples)"))
            }
            ApproximationMode::Analytic if !has_chart => invalid("analytic mode needs an analytic chart"),
            m => Ok(m),
        }
    }

    pub fn from_name(name: &str, taylor_order: usize) -> Result<Self> {
        match name {
            "default" => Ok(ApproximationMode::Default),
            "polynomial" => Ok(ApproximationMode::GlobalPolynomial),
            "trigonometric" => Ok(ApproximationMode::GlobalTrigonometric),
            "taylor" => Ok(ApproximationMode::LocalTaylor(taylor_order)),
            "analytic" => Ok(ApproximationMode::Analytic),
            _ => invalid(format!("unknown approximation '{name}'")),
        }
    }
}

/// Choice of f(t0) in the estimates.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SmoothPartStrategy {
    /// max |f| over the nodes.
    MaxBound,
    /// f continued to t0 with the geometry's basis.
    Interpolated,
}

/// A scalar function of the local parameter given by a finite expansion.
#[derive(Debug, Clone, PartialEq)]
pub enum SeriesModel {
    /// Σ c_j P_j(τ).
    Legendre(Vec<Complex64>),
    /// Σ_{k=−m}^{m} c_k e^{ikτ}, stored at index k + m.
    Fourier(Vec<Complex64>),
    /// Σ c_k (τ − center)^k.
    Taylor { center: f64, coeffs: Vec<Complex64> },
}

impl SeriesModel {
    /// Interpolant through values at the n Gauss-Legendre nodes.
    pub fn legendre_fit(values: &[Complex64]) -> Result<Self> {
        let n = values.len();
        let r = rule(RuleKind::GaussLegendre, n)?;
        let mut c = vec![ZERO; n];
        for (l, &v) in values.iter().enumerate() {
            let x = r.nodes[l];
            let (mut p0, mut p1) = (1.0, x);
            for (j, cj) in c.iter_mut().enumerate() {
                let pj = match j {
                    0 => 1.0,
                    1 => x,
                    _ => {
                        let k = (j - 1) as f64;
                        let p2 = ((2.0 * k + 1.0) * x * p1 - k * p0) / (k + 1.0);
                        p0 = p1;
                        p1 = p2;
                        p2
                    }
                };
                *cj += v * (r.weights[l] * pj);
            }
        }
        for (j, cj) in c.iter_mut().enumerate() {
            *cj *= (2 * j + 1) as f64 / 2.0;
        }
        chop(&mut c, |j| (2 * j + 1) as f64);
        Ok(SeriesModel::Legendre(c))
    }

    /// Trigonometric interpolant through values at τ_ℓ = 2πℓ/n. For even n
    /// the Nyquist coefficient is split evenly between ±n/2.
    pub fn fourier_fit(values: &[Complex64]) -> Result<Self> {
        let n = values.len();
        if n == 0 {
            return invalid("no samples to interpolate");
        }
        let m = n / 2;
        let roots: Vec<Complex64> =
            (0..n).map(|k| Complex64::from_polar(1.0, -2.0 * std::f64::consts::PI * k as f64 / n as f64)).collect();
        let mut c = vec![ZERO; 2 * m + 1];
        for (idx, ck) in c.iter_mut().enumerate() {
            let k = idx as i64 - m as i64;
            let mut s = ZERO;
            for (l, &v) in values.iter().enumerate() {
                s += v * roots[((k * l as i64).rem_euclid(n as i64)) as usize];
            }
            *ck = s / n as f64;
        }
        if n % 2 == 0 && m > 0 {
            c[0] *= 0.5;
            c[2 * m] *= 0.5;
        }
        chop(&mut c, |_| 2.0);
        Ok(SeriesModel::Fourier(c))
    }

    pub fn taylor(center: f64, coeffs: Vec<Complex64>) -> Self {
        SeriesModel::Taylor { center, coeffs }
    }

    pub fn eval<S: Scalar>(&self, t: S) -> S {
        match self {
            SeriesModel::Legendre(c) => {
                let mut sum = S::from_c64(c[0]);
                if c.len() == 1 {
                    return sum;
                }
                let mut p0 = S::from_f64(1.0);
                let mut p1 = t;
                sum = sum + p1 * S::from_c64(c[1]);
                for (j, &cj) in c.iter().enumerate().skip(2) {
                    let k = (j - 1) as f64;
                    let p2 = (t * p1).scale((2.0 * k + 1.0) / (k + 1.0)) - p0.scale(k / (k + 1.0));
                    sum = sum + p2 * S::from_c64(cj);
                    p0 = p1;
                    p1 = p2;
                }
                sum
            }
            SeriesModel::Fourier(c) => {
                let m = c.len() / 2;
                let it = t * S::from_c64(Complex64::i());
                let (z, zi) = (it.exp(), (-it).exp());
                let mut sum = S::from_c64(c[m]);
                let (mut zp, mut zm) = (z, zi);
                for k in 1..=m {
                    sum = sum + zp * S::from_c64(c[m + k]) + zm * S::from_c64(c[m - k]);
                    if k < m {
                        zp = zp * z;
                        zm = zm * zi;
                    }
                }
                sum
            }
            SeriesModel::Taylor { center, coeffs } => {
                let h = t - S::from_f64(*center);
                coeffs.iter().rev().fold(S::from_f64(0.0), |acc, &a| acc * h + S::from_c64(a))
            }
        }
    }
}

/// Zeroes coefficients at roundoff level. Off the real axis they would be
/// amplified by the growth of the basis functions. `noise(j)` is the
/// relative rounding level of coefficient j.
fn chop(c: &mut [Complex64], noise: impl Fn(usize) -> f64) {
    let max = c.iter().map(|v| v.norm()).fold(0.0, f64::max);
    for (j, v) in c.iter_mut().enumerate() {
        if v.norm() <= 4.0 * f64::EPSILON * noise(j) * max {
            *v = ZERO;
        }
    }
}

#[derive(Debug, Clone)]
enum Repr {
    Series([SeriesModel; 3]),
    Curve { chart: Arc<dyn CurveChart>, map: PanelMap },
    SurfaceLine { chart: Arc<dyn SurfaceChart>, map: PanelMap, fixed: f64, dir: Direction },
}

/// Continuation γ̃ of one panel (or one coordinate line of a surface panel)
/// in the panel-local parameter.
#[derive(Debug, Clone)]
pub struct ApproxCurve {
    kind: RuleKind,
    dim: usize,
    repr: Repr,
}

impl ApproxCurve {
    pub fn rule_kind(&self) -> RuleKind {
        self.kind
    }

    fn map_jet(map: &PanelMap, t: Jet) -> Jet {
        t.scale(map.scale) + Jet::from_f64(map.offset)
    }
}

impl CurveChart for ApproxCurve {
    fn name(&self) -> String {
        "approximation".into()
    }
    fn dim(&self) -> usize {
        self.dim
    }
    fn base_interval(&self) -> (f64, f64) {
        self.kind.base_interval()
    }
    fn periodic(&self) -> bool {
        self.kind == RuleKind::Trapezoidal
    }
    fn eval(&self, t: Complex64) -> [Complex64; 3] {
        match &self.repr {
            Repr::Series(m) => [m[0].eval(t), m[1].eval(t), m[2].eval(t)],
            Repr::Curve { chart, map } => chart.eval(map.to_global(t)),
            Repr::SurfaceLine { chart, map, fixed, dir } => {
                let (u, v) = (map.to_global(t), Complex64::new(*fixed, 0.0));
                match dir {
                    Direction::S => chart.eval(u, v),
                    Direction::T => chart.eval(v, u),
                }
            }
        }
    }
    fn eval_jet(&self, t: Jet) -> [Jet; 3] {
        match &self.repr {
            Repr::Series(m) => [m[0].eval(t), m[1].eval(t), m[2].eval(t)],
            Repr::Curve { chart, map } => chart.eval_jet(ApproxCurve::map_jet(map, t)),
            Repr::SurfaceLine { chart, map, fixed, dir } => {
                let (u, v) = (ApproxCurve::map_jet(map, t), Jet::from_f64(*fixed));
                match dir {
                    Direction::S => chart.frame_jet(u, v).pos,
                    Direction::T => chart.frame_jet(v, u).pos,
                }
            }
        }
    }
}

fn fit_components(kind: RuleKind, points: &[[f64; 3]], mode: ApproximationMode) -> Result<[SeriesModel; 3]> {
    let fit = |i: usize| {
        let v: Vec<Complex64> = points.iter().map(|p| Complex64::new(p[i], 0.0)).collect();
        match mode {
            ApproximationMode::GlobalTrigonometric => SeriesModel::fourier_fit(&v),
            _ => {
                debug_assert_eq!(kind, RuleKind::GaussLegendre);
                SeriesModel::legendre_fit(&v)
            }
        }
    };
    Ok([fit(0)?, fit(1)?, fit(2)?])
}

fn taylor_components(center: f64, derivs: &[[f64; 3]], q: usize) -> [SeriesModel; 3] {
    std::array::from_fn(|i| {
        let d: Vec<Complex64> = derivs[..=q].iter().map(|v| Complex64::new(v[i], 0.0)).collect();
        SeriesModel::taylor(center, Jet::from_derivatives(&d).coeffs().to_vec())
    })
}

/// γ̃ for one curve panel. `center` is the index of the Taylor expansion
/// node within the panel (ignored by the other modes).
pub fn approximate_curve(
    disc: &CurveDiscretization,
    panel: usize,
    mode: ApproximationMode,
    center: usize,
) -> Result<ApproxCurve> {
    let kind = disc.kind();
    let mode = mode.check(kind, disc.order, disc.chart.is_some())?;
    let p = disc.panels.get(panel).ok_or_else(|| crate::Error::InvalidArgument(format!("no panel {panel}")))?;
    let repr = match mode {
        ApproximationMode::Analytic => {
            Repr::Curve { chart: Arc::clone(disc.chart.as_ref().expect("checked")), map: p.map }
        }
        ApproximationMode::LocalTaylor(q) => {
            let node = &p.nodes[center];
            Repr::Series(taylor_components(node.local, &node.derivs, q))
        }
        _ => {
            let pts: Vec<[f64; 3]> = p.nodes.iter().map(|n| n.position()).collect();
            Repr::Series(fit_components(kind, &pts, mode)?)
        }
    };
    Ok(ApproxCurve { kind, dim: disc.dim, repr })
}

/// γ̃ along the coordinate line through node (i, j) of a surface panel in
/// direction `dir`.
pub fn approximate_surface_line(
    disc: &SurfaceDiscretization,
    panel: usize,
    node: (usize, usize),
    dir: Direction,
    mode: ApproximationMode,
) -> Result<ApproxCurve> {
    let d = dir.index();
    let kind = disc.specs[d].kind;
    let mode = mode.check(kind, disc.order, disc.chart.is_some())?;
    let p = disc.panels.get(panel).ok_or_else(|| crate::Error::InvalidArgument(format!("no panel {panel}")))?;
    let center = p.node(node.0, node.1);
    let repr = match mode {
        ApproximationMode::Analytic => Repr::SurfaceLine {
            chart: Arc::clone(disc.chart.as_ref().expect("checked")),
            map: p.maps[d],
            fixed: center.params[1 - d],
            dir,
        },
        ApproximationMode::LocalTaylor(q) => Repr::Series(taylor_components(center.local[d], &center.along[d], q)),
        _ => {
            let pts = line_nodes(p, node, dir).map(|(i, j)| p.node(i, j).position()).collect::<Vec<_>>();
            Repr::Series(fit_components(kind, &pts, mode)?)
        }
    };
    Ok(ApproxCurve { kind, dim: 3, repr })
}

/// Grid indices of the coordinate line through `node` in direction `dir`.
pub(crate) fn line_nodes(
    p: &crate::geometry::SurfacePanel,
    node: (usize, usize),
    dir: Direction,
) -> impl Iterator<Item = (usize, usize)> {
    let [ns, nt] = p.n();
    let (i0, j0) = node;
    let len = if dir == Direction::S { ns } else { nt };
    (0..len).map(move |k| if dir == Direction::S { (k, j0) } else { (i0, k) })
}

/// Outcome of the Newton iteration.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RootStatus {
    Converged,
    MaxIterations,
    DivergedOutsideRegion,
    OnCurve,
}

/// Root t0 of R̃² in the local parameter, with G and f at the root.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RootResult {
    pub t0: Complex64,
    pub residual: f64,
    pub iterations: usize,
    pub status: RootStatus,
    /// Geometry factor G(t0).
    pub g: Complex64,
    pub f_at_root: Complex64,
    /// Bernstein radius (Gauss-Legendre) or |Im t0| (trapezoidal).
    pub rho: f64,
    pub guess: Complex64,
}

impl RootResult {
    pub fn converged(&self) -> bool {
        self.status == RootStatus::Converged
    }
}

/// Residual tolerance for a target x.
pub fn residual_tolerance(x: &TargetPoint) -> f64 {
    NEWTON_TOL * (1.0 + x.norm_squared())
}

/// t* + iδ, δ = ‖γ(t*) − x‖ / ‖γ'(t*)‖ clamped to [1e−3, L/2], in local units.
pub fn initial_guess(disc: &CurveDiscretization, panel: usize, node: usize, x: &TargetPoint) -> Complex64 {
    let n = &disc.panels[panel].nodes[node];
    guess_from(n.local, &n.position(), &n.tangent(), x, disc.spec.local_length())
}

pub(crate) fn guess_from(t_star: f64, pos: &[f64; 3], tangent: &[f64; 3], x: &TargetPoint, length: f64) -> Complex64 {
    let d = crate::geometry::dist(pos, &x.coords);
    let speed = (tangent[0] * tangent[0] + tangent[1] * tangent[1] + tangent[2] * tangent[2]).sqrt();
    let delta = if speed > 0.0 { d / speed } else { 0.5 * length };
    Complex64::new(t_star, delta.clamp(1e-3, 0.5 * length))
}

fn r2_and_derivative(chart: &dyn CurveChart, t: Complex64, x: &TargetPoint) -> (Complex64, Complex64, Complex64) {
    let (g, d) = chart.eval_d1(t);
    let mut r2 = ZERO;
    let mut dr2 = ZERO;
    for i in 0..3 {
        let r = g[i] - x.coords[i];
        r2 += r * r;
        dr2 += 2.0 * r * d[i];
    }
    (r2, dr2, if dr2 == ZERO { Complex64::new(f64::INFINITY, 0.0) } else { dr2.inv() })
}

/// Newton iteration on R̃²(t) = 0 from `guess`, reported in the upper half plane.
pub fn find_root(approx: &dyn CurveChart, x: &TargetPoint, guess: Complex64) -> RootResult {
    let tol = residual_tolerance(x);
    let (lo, hi) = approx.base_interval();
    let width = hi - lo;
    let mut t = guess;
    let mut status = RootStatus::MaxIterations;
    let mut iterations = 0;
    let (mut r2, _, mut g) = r2_and_derivative(approx, t, x);
    let mut polished = false;
    while iterations < MAX_ITERATIONS {
        if r2.norm() <= tol && polished {
            status = RootStatus::Converged;
            break;
        }
        let (_, dr2, _) = r2_and_derivative(approx, t, x);
        if dr2 == ZERO {
            break;
        }
        let step = r2 / dr2;
        let next = t - step;
        iterations += 1;
        if !(next.re.is_finite() && next.im.is_finite()) || next.im.abs() > ESCAPE_WIDTHS * width {
            t = next;
            status = RootStatus::DivergedOutsideRegion;
            break;
        }
        let (nr2, _, ng) = r2_and_derivative(approx, next, x);
        let was_converged = r2.norm() <= tol;
        if was_converged && nr2.norm() > r2.norm() {
            // The extra polishing step made things worse; keep the previous iterate.
            status = RootStatus::Converged;
            break;
        }
        t = next;
        r2 = nr2;
        g = ng;
        if was_converged {
            polished = true;
        }
        if step.norm() < NEWTON_TOL * (1.0 + t.norm()) {
            status = if r2.norm() <= tol { RootStatus::Converged } else { RootStatus::MaxIterations };
            break;
        }
    }
    if status == RootStatus::MaxIterations && r2.norm() <= tol {
        status = RootStatus::Converged;
    }
    if t.im < 0.0 {
        t = t.conj();
        g = g.conj();
    }
    if status == RootStatus::Converged {
        let (on, _, _) = r2_and_derivative(approx, Complex64::new(t.re, 0.0), x);
        if t.im.abs() < 1e-12 || on.norm() <= tol {
            status = RootStatus::OnCurve;
        }
    }
    let rho = if approx.periodic() { t.im.abs() } else { bernstein_radius(t) };
    RootResult { t0: t, residual: r2.norm(), iterations, status, g, f_at_root: ZERO, rho, guess }
}

/// Values of the analytic part a = σ·J at the nodes of a curve panel (local frame).
pub(crate) fn curve_node_parts(
    disc: &CurveDiscretization,
    panel: usize,
    pot: &LayerPotential,
    x: &TargetPoint,
) -> Vec<Complex64> {
    let c = |v: f64| Complex64::new(v, 0.0);
    disc.panels[panel]
        .nodes
        .iter()
        .map(|n| pot.curve_part(c(n.t), &n.position().map(c), &n.tangent().map(c), x))
        .collect()
}

/// f(t0) = k(0)·ã(t0) on a curve panel. The continuation uses the same
/// basis as the geometry approximation `mode`; `center` is the Taylor node.
#[allow(clippy::too_many_arguments)]
pub fn smooth_part_at_root(
    disc: &CurveDiscretization,
    panel: usize,
    pot: &LayerPotential,
    x: &TargetPoint,
    t0: Complex64,
    mode: ApproximationMode,
    center: usize,
    strategy: SmoothPartStrategy,
) -> Result<Complex64> {
    let k0 = pot.kernel.root_factor();
    let mode = mode.check(disc.kind(), disc.order, disc.chart.is_some())?;
    if strategy == SmoothPartStrategy::MaxBound {
        let max = curve_node_parts(disc, panel, pot, x).iter().map(|v| v.norm()).fold(0.0, f64::max);
        return Ok(Complex64::new(max * k0.norm(), 0.0));
    }
    let p = &disc.panels[panel];
    let a = match mode {
        ApproximationMode::GlobalPolynomial => SeriesModel::legendre_fit(&curve_node_parts(disc, panel, pot, x))?.eval(t0),
        ApproximationMode::GlobalTrigonometric => {
            SeriesModel::fourier_fit(&curve_node_parts(disc, panel, pot, x))?.eval(t0)
        }
        ApproximationMode::LocalTaylor(q) => {
            let node = &p.nodes[center];
            let pos: [Jet; 3] = std::array::from_fn(|i| {
                let d: Vec<Complex64> = node.derivs[..=q].iter().map(|v| Complex64::new(v[i], 0.0)).collect();
                Jet::from_derivatives(&d)
            });
            let tangent = pos.map(|j| j.differentiate());
            let t = Jet::affine(Complex64::new(node.t, 0.0), p.map.scale, q - 1);
            pot.curve_part(t, &pos, &tangent, x).eval_at(t0 - node.local)
        }
        ApproximationMode::Analytic => {
            let chart = disc.chart.as_ref().expect("checked");
            let jet = chart.eval_jet(Jet::affine(p.map.to_global(t0), p.map.scale, 1));
            let pos = jet.map(|j| j.value());
            let tangent = jet.map(|j| j.derivative(1));
            pot.curve_part(p.map.to_global(t0), &pos, &tangent, x)
        }
        ApproximationMode::Default => unreachable!("resolved"),
    };
    Ok(k0 * a)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{Circle, Potato, Segment};
    use crate::potentials::{DensitySpec, KernelSpec, Layer};
    use crate::rules::HalfIntegerP;
    use std::f64::consts::{LN_2, PI};

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn circle(n: usize) -> CurveDiscretization {
        CurveDiscretization::with_rule(Arc::new(Circle { radius: 1.0 }), RuleKind::Trapezoidal, n, 1).unwrap()
    }

    #[test]
    fn legendre_fit_interpolates() {
        let r = rule(RuleKind::GaussLegendre, 12).unwrap();
        let f = |t: Complex64| (t * 0.7).exp() / (t + 3.0);
        let vals: Vec<Complex64> = r.nodes.iter().map(|&t| f(c(t, 0.0))).collect();
        let m = SeriesModel::legendre_fit(&vals).unwrap();
        for (&t, v) in r.nodes.iter().zip(&vals) {
            assert!((m.eval(c(t, 0.0)) - v).norm() < 1e-13);
        }
        assert!((m.eval(c(0.1, 0.3)) - f(c(0.1, 0.3))).norm() < 1e-9);
    }

    #[test]
    fn fourier_fit_is_exact_for_trig_polynomials() {
        for n in [9, 10] {
            let f = |t: Complex64| 2.0 + t.cos() - (t * 4.0).sin() * 0.5;
            let vals: Vec<Complex64> = (0..n).map(|l| f(c(2.0 * PI * l as f64 / n as f64, 0.0))).collect();
            let m = SeriesModel::fourier_fit(&vals).unwrap();
            let t = c(0.4, 0.69);
            assert!((m.eval(t) - f(t)).norm() < 1e-12, "n = {n}");
        }
        // Even n: the Nyquist mode is the real interpolant cos(n t/2).
        let n = 8;
        let vals: Vec<Complex64> = (0..n).map(|l| c((4.0 * 2.0 * PI * l as f64 / n as f64).cos(), 0.0)).collect();
        let m = SeriesModel::fourier_fit(&vals).unwrap();
        assert!((m.eval(c(0.3, 0.2)) - c(0.3, 0.2).scale(4.0).cos()).norm() < 1e-12);
    }

    #[test]
    fn trigonometric_circle_approximation() {
        let disc = circle(50);
        let approx = approximate_curve(&disc, 0, ApproximationMode::GlobalTrigonometric, 0).unwrap();
        let g = approx.eval(c(0.0, 0.3));
        let exact = Circle { radius: 1.0 }.eval(c(0.0, 0.3));
        for i in 0..3 {
            assert!((g[i] - exact[i]).norm() < 1e-12);
        }
    }

    #[test]
    fn polynomial_flat_panel_is_exact() {
        for n in [2, 5, 16] {
            let disc = CurveDiscretization::with_rule(Arc::new(Segment::default()), RuleKind::GaussLegendre, n, 1).unwrap();
            let approx = approximate_curve(&disc, 0, ApproximationMode::GlobalPolynomial, 0).unwrap();
            let g = approx.eval(c(0.3, 0.7));
            assert!((g[0] - c(0.3, 0.7)).norm() < 1e-13 && g[1].norm() < 1e-13, "{g:?}");
        }
    }

    #[test]
    fn taylor_circle_approximation() {
        let disc = circle(16);
        let approx = approximate_curve(&disc, 0, ApproximationMode::LocalTaylor(5), 0).unwrap();
        let t = c(0.0, 0.69);
        let exact = Circle { radius: 1.0 }.eval(t);
        let g = approx.eval(t);
        let err = (0..3).map(|i| (g[i] - exact[i]).norm()).fold(0.0, f64::max);
        assert!(err < 2e-4, "{err}");
        let d = approx.derivative(c(0.0, 0.0), 3);
        assert!((d[1] + 1.0).norm() < 1e-13);
    }

    #[test]
    fn mode_compatibility() {
        let disc = circle(16);
        assert!(approximate_curve(&disc, 0, ApproximationMode::GlobalPolynomial, 0).is_err());
        assert!(approximate_curve(&disc, 0, ApproximationMode::LocalTaylor(6), 0).is_err());
        assert!(approximate_curve(&disc, 0, ApproximationMode::LocalTaylor(0), 0).is_err());
        let gl = CurveDiscretization::with_rule(Arc::new(Potato::default()), RuleKind::GaussLegendre, 8, 4).unwrap();
        assert!(approximate_curve(&gl, 0, ApproximationMode::GlobalTrigonometric, 0).is_err());
        assert_eq!(ApproximationMode::Default.resolve(RuleKind::Trapezoidal), ApproximationMode::LocalTaylor(5));
    }

    #[test]
    fn initial_guess_clamps() {
        let disc = circle(4);
        let x = TargetPoint::new2(0.5, 0.0);
        assert!((initial_guess(&disc, 0, 0, &x) - c(0.0, 0.5)).norm() < 1e-15);
        let near = TargetPoint::new2(1.0 + 1e-6, 0.0);
        assert!((initial_guess(&disc, 0, 0, &near) - c(0.0, 1e-3)).norm() < 1e-15);
        let far = TargetPoint::new2(50.0, 0.0);
        assert!((initial_guess(&disc, 0, 0, &far) - c(0.0, PI)).norm() < 1e-15);
    }

    #[test]
    fn circle_root() {
        let disc = circle(50);
        let approx = approximate_curve(&disc, 0, ApproximationMode::GlobalTrigonometric, 0).unwrap();
        let x = TargetPoint::new2(0.5, 0.0);
        let r = find_root(&approx, &x, c(0.0, 0.5));
        assert_eq!(r.status, RootStatus::Converged);
        assert!((r.t0 - c(0.0, LN_2)).norm() < 1e-10);
        assert!(r.iterations <= 8, "{}", r.iterations);
        assert!((r.g - c(0.0, -4.0 / 3.0)).norm() < 1e-10);
        assert!((r.rho - LN_2).abs() < 1e-10);
        let down = find_root(&approx, &x, c(0.0, -0.5));
        assert!((down.t0 - r.t0).norm() < 1e-10);
    }

    #[test]
    fn flat_panel_root() {
        let disc = CurveDiscretization::with_rule(Arc::new(Segment::default()), RuleKind::GaussLegendre, 8, 1).unwrap();
        let approx = approximate_curve(&disc, 0, ApproximationMode::GlobalPolynomial, 0).unwrap();
        let x = TargetPoint::new2(0.3, 0.2);
        let (node, _) = disc.panels[0].nearest(&x);
        let r = find_root(&approx, &x, initial_guess(&disc, 0, node, &x));
        assert_eq!(r.status, RootStatus::Converged);
        assert!((r.t0 - c(0.3, 0.2)).norm() < 1e-14);
        assert!(r.iterations <= 6, "{}", r.iterations);
    }

    #[test]
    fn on_curve_root() {
        let chart = Potato::default();
        let disc = CurveDiscretization::with_rule(Arc::new(chart.clone()), RuleKind::Trapezoidal, 64, 1).unwrap();
        let g = chart.eval(c(0.7, 0.0));
        let x = TargetPoint::new2(g[0].re, g[1].re);
        let approx = approximate_curve(&disc, 0, ApproximationMode::Analytic, 0).unwrap();
        let r = find_root(&approx, &x, c(0.65, 0.05));
        assert_eq!(r.status, RootStatus::OnCurve);
    }

    #[test]
    fn smooth_part_examples() {
        let disc = circle(16);
        let x = TargetPoint::new2(0.5, 0.0);
        let t0 = c(0.0, 0.69);
        let one = LayerPotential::new(KernelSpec::harmonic(Layer::Single), DensitySpec::Constant(1.0), HalfIntegerP::ONE);
        for s in [SmoothPartStrategy::MaxBound, SmoothPartStrategy::Interpolated] {
            let f = smooth_part_at_root(&disc, 0, &one, &x, t0, ApproximationMode::GlobalTrigonometric, 0, s).unwrap();
            assert!((f - 1.0).norm() < 1e-12);
        }
        let cos = LayerPotential {
            density: DensitySpec::Cosine { offset: 2.0, amplitude: 1.0 },
            ..one
        };
        let f = smooth_part_at_root(
            &disc,
            0,
            &cos,
            &x,
            t0,
            ApproximationMode::GlobalTrigonometric,
            0,
            SmoothPartStrategy::Interpolated,
        )
        .unwrap();
        assert!((f - (2.0 + 0.69f64.cosh())).norm() < 1e-12);
        let f = smooth_part_at_root(&disc, 0, &cos, &x, t0, ApproximationMode::Default, 0, SmoothPartStrategy::MaxBound)
            .unwrap();
        assert!((f - 3.0).norm() < 1e-12);
        let f = smooth_part_at_root(&disc, 0, &cos, &x, t0, ApproximationMode::Analytic, 0, SmoothPartStrategy::Interpolated)
            .unwrap();
        assert!((f - (2.0 + 0.69f64.cosh())).norm() < 1e-12);
    }
}

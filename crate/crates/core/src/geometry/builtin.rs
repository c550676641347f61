//! Built-in analytic curves and surfaces.

use std::collections::BTreeMap;
use std::f64::consts::PI;
use std::sync::Arc;

use super::chart::{AnalyticCurve, AnalyticSurface, CurveChart, SurfaceChart, SurfaceFrame};
use super::jet::Scalar;
use crate::error::{invalid, Result};

const TWO_PI: f64 = 2.0 * PI;

#[derive(Debug, Clone, PartialEq)]
pub struct Circle {
    pub radius: f64,
}

impl AnalyticCurve for Circle {
    fn name(&self) -> String {
        "circle".into()
    }
    fn dim(&self) -> usize {
        2
    }
    fn base_interval(&self) -> (f64, f64) {
        (0.0, TWO_PI)
    }
    fn periodic(&self) -> bool {
        true
    }
    fn map<S: Scalar>(&self, t: S) -> [S; 3] {
        [t.cos().scale(self.radius), t.sin().scale(self.radius), S::from_f64(0.0)]
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Ellipse {
    pub a: f64,
    pub b: f64,
}

impl AnalyticCurve for Ellipse {
    fn name(&self) -> String {
        "ellipse".into()
    }
    fn dim(&self) -> usize {
        2
    }
    fn base_interval(&self) -> (f64, f64) {
        (0.0, TWO_PI)
    }
    fn periodic(&self) -> bool {
        true
    }
    fn map<S: Scalar>(&self, t: S) -> [S; 3] {
        [t.cos().scale(self.a), t.sin().scale(self.b), S::from_f64(0.0)]
    }
}

/// (1 + amplitude·cos(frequency·t))·(cos t, sin t).
#[derive(Debug, Clone, PartialEq)]
pub struct Potato {
    pub amplitude: f64,
    pub frequency: f64,
}

impl Default for Potato {
    fn default() -> Self {
        Potato { amplitude: 0.1, frequency: 5.0 }
    }
}

impl AnalyticCurve for Potato {
    fn name(&self) -> String {
        "potato".into()
    }
    fn dim(&self) -> usize {
        2
    }
    fn base_interval(&self) -> (f64, f64) {
        (0.0, TWO_PI)
    }
    fn periodic(&self) -> bool {
        true
    }
    fn map<S: Scalar>(&self, t: S) -> [S; 3] {
        let r = S::from_f64(1.0) + t.scale(self.frequency).cos().scale(self.amplitude);
        [r * t.cos(), r * t.sin(), S::from_f64(0.0)]
    }
}

/// Straight segment origin + t·direction over `interval`.
#[derive(Debug, Clone, PartialEq)]
pub struct Segment {
    pub origin: [f64; 3],
    pub direction: [f64; 3],
    pub interval: (f64, f64),
    pub dim: usize,
}

impl Default for Segment {
    fn default() -> Self {
        Segment { origin: [0.0; 3], direction: [1.0, 0.0, 0.0], interval: (-1.0, 1.0), dim: 2 }
    }
}

impl AnalyticCurve for Segment {
    fn name(&self) -> String {
        "segment".into()
    }
    fn dim(&self) -> usize {
        self.dim
    }
    fn base_interval(&self) -> (f64, f64) {
        self.interval
    }
    fn periodic(&self) -> bool {
        false
    }
    fn map<S: Scalar>(&self, t: S) -> [S; 3] {
        std::array::from_fn(|i| S::from_f64(self.origin[i]) + t.scale(self.direction[i]))
    }
}

/// One term a·cos(m·s − n·t) of the minor-radius perturbation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FourierMode {
    pub m: f64,
    pub n: f64,
    pub amplitude: f64,
}

/// Torus whose cross-section radius varies as r + Σ a·cos(m·s − n·t).
///
/// `s` is the poloidal and `t` the toroidal angle. With no modes this is
/// the standard torus.
#[derive(Debug, Clone, PartialEq)]
pub struct FourierTorus {
    pub major: f64,
    pub minor: f64,
    pub modes: Vec<FourierMode>,
}

impl FourierTorus {
    pub fn torus(major: f64, minor: f64) -> Self {
        FourierTorus { major, minor, modes: Vec::new() }
    }

    /// Three-period rotating, shifted cross-section used as a stellarator-like test surface.
    pub fn default_perturbed() -> Self {
        FourierTorus {
            major: 4.5,
            minor: 1.0,
            modes: vec![
                FourierMode { m: 2.0, n: 3.0, amplitude: 0.2 },
                FourierMode { m: 1.0, n: 3.0, amplitude: 0.1 },
            ],
        }
    }
}

impl AnalyticSurface for FourierTorus {
    fn name(&self) -> String {
        if self.modes.is_empty() { "torus".into() } else { "fourier_torus".into() }
    }
    fn base_intervals(&self) -> [(f64, f64); 2] {
        [(0.0, TWO_PI), (0.0, TWO_PI)]
    }
    fn periodic(&self) -> [bool; 2] {
        [true, true]
    }
    fn map<S: Scalar>(&self, s: S, t: S) -> SurfaceFrame<S> {
        let mut rho = S::from_f64(self.minor);
        let mut rho_s = S::from_f64(0.0);
        let mut rho_t = S::from_f64(0.0);
        for md in &self.modes {
            let arg = s.scale(md.m) - t.scale(md.n);
            let (sn, cs) = (arg.sin(), arg.cos());
            rho = rho + cs.scale(md.amplitude);
            rho_s = rho_s - sn.scale(md.amplitude * md.m);
            rho_t = rho_t + sn.scale(md.amplitude * md.n);
        }
        let (ss, cs) = (s.sin(), s.cos());
        let (st, ct) = (t.sin(), t.cos());
        let u = S::from_f64(self.major) + rho * cs;
        let u_s = rho_s * cs - rho * ss;
        let u_t = rho_t * cs;
        SurfaceFrame {
            pos: [u * ct, u * st, rho * ss],
            ds: [u_s * ct, u_s * st, rho_s * ss + rho * cs],
            dt: [u_t * ct - u * st, u_t * st + u * ct, rho_t * ss],
        }
    }
}

/// Sphere with polar angle s ∈ [0, π] and azimuth t ∈ [0, 2π).
#[derive(Debug, Clone, PartialEq)]
pub struct Sphere {
    pub radius: f64,
}

impl AnalyticSurface for Sphere {
    fn name(&self) -> String {
        "sphere".into()
    }
    fn base_intervals(&self) -> [(f64, f64); 2] {
        [(0.0, PI), (0.0, TWO_PI)]
    }
    fn periodic(&self) -> [bool; 2] {
        [false, true]
    }
    fn map<S: Scalar>(&self, s: S, t: S) -> SurfaceFrame<S> {
        let r = self.radius;
        let (ss, cs) = (s.sin(), s.cos());
        let (st, ct) = (t.sin(), t.cos());
        SurfaceFrame {
            pos: [(ss * ct).scale(r), (ss * st).scale(r), cs.scale(r)],
            ds: [(cs * ct).scale(r), (cs * st).scale(r), (-ss).scale(r)],
            dt: [(-ss * st).scale(r), (ss * ct).scale(r), S::from_f64(0.0)],
        }
    }
}

/// The square [-1, 1]² in the plane z = 0.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct Plane;

impl AnalyticSurface for Plane {
    fn name(&self) -> String {
        "plane".into()
    }
    fn base_intervals(&self) -> [(f64, f64); 2] {
        [(-1.0, 1.0), (-1.0, 1.0)]
    }
    fn periodic(&self) -> [bool; 2] {
        [false, false]
    }
    fn map<S: Scalar>(&self, s: S, t: S) -> SurfaceFrame<S> {
        let (z, o) = (S::from_f64(0.0), S::from_f64(1.0));
        SurfaceFrame { pos: [s, t, z], ds: [o, z, z], dt: [z, o, z] }
    }
}

/// Closed space curve t ↦ γ(s0, t) on a Fourier torus.
#[derive(Debug, Clone, PartialEq)]
pub struct ToroidalLine {
    pub surface: FourierTorus,
    pub poloidal_angle: f64,
}

impl AnalyticCurve for ToroidalLine {
    fn name(&self) -> String {
        "stellarator_line".into()
    }
    fn dim(&self) -> usize {
        3
    }
    fn base_interval(&self) -> (f64, f64) {
        (0.0, TWO_PI)
    }
    fn periodic(&self) -> bool {
        true
    }
    fn map<S: Scalar>(&self, t: S) -> [S; 3] {
        self.surface.map(S::from_f64(self.poloidal_angle), t).pos
    }
}

/// A built-in chart of either kind.
#[derive(Debug, Clone)]
pub enum Geometry {
    Curve(Arc<dyn CurveChart>),
    Surface(Arc<dyn SurfaceChart>),
}

/// Named geometry parameters, e.g. `radius = 2`.
pub type GeometryParams = BTreeMap<String, String>;

fn param(params: &GeometryParams, key: &str, default: f64) -> Result<f64> {
    match params.get(key) {
        None => Ok(default),
        Some(v) => v
            .trim()
            .parse::<f64>()
            .ok()
            .filter(|x| x.is_finite())
            .map_or_else(|| invalid(format!("geometry parameter '{key}' = '{v}' is not a number")), Ok),
    }
}

fn positive(params: &GeometryParams, key: &str, default: f64) -> Result<f64> {
    let v = param(params, key, default)?;
    if v <= 0.0 {
        return invalid(format!("geometry parameter '{key}' must be positive"));
    }
    Ok(v)
}

/// Parses `m:n:amplitude` triples separated by commas.
pub fn parse_modes(text: &str) -> Result<Vec<FourierMode>> {
    let mut modes = Vec::new();
    for item in text.split(',').map(str::trim).filter(|s| !s.is_empty()) {
        let parts: Vec<f64> = item
            .split(':')
            .map(|p| p.trim().parse::<f64>())
            .collect::<std::result::Result<_, _>>()
            .map_err(|_| crate::Error::InvalidArgument(format!("bad Fourier mode '{item}'")))?;
        if parts.len() != 3 {
            return invalid(format!("Fourier mode '{item}' must be m:n:amplitude"));
        }
        modes.push(FourierMode { m: parts[0], n: parts[1], amplitude: parts[2] });
    }
    Ok(modes)
}

fn fourier_torus(params: &GeometryParams) -> Result<FourierTorus> {
    let d = FourierTorus::default_perturbed();
    let major = positive(params, "major", d.major)?;
    let minor = positive(params, "minor", d.minor)?;
    let modes = match params.get("modes") {
        Some(text) => parse_modes(text)?,
        None => d.modes,
    };
    let slack: f64 = modes.iter().map(|m| m.amplitude.abs()).sum();
    if slack >= minor || minor + slack >= major {
        return invalid("Fourier torus perturbation must keep 0 < ρ < major radius");
    }
    Ok(FourierTorus { major, minor, modes })
}

/// Looks up a built-in chart by name.
///
/// Names: circle, ellipse, potato, segment, stellarator_line, torus,
/// fourier_torus, sphere, plane.
pub fn builtin_geometry(name: &str, params: &GeometryParams) -> Result<Geometry> {
    let curve = |c: Arc<dyn CurveChart>| Ok(Geometry::Curve(c));
    let surface = |s: Arc<dyn SurfaceChart>| Ok(Geometry::Surface(s));
    match name {
        "circle" => curve(Arc::new(Circle { radius: positive(params, "radius", 1.0)? })),
        "ellipse" => curve(Arc::new(Ellipse {
            a: positive(params, "a", 1.0)?,
            b: positive(params, "b", 0.5)?,
        })),
        "potato" => {
            let amplitude = param(params, "amplitude", 0.1)?;
            if amplitude.abs() >= 1.0 {
                return invalid("potato amplitude must satisfy |a| < 1");
            }
            curve(Arc::new(Potato { amplitude, frequency: param(params, "frequency", 5.0)? }))
        }
        "segment" => {
            let half = positive(params, "half_length", 1.0)?;
            curve(Arc::new(Segment { interval: (-half, half), ..Segment::default() }))
        }
        "stellarator_line" => curve(Arc::new(ToroidalLine {
            surface: fourier_torus(params)?,
            poloidal_angle: param(params, "poloidal_angle", PI / 2.0)?,
        })),
        "torus" => {
            let major = positive(params, "major", 4.5)?;
            let minor = positive(params, "minor", 1.7)?;
            if minor >= major {
                return invalid("torus needs minor < major");
            }
            surface(Arc::new(FourierTorus::torus(major, minor)))
        }
        "fourier_torus" => surface(Arc::new(fourier_torus(params)?)),
        "sphere" => surface(Arc::new(Sphere { radius: positive(params, "radius", 1.0)? })),
        "plane" => surface(Arc::new(Plane)),
        other => invalid(format!("unknown geometry '{other}'")),
    }
}

#[cfg(test)]
mod tests {
    use super::super::chart::Direction;
    use super::*;
    use num_complex::Complex64;

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    fn fd_check_curve(chart: &dyn CurveChart, t: f64) {
        let h = 1e-5;
        let d = chart.derivative(c(t), 1);
        let p = chart.eval(c(t + h));
        let m = chart.eval(c(t - h));
        for i in 0..3 {
            let fd = (p[i] - m[i]) / (2.0 * h);
            assert!((fd - d[i]).norm() <= 1e-6 * (1.0 + d[i].norm()), "{} component {i}", chart.name());
            assert!(chart.eval(c(t))[i].im.abs() < 1e-14);
        }
        let d2 = chart.derivative(c(t), 2);
        let dp = chart.derivative(c(t + h), 1);
        let dm = chart.derivative(c(t - h), 1);
        for i in 0..3 {
            let fd = (dp[i] - dm[i]) / (2.0 * h);
            assert!((fd - d2[i]).norm() <= 1e-6 * (1.0 + d2[i].norm()));
        }
    }

    #[test]
    fn curve_derivatives_match_finite_differences() {
        let params = GeometryParams::new();
        for name in ["circle", "ellipse", "potato", "segment", "stellarator_line"] {
            let Geometry::Curve(chart) = builtin_geometry(name, &params).unwrap() else { panic!() };
            for t in [0.1, 0.77, 2.3] {
                fd_check_curve(chart.as_ref(), t);
            }
        }
    }

    #[test]
    fn surface_partials_match_finite_differences() {
        let params = GeometryParams::new();
        for name in ["torus", "fourier_torus", "sphere", "plane"] {
            let Geometry::Surface(chart) = builtin_geometry(name, &params).unwrap() else { panic!() };
            let (s, t) = (0.4, 1.3);
            let h = 1e-5;
            for dir in [Direction::S, Direction::T] {
                for order in 1..=3 {
                    let d = chart.partial(c(s), c(t), dir, order);
                    let shift = |e: f64| match dir {
                        Direction::S => chart.partial(c(s + e), c(t), dir, order - 1),
                        Direction::T => chart.partial(c(s), c(t + e), dir, order - 1),
                    };
                    let (p, m) = (shift(h), shift(-h));
                    for i in 0..3 {
                        let fd = (p[i] - m[i]) / (2.0 * h);
                        assert!((fd - d[i]).norm() <= 1e-6 * (1.0 + d[i].norm()), "{name} {dir:?} {order}");
                    }
                }
            }
        }
    }

    #[test]
    fn circle_values() {
        let Geometry::Curve(chart) = builtin_geometry("circle", &GeometryParams::new()).unwrap() else {
            panic!()
        };
        let g = chart.eval(c(0.0));
        let d = chart.derivative(c(0.0), 1);
        assert_eq!((g[0].re, g[1].re), (1.0, 0.0));
        assert_eq!((d[0].re, d[1].re), (0.0, 1.0));
    }

    #[test]
    fn potato_formula() {
        let p = Potato::default();
        let t = 0.9;
        let g = CurveChart::eval(&p, c(t));
        let r = 1.0 + 0.1 * (5.0 * t).cos();
        assert!((g[0].re - r * t.cos()).abs() < 1e-15);
        assert!((g[1].re - r * t.sin()).abs() < 1e-15);
    }

    #[test]
    fn unknown_and_invalid_names() {
        let params = GeometryParams::new();
        assert!(builtin_geometry("klein_bottle", &params).is_err());
        let mut bad = GeometryParams::new();
        bad.insert("radius".into(), "-1".into());
        assert!(builtin_geometry("circle", &bad).is_err());
        bad.insert("modes".into(), "2:3".into());
        assert!(builtin_geometry("fourier_torus", &bad).is_err());
        let mut ok = GeometryParams::new();
        ok.insert("modes".into(), "2:3:0.1, 0:1:0.05".into());
        ok.insert("major".into(), "4.5".into());
        ok.insert("minor".into(), "1.7".into());
        assert!(builtin_geometry("fourier_torus", &ok).is_ok());
    }
}

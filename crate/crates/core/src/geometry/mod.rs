//! Curve and surface charts, discretizations and the squared distance function.

mod builtin;
mod chart;
mod discretization;
pub mod io;
pub mod jet;

use num_complex::Complex64;

pub use builtin::{
    builtin_geometry, parse_modes, Circle, Ellipse, FourierMode, FourierTorus, Geometry, GeometryParams,
    Plane, Potato, Segment, Sphere, ToroidalLine,
};
pub use chart::{AnalyticCurve, AnalyticSurface, CurveChart, Direction, SurfaceChart, SurfaceFrame};
pub use discretization::{
    CurveDiscretization, CurveNode, CurveNodeId, CurvePanel, DirectionSpec, PanelMap, SurfaceDiscretization,
    SurfaceNode, SurfaceNodeId, SurfacePanel, DEFAULT_SAMPLE_ORDER,
};
pub(crate) use discretization::dist;

use crate::error::{invalid, Error, Result};

/// Evaluation point x. Planar points have a zero third coordinate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TargetPoint {
    pub coords: [f64; 3],
    pub dim: usize,
}

impl TargetPoint {
    pub fn new2(x: f64, y: f64) -> Self {
        TargetPoint { coords: [x, y, 0.0], dim: 2 }
    }

    pub fn new3(x: f64, y: f64, z: f64) -> Self {
        TargetPoint { coords: [x, y, z], dim: 3 }
    }

    pub fn from_slice(v: &[f64]) -> Result<Self> {
        match *v {
            [x, y] => Ok(TargetPoint::new2(x, y)),
            [x, y, z] => Ok(TargetPoint::new3(x, y, z)),
            _ => invalid("target points have 2 or 3 coordinates"),
        }
    }

    pub fn norm_squared(&self) -> f64 {
        self.coords.iter().map(|c| c * c).sum()
    }
}

/// R²(t) = Σ (γ_i(t) − x_i)² with complexified γ.
pub fn squared_distance(chart: &dyn CurveChart, t: Complex64, x: &TargetPoint) -> Complex64 {
    let g = chart.eval(t);
    (0..3).map(|i| (g[i] - x.coords[i]).powi(2)).sum()
}

/// G(t0) = 1 / (2(γ(t0) − x)·γ'(t0)).
pub fn geometry_factor(chart: &dyn CurveChart, t0: Complex64, x: &TargetPoint) -> Result<Complex64> {
    let (g, d) = chart.eval_d1(t0);
    geometry_factor_from(&g, &d, x)
}

pub(crate) fn geometry_factor_from(g: &[Complex64; 3], d: &[Complex64; 3], x: &TargetPoint) -> Result<Complex64> {
    let dr2: Complex64 = (0..3).map(|i| 2.0 * (g[i] - x.coords[i]) * d[i]).sum();
    if dr2.norm() < 1e-12 {
        return Err(Error::DegenerateRoot(dr2.norm()));
    }
    Ok(dr2.inv())
}

/// The point x = (Re ω(t0), Im ω(t0)) with ω = γ₁ + iγ₂, for which t0 is a root of R².
pub fn complexify_planar(chart: &dyn CurveChart, t0: Complex64) -> Result<TargetPoint> {
    if chart.dim() != 2 {
        return invalid("complexification needs a planar curve");
    }
    let g = chart.eval(t0);
    let w = g[0] + Complex64::i() * g[1];
    Ok(TargetPoint::new2(w.re, w.im))
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::LN_2;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn squared_distance_circle() {
        let circle = Circle { radius: 1.0 };
        let x = TargetPoint::new2(0.5, 0.0);
        for t in [0.0, 0.4, 2.0] {
            let r2 = squared_distance(&circle, c(t, 0.0), &x);
            assert!((r2.re - (1.25 - t.cos())).abs() < 1e-15);
        }
        assert!(squared_distance(&circle, c(0.0, LN_2), &x).norm() < 1e-14);
        let on = TargetPoint::new2(0.7f64.cos(), 0.7f64.sin());
        assert!(squared_distance(&circle, c(0.7, 0.0), &on).norm() < 1e-15);
    }

    #[test]
    fn geometry_factor_examples() {
        let circle = Circle { radius: 1.0 };
        let x = TargetPoint::new2(0.5, 0.0);
        let g = geometry_factor(&circle, c(0.0, LN_2), &x).unwrap();
        assert!((g - c(0.0, -4.0 / 3.0)).norm() < 1e-13);
        let gc = geometry_factor(&circle, c(0.0, -LN_2), &x).unwrap();
        assert!((gc - g.conj()).norm() < 1e-13);
        let seg = Segment::default();
        let g = geometry_factor(&seg, c(0.0, 0.3), &TargetPoint::new2(0.0, 0.3)).unwrap();
        assert!((g.norm() - 1.0 / 0.6).abs() < 1e-14);
        // A double root of R² has no geometry factor.
        let on = TargetPoint::new2(1.0, 0.0);
        assert!(matches!(geometry_factor(&circle, c(0.0, 0.0), &on), Err(Error::DegenerateRoot(_))));
    }

    #[test]
    fn geometry_factor_is_residue_limit() {
        let potato = Potato::default();
        let t0 = c(0.5, 0.1);
        let x = complexify_planar(&potato, t0).unwrap();
        let g = geometry_factor(&potato, t0, &x).unwrap();
        let t = t0 + 1e-6;
        let lim = (t - t0) / squared_distance(&potato, t, &x);
        assert!((lim - g).norm() <= 1e-5 * g.norm());
    }

    #[test]
    fn complexify_examples() {
        let circle = Circle { radius: 1.0 };
        let x = complexify_planar(&circle, c(0.0, LN_2)).unwrap();
        assert!((x.coords[0] - 0.5).abs() < 1e-15 && x.coords[1].abs() < 1e-15);
        let x = complexify_planar(&circle, c(0.3, 0.0)).unwrap();
        assert!((x.coords[0] - 0.3f64.cos()).abs() < 1e-15);
        let potato = Potato::default();
        let t0 = c(0.5, 0.1);
        let x = complexify_planar(&potato, t0).unwrap();
        assert!(squared_distance(&potato, t0, &x).norm() < 1e-12);
        let line = ToroidalLine { surface: FourierTorus::default_perturbed(), poloidal_angle: 1.0 };
        assert!(complexify_planar(&line, t0).is_err());
    }
}

//! Layer-potential kernels, densities, direct quadrature and reference values.
//!
//! A layer potential is u(x) = ∫ k(x,y) σ(y) / ‖y − x‖^{2p} dS(y). Its
//! integrand in a parameter t is written as k(r)·a(t) / R²(t)^p where the
//! analytic part a = σ·J collects the density and the line/area element
//! (times n̂·(y − x) for double layers).

mod adaptive;

use std::f64::consts::PI;
use std::sync::Arc;

use num_complex::Complex64;

use crate::error::{invalid, Error, Result};
use crate::geometry::jet::{cross, dot, sub3, Scalar};
use crate::geometry::{CurveChart, CurveDiscretization, SurfaceDiscretization, SurfaceFrame, TargetPoint};
use crate::rules::HalfIntegerP;

pub use adaptive::{integrate as adaptive_integrate, MAX_DEPTH};

/// Default absolute tolerance for curve reference values.
pub const DEFAULT_REFERENCE_TOL: f64 = 1e-14;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Pde {
    Harmonic,
    Helmholtz,
    ModifiedHelmholtz,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Layer {
    Single,
    Double,
}

impl Pde {
    pub fn from_name(name: &str) -> Result<Self> {
        match name {
            "harmonic" | "laplace" => Ok(Pde::Harmonic),
            "helmholtz" => Ok(Pde::Helmholtz),
            "modified_helmholtz" | "yukawa" => Ok(Pde::ModifiedHelmholtz),
            _ => invalid(format!("unknown pde '{name}'")),
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Pde::Harmonic => "harmonic",
            Pde::Helmholtz => "helmholtz",
            Pde::ModifiedHelmholtz => "modified_helmholtz",
        }
    }
}

impl Layer {
    pub fn from_name(name: &str) -> Result<Self> {
        match name {
            "single" => Ok(Layer::Single),
            "double" => Ok(Layer::Double),
            _ => invalid(format!("unknown layer '{name}'")),
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Layer::Single => "single",
            Layer::Double => "double",
        }
    }
}

/// Kernel family, layer type and wavenumber.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KernelSpec {
    pub pde: Pde,
    pub layer: Layer,
    pub omega: f64,
}

impl KernelSpec {
    pub fn new(pde: Pde, layer: Layer, omega: f64) -> Result<Self> {
        let needs_omega = pde != Pde::Harmonic;
        if needs_omega && !(omega > 0.0 && omega.is_finite()) {
            return invalid(format!("{} kernels need omega > 0", pde.name()));
        }
        if !needs_omega && omega != 0.0 {
            return invalid("harmonic kernels take no omega");
        }
        Ok(KernelSpec { pde, layer, omega })
    }

    pub fn harmonic(layer: Layer) -> Self {
        KernelSpec { pde: Pde::Harmonic, layer, omega: 0.0 }
    }

    /// Radial factor multiplying the geometric numerator at distance r.
    pub fn radial_factor(&self, r: f64) -> Complex64 {
        let w = self.omega;
        match (self.pde, self.layer) {
            (Pde::Harmonic, _) => Complex64::new(1.0, 0.0),
            (Pde::Helmholtz, Layer::Single) => Complex64::new(0.0, w * r).exp(),
            (Pde::Helmholtz, Layer::Double) => Complex64::new(-1.0, w * r) * Complex64::new(0.0, w * r).exp(),
            (Pde::ModifiedHelmholtz, Layer::Single) => Complex64::new((-w * r).exp(), 0.0),
            (Pde::ModifiedHelmholtz, Layer::Double) => Complex64::new((1.0 - w * r) * (-w * r).exp(), 0.0),
        }
    }

    /// Radial factor at the complex root, where the squared distance vanishes.
    pub fn root_factor(&self) -> Complex64 {
        self.radial_factor(0.0)
    }
}

/// k(x, y) without the density: the radial factor times n̂_y·(y − x) for
/// double layers.
pub fn kernel_numerator(spec: &KernelSpec, x: &TargetPoint, y: &[f64; 3], normal: &[f64; 3]) -> Result<Complex64> {
    let d = [y[0] - x.coords[0], y[1] - x.coords[1], y[2] - x.coords[2]];
    let r = (d[0] * d[0] + d[1] * d[1] + d[2] * d[2]).sqrt();
    if r == 0.0 {
        return Err(Error::SingularPoint);
    }
    let k = spec.radial_factor(r);
    Ok(match spec.layer {
        Layer::Single => k,
        Layer::Double => {
            let nn = (normal[0] * normal[0] + normal[1] * normal[1] + normal[2] * normal[2]).sqrt();
            k * ((normal[0] * d[0] + normal[1] * d[1] + normal[2] * d[2]) / nn)
        }
    })
}

/// Prescribed densities over the parameter domain. Curves use the
/// parameter t as the first coordinate and 0 as the second.
#[derive(Debug, Clone, PartialEq)]
pub enum DensitySpec {
    Constant(f64),
    /// offset + amplitude·cos(first parameter).
    Cosine { offset: f64, amplitude: f64 },
    /// 1 + cos(s)·sin(t).
    CosSSinT,
    /// Product of the first and third coordinates of y.
    ProductXZ,
    Scaled(f64, Box<DensitySpec>),
}

impl DensitySpec {
    pub fn from_name(name: &str) -> Result<Self> {
        match name {
            "one" | "constant" => Ok(DensitySpec::Constant(1.0)),
            "cos_s_sin_t" => Ok(DensitySpec::CosSSinT),
            "two_plus_cos" => Ok(DensitySpec::Cosine { offset: 2.0, amplitude: 1.0 }),
            "one_plus_cos" => Ok(DensitySpec::Cosine { offset: 1.0, amplitude: 1.0 }),
            "product_xz" => Ok(DensitySpec::ProductXZ),
            _ => invalid(format!("unknown density '{name}'")),
        }
    }

    pub fn eval<S: Scalar>(&self, params: [S; 2], pos: &[S; 3]) -> S {
        match self {
            DensitySpec::Constant(c) => S::from_f64(*c),
            DensitySpec::Cosine { offset, amplitude } => S::from_f64(*offset) + params[0].cos().scale(*amplitude),
            DensitySpec::CosSSinT => S::from_f64(1.0) + params[0].cos() * params[1].sin(),
            DensitySpec::ProductXZ => pos[0] * pos[2],
            DensitySpec::Scaled(l, inner) => inner.eval(params, pos).scale(*l),
        }
    }
}

/// Kernel, density and distance exponent p of a layer potential.
#[derive(Debug, Clone, PartialEq)]
pub struct LayerPotential {
    pub kernel: KernelSpec,
    pub density: DensitySpec,
    pub p: HalfIntegerP,
}

impl LayerPotential {
    pub fn new(kernel: KernelSpec, density: DensitySpec, p: HalfIntegerP) -> Self {
        LayerPotential { kernel, density, p }
    }

    /// Exponent convention per source type: surfaces use 1/2 (single) and
    /// 3/2 (double); planar curves use 1 for both; space curves 1/2.
    pub fn default_p(kernel: &KernelSpec, surface: bool, dim: usize) -> Result<HalfIntegerP> {
        match (surface, dim, kernel.layer) {
            (true, _, Layer::Single) => Ok(HalfIntegerP::HALF),
            (true, _, Layer::Double) => Ok(HalfIntegerP::THREE_HALVES),
            (false, 2, _) => Ok(HalfIntegerP::ONE),
            (false, 3, Layer::Single) => Ok(HalfIntegerP::HALF),
            _ => invalid("double layers on space curves are not defined"),
        }
    }

    /// a = σ·J on a curve, with J = ‖γ'‖ (single) or (γ₂', −γ₁')·(γ − x) (double).
    pub fn curve_part<S: Scalar>(&self, t: S, pos: &[S; 3], tangent: &[S; 3], x: &TargetPoint) -> S {
        let sigma = self.density.eval([t, S::from_f64(0.0)], pos);
        let j = match self.kernel.layer {
            Layer::Single => dot(tangent, tangent).sqrt(),
            Layer::Double => {
                let xs = x.coords.map(S::from_f64);
                let d = sub3(pos, &xs);
                tangent[1] * d[0] - tangent[0] * d[1]
            }
        };
        sigma * j
    }

    /// a = σ·J on a surface, with J = ‖γ_s × γ_t‖ (single) or (γ_s × γ_t)·(γ − x) (double).
    pub fn surface_part<S: Scalar>(&self, params: [S; 2], frame: &SurfaceFrame<S>, x: &TargetPoint) -> S {
        let sigma = self.density.eval(params, &frame.pos);
        let n = cross(&frame.ds, &frame.dt);
        let j = match self.kernel.layer {
            Layer::Single => dot(&n, &n).sqrt(),
            Layer::Double => {
                let xs = x.coords.map(S::from_f64);
                dot(&n, &sub3(&frame.pos, &xs))
            }
        };
        sigma * j
    }

    pub(crate) fn check_curve(&self, dim: usize) -> Result<()> {
        if self.kernel.layer == Layer::Double && dim != 2 {
            return invalid("double layers on curves need a planar curve");
        }
        Ok(())
    }
}

/// Per-node data for direct quadrature of a layer potential.
#[derive(Debug, Clone, Default)]
pub struct QuadratureSources {
    pub pos: Vec<[f64; 3]>,
    /// Weight times the unnormalized normal.
    pub weighted_normal: Vec<[f64; 3]>,
    /// Weight times the line or area element.
    pub weighted_area: Vec<f64>,
    pub sigma: Vec<f64>,
}

impl QuadratureSources {
    pub fn from_curve(disc: &CurveDiscretization, pot: &LayerPotential) -> Result<Self> {
        pot.check_curve(disc.dim)?;
        let mut src = QuadratureSources::default();
        for panel in &disc.panels {
            for node in &panel.nodes {
                let pos = node.position();
                let d = node.tangent();
                src.pos.push(pos);
                src.weighted_normal.push([node.weight * d[1], -node.weight * d[0], 0.0]);
                src.weighted_area.push(node.weight * (d[0] * d[0] + d[1] * d[1] + d[2] * d[2]).sqrt());
                src.sigma.push(pot.density.eval([node.t, 0.0].map(c64), &pos.map(c64)).re);
            }
        }
        Ok(src)
    }

    pub fn from_surface(disc: &SurfaceDiscretization, pot: &LayerPotential) -> Result<Self> {
        let mut src = QuadratureSources::default();
        for panel in &disc.panels {
            for node in &panel.nodes {
                let pos = node.position();
                let n = node.area_normal();
                src.pos.push(pos);
                src.weighted_normal.push(n.map(|c| c * node.weight));
                src.weighted_area.push(node.weight * (n[0] * n[0] + n[1] * n[1] + n[2] * n[2]).sqrt());
                src.sigma.push(pot.density.eval(node.params.map(c64), &pos.map(c64)).re);
            }
        }
        Ok(src)
    }

    pub fn len(&self) -> usize {
        self.pos.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pos.is_empty()
    }

    /// Σ_ℓ k(r_ℓ)·σ_ℓ·J_ℓ·w_ℓ / r_ℓ^{2p}.
    pub fn evaluate(&self, pot: &LayerPotential, x: &TargetPoint) -> Result<Complex64> {
        let mut sum = Complex64::new(0.0, 0.0);
        for k in 0..self.len() {
            let y = &self.pos[k];
            let d = [y[0] - x.coords[0], y[1] - x.coords[1], y[2] - x.coords[2]];
            let r2 = d[0] * d[0] + d[1] * d[1] + d[2] * d[2];
            if r2 == 0.0 {
                return Err(Error::SingularPoint);
            }
            let j = match pot.kernel.layer {
                Layer::Single => self.weighted_area[k],
                Layer::Double => {
                    let n = &self.weighted_normal[k];
                    n[0] * d[0] + n[1] * d[1] + n[2] * d[2]
                }
            };
            let radial = if pot.kernel.pde == Pde::Harmonic {
                Complex64::new(1.0, 0.0)
            } else {
                pot.kernel.radial_factor(r2.sqrt())
            };
            sum += radial * (self.sigma[k] * j / distance_power(r2, pot.p));
        }
        Ok(sum)
    }
}

fn c64(v: f64) -> Complex64 {
    Complex64::new(v, 0.0)
}

/// r2^p for half-integer p.
fn distance_power(r2: f64, p: HalfIntegerP) -> f64 {
    let whole = r2.powi((p.two_p() / 2) as i32);
    if p.is_integer() {
        whole
    } else {
        whole * r2.sqrt()
    }
}

/// Geometry that can be used as a quadrature source.
pub trait Discretized {
    fn sources(&self, pot: &LayerPotential) -> Result<QuadratureSources>;
    /// Oracle for the exact potential.
    fn reference(&self, pot: &LayerPotential, tol: f64) -> Result<Reference>;
}

impl Discretized for CurveDiscretization {
    fn sources(&self, pot: &LayerPotential) -> Result<QuadratureSources> {
        QuadratureSources::from_curve(self, pot)
    }

    fn reference(&self, pot: &LayerPotential, tol: f64) -> Result<Reference> {
        Reference::for_curve(self, pot, tol)
    }
}

impl Discretized for SurfaceDiscretization {
    fn sources(&self, pot: &LayerPotential) -> Result<QuadratureSources> {
        QuadratureSources::from_surface(self, pot)
    }

    fn reference(&self, pot: &LayerPotential, _tol: f64) -> Result<Reference> {
        Reference::for_surface(self, pot)
    }
}

/// Reference potentials: adaptive quadrature on the analytic chart for
/// curves, a doubled grid for surfaces.
#[derive(Debug, Clone)]
pub enum Reference {
    Curve {
        chart: Arc<dyn CurveChart>,
        intervals: Vec<(f64, f64)>,
        potential: LayerPotential,
        tol: f64,
    },
    Surface {
        sources: QuadratureSources,
        potential: LayerPotential,
    },
}

impl Reference {
    pub fn for_curve(disc: &CurveDiscretization, pot: &LayerPotential, tol: f64) -> Result<Self> {
        pot.check_curve(disc.dim)?;
        if !(tol >= 1e-14) {
            return invalid("reference tolerance must be at least 1e-14");
        }
        let Some(chart) = &disc.chart else {
            return invalid("reference values need an analytic chart");
        };
        let intervals = disc
            .panels
            .iter()
            .map(|p| {
                let (lo, hi) = disc.kind().base_interval();
                (p.map.offset + p.map.scale * lo, p.map.offset + p.map.scale * hi)
            })
            .collect();
        Ok(Reference::Curve { chart: Arc::clone(chart), intervals, potential: pot.clone(), tol })
    }

    pub fn for_surface(disc: &SurfaceDiscretization, pot: &LayerPotential) -> Result<Self> {
        let fine = disc.refined(2, 1)?;
        Ok(Reference::Surface { sources: QuadratureSources::from_surface(&fine, pot)?, potential: pot.clone() })
    }

    pub fn value(&self, x: &TargetPoint) -> Result<Complex64> {
        match self {
            Reference::Surface { sources, potential } => sources.evaluate(potential, x),
            Reference::Curve { chart, intervals, potential, tol } => {
                let total: f64 = intervals.iter().map(|(a, b)| b - a).sum();
                let mut sum = Complex64::new(0.0, 0.0);
                for &(a, b) in intervals {
                    let share = tol * (b - a) / total;
                    sum += adaptive::integrate(|t| curve_integrand(chart.as_ref(), potential, x, t), a, b, share)?;
                }
                Ok(sum)
            }
        }
    }
}

fn curve_integrand(chart: &dyn CurveChart, pot: &LayerPotential, x: &TargetPoint, t: f64) -> Complex64 {
    let (g, d) = chart.eval_d1(c64(t));
    let a = pot.curve_part(c64(t), &g, &d, x);
    let r2: f64 = (0..3).map(|i| (g[i].re - x.coords[i]).powi(2)).sum();
    let radial = pot.kernel.radial_factor(r2.sqrt());
    radial * a / distance_power(r2, pot.p)
}

/// Plain quadrature of the layer potential at x.
pub fn evaluate_potential<D: Discretized + ?Sized>(disc: &D, pot: &LayerPotential, x: &TargetPoint) -> Result<Complex64> {
    disc.sources(pot)?.evaluate(pot, x)
}

pub fn reference_value<D: Discretized + ?Sized>(
    disc: &D,
    pot: &LayerPotential,
    x: &TargetPoint,
    tol: f64,
) -> Result<Complex64> {
    disc.reference(pot, tol)?.value(x)
}

/// |quadrature − reference| at x.
pub fn measured_error<D: Discretized + ?Sized>(disc: &D, pot: &LayerPotential, x: &TargetPoint, tol: f64) -> Result<f64> {
    Ok((evaluate_potential(disc, pot, x)? - reference_value(disc, pot, x, tol)?).norm())
}

/// Plain quadrature of ∫ g(t)·ω'(t) / (ω(t) − z0)^p dt with ω = γ₁ + iγ₂ and g = σ.
pub fn evaluate_complex_form(disc: &CurveDiscretization, density: &DensitySpec, z0: Complex64, p: u32) -> Result<Complex64> {
    if disc.dim != 2 {
        return invalid("complex kernels need a planar curve");
    }
    let mut sum = Complex64::new(0.0, 0.0);
    for panel in &disc.panels {
        for node in &panel.nodes {
            let [x, y, _] = node.position();
            let d = node.tangent();
            let w = Complex64::new(x, y) - z0;
            if w.norm() == 0.0 {
                return Err(Error::SingularPoint);
            }
            let g = density.eval([node.t, 0.0].map(c64), &node.position().map(c64));
            sum += g * Complex64::new(d[0], d[1]) * node.weight / w.powu(p);
        }
    }
    Ok(sum)
}

/// Adaptive reference for [`evaluate_complex_form`].
pub fn reference_complex_form(
    disc: &CurveDiscretization,
    density: &DensitySpec,
    z0: Complex64,
    p: u32,
    tol: f64,
) -> Result<Complex64> {
    let Some(chart) = &disc.chart else {
        return invalid("reference values need an analytic chart");
    };
    let (lo, hi) = chart.base_interval();
    let mut sum = Complex64::new(0.0, 0.0);
    for panel in &disc.panels {
        let (a, b) = disc.kind().base_interval();
        let (a, b) = (panel.map.offset + panel.map.scale * a, panel.map.offset + panel.map.scale * b);
        let share = tol * (b - a) / (hi - lo);
        sum += adaptive::integrate(
            |t| {
                let (g, d) = chart.eval_d1(c64(t));
                let w = g[0] + Complex64::i() * g[1] - z0;
                density.eval([c64(t), c64(0.0)], &g) * (d[0] + Complex64::i() * d[1]) / w.powu(p)
            },
            a,
            b,
            share,
        )?;
    }
    Ok(sum)
}

/// Solid angle normalization: the harmonic double layer with σ ≡ 1 is
/// ∓4π inside / 0 outside for closed surfaces (sign set by the orientation).
pub const FULL_SOLID_ANGLE: f64 = 4.0 * PI;

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{Circle, DirectionSpec, FourierTorus, Segment, Sphere};
    use crate::rules::RuleKind;

    fn toy(kernel: KernelSpec) -> LayerPotential {
        LayerPotential::new(kernel, DensitySpec::Constant(1.0), HalfIntegerP::ONE)
    }

    fn circle(n: usize) -> CurveDiscretization {
        CurveDiscretization::with_rule(Arc::new(Circle { radius: 1.0 }), RuleKind::Trapezoidal, n, 1).unwrap()
    }

    fn segment(n: usize) -> CurveDiscretization {
        CurveDiscretization::with_rule(Arc::new(Segment::default()), RuleKind::GaussLegendre, n, 1).unwrap()
    }

    #[test]
    fn kernel_numerators() {
        let x = TargetPoint::new3(0.0, 0.0, 0.0);
        let h = KernelSpec::harmonic(Layer::Single);
        assert_eq!(kernel_numerator(&h, &x, &[0.3, 0.1, 0.0], &[0.0, 0.0, 1.0]).unwrap(), c64(1.0));
        let m = KernelSpec::new(Pde::ModifiedHelmholtz, Layer::Single, 5.0).unwrap();
        let v = kernel_numerator(&m, &x, &[0.2, 0.0, 0.0], &[1.0, 0.0, 0.0]).unwrap();
        assert!((v.re - (-1f64).exp()).abs() < 1e-15);
        let d = KernelSpec::harmonic(Layer::Double);
        assert_eq!(kernel_numerator(&d, &x, &[0.3, 0.0, 0.0], &[0.0, 1.0, 0.0]).unwrap(), c64(0.0));
        assert!(matches!(kernel_numerator(&d, &x, &[0.0; 3], &[0.0, 1.0, 0.0]), Err(Error::SingularPoint)));
        let hd = KernelSpec::new(Pde::Helmholtz, Layer::Double, 2.0).unwrap();
        let v = kernel_numerator(&hd, &x, &[0.5, 0.0, 0.0], &[2.0, 0.0, 0.0]).unwrap();
        let expect = Complex64::new(-1.0, 1.0) * Complex64::new(0.0, 1.0).exp() * 0.5;
        assert!((v - expect).norm() < 1e-15);
    }

    #[test]
    fn kernel_validation() {
        assert!(KernelSpec::new(Pde::Helmholtz, Layer::Single, 0.0).is_err());
        assert!(KernelSpec::new(Pde::Harmonic, Layer::Single, 1.0).is_err());
        assert_eq!(KernelSpec::harmonic(Layer::Double).root_factor(), c64(1.0));
        let hd = KernelSpec::new(Pde::Helmholtz, Layer::Double, 3.0).unwrap();
        assert_eq!(hd.root_factor(), c64(-1.0));
    }

    #[test]
    fn circle_potential_and_error() {
        let pot = toy(KernelSpec::harmonic(Layer::Single));
        let x = TargetPoint::new2(0.5, 0.0);
        let exact = 2.0 * PI / 0.75;
        let disc = circle(16);
        let reference = reference_value(&disc, &pot, &x, 1e-14).unwrap();
        assert!((reference.re - exact).abs() < 1e-12);
        let rho: f64 = 2.0;
        let closed = 2.0 * exact * rho.powi(-16) / (1.0 - rho.powi(-16));
        let err = measured_error(&disc, &pot, &x, 1e-14).unwrap();
        assert!((err - closed).abs() < 1e-9 * closed, "{err} vs {closed}");
        assert!((err - 2.557e-4).abs() < 1e-6);
        let err32 = measured_error(&circle(32), &pot, &x, 1e-14).unwrap();
        assert!((err32 / err - 2f64.powi(-16)).abs() < 1e-3 * 2f64.powi(-16));
    }

    #[test]
    fn flat_panel_reference() {
        let pot = toy(KernelSpec::harmonic(Layer::Single));
        let x = TargetPoint::new2(0.0, 0.2);
        let exact = 10.0 * 5f64.atan();
        let v = reference_value(&segment(16), &pot, &x, 1e-14).unwrap();
        assert!((v.re - exact).abs() < 1e-12);
        let q = evaluate_potential(&segment(64), &pot, &x).unwrap();
        assert!((q.re - exact).abs() < 1e-8);
    }

    #[test]
    fn reference_is_rule_independent() {
        let pot = LayerPotential::new(
            KernelSpec::harmonic(Layer::Double),
            DensitySpec::Cosine { offset: 2.0, amplitude: 1.0 },
            HalfIntegerP::ONE,
        );
        let chart: Arc<dyn CurveChart> = Arc::new(crate::geometry::Potato::default());
        let tz = CurveDiscretization::with_rule(Arc::clone(&chart), RuleKind::Trapezoidal, 64, 1).unwrap();
        let gl = CurveDiscretization::with_rule(chart, RuleKind::GaussLegendre, 16, 20).unwrap();
        for x in [TargetPoint::new2(0.3, 0.2), TargetPoint::new2(1.05, 0.0), TargetPoint::new2(-0.2, 0.95)] {
            let a = reference_value(&tz, &pot, &x, 1e-14).unwrap();
            let b = reference_value(&gl, &pot, &x, 1e-14).unwrap();
            assert!((a - b).norm() < 1e-12 * (1.0 + a.norm()), "{a} vs {b}");
        }
    }

    #[test]
    fn sphere_area_and_solid_angle() {
        let sphere = SurfaceDiscretization::with_rules(
            Arc::new(Sphere { radius: 1.0 }),
            [DirectionSpec::gauss_legendre(16, 1), DirectionSpec::trapezoidal(32)],
        )
        .unwrap();
        let single = LayerPotential::new(KernelSpec::harmonic(Layer::Single), DensitySpec::Constant(1.0), HalfIntegerP::HALF);
        let v = evaluate_potential(&sphere, &single, &TargetPoint::new3(0.0, 0.0, 0.0)).unwrap();
        assert!((v.re - 4.0 * PI).abs() < 1e-10);

        let torus = SurfaceDiscretization::with_rules(
            Arc::new(FourierTorus::torus(4.5, 1.7)),
            [DirectionSpec::trapezoidal(40), DirectionSpec::trapezoidal(80)],
        )
        .unwrap();
        let double = LayerPotential::new(
            KernelSpec::harmonic(Layer::Double),
            DensitySpec::Constant(1.0),
            HalfIntegerP::THREE_HALVES,
        );
        let inside = evaluate_potential(&torus, &double, &TargetPoint::new3(4.5, 0.0, 0.0)).unwrap();
        assert!((inside.re + FULL_SOLID_ANGLE).abs() < 1e-8, "{inside}");
        let outside = evaluate_potential(&torus, &double, &TargetPoint::new3(0.0, 0.0, 0.0)).unwrap();
        assert!(outside.re.abs() < 1e-8, "{outside}");
    }

    #[test]
    fn complex_and_cartesian_forms_agree() {
        let disc = circle(40);
        let sigma = DensitySpec::Cosine { offset: 1.0, amplitude: 1.0 };
        let pot = LayerPotential::new(KernelSpec::harmonic(Layer::Double), sigma.clone(), HalfIntegerP::ONE);
        let x = TargetPoint::new2(0.55, 0.6);
        let z0 = Complex64::new(0.55, 0.6);
        let cart = evaluate_potential(&disc, &pot, &x).unwrap();
        let cplx = evaluate_complex_form(&disc, &sigma, z0, 1).unwrap();
        assert!((cart.re - cplx.im).abs() < 1e-13);
        let cart_ref = reference_value(&disc, &pot, &x, 1e-14).unwrap();
        let cplx_ref = reference_complex_form(&disc, &sigma, z0, 1, 1e-14).unwrap();
        assert!(((cart.re - cart_ref.re).abs() - (cplx.im - cplx_ref.im).abs()).abs() < 1e-13);
    }

    #[test]
    fn complex_form_circle_error() {
        let disc = circle(16);
        let v = evaluate_complex_form(&disc, &DensitySpec::Constant(1.0), c64(0.5), 1).unwrap();
        let exact = Complex64::new(0.0, 2.0 * PI);
        let a: f64 = 0.5;
        let closed = 2.0 * PI * a.powi(16) / (1.0 - a.powi(16));
        assert!(((v - exact).norm() - closed).abs() < 1e-12);
    }

    #[test]
    fn space_curve_double_layer_rejected() {
        let pot = toy(KernelSpec::harmonic(Layer::Double));
        let chart = Arc::new(crate::geometry::ToroidalLine {
            surface: FourierTorus::default_perturbed(),
            poloidal_angle: 0.5 * PI,
        });
        let disc = CurveDiscretization::with_rule(chart, RuleKind::Trapezoidal, 32, 1).unwrap();
        assert!(evaluate_potential(&disc, &pot, &TargetPoint::new3(1.0, 0.0, 0.0)).is_err());
    }
}

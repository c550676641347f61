//! A discretized source geometry of either type.

use nearquad::estimates::{estimate_curve, estimate_surface, EstimateOptions, EstimateResult};
use nearquad::geometry::{CurveDiscretization, DirectionSpec, Geometry, SurfaceDiscretization};
use nearquad::potentials::{Discretized, LayerPotential, Reference};
use nearquad::targets::Source;
use nearquad::{Complex64, Result, TargetPoint};

#[derive(Debug, Clone)]
pub enum Problem {
    Curve(CurveDiscretization),
    Surface(SurfaceDiscretization),
}

impl Problem {
    pub fn build(geometry: &Geometry, rules: [DirectionSpec; 2], order: usize) -> Result<Self> {
        Ok(match geometry {
            Geometry::Curve(chart) => Problem::Curve(CurveDiscretization::new(chart.clone(), rules[0], order)?),
            Geometry::Surface(chart) => Problem::Surface(SurfaceDiscretization::new(chart.clone(), rules, order)?),
        })
    }

    pub fn specs(&self) -> [DirectionSpec; 2] {
        match self {
            Problem::Curve(d) => [d.spec, d.spec],
            Problem::Surface(d) => d.specs,
        }
    }

    pub fn is_surface(&self) -> bool {
        matches!(self, Problem::Surface(_))
    }

    pub fn dim(&self) -> usize {
        match self {
            Problem::Curve(d) => d.dim,
            Problem::Surface(_) => 3,
        }
    }

    pub fn source(&self) -> Source<'_> {
        match self {
            Problem::Curve(d) => Source::Curve(d),
            Problem::Surface(d) => Source::Surface(d),
        }
    }

    pub fn estimate(&self, pot: &LayerPotential, x: &TargetPoint, opts: &EstimateOptions) -> Result<EstimateResult> {
        match self {
            Problem::Curve(d) => estimate_curve(d, pot, x, opts),
            Problem::Surface(d) => estimate_surface(d, pot, x, opts),
        }
    }

    /// Plain quadrature and the reference oracle.
    pub fn oracle(&self, pot: &LayerPotential, tol: f64) -> Result<Oracle> {
        Ok(match self {
            Problem::Curve(d) => Oracle { sources: d.sources(pot)?, reference: d.reference(pot, tol)?, pot: pot.clone() },
            Problem::Surface(d) => Oracle { sources: d.sources(pot)?, reference: d.reference(pot, tol)?, pot: pot.clone() },
        })
    }
}

/// Measures |quadrature − reference| at targets.
pub struct Oracle {
    sources: nearquad::potentials::QuadratureSources,
    reference: Reference,
    pot: LayerPotential,
}

impl Oracle {
    pub fn measured_error(&self, x: &TargetPoint) -> Result<f64> {
        let q: Complex64 = self.sources.evaluate(&self.pot, x)?;
        Ok((q - self.reference.value(x)?).norm())
    }
}

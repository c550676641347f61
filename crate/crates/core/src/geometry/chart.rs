use std::fmt::Debug;

use num_complex::Complex64;

use super::jet::{Jet, Scalar, JET_CAPACITY};

/// A parameterized curve γ: E → ℝ^dim with complexified evaluation.
///
/// Points are stored with three components; planar curves have a zero third
/// component.
pub trait CurveChart: Send + Sync + Debug {
    fn name(&self) -> String;
    fn dim(&self) -> usize;
    fn base_interval(&self) -> (f64, f64);
    fn periodic(&self) -> bool;
    /// Highest derivative order available from [`CurveChart::derivative`].
    fn max_order(&self) -> usize {
        JET_CAPACITY - 1
    }
    fn eval(&self, t: Complex64) -> [Complex64; 3];
    /// Evaluation on a jet argument, giving Taylor coefficients of γ.
    fn eval_jet(&self, t: Jet) -> [Jet; 3];

    /// γ(t) and γ'(t).
    fn eval_d1(&self, t: Complex64) -> ([Complex64; 3], [Complex64; 3]) {
        let g = self.eval_jet(Jet::variable(t, 1));
        (g.map(|c| c.value()), g.map(|c| c.derivative(1)))
    }

    fn derivative(&self, t: Complex64, order: usize) -> [Complex64; 3] {
        if order == 0 {
            return self.eval(t);
        }
        self.eval_jet(Jet::variable(t, order)).map(|c| c.derivative(order))
    }
}

/// Curves given by a formula generic over [`Scalar`].
pub trait AnalyticCurve: Send + Sync + Debug {
    fn name(&self) -> String;
    fn dim(&self) -> usize;
    fn base_interval(&self) -> (f64, f64);
    fn periodic(&self) -> bool;
    fn map<S: Scalar>(&self, t: S) -> [S; 3];
}

impl<T: AnalyticCurve> CurveChart for T {
    fn name(&self) -> String {
        AnalyticCurve::name(self)
    }
    fn dim(&self) -> usize {
        AnalyticCurve::dim(self)
    }
    fn base_interval(&self) -> (f64, f64) {
        AnalyticCurve::base_interval(self)
    }
    fn periodic(&self) -> bool {
        AnalyticCurve::periodic(self)
    }
    fn eval(&self, t: Complex64) -> [Complex64; 3] {
        self.map(t)
    }
    fn eval_jet(&self, t: Jet) -> [Jet; 3] {
        self.map(t)
    }
}

/// Position and first partials of a surface at one point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SurfaceFrame<S> {
    pub pos: [S; 3],
    pub ds: [S; 3],
    pub dt: [S; 3],
}

/// Parameter direction of a surface.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Direction {
    S,
    T,
}

impl Direction {
    pub fn index(self) -> usize {
        match self {
            Direction::S => 0,
            Direction::T => 1,
        }
    }

    pub fn other(self) -> Direction {
        match self {
            Direction::S => Direction::T,
            Direction::T => Direction::S,
        }
    }
}

/// A parameterized surface γ: E₁ × E₂ → ℝ³.
pub trait SurfaceChart: Send + Sync + Debug {
    fn name(&self) -> String;
    fn base_intervals(&self) -> [(f64, f64); 2];
    fn periodic(&self) -> [bool; 2];
    fn frame(&self, s: Complex64, t: Complex64) -> SurfaceFrame<Complex64>;
    fn frame_jet(&self, s: Jet, t: Jet) -> SurfaceFrame<Jet>;

    fn eval(&self, s: Complex64, t: Complex64) -> [Complex64; 3] {
        self.frame(s, t).pos
    }

    /// Pure partial derivative of the given order along one direction.
    fn partial(&self, s: Complex64, t: Complex64, dir: Direction, order: usize) -> [Complex64; 3] {
        if order == 0 {
            return self.eval(s, t);
        }
        let k = order - 1;
        match dir {
            Direction::S => {
                let f = self.frame_jet(Jet::variable(s, k), Jet::constant(t));
                f.ds.map(|c| c.derivative(k))
            }
            Direction::T => {
                let f = self.frame_jet(Jet::constant(s), Jet::variable(t, k));
                f.dt.map(|c| c.derivative(k))
            }
        }
    }
}

/// Surfaces given by formulas for γ, γ_s and γ_t generic over [`Scalar`].
pub trait AnalyticSurface: Send + Sync + Debug {
    fn name(&self) -> String;
    fn base_intervals(&self) -> [(f64, f64); 2];
    fn periodic(&self) -> [bool; 2];
    fn map<S: Scalar>(&self, s: S, t: S) -> SurfaceFrame<S>;
}

impl<T: AnalyticSurface> SurfaceChart for T {
    fn name(&self) -> String {
        AnalyticSurface::name(self)
    }
    fn base_intervals(&self) -> [(f64, f64); 2] {
        AnalyticSurface::base_intervals(self)
    }
    fn periodic(&self) -> [bool; 2] {
        AnalyticSurface::periodic(self)
    }
    fn frame(&self, s: Complex64, t: Complex64) -> SurfaceFrame<Complex64> {
        self.map(s, t)
    }
    fn frame_jet(&self, s: Jet, t: Jet) -> SurfaceFrame<Jet> {
        self.map(s, t)
    }
}

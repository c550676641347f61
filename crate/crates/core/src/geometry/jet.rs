//! Truncated Taylor series with complex coefficients.
//!
//! Charts are written once against [`Scalar`] and evaluated either at a
//! complex point or on a [`Jet`], which yields all derivatives up to the
//! jet order in one pass.

use std::ops::{Add, Div, Mul, Neg, Sub};

use num_complex::Complex64;

/// Number of stored coefficients, i.e. derivative orders 0..=8.
pub const JET_CAPACITY: usize = 9;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);

/// Arithmetic shared by complex numbers and jets.
pub trait Scalar:
    Copy
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
{
    fn from_c64(c: Complex64) -> Self;
    fn from_f64(x: f64) -> Self {
        Self::from_c64(Complex64::new(x, 0.0))
    }
    fn scale(self, a: f64) -> Self;
    fn sin(self) -> Self;
    fn cos(self) -> Self;
    fn exp(self) -> Self;
    /// Principal branch.
    fn sqrt(self) -> Self;
    /// Value at the expansion point.
    fn value(self) -> Complex64;
}

impl Scalar for Complex64 {
    fn from_c64(c: Complex64) -> Self {
        c
    }
    fn scale(self, a: f64) -> Self {
        self * a
    }
    fn sin(self) -> Self {
        Complex64::sin(self)
    }
    fn cos(self) -> Self {
        Complex64::cos(self)
    }
    fn exp(self) -> Self {
        Complex64::exp(self)
    }
    fn sqrt(self) -> Self {
        Complex64::new(self.re, self.im + 0.0).sqrt()
    }
    fn value(self) -> Complex64 {
        self
    }
}

/// Coefficients a_k = f^{(k)}(t0)/k! for k < len.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Jet {
    c: [Complex64; JET_CAPACITY],
    len: usize,
}

impl Jet {
    /// A constant; combines with jets of any order.
    pub fn constant(v: Complex64) -> Self {
        let mut c = [ZERO; JET_CAPACITY];
        c[0] = v;
        Jet { c, len: JET_CAPACITY }
    }

    /// The independent variable t0 + ε, carried to `order`.
    pub fn variable(t0: Complex64, order: usize) -> Self {
        Jet::affine(t0, 1.0, order)
    }

    /// offset + scale·ε, carried to `order`.
    pub fn affine(offset: Complex64, scale: f64, order: usize) -> Self {
        assert!(order < JET_CAPACITY, "jet order {order} exceeds capacity");
        let mut c = [ZERO; JET_CAPACITY];
        c[0] = offset;
        if order >= 1 {
            c[1] = Complex64::new(scale, 0.0);
        }
        Jet { c, len: order + 1 }
    }

    /// Builds a jet from Taylor coefficients.
    pub fn from_coeffs(coeffs: &[Complex64]) -> Self {
        assert!(coeffs.len() <= JET_CAPACITY && !coeffs.is_empty());
        let mut c = [ZERO; JET_CAPACITY];
        c[..coeffs.len()].copy_from_slice(coeffs);
        Jet { c, len: coeffs.len() }
    }

    /// Builds a jet from derivative values f^{(k)}.
    pub fn from_derivatives(derivs: &[Complex64]) -> Self {
        let mut c = [ZERO; JET_CAPACITY];
        let mut fact = 1.0;
        for (k, d) in derivs.iter().enumerate() {
            if k > 0 {
                fact *= k as f64;
            }
            c[k] = d / fact;
        }
        Jet { c, len: derivs.len() }
    }

    pub fn order(&self) -> usize {
        self.len - 1
    }

    pub fn coeffs(&self) -> &[Complex64] {
        &self.c[..self.len]
    }

    /// k-th derivative at the expansion point.
    pub fn derivative(&self, k: usize) -> Complex64 {
        if k >= self.len {
            return ZERO;
        }
        let fact: f64 = (1..=k).map(|j| j as f64).product();
        self.c[k] * fact
    }

    /// Jet of the derivative, one order shorter.
    pub fn differentiate(&self) -> Jet {
        let mut c = [ZERO; JET_CAPACITY];
        let len = self.len.saturating_sub(1).max(1);
        for k in 0..self.len.saturating_sub(1) {
            c[k] = self.c[k + 1] * (k + 1) as f64;
        }
        Jet { c, len }
    }

    /// Truncated Taylor polynomial evaluated at offset h.
    pub fn eval_at(&self, h: Complex64) -> Complex64 {
        self.coeffs().iter().rev().fold(ZERO, |acc, &a| acc * h + a)
    }

    fn zeros(len: usize) -> Self {
        Jet { c: [ZERO; JET_CAPACITY], len }
    }
}

impl Add for Jet {
    type Output = Jet;
    fn add(self, o: Jet) -> Jet {
        let mut r = Jet::zeros(self.len.min(o.len));
        for k in 0..r.len {
            r.c[k] = self.c[k] + o.c[k];
        }
        r
    }
}

impl Sub for Jet {
    type Output = Jet;
    fn sub(self, o: Jet) -> Jet {
        let mut r = Jet::zeros(self.len.min(o.len));
        for k in 0..r.len {
            r.c[k] = self.c[k] - o.c[k];
        }
        r
    }
}

impl Neg for Jet {
    type Output = Jet;
    fn neg(self) -> Jet {
        let mut r = self;
        for k in 0..r.len {
            r.c[k] = -r.c[k];
        }
        r
    }
}

impl Mul for Jet {
    type Output = Jet;
    fn mul(self, o: Jet) -> Jet {
        let mut r = Jet::zeros(self.len.min(o.len));
        for k in 0..r.len {
            let mut s = ZERO;
            for j in 0..=k {
                s += self.c[j] * o.c[k - j];
            }
            r.c[k] = s;
        }
        r
    }
}

impl Div for Jet {
    type Output = Jet;
    fn div(self, o: Jet) -> Jet {
        let mut r = Jet::zeros(self.len.min(o.len));
        let inv0 = o.c[0].inv();
        for k in 0..r.len {
            let mut s = self.c[k];
            for j in 1..=k {
                s -= o.c[j] * r.c[k - j];
            }
            r.c[k] = s * inv0;
        }
        r
    }
}

impl Scalar for Jet {
    fn from_c64(c: Complex64) -> Self {
        Jet::constant(c)
    }

    fn scale(self, a: f64) -> Self {
        let mut r = self;
        for k in 0..r.len {
            r.c[k] *= a;
        }
        r
    }

    fn sin(self) -> Self {
        sin_cos(self).0
    }

    fn cos(self) -> Self {
        sin_cos(self).1
    }

    fn exp(self) -> Self {
        let mut r = Jet::zeros(self.len);
        r.c[0] = self.c[0].exp();
        for k in 1..self.len {
            let mut s = ZERO;
            for j in 1..=k {
                s += self.c[j] * r.c[k - j] * j as f64;
            }
            r.c[k] = s / k as f64;
        }
        r
    }

    fn sqrt(self) -> Self {
        let mut r = Jet::zeros(self.len);
        r.c[0] = Scalar::sqrt(self.c[0]);
        let inv = (r.c[0] * 2.0).inv();
        for k in 1..self.len {
            let mut s = self.c[k];
            for j in 1..k {
                s -= r.c[j] * r.c[k - j];
            }
            r.c[k] = s * inv;
        }
        r
    }

    fn value(self) -> Complex64 {
        self.c[0]
    }
}

fn sin_cos(a: Jet) -> (Jet, Jet) {
    let mut s = Jet::zeros(a.len);
    let mut c = Jet::zeros(a.len);
    s.c[0] = a.c[0].sin();
    c.c[0] = a.c[0].cos();
    for k in 1..a.len {
        let mut ds = ZERO;
        let mut dc = ZERO;
        for j in 1..=k {
            let w = a.c[j] * j as f64;
            ds += w * c.c[k - j];
            dc -= w * s.c[k - j];
        }
        s.c[k] = ds / k as f64;
        c.c[k] = dc / k as f64;
    }
    (s, c)
}

/// Dot product without conjugation.
pub fn dot<S: Scalar>(a: &[S; 3], b: &[S; 3]) -> S {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}

pub fn cross<S: Scalar>(a: &[S; 3], b: &[S; 3]) -> [S; 3] {
    [a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]]
}

pub fn sub3<S: Scalar>(a: &[S; 3], b: &[S; 3]) -> [S; 3] {
    [a[0] - b[0], a[1] - b[1], a[2] - b[2]]
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn elementary_functions_match_derivatives() {
        let t0 = c(0.3, 0.2);
        let t = Jet::variable(t0, 6);
        let e = t.exp();
        for k in 0..=6 {
            assert_relative_eq!((e.derivative(k) - t0.exp()).norm(), 0.0, epsilon = 1e-13);
        }
        let s = Scalar::sin(t);
        let co = Scalar::cos(t);
        let expected_s = [t0.sin(), t0.cos(), -t0.sin(), -t0.cos()];
        for k in 0..4 {
            assert!((s.derivative(k) - expected_s[k]).norm() < 1e-13);
            assert!((co.derivative(k) - expected_s[(k + 1) % 4]).norm() < 1e-13);
        }
    }

    #[test]
    fn sqrt_and_division() {
        let t = Jet::variable(c(2.0, 0.5), 5);
        let r = Scalar::sqrt(t);
        let back = r * r;
        for (a, b) in back.coeffs().iter().zip(t.coeffs()) {
            assert!((a - b).norm() < 1e-14);
        }
        let q = (t * t + Jet::constant(c(1.0, 0.0))) / t;
        // t + 1/t: second derivative 2/t^3.
        let t0 = c(2.0, 0.5);
        assert!((q.derivative(2) - 2.0 / (t0 * t0 * t0)).norm() < 1e-13);
    }

    #[test]
    fn differentiate_and_eval() {
        let t = Jet::variable(c(0.0, 0.0), 8);
        let e = t.exp();
        assert_relative_eq!(e.eval_at(c(0.1, 0.0)).re, 0.1f64.exp(), epsilon = 1e-12);
        let d = e.differentiate();
        assert_eq!(d.order(), 7);
        assert_relative_eq!(d.value().re, 1.0);
        let from_d = Jet::from_derivatives(&[c(1.0, 0.0), c(1.0, 0.0), c(1.0, 0.0)]);
        assert_relative_eq!(from_d.coeffs()[2].re, 0.5);
    }
}

//! `m_s` and the Macdonald function in the cut complex plane.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::quad::{integrate_with_breaks, Tolerance};

/// A point of the complex plane cut along `(-∞, 0]`.
///
/// When `on_cut` is set the point stands for the one-sided limit onto the
/// negative real axis, and the sign of `im` (`+0.0` or `-0.0`) records the side.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CutComplex {
    pub re: f64,
    pub im: f64,
    pub on_cut: bool,
}

impl CutComplex {
    pub fn new(z: Complex64) -> Self {
        CutComplex { re: z.re, im: z.im, on_cut: false }
    }

    /// The limit `-y + i0`.
    pub fn above(y: f64) -> Self {
        CutComplex { re: -y, im: 0.0, on_cut: true }
    }

    /// The limit `-y - i0`.
    pub fn below(y: f64) -> Self {
        CutComplex { re: -y, im: -0.0, on_cut: true }
    }

    pub fn value(&self) -> Complex64 {
        Complex64::new(self.re, self.im)
    }

    pub fn from_above(&self) -> bool {
        self.im.is_sign_positive()
    }
}

impl From<Complex64> for CutComplex {
    fn from(z: Complex64) -> Self {
        CutComplex::new(z)
    }
}

/// `d(s) = π^{-1/2} 2^{s+1/2} Γ(s+1)`, so that `m_s(z) = d(s) e^z z^{s+1/2} K_{s+1/2}(z)`.
pub fn m_normalizer(s: f64) -> f64 {
    std::f64::consts::PI.sqrt().recip() * 2f64.powf(s + 0.5) * statrs::function::gamma::gamma(s + 1.0)
}

/// Coefficients of the polynomial `m_s` for integer `s`, lowest degree first.
pub fn m_s_coefficients(s: u32) -> Vec<f64> {
    let fact = |k: u32| (1..=k).map(f64::from).product::<f64>();
    (0..=s).map(|j| fact(s) * fact(2 * s - j) * 2f64.powi(j as i32) / (fact(j) * fact(s - j))).collect()
}

/// `m_s(z)` for a non-negative integer `s`, by Horner's rule.
pub fn m_s_poly(s: u32, z: Complex64) -> Complex64 {
    m_s_coefficients(s).iter().rev().fold(Complex64::new(0.0, 0.0), |acc, &c| acc * z + c)
}

/// `m_s(z) = ∫_0^∞ e^{-u} u^s (u+2z)^s du` for real `s > -1` and `z` off the cut.
///
/// Integer `s` uses the polynomial. Otherwise the substitution `u = t²`
/// is integrated by adaptive Gauss-Kronrod with a break where `t² + 2 Re z`
/// changes sign.
pub fn m_s(s: f64, z: Complex64) -> Complex64 {
    if s >= 0.0 && s.fract() == 0.0 {
        return m_s_poly(s as u32, z);
    }
    m_s_integral(s, z, 1e-15)
}

/// `m_s` with a caller-chosen relative accuracy; coarse values are enough for
/// grid scans and winding numbers.
pub(crate) fn m_s_with_tol(s: f64, z: Complex64, rel: f64) -> Complex64 {
    if s >= 0.0 && s.fract() == 0.0 {
        return m_s_poly(s as u32, z);
    }
    m_s_integral(s, z, rel)
}

pub(crate) fn m_s_integral(s: f64, z: Complex64, rel: f64) -> Complex64 {
    let two_z = 2.0 * z;
    let upper = 11.0 + s.max(0.0) + 0.5 * z.norm().sqrt();
    let mut f = |t: f64| {
        let t2 = t * t;
        let w = Complex64::new(t2, 0.0) + two_z;
        let base = 2.0 * (-t2).exp() * t.powf(2.0 * s + 1.0);
        if base == 0.0 {
            Complex64::new(0.0, 0.0)
        } else {
            (w.ln() * s).exp() * base
        }
    };
    let mut pts = vec![0.0];
    if z.re < 0.0 {
        let c = (-2.0 * z.re).sqrt();
        if c < upper {
            pts.push(c);
        }
    }
    pts.push(upper);
    let scale = (1.0 + 2.0 * z.norm()).powf(s.max(0.0)) * statrs::function::gamma::gamma(s + 1.0);
    let tol = Tolerance::rel(rel).with_abs(0.1 * rel * scale).with_max_subdivisions(2000);
    integrate_with_breaks(&mut f, &pts, tol).value
}

/// Derivative `m_s'(z) = 2s ∫ e^{-u} u^s (u+2z)^{s-1} du = m_s(z) - 2s z m_{s-1}(z)`.
pub fn m_s_derivative(s: f64, z: Complex64) -> Complex64 {
    if s == 0.0 {
        return Complex64::new(0.0, 0.0);
    }
    m_s(s, z) - z * (2.0 * s) * m_s(s - 1.0, z)
}

/// Principal branch of `e^z K_ν(z)` off the cut, `ν ≥ 0`, computed as
/// `z^{-ν} m_{ν-1/2}(z) / d(ν-1/2)`.
pub fn k_scaled_complex(nu: f64, z: Complex64) -> Complex64 {
    let s = nu.abs() - 0.5;
    m_s(s, z) * (-nu.abs() * z.ln()).exp() / m_normalizer(s)
}

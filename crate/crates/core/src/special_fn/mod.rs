//! Bessel functions `J_μ`, `I_ν`, `K_ν`, the polynomials `m_s`, and `K_ν` on
//! the cut complex plane.
//!
//! Negative orders are accepted and reduced with `K_{-ν} = K_ν` and
//! `I_{-ν} = I_ν + (2/π) sin(νπ) K_ν`.

mod complex;
mod real;

use std::f64::consts::PI;

use num_complex::Complex64;

pub(crate) use complex::m_s_with_tol;
pub use complex::{k_scaled_complex, m_normalizer, m_s, m_s_coefficients, m_s_derivative, m_s_poly, CutComplex};

use crate::error::{Error, Result};

fn check_positive(what: &str, z: f64) -> Result<()> {
    if z > 0.0 && z.is_finite() {
        Ok(())
    } else {
        Err(Error::Domain(format!("{what} needs a finite positive argument, got {z}")))
    }
}

/// `(e^{-z} I_ν(z), e^{z} K_ν(z))` for `z > 0`.
pub fn bessel_ik_scaled(nu: f64, z: f64) -> Result<(f64, f64)> {
    check_positive("bessel_ik_scaled", z)?;
    Ok(ik_scaled_unchecked(nu, z))
}

pub(crate) fn ik_scaled_unchecked(nu: f64, z: f64) -> (f64, f64) {
    let (i, k, _) = real::ik_scaled(nu.abs(), z);
    if nu < 0.0 {
        let refl = 2.0 / PI * (-nu * PI).sin() * k * (-2.0 * z).exp();
        (i + refl, k)
    } else {
        (i, k)
    }
}

/// `e^{z} K_ν(z)` for real `z > 0`.
pub fn bessel_k_scaled(nu: f64, z: f64) -> Result<f64> {
    bessel_ik_scaled(nu, z).map(|p| p.1)
}

/// `e^{-z} I_ν(z)` for real `z > 0`.
pub fn bessel_i_scaled(nu: f64, z: f64) -> Result<f64> {
    bessel_ik_scaled(nu, z).map(|p| p.0)
}

/// `K_ν(z)` for real `z > 0`; underflows to zero for very large `z`.
pub fn bessel_k(nu: f64, z: f64) -> Result<f64> {
    Ok(bessel_k_scaled(nu, z)? * (-z).exp())
}

/// `I_ν(z)` for real `z ≥ 0`.
pub fn bessel_i(nu: f64, z: f64) -> Result<f64> {
    if z == 0.0 {
        return Ok(if nu == 0.0 { 1.0 } else { 0.0 });
    }
    let i = bessel_i_scaled(nu, z)?;
    if z > 709.0 {
        return Err(Error::Overflow(format!("I_{nu}({z}) exceeds the double range")));
    }
    Ok(i * z.exp())
}

/// `J_μ(z)` for `z ≥ 0`, `μ ≥ 0`.
pub fn bessel_j(mu: f64, z: f64) -> Result<f64> {
    if !(z >= 0.0) || !z.is_finite() {
        return Err(Error::Domain(format!("bessel_j needs z >= 0, got {z}")));
    }
    if mu < 0.0 {
        return Err(Error::Domain(format!("bessel_j needs mu >= 0, got {mu}")));
    }
    Ok(real::j(mu, z))
}

pub(crate) fn j_unchecked(mu: f64, z: f64) -> f64 {
    real::j(mu, z)
}

/// `K_ν` on the cut plane.
///
/// Off the cut this is the principal branch. On the cut the one-sided limits
/// `K_ν(-y ± i0) = e^{∓iπν} K_ν(y) ∓ iπ I_ν(y)` are built from the real functions.
pub fn bessel_k_complex(nu: f64, z: CutComplex) -> Result<Complex64> {
    let w = z.value();
    if w.norm() == 0.0 {
        return Err(Error::Domain("K_nu is singular at z = 0".into()));
    }
    if z.on_cut {
        if z.re >= 0.0 {
            return Err(Error::Domain(format!("on-cut point must have re < 0, got {}", z.re)));
        }
        let y = -z.re;
        let k = bessel_k(nu, y)?;
        let i = bessel_i(nu, y)?;
        let sgn = if z.from_above() { 1.0 } else { -1.0 };
        let phase = Complex64::from_polar(1.0, -sgn * PI * nu);
        return Ok(phase * k - Complex64::new(0.0, sgn * PI * i));
    }
    if w.im == 0.0 && w.re > 0.0 {
        return Ok(Complex64::new(bessel_k(nu, w.re)?, 0.0));
    }
    if w.im == 0.0 {
        return Err(Error::Domain(format!(
            "{w} lies on the cut; build it with CutComplex::above or CutComplex::below"
        )));
    }
    Ok(k_scaled_complex(nu, w) * (-w).exp())
}

/// Leading terms of the large-`z` expansion of `e^z z^ν K_ν(z)`:
/// `c_0 z^{ν-1/2}` (one term) or `(c_0 + c_1/(2z)) z^{ν-1/2}` (two terms), with
/// `c_k = √(π/2) Γ(n/2+k) / (k! Γ(n/2-k))` and `n = 2ν + 1`.
pub fn k_scaled_expansion(nu: f64, z: f64, terms: u32) -> Result<f64> {
    if !(z >= 1.0) {
        return Err(Error::Domain(format!("k_scaled_expansion needs z >= 1, got {z}")));
    }
    if !(1..=2).contains(&terms) {
        return Err(Error::InvalidArgument(format!("terms must be 1 or 2, got {terms}")));
    }
    let half_n = nu + 0.5;
    let g = statrs::function::gamma::gamma;
    let c0 = (PI / 2.0).sqrt();
    let mut val = c0;
    if terms == 2 {
        let c1 = (PI / 2.0).sqrt() * g(half_n + 1.0) / g(half_n - 1.0);
        val += c1 / (2.0 * z);
    }
    Ok(val * z.powf(nu - 0.5))
}

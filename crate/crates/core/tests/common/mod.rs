//! Slow, independent oracles shared by the integration tests.
#![allow(dead_code)]

pub mod tables;

use num_complex::Complex64;
use statrs::function::gamma::ln_gamma;

/// Ascending series `Σ (z/2)^{2k+ν} / (k! Γ(k+ν+1))`, summed to machine precision.
pub fn i_series(nu: f64, z: f64) -> f64 {
    let h = 0.5 * z;
    let mut term = (nu * h.ln() - ln_gamma(nu + 1.0)).exp();
    let mut sum = term;
    for k in 1..2000 {
        let kf = k as f64;
        term *= h * h / (kf * (kf + nu));
        sum += term;
        if term < 1e-18 * sum && kf > h {
            break;
        }
    }
    sum
}

/// Ascending series for `J_ν`, with terms accumulated in pairs to limit cancellation.
pub fn j_series(nu: f64, z: f64) -> f64 {
    if z == 0.0 {
        return if nu == 0.0 { 1.0 } else { 0.0 };
    }
    let h = 0.5 * z;
    let mut term = (nu * h.ln() - ln_gamma(nu + 1.0)).exp();
    let mut sum = term;
    for k in 1..2000 {
        let kf = k as f64;
        term *= -h * h / (kf * (kf + nu));
        sum += term;
        if term.abs() < 1e-18 * sum.abs() && kf > h {
            break;
        }
    }
    sum
}

/// `K_ν(z) = ∫_0^∞ e^{-z cosh t} cosh(νt) dt` by the trapezoidal rule, which
/// converges geometrically for this analytic, doubly-exponentially decaying integrand.
/// Returns `e^z K_ν(z)`.
pub fn k_scaled_trapezoid(nu: f64, z: f64) -> f64 {
    let h = 0.005;
    let mut sum = 0.5;
    let mut t: f64 = h;
    loop {
        // e^{z} e^{-z cosh t} = e^{-z (cosh t - 1)}
        let v = (-z * 2.0 * (0.5 * t).sinh().powi(2)).exp() * (nu * t).cosh();
        sum += v;
        if v < 1e-20 * sum {
            break;
        }
        t += h;
    }
    sum * h
}

/// Continues `K_ν` from `z = 1` to `target` by integrating the Bessel equation
/// `w'' = -w'/z + (1 + ν²/z²) w` with RK4 along the straight segments of `path`.
/// Real starting data come from the trapezoid oracle.
pub fn k_by_continuation(nu: f64, path: &[Complex64]) -> Complex64 {
    let k0 = k_scaled_trapezoid(nu, 1.0) * (-1f64).exp();
    // K_ν'(z) = -K_{ν-1}(z) - (ν/z) K_ν(z)
    let km1 = k_scaled_trapezoid(nu - 1.0, 1.0) * (-1f64).exp();
    let mut w = Complex64::new(k0, 0.0);
    let mut dw = Complex64::new(-km1 - nu * k0, 0.0);
    let rhs = |z: Complex64, w: Complex64, dw: Complex64| -> (Complex64, Complex64) {
        (dw, -dw / z + (1.0 + nu * nu / (z * z)) * w)
    };
    let mut z = Complex64::new(1.0, 0.0);
    for &target in path {
        let steps = 20_000;
        let h = (target - z) / steps as f64;
        for _ in 0..steps {
            let (a1, b1) = rhs(z, w, dw);
            let (a2, b2) = rhs(z + h * 0.5, w + a1 * h * 0.5, dw + b1 * h * 0.5);
            let (a3, b3) = rhs(z + h * 0.5, w + a2 * h * 0.5, dw + b2 * h * 0.5);
            let (a4, b4) = rhs(z + h, w + a3 * h, dw + b3 * h);
            w += (a1 + a2 * 2.0 + a3 * 2.0 + a4) * (h / 6.0);
            dw += (b1 + b2 * 2.0 + b3 * 2.0 + b4) * (h / 6.0);
            z += h;
        }
        z = target;
    }
    w
}

pub fn rel_err(got: f64, want: f64) -> f64 {
    (got - want).abs() / want.abs()
}

/// `n` points spaced evenly in log scale between `lo` and `hi`.
pub fn logspace(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    (0..n).map(|i| (lo.ln() + (hi / lo).ln() * i as f64 / (n - 1) as f64).exp()).collect()
}

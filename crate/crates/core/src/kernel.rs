//! The Poisson kernel `P_a(x, ρ)` of the half-space `{x_n > a}`.
//!
//! Three independent evaluation routes are provided:
//!
//! * the representation formula
//!   `P = Γ(s)/(2π^{n/2}) · λ/(λ²+ρ²)^s · ∫₀^∞ w_λ(v) Φ(κ/z) dv`,
//! * the inverse Hankel transform of the characteristic function
//!   `(x/a)^ν K_ν(rx)/K_ν(ra)`,
//! * explicit single integrals for `n ∈ {3, 4, 6}`.
//!
//! Here `z = λ² + ρ²`, `κ = (λ + av)² - λ²` and `Φ(u) = (1+u)^{-s} - 1 + su`.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};
use statrs::function::gamma::gamma;

use crate::error::{invalid, Result};
use crate::params::{Geometry, SpaceParams};
use crate::quad::{
    integrate, integrate_to_infinity, integrate_with_breaks, wynn_epsilon, NeumaierSum, QuadResult, Tolerance,
};
use crate::special_fn::{ik_scaled_unchecked, j_unchecked};
use crate::wfun::WEvaluator;

/// `Φ(u) = (1+u)^{-s} - 1 + su`, by its binomial series for `u < 1e-3`.
pub fn phi(u: f64, s: f64) -> f64 {
    if u < 1e-3 {
        let mut term = s * (s + 1.0) / 2.0 * u * u;
        let mut sum = term;
        let mut j = 2.0;
        while term.abs() > 1e-17 * sum.abs() {
            term *= -(s + j) / (j + 1.0) * u;
            sum += term;
            j += 1.0;
        }
        sum
    } else {
        (-s * u.ln_1p()).exp_m1() + s * u
    }
}

/// `L = sκ(κ+z)^s - z[(κ+z)^s - z^s]` with `z = λ²+ρ²`, `κ = av(2λ+av)`.
pub fn big_l(lambda: f64, rho: f64, v: f64, a: f64, s: f64) -> f64 {
    let z = lambda * lambda + rho * rho;
    let kappa = a * v * (2.0 * lambda + a * v);
    let u = kappa / z;
    if u < 1e-3 {
        return z * (kappa + z).powf(s) * phi(u, s);
    }
    s * kappa * (kappa + z).powf(s) - z * z.powf(s) * (s * u.ln_1p()).exp_m1()
}

/// Query point: geometry and radial offset `ρ = |y|` on the boundary hyperplane.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct KernelQuery {
    pub geometry: Geometry,
    pub rho: f64,
}

impl KernelQuery {
    pub fn new(geometry: Geometry, rho: f64) -> Result<Self> {
        if !(rho >= 0.0) || !rho.is_finite() {
            return Err(invalid(format!("rho must be finite and >= 0, got {rho}")));
        }
        Ok(KernelQuery { geometry, rho })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Method {
    Representation,
    Hankel,
    Closed,
    /// The whole-space kernel `P_{H^n}`, the `a → 0` limit.
    Boundary,
}

impl Method {
    pub fn name(self) -> &'static str {
        match self {
            Method::Representation => "representation",
            Method::Hankel => "hankel",
            Method::Closed => "closed",
            Method::Boundary => "boundary",
        }
    }
}

impl std::str::FromStr for Method {
    type Err = crate::Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "representation" | "rep" => Ok(Method::Representation),
            "hankel" => Ok(Method::Hankel),
            "closed" => Ok(Method::Closed),
            "boundary" => Ok(Method::Boundary),
            _ => Err(invalid(format!("unknown method {s:?}"))),
        }
    }
}

impl std::fmt::Display for Method {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct KernelValue {
    pub value: f64,
    pub method: Method,
    pub err_estimate: f64,
}

/// `ω_{n-2}`, the area of the unit sphere in `R^{n-1}`.
pub fn sphere_area(n: u32) -> f64 {
    let d = (n - 1) as f64;
    2.0 * PI.powf(d / 2.0) / gamma(d / 2.0)
}

/// `P_{H^n}(x, ρ) = Γ(n-1) / (π^{(n-1)/2} Γ((n-1)/2)) · (x/(x²+ρ²))^{n-1}`.
pub fn kernel_hn(x: f64, rho: f64, n: u32) -> f64 {
    let m = (n - 1) as f64;
    gamma(m) / (PI.powf(m / 2.0) * gamma(m / 2.0)) * (x / (x * x + rho * rho)).powf(m)
}

/// `Γ(n/2)/π^{n/2} · x/(x²+ρ²)^{n/2}`.
pub fn kernel_euclidean(x: f64, rho: f64, n: u32) -> f64 {
    let h = n as f64 / 2.0;
    gamma(h) / PI.powf(h) * x / (x * x + rho * rho).powf(h)
}

/// `(x/a)^ν K_ν(ux)/K_ν(ua)`, the Fourier transform of `P_a(x, ·)` at `|u|`.
pub fn fourier_transform(g: &Geometry, u_norm: f64) -> Result<f64> {
    if !(u_norm >= 0.0) || !u_norm.is_finite() {
        return Err(invalid(format!("u_norm must be finite and >= 0, got {u_norm}")));
    }
    if u_norm == 0.0 {
        return Ok(1.0);
    }
    let nu = (g.n as f64 - 1.0) / 2.0;
    Ok(g.xi().powf(nu) * bessel_ratio(nu, g, u_norm))
}

/// `K_ν(rx)/K_ν(ra)` via scaled functions.
fn bessel_ratio(nu: f64, g: &Geometry, r: f64) -> f64 {
    let (_, kx) = ik_scaled_unchecked(nu, r * g.x);
    let (_, ka) = ik_scaled_unchecked(nu, r * g.a);
    kx / ka * (-r * g.lambda()).exp()
}

/// The `k`-th positive zero of `J_μ` (`k ≥ 1`), by McMahon's expansion and
/// Newton; `prev` is the previous zero, if known, to keep the sequence ordered.
fn bessel_j_zero(mu: f64, k: usize, prev: Option<f64>) -> f64 {
    let m4 = 4.0 * mu * mu;
    let beta = (k as f64 + mu / 2.0 - 0.25) * PI;
    let mut x = beta - (m4 - 1.0) / (8.0 * beta) - 4.0 * (m4 - 1.0) * (7.0 * m4 - 31.0) / (3.0 * (8.0 * beta).powi(3));
    if let Some(prev) = prev {
        x = x.max(prev + 1.0);
    }
    for _ in 0..50 {
        let j = j_unchecked(mu, x);
        let dj = mu / x * j - j_unchecked(mu + 1.0, x);
        let step = j / dj;
        x -= step;
        if step.abs() < 1e-15 * x {
            break;
        }
    }
    x
}

/// The first `count` positive zeros of `J_μ` in increasing order.
pub fn bessel_j_zeros(mu: f64, count: usize) -> Vec<f64> {
    let mut out: Vec<f64> = Vec::with_capacity(count);
    for k in 1..=count {
        let z = bessel_j_zero(mu, k, out.last().copied());
        out.push(z);
    }
    out
}

/// `∫₀^∞ f(r) J_μ(rρ) dr` for `ρ > 0`, integrating between consecutive zeros
/// of `J_μ(rρ)` and accelerating the partial sums with Wynn's epsilon algorithm.
pub fn oscillatory_bessel_integral<F: Fn(f64) -> f64>(f: F, mu: f64, rho: f64, tol: Tolerance) -> QuadResult<f64> {
    const MAX_INTERVALS: usize = 4000;
    let mut g = |r: f64| f(r) * j_unchecked(mu, r * rho);
    let inner = Tolerance::rel(0.01 * tol.rel).with_abs(0.0);
    let mut sum = NeumaierSum::new();
    let mut partial = Vec::new();
    let mut evaluations = 0;
    let mut error = 0.0;
    let mut lo = 0.0;
    let mut last_est = f64::NAN;
    let mut small_run = 0;
    let mut zero = None;
    for k in 1..=MAX_INTERVALS {
        let z = bessel_j_zero(mu, k, zero);
        zero = Some(z);
        let hi = z / rho;
        let r = integrate(&mut g, lo, hi, inner);
        evaluations += r.evaluations;
        error += r.error;
        sum.add(r.value);
        let s = sum.value();
        partial.push(s);
        lo = hi;
        if r.value.abs() <= 1e-17 * s.abs() {
            small_run += 1;
            if small_run >= 3 {
                return QuadResult { value: s, error, evaluations, converged: true };
            }
        } else {
            small_run = 0;
        }
        if partial.len() >= 12 {
            let window = &partial[partial.len().saturating_sub(30)..];
            let (est, err) = wynn_epsilon(window);
            if (est - last_est).abs() <= tol.rel * est.abs() && err <= tol.rel * est.abs() {
                return QuadResult {
                    value: est,
                    error: error + err.max((est - last_est).abs()),
                    evaluations,
                    converged: true,
                };
            }
            last_est = est;
        }
    }
    let (est, err) = wynn_epsilon(&partial[partial.len().saturating_sub(30)..]);
    QuadResult { value: est, error: error + err, evaluations, converged: false }
}

/// `(2π)^{(n-1)/2} u^{-μ} ∫₀^∞ f(ρ) J_μ(uρ) ρ^{(n-1)/2} dρ`, the Fourier
/// transform in `R^{n-1}` of the radial function `f`.
pub fn radial_fourier_transform<F: Fn(f64) -> f64>(f: F, n: u32, u: f64, tol: Tolerance) -> QuadResult<f64> {
    let mu = (n as f64 - 3.0) / 2.0;
    let half = (n as f64 - 1.0) / 2.0;
    let c = (2.0 * PI).powf(half) * u.powf(-mu);
    let mut r = oscillatory_bessel_integral(|rho| f(rho) * rho.powf(half), mu, u, tol);
    r.value *= c;
    r.error *= c;
    r
}

/// A Poisson kernel for one geometry; caches the weight function so that many
/// `ρ` values can be evaluated cheaply.
#[derive(Debug)]
pub struct PoissonKernel {
    geometry: Geometry,
    params: Option<SpaceParams>,
    w: Option<WEvaluator>,
}

impl PoissonKernel {
    pub fn new(geometry: Geometry) -> Result<Self> {
        if geometry.n == 2 {
            return Ok(PoissonKernel { geometry, params: None, w: None });
        }
        let w = WEvaluator::new(&geometry)?;
        Ok(PoissonKernel { geometry, params: Some(*w.params()), w: Some(w) })
    }

    pub fn geometry(&self) -> &Geometry {
        &self.geometry
    }

    pub fn weight(&self) -> Option<&WEvaluator> {
        self.w.as_ref()
    }

    fn require_n3(&self) -> Result<(&SpaceParams, &WEvaluator)> {
        match (&self.params, &self.w) {
            (Some(p), Some(w)) => Ok((p, w)),
            _ => Err(invalid("this method needs n >= 3")),
        }
    }

    /// Evaluates with `method`, or the representation formula by default.
    /// For `n = 2` every method reduces to the Euclidean half-plane kernel.
    pub fn eval(&self, rho: f64, method: Option<Method>) -> Result<KernelValue> {
        check_rho(rho)?;
        if self.geometry.n == 2 {
            let value = kernel_euclidean(self.geometry.lambda(), rho, 2);
            return Ok(KernelValue { value, method: Method::Closed, err_estimate: 0.0 });
        }
        match method.unwrap_or(Method::Representation) {
            Method::Representation => self.representation(rho),
            Method::Hankel => self.hankel(rho),
            Method::Closed => self.closed(rho),
            Method::Boundary => {
                let value = kernel_hn(self.geometry.x, rho, self.geometry.n);
                Ok(KernelValue { value, method: Method::Boundary, err_estimate: 0.0 })
            }
        }
    }

    /// `∫₀^∞ w_λ(v) Φ(κ/z) dv`, the integral in the representation formula.
    pub fn phi_integral(&self, rho: f64) -> Result<QuadResult<f64>> {
        let (p, w) = self.require_n3()?;
        let (a, lambda) = (self.geometry.a, self.geometry.lambda());
        let z = lambda * lambda + rho * rho;
        let s = p.s;
        Ok(w.integrate(|v| phi(a * v * (2.0 * lambda + a * v) / z, s)))
    }

    pub fn representation(&self, rho: f64) -> Result<KernelValue> {
        check_rho(rho)?;
        let (p, _) = self.require_n3()?;
        let lambda = self.geometry.lambda();
        let z = lambda * lambda + rho * rho;
        let c = gamma(p.s) / (2.0 * PI.powf(p.n as f64 / 2.0)) * lambda / z.powf(p.s);
        let r = self.phi_integral(rho)?;
        Ok(KernelValue { value: c * r.value, method: Method::Representation, err_estimate: c.abs() * r.error })
    }

    pub fn hankel(&self, rho: f64) -> Result<KernelValue> {
        check_rho(rho)?;
        let (p, _) = self.require_n3()?;
        let g = self.geometry;
        let (nu, mu) = (p.nu, p.mu);
        let tol = Tolerance::rel(1e-10);
        if rho == 0.0 {
            let c = 2f64.powf(2.0 - p.n as f64) / gamma(nu) * (g.xi() / PI).powf(nu);
            let scale = 1.0 / g.lambda();
            let r = integrate_to_infinity(|r| bessel_ratio(nu, &g, r) * r.powf(2.0 * nu - 1.0), 0.0, scale, tol);
            let value = c * r.checked("Hankel integral at rho = 0")?;
            return Ok(KernelValue { value, method: Method::Hankel, err_estimate: c * r.error });
        }
        let c = (g.xi() / (2.0 * PI)).powf(nu) * rho.powf(-mu);
        let r = oscillatory_bessel_integral(|r| bessel_ratio(nu, &g, r) * r.powf(nu), mu, rho, tol);
        let value = c * r.checked("Hankel integral")?;
        Ok(KernelValue { value, method: Method::Hankel, err_estimate: c * r.error })
    }

    /// The explicit single-integral forms for `n ∈ {3, 4, 6}`.
    pub fn closed(&self, rho: f64) -> Result<KernelValue> {
        check_rho(rho)?;
        let g = self.geometry;
        let (a, lambda) = (g.a, g.lambda());
        let z = lambda * lambda + rho * rho;
        let tol = Tolerance::rel(1e-13);
        let r = match g.n {
            4 => {
                let c = lambda / (2.0 * PI * PI * z * z);
                let f = |v: f64| {
                    let t = lambda + a * v;
                    (2.0 * lambda + a * v).powi(2) * v * v * (-v).exp() / (t * t + rho * rho)
                };
                scale(integrate_with_breaks(&mut { f }, &[0.0, 1.0, 60.0], tol), c)
            }
            6 => {
                let c = lambda / (2.0 * PI.powi(3) * z.powi(3));
                let r3 = 3f64.sqrt();
                let f = |v: f64| {
                    let t = lambda + a * v;
                    let kappa = t * t - lambda * lambda;
                    let w = 3.0 / a.powi(3)
                        * (-1.5 * v).exp()
                        * ((2.0 * lambda + a) * (0.5 * r3 * v).cos() + r3 * a * (0.5 * r3 * v).sin());
                    w * kappa * kappa * (2.0 * kappa + 3.0 * z) / (t * t + rho * rho).powi(2)
                };
                scale(integrate_with_breaks(&mut { f }, &[0.0, 1.0, 10.0, 60.0], tol), c)
            }
            3 => self.closed_n3(rho, Tolerance::rel(1e-11))?,
            n => return Err(invalid(format!("closed forms exist for n = 3, 4, 6, got {n}"))),
        };
        let value = r.checked("closed-form integral")?;
        Ok(KernelValue { value, method: Method::Closed, err_estimate: r.error })
    }

    /// `n = 3` with the order of integration swapped:
    /// `P = λ/(2π z^{3/2}) · (x/a)/(λa) ∫₀^∞ u g(u) e^{-λu/a} H(u) du`,
    /// `H(u) = ∫₀^∞ e^{-uv} L(λ,ρ,v) / (κ+z)^{1/2} dv`.
    fn closed_n3(&self, rho: f64, tol: Tolerance) -> Result<QuadResult<f64>> {
        let g = self.geometry;
        let (a, lambda, xi) = (g.a, g.lambda(), g.xi());
        let z = lambda * lambda + rho * rho;
        let inner = |u: f64| {
            let f = |v: f64| {
                let kappa = a * v * (2.0 * lambda + a * v);
                (-u * v).exp() * big_l(lambda, rho, v, a, 0.5) / (kappa + z).sqrt()
            };
            integrate_to_infinity(f, 0.0, 1.0 / u, Tolerance::rel(1e-12)).value
        };
        let outer = |u: f64| {
            let (i1, k1) = ik_scaled_unchecked(1.0, u);
            let (ix, kx) = ik_scaled_unchecked(1.0, xi * u);
            let num = ix * k1 - (-2.0 * (xi - 1.0) * u).exp() * i1 * kx;
            let den = (-4.0 * u).exp() * k1 * k1 + PI * PI * i1 * i1;
            (-2.0 * u).exp() * num / den * u * inner(u)
        };
        let c = lambda / (2.0 * PI * z.powf(1.5)) * xi / (lambda * a);
        Ok(scale(integrate_with_breaks(&mut { outer }, &[0.0, 1.0, 10.0, 45.0], tol), c))
    }
}

fn scale(mut r: QuadResult<f64>, c: f64) -> QuadResult<f64> {
    r.value *= c;
    r.error *= c.abs();
    r
}

fn check_rho(rho: f64) -> Result<()> {
    if rho >= 0.0 && rho.is_finite() {
        Ok(())
    } else {
        Err(invalid(format!("rho must be finite and >= 0, got {rho}")))
    }
}

pub fn poisson_kernel_rep(q: &KernelQuery) -> Result<KernelValue> {
    PoissonKernel::new(q.geometry)?.representation(q.rho)
}

pub fn poisson_kernel_hankel(q: &KernelQuery) -> Result<KernelValue> {
    PoissonKernel::new(q.geometry)?.hankel(q.rho)
}

pub fn poisson_kernel_closed(q: &KernelQuery) -> Result<KernelValue> {
    if !matches!(q.geometry.n, 3 | 4 | 6) {
        return Err(invalid(format!("closed forms exist for n = 3, 4, 6, got {}", q.geometry.n)));
    }
    PoissonKernel::new(q.geometry)?.closed(q.rho)
}

/// Evaluates `P_a(x, ρ)`; the representation formula is the default method.
pub fn poisson_kernel(q: &KernelQuery, method: Option<Method>) -> Result<KernelValue> {
    PoissonKernel::new(q.geometry)?.eval(q.rho, method)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn phi_branches_meet() {
        for s in [0.5, 1.0, 2.5] {
            // Φ ~ u² here, so rescale the series value to the same point
            let t = 1.0 - 1e-12;
            let below = phi(1e-3 * t, s) / (t * t);
            let above = phi(1e-3, s);
            assert!((below - above).abs() < 1e-12 * above, "s={s}: {below} vs {above}");
        }
    }

    #[test]
    fn j_zeros_known() {
        let z = bessel_j_zeros(0.0, 3);
        assert!((z[0] - 2.404825557695773).abs() < 1e-13);
        assert!((z[2] - 8.653727912911013).abs() < 1e-13);
        let z = bessel_j_zeros(1.5, 2);
        assert!((z[0] - 4.493409457909064).abs() < 1e-13);
    }
}

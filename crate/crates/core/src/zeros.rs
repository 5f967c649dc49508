//! Zeros of `K_ν` in the cut plane, ν = (n-1)/2.
//!
//! The zeros of `K_ν` off the cut are the zeros of `m_s`, s = n/2 - 1, since
//! `m_s(z) = d e^z z^ν K_ν(z)`. For even `n` that is a polynomial and its roots
//! come from a companion matrix. For odd `n` a grid scan seeds Newton's method
//! and the argument principle confirms the count.

use std::collections::HashMap;
use std::f64::consts::PI;
use std::sync::{Mutex, OnceLock};

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::params::SpaceParams;
use crate::quad::{integrate_to_infinity, Tolerance};
use crate::special_fn::{
    ik_scaled_unchecked, m_normalizer, m_s, m_s_coefficients, m_s_derivative, m_s_poly, m_s_with_tol,
};

/// The zeros `z_1, …, z_{k_ν}` of `K_ν`, ordered by increasing imaginary part
/// and then by real part.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ZeroSet {
    pub n: u32,
    pub zeros: Vec<Complex64>,
    /// Largest `|m_s(z_i)|` relative to `∫ e^{-u} u^s |u + 2 z_i|^s du`, the
    /// magnitude scale of the integral that defines `m_s`.
    pub residual: f64,
}

impl ZeroSet {
    pub fn len(&self) -> usize {
        self.zeros.len()
    }

    pub fn is_empty(&self) -> bool {
        self.zeros.is_empty()
    }
}

pub use crate::params::zero_count;

fn sort_zeros(z: &mut [Complex64]) {
    z.sort_by(|a, b| a.im.total_cmp(&b.im).then(a.re.total_cmp(&b.re)));
}

fn magnitude_scale(s: f64, z: Complex64) -> f64 {
    let f = |u: f64| (-u).exp() * u.powf(s) * (Complex64::new(u, 0.0) + 2.0 * z).norm().powf(s);
    integrate_to_infinity(f, 0.0, 1.0, Tolerance::rel(1e-10)).value
}

fn newton(s: f64, mut z: Complex64, max_step: f64) -> Option<Complex64> {
    for _ in 0..60 {
        let f = m_s(s, z);
        let df = m_s_derivative(s, z);
        if df.norm() == 0.0 {
            return None;
        }
        let mut step = f / df;
        if step.norm() > max_step {
            step *= max_step / step.norm();
        }
        z -= step;
        if !(z.re.is_finite() && z.im.is_finite()) {
            return None;
        }
        if step.norm() <= 1e-15 * z.norm().max(1.0) {
            return Some(z);
        }
    }
    let f = m_s(s, z);
    let tiny = f.norm() <= 1e-13 * magnitude_scale(s, z);
    tiny.then_some(z)
}

/// Locates all zeros of `K_ν` for dimension `n ≥ 3`.
///
/// Results are cached per `n` for the life of the process.
pub fn find_zeros(n: u32) -> Result<ZeroSet> {
    static CACHE: OnceLock<Mutex<HashMap<u32, ZeroSet>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    if let Some(z) = cache.lock().unwrap_or_else(|e| e.into_inner()).get(&n) {
        return Ok(z.clone());
    }
    let z = find_zeros_uncached(n)?;
    cache.lock().unwrap_or_else(|e| e.into_inner()).insert(n, z.clone());
    Ok(z)
}

/// Zeros of `m_s` found by scan and Newton refinement, for any `n`.
///
/// For even `n` this bypasses the companion matrix, which makes it an
/// independent check on [`find_zeros`].
pub fn scan_zeros(n: u32) -> Result<Vec<Complex64>> {
    let p = SpaceParams::new(n)?;
    transcendental_zeros(n, p.nu)
}

fn real_axis_zeros(s: f64, half: f64) -> Vec<Complex64> {
    let h = 0.05;
    let steps = (half / h).ceil() as usize;
    let mut found: Vec<Complex64> = Vec::new();
    let f = |x: f64| m_s(s, Complex64::new(x, 0.0)).re;
    let mut prev = f(0.0);
    for k in 1..=steps {
        let x = -(k as f64) * h;
        let v = f(x);
        if v == 0.0 || v.signum() != prev.signum() {
            if let Some(z) = newton(s, Complex64::new(x + 0.5 * h, 0.0), 0.1) {
                if !found.iter().any(|w| (w - z).norm() < 1e-8 * z.norm().max(1.0)) {
                    found.push(Complex64::new(z.re, 0.0));
                }
            }
        }
        prev = v;
    }
    found
}

fn find_zeros_uncached(n: u32) -> Result<ZeroSet> {
    let p = SpaceParams::new(n)?;
    let expected = zero_count(n)?;
    let s = p.s;
    let zeros = if p.is_even() { polynomial_roots(n)? } else { transcendental_zeros(n, p.nu)? };
    if zeros.len() != expected {
        return Err(Error::ZeroSearch { n, message: format!("found {} zeros, expected {expected}", zeros.len()) });
    }
    let residual = zeros.iter().map(|&z| m_s(s, z).norm() / magnitude_scale(s, z)).fold(0.0, f64::max);
    if residual > 1e-12 {
        return Err(Error::ZeroSearch { n, message: format!("residual {residual:e} exceeds 1e-12") });
    }
    Ok(ZeroSet { n, zeros, residual })
}

fn polynomial_roots(n: u32) -> Result<Vec<Complex64>> {
    let s = n / 2 - 1;
    if s == 0 {
        return Ok(Vec::new());
    }
    let c = m_s_coefficients(s);
    let deg = s as usize;
    let lead = c[deg];
    let mut comp = DMatrix::<f64>::zeros(deg, deg);
    for i in 1..deg {
        comp[(i, i - 1)] = 1.0;
    }
    for i in 0..deg {
        comp[(i, deg - 1)] = -c[i] / lead;
    }
    let eig = comp.complex_eigenvalues();
    let mut roots: Vec<Complex64> = eig
        .iter()
        .map(|&z0| {
            let mut z = z0;
            for _ in 0..20 {
                let f = m_s_poly(s, z);
                let df = m_s_derivative(s as f64, z);
                let step = f / df;
                z -= step;
                if step.norm() <= 1e-16 * z.norm() {
                    break;
                }
            }
            // exact real roots stay on the real axis
            if z0.im == 0.0 {
                z.im = 0.0;
            }
            z
        })
        .collect();
    // enforce exact conjugate pairs
    for r in roots.iter_mut() {
        if r.im.abs() < 1e-14 * r.norm() {
            r.im = 0.0;
        }
    }
    sort_zeros(&mut roots);
    let count = argument_principle_count(n, polynomial_radius(n) + 1.0, polynomial_radius(n) + 1.0)?;
    if count != deg {
        return Err(Error::ZeroSearch { n, message: format!("argument principle counts {count}, degree is {deg}") });
    }
    Ok(roots)
}

fn polynomial_radius(n: u32) -> f64 {
    // Cauchy bound for the monic polynomial
    let s = n / 2 - 1;
    let c = m_s_coefficients(s);
    let lead = c[s as usize];
    1.0 + c[..s as usize].iter().map(|v| (v / lead).abs()).fold(0.0, f64::max)
}

fn transcendental_zeros(n: u32, nu: f64) -> Result<Vec<Complex64>> {
    let s = nu - 0.5;
    let mut half = nu + 5.0;
    for _attempt in 0..3 {
        let upper = scan_upper_half(s, half);
        let real = if n % 2 == 0 { real_axis_zeros(s, half) } else { Vec::new() };
        let count = argument_principle_count(n, half, half)?;
        if upper.len() * 2 + real.len() == count {
            let mut all: Vec<Complex64> = upper.iter().flat_map(|&z| [z, z.conj()]).chain(real).collect();
            sort_zeros(&mut all);
            return Ok(all);
        }
        half *= 1.5;
    }
    Err(Error::ZeroSearch { n, message: "grid scan and argument principle disagree after widening".into() })
}

fn scan_upper_half(s: f64, half: f64) -> Vec<Complex64> {
    let h = 0.25;
    let nx = (half / h).ceil() as usize + 3;
    let ny = (half / h).ceil() as usize + 1;
    let xs: Vec<f64> = (0..nx).map(|i| -half + i as f64 * h).collect();
    let ys: Vec<f64> = (0..ny).map(|j| 0.05 + j as f64 * h).collect();
    let grid: Vec<Vec<f64>> =
        xs.iter().map(|&x| ys.iter().map(|&y| m_s_with_tol(s, Complex64::new(x, y), 1e-6).norm()).collect()).collect();
    let mut found: Vec<Complex64> = Vec::new();
    for i in 0..nx {
        for j in 0..ny {
            let v = grid[i][j];
            let mut is_min = true;
            for di in -1i64..=1 {
                for dj in -1i64..=1 {
                    let (ii, jj) = (i as i64 + di, j as i64 + dj);
                    if (di, dj) == (0, 0) || ii < 0 || jj < 0 || ii >= nx as i64 || jj >= ny as i64 {
                        continue;
                    }
                    if grid[ii as usize][jj as usize] < v {
                        is_min = false;
                    }
                }
            }
            if !is_min {
                continue;
            }
            if let Some(z) = newton(s, Complex64::new(xs[i], ys[j]), 0.5) {
                if z.im > 1e-8 && z.re < 0.0 && !found.iter().any(|w| (w - z).norm() < 1e-8 * z.norm().max(1.0)) {
                    found.push(z);
                }
            }
        }
    }
    found
}

/// `m_s` on the upper edge of the cut, `z = -y + i0`, from the real `I_ν`, `K_ν`:
/// `m_s = d y^ν [e^{-2y} K̂_ν(y) - iπ e^{iπν} Î_ν(y)]` with scaled Bessel functions.
fn m_s_on_cut(nu: f64, y: f64) -> Complex64 {
    let s = nu - 0.5;
    let (i, k) = ik_scaled_unchecked(nu, y);
    let phase = Complex64::from_polar(1.0, PI * nu);
    (Complex64::new((-2.0 * y).exp() * k, 0.0) - Complex64::new(0.0, PI * i) * phase) * (m_normalizer(s) * y.powf(nu))
}

/// Counts the zeros of `K_ν` in `[-re_extent, 1] × [-im_extent, im_extent]` by the
/// argument principle applied to `m_s`.
///
/// For odd `n`, `m_s` has a branch cut along the negative axis: the count is taken
/// over the upper half rectangle, using the boundary values on the cut, and doubled.
pub fn argument_principle_count(n: u32, re_extent: f64, im_extent: f64) -> Result<usize> {
    let p = SpaceParams::new(n)?;
    let s = p.s;
    let nu = p.nu;
    let even = p.is_even();
    let f = |z: Complex64, on_axis: bool| -> Complex64 {
        if even {
            m_s_poly(s as u32, z)
        } else if on_axis && z.re < 0.0 {
            m_s_on_cut(nu, -z.re)
        } else if on_axis {
            Complex64::new(m_s_with_tol(s, Complex64::new(z.re, 0.0), 1e-8).re, 0.0)
        } else {
            m_s_with_tol(s, z, 1e-8)
        }
    };
    let bottom = if even { -im_extent } else { 0.0 };
    let corners = [
        Complex64::new(-re_extent, bottom),
        Complex64::new(1.0, bottom),
        Complex64::new(1.0, im_extent),
        Complex64::new(-re_extent, im_extent),
        Complex64::new(-re_extent, bottom),
    ];
    let mut total = 0.0;
    for (edge, w) in corners.windows(2).enumerate() {
        let on_axis = !even && edge == 0;
        let samples = 200;
        let point = |t: f64| w[0] + (w[1] - w[0]) * t;
        let mut prev_t = 0.0;
        let mut prev_v = f(point(0.0), on_axis && edge == 0);
        for k in 1..=samples {
            let t = k as f64 / samples as f64;
            let v = f(point(t), on_axis);
            total += winding_increment(&f, &point, on_axis, prev_t, t, prev_v, v, 0);
            prev_t = t;
            prev_v = v;
        }
    }
    let turns = total / (2.0 * PI);
    let count = turns.round();
    if (turns - count).abs() > 0.05 || count < 0.0 {
        return Err(Error::ZeroSearch { n, message: format!("winding number {turns} is not an integer") });
    }
    let count = count as usize;
    Ok(if even { count } else { 2 * count })
}

#[allow(clippy::too_many_arguments)]
fn winding_increment<F, P>(
    f: &F,
    point: &P,
    on_axis: bool,
    t0: f64,
    t1: f64,
    v0: Complex64,
    v1: Complex64,
    depth: u32,
) -> f64
where
    F: Fn(Complex64, bool) -> Complex64,
    P: Fn(f64) -> Complex64,
{
    let d = (v1 / v0).arg();
    if d.abs() < 0.3 || depth > 40 {
        return d;
    }
    let tm = 0.5 * (t0 + t1);
    let vm = f(point(tm), on_axis);
    winding_increment(f, point, on_axis, t0, tm, v0, vm, depth + 1)
        + winding_increment(f, point, on_axis, tm, t1, vm, v1, depth + 1)
}

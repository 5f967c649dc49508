//! The weight function `w_λ`, inverse Laplace transform of `F_λ`.
//!
//! `w_λ = w₁ + w₂`, where `w₁(v) = Σ Res_{z_i} F_λ · e^{z_i v}` runs over the
//! zeros of `K_ν` and, for odd `n`, `w₂` is the contribution of the branch cut
//!
//! ```text
//! w₂(v) = (-1)^{ν+1} (x/a)^ν / (λa) ∫₀^∞ g(u) e^{-λu/a} e^{-vu} u du,
//! g(u)  = [I_ν(xu/a) K_ν(u) - I_ν(u) K_ν(xu/a)] / [K_ν(u)² + π² I_ν(u)²].
//! ```
//!
//! All quantities are evaluated with exponentially scaled Bessel functions,
//! and `w` is built once per geometry into a [`WEvaluator`] that tabulates the
//! `u`-integral and caches `w` on a fixed `v`-quadrature rule.

use std::sync::OnceLock;

use num_complex::Complex64;

use crate::error::{invalid, Error, Result};
use crate::params::{Geometry, SpaceParams};
use crate::quad::{gauss_legendre, gk21_rule, integrate_with_breaks, NeumaierSum, QuadResult, Tolerance};
use crate::special_fn::{ik_scaled_unchecked, k_scaled_complex, m_s_poly};
use crate::zeros::{find_zeros, ZeroSet};

/// `Q(r) = r - s(s+1) λ / (2ax)`, the linear part removed from the Bessel ratio.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QPolynomial {
    pub constant: f64,
}

impl QPolynomial {
    pub fn new(g: &Geometry) -> Result<Self> {
        let p = g.params()?;
        Ok(QPolynomial { constant: -p.s * (p.s + 1.0) * g.lambda() / (2.0 * g.a * g.x) })
    }

    pub fn eval(&self, r: f64) -> f64 {
        r + self.constant
    }
}

/// `F_λ(z)` for real `z ≥ 0`:
/// `λ F_λ(z) = (z/a)(x/a)^ν e^{λz/a} K_ν(xz/a)/K_ν(z) - (x/a)^s Q(z/a)`.
pub fn f_lambda(g: &Geometry, z: f64) -> Result<f64> {
    if !(z >= 0.0) || !z.is_finite() {
        return Err(invalid(format!("f_lambda needs finite z >= 0, got {z}")));
    }
    let p = g.params()?;
    let xi = g.xi();
    let q = QPolynomial::new(g)?;
    let head = if z == 0.0 {
        0.0
    } else {
        let (_, kx) = ik_scaled_unchecked(p.nu, xi * z);
        let (_, k1) = ik_scaled_unchecked(p.nu, z);
        (z / g.a) * xi.powf(p.nu) * kx / k1
    };
    Ok((head - xi.powf(p.s) * q.eval(z / g.a)) / g.lambda())
}

/// `Res_{z_i} F_λ = -(x/a)^ν z_i e^{λz_i/a} K_ν(x z_i/a) / (λ a K_{ν-1}(z_i))`.
pub fn residue_at(g: &Geometry, z_i: Complex64) -> Result<Complex64> {
    let p = g.params()?;
    let xi = g.xi();
    let denom = k_scaled_complex(p.nu - 1.0, z_i);
    if denom.norm() < 1e-8 {
        return Err(Error::Residue(format!("K_(ν-1) nearly vanishes at {z_i}")));
    }
    let num = k_scaled_complex(p.nu, z_i * xi) * z_i * xi.powf(p.nu);
    Ok(-num / (denom * (g.lambda() * g.a)))
}

/// The even-dimensional residue `-m_s(x z_i/a) / ((n-2) λ a m_{s-1}(z_i))`.
pub fn residue_at_poly(g: &Geometry, z_i: Complex64) -> Result<Complex64> {
    let p = g.params()?;
    if !p.is_even() {
        return Err(invalid("the polynomial residue form needs even n"));
    }
    let s = p.s as u32;
    if s == 0 {
        return Err(invalid("no zeros for n = 2"));
    }
    let denom = m_s_poly(s - 1, z_i);
    if denom.norm() == 0.0 {
        return Err(Error::Residue(format!("m_(s-1) vanishes at {z_i}")));
    }
    let num = m_s_poly(s, z_i * g.xi());
    Ok(-num / (denom * ((g.n as f64 - 2.0) * g.lambda() * g.a)))
}

/// `(x/a)^ν / (λ a) · g(u) e^{-λu/a}` with scaled Bessel functions.
fn branch_density(nu: f64, xi: f64, u: f64) -> f64 {
    let (i1, k1) = ik_scaled_unchecked(nu, u);
    let (ix, kx) = ik_scaled_unchecked(nu, xi * u);
    let num = ix * k1 - (-2.0 * (xi - 1.0) * u).exp() * i1 * kx;
    let den = (-4.0 * u).exp() * k1 * k1 + std::f64::consts::PI.powi(2) * i1 * i1;
    (-2.0 * u).exp() * num / den
}

/// The λ → 0 limit of the branch density, `e^{-2u} / (e^{-4u} K̂² + π² Î²)`.
fn boundary_branch_density(nu: f64, u: f64) -> f64 {
    let (i1, k1) = ik_scaled_unchecked(nu, u);
    let den = (-4.0 * u).exp() * k1 * k1 + std::f64::consts::PI.powi(2) * i1 * i1;
    (-2.0 * u).exp() / den
}

const U_GEOMETRIC_PANELS: i32 = 80;
const U_UNIT_PANELS: usize = 40;
const EXP_CUTOFF: f64 = 60.0;

/// Composite Gauss-Legendre nodes on `[0, 40]`: dyadic panels below 1, unit panels above.
fn u_nodes() -> &'static [(f64, f64)] {
    static NODES: OnceLock<Vec<(f64, f64)>> = OnceLock::new();
    NODES.get_or_init(|| {
        let (x, w) = gauss_legendre(20);
        let mut panels: Vec<(f64, f64)> =
            (0..U_GEOMETRIC_PANELS).rev().map(|k| (0.5f64.powi(k + 1), 0.5f64.powi(k))).collect();
        panels.extend((0..U_UNIT_PANELS).map(|k| (k as f64 + 1.0, k as f64 + 2.0)));
        panels
            .iter()
            .flat_map(|&(lo, hi)| {
                let (c, h) = (0.5 * (lo + hi), 0.5 * (hi - lo));
                x.iter().zip(&w).map(move |(&t, &wt)| (c + h * t, h * wt)).collect::<Vec<_>>()
            })
            .collect()
    })
}

/// `w₂(v) = Σ_k c_k e^{-u_k v}` on the fixed `u` rule.
#[derive(Debug, Clone)]
struct BranchTable {
    nodes: Vec<(f64, f64)>,
}

impl BranchTable {
    fn new(scale: f64, density: impl Fn(f64) -> f64) -> Self {
        let nodes = u_nodes().iter().map(|&(u, wt)| (u, scale * wt * u * density(u))).collect();
        BranchTable { nodes }
    }

    fn eval(&self, v: f64) -> f64 {
        let mut sum = NeumaierSum::new();
        for &(u, c) in &self.nodes {
            if u * v > EXP_CUTOFF {
                break;
            }
            sum.add(c * (-u * v).exp());
        }
        sum.value()
    }
}

/// A cached quadrature node for integrals against `w`.
#[derive(Debug, Clone, Copy)]
struct VNode {
    v: f64,
    kronrod: f64,
    gauss: f64,
    w: f64,
    panel: usize,
}

/// Precomputed evaluator for `w_λ`, or for its boundary limit `λ → 0`.
#[derive(Debug)]
pub struct WEvaluator {
    params: SpaceParams,
    a: f64,
    lambda: f64,
    zeros: ZeroSet,
    residues: Vec<Complex64>,
    branch: Option<BranchTable>,
    nodes: OnceLock<Vec<VNode>>,
}

impl WEvaluator {
    pub fn new(g: &Geometry) -> Result<Self> {
        let params = g.params()?;
        let zeros = find_zeros(g.n)?;
        let residues = zeros.zeros.iter().map(|&z| residue_at(g, z)).collect::<Result<Vec<_>>>()?;
        check_conjugate_closed(&zeros.zeros, &residues)?;
        let branch = (!params.is_even()).then(|| {
            let sign = if (params.nu as i64 + 1) % 2 == 0 { 1.0 } else { -1.0 };
            let xi = g.xi();
            let scale = sign * xi.powf(params.nu) / (g.lambda() * g.a);
            BranchTable::new(scale, |u| branch_density(params.nu, xi, u))
        });
        Ok(WEvaluator { params, a: g.a, lambda: g.lambda(), zeros, residues, branch, nodes: OnceLock::new() })
    }

    /// The boundary weight `lim_{x→a+} w_λ`.
    pub fn boundary(a: f64, n: u32) -> Result<Self> {
        if !(a > 0.0) || !a.is_finite() {
            return Err(invalid(format!("boundary height must be positive, got {a}")));
        }
        let params = SpaceParams::new(n)?;
        let zeros = find_zeros(n)?;
        let residues: Vec<Complex64> = zeros.zeros.iter().map(|&z| z * z / (a * a)).collect();
        let branch = (!params.is_even()).then(|| {
            let sign = if (params.nu as i64 + 1) % 2 == 0 { 1.0 } else { -1.0 };
            BranchTable::new(sign / (a * a), |u| boundary_branch_density(params.nu, u))
        });
        Ok(WEvaluator { params, a, lambda: 0.0, zeros, residues, branch, nodes: OnceLock::new() })
    }

    pub fn params(&self) -> &SpaceParams {
        &self.params
    }

    pub fn zeros(&self) -> &ZeroSet {
        &self.zeros
    }

    pub fn residues(&self) -> &[Complex64] {
        &self.residues
    }

    /// `w₁(v)`; fails if the conjugate pairs do not cancel to 1e-12.
    pub fn w1(&self, v: f64) -> Result<f64> {
        check_v(v)?;
        let mut sum = Complex64::new(0.0, 0.0);
        let mut scale = 0.0;
        for (&z, &r) in self.zeros.zeros.iter().zip(&self.residues) {
            let t = r * (z * v).exp();
            sum += t;
            scale += t.norm();
        }
        if sum.im.abs() > 1e-12 * scale {
            return Err(Error::NonRealSum { imag: sum.im, scale });
        }
        Ok(sum.re)
    }

    /// `w₂(v)`; only defined for odd `n`.
    pub fn w2(&self, v: f64) -> Result<f64> {
        check_v(v)?;
        match &self.branch {
            Some(b) => Ok(b.eval(v)),
            None => Err(invalid(format!("w2 is only defined for odd n, got n = {}", self.params.n))),
        }
    }

    pub fn w(&self, v: f64) -> Result<f64> {
        check_v(v)?;
        Ok(self.w_unchecked(v))
    }

    fn w_unchecked(&self, v: f64) -> f64 {
        let w1: f64 = self.zeros.zeros.iter().zip(&self.residues).map(|(&z, &r)| (r * (z * v).exp()).re).sum();
        w1 + self.branch.as_ref().map_or(0.0, |b| b.eval(v))
    }

    fn v_nodes(&self) -> &[VNode] {
        self.nodes.get_or_init(|| {
            v_panels(&self.params, &self.zeros, self.lambda / self.a)
                .iter()
                .enumerate()
                .flat_map(|(panel, &(lo, hi))| {
                    gk21_rule(lo, hi).map(|(v, kronrod, gauss)| VNode {
                        v,
                        kronrod,
                        gauss,
                        w: self.w_unchecked(v),
                        panel,
                    })
                })
                .collect()
        })
    }

    /// `∫₀^∞ f(v) w(v) dv` on the cached rule. The error estimate is the sum
    /// over panels of the Kronrod-Gauss differences.
    pub fn integrate<F: Fn(f64) -> f64>(&self, f: F) -> QuadResult<f64> {
        self.integrate_weighted(f, false)
    }

    /// `∫₀^∞ f(v) |w(v)| dv` on the same rule.
    pub fn integrate_abs<F: Fn(f64) -> f64>(&self, f: F) -> QuadResult<f64> {
        self.integrate_weighted(f, true)
    }

    fn integrate_weighted<F: Fn(f64) -> f64>(&self, f: F, abs: bool) -> QuadResult<f64> {
        let nodes = self.v_nodes();
        let mut total = NeumaierSum::new();
        let mut error = 0.0;
        let mut panel_diff = 0.0f64;
        let mut current = 0;
        for node in nodes {
            if node.panel != current {
                error += panel_diff.abs();
                panel_diff = 0.0;
                current = node.panel;
            }
            let fw = f(node.v) * if abs { node.w.abs() } else { node.w };
            total.add(node.kronrod * fw);
            panel_diff += (node.kronrod - node.gauss) * fw;
        }
        error += panel_diff.abs();
        QuadResult { value: total.value(), error, evaluations: nodes.len(), converged: true }
    }

    /// `∫₀^∞ v^k w(v) dv`.
    pub fn moment(&self, k: u32) -> Result<f64> {
        if !self.params.is_even() && k >= self.params.n {
            return Err(Error::Divergent(format!(
                "v^{k} w decays like v^{} for n = {}",
                k as i64 - self.params.n as i64 - 1,
                self.params.n
            )));
        }
        Ok(self.integrate(|v| v.powi(k as i32)).value)
    }

    /// `∫₀^∞ e^{-zv} w(v) dv`.
    pub fn laplace(&self, z: f64) -> Result<f64> {
        if !(z >= 0.0) || !z.is_finite() {
            return Err(invalid(format!("laplace needs finite z >= 0, got {z}")));
        }
        Ok(self.integrate(|v| (-z * v).exp()).value)
    }
}

fn check_v(v: f64) -> Result<()> {
    if v >= 0.0 && v.is_finite() {
        Ok(())
    } else {
        Err(invalid(format!("v must be finite and >= 0, got {v}")))
    }
}

fn check_conjugate_closed(zeros: &[Complex64], residues: &[Complex64]) -> Result<()> {
    for (z, r) in zeros.iter().zip(residues) {
        let partner = zeros.iter().zip(residues).find(|(w, _)| (**w - z.conj()).norm() <= 1e-12 * z.norm());
        match partner {
            Some((_, q)) if (q - r.conj()).norm() <= 1e-10 * r.norm() => {}
            _ => return Err(Error::Residue(format!("residue at {z} has no conjugate partner"))),
        }
    }
    Ok(())
}

/// Panels for the `v` rule: `[0, v0]`, then doubling up to 1, unit panels
/// while the residue terms are significant, then doubling to `2^64` for odd `n`.
fn v_panels(params: &SpaceParams, zeros: &ZeroSet, lambda_over_a: f64) -> Vec<(f64, f64)> {
    let v0 = 1e-6 * if lambda_over_a > 0.0 { lambda_over_a.min(1.0) } else { 1.0 };
    let mut edges = vec![0.0, v0];
    while *edges.last().unwrap() < 0.5 {
        let last = *edges.last().unwrap();
        edges.push(2.0 * last);
    }
    edges.push(1.0);
    let decay = zeros.zeros.iter().map(|z| -z.re).fold(f64::INFINITY, f64::min);
    let unit_end = if decay.is_finite() { (80.0 / decay).ceil() } else { 1.0 };
    let mut v = 1.0;
    while v < unit_end {
        v += 1.0;
        edges.push(v);
    }
    if !params.is_even() {
        while v < 2f64.powi(64) {
            v *= 2.0;
            edges.push(v);
        }
    }
    edges.windows(2).map(|e| (e[0], e[1])).collect()
}

/// `w₂(v)` by adaptive quadrature directly from its defining integral; slower
/// than [`WEvaluator::w2`] and used to check it.
pub fn w2_direct(g: &Geometry, v: f64, tol: Tolerance) -> Result<f64> {
    check_v(v)?;
    let p = g.params()?;
    if p.is_even() {
        return Err(invalid("w2 is only defined for odd n"));
    }
    let xi = g.xi();
    let sign = if (p.nu as i64 + 1) % 2 == 0 { 1.0 } else { -1.0 };
    let scale = sign * xi.powf(p.nu) / (g.lambda() * g.a);
    let upper = 40.0 + 60.0 / (v + 2.0);
    let mut f = |u: f64| u * branch_density(p.nu, xi, u) * (-u * v).exp();
    let r = integrate_with_breaks(&mut f, &[0.0, 1.0, upper], tol);
    Ok(scale * r.checked("w2 branch integral")?)
}

pub fn w1(g: &Geometry, v: f64) -> Result<f64> {
    WEvaluator::new(g)?.w1(v)
}

pub fn w2(g: &Geometry, v: f64) -> Result<f64> {
    WEvaluator::new(g)?.w2(v)
}

pub fn w(g: &Geometry, v: f64) -> Result<f64> {
    WEvaluator::new(g)?.w(v)
}

/// `lim_{x→a+} w_λ(v)`.
pub fn w_boundary(a: f64, n: u32, v: f64) -> Result<f64> {
    WEvaluator::boundary(a, n)?.w(v)
}

pub fn w_moment(g: &Geometry, k: u32) -> Result<f64> {
    WEvaluator::new(g)?.moment(k)
}

pub fn laplace_transform(g: &Geometry, z: f64) -> Result<f64> {
    WEvaluator::new(g)?.laplace(z)
}

//! Monte Carlo simulation of hyperbolic Brownian motion in the half-space model.
//!
//! The height solves `X_n(t) = x exp(B_n(t) - (n-1)t)` with `E B_n(t)² = 2t`, so
//! `log X_n` is stepped exactly as a Gaussian random walk. The horizontal
//! components satisfy `dX_j = X_n dB_j`; given the height path they are
//! centred Gaussian with variance `2A` per coordinate, `A = ∫₀^τ X_n² ds`.
//! Only the exit time within a step and the trapezoid rule for `A` carry
//! discretisation error.
//!
//! Each path draws from its own ChaCha8 stream, selected by the path index, so
//! results do not depend on how paths are spread over threads.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, InverseGaussian, StandardNormal};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result};
use crate::kernel::{kernel_hn, sphere_area};
use crate::params::Geometry;
use crate::quad::NeumaierSum;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct McConfig {
    pub geometry: Geometry,
    pub dt: f64,
    pub n_paths: usize,
    pub seed: u64,
    pub bridge_correction: bool,
    /// Steps after which a path is abandoned and redrawn from the same stream.
    pub max_steps: u64,
}

impl McConfig {
    /// `dt = 1e-4`, bridge correction on.
    pub fn new(geometry: Geometry, n_paths: usize, seed: u64) -> Self {
        McConfig { geometry, dt: 1e-4, n_paths, seed, bridge_correction: true, max_steps: 100_000_000 }
    }

    pub fn with_dt(mut self, dt: f64) -> Self {
        self.dt = dt;
        self
    }

    pub fn with_bridge_correction(mut self, on: bool) -> Self {
        self.bridge_correction = on;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.dt > 0.0) || !self.dt.is_finite() {
            return Err(invalid(format!("dt must be positive, got {}", self.dt)));
        }
        if self.n_paths == 0 {
            return Err(invalid("n_paths must be at least 1"));
        }
        if self.geometry.n < 2 {
            return Err(invalid("dimension must be >= 2"));
        }
        Ok(())
    }

    fn rng(&self, stream: u64) -> ChaCha8Rng {
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        rng.set_stream(stream);
        rng
    }
}

/// One exit from `{x_n > a}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExitSample {
    pub tau: f64,
    /// `A = ∫₀^τ X_n(s)² ds`
    pub a_func: f64,
    /// Horizontal exit offset, `n - 1` coordinates.
    pub y: Vec<f64>,
}

impl ExitSample {
    pub fn radius(&self) -> f64 {
        self.y.iter().map(|v| v * v).sum::<f64>().sqrt()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct McEstimate {
    pub value: f64,
    pub std_err: f64,
    pub n_effective: usize,
}

impl McEstimate {
    /// Sample mean and standard error, with compensated sums.
    pub fn from_values(values: &[f64]) -> Self {
        let n = values.len();
        let mean = values.iter().copied().collect::<NeumaierSum>().value() / n as f64;
        let ss = values.iter().map(|v| (v - mean).powi(2)).collect::<NeumaierSum>().value();
        let var = if n > 1 { ss / (n - 1) as f64 } else { 0.0 };
        McEstimate { value: mean, std_err: (var / n as f64).sqrt(), n_effective: n }
    }

    /// `(value - reference) / std_err`; infinite if the error is zero and the values differ.
    pub fn z_score(&self, reference: f64) -> f64 {
        let d = self.value - reference;
        if d == 0.0 {
            0.0
        } else {
            d / self.std_err
        }
    }
}

/// Time at which a Brownian bridge with variance `2t`, running over `[0, dt]`
/// from distance `d0 > 0` above the barrier to `c ≥ 0` below it (or, by
/// reflection, conditioned to touch it from above), first hits the barrier.
///
/// With `S = t dt / (dt - t)` the hitting time is inverse Gaussian with mean
/// `d0 dt / c` and shape `d0² / 2`, and Lévy when `c = 0`.
fn bridge_hit_fraction<R: Rng>(rng: &mut R, d0: f64, c: f64, dt: f64) -> f64 {
    let shape = 0.5 * d0 * d0;
    let s = if c > 0.0 {
        match InverseGaussian::new(d0 * dt / c, shape) {
            Ok(ig) => ig.sample(rng),
            Err(_) => levy(rng, shape),
        }
    } else {
        levy(rng, shape)
    };
    if s.is_finite() {
        s / (dt + s)
    } else {
        1.0
    }
}

fn levy<R: Rng>(rng: &mut R, scale: f64) -> f64 {
    let z: f64 = rng.sample(StandardNormal);
    scale / (z * z)
}

fn run_path<R: Rng>(cfg: &McConfig, rng: &mut R) -> Option<(f64, f64)> {
    let g = cfg.geometry;
    let drift = -((g.n - 1) as f64) * cfg.dt;
    let sd = (2.0 * cfg.dt).sqrt();
    let barrier = g.a.ln();
    let a2 = g.a * g.a;
    let mut l0 = g.x.ln();
    let mut x0sq = g.x * g.x;
    let mut area = NeumaierSum::new();
    let mut t = 0.0;
    for _ in 0..cfg.max_steps {
        let z: f64 = rng.sample(StandardNormal);
        let l1 = l0 + drift + sd * z;
        let d0 = l0 - barrier;
        let d1 = l1 - barrier;
        let hit = if d1 <= 0.0 {
            Some(if cfg.bridge_correction { bridge_hit_fraction(rng, d0, -d1, cfg.dt) } else { 1.0 })
        } else if cfg.bridge_correction {
            let p = (-d0 * d1 / cfg.dt).exp();
            let u: f64 = rng.random();
            (u < p).then(|| bridge_hit_fraction(rng, d0, d1, cfg.dt))
        } else {
            None
        };
        if let Some(theta) = hit {
            let end = if cfg.bridge_correction { a2 } else { (2.0 * l1).exp() };
            area.add(0.5 * theta * cfg.dt * (x0sq + end));
            return Some((t + theta * cfg.dt, area.value()));
        }
        let x1sq = (2.0 * l1).exp();
        area.add(0.5 * cfg.dt * (x0sq + x1sq));
        t += cfg.dt;
        l0 = l1;
        x0sq = x1sq;
    }
    None
}

/// Simulates the exit of path number `stream`.
pub fn simulate_exit(cfg: &McConfig, stream: u64) -> Result<ExitSample> {
    cfg.validate()?;
    let mut rng = cfg.rng(stream);
    let (tau, a_func) = loop {
        if let Some(r) = run_path(cfg, &mut rng) {
            break r;
        }
    };
    let sd = (2.0 * a_func).sqrt();
    let y = (0..cfg.geometry.n - 1).map(|_| sd * rng.sample::<f64, _>(StandardNormal)).collect();
    Ok(ExitSample { tau, a_func, y })
}

/// All `cfg.n_paths` exits, in path order, simulated in parallel.
pub fn simulate_exits(cfg: &McConfig) -> Result<Vec<ExitSample>> {
    cfg.validate()?;
    (0..cfg.n_paths as u64).into_par_iter().map(|i| simulate_exit(cfg, i)).collect()
}

/// `log X_n(steps·dt) - log x` for a path without absorption.
pub fn free_log_height(cfg: &McConfig, steps: u64, stream: u64) -> f64 {
    let mut rng = cfg.rng(stream);
    let drift = -((cfg.geometry.n - 1) as f64) * cfg.dt;
    let sd = (2.0 * cfg.dt).sqrt();
    (0..steps).map(|_| drift + sd * rng.sample::<f64, _>(StandardNormal)).sum()
}

/// Estimates `E exp(-|u|² A)` from existing samples.
pub fn char_fn_from(samples: &[ExitSample], u_norm: f64) -> McEstimate {
    let vals: Vec<f64> = samples.iter().map(|s| (-u_norm * u_norm * s.a_func).exp()).collect();
    McEstimate::from_values(&vals)
}

/// Estimates `E exp(-|u|² A)`, the Fourier transform of the exit density at `|u|`.
pub fn mc_char_fn(cfg: &McConfig, u_norm: f64) -> Result<McEstimate> {
    if !(u_norm >= 0.0) || !u_norm.is_finite() {
        return Err(invalid(format!("u_norm must be finite and >= 0, got {u_norm}")));
    }
    if u_norm == 0.0 {
        return Ok(McEstimate { value: 1.0, std_err: 0.0, n_effective: cfg.n_paths });
    }
    Ok(char_fn_from(&simulate_exits(cfg)?, u_norm))
}

/// Volume of the shell `lo ≤ |y| < hi` in `R^{n-1}`.
pub fn shell_volume(n: u32, lo: f64, hi: f64) -> f64 {
    let d = (n - 1) as i32;
    sphere_area(n) * (hi.powi(d) - lo.powi(d)) / d as f64
}

fn check_edges(edges: &[f64]) -> Result<()> {
    if edges.len() < 2 || edges[0] < 0.0 || edges.windows(2).any(|w| !(w[1] > w[0])) {
        return Err(invalid("bin edges must be nonnegative and strictly increasing"));
    }
    Ok(())
}

/// Per-bin density `Pr(|y| ∈ bin) / shell volume` from existing samples.
///
/// Empty bins report the one-sided 95% upper bound `3/N` on the probability
/// as their standard error.
pub fn radial_density_from(samples: &[ExitSample], n: u32, edges: &[f64]) -> Result<Vec<McEstimate>> {
    check_edges(edges)?;
    let total = samples.len();
    let mut counts = vec![0usize; edges.len() - 1];
    for s in samples {
        let r = s.radius();
        let k = edges.partition_point(|&e| e <= r);
        if k >= 1 && k < edges.len() {
            counts[k - 1] += 1;
        }
    }
    Ok(counts
        .iter()
        .zip(edges.windows(2))
        .map(|(&c, w)| {
            let vol = shell_volume(n, w[0], w[1]);
            let p = c as f64 / total as f64;
            let se = if c == 0 { 3.0 / total as f64 } else { (p * (1.0 - p) / total as f64).sqrt() };
            McEstimate { value: p / vol, std_err: se / vol, n_effective: total }
        })
        .collect())
}

pub fn mc_radial_density(cfg: &McConfig, bin_edges: &[f64]) -> Result<Vec<McEstimate>> {
    check_edges(bin_edges)?;
    radial_density_from(&simulate_exits(cfg)?, cfg.geometry.n, bin_edges)
}

/// A Monte Carlo bin density next to its reference value.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BinComparison {
    pub lo: f64,
    pub hi: f64,
    pub estimate: McEstimate,
    pub reference: f64,
}

impl BinComparison {
    pub fn z_score(&self) -> f64 {
        self.estimate.z_score(self.reference)
    }
}

/// Radial histogram of the exit offset for small `a`, against the mean of
/// `P_{H^n}(x, ·)` over each shell.
pub fn mc_limit_law(cfg: &McConfig, bin_edges: &[f64]) -> Result<Vec<BinComparison>> {
    let g = cfg.geometry;
    if g.a > g.x / 10.0 {
        return Err(invalid(format!("the limit law needs a <= x/10, got a = {}, x = {}", g.a, g.x)));
    }
    let est = mc_radial_density(cfg, bin_edges)?;
    let n = g.n;
    let d = (n - 2) as i32;
    Ok(est
        .into_iter()
        .zip(bin_edges.windows(2))
        .map(|(estimate, w)| {
            let mass = crate::quad::integrate(
                |r: f64| kernel_hn(g.x, r, n) * sphere_area(n) * r.powi(d),
                w[0],
                w[1],
                crate::quad::Tolerance::rel(1e-12),
            )
            .value;
            BinComparison { lo: w[0], hi: w[1], estimate, reference: mass / shell_volume(n, w[0], w[1]) }
        })
        .collect())
}

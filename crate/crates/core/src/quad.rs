//! Quadrature building blocks: adaptive Gauss-Kronrod, fixed Gauss rules,
//! Wynn's epsilon algorithm and compensated summation.

use num_complex::Complex64;
use std::collections::BinaryHeap;
use std::ops::{Add, Mul, Sub};

use crate::error::{Error, Result};

/// Values that can be integrated: reals and complex numbers.
pub trait Scalar: Copy + Add<Output = Self> + Sub<Output = Self> + Mul<f64, Output = Self> + Send + Sync {
    fn zero() -> Self;
    fn norm(self) -> f64;
    fn is_finite(self) -> bool;
}

impl Scalar for f64 {
    fn zero() -> Self {
        0.0
    }
    fn norm(self) -> f64 {
        self.abs()
    }
    fn is_finite(self) -> bool {
        f64::is_finite(self)
    }
}

impl Scalar for Complex64 {
    fn zero() -> Self {
        Complex64::new(0.0, 0.0)
    }
    fn norm(self) -> f64 {
        Complex64::norm(self)
    }
    fn is_finite(self) -> bool {
        self.re.is_finite() && self.im.is_finite()
    }
}

// 21-point Kronrod extension of the 10-point Gauss rule.
const XGK21: [f64; 11] = [
    0.995657163025808080735527280689003,
    0.973906528517171720077964012084452,
    0.930157491355708226001207180059508,
    0.865063366688984510732096688423493,
    0.780817726586416897063717578345042,
    0.679409568299024406234327365114874,
    0.562757134668604683339000099272694,
    0.433395394129247190799265943165784,
    0.294392862701460198131126603103866,
    0.148874338981631210884826001129720,
    0.000000000000000000000000000000000,
];

const WGK21: [f64; 11] = [
    0.011694638867371874278064396062192,
    0.032558162307964727478818972459390,
    0.054755896574351996031381300244580,
    0.075039674810919952767043140916190,
    0.093125454583697605535065465083366,
    0.109387158802297641899210590325805,
    0.123491976262065851077208696914990,
    0.134709217311473325928054001771707,
    0.142775938577060080797094273138717,
    0.147739104901338491374841515972068,
    0.149445554002916905664936468389821,
];

const WG10: [f64; 5] = [
    0.066671344308688137593568809893332,
    0.149451349150580593145776339657697,
    0.219086362515982043995534934228163,
    0.269266719309996355091226921569469,
    0.295524224714752870173892994651146,
];

/// Nodes and weights of the 21-point Kronrod rule on `[a, b]`, together with
/// the weights of the embedded 10-point Gauss rule (zero at Kronrod-only nodes).
pub fn gk21_rule(a: f64, b: f64) -> [(f64, f64, f64); 21] {
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let mut out = [(0.0, 0.0, 0.0); 21];
    for j in 0..10 {
        let wg = if j % 2 == 1 { WG10[j / 2] } else { 0.0 };
        out[2 * j] = (c - h * XGK21[j], h * WGK21[j], h * wg);
        out[2 * j + 1] = (c + h * XGK21[j], h * WGK21[j], h * wg);
    }
    out[20] = (c, h * WGK21[10], 0.0);
    out
}

#[derive(Debug, Clone, Copy)]
struct Segment<T> {
    a: f64,
    b: f64,
    value: T,
    error: f64,
}

fn gk21<T: Scalar, F: FnMut(f64) -> T>(f: &mut F, a: f64, b: f64) -> Segment<T> {
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let fc = f(c);
    let mut resk = fc * WGK21[10];
    let mut resg = T::zero();
    let mut resabs = fc.norm() * WGK21[10];
    let mut fv1 = [T::zero(); 10];
    let mut fv2 = [T::zero(); 10];
    for j in 0..10 {
        let dx = h * XGK21[j];
        let f1 = f(c - dx);
        let f2 = f(c + dx);
        fv1[j] = f1;
        fv2[j] = f2;
        resk = resk + (f1 + f2) * WGK21[j];
        resabs += WGK21[j] * (f1.norm() + f2.norm());
        if j % 2 == 1 {
            resg = resg + (f1 + f2) * WG10[j / 2];
        }
    }
    let mean = resk * 0.5;
    let mut resasc = WGK21[10] * (fc - mean).norm();
    for j in 0..10 {
        resasc += WGK21[j] * ((fv1[j] - mean).norm() + (fv2[j] - mean).norm());
    }
    let value = resk * h;
    let resabs = resabs * h.abs();
    let resasc = resasc * h.abs();
    let mut error = ((resk - resg) * h).norm();
    if resasc != 0.0 && error != 0.0 {
        error = resasc * (200.0 * error / resasc).powf(1.5).min(1.0);
    }
    let round = 50.0 * f64::EPSILON * resabs;
    if resabs > f64::MIN_POSITIVE / (50.0 * f64::EPSILON) && round > error {
        error = round;
    }
    Segment { a, b, value, error }
}

/// Requested accuracy for the adaptive integrators.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerance {
    pub abs: f64,
    pub rel: f64,
    pub max_subdivisions: usize,
}

impl Tolerance {
    pub fn rel(rel: f64) -> Self {
        Tolerance { abs: 0.0, rel, max_subdivisions: 500 }
    }

    pub fn with_abs(mut self, abs: f64) -> Self {
        self.abs = abs;
        self
    }

    pub fn with_max_subdivisions(mut self, m: usize) -> Self {
        self.max_subdivisions = m;
        self
    }

    fn target(&self, value: f64) -> f64 {
        self.abs.max(self.rel * value.abs())
    }
}

impl Default for Tolerance {
    fn default() -> Self {
        Tolerance::rel(1e-12)
    }
}

/// Outcome of an adaptive integration.
#[derive(Debug, Clone, Copy)]
pub struct QuadResult<T> {
    pub value: T,
    pub error: f64,
    pub evaluations: usize,
    pub converged: bool,
}

impl<T: Scalar> QuadResult<T> {
    /// Turns a non-converged result into an error.
    pub fn checked(self, what: &str) -> Result<T> {
        if self.converged {
            Ok(self.value)
        } else {
            Err(Error::Quadrature { message: what.to_string(), partial: self.value.norm(), error: self.error })
        }
    }
}

struct ByError<T>(Segment<T>);

impl<T> PartialEq for ByError<T> {
    fn eq(&self, other: &Self) -> bool {
        self.0.error == other.0.error
    }
}
impl<T> Eq for ByError<T> {}
impl<T> PartialOrd for ByError<T> {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}
impl<T> Ord for ByError<T> {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.0.error.total_cmp(&other.0.error)
    }
}

/// Globally adaptive 21-point Gauss-Kronrod integration of `f` over `[a, b]`.
pub fn integrate<T: Scalar, F: FnMut(f64) -> T>(mut f: F, a: f64, b: f64, tol: Tolerance) -> QuadResult<T> {
    integrate_with_breaks(&mut f, &[a, b], tol)
}

/// Like [`integrate`], with the interval pre-split at the given increasing points.
pub fn integrate_with_breaks<T: Scalar, F: FnMut(f64) -> T>(
    f: &mut F,
    points: &[f64],
    tol: Tolerance,
) -> QuadResult<T> {
    let mut heap = BinaryHeap::new();
    let mut value = T::zero();
    let mut error = 0.0;
    let mut evaluations = 0;
    for w in points.windows(2) {
        if w[1] > w[0] {
            let seg = gk21(f, w[0], w[1]);
            evaluations += 21;
            value = value + seg.value;
            error += seg.error;
            heap.push(ByError(seg));
        }
    }
    let mut converged = error <= tol.target(value.norm());
    let mut splits = 0;
    while !converged && splits < tol.max_subdivisions {
        let Some(ByError(worst)) = heap.pop() else { break };
        let mid = 0.5 * (worst.a + worst.b);
        if !(mid > worst.a && mid < worst.b) || !worst.value.is_finite() {
            heap.push(ByError(worst));
            break;
        }
        let left = gk21(f, worst.a, mid);
        let right = gk21(f, mid, worst.b);
        evaluations += 42;
        splits += 1;
        value = value - worst.value + left.value + right.value;
        error += left.error + right.error - worst.error;
        heap.push(ByError(left));
        heap.push(ByError(right));
        if splits % 32 == 0 {
            // resum to shed accumulated cancellation in the running totals
            value = heap.iter().fold(T::zero(), |acc, s| acc + s.0.value);
            error = heap.iter().map(|s| s.0.error).sum();
        }
        converged = error <= tol.target(value.norm());
    }
    value = heap.iter().fold(T::zero(), |acc, s| acc + s.0.value);
    error = heap.iter().map(|s| s.0.error).sum();
    converged = converged || error <= tol.target(value.norm());
    QuadResult { value, error, evaluations, converged: converged && value.is_finite() }
}

/// Integral of `f` over `[a, ∞)`.
///
/// The half-line is cut into panels `[a + h(2^k - 1), a + h(2^(k+1) - 1)]`, each
/// integrated adaptively. Summation stops once the panel contributions, together
/// with a geometric tail estimate, fall below the tolerance.
pub fn integrate_to_infinity<T: Scalar, F: FnMut(f64) -> T>(mut f: F, a: f64, h: f64, tol: Tolerance) -> QuadResult<T> {
    let mut value = T::zero();
    let mut error = 0.0;
    let mut evaluations = 0;
    let mut converged = true;
    let mut prev = f64::INFINITY;
    let mut small_run = 0;
    let mut lo = a;
    let mut width = h;
    for _ in 0..1100 {
        let hi = lo + width;
        if !hi.is_finite() {
            break;
        }
        let r = integrate_with_breaks(&mut f, &[lo, hi], Tolerance { abs: tol.abs * 0.01, ..tol });
        evaluations += r.evaluations;
        converged &= r.converged;
        value = value + r.value;
        error += r.error;
        let cur = r.value.norm();
        let ratio = if prev > 0.0 && prev.is_finite() { cur / prev } else { 1.0 };
        let tail = if ratio < 0.9 { cur * ratio / (1.0 - ratio) } else { f64::INFINITY };
        let target = tol.target(value.norm());
        if cur == 0.0 && prev == 0.0 {
            small_run += 1;
        } else if tail <= target * 0.1 && cur <= target {
            small_run += 1;
        } else {
            small_run = 0;
        }
        if small_run >= 2 {
            if tail.is_finite() {
                error += tail;
            }
            return QuadResult { value, error, evaluations, converged: converged && value.is_finite() };
        }
        prev = cur;
        lo = hi;
        width *= 2.0;
    }
    QuadResult { value, error, evaluations, converged: false }
}

/// Nodes and weights of the `n`-point Gauss-Legendre rule on `[-1, 1]`.
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut x = vec![0.0; n];
    let mut w = vec![0.0; n];
    let m = n.div_ceil(2);
    for i in 0..m {
        let mut z = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (mut p1, mut p2) = (1.0, 0.0);
            for j in 0..n {
                let p3 = p2;
                p2 = p1;
                p1 = ((2 * j + 1) as f64 * z * p2 - j as f64 * p3) / (j + 1) as f64;
            }
            dp = n as f64 * (z * p1 - p2) / (z * z - 1.0);
            let dz = p1 / dp;
            z -= dz;
            if dz.abs() < 1e-16 {
                break;
            }
        }
        x[i] = -z;
        x[n - 1 - i] = z;
        w[i] = 2.0 / ((1.0 - z * z) * dp * dp);
        w[n - 1 - i] = w[i];
    }
    (x, w)
}

/// Gauss rule for the weight `(1 - t²)^α` on `[-1, 1]`, `α > -1`, by Golub-Welsch.
pub fn gauss_gegenbauer(n: usize, alpha: f64) -> (Vec<f64>, Vec<f64>) {
    use nalgebra::DMatrix;
    let mut jac = DMatrix::<f64>::zeros(n, n);
    for k in 1..n {
        let kf = k as f64;
        let b2 = if (alpha + 0.5).abs() < 1e-15 && k == 1 {
            0.5
        } else {
            kf * (kf + 2.0 * alpha) / ((2.0 * kf + 2.0 * alpha + 1.0) * (2.0 * kf + 2.0 * alpha - 1.0))
        };
        let b = b2.sqrt();
        jac[(k, k - 1)] = b;
        jac[(k - 1, k)] = b;
    }
    let mu0 = std::f64::consts::PI.sqrt() * statrs::function::gamma::gamma(alpha + 1.0)
        / statrs::function::gamma::gamma(alpha + 1.5);
    let eig = nalgebra::SymmetricEigen::new(jac);
    let mut pairs: Vec<(f64, f64)> = (0..n)
        .map(|i| {
            let v0 = eig.eigenvectors[(0, i)];
            (eig.eigenvalues[i], mu0 * v0 * v0)
        })
        .collect();
    pairs.sort_by(|p, q| p.0.total_cmp(&q.0));
    pairs.into_iter().unzip()
}

/// Wynn's epsilon algorithm applied to a sequence of partial sums. Returns the
/// extrapolated limit and a crude error estimate from the last two extrapolants.
pub fn wynn_epsilon(partial_sums: &[f64]) -> (f64, f64) {
    let n = partial_sums.len();
    if n < 3 {
        let last = partial_sums.last().copied().unwrap_or(0.0);
        let prev = if n == 2 { partial_sums[0] } else { 0.0 };
        return (last, (last - prev).abs());
    }
    // eps[k] holds the current column of the epsilon table.
    let mut prev_col = vec![0.0; n + 1];
    let mut col: Vec<f64> = partial_sums.to_vec();
    let mut best = *partial_sums.last().unwrap();
    let mut best_err = (partial_sums[n - 1] - partial_sums[n - 2]).abs();
    let mut estimates = Vec::new();
    let mut k = 0;
    while col.len() > 1 {
        let mut next = Vec::with_capacity(col.len() - 1);
        let mut ok = true;
        for i in 0..col.len() - 1 {
            let d = col[i + 1] - col[i];
            if d == 0.0 || !d.is_finite() {
                ok = false;
                break;
            }
            next.push(prev_col[i + 1] + 1.0 / d);
        }
        if !ok {
            break;
        }
        prev_col = col;
        col = next;
        k += 1;
        if k % 2 == 0 {
            if let Some(&e) = col.last() {
                estimates.push(e);
            }
        }
    }
    if estimates.len() >= 2 {
        let m = estimates.len();
        let err = (estimates[m - 1] - estimates[m - 2]).abs();
        if err < best_err {
            best = estimates[m - 1];
            best_err = err;
        }
    }
    (best, best_err)
}

/// Neumaier's compensated summation.
#[derive(Debug, Clone, Copy, Default)]
pub struct NeumaierSum {
    sum: f64,
    comp: f64,
}

impl NeumaierSum {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add(&mut self, v: f64) {
        let t = self.sum + v;
        if self.sum.abs() >= v.abs() {
            self.comp += (self.sum - t) + v;
        } else {
            self.comp += (v - t) + self.sum;
        }
        self.sum = t;
    }

    pub fn value(&self) -> f64 {
        self.sum + self.comp
    }
}

impl FromIterator<f64> for NeumaierSum {
    fn from_iter<I: IntoIterator<Item = f64>>(iter: I) -> Self {
        let mut s = NeumaierSum::new();
        for v in iter {
            s.add(v);
        }
        s
    }
}

/// Compensated sum of an iterator of reals.
pub fn compensated_sum<I: IntoIterator<Item = f64>>(it: I) -> f64 {
    it.into_iter().collect::<NeumaierSum>().value()
}

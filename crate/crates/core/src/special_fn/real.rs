//! Real-argument Bessel functions.
//!
//! `I_ν` and `K_ν` come from Temme's series (x < 2), Steed's continued
//! fraction (2 ≤ x < 25) and the Hankel asymptotic series (x ≥ 25). `J_μ`
//! uses the ascending series (x < 2), the Barnett-Steed continued fractions
//! (2 ≤ x < 25) and the asymptotic P/Q form beyond.

use std::f64::consts::PI;

pub(crate) const TEMME_SWITCH: f64 = 2.0;
pub(crate) const ASYMPTOTIC_SWITCH: f64 = 25.0;

const EPS: f64 = f64::EPSILON;
const FPMIN: f64 = f64::MIN_POSITIVE / f64::EPSILON;
const MAXIT: usize = 100_000;

// Taylor coefficients c_1..c_30 of 1/Γ(x) = Σ c_k x^k.
const INV_GAMMA: [f64; 30] = [
    1.0,
    0.5772156649015328606065,
    -0.655878071520253881077,
    -0.042002635034095235529,
    0.1665386113822914895017,
    -0.04219773455554433674821,
    -0.009621971527876973562115,
    0.007218943246663099542395,
    -0.001165167591859065112114,
    -0.0002152416741149509728157,
    0.0001280502823881161861532,
    -0.00002013485478078823865569,
    -0.000001250493482142670657345,
    0.000001133027231981695882374,
    -2.05633841697760710345e-7,
    6.116095104481415817862e-9,
    5.002007644469222930056e-9,
    -1.181274570487020144588e-9,
    1.043426711691100510492e-10,
    7.78226343990507125405e-12,
    -3.696805618642205708188e-12,
    5.100370287454475979015e-13,
    -2.058326053566506783222e-14,
    -5.34812253942301798237e-15,
    1.226778628238260790159e-15,
    -1.181259301697458769514e-16,
    1.18669225475160033258e-18,
    1.412380655318031781556e-18,
    -2.298745684435370206592e-19,
    1.714406321927337433384e-20,
];

/// Temme's gam1 = (1/Γ(1-μ) - 1/Γ(1+μ))/(2μ) and gam2 = (1/Γ(1-μ) + 1/Γ(1+μ))/2.
fn temme_gammas(mu: f64) -> (f64, f64) {
    let mut g1 = 0.0;
    let mut g2 = 0.0;
    // Horner over even and odd coefficient subsequences, highest power first.
    for k in (1..=30).rev() {
        let c = INV_GAMMA[k - 1];
        if k % 2 == 0 {
            g1 = g1 * mu * mu + c;
        } else {
            g2 = g2 * mu * mu + c;
        }
    }
    (-g1, g2)
}

/// Coefficients `a_k(ν) = Π_{j=1..k} (4ν² - (2j-1)²) / (k! 8^k)` of the Hankel expansions.
fn hankel_series(nu: f64, x: f64, alternate: bool) -> f64 {
    let four_nu2 = 4.0 * nu * nu;
    let mut term = 1.0;
    let mut sum = 1.0;
    let mut last = f64::INFINITY;
    for k in 1..200 {
        let kf = k as f64;
        term *= (four_nu2 - (2.0 * kf - 1.0).powi(2)) / (8.0 * kf * x);
        let t = if alternate && k % 2 == 1 { -term } else { term };
        if t.abs() > last {
            break;
        }
        sum += t;
        last = t.abs();
        if t.abs() <= EPS * 0.1 * sum.abs() {
            break;
        }
    }
    sum
}

/// `(e^{-x} I_ν(x), e^{x} K_ν(x), e^{x} K_{ν+1}(x))` for `x > 0`, `ν ≥ 0`.
pub(crate) fn ik_scaled(nu: f64, x: f64) -> (f64, f64, f64) {
    debug_assert!(x > 0.0 && nu >= 0.0);
    if x >= ASYMPTOTIC_SWITCH {
        return ik_asymptotic(nu, x);
    }
    ik_continued_fraction(nu, x, x < TEMME_SWITCH)
}

pub(crate) fn ik_asymptotic(nu: f64, x: f64) -> (f64, f64, f64) {
    let k = (PI / (2.0 * x)).sqrt() * hankel_series(nu, x, false);
    let k1 = (PI / (2.0 * x)).sqrt() * hankel_series(nu + 1.0, x, false);
    let i = hankel_series(nu, x, true) / (2.0 * PI * x).sqrt();
    (i, k, k1)
}

/// CF1 for `I_{ν+1}/I_ν` plus either Temme's series or Steed's CF2 for `K`.
pub(crate) fn ik_continued_fraction(nu: f64, x: f64, temme: bool) -> (f64, f64, f64) {
    let nl = (nu + 0.5).floor() as usize;
    let xmu = nu - nl as f64;
    let xmu2 = xmu * xmu;
    let xi = 1.0 / x;
    let xi2 = 2.0 * xi;

    // CF1 for I_{ν+1}/I_ν
    let mut h = (nu * xi).max(FPMIN);
    let mut b = xi2 * nu;
    let mut d = 0.0;
    let mut c = h;
    for _ in 0..MAXIT {
        b += xi2;
        d = 1.0 / (b + d);
        c = b + 1.0 / c;
        let del = c * d;
        h *= del;
        if (del - 1.0).abs() <= EPS {
            break;
        }
    }
    let mut ril = FPMIN;
    let mut ripl = h * ril;
    let ril1 = ril;
    let mut fact = nu * xi;
    for _ in 0..nl {
        let ritemp = fact * ril + ripl;
        fact -= xi;
        ripl = fact * ritemp + ril;
        ril = ritemp;
    }
    let f = ripl / ril;

    let (rkmu, rk1) = if temme {
        let x2 = 0.5 * x;
        let pimu = PI * xmu;
        let fact = if pimu.abs() < EPS { 1.0 } else { pimu / pimu.sin() };
        let d = -x2.ln();
        let e = xmu * d;
        let fact2 = if e.abs() < EPS { 1.0 } else { e.sinh() / e };
        let (gam1, gam2) = temme_gammas(xmu);
        let gampl = gam2 - xmu * gam1;
        let gammi = gam2 + xmu * gam1;
        let mut ff = fact * (gam1 * e.cosh() + gam2 * fact2 * d);
        let mut sum = ff;
        let ee = e.exp();
        let mut p = 0.5 * ee / gampl;
        let mut q = 0.5 / (ee * gammi);
        let mut c = 1.0;
        let dd = x2 * x2;
        let mut sum1 = p;
        for i in 1..MAXIT {
            let fi = i as f64;
            ff = (fi * ff + p + q) / (fi * fi - xmu2);
            c *= dd / fi;
            p /= fi - xmu;
            q /= fi + xmu;
            let del = c * ff;
            sum += del;
            sum1 += c * (p - fi * ff);
            if del.abs() < sum.abs() * EPS {
                break;
            }
        }
        let ex = x.exp();
        (sum * ex, sum1 * xi2 * ex)
    } else {
        let mut b = 2.0 * (1.0 + x);
        let mut d = 1.0 / b;
        let mut delh = d;
        let mut h = d;
        let mut q1 = 0.0;
        let mut q2 = 1.0;
        let a1 = 0.25 - xmu2;
        let mut q = a1;
        let mut c = a1;
        let mut a = -a1;
        let mut s = 1.0 + q * delh;
        for i in 2..MAXIT {
            let fi = i as f64;
            a -= 2.0 * (fi - 1.0);
            c = -a * c / fi;
            let qnew = (q1 - b * q2) / a;
            q1 = q2;
            q2 = qnew;
            q += c * qnew;
            b += 2.0;
            d = 1.0 / (b + a * d);
            delh *= b * d - 1.0;
            h += delh;
            let dels = q * delh;
            s += dels;
            if (dels / s).abs() < EPS {
                break;
            }
        }
        let h = a1 * h;
        let rkmu = (PI / (2.0 * x)).sqrt() / s;
        (rkmu, rkmu * (xmu + x + 0.5 - h) * xi)
    };

    let rkmup = xmu * xi * rkmu - rk1;
    let rimu = xi / (f * rkmu - rkmup);
    let ri = rimu * ril1 / ril;
    let (mut kmu, mut k1) = (rkmu, rk1);
    for i in 1..=nl {
        let t = (xmu + i as f64) * xi2 * k1 + kmu;
        kmu = k1;
        k1 = t;
    }
    (ri, kmu, k1)
}

/// Ascending series for `J_μ`; reliable for moderate `x`.
pub(crate) fn j_series(mu: f64, x: f64) -> f64 {
    if x == 0.0 {
        return if mu == 0.0 { 1.0 } else { 0.0 };
    }
    let h = 0.5 * x;
    let mut term = (mu * h.ln() - statrs::function::gamma::ln_gamma(mu + 1.0)).exp();
    let mut sum = term;
    let q = -h * h;
    for k in 1..500 {
        let kf = k as f64;
        term *= q / (kf * (kf + mu));
        sum += term;
        if term.abs() < 1e-17 * sum.abs() && kf > h {
            break;
        }
    }
    sum
}

pub(crate) fn j_asymptotic(mu: f64, x: f64) -> f64 {
    let four_mu2 = 4.0 * mu * mu;
    let mut p = 1.0;
    let mut q = 0.0;
    let mut term = 1.0;
    let mut last = f64::INFINITY;
    for k in 1..200 {
        let kf = k as f64;
        term *= (four_mu2 - (2.0 * kf - 1.0).powi(2)) / (8.0 * kf * x);
        if term.abs() > last {
            break;
        }
        last = term.abs();
        match k % 4 {
            1 => q += term,
            2 => p -= term,
            3 => q -= term,
            _ => p += term,
        }
        if term.abs() < 1e-18 {
            break;
        }
    }
    // χ = x - (μ/2 + 1/4)π, with the reduction done on the rational multiple of π
    let shift = (0.5 * mu + 0.25) * PI;
    let (sx, cx) = x.sin_cos();
    let (ss, cs) = shift.sin_cos();
    let cos_chi = cx * cs + sx * ss;
    let sin_chi = sx * cs - cx * ss;
    (2.0 / (PI * x)).sqrt() * (p * cos_chi - q * sin_chi)
}

pub(crate) fn j_continued_fraction(nu: f64, x: f64) -> f64 {
    let nl = ((nu - x + 1.5).floor() as i64).max(0) as usize;
    let xmu = nu - nl as f64;
    let xmu2 = xmu * xmu;
    let xi = 1.0 / x;
    let xi2 = 2.0 * xi;
    let w = xi2 / PI;

    let mut isign = 1.0;
    let mut h = (nu * xi).max(FPMIN);
    let mut b = xi2 * nu;
    let mut d = 0.0;
    let mut c = h;
    for _ in 0..MAXIT {
        b += xi2;
        d = b - d;
        if d.abs() < FPMIN {
            d = FPMIN;
        }
        c = b - 1.0 / c;
        if c.abs() < FPMIN {
            c = FPMIN;
        }
        d = 1.0 / d;
        let del = c * d;
        h *= del;
        if d < 0.0 {
            isign = -isign;
        }
        if (del - 1.0).abs() <= EPS {
            break;
        }
    }
    let mut rjl = isign * FPMIN;
    let mut rjpl = h * rjl;
    let rjl1 = rjl;
    let mut fact = nu * xi;
    for _ in 0..nl {
        let t = fact * rjl + rjpl;
        fact -= xi;
        rjpl = fact * t - rjl;
        rjl = t;
    }
    if rjl == 0.0 {
        rjl = EPS;
    }
    let f = rjpl / rjl;

    let mut a = 0.25 - xmu2;
    let mut p = -0.5 * xi;
    let mut q = 1.0;
    let br = 2.0 * x;
    let mut bi = 2.0;
    let fact = a * xi / (p * p + q * q);
    let mut cr = br + q * fact;
    let mut ci = bi + p * fact;
    let den = br * br + bi * bi;
    let mut dr = br / den;
    let mut di = -bi / den;
    let mut dlr = cr * dr - ci * di;
    let mut dli = cr * di + ci * dr;
    let t = p * dlr - q * dli;
    q = p * dli + q * dlr;
    p = t;
    for i in 2..MAXIT {
        a += 2.0 * (i as f64 - 1.0);
        bi += 2.0;
        dr = a * dr + br;
        di = a * di + bi;
        if dr.abs() + di.abs() < FPMIN {
            dr = FPMIN;
        }
        let fact = a / (cr * cr + ci * ci);
        cr = br + cr * fact;
        ci = bi - ci * fact;
        if cr.abs() + ci.abs() < FPMIN {
            cr = FPMIN;
        }
        let den = dr * dr + di * di;
        dr /= den;
        di /= -den;
        dlr = cr * dr - ci * di;
        dli = cr * di + ci * dr;
        let t = p * dlr - q * dli;
        q = p * dli + q * dlr;
        p = t;
        if (dlr - 1.0).abs() + dli.abs() < EPS {
            break;
        }
    }
    let gam = (p - f) / q;
    let rjmu = (w / ((p - f) * gam + q)).sqrt().copysign(rjl);
    rjl1 * (rjmu / rjl)
}

/// `J_μ(x)` for `x ≥ 0`, `μ ≥ 0`.
pub(crate) fn j(mu: f64, x: f64) -> f64 {
    if x < TEMME_SWITCH {
        j_series(mu, x)
    } else if x < ASYMPTOTIC_SWITCH {
        j_continued_fraction(mu, x)
    } else {
        j_asymptotic(mu, x)
    }
}

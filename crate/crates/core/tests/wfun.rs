mod common;

use common::{i_series, k_scaled_trapezoid, rel_err};
use hyperpoisson::quad::Tolerance;
use hyperpoisson::wfun::{f_lambda, residue_at, residue_at_poly, w2_direct, w_boundary, QPolynomial, WEvaluator};
use hyperpoisson::zeros::find_zeros;
use hyperpoisson::{Error, Geometry};
use num_complex::Complex64;
use proptest::prelude::*;

const GEOMETRIES: [(f64, f64); 3] = [(1.0, 1.5), (1.0, 2.0), (0.5, 3.0)];

fn geo(n: u32, a: f64, x: f64) -> Geometry {
    Geometry::new(n, a, x).unwrap()
}

/// `e^z K_ν(z)` for half-integer ν from the terminating series.
fn k_half(nu: f64, z: f64) -> f64 {
    let m = (nu - 0.5).round() as i32;
    let mut term = 1.0;
    let mut sum = 1.0;
    for k in 0..m {
        term *= ((m + k + 1) * (m - k)) as f64 / ((k + 1) as f64 * 2.0 * z);
        sum += term;
    }
    (std::f64::consts::PI / (2.0 * z)).sqrt() * sum
}

/// `λ F_λ(z)` assembled from an independent scaled `K_ν`.
fn lambda_f_oracle(g: &Geometry, z: f64, k: impl Fn(f64, f64) -> f64) -> f64 {
    let n = g.n as f64;
    let (nu, s) = ((n - 1.0) / 2.0, n / 2.0 - 1.0);
    let xi = g.x / g.a;
    let q = z / g.a - s * (s + 1.0) * g.lambda() / (2.0 * g.a * g.x);
    (z / g.a) * xi.powf(nu) * k(nu, xi * z) / k(nu, z) - xi.powf(s) * q
}

#[test]
fn f_lambda_n4_example() {
    // m_1(z) = 2(1+z): λF(a) = [m_1(2) - 2 Q(1) m_1(1)] / m_1(1) with Q(1) = 1/2
    let g = geo(4, 1.0, 2.0);
    let want = (6.0 - 2.0 * 0.5 * 4.0) / 4.0;
    assert!((f_lambda(&g, 1.0).unwrap() - want).abs() < 1e-14);
    assert_eq!(QPolynomial::new(&g).unwrap().eval(1.0), 0.5);
}

#[test]
fn f_lambda_at_zero() {
    for n in 3..=10 {
        for (a, x) in GEOMETRIES {
            let g = geo(n, a, x);
            let s = n as f64 / 2.0 - 1.0;
            let want = s * (s + 1.0) * (x / a).powf(s) / (2.0 * x * a);
            assert!(rel_err(f_lambda(&g, 0.0).unwrap(), want) < 1e-14, "n={n}");
            // continuity into the limiting branch
            assert!(rel_err(f_lambda(&g, 1e-9).unwrap(), want) < 1e-6, "n={n}");
        }
    }
}

#[test]
fn f_lambda_against_independent_k() {
    for n in [3, 5, 7] {
        for (a, x) in GEOMETRIES {
            let g = geo(n, a, x);
            for z in [0.1, 0.5, 1.0, 3.0, 10.0] {
                let want = lambda_f_oracle(&g, z, k_scaled_trapezoid) / g.lambda();
                let got = f_lambda(&g, z).unwrap();
                assert!((got - want).abs() < 1e-11 * (1.0 + want.abs()), "n={n} z={z}: {got} vs {want}");
            }
        }
    }
}

#[test]
fn f_lambda_decays_like_inverse_z() {
    for n in 3..=8 {
        let g = geo(n, 1.0, 2.0);
        let zf: Vec<f64> = [50.0, 100.0, 200.0].iter().map(|&z| z * f_lambda(&g, z).unwrap()).collect();
        let (lo, hi) = zf.iter().fold((f64::INFINITY, 0f64), |(l, h), v| (l.min(v.abs()), h.max(v.abs())));
        assert!(hi / lo < 1.2, "n={n}: z F(z) = {zf:?}");
    }
}

#[test]
fn n4_residue_and_w() {
    for (a, x) in GEOMETRIES {
        let g = geo(4, a, x);
        let r = residue_at(&g, Complex64::new(-1.0, 0.0)).unwrap();
        assert!((r - Complex64::new(1.0 / (a * a), 0.0)).norm() < 1e-13 / (a * a));
        let e = WEvaluator::new(&g).unwrap();
        for v in [0.0, 0.3, 1.0, 4.0, 20.0] {
            let want = (-v as f64).exp() / (a * a);
            assert!((e.w(v).unwrap() - want).abs() < 1e-14 / (a * a), "v={v}");
        }
    }
}

#[test]
fn n6_residue_and_w() {
    let z1 = Complex64::new(-1.5, 3f64.sqrt() / 2.0);
    for x in [1.1, 1.5, 2.0, 4.0] {
        let g = geo(6, 1.0, x);
        let lam = g.lambda();
        let want = Complex64::new(2.0 * lam + 1.0, -(3f64.sqrt())) * 1.5;
        assert!((residue_at(&g, z1).unwrap() - want).norm() < 1e-12 * want.norm(), "x={x}");
        let e = WEvaluator::new(&g).unwrap();
        for v in [0.0, 0.5, 1.0, 3.0, 10.0] {
            let h = 3f64.sqrt() * v / 2.0;
            let want = 3.0 * (-1.5 * v).exp() * ((2.0 * lam + 1.0) * h.cos() + 3f64.sqrt() * h.sin());
            assert!((e.w1(v).unwrap() - want).abs() < 1e-12 * (1.0 + want.abs()), "x={x} v={v}");
        }
    }
}

#[test]
fn residues_tend_to_squared_zeros() {
    for n in 4..=9 {
        let a = 0.8;
        let g = geo(n, a, a * (1.0 + 1e-7));
        for &z in &find_zeros(n).unwrap().zeros {
            let r = residue_at(&g, z).unwrap();
            let want = (z / a).powi(2);
            assert!((r - want).norm() < 1e-5 * want.norm(), "n={n} z={z}: {r} vs {want}");
        }
    }
}

#[test]
fn polynomial_residues_match() {
    for n in [4, 6, 8, 10, 12] {
        for (a, x) in GEOMETRIES {
            let g = geo(n, a, x);
            for &z in &find_zeros(n).unwrap().zeros {
                let r1 = residue_at(&g, z).unwrap();
                let r2 = residue_at_poly(&g, z).unwrap();
                assert!((r1 - r2).norm() < 1e-12 * r1.norm(), "n={n} z={z}");
            }
        }
    }
    assert!(residue_at_poly(&geo(5, 1.0, 2.0), Complex64::new(-1.0, 0.5)).is_err());
}

#[test]
fn n3_has_no_residue_part() {
    let e = WEvaluator::new(&geo(3, 1.0, 2.0)).unwrap();
    assert!(e.residues().is_empty());
    for v in [0.0, 1.0, 5.0] {
        assert_eq!(e.w1(v).unwrap(), 0.0);
        assert_eq!(e.w(v).unwrap(), e.w2(v).unwrap());
    }
}

#[test]
fn w2_rejects_even_dimensions() {
    let e = WEvaluator::new(&geo(4, 1.0, 2.0)).unwrap();
    assert!(e.w2(1.0).is_err());
    assert!(w2_direct(&geo(6, 1.0, 2.0), 1.0, Tolerance::rel(1e-10)).is_err());
}

#[test]
fn w2_sign() {
    for n in [3, 5, 7, 9] {
        let nu = (n - 1) / 2;
        let sign = if nu % 2 == 1 { 1.0 } else { -1.0 };
        for (a, x) in GEOMETRIES {
            let e = WEvaluator::new(&geo(n, a, x)).unwrap();
            for k in -12..=12 {
                let v = 2f64.powi(k);
                assert!(sign * e.w2(v).unwrap() >= 0.0, "n={n} v={v}");
            }
        }
    }
}

/// `w₂` from unscaled series `I` and trapezoid `K` with composite Simpson on `[0, 80/(v+1)]`.
fn w2_oracle(g: &Geometry, v: f64) -> f64 {
    let n = g.n as f64;
    let nu = (n - 1.0) / 2.0;
    let xi = g.x / g.a;
    let lam = g.lambda();
    let k = |z: f64| k_scaled_trapezoid(nu, z) * (-z).exp();
    let f = |u: f64| {
        if u == 0.0 {
            return 0.0;
        }
        let num = i_series(nu, xi * u) * k(u) - i_series(nu, u) * k(xi * u);
        let den = k(u).powi(2) + std::f64::consts::PI.powi(2) * i_series(nu, u).powi(2);
        u * num / den * (-(lam / g.a + v) * u).exp()
    };
    let m = 4000;
    let top = 80.0 / (v + 1.0);
    let h = top / m as f64;
    let mut sum = f(0.0) + f(top);
    for i in 1..m {
        sum += f(i as f64 * h) * if i % 2 == 1 { 4.0 } else { 2.0 };
    }
    let sign = if ((nu as i64) + 1) % 2 == 0 { 1.0 } else { -1.0 };
    sign * xi.powf(nu) / (lam * g.a) * sum * h / 3.0
}

#[test]
fn w2_matches_independent_quadrature() {
    for n in [3, 5] {
        let g = geo(n, 1.0, 1.5);
        let e = WEvaluator::new(&g).unwrap();
        for v in [0.5, 2.0, 10.0] {
            let want = w2_oracle(&g, v);
            assert!(rel_err(e.w2(v).unwrap(), want) < 1e-7, "n={n} v={v}: {} vs {want}", e.w2(v).unwrap());
        }
    }
}

#[test]
fn w2_table_matches_adaptive() {
    for n in [3, 5, 7] {
        for (a, x) in GEOMETRIES {
            let g = geo(n, a, x);
            let e = WEvaluator::new(&g).unwrap();
            for v in [0.0, 1e-3, 0.1, 1.0, 7.0, 50.0] {
                let want = w2_direct(&g, v, Tolerance::rel(1e-12)).unwrap();
                assert!(rel_err(e.w2(v).unwrap(), want) < 1e-10, "n={n} v={v}");
            }
        }
    }
}

#[test]
fn n3_tail_constant() {
    // v^{n+1} w₂(v) → (-1)^{ν+1} n! / (2^{n-2} Γ(ν) Γ(ν+1)) · (ξ^{n-1} - 1)/(λa)
    let g = geo(3, 1.0, 1.5);
    let e = WEvaluator::new(&g).unwrap();
    let want = 6.0 / 2.0 * (1.5f64.powi(2) - 1.0) / g.lambda();
    let at = |v: f64| v.powi(4) * e.w2(v).unwrap();
    assert!(rel_err(at(100.0), want) < 0.03, "{} vs {want}", at(100.0));
    assert!(rel_err(at(100.0), want) < rel_err(at(50.0), want));
    assert!(rel_err(at(1e4), want) < 1e-3);
}

#[test]
fn w2_majorant_exponent() {
    // on [5, 100] the algebraic part dominates; the local exponent approaches -(2ν+2)
    for n in [3, 5] {
        let e = WEvaluator::new(&geo(n, 1.0, 2.0)).unwrap();
        let slope = ((e.w2(100.0).unwrap() / e.w2(50.0).unwrap()).abs()).ln() / 2f64.ln();
        let want = -(n as f64 + 1.0);
        assert!(rel_err(slope, want) < 0.05, "n={n}: {slope}");
        for v in [5.0, 10.0, 20.0, 50.0, 100.0] {
            let c1 = e.w2(v).unwrap().abs() * v.powf(n as f64 + 1.0);
            assert!(c1 < 1e3, "n={n} v={v}: {c1}");
        }
    }
}

#[test]
fn boundary_weight() {
    for v in [0.0, 0.5, 2.0] {
        assert!((w_boundary(2.0, 4, v).unwrap() - (-v as f64).exp() / 4.0).abs() < 1e-15);
        let z1 = Complex64::new(-1.5, 3f64.sqrt() / 2.0);
        let want = 2.0 * (z1 * z1 * (z1 * v).exp()).re;
        assert!((w_boundary(1.0, 6, v).unwrap() - want).abs() < 1e-13, "v={v}");
    }
    // odd n: the fixed-λ weight approaches the boundary weight
    for n in [3, 5] {
        let e = WEvaluator::new(&geo(n, 1.0, 1.0 + 1e-6)).unwrap();
        for v in [0.1, 1.0, 5.0] {
            let want = w_boundary(1.0, n, v).unwrap();
            assert!(rel_err(e.w(v).unwrap(), want) < 1e-4, "n={n} v={v}");
        }
    }
}

#[test]
fn moment_identities() {
    for n in 3..=8 {
        for (a, x) in GEOMETRIES {
            let g = geo(n, a, x);
            let e = WEvaluator::new(&g).unwrap();
            let (s, xi, lam) = (n as f64 / 2.0 - 1.0, g.xi(), g.lambda());
            let m0 = e.moment(0).unwrap();
            assert!(rel_err(m0, s * (s + 1.0) * xi.powf(s) / (2.0 * x * a)) < 1e-7, "n={n} k=0");
            let m1 = e.moment(1).unwrap();
            assert!(rel_err(-lam * a * m1, 1.0 - xi.powf(s)) < 1e-7, "n={n} k=1");
            let m2 = e.moment(2).unwrap();
            assert!(rel_err(a * a / 2.0 * m2, 1.0) < 1e-7, "n={n} k=2");
        }
    }
}

#[test]
fn laplace_identity() {
    for n in 3..=8 {
        for (a, x) in GEOMETRIES {
            let g = geo(n, a, x);
            let e = WEvaluator::new(&g).unwrap();
            for z in [0.5, 1.0, 2.0, 5.0, 10.0] {
                let f = f_lambda(&g, z).unwrap();
                assert!((e.laplace(z).unwrap() - f).abs() <= 1e-7 * (1.0 + f.abs()), "n={n} z={z}");
            }
        }
    }
}

#[test]
fn high_odd_moments_diverge() {
    let e = WEvaluator::new(&geo(5, 1.0, 2.0)).unwrap();
    assert!(e.moment(4).is_ok());
    assert!(matches!(e.moment(5), Err(Error::Divergent(_))));
    // even n: every moment exists
    assert!(WEvaluator::new(&geo(6, 1.0, 2.0)).unwrap().moment(9).is_ok());
}

#[test]
fn bounded_uniformly_in_lambda() {
    let vs: Vec<f64> = (0..60).map(|i| 0.25 * i as f64).collect();
    for n in [5, 6] {
        let sups: Vec<f64> = [1.0, 0.1, 0.01, 0.001]
            .iter()
            .map(|&lam| {
                let e = WEvaluator::new(&geo(n, 1.0, 1.0 + lam)).unwrap();
                vs.iter().map(|&v| e.w(v).unwrap().abs()).fold(0.0, f64::max)
            })
            .collect();
        assert!(sups.iter().all(|s| s.is_finite()));
        assert!(rel_err(sups[3], sups[2]) < 0.05, "n={n}: {sups:?}");
    }
}

#[test]
fn evaluator_is_shareable() {
    fn assert_send_sync<T: Send + Sync>() {}
    assert_send_sync::<WEvaluator>();
}

#[test]
fn rejects_negative_v() {
    let e = WEvaluator::new(&geo(5, 1.0, 2.0)).unwrap();
    assert!(e.w(-1.0).is_err());
    assert!(f_lambda(&geo(5, 1.0, 2.0), -1.0).is_err());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn even_f_lambda_matches_half_integer_k(n in prop::sample::select(vec![4u32, 6, 8]), a in 0.1f64..5.0, t in 0.01f64..4.0, z in 0.0f64..50.0) {
        let g = geo(n, a, a * (1.0 + t));
        let want = if z == 0.0 { f_lambda(&g, 0.0).unwrap() } else { lambda_f_oracle(&g, z, k_half) / g.lambda() };
        let got = f_lambda(&g, z).unwrap();
        prop_assert!((got - want).abs() <= 1e-11 * (1.0 + want.abs()));
    }

    #[test]
    fn n4_transform_is_rational(a in 0.1f64..5.0, t in 0.01f64..4.0, z in 0.0f64..50.0) {
        // w = a^{-2} e^{-v} has Laplace transform 1/(a²(1+z))
        let g = geo(4, a, a * (1.0 + t));
        let want = 1.0 / (a * a * (1.0 + z));
        // λF is a difference of two terms of size z/a
        prop_assert!((f_lambda(&g, z).unwrap() - want).abs() <= 1e-14 * (1.0 + z) / (a * a * t));
    }

    #[test]
    fn n6_weight_is_real_and_closed_form(t in 0.01f64..4.0, v in 0.0f64..30.0) {
        let g = geo(6, 1.0, 1.0 + t);
        let h = 3f64.sqrt() * v / 2.0;
        let want = 3.0 * (-1.5 * v).exp() * ((2.0 * t + 1.0) * h.cos() + 3f64.sqrt() * h.sin());
        prop_assert!((WEvaluator::new(&g).unwrap().w(v).unwrap() - want).abs() <= 1e-12 * (1.0 + t));
    }
}

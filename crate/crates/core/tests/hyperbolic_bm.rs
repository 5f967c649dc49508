use hyperpoisson::hyperbolic_bm::{
    char_fn_from, free_log_height, mc_char_fn, mc_limit_law, mc_radial_density, radial_density_from, shell_volume,
    simulate_exit, simulate_exits, McConfig, McEstimate,
};
use hyperpoisson::kernel::{fourier_transform, sphere_area, PoissonKernel};
use hyperpoisson::quad::{integrate, Tolerance};
use hyperpoisson::Geometry;
use proptest::prelude::*;

fn geo(n: u32, a: f64, x: f64) -> Geometry {
    Geometry::new(n, a, x).unwrap()
}

fn cfg(n: u32, a: f64, x: f64, paths: usize, seed: u64) -> McConfig {
    McConfig::new(geo(n, a, x), paths, seed).with_dt(1e-3)
}

fn median(mut v: Vec<f64>) -> f64 {
    v.sort_by(f64::total_cmp);
    v[v.len() / 2]
}

#[test]
fn same_seed_same_samples() {
    let c = cfg(4, 1.0, 2.0, 300, 11);
    let s1 = simulate_exits(&c).unwrap();
    let s2 = simulate_exits(&c).unwrap();
    assert_eq!(s1, s2);
    let s3 = simulate_exits(&McConfig { seed: 12, ..c }).unwrap();
    assert_ne!(s1, s3);
    // path i depends only on (seed, i)
    assert_eq!(simulate_exit(&c, 123).unwrap(), s1[123]);
}

#[test]
fn thread_count_does_not_change_results() {
    let c = cfg(3, 1.0, 1.5, 400, 5);
    let run = |threads| {
        rayon::ThreadPoolBuilder::new().num_threads(threads).build().unwrap().install(|| simulate_exits(&c).unwrap())
    };
    let one = run(1);
    let three = run(3);
    assert_eq!(one, three);
    assert_eq!(char_fn_from(&one, 1.0), char_fn_from(&three, 1.0));
}

#[test]
fn free_height_drift_and_variance() {
    for n in [3u32, 5] {
        let c = cfg(n, 1.0, 2.0, 1, 3);
        let (steps, m) = (100u64, 4000);
        let t = steps as f64 * c.dt;
        let vals: Vec<f64> = (0..m).map(|i| free_log_height(&c, steps, i)).collect();
        let est = McEstimate::from_values(&vals);
        let drift = -((n - 1) as f64) * t;
        assert!(est.z_score(drift).abs() < 3.0, "n={n}: {est:?} vs {drift}");
        let var = vals.iter().map(|v| (v - est.value).powi(2)).sum::<f64>() / (m - 1) as f64;
        // the sample variance of m Gaussians has relative sd √(2/(m-1))
        assert!(((var - 2.0 * t) / (2.0 * t)).abs() < 3.0 * (2.0 / (m - 1) as f64).sqrt(), "n={n}: {var}");
    }
}

#[test]
fn exit_offsets_are_conditionally_gaussian() {
    let samples = simulate_exits(&cfg(4, 1.0, 2.0, 20_000, 21)).unwrap();
    let mut by_a: Vec<_> = samples.iter().collect();
    by_a.sort_by(|p, q| p.a_func.total_cmp(&q.a_func));
    for chunk in by_a.chunks(4000) {
        let mean_a = chunk.iter().map(|s| s.a_func).sum::<f64>() / chunk.len() as f64;
        let sq: Vec<f64> = chunk.iter().flat_map(|s| s.y.iter().map(|y| y * y)).collect();
        let est = McEstimate::from_values(&sq);
        assert!(est.z_score(2.0 * mean_a).abs() < 3.0, "{est:?} vs {}", 2.0 * mean_a);
    }
    for s in &samples {
        assert_eq!(s.y.len(), 3);
        assert!(s.tau > 0.0 && s.a_func > 0.0);
    }
}

#[test]
fn zero_frequency_is_exact() {
    let e = mc_char_fn(&cfg(3, 1.0, 1.5, 10, 1), 0.0).unwrap();
    assert_eq!((e.value, e.std_err), (1.0, 0.0));
}

#[test]
fn char_fn_matches_bessel_ratio() {
    for (n, x) in [(3, 1.5), (4, 2.0)] {
        let c = cfg(n, 1.0, x, 20_000, 7);
        let samples = simulate_exits(&c).unwrap();
        for u in [0.5, 1.0, 2.0] {
            let est = char_fn_from(&samples, u);
            let want = fourier_transform(&c.geometry, u).unwrap();
            assert!(est.z_score(want).abs() < 3.0, "n={n} u={u}: {est:?} vs {want}");
        }
    }
}

#[test]
fn bridge_correction_reduces_bias() {
    let base = McConfig::new(geo(3, 1.0, 1.5), 20_000, 9).with_dt(1e-2);
    let want = fourier_transform(&base.geometry, 1.0).unwrap();
    let with = mc_char_fn(&base, 1.0).unwrap();
    let without = mc_char_fn(&base.with_bridge_correction(false), 1.0).unwrap();
    assert!(with.z_score(want).abs() < 3.0, "{with:?}");
    assert!(without.z_score(want).abs() > 2.0 * with.z_score(want).abs().max(1.0), "{without:?}");
    // without the correction exits are detected late, so A is biased upwards
    assert!(without.value < with.value);
}

#[test]
fn exit_directions_are_isotropic() {
    let samples = simulate_exits(&cfg(4, 1.0, 2.0, 8000, 17)).unwrap();
    let mut cells = [0usize; 8];
    for s in &samples {
        let k = s.y.iter().enumerate().fold(0, |acc, (i, &y)| acc | ((y > 0.0) as usize) << i);
        cells[k] += 1;
    }
    let expect = samples.len() as f64 / 8.0;
    let chi2: f64 = cells.iter().map(|&c| (c as f64 - expect).powi(2) / expect).sum();
    // 7 degrees of freedom, p = 0.001
    assert!(chi2 < 24.32, "{cells:?} chi2={chi2}");
}

#[test]
fn histogram_matches_kernel() {
    let g = geo(4, 1.0, 2.0);
    let k = PoissonKernel::new(g).unwrap();
    let edges: Vec<f64> = (0..=20).map(|i| 0.3 * i as f64).collect();
    let est = mc_radial_density(&McConfig::new(g, 20_000, 3).with_dt(1e-3), &edges).unwrap();
    for (e, w) in est.iter().zip(edges.windows(2)) {
        let mass =
            integrate(|r: f64| k.closed(r).unwrap().value * sphere_area(4) * r * r, w[0], w[1], Tolerance::rel(1e-10))
                .value;
        let want = mass / shell_volume(4, w[0], w[1]);
        assert!(e.z_score(want).abs() < 3.0, "bin [{}, {}): {e:?} vs {want}", w[0], w[1]);
    }
}

#[test]
fn bin_probabilities_and_tail_sum_to_one() {
    let samples = simulate_exits(&cfg(3, 1.0, 1.5, 2000, 4)).unwrap();
    let edges = [0.0, 0.5, 1.0, 2.0, 3.0];
    let est = radial_density_from(&samples, 3, &edges).unwrap();
    let inside: f64 = est.iter().zip(edges.windows(2)).map(|(e, w)| e.value * shell_volume(3, w[0], w[1])).sum();
    let tail = samples.iter().filter(|s| s.radius() >= 3.0).count() as f64 / samples.len() as f64;
    assert!((inside + tail - 1.0).abs() < 1e-12);
}

#[test]
fn empty_bins_get_an_upper_bound() {
    let samples = simulate_exits(&cfg(3, 1.0, 1.5, 500, 4)).unwrap();
    let est = radial_density_from(&samples, 3, &[100.0, 101.0]).unwrap();
    assert_eq!(est[0].value, 0.0);
    assert!((est[0].std_err * shell_volume(3, 100.0, 101.0) - 3.0 / 500.0).abs() < 1e-15);
}

#[test]
fn small_a_histogram_matches_whole_space_kernel() {
    let edges: Vec<f64> = (0..=15).map(|i| 0.2 * i as f64).collect();
    let bins = mc_limit_law(&cfg(3, 0.01, 1.0, 20_000, 2), &edges).unwrap();
    for b in &bins {
        assert!(b.z_score().abs() < 3.0, "{b:?}");
    }
}

#[test]
fn limit_law_trend() {
    // x = 2 so that a = 0.2 still satisfies a <= x/10
    let edges: Vec<f64> = (0..=15).map(|i| 0.4 * i as f64).collect();
    let sup = |a: f64| {
        mc_limit_law(&cfg(3, a, 2.0, 20_000, 2), &edges)
            .unwrap()
            .iter()
            .map(|b| (b.estimate.value - b.reference).abs())
            .fold(0.0, f64::max)
    };
    let s: Vec<f64> = [0.2, 0.1, 0.05].iter().map(|&a| sup(a)).collect();
    assert!(s[0] > s[1] && s[1] > s[2], "{s:?}");
}

#[test]
fn exit_time_grows_as_boundary_recedes() {
    let med: Vec<f64> = [0.2, 0.1, 0.05]
        .iter()
        .map(|&a| median(simulate_exits(&cfg(3, a, 1.0, 2000, 8)).unwrap().iter().map(|s| s.tau).collect()))
        .collect();
    assert!(med[0] < med[1] && med[1] < med[2], "{med:?}");
}

#[test]
fn invalid_configurations() {
    let g = geo(3, 1.0, 1.5);
    assert!(simulate_exits(&McConfig::new(g, 0, 1)).is_err());
    assert!(simulate_exits(&McConfig::new(g, 10, 1).with_dt(0.0)).is_err());
    assert!(mc_char_fn(&McConfig::new(g, 10, 1), -1.0).is_err());
    assert!(mc_radial_density(&McConfig::new(g, 10, 1), &[1.0, 0.5]).is_err());
    assert!(mc_limit_law(&McConfig::new(geo(3, 0.2, 1.0), 10, 1), &[0.0, 1.0]).is_err());
}

#[test]
fn estimate_statistics() {
    let e = McEstimate::from_values(&[1.0, 2.0, 3.0, 4.0]);
    assert_eq!(e.value, 2.5);
    assert!((e.std_err - (5.0f64 / 3.0 / 4.0).sqrt()).abs() < 1e-15);
    assert_eq!(e.n_effective, 4);
    assert!((e.z_score(2.0) - 0.5 / e.std_err).abs() < 1e-15);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn samples_are_well_formed(n in 2u32..8, a in 0.2f64..2.0, t in 0.05f64..1.0, seed in any::<u64>(), stream in 0u64..1000) {
        let c = McConfig::new(geo(n, a, a * (1.0 + t)), 1, seed).with_dt(1e-3);
        let s = simulate_exit(&c, stream).unwrap();
        prop_assert_eq!(s.y.len(), n as usize - 1);
        prop_assert!(s.tau > 0.0 && s.a_func > 0.0);
        prop_assert!(s.a_func.is_finite());
    }

    #[test]
    fn shell_volumes_add_up(n in 2u32..9, lo in 0.0f64..3.0, d1 in 0.01f64..2.0, d2 in 0.01f64..2.0) {
        let (m, hi) = (lo + d1, lo + d1 + d2);
        let sum = shell_volume(n, lo, m) + shell_volume(n, m, hi);
        prop_assert!((sum - shell_volume(n, lo, hi)).abs() <= 1e-12 * sum);
    }
}

use emfcov::antenna::*;
use proptest::prelude::*;
use std::f64::consts::{FRAC_PI_3, PI};

fn pat(kind: PatternKind, n: usize, g: Option<f64>, k: usize) -> AntennaPattern {
    AntennaPattern::new(kind, n, g, k).unwrap()
}

/// Golden-section refinement of a grid maximum of the array gain on `[a, b]`.
fn ula_extremum(n: usize, a: f64, b: f64) -> (f64, f64) {
    let f = |x: f64| ula_gain(n, x);
    let steps = 2000;
    let h = (b - a) / steps as f64;
    let i = (0..=steps).max_by(|&i, &j| f(a + i as f64 * h).total_cmp(&f(a + j as f64 * h))).unwrap();
    let (mut lo, mut hi) = ((a + (i as f64 - 1.0) * h).max(a), (a + (i as f64 + 1.0) * h).min(b));
    let r = (5f64.sqrt() - 1.0) / 2.0;
    while hi - lo > 1e-13 {
        let (c, d) = (hi - r * (hi - lo), lo + r * (hi - lo));
        if f(c) > f(d) {
            hi = d;
        } else {
            lo = c;
        }
    }
    let x = 0.5 * (lo + hi);
    (x, f(x))
}

#[test]
fn ula_boresight_is_unity() {
    assert_eq!(pat(PatternKind::TheoreticalUla, 64, None, 0).gain(0.0).unwrap(), 1.0);
}

#[test]
fn truncated_cos_vanishes_at_lobe_edge() {
    assert!(pat(PatternKind::TruncatedCos, 16, None, 0).gain(2.0 / 16.0).unwrap().abs() < 1e-30);
}

#[test]
fn gain_outside_sector_is_domain_error() {
    let p = pat(PatternKind::FlatTop, 16, None, 0);
    assert!(p.gain(FRAC_PI_3).is_err());
    assert!(p.gain(-FRAC_PI_3).is_ok());
}

#[test]
fn multicos_first_side_lobe_matches_array_extremum() {
    let n = 16;
    let t = side_lobe_table(n, 1).unwrap();
    let (_, chi_grid) = ula_extremum(n, (2.0 / n as f64).asin(), (4.0 / n as f64).asin());
    assert!((t.chi_k[1] - chi_grid).abs() < 1e-12, "{} vs {}", t.chi_k[1], chi_grid);
    let p = pat(PatternKind::MultiCos, n, None, 1);
    // Multi-cos lobe k peaks at (2k+1)/N with amplitude chi_k.
    assert!((p.gain(3.0 / n as f64).unwrap() - chi_grid).abs() < 1e-12);
}

#[test]
fn side_lobe_table_shape() {
    let t = side_lobe_table(16, 3).unwrap();
    assert_eq!((t.x_k[0], t.chi_k[0]), (0.0, 1.0));
    assert!(t.chi_k[3] < t.chi_k[2] && t.chi_k[2] < t.chi_k[1]);
    for k in 1..=3 {
        assert!(t.x_k[k] > t.x_k[k - 1]);
        assert!(t.x_k[k] > k as f64 * PI / 16.0 && t.x_k[k] < (k as f64 + 0.5) * PI / 16.0);
    }
    let t64 = side_lobe_table(64, 1).unwrap();
    assert!((t64.chi_k[1] - 0.047).abs() < 1e-3);
}

#[test]
fn side_lobe_table_rejects_large_kmax() {
    assert_eq!(max_k_max(16), 5);
    assert!(side_lobe_table(16, 6).is_err());
    assert!(side_lobe_table(16, 5).is_ok());
}

#[test]
fn half_power_angle_examples() {
    assert!((half_power_angle(2) - PI / 6.0).abs() < 1e-12);
    assert!((ula_gain(64, half_power_angle(64)) - 0.5).abs() < 1e-12);
    // Small-angle main lobe: sin(N x)/(N x) = 1/sqrt(2) at N x = 1.3916.
    assert!((half_power_angle(64) * 64.0 * PI / 2.0 - 1.391557).abs() < 2e-3);
    for n in [8usize, 16, 32, 64] {
        let ratio = half_power_angle(n) / half_power_angle(2 * n);
        assert!((ratio - 2.0).abs() < 0.04, "N={n}: {ratio}");
    }
}

#[test]
fn moment_examples() {
    let ft = pat(PatternKind::FlatTop, 16, Some(0.0), 0);
    assert!((gain_moment(&ft, 1).unwrap() - 3.0 * ft.phi_3db() / PI).abs() < 1e-15);
    let c = pat(PatternKind::TruncatedCos, 64, None, 0);
    assert!((gain_moment(&c, 1).unwrap() - 3.0 / (64.0 * PI)).abs() < 1e-15);
    assert!((gain_moment(&c, 1).unwrap() - 0.014920).abs() < 1e-6);
    let mc0 = pat(PatternKind::MultiCos, 64, None, 0);
    for k in 1..=4 {
        assert_eq!(gain_moment(&mc0, k).unwrap(), gain_moment(&c, k).unwrap());
    }
    let ula = pat(PatternKind::TheoreticalUla, 16, None, 0);
    assert!(gain_moment(&ula, 1).is_err());
    let q = gain_moment_quadrature(&ula, 1);
    assert!(q > 0.0 && q < 1.0);
    let ft1 = pat(PatternKind::FlatTop, 16, Some(0.1), 0);
    assert!((gain_moment_quadrature(&ft1, 2) - gain_moment(&ft1, 2).unwrap()).abs() < 1e-10);
}

#[test]
fn closed_form_moments_match_quadrature() {
    for n in [8usize, 16, 64] {
        let km = max_k_max(n).min(10);
        for kind in [PatternKind::FlatTop, PatternKind::TruncatedCos, PatternKind::Gaussian, PatternKind::MultiCos] {
            let p = pat(kind, n, None, km);
            for k in 1..=4 {
                let a = gain_moment(&p, k).unwrap();
                let b = gain_moment_quadrature(&p, k);
                assert!((a - b).abs() <= 1e-8, "{kind:?} N={n} k={k}: {a} vs {b}");
            }
        }
    }
}

#[test]
fn gaussian_array_peak_matches_unit_peak_scaling() {
    let unit = AntennaPattern::with_peak(PatternKind::Gaussian, 16, Some(0.02), 0, GaussianPeak::Unit).unwrap();
    let arr = AntennaPattern::with_peak(PatternKind::Gaussian, 16, Some(0.32), 0, GaussianPeak::Array).unwrap();
    for phi in [0.0, 0.05, 0.2, 0.9] {
        assert!((arr.gain(phi).unwrap() - 16.0 * unit.gain(phi).unwrap()).abs() < 1e-12);
    }
    assert!((unit.gain(unit.phi_3db()).unwrap() - 0.5).abs() < 1e-12);
    let a = gain_moment(&arr, 2).unwrap();
    assert!((a - gain_moment_quadrature(&arr, 2)).abs() < 1e-8 * 256.0);
}

#[test]
fn multicos_envelope_reaches_array_side_lobe_peaks() {
    for n in [8usize, 16, 64] {
        let km = max_k_max(n).min(10);
        let p = pat(PatternKind::MultiCos, n, None, km);
        let t = side_lobe_table(n, km).unwrap();
        for k in 1..=km {
            // Multi-cos lobe maximum sits at (2k+1)/N and equals the array's k-th peak.
            let lobe_max = p.gain((2 * k + 1) as f64 / n as f64).unwrap();
            assert!(lobe_max >= ula_gain(n, t.peak_angle(k)) - 1e-14, "N={n} k={k}");
        }
        assert_eq!(p.gain(((2 * km + 2) as f64 + 0.5) / n as f64).unwrap(), 0.0);
    }
}

fn any_kind() -> impl Strategy<Value = PatternKind> {
    prop::sample::select(PatternKind::ALL.to_vec())
}

proptest! {
    #[test]
    fn gain_is_even_and_bounded(kind in any_kind(), n in 4usize..80, phi in 0.0..FRAC_PI_3) {
        let p = pat(kind, n, None, max_k_max(n).min(10));
        let (a, b) = (p.gain(phi).unwrap(), p.gain(-phi).unwrap());
        prop_assert!((a - b).abs() <= 1e-15);
        prop_assert!((0.0..=1.0).contains(&a));
        if kind == PatternKind::FlatTop {
            prop_assert!(a == 1.0 || a == p.side_lobe_g);
        }
    }

    #[test]
    fn moments_nonincreasing(kind in any_kind(), n in 4usize..80, k in 1usize..6) {
        let p = pat(kind, n, None, max_k_max(n).min(10));
        let m = |k| match kind {
            PatternKind::TheoreticalUla => gain_moment_quadrature(&p, k),
            _ => gain_moment(&p, k).unwrap(),
        };
        prop_assert!(m(k + 1) <= m(k) + 1e-12);
    }
}

use emfcov::antenna::gain_moment;
use emfcov::metrics::{Analysis, QuadratureSpec};
use emfcov::montecarlo::*;
use emfcov::network::*;
use emfcov::quad::adaptive_real;
use std::f64::consts::PI;

fn small(m: u32) -> NetworkConfig {
    ConfigFile { tau_m: 500.0, n_elements: 8, kmax: 2, m, ..Default::default() }.build().unwrap()
}

#[test]
fn nearest_bs_distance_follows_its_law() {
    let cfg = NetworkConfig::reference();
    let n = 10_000;
    let r0: Vec<f64> = (0..n as u64)
        .map(|i| {
            let real = sample_network(&cfg, 11, i);
            real.bs[real.serving_index].r
        })
        .collect();
    let ks = ks_statistic(&r0, |r| cfg.nearest_bs_cdf(r));
    assert!(ks < 1.63 / (n as f64).sqrt(), "KS {ks}");
}

#[test]
fn fading_moments_match_gamma_law() {
    for m in [1, 2, 3] {
        let cfg = small(m);
        let h: Vec<f64> = (0..2000u64).flat_map(|i| sample_network(&cfg, 3, i).bs).map(|b| b.fading_iu).collect();
        let n = h.len() as f64;
        let mean = h.iter().sum::<f64>() / n;
        let second = h.iter().map(|x| x * x).sum::<f64>() / n;
        let mf = m as f64;
        let var = 1.0 / mf;
        assert!((mean - 1.0).abs() < 4.0 * (var / n).sqrt(), "m={m} mean {mean}");
        let expect2 = (mf + 1.0) / mf;
        assert!((second - expect2).abs() < 0.05 * expect2, "m={m} E[h^2] {second}");
    }
}

#[test]
fn random_user_mean_matches_campbell() {
    let cfg = small(1);
    let s = simulate(&cfg, 20_000, 5);
    let v: Vec<f64> = s.iter().map(|x| x.emfe_ru).collect();
    let n = v.len() as f64;
    let mean = v.iter().sum::<f64>() / n;
    let sd = (v.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1.0)).sqrt();
    let radial = adaptive_real(|r| cfg.mean_power(r) * r, cfg.exclusion_radius, cfg.disk_radius, &[30.0, 100.0], 1e-12);
    // The draw conditions on at least one BS, which shifts the mean by
    // the empty-draw probability exp(-lambda pi (tau^2 - r_e^2)).
    let empty = (-PI * cfg.density * (cfg.disk_radius.powi(2) - cfg.exclusion_radius.powi(2))).exp();
    let expect = 2.0 * PI * cfg.density * radial * gain_moment(&cfg.pattern, 1).unwrap() / (1.0 - empty);
    assert!((mean - expect).abs() < 4.0 * sd / n.sqrt(), "{mean} vs {expect}");
}

#[test]
fn simulation_is_deterministic_per_seed_and_index() {
    let cfg = small(2);
    let a = simulate(&cfg, 300, 9);
    let b = simulate(&cfg, 300, 9);
    assert_eq!(a, b);
    let c = simulate(&cfg, 300, 10);
    assert_ne!(a, c);
    let longer = simulate(&cfg, 400, 9);
    assert_eq!(&longer[..300], &a[..]);
}

#[test]
fn empirical_cdf_rejects_small_runs_and_reports_intervals() {
    let cfg = small(1);
    let t = [dbm_to_w(-60.0)];
    assert!(empirical_cdf(&cfg, McMetric::EmfeCdf(UserKind::Idle), &t, 999, 1).is_err());
    assert!(empirical_joint(&cfg, 1.0, t[0], 9_999, 1).is_err());
    let r = empirical_cdf(&cfg, McMetric::EmfeCdf(UserKind::Idle), &t, 2000, 1).unwrap();
    assert_eq!(r.samples.len(), 2000);
    assert!(r.ci_lo[0] <= r.probabilities[0] && r.probabilities[0] <= r.ci_hi[0]);
    assert!(r.ci_halfwidth[0] > 0.0);
}

#[test]
fn snr_dominates_sinr_pathwise() {
    let s = simulate(&small(1), 2000, 4);
    assert!(s.iter().all(|x| x.snr_au >= x.sinr_au));
    assert!(s.iter().all(|x| x.signal_au > 0.0 && x.interference_iu >= 0.0));
}

#[test]
fn reduced_config_matches_analysis() {
    let cfg = small(2);
    let ts: Vec<f64> = [-70.0, -60.0, -50.0].iter().map(|&d| dbm_to_w(d)).collect();
    let s = simulate(&cfg, 20_000, 21);
    // Few interferers make the remainder CF decay slowly; MC-level
    // accuracy only needs a loose cutoff.
    let quad = QuadratureSpec { eps_q: 1e-6, ..Default::default() };
    let an = Analysis::new(&cfg, &quad).unwrap();
    for user in [UserKind::Active, UserKind::Idle, UserKind::Random] {
        let mc = empirical_from_samples(McMetric::EmfeCdf(user), &s, &ts, 21);
        let exact = an.emfe_cdfs(user, &ts).unwrap();
        for ((p, se), e) in mc.probabilities.iter().zip(mc.std_error()).zip(&exact) {
            assert!((p - e).abs() < 4.0 * se + 2e-3, "{user:?}: {p} vs {e}");
        }
    }
}

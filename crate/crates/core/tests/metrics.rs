use emfcov::charfun::CharFn;
use emfcov::metrics::*;
use emfcov::network::*;
use emfcov::{ComplexScalar as C, Result};
use std::sync::OnceLock;

fn reference() -> &'static Analysis {
    static AN: OnceLock<Analysis> = OnceLock::new();
    AN.get_or_init(|| Analysis::new(&NetworkConfig::reference(), &QuadratureSpec::default()).unwrap())
}

fn dbm(v: &[f64]) -> Vec<f64> {
    v.iter().map(|&d| dbm_to_w(d)).collect()
}

fn db(v: &[f64]) -> Vec<f64> {
    v.iter().map(|&d| db_to_lin(d)).collect()
}

struct UnitGamma(u32);

impl CharFn for UnitGamma {
    fn eval(&self, q: f64) -> Result<C> {
        let m = self.0 as f64;
        Ok(C::new(1.0, -q / m).inv().powu(self.0))
    }
    fn scale(&self) -> f64 {
        1.0
    }
}

/// `P[Gamma(m, 1/m) < t] = 1 - exp(-mt) sum_{k<m} (mt)^k / k!`.
fn unit_gamma_cdf(m: u32, t: f64) -> f64 {
    let x = m as f64 * t;
    let mut term = 1.0;
    let mut sum = 1.0;
    for k in 1..m {
        term *= x / k as f64;
        sum += term;
    }
    1.0 - (-x).exp() * sum
}

#[test]
fn inversion_recovers_unit_gamma_cdf() {
    let quad = QuadratureSpec::default();
    for m in 1..=3 {
        let ts = [0.01, 0.1, 0.5, 1.0, 2.0, 5.0];
        let got = gil_pelaez_cdfs(&UnitGamma(m), &ts, &quad).unwrap();
        for (t, g) in ts.iter().zip(got) {
            let e = unit_gamma_cdf(m, *t);
            assert!((g - e).abs() <= 1e-7, "m={m} t={t}: {g} vs {e}");
        }
    }
}

#[test]
fn emfe_cdf_reaches_its_limits() {
    let an = reference();
    for user in [UserKind::Active, UserKind::Idle, UserKind::Random] {
        let v = an.emfe_cdfs(user, &dbm(&[-160.0, 20.0])).unwrap();
        assert!(v[0] < 1e-6, "{user:?} low {}", v[0]);
        assert!(v[1] > 1.0 - 1e-6, "{user:?} high {}", v[1]);
    }
    assert!(an.emfe_cdfs(UserKind::Idle, &[0.0]).is_err());
}

#[test]
fn total_exposure_is_dominated_by_each_part_and_monotone() {
    let an = reference();
    let ts = dbm(&[-90.0, -80.0, -70.0, -60.0, -50.0, -40.0]);
    for user in [UserKind::Active, UserKind::Idle] {
        let total = an.emfe_cdfs(user, &ts).unwrap();
        let (s, i) = an.signal_and_interference(user, &ts).unwrap();
        for k in 0..ts.len() {
            assert!(total[k] <= s.values[k] + 1e-9, "{user:?} signal k={k}");
            assert!(total[k] <= i.values[k] + 1e-9, "{user:?} interference k={k}");
            if k > 0 {
                assert!(total[k] >= total[k - 1] - 1e-12);
            }
        }
    }
}

#[test]
fn active_user_exposure_dominates_random_user() {
    let an = reference();
    let ts = dbm(&[-80.0, -70.0, -60.0, -50.0]);
    let au = an.emfe_cdfs(UserKind::Active, &ts).unwrap();
    let ru = an.emfe_cdfs(UserKind::Random, &ts).unwrap();
    for (a, r) in au.iter().zip(&ru) {
        assert!(a <= r, "{a} > {r}");
    }
}

#[test]
fn coverage_is_monotone_with_snr_above_sinr() {
    let an = reference();
    let tcs = db(&[-20.0, -10.0, 0.0, 10.0, 20.0, 40.0]);
    let sinr = an.coverage_ccdfs(&tcs, true).unwrap();
    let snr = an.coverage_ccdfs(&tcs, false).unwrap();
    for k in 0..tcs.len() {
        assert!(snr[k] >= sinr[k] - 1e-9, "k={k}");
        if k > 0 {
            assert!(sinr[k] <= sinr[k - 1] + 1e-12);
        }
    }
    let edge = an.coverage_ccdfs(&db(&[-60.0, 120.0]), true).unwrap();
    assert!(edge[0] > 1.0 - 1e-4 && edge[1] < 1e-4, "{edge:?}");
}

#[test]
fn scaiu_identity_and_frechet_sandwich() {
    let an = reference();
    let tcs = db(&[-5.0, 5.0, 15.0]);
    let tes = dbm(&[-75.0, -65.0, -55.0]);
    for row in an.scaiu_grid(&tcs, &tes).unwrap() {
        for p in row {
            assert!((p.scaiu - p.conditional * p.f_cov).abs() <= 1e-12);
            assert!(p.scaiu >= p.frechet_lb - 1e-3 && p.scaiu <= p.frechet_ub + 1e-3, "{p:?}");
            assert!((0.0..=1.0).contains(&p.conditional));
        }
    }
}

#[test]
fn scaiu_reduces_to_marginals_in_the_limits() {
    let an = reference();
    let tc = db(&[5.0]);
    let te = dbm(&[-65.0]);
    let cov = an.coverage_ccdfs(&tc, true).unwrap()[0];
    let emfe = an.emfe_cdfs(UserKind::Idle, &te).unwrap()[0];
    let loose = an.scaiu_grid(&tc, &dbm(&[30.0])).unwrap()[0][0];
    assert!((loose.scaiu - cov).abs() < 1e-5, "{} vs {cov}", loose.scaiu);
    let open = an.scaiu_grid(&db(&[-80.0]), &te).unwrap()[0][0];
    assert!((open.scaiu - emfe).abs() < 1e-5, "{} vs {emfe}", open.scaiu);
}

#[test]
fn scaiu_free_functions_agree_and_guard_division() {
    let cfg = NetworkConfig::reference();
    let quad = QuadratureSpec::default();
    let (tc, te) = (db_to_lin(0.0), dbm_to_w(-60.0));
    let p = reference().scaiu_grid(&[tc], &[te]).unwrap()[0][0];
    assert!((scaiu(&cfg, tc, te, &quad).unwrap() - p.scaiu).abs() < 1e-12);
    let (lb, ub) = frechet_bounds(&cfg, tc, te, &quad).unwrap();
    assert!((lb - p.frechet_lb).abs() < 1e-12 && (ub - p.frechet_ub).abs() < 1e-12);
    assert!(scaiu_conditional(&cfg, db_to_lin(150.0), te, &quad).is_err());
}

#[test]
fn refinement_leaves_results_stable() {
    let cfg = NetworkConfig::reference();
    let coarse = reference();
    let fine = Analysis::new(&cfg, &QuadratureSpec::default().refined()).unwrap();
    let ts = dbm(&[-75.0, -60.0, -45.0]);
    let tcs = db(&[0.0, 10.0]);
    let a = coarse.emfe_cdfs(UserKind::Idle, &ts).unwrap();
    let b = fine.emfe_cdfs(UserKind::Idle, &ts).unwrap();
    let c = coarse.coverage_ccdfs(&tcs, true).unwrap();
    let d = fine.coverage_ccdfs(&tcs, true).unwrap();
    for (x, y) in a.iter().chain(&c).zip(b.iter().chain(&d)) {
        assert!((x - y).abs() < 5e-4, "{x} vs {y}");
    }
}

#[test]
fn curves_carry_metadata() {
    let an = reference();
    let ts = dbm(&[-70.0, -60.0]);
    let c = an.emfe_curve(UserKind::Idle, &ts).unwrap();
    assert_eq!(c.metric, MetricKind::EmfeCdf);
    assert_eq!(c.config_hash, an.config_hash());
    assert_eq!(c.values.len(), 2);
    assert_eq!(c.sup_distance(&c.values), 0.0);
}

//! Oracle-equivalence suites behind `emfcov validate`.

use crate::commands::{Context, McRequest};
use crate::CliError;
use emfcov::antenna::{gain_moment, gain_moment_quadrature, max_k_max, AntennaPattern, PatternKind};
use emfcov::charfun::{cf_interference, cf_interference_oracle, cf_signal_iu, cf_signal_iu_oracle, CharFn};
use emfcov::metrics::gil_pelaez_cdfs;
use emfcov::montecarlo::{empirical_from_samples, simulate, McMetric};
use emfcov::network::{db_to_lin, dbm_to_w, iu_geometry, ConfigFile, UserKind};
use emfcov::ComplexScalar as C;

const CLOSED: [PatternKind; 4] = [PatternKind::FlatTop, PatternKind::TruncatedCos, PatternKind::Gaussian, PatternKind::MultiCos];

/// One checked quantity of a suite.
#[derive(Debug, Clone)]
pub struct Check {
    pub name: String,
    /// `max_deviation` (upper bound) or `fraction_within_band` (lower bound).
    pub statistic: &'static str,
    pub value: f64,
    pub tolerance: f64,
    pub passed: bool,
}

impl Check {
    fn max_dev(name: impl Into<String>, value: f64, tolerance: f64) -> Self {
        Self { name: name.into(), statistic: "max_deviation", value, tolerance, passed: value <= tolerance }
    }

    pub fn line(&self, suite: &str) -> String {
        let status = if self.passed { "PASS" } else { "FAIL" };
        format!(
            "suite={suite} check={} {}={:e} tolerance={:e} status={status}",
            self.name, self.statistic, self.value, self.tolerance
        )
    }
}

pub fn moments(ctx: &Context) -> Result<Vec<Check>, CliError> {
    let mut out = Vec::new();
    for kind in CLOSED {
        let mut worst = 0.0f64;
        let mut ns = vec![ctx.file.n_elements, 8, 16, 64];
        ns.dedup();
        for n in ns {
            let p = AntennaPattern::new(kind, n, ctx.file.side_lobe_g, max_k_max(n).min(ctx.file.kmax))?;
            for k in 1..=4 {
                worst = worst.max((gain_moment(&p, k)? - gain_moment_quadrature(&p, k)).abs());
            }
        }
        out.push(Check::max_dev(format!("moments_{}", kind.name()), worst, 1e-8));
    }
    Ok(out)
}

pub fn cf(ctx: &Context) -> Result<Vec<Check>, CliError> {
    let mut out = Vec::new();
    for kind in CLOSED {
        let cfg = ConfigFile { pattern: kind, ..ctx.file.clone() }.build()?;
        let m = cfg.nakagami_m as f64;
        let top = if kind == PatternKind::Gaussian { 0.8f64.log10() } else { 4.0 };
        let (mut wi, mut ws) = (0.0f64, 0.0f64);
        // The signal pairs put the idle user outside (r0 = 5 m) and inside
        // (r0 = 150 m) the serving sector.
        for (ri, rs) in [(20.0, 5.0), (150.0, 150.0)] {
            let theta = std::f64::consts::FRAC_PI_2;
            let (w, _) = iu_geometry(rs, theta, cfg.separation)?;
            for k in 0..50 {
                let y = 10f64.powf(-3.0 + (top + 3.0) * k as f64 / 49.0);
                let q = y * m / cfg.mean_power(ri);
                wi = wi.max((cf_interference(&cfg, q, ri)? - cf_interference_oracle(&cfg, q, ri)?).norm());
                let q = y * m / cfg.mean_power(w);
                ws = ws.max((cf_signal_iu(&cfg, q, rs, theta)? - cf_signal_iu_oracle(&cfg, q, rs, theta)?).norm());
            }
        }
        out.push(Check::max_dev(format!("cf_interference_{}", kind.name()), wi, 1e-5));
        out.push(Check::max_dev(format!("cf_signal_iu_{}", kind.name()), ws, 1e-5));
    }
    Ok(out)
}

struct UnitGamma(u32);

impl CharFn for UnitGamma {
    fn eval(&self, q: f64) -> emfcov::Result<C> {
        Ok(C::new(1.0, -q / self.0 as f64).inv().powu(self.0))
    }
    fn scale(&self) -> f64 {
        1.0
    }
}

pub fn gilpelaez(ctx: &Context) -> Result<Vec<Check>, CliError> {
    let mut out = Vec::new();
    let ts: Vec<f64> = (0..40).map(|k| 10f64.powf(-2.0 + 3.0 * k as f64 / 39.0)).collect();
    for m in 1..=3u32 {
        let got = gil_pelaez_cdfs(&UnitGamma(m), &ts, &ctx.quad)?;
        let worst = ts
            .iter()
            .zip(got)
            .map(|(&x, g)| {
                let mx = m as f64 * x;
                let (mut term, mut tail) = (1.0, 1.0);
                for k in 1..m {
                    term *= mx / k as f64;
                    tail += term;
                }
                (g - (1.0 - (-mx).exp() * tail)).abs()
            })
            .fold(0.0, f64::max);
        out.push(Check::max_dev(format!("gamma_cdf_m{m}"), worst, 1e-7));
    }
    Ok(out)
}

/// Analytic curves against a Monte Carlo run: each curve must lie inside
/// the 3-s.e. band at 95% of its thresholds or more.
pub fn mc(ctx: &Context, req: McRequest) -> Result<Vec<Check>, CliError> {
    let an = ctx.analysis(&ctx.cfg)?;
    let samples = simulate(&ctx.cfg, req.n, req.seed);
    let te: Vec<f64> = (0..=35).map(|k| dbm_to_w(-100.0 + 2.0 * k as f64)).collect();
    let tc: Vec<f64> = (0..=20).map(|k| db_to_lin(-10.0 + 2.0 * k as f64)).collect();
    let mut curves = Vec::new();
    for user in [UserKind::Active, UserKind::Idle, UserKind::Random] {
        curves.push((format!("emfe_{}", user.name()), McMetric::EmfeCdf(user), te.clone(), an.emfe_cdfs(user, &te)?));
    }
    curves.push(("sinr_ccdf".into(), McMetric::SinrCcdf, tc.clone(), an.coverage_ccdfs(&tc, true)?));
    curves.push(("snr_ccdf".into(), McMetric::SnrCcdf, tc.clone(), an.coverage_ccdfs(&tc, false)?));
    let floor = 1.0 / req.n as f64;
    Ok(curves
        .into_iter()
        .map(|(name, metric, ts, exact)| {
            let res = empirical_from_samples(metric, &samples, &ts, req.seed);
            let se = res.std_error();
            let inside = exact
                .iter()
                .zip(&res.probabilities)
                .zip(&se)
                .filter(|((a, p), s)| (*a - *p).abs() <= (3.0 * *s).max(floor))
                .count();
            let frac = inside as f64 / ts.len() as f64;
            Check { name, statistic: "fraction_within_3se", value: frac, tolerance: 0.95, passed: frac >= 0.95 }
        })
        .collect())
}

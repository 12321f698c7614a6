//! Closed-form CFs of the signal and interference powers.

use super::with_conjugation;
use crate::antenna::PatternKind;
use crate::network::{iu_geometry, noise_power, NetworkConfig};
use crate::specfun::{erf_real, hyp2f1, hyp2f1_minus_one, hyp3f2, series_pfq, SeriesControl};
use crate::{ComplexScalar as C, Error, Result};
use std::f64::consts::{FRAC_PI_3, PI};

/// Cap on the Gaussian-pattern p-series.
pub const GAUSSIAN_MAX_TERMS: usize = 200;
/// Relative size of the last retained Gaussian p-series term.
pub const GAUSSIAN_REL_TOL: f64 = 1e-12;

fn c(re: f64) -> C {
    C::new(re, 0.0)
}

/// `(1 - j y)^(-m)`, the Nakagami-averaged CF at normalised power `y`.
pub(crate) fn fading_cf(y: f64, m: u32) -> C {
    C::new(1.0, -y).inv().powu(m)
}

fn check_r0(cfg: &NetworkConfig, r0: f64) -> Result<()> {
    if !(r0 >= cfg.exclusion_radius && r0 <= cfg.disk_radius) {
        return Err(Error::Domain {
            what: "serving distance",
            detail: format!("r0={r0} outside [{}, {}]", cfg.exclusion_radius, cfg.disk_radius),
        });
    }
    Ok(())
}

fn closed_form_pattern(cfg: &NetworkConfig) -> Result<()> {
    if cfg.pattern.kind == PatternKind::TheoreticalUla {
        return Err(Error::Unsupported("the theoretical array pattern has no closed-form CF; use the oracle".into()));
    }
    Ok(())
}

/// CF of the serving-BS power at the active user.
pub fn cf_signal_au(cfg: &NetworkConfig, q: f64, r0: f64) -> Result<C> {
    check_r0(cfg, r0)?;
    let m = cfg.nakagami_m;
    Ok(fading_cf(q * cfg.mean_power(r0) / m as f64, m))
}

/// `p`-th Gaussian angular weight `(3/(2 pi)) int exp(-p eta phi^2) dphi`.
pub(crate) fn gaussian_weight(eta: f64, p: usize) -> f64 {
    let pe = p as f64 * eta;
    1.5 * erf_real(PI * pe.sqrt() / 3.0) / (PI * pe).sqrt()
}

/// Ratio `|w A / (1 - g w)|` governing the Gaussian p-series.
fn gaussian_ratio(w: C, span: f64, g: f64) -> f64 {
    (w * span / (1.0 - w * g)).norm()
}

/// Average over a uniform beam angle of the fading CF, for a BS at mean
/// received power `pbar`.
pub fn eta_s(cfg: &NetworkConfig, q: f64, pbar: f64) -> Result<C> {
    closed_form_pattern(cfg)?;
    with_conjugation(q, |q| {
        let m = cfg.nakagami_m;
        let mf = m as f64;
        let y = q * pbar / mf;
        let p = &cfg.pattern;
        let ctl = SeriesControl::default();
        match p.kind {
            PatternKind::FlatTop => {
                let a = p.flat_top_mass();
                Ok(a * fading_cf(y, m) + (1.0 - a) * fading_cf(y * p.side_lobe_g, m))
            }
            PatternKind::TruncatedCos | PatternKind::MultiCos => {
                let mut acc = C::new(0.0, 0.0);
                for chi in p.lobe_gains() {
                    acc += hyp2f1_minus_one(c(0.5), c(mf), c(1.0), C::new(0.0, y * chi), ctl)?;
                }
                Ok(1.0 + p.lobe_mass() * acc)
            }
            PatternKind::Gaussian => {
                let g = p.side_lobe_g;
                let span = p.gaussian_peak_value() - g;
                let w = C::new(0.0, y);
                let base = (1.0 - w * g).inv();
                if gaussian_ratio(w, span, g) >= 1.0 {
                    return Err(Error::NonConvergence { what: "gaussian eta_S series", terms: 0 });
                }
                let mut sum = base.powu(m);
                // (m)_p w^p / p! (1 - g w)^(-(m+p)) built incrementally.
                let mut t = base.powu(m);
                for k in 1..=GAUSSIAN_MAX_TERMS {
                    let kf = k as f64;
                    t *= (mf + kf - 1.0) / kf * w * span * base;
                    let term = gaussian_weight(p.gaussian_eta(), k) * t;
                    sum += term;
                    if term.norm() <= GAUSSIAN_REL_TOL * sum.norm() {
                        return Ok(sum);
                    }
                }
                Err(Error::NonConvergence { what: "gaussian eta_S series", terms: GAUSSIAN_MAX_TERMS })
            }
            PatternKind::TheoreticalUla => unreachable!(),
        }
    })
}

/// CF of the serving-BS power at the idle user, given the serving BS at
/// distance `r0` and angle `theta0` from the AU-IU axis.
pub fn cf_signal_iu(cfg: &NetworkConfig, q: f64, r0: f64, theta0: f64) -> Result<C> {
    check_r0(cfg, r0)?;
    closed_form_pattern(cfg)?;
    let (w0, d0) = iu_geometry(r0, theta0, cfg.separation)?;
    let pbar = cfg.mean_power(w0);
    if d0.abs() <= FRAC_PI_3 {
        let m = cfg.nakagami_m;
        Ok(fading_cf(q * pbar * cfg.pattern.gain_unchecked(d0) / m as f64, m))
    } else {
        eta_s(cfg, q, pbar)
    }
}

/// `3F2(1/2, m, -delta; 1, 1 - delta; z) - 1`.
pub(crate) fn multicos_kernel_minus_one(m: f64, delta: f64, z: C) -> Result<C> {
    let a = [c(0.5), c(m), c(-delta)];
    let b = [c(1.0), c(1.0 - delta)];
    let ctl = SeriesControl::default();
    if z.norm() <= 0.5 {
        return series_pfq(&a, &b, z, ctl, 1);
    }
    Ok(hyp3f2(a[0], a[1], a[2], b[0], b[1], z, ctl)? - 1.0)
}

/// `2F1(-delta, m; 1 - delta; z) - 1`.
fn power_kernel_minus_one(m: f64, delta: f64, z: C) -> Result<C> {
    hyp2f1_minus_one(c(-delta), c(m), c(1.0 - delta), z, SeriesControl::default())
}

/// Antiderivative `F(r)` of the interference exponent, so that
/// `eta_I(q | r0) = F(tau) - F(r0)`.
pub fn eta_i_antiderivative(cfg: &NetworkConfig, q: f64, r: f64) -> Result<C> {
    closed_form_pattern(cfg)?;
    with_conjugation(q, |q| {
        let mf = cfg.nakagami_m as f64;
        let delta = cfg.delta();
        let s = r * r + cfg.bs_height * cfg.bs_height;
        let w = C::new(0.0, q * cfg.mean_power(r) / mf);
        let p = &cfg.pattern;
        match p.kind {
            PatternKind::FlatTop => {
                let a = p.flat_top_mass();
                let main = power_kernel_minus_one(mf, delta, w)?;
                let side = power_kernel_minus_one(mf, delta, w * p.side_lobe_g)?;
                Ok(-s * (a * main + (1.0 - a) * side))
            }
            PatternKind::TruncatedCos | PatternKind::MultiCos => {
                let mut acc = C::new(0.0, 0.0);
                for chi in p.lobe_gains() {
                    acc += multicos_kernel_minus_one(mf, delta, w * chi)?;
                }
                Ok(-s * p.lobe_mass() * acc)
            }
            PatternKind::Gaussian => {
                let g = p.side_lobe_g;
                let span = p.gaussian_peak_value() - g;
                if gaussian_ratio(w, span, g) >= 1.0 {
                    return Err(Error::NonConvergence { what: "gaussian eta_I series", terms: 0 });
                }
                let gw = w * g;
                let ctl = SeriesControl::default();
                let mut sum = -power_kernel_minus_one(mf, delta, gw)?;
                // (m)_p (A w)^p / p!
                let mut t = C::new(1.0, 0.0);
                for k in 1..=GAUSSIAN_MAX_TERMS {
                    let kf = k as f64;
                    t *= (mf + kf - 1.0) / kf * w * span;
                    let f = hyp2f1(c(kf - delta), c(mf + kf), c(kf + 1.0 - delta), gw, ctl)?;
                    let term = delta * gaussian_weight(p.gaussian_eta(), k) * t * f / (kf - delta);
                    sum += term;
                    if term.norm() <= GAUSSIAN_REL_TOL * sum.norm() {
                        return Ok(s * sum);
                    }
                }
                Err(Error::NonConvergence { what: "gaussian eta_I series", terms: GAUSSIAN_MAX_TERMS })
            }
            PatternKind::TheoreticalUla => unreachable!(),
        }
    })
}

/// Interference exponent `eta_I(q | r0) = F(tau) - F(r0)`.
pub fn eta_i(cfg: &NetworkConfig, q: f64, r0: f64) -> Result<C> {
    check_r0(cfg, r0)?;
    if q == 0.0 {
        return Ok(c(0.0));
    }
    Ok(eta_i_antiderivative(cfg, q, cfg.disk_radius)? - eta_i_antiderivative(cfg, q, r0)?)
}

/// CF of the aggregate interference given the serving distance `r0`.
pub fn cf_interference(cfg: &NetworkConfig, q: f64, r0: f64) -> Result<C> {
    Ok((-PI * cfg.density * eta_i(cfg, q, r0)?).exp())
}

/// Probability that a uniform beam angle yields exactly zero gain.
pub fn zero_gain_mass(cfg: &NetworkConfig) -> f64 {
    let p = &cfg.pattern;
    match p.kind {
        PatternKind::TruncatedCos | PatternKind::MultiCos => {
            (1.0 - p.lobe_gains().len() as f64 * p.lobe_mass()).max(0.0)
        }
        PatternKind::FlatTop if p.side_lobe_g == 0.0 => 1.0 - p.flat_top_mass(),
        _ => 0.0,
    }
}

/// Probability that the interference is exactly zero given `r0`.
pub fn interference_atom(cfg: &NetworkConfig, r0: f64) -> f64 {
    let area = cfg.disk_radius.powi(2) - r0 * r0;
    (-PI * cfg.density * (1.0 - zero_gain_mass(cfg)) * area).exp()
}

/// Integrand CF of the SINR coverage: `phi_S(q) phi_I(-T_c q) exp(-j T_c q sigma^2)`.
pub fn cf_sinr_integrand(cfg: &NetworkConfig, q: f64, t_c: f64, r0: f64) -> Result<C> {
    if !(t_c > 0.0) {
        return Err(Error::Domain { what: "cf_sinr_integrand", detail: format!("T_c={t_c} must be > 0") });
    }
    let s = cf_signal_au(cfg, q, r0)?;
    let i = cf_interference(cfg, -t_c * q, r0)?;
    Ok(s * i * C::new(0.0, -t_c * q * noise_power(cfg)).exp())
}

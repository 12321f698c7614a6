//! Direct-expectation oracles for the closed-form CFs.
//!
//! Angular averages and the radial integral are computed by adaptive
//! quadrature of the defining expectations; the Nakagami average inside them
//! uses the exact fading CF. [`cf_signal_au_oracle`] integrates the fading
//! density itself. All oracles accept every pattern, including the
//! theoretical array.

use super::closed::fading_cf;
use super::with_conjugation;
use crate::network::{iu_geometry, NetworkConfig};
use crate::quad::adaptive;
use crate::specfun::ln_gamma;
use crate::{ComplexScalar as C, Error, Result};
use std::f64::consts::{FRAC_PI_3, PI};

/// CF of the serving-BS power at the AU by quadrature over the Gamma fading
/// density.
pub fn cf_signal_au_oracle(cfg: &NetworkConfig, q: f64, r0: f64) -> Result<C> {
    let mf = cfg.nakagami_m as f64;
    let pbar = cfg.mean_power(r0);
    let ln_norm = mf * mf.ln() - ln_gamma(C::new(mf, 0.0))?.re;
    let density = |h: f64| {
        if h <= 0.0 {
            return if mf == 1.0 { 1.0 } else { 0.0 };
        }
        (ln_norm + (mf - 1.0) * h.ln() - mf * h).exp()
    };
    // Tail beyond h_max is below 1e-17 for m <= 8.
    let h_max = (40.0 + 10.0 * mf) / mf;
    let period = 2.0 * PI / (q.abs() * pbar).max(1e-300);
    let n_bp = ((h_max / period).ceil() as usize).min(3000);
    let bps: Vec<f64> = (1..n_bp).map(|k| k as f64 * h_max / n_bp as f64).collect();
    adaptive(|h| Ok(density(h) * C::new(0.0, q * pbar * h).exp()), 0.0, h_max, &bps, 1e-14, 1e-13)
}

/// Beam-angle average of the fading CF by quadrature over the sector.
pub fn eta_s_oracle(cfg: &NetworkConfig, q: f64, pbar: f64) -> Result<C> {
    with_conjugation(q, |q| {
        let m = cfg.nakagami_m;
        let y = q * pbar / m as f64;
        let p = &cfg.pattern;
        let v = adaptive(
            |phi| Ok(fading_cf(y * p.gain_unchecked(phi), m)),
            0.0,
            FRAC_PI_3,
            &p.breakpoints(),
            1e-15,
            1e-13,
        )?;
        Ok(3.0 / PI * v)
    })
}

/// IU serving-signal CF from the defining expectation.
pub fn cf_signal_iu_oracle(cfg: &NetworkConfig, q: f64, r0: f64, theta0: f64) -> Result<C> {
    let (w0, d0) = iu_geometry(r0, theta0, cfg.separation)?;
    let pbar = cfg.mean_power(w0);
    if d0.abs() <= FRAC_PI_3 {
        let m = cfg.nakagami_m;
        Ok(fading_cf(q * pbar * cfg.pattern.gain_unchecked(d0) / m as f64, m))
    } else {
        eta_s_oracle(cfg, q, pbar)
    }
}

/// Interference exponent `E[ int_{r0}^{tau} 2 r (1 - exp(j q P_r(r))) dr ]`.
pub fn eta_i_oracle(cfg: &NetworkConfig, q: f64, r0: f64) -> Result<C> {
    if !(r0 >= cfg.exclusion_radius && r0 <= cfg.disk_radius) {
        return Err(Error::Domain { what: "eta_i_oracle", detail: format!("r0={r0}") });
    }
    if r0 == cfg.disk_radius || q == 0.0 {
        return Ok(C::new(0.0, 0.0));
    }
    // Integrate over t = ln r so that near-origin and far-field decades get
    // equal attention; the omitted disk r < 1e-9 contributes below 1e-18.
    let (a, b) = (r0.max(1e-9).ln(), cfg.disk_radius.ln());
    let bps: Vec<f64> = (-9..=4).map(|k| (k as f64) * std::f64::consts::LN_10).collect();
    let abs_tol = 1e-10 / (PI * cfg.density);
    let f = |t: f64| -> Result<C> {
        let r = t.exp();
        let avg = eta_s_oracle(cfg, q, cfg.mean_power(r))?;
        Ok(2.0 * r * r * (1.0 - avg))
    };
    adaptive(f, a, b, &bps, abs_tol, 1e-12)
}

/// Interference CF from the defining expectation.
pub fn cf_interference_oracle(cfg: &NetworkConfig, q: f64, r0: f64) -> Result<C> {
    Ok((-PI * cfg.density * eta_i_oracle(cfg, q, r0)?).exp())
}

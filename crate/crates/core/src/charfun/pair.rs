//! Pairwise factor `gamma_pm(q, q' | r0) = E[phi_I(q | Psi) phi_I(+-q' | Psi)]`
//! of the joint coverage/exposure metric.
//!
//! By the PGFL of the interferer process,
//! `ln gamma = -pi lambda int_{s0}^{s1} (1 - a(q,s) a(q',s)) ds` with `s = r^2 + z^2`
//! and `a` the per-BS beam- and fading-averaged CF. Splitting
//! `1 - a a' = (1 - a) + (1 - a') - (1 - a)(1 - a')` leaves the two marginal
//! exponents and a correction whose multi-cosine cross terms reduce to Appell
//! `F1` integrals.

use super::closed::{eta_i, multicos_kernel_minus_one};
use super::eta_s_auto;
use crate::antenna::PatternKind;
use crate::network::NetworkConfig;
use crate::quad::adaptive;
use crate::specfun::{appell_f1, SeriesControl};
use crate::{ComplexScalar as C, Error, Result};
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Poisson};
use std::f64::consts::PI;

/// `+`: both CFs at positive arguments; `-`: the second one conjugated.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum PairSign {
    Plus,
    Minus,
}

impl PairSign {
    fn apply(self, q: f64) -> f64 {
        match self {
            PairSign::Plus => q,
            PairSign::Minus => -q,
        }
    }
}

fn c(re: f64) -> C {
    C::new(re, 0.0)
}

/// `binom(-1/2, l) binom(m-1, l)`.
fn beta_coeff(m: u32, l: u32) -> f64 {
    let mut b = 1.0;
    for i in 0..l {
        let i = i as f64;
        b *= (-0.5 - i) / (i + 1.0) * ((m - 1) as f64 - i) / (i + 1.0);
    }
    b
}

/// `int_0^V v^(A-1) (1 - v/X)^(1/2-m) (1 - v/Y)^(1/2-m) dv` times the
/// prefactors that turn it into `int F_i F_j ds` over `s = v^delta`.
fn cross_antiderivative(m: u32, delta: f64, x: C, y: C, v: f64) -> Result<C> {
    let ctl = SeriesControl::default();
    let b = c(m as f64 - 0.5);
    let pre = (-x).powc(c(0.5 - m as f64)) * (-y).powc(c(0.5 - m as f64));
    let mut total = c(0.0);
    for l in 0..m {
        for lp in 0..m {
            let a = (2 * m - 1 - l - lp) as f64 + delta;
            let coef = beta_coeff(m, l) * beta_coeff(m, lp) * x.powu(l) * y.powu(lp);
            let f1 = appell_f1(c(a), b, b, c(a + 1.0), c(v) / x, c(v) / y, ctl)?;
            total += coef * (a * v.ln()).exp() / a * f1;
        }
    }
    Ok(delta * pre * total)
}

/// Closed-form pairwise factor for the cosine-family patterns.
pub fn gamma_pm(cfg: &NetworkConfig, q: f64, qp: f64, r0: f64, sign: PairSign) -> Result<C> {
    let p = &cfg.pattern;
    if !matches!(p.kind, PatternKind::MultiCos | PatternKind::TruncatedCos) {
        return Err(Error::Unsupported("closed-form gamma_pm requires the multi-cosine pattern".into()));
    }
    let q2 = sign.apply(qp);
    let eta = eta_i(cfg, q, r0)? + eta_i(cfg, q2, r0)?;
    if q == 0.0 || q2 == 0.0 {
        return Ok((-PI * cfg.density * eta).exp());
    }
    let m = cfg.nakagami_m;
    let mf = m as f64;
    let delta = cfg.delta();
    let z2 = cfg.bs_height * cfg.bs_height;
    let (s0, s1) = (r0 * r0 + z2, cfg.disk_radius.powi(2) + z2);
    let (v0, v1) = (s0.powf(1.0 / delta), s1.powf(1.0 / delta));
    let base = cfg.eirp / (cfg.kappa() * mf);
    let lobes = p.lobe_gains();
    let k1 = lobes.len() as f64;

    // int_{s0}^{s1} (1 - F(X s^(-1/delta))) ds per lobe.
    let single = |x: C| -> Result<C> {
        let at = |s: f64| multicos_kernel_minus_one(mf, delta, x * s.powf(-1.0 / delta)).map(|k| -s * k);
        Ok(at(s1)? - at(s0)?)
    };
    let xs: Vec<C> = lobes.iter().map(|chi| C::new(0.0, q * chi * base)).collect();
    let ys: Vec<C> = lobes.iter().map(|chi| C::new(0.0, q2 * chi * base)).collect();
    let mut corr = c(-k1 * k1 * (s1 - s0));
    for x in xs.iter().chain(ys.iter()) {
        corr += k1 * single(*x)?;
    }
    for x in &xs {
        for y in &ys {
            corr += cross_antiderivative(m, delta, *x, *y, v1)? - cross_antiderivative(m, delta, *x, *y, v0)?;
        }
    }
    let c0 = p.lobe_mass();
    Ok((-PI * cfg.density * (eta - c0 * c0 * corr)).exp())
}

/// Pairwise factor by adaptive radial quadrature of the PGFL exponent.
///
/// Works for every pattern; `a` is evaluated in closed form where one exists.
pub fn gamma_pm_pgfl(cfg: &NetworkConfig, q: f64, qp: f64, r0: f64, sign: PairSign) -> Result<C> {
    let q2 = sign.apply(qp);
    if r0 >= cfg.disk_radius {
        return Ok(c(1.0));
    }
    let f = |t: f64| -> Result<C> {
        let r = t.exp();
        let pbar = cfg.mean_power(r);
        let a = eta_s_auto(cfg, q, pbar)?;
        let b = eta_s_auto(cfg, q2, pbar)?;
        Ok(2.0 * r * r * (1.0 - a * b))
    };
    let (lo, hi) = (r0.max(1e-9).ln(), cfg.disk_radius.ln());
    let bps: Vec<f64> = (-9..=4).map(|k| k as f64 * std::f64::consts::LN_10).collect();
    let exponent = adaptive(f, lo, hi, &bps, 1e-11 / (PI * cfg.density), 1e-12)?;
    Ok((-PI * cfg.density * exponent).exp())
}

/// Monte Carlo estimate of the pairwise factor and its standard error.
///
/// Each draw places a Poisson number of interferers uniformly in the annulus
/// `(r0, tau]` and multiplies the per-BS averaged CFs.
pub fn gamma_pm_oracle(
    cfg: &NetworkConfig,
    q: f64,
    qp: f64,
    r0: f64,
    sign: PairSign,
    draws: usize,
    seed: u64,
) -> Result<(C, f64)> {
    if draws < 2 {
        return Err(Error::Config("gamma_pm_oracle needs at least 2 draws".into()));
    }
    let q2 = sign.apply(qp);
    let area = PI * (cfg.disk_radius.powi(2) - r0 * r0);
    let mean = cfg.density * area;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut sum = c(0.0);
    let mut sum_sq = 0.0;
    for _ in 0..draws {
        let n = if mean > 0.0 { Poisson::new(mean).map_err(|e| Error::Config(e.to_string()))?.sample(&mut rng) as usize } else { 0 };
        let mut prod = c(1.0);
        for _ in 0..n {
            let u: f64 = rng.gen();
            let r = (r0 * r0 + u * (cfg.disk_radius.powi(2) - r0 * r0)).sqrt();
            let pbar = cfg.mean_power(r);
            prod *= eta_s_auto(cfg, q, pbar)? * eta_s_auto(cfg, q2, pbar)?;
        }
        sum += prod;
        sum_sq += prod.norm_sqr();
    }
    let nf = draws as f64;
    let m = sum / nf;
    let var = (sum_sq / nf - m.norm_sqr()).max(0.0) * nf / (nf - 1.0);
    Ok((m, (var / nf).sqrt()))
}


#[cfg(test)]
mod tests {
    use super::*;
    use crate::specfun::hyp2f1;

    #[test]
    fn cross_term_matches_quadrature() {
        for m in [1u32, 2, 3] {
            let delta = 2.0 / 3.25;
            for (x, y) in [(C::new(0.0, 3e4), C::new(0.0, -7e5)), (C::new(0.0, 380.0), C::new(0.0, 1.15e4)), (C::new(0.0, 38.0), C::new(0.0, 4.0))] {
            let (s0, s1) = (1300.0f64, 2.5e5f64);
            let f = |z: C| hyp2f1(c(0.5), c(m as f64), c(1.0), z, SeriesControl::default()).unwrap();
            let direct = adaptive(
                |t: f64| {
                    let s = t.exp();
                    let v = s.powf(1.0 / delta);
                    Ok(s * f(x / v) * f(y / v))
                },
                s0.ln(),
                s1.ln(),
                &[],
                1e-12,
                1e-14,
            )
            .unwrap();
            let cf = cross_antiderivative(m, delta, x, y, s1.powf(1.0 / delta)).unwrap()
                - cross_antiderivative(m, delta, x, y, s0.powf(1.0 / delta)).unwrap();
            assert!((cf - direct).norm() <= 1e-9 * direct.norm(), "m={m} x={x}: {cf} vs {direct}");
            }
        }
    }
}

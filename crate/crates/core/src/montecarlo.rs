//! Monte Carlo simulation of the system model with exact geometry: PPP base
//! stations on an annulus, uniform beam orientations, Nakagami fading and
//! the actual idle-user distances and angles of every link.
//!
//! Every realization draws from ChaCha8 streams keyed by
//! `(seed, realization index, stream)`, so results do not depend on how the
//! work is scheduled.

use crate::network::{iu_geometry, noise_power, NetworkConfig, UserKind};
use crate::{Error, Result};
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Gamma, Poisson};
use rayon::prelude::*;
use std::f64::consts::{FRAC_PI_3, PI};

const STREAMS: u64 = 4;
const STREAM_NETWORK: u64 = 0;
const STREAM_FADING: u64 = 1;
const STREAM_SECTOR: u64 = 2;
const STREAM_RANDOM_USER: u64 = 3;

/// One base station of a realization.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BaseStation {
    pub r: f64,
    pub theta: f64,
    /// Beam angle relative to the direction of the active user.
    pub xi: f64,
    pub fading_au: f64,
    pub fading_iu: f64,
    /// Beam angle used when the idle user falls outside this sector.
    pub alt_beam: f64,
}

/// A network draw seen from the active user at the origin, plus an
/// independent draw for the random user.
#[derive(Debug, Clone, PartialEq)]
pub struct Realization {
    pub bs: Vec<BaseStation>,
    pub serving_index: usize,
    /// `(r, beam angle, fading)` of every BS in the random user's network.
    pub random_user: Vec<(f64, f64, f64)>,
}

/// Every quantity of interest of one realization.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Sample {
    pub sinr_au: f64,
    pub snr_au: f64,
    pub signal_au: f64,
    pub interference_au: f64,
    pub signal_iu: f64,
    pub interference_iu: f64,
    pub emfe_ru: f64,
    /// The serving main lobe covers the idle user and its term exceeds
    /// every other single contribution.
    pub main_lobe_dominant_iu: bool,
}

impl Sample {
    pub fn emfe_au(&self) -> f64 {
        self.signal_au + self.interference_au
    }

    pub fn emfe_iu(&self) -> f64 {
        self.signal_iu + self.interference_iu
    }

    pub fn emfe(&self, user: UserKind) -> f64 {
        match user {
            UserKind::Active => self.emfe_au(),
            UserKind::Idle => self.emfe_iu(),
            UserKind::Random => self.emfe_ru,
        }
    }
}

fn stream(seed: u64, index: u64, id: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index.wrapping_mul(STREAMS).wrapping_add(id));
    rng
}

fn bs_count(cfg: &NetworkConfig) -> Poisson<f64> {
    let mean = PI * cfg.density * (cfg.disk_radius.powi(2) - cfg.exclusion_radius.powi(2));
    Poisson::new(mean).expect("positive mean BS count")
}

fn annulus_radius(cfg: &NetworkConfig, u: f64) -> f64 {
    let (a, b) = (cfg.exclusion_radius.powi(2), cfg.disk_radius.powi(2));
    (a + u * (b - a)).sqrt()
}

fn beam(rng: &mut ChaCha8Rng) -> f64 {
    rng.gen_range(-FRAC_PI_3..FRAC_PI_3)
}

/// Positions of a non-empty draw; empty draws are resampled.
fn draw_positions(cfg: &NetworkConfig, rng: &mut ChaCha8Rng) -> Vec<(f64, f64)> {
    let count = bs_count(cfg);
    loop {
        let n = count.sample(rng) as usize;
        if n == 0 {
            log::debug!("empty network draw resampled");
            continue;
        }
        return (0..n).map(|_| (annulus_radius(cfg, rng.gen::<f64>()), rng.gen_range(-PI..PI))).collect();
    }
}

/// Draws realization `index` of the run keyed by `seed`.
pub fn sample_network(cfg: &NetworkConfig, seed: u64, index: u64) -> Realization {
    let mut net = stream(seed, index, STREAM_NETWORK);
    let mut fad = stream(seed, index, STREAM_FADING);
    let mut sec = stream(seed, index, STREAM_SECTOR);
    let mf = cfg.nakagami_m as f64;
    let gamma = Gamma::new(mf, 1.0 / mf).expect("valid fading law");
    let pos = draw_positions(cfg, &mut net);
    let serving_index = pos.iter().enumerate().min_by(|a, b| a.1 .0.total_cmp(&b.1 .0)).map(|(i, _)| i).unwrap();
    let bs = pos
        .iter()
        .enumerate()
        .map(|(i, &(r, theta))| {
            let xi = beam(&mut net);
            BaseStation {
                r,
                theta,
                xi: if i == serving_index { 0.0 } else { xi },
                fading_au: gamma.sample(&mut fad),
                fading_iu: gamma.sample(&mut fad),
                alt_beam: beam(&mut sec),
            }
        })
        .collect();
    let mut ru = stream(seed, index, STREAM_RANDOM_USER);
    let random_user = draw_positions(cfg, &mut ru)
        .into_iter()
        .map(|(r, _)| (r, beam(&mut ru), gamma.sample(&mut ru)))
        .collect();
    Realization { bs, serving_index, random_user }
}

/// Distance and angular offset of the idle user from a BS, with the
/// measure-zero coincident case mapped to a point just off the BS.
fn idle_geometry(r: f64, theta: f64, d: f64) -> (f64, f64) {
    iu_geometry(r, theta, d).unwrap_or((1e-9 * r.max(1.0), 0.0))
}

/// Evaluates the exposures and the SINR of one realization.
pub fn evaluate_realization(cfg: &NetworkConfig, real: &Realization) -> Sample {
    let p = &cfg.pattern;
    let d = cfg.separation;
    let main_lobe = 2.0 / p.n_elements as f64;
    let (mut s_au, mut i_au, mut s_iu, mut i_iu) = (0.0, 0.0, 0.0, 0.0);
    let mut serving_iu = 0.0;
    let mut serving_in_main = false;
    let mut largest_other = 0.0f64;
    for (i, b) in real.bs.iter().enumerate() {
        let pbar = cfg.mean_power(b.r);
        let au = pbar * p.gain_unchecked(b.xi) * b.fading_au;
        let (w, delta) = idle_geometry(b.r, b.theta, d);
        let mut angle = b.xi + delta;
        let in_sector = angle.abs() <= FRAC_PI_3;
        if !in_sector {
            angle = b.alt_beam;
        }
        let iu = cfg.mean_power(w) * p.gain_unchecked(angle) * b.fading_iu;
        if i == real.serving_index {
            s_au += au;
            s_iu += iu;
            serving_iu = iu;
            serving_in_main = in_sector && angle.abs() <= main_lobe;
        } else {
            i_au += au;
            i_iu += iu;
            largest_other = largest_other.max(iu);
        }
    }
    let emfe_ru = real.random_user.iter().map(|&(r, xi, h)| cfg.mean_power(r) * p.gain_unchecked(xi) * h).sum();
    let sigma2 = noise_power(cfg);
    Sample {
        sinr_au: s_au / (i_au + sigma2),
        snr_au: s_au / sigma2,
        signal_au: s_au,
        interference_au: i_au,
        signal_iu: s_iu,
        interference_iu: i_iu,
        emfe_ru,
        main_lobe_dominant_iu: serving_in_main && serving_iu > largest_other,
    }
}

/// `n` evaluated realizations, identical for identical `(cfg, n, seed)`.
pub fn simulate(cfg: &NetworkConfig, n: usize, seed: u64) -> Vec<Sample> {
    (0..n as u64).into_par_iter().map(|i| evaluate_realization(cfg, &sample_network(cfg, seed, i))).collect()
}

/// Random quantity extracted from each realization.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum McMetric {
    /// `P[exposure < T]`.
    EmfeCdf(UserKind),
    /// `P[serving-BS power < T]`.
    SignalCdf(UserKind),
    /// `P[interference power < T]`.
    InterferenceCdf(UserKind),
    /// `P[SINR > T]`.
    SinrCcdf,
    /// `P[SNR > T]`.
    SnrCcdf,
}

impl McMetric {
    fn value(self, s: &Sample) -> f64 {
        match self {
            McMetric::EmfeCdf(u) => s.emfe(u),
            McMetric::SignalCdf(UserKind::Active) => s.signal_au,
            McMetric::SignalCdf(UserKind::Idle) => s.signal_iu,
            McMetric::SignalCdf(UserKind::Random) => 0.0,
            McMetric::InterferenceCdf(UserKind::Active) => s.interference_au,
            McMetric::InterferenceCdf(UserKind::Idle) => s.interference_iu,
            McMetric::InterferenceCdf(UserKind::Random) => s.emfe_ru,
            McMetric::SinrCcdf => s.sinr_au,
            McMetric::SnrCcdf => s.snr_au,
        }
    }

    fn upper_tail(self) -> bool {
        matches!(self, McMetric::SinrCcdf | McMetric::SnrCcdf)
    }
}

/// Empirical probabilities with binomial 95% Wilson intervals.
#[derive(Debug, Clone, PartialEq)]
pub struct EmpiricalResult {
    pub thresholds: Vec<f64>,
    pub probabilities: Vec<f64>,
    pub ci_lo: Vec<f64>,
    pub ci_hi: Vec<f64>,
    pub ci_halfwidth: Vec<f64>,
    /// The sampled random quantity, in realization order.
    pub samples: Vec<f64>,
    pub seed: u64,
    pub n_realizations: usize,
}

impl EmpiricalResult {
    /// Standard error `sqrt(p (1 - p) / n)` at each threshold.
    pub fn std_error(&self) -> Vec<f64> {
        let n = self.n_realizations as f64;
        self.probabilities.iter().map(|p| (p * (1.0 - p) / n).sqrt()).collect()
    }
}

/// 95% Wilson score interval of `k` successes in `n` trials.
pub fn wilson_interval(k: usize, n: usize) -> (f64, f64) {
    let z = 1.959_963_984_540_054;
    let (k, n) = (k as f64, n as f64);
    let p = k / n;
    let denom = 1.0 + z * z / n;
    let centre = (p + z * z / (2.0 * n)) / denom;
    let half = z * (p * (1.0 - p) / n + z * z / (4.0 * n * n)).sqrt() / denom;
    let lo = if k == 0.0 { 0.0 } else { (centre - half).max(0.0) };
    let hi = if k == n { 1.0 } else { (centre + half).min(1.0) };
    (lo, hi)
}

fn from_counts(thresholds: &[f64], counts: &[usize], samples: Vec<f64>, n: usize, seed: u64) -> EmpiricalResult {
    let mut res = EmpiricalResult {
        thresholds: thresholds.to_vec(),
        probabilities: Vec::new(),
        ci_lo: Vec::new(),
        ci_hi: Vec::new(),
        ci_halfwidth: Vec::new(),
        samples,
        seed,
        n_realizations: n,
    };
    for &k in counts {
        let (lo, hi) = wilson_interval(k, n);
        res.probabilities.push(k as f64 / n as f64);
        res.ci_lo.push(lo);
        res.ci_hi.push(hi);
        res.ci_halfwidth.push(0.5 * (hi - lo));
    }
    res
}

/// Empirical distribution of `metric` from already simulated samples.
pub fn empirical_from_samples(metric: McMetric, samples: &[Sample], thresholds: &[f64], seed: u64) -> EmpiricalResult {
    let values: Vec<f64> = samples.iter().map(|s| metric.value(s)).collect();
    let counts: Vec<usize> = thresholds
        .iter()
        .map(|&t| {
            if metric.upper_tail() {
                values.iter().filter(|&&v| v > t).count()
            } else {
                values.iter().filter(|&&v| v < t).count()
            }
        })
        .collect();
    from_counts(thresholds, &counts, values, samples.len(), seed)
}

/// Empirical CDF (or CCDF for SINR metrics) of `metric`.
pub fn empirical_cdf(
    cfg: &NetworkConfig,
    metric: McMetric,
    thresholds: &[f64],
    n: usize,
    seed: u64,
) -> Result<EmpiricalResult> {
    if n < 1000 {
        return Err(Error::Domain { what: "empirical_cdf", detail: format!("n={n} must be >= 1000") });
    }
    Ok(empirical_from_samples(metric, &simulate(cfg, n, seed), thresholds, seed))
}

/// Joint fractions `P[SINR > T_c, idle-user exposure < T_e]` from samples,
/// one entry per `(t_c, t_e)` pair.
pub fn joint_from_samples(samples: &[Sample], pairs: &[(f64, f64)], seed: u64) -> EmpiricalResult {
    let counts: Vec<usize> = pairs
        .iter()
        .map(|&(tc, te)| samples.iter().filter(|s| s.sinr_au > tc && s.emfe_iu() < te).count())
        .collect();
    let thresholds: Vec<f64> = pairs.iter().map(|p| p.1).collect();
    from_counts(&thresholds, &counts, Vec::new(), samples.len(), seed)
}

/// Empirical joint coverage-and-exposure probability.
pub fn empirical_joint(cfg: &NetworkConfig, t_c: f64, t_e: f64, n: usize, seed: u64) -> Result<EmpiricalResult> {
    if n < 10_000 {
        return Err(Error::Domain { what: "empirical_joint", detail: format!("n={n} must be >= 10000") });
    }
    Ok(joint_from_samples(&simulate(cfg, n, seed), &[(t_c, t_e)], seed))
}

/// Probability that the serving main lobe dominates the idle user's
/// exposure, with its 95% interval.
pub fn main_lobe_dominance(samples: &[Sample]) -> (f64, (f64, f64)) {
    let k = samples.iter().filter(|s| s.main_lobe_dominant_iu).count();
    (k as f64 / samples.len() as f64, wilson_interval(k, samples.len()))
}

/// Kolmogorov-Smirnov distance between samples and a continuous CDF.
pub fn ks_statistic<F: Fn(f64) -> f64>(samples: &[f64], cdf: F) -> f64 {
    let mut v = samples.to_vec();
    v.sort_by(f64::total_cmp);
    let n = v.len() as f64;
    v.iter()
        .enumerate()
        .map(|(i, &x)| {
            let f = cdf(x);
            (f - i as f64 / n).abs().max(((i + 1) as f64 / n - f).abs())
        })
        .fold(0.0, f64::max)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn wilson_interval_contains_estimate() {
        let (lo, hi) = wilson_interval(30, 100);
        assert!(lo < 0.3 && hi > 0.3);
        let (lo, hi) = wilson_interval(0, 100);
        assert_eq!(lo, 0.0);
        assert!(hi > 0.0 && hi < 0.05);
    }

    #[test]
    fn serving_bs_is_nearest_with_zero_beam() {
        let cfg = NetworkConfig::reference();
        for i in 0..20 {
            let real = sample_network(&cfg, 7, i);
            let s = &real.bs[real.serving_index];
            assert_eq!(s.xi, 0.0);
            assert!(real.bs.iter().all(|b| b.r >= s.r));
        }
    }
}

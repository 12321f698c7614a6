//! Exposure CDFs and SINR coverage.

use super::gilpelaez::{clamp_probability, Inversion, QuadratureSpec};
use super::tables::{interference_row, Analysis};
use super::{CdfCurve, MetricKind};
use crate::charfun::closed::fading_cf;
use crate::charfun::interference_atom;
use crate::network::{noise_power, NetworkConfig, UserKind};
use crate::{ComplexScalar as C, Error, Result};
use rayon::prelude::*;

/// Component of the exposure being inverted.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Part {
    Total,
    Signal,
    Interference,
}

fn positive_thresholds(what: &'static str, ts: &[f64]) -> Result<()> {
    match ts.iter().find(|t| !(**t > 0.0) || t.is_nan()) {
        Some(t) => Err(Error::Domain { what, detail: format!("threshold {t} must be > 0") }),
        None => Ok(()),
    }
}

impl Analysis {
    fn atoms(&self, user: UserKind, part: Part) -> Result<Vec<(f64, f64)>> {
        let mass = match (user, part) {
            (UserKind::Random, Part::Signal) => 1.0,
            (UserKind::Random, _) => interference_atom(&self.cfg, self.cfg.exclusion_radius),
            (UserKind::Active, Part::Total | Part::Signal) => 0.0,
            (_, Part::Interference) => {
                self.radial.iter().zip(self.interference_atoms()).map(|(n, a)| n.w * a).sum()
            }
            (UserKind::Idle, Part::Signal) => {
                self.radial.iter().zip(self.iu_signal_atoms()?).map(|(n, a)| n.w * a).sum()
            }
            (UserKind::Idle, Part::Total) => self
                .radial
                .iter()
                .zip(self.iu_signal_atoms()?)
                .zip(self.interference_atoms())
                .map(|((n, s), i)| n.w * s * i)
                .sum(),
        };
        Ok(if mass > 0.0 { vec![(0.0, mass)] } else { Vec::new() })
    }

    /// Tabulated inversion of the exposure CF of `user`.
    pub fn emfe_inversion(&self, user: UserKind, part: Part) -> Result<Inversion> {
        let atoms = self.atoms(user, part)?;
        let cfg = &self.cfg;
        let m = cfg.nakagami_m;
        let nr = self.radial.len();
        let au_signal = |q: f64, i: usize| fading_cf(q * cfg.mean_power(self.radial[i].r) / m as f64, m);
        Inversion::build(&self.grid, atoms, self.quad.eps_q, |k, nodes| {
            if user == UserKind::Random {
                return match part {
                    Part::Signal => Ok(vec![C::new(1.0, 0.0); nodes.len()]),
                    _ => nodes.par_iter().map(|&q| Ok(interference_row(cfg, q, &[cfg.exclusion_radius])?[0])).collect(),
                };
            }
            let interf = match part {
                Part::Signal => None,
                _ => Some(self.interference_panel(k)?),
            };
            let iu = match (user, part) {
                (UserKind::Idle, Part::Total | Part::Signal) => Some(self.iu_signal_panel(k)?),
                _ => None,
            };
            Ok(nodes
                .iter()
                .enumerate()
                .map(|(j, &q)| {
                    (0..nr)
                        .map(|i| {
                            let s = match (&iu, part) {
                                (_, Part::Interference) => C::new(1.0, 0.0),
                                (Some(t), _) => t[j * nr + i],
                                (None, _) => au_signal(q, i),
                            };
                            let v = interf.as_ref().map_or(s, |t| s * t[j * nr + i]);
                            v * self.radial[i].w
                        })
                        .sum()
                })
                .collect())
        })
    }

    /// `P[exposure < T]` at each threshold.
    pub fn emfe_cdfs(&self, user: UserKind, ts: &[f64]) -> Result<Vec<f64>> {
        positive_thresholds("emfe_cdf", ts)?;
        let inv = self.emfe_inversion(user, Part::Total)?;
        Ok(ts.iter().map(|&t| clamp_probability(inv.cdf(t), "emfe_cdf")).collect())
    }

    fn curve(&self, user: UserKind, metric: MetricKind, ts: &[f64], values: Vec<f64>) -> CdfCurve {
        CdfCurve {
            thresholds: ts.to_vec(),
            values,
            user_kind: user,
            metric,
            config_hash: self.config_hash.clone(),
            method: self.method().to_string(),
        }
    }

    pub fn emfe_curve(&self, user: UserKind, ts: &[f64]) -> Result<CdfCurve> {
        let v = self.emfe_cdfs(user, ts)?;
        Ok(self.curve(user, MetricKind::EmfeCdf, ts, v))
    }

    /// CDFs of the serving-BS and the interference contributions alone.
    pub fn signal_and_interference(&self, user: UserKind, ts: &[f64]) -> Result<(CdfCurve, CdfCurve)> {
        positive_thresholds("signal_and_interference_cdfs", ts)?;
        let mut out = Vec::new();
        for (part, metric) in [(Part::Signal, MetricKind::SignalCdf), (Part::Interference, MetricKind::InterferenceCdf)] {
            let inv = self.emfe_inversion(user, part)?;
            let v = ts.iter().map(|&t| clamp_probability(inv.cdf(t), "signal_and_interference_cdfs")).collect();
            out.push(self.curve(user, metric, ts, v));
        }
        let i = out.pop().unwrap();
        Ok((out.pop().unwrap(), i))
    }

    /// Inversion of the CF of `S/T_c - I` in the scale-free variable `u = q T_c`.
    pub fn coverage_inversion(&self, t_c: f64, with_interference: bool) -> Result<Inversion> {
        positive_thresholds("coverage_ccdf", &[t_c])?;
        let cfg = &self.cfg;
        let m = cfg.nakagami_m;
        let nr = self.radial.len();
        let pbar: Vec<f64> = self.radial.iter().map(|n| cfg.mean_power(n.r) / (t_c * m as f64)).collect();
        // S/T_c spans 1/T_c times the range of S, so small T_c needs panels
        // below the shared grid.
        let extra = if t_c < 1.0 { (-t_c.ln() / self.grid.ratio.ln()).ceil() as usize } else { 0 };
        let grid = self.grid.lowered(extra);
        Inversion::build(&grid, Vec::new(), self.quad.eps_q, |k, nodes| {
            let interf = if with_interference { Some(self.interference_on(&grid, k)?) } else { None };
            Ok(nodes
                .iter()
                .enumerate()
                .map(|(j, &u)| {
                    (0..nr)
                        .map(|i| {
                            let s = fading_cf(u * pbar[i], m);
                            let v = interf.as_ref().map_or(s, |t| s * t[j * nr + i].conj());
                            v * self.radial[i].w
                        })
                        .sum()
                })
                .collect())
        })
    }

    /// `P[SINR > T_c]` (or SNR when interference is dropped) per threshold.
    pub fn coverage_ccdfs(&self, tcs: &[f64], with_interference: bool) -> Result<Vec<f64>> {
        positive_thresholds("coverage_ccdf", tcs)?;
        let sigma2 = noise_power(&self.cfg);
        tcs.par_iter()
            .map(|&t| {
                let inv = self.coverage_inversion(t, with_interference)?;
                Ok(clamp_probability(1.0 - inv.cdf(sigma2), "coverage_ccdf"))
            })
            .collect()
    }

    pub fn coverage_curve(&self, tcs: &[f64], with_interference: bool) -> Result<CdfCurve> {
        let v = self.coverage_ccdfs(tcs, with_interference)?;
        let metric = if with_interference { MetricKind::SinrCcdf } else { MetricKind::SnrCcdf };
        Ok(self.curve(UserKind::Active, metric, tcs, v))
    }
}

/// `P[exposure of user < T_e]`.
pub fn emfe_cdf(cfg: &NetworkConfig, user: UserKind, t_e: f64, quad: &QuadratureSpec) -> Result<f64> {
    Ok(Analysis::new(cfg, quad)?.emfe_cdfs(user, &[t_e])?[0])
}

/// Signal-only and interference-only exposure CDFs of `user`.
pub fn signal_and_interference_cdfs(
    cfg: &NetworkConfig,
    user: UserKind,
    ts: &[f64],
    quad: &QuadratureSpec,
) -> Result<(CdfCurve, CdfCurve)> {
    Analysis::new(cfg, quad)?.signal_and_interference(user, ts)
}

/// `P[SINR > T_c]` at the active user.
pub fn coverage_ccdf(cfg: &NetworkConfig, t_c: f64, quad: &QuadratureSpec) -> Result<f64> {
    Ok(Analysis::new(cfg, quad)?.coverage_ccdfs(&[t_c], true)?[0])
}

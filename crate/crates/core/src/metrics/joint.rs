//! Joint probability of SINR coverage at the active user and exposure below
//! a limit at the idle user (SCAIU), its conditional form and the Frechet
//! bounds.
//!
//! With `1{X > 0} = 1/2 + (1/pi) int sin(qX)/q dq` for both events, the joint
//! probability is `-1/4 + F_cov/2 + F_E/2 + Upsilon/pi^2`, where
//! `Upsilon = int int eps(q, q') / (q q') dq dq'` and
//! `eps = Re[eps_+ - eps_-] / 2`. The pair factor `gamma_+-` is tabulated from
//! its PGFL on a radial grid whose breakpoints are the serving-distance nodes,
//! so one suffix sum yields it for every `r0` at once.

use super::gilpelaez::{clamp_probability, LogPanels, QuadratureSpec};
use super::tables::{averaged_signal, interference_row, Analysis};
use crate::antenna::PatternKind;
use crate::charfun::closed::fading_cf;
use crate::charfun::eta_s_auto;
use crate::network::{noise_power, NetworkConfig};
use crate::quad::GaussLegendre;
use crate::specfun::sine_integral;
use crate::{ComplexScalar as C, Error, Result};
use rayon::prelude::*;
use std::f64::consts::PI;
use std::sync::Arc;

/// Largest ratio between the ends of one radial panel.
const RADIAL_PANEL_RATIO: f64 = 1.5;

/// Joint metric and its ingredients at one `(T_c, T_e)` pair.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct JointPoint {
    pub t_c: f64,
    pub t_e: f64,
    pub scaiu: f64,
    pub f_cov: f64,
    pub f_emfe: f64,
    /// `scaiu / f_cov`; NaN when `f_cov < 1e-12`.
    pub conditional: f64,
    pub frechet_lb: f64,
    pub frechet_ub: f64,
}

/// `(max(0, a + b - 1), min(a, b))`.
pub fn frechet_pair(f_cov: f64, f_emfe: f64) -> (f64, f64) {
    ((f_cov + f_emfe - 1.0).max(0.0), f_cov.min(f_emfe))
}

/// Tables of the double integral, independent of both thresholds.
///
/// The SINR-side variable `u = q T_c` lives on its own grid, started low
/// enough for the smallest `T_c` requested; the exposure side `q'` uses the
/// configuration grid. Both end where the interference CF has decayed.
pub struct JointTables {
    u_grid: LogPanels,
    u_panels: usize,
    q_grid: LogPanels,
    q_panels: usize,
    u_nodes: Vec<f64>,
    q_nodes: Vec<f64>,
    /// Radial PGFL weights `pi lambda 2 rho^2 d(ln rho)`.
    omega: Vec<f64>,
    /// First radial node at or beyond each serving-distance node.
    start: Vec<usize>,
    /// Per-BS beam-averaged CF `a(x, rho_k)`, laid out `[k * cols + col]`;
    /// column 0 is `x = 0`, then the `u` nodes, then the `q'` nodes.
    a: Vec<C>,
    /// Angle-averaged idle-user signal CF, `[h * n_r + i]` over `q'` nodes.
    sbar: Vec<C>,
}

/// Panels until the probability-weighted continuous part of the
/// interference CF has decayed.
fn decayed_panels(an: &Analysis, grid: &LogPanels) -> Result<usize> {
    let eps = an.quad.eps_joint;
    let atoms = an.interference_atoms();
    let mass: f64 = atoms.iter().zip(&an.radial).map(|(a, n)| a * n.w).sum();
    if mass > eps {
        log::warn!("zero-interference mass {mass:.3e} is neglected in the joint double integral");
    }
    for k in 0..grid.max_panels {
        let peak = grid
            .nodes(k)
            .par_iter()
            .map(|&q| {
                let row = interference_row(&an.cfg, q, &an.radii)?;
                Ok(row.iter().zip(&an.radial).zip(&atoms).map(|((v, n), a)| n.w * (v - a).norm()).sum::<f64>())
            })
            .collect::<Result<Vec<f64>>>()?
            .into_iter()
            .fold(0.0f64, f64::max);
        if peak < eps {
            return Ok(k + 1);
        }
    }
    Err(Error::NonDecay { eps, q_reached: grid.bounds(grid.max_panels - 1).1 })
}

fn all_nodes(grid: &LogPanels, panels: usize) -> Vec<f64> {
    (0..panels).flat_map(|k| grid.nodes(k)).collect()
}

fn grid_weights(grid: &LogPanels, panels: usize, t: f64) -> Vec<C> {
    (0..panels)
        .flat_map(|k| {
            let (a, b) = grid.bounds(k);
            grid.rule.weights(a, b, t)
        })
        .collect()
}

impl JointTables {
    fn build(an: &Analysis, u_lo: f64) -> Result<Self> {
        let cfg = &an.cfg;
        let quad = &an.quad;
        let q_grid = LogPanels::new(1e-3 / cfg.mean_power(cfg.exclusion_radius), quad, quad.double_q_nodes);
        let u_grid = LogPanels::new(u_lo, quad, quad.double_q_nodes);
        let q_panels = decayed_panels(an, &q_grid)?;
        let u_panels = decayed_panels(an, &u_grid)?;
        let q_nodes = all_nodes(&q_grid, q_panels);
        let u_nodes = all_nodes(&u_grid, u_panels);

        let mut edges: Vec<f64> = an.radii.clone();
        edges.push(cfg.disk_radius);
        edges.dedup();
        let gl = GaussLegendre::new(quad.double_q_nodes);
        let lp = PI * cfg.density;
        let mut rho = Vec::new();
        let mut omega = Vec::new();
        let mut start = vec![0; an.radii.len()];
        let mut next = 0;
        for w in edges.windows(2) {
            while next < an.radii.len() && an.radii[next] <= w[0] {
                start[next] = rho.len();
                next += 1;
            }
            let (la, lb) = (w[0].ln(), w[1].ln());
            let pieces = ((lb - la) / RADIAL_PANEL_RATIO.ln()).ceil().max(1.0) as usize;
            let step = (lb - la) / pieces as f64;
            for p in 0..pieces {
                for (x, wt) in gl.on(la + p as f64 * step, la + (p + 1) as f64 * step) {
                    let r = x.exp();
                    rho.push(r);
                    omega.push(lp * 2.0 * r * r * wt);
                }
            }
        }
        while next < an.radii.len() {
            start[next] = rho.len();
            next += 1;
        }

        let columns: Vec<f64> = u_nodes.iter().chain(&q_nodes).copied().collect();
        let rows: Vec<Vec<C>> = rho
            .par_iter()
            .map(|&r| {
                let pbar = cfg.mean_power(r);
                let mut row = Vec::with_capacity(columns.len() + 1);
                row.push(C::new(1.0, 0.0));
                for &q in &columns {
                    row.push(eta_s_auto(cfg, q, pbar)?);
                }
                Ok(row)
            })
            .collect::<Result<_>>()?;
        let terms = an.iu_terms()?;
        let sbar_rows: Vec<Vec<C>> = q_nodes
            .par_iter()
            .map(|&q| terms.iter().map(|ts| averaged_signal(cfg, ts, q)).collect::<Result<Vec<_>>>())
            .collect::<Result<_>>()?;
        Ok(Self {
            u_grid,
            u_panels,
            q_grid,
            q_panels,
            u_nodes,
            q_nodes,
            omega,
            start,
            a: rows.concat(),
            sbar: sbar_rows.concat(),
        })
    }

    fn cols(&self) -> usize {
        1 + self.u_nodes.len() + self.q_nodes.len()
    }

    fn q_col(&self, h: usize) -> usize {
        1 + self.u_nodes.len() + h
    }

    fn u_max(&self) -> f64 {
        self.u_grid.bounds(self.u_panels - 1).1
    }

    fn q_max(&self) -> f64 {
        self.q_grid.bounds(self.q_panels - 1).1
    }

    /// `gamma_+(x, y | r_i)` and `gamma_-(x, y | r_i)` for `x = -u` at column
    /// `gx` and `y` at column `gy`, for every serving-distance node.
    fn pair_factors(&self, gx: usize, gy: usize, plus: &mut [C], minus: &mut [C]) {
        let cols = self.cols();
        let nr = self.start.len();
        let (mut sp, mut sm) = (C::new(0.0, 0.0), C::new(0.0, 0.0));
        let mut i = nr;
        for k in (0..self.omega.len()).rev() {
            let ax = self.a[k * cols + gx].conj();
            let ay = self.a[k * cols + gy];
            sp += (1.0 - ax * ay) * self.omega[k];
            sm += (1.0 - ax * ay.conj()) * self.omega[k];
            while i > 0 && self.start[i - 1] == k {
                i -= 1;
                plus[i] = (-sp).exp();
                minus[i] = (-sm).exp();
            }
        }
        while i > 0 {
            i -= 1;
            plus[i] = C::new(1.0, 0.0);
            minus[i] = C::new(1.0, 0.0);
        }
    }

    /// `Z(u_g; T_e | r_i)` for each exposure limit, laid out
    /// `[e][g * n_r + i]` over `g = 0` (`u = 0`) and the `u` nodes.
    ///
    /// `Z = (F_T[(gamma_+ S - c)/q'] - F_{-T}[(gamma_- conj(S) - c)/q'])/2
    ///  - j c Si(Q' T)` with `c = phi_I(-u)` and `F_t` the Filon integral.
    fn inner(&self, t_es: &[f64]) -> Vec<Vec<C>> {
        let nr = self.start.len();
        let wp: Vec<Vec<C>> = t_es.iter().map(|&t| grid_weights(&self.q_grid, self.q_panels, t)).collect();
        let wm: Vec<Vec<C>> = t_es.iter().map(|&t| grid_weights(&self.q_grid, self.q_panels, -t)).collect();
        let si: Vec<f64> = t_es.iter().map(|&t| sine_integral(self.q_max() * t)).collect();
        let per_g: Vec<Vec<Vec<C>>> = (0..=self.u_nodes.len())
            .into_par_iter()
            .map(|g| {
                let mut c = vec![C::new(0.0, 0.0); nr];
                let mut plus = vec![C::new(0.0, 0.0); nr];
                let mut minus = vec![C::new(0.0, 0.0); nr];
                self.pair_factors(g, 0, &mut c, &mut minus);
                let mut acc = vec![vec![C::new(0.0, 0.0); nr]; t_es.len()];
                for (h, &q) in self.q_nodes.iter().enumerate() {
                    self.pair_factors(g, self.q_col(h), &mut plus, &mut minus);
                    for i in 0..nr {
                        let s = self.sbar[h * nr + i];
                        let a = (plus[i] * s - c[i]) / q;
                        let b = (minus[i] * s.conj() - c[i]) / q;
                        for e in 0..t_es.len() {
                            acc[e][i] += 0.5 * (a * wp[e][h] - b * wm[e][h]);
                        }
                    }
                }
                for (e, row) in acc.iter_mut().enumerate() {
                    for i in 0..nr {
                        row[i] -= C::new(0.0, 1.0) * c[i] * si[e];
                    }
                }
                acc
            })
            .collect();
        (0..t_es.len()).map(|e| per_g.iter().flat_map(|acc| acc[e].iter().copied()).collect()).collect()
    }
}

impl Analysis {
    /// Tables whose `u` grid starts at or below what `t_c_min` needs.
    fn joint_tables(&self, t_c_min: f64) -> Result<Arc<JointTables>> {
        let need = 1e-3 * t_c_min.min(1.0) / self.cfg.mean_power(self.cfg.exclusion_radius);
        let u_lo = 10f64.powf(need.log10().floor());
        let mut slot = self.joint.lock().unwrap_or_else(|e| e.into_inner());
        if let Some(t) = slot.as_ref() {
            if t.u_grid.q_lo <= u_lo * (1.0 + 1e-12) {
                return Ok(t.clone());
            }
        }
        let t = Arc::new(JointTables::build(self, u_lo)?);
        *slot = Some(t.clone());
        Ok(t)
    }

    fn joint_pattern(&self) -> Result<()> {
        match self.cfg.pattern.kind {
            PatternKind::MultiCos | PatternKind::TruncatedCos => Ok(()),
            k => Err(Error::Unsupported(format!("the joint metric requires the multi-cosine pattern, got {}", k.name()))),
        }
    }

    /// `Upsilon(T_c, T_e)` for every pair, `[c][e]`.
    pub fn upsilon(&self, t_cs: &[f64], t_es: &[f64]) -> Result<Vec<Vec<f64>>> {
        self.joint_pattern()?;
        let t_c_min = t_cs.iter().copied().fold(f64::INFINITY, f64::min);
        let tab = self.joint_tables(t_c_min)?;
        let cfg = &self.cfg;
        let m = cfg.nakagami_m;
        let nr = self.radial.len();
        let sigma2 = noise_power(cfg);
        let wu = grid_weights(&tab.u_grid, tab.u_panels, sigma2);
        let si = sine_integral(tab.u_max() * sigma2);
        let z = tab.inner(t_es);
        Ok(t_cs
            .iter()
            .map(|&t_c| {
                let pbar: Vec<f64> = self.radial.iter().map(|n| cfg.mean_power(n.r) / (t_c * m as f64)).collect();
                z.iter()
                    .map(|ze| {
                        let mut total = 0.0;
                        for i in 0..nr {
                            let z0 = ze[i].im;
                            let mut acc = C::new(0.0, 0.0);
                            for (g, &u) in tab.u_nodes.iter().enumerate() {
                                let g = g + 1;
                                let x = fading_cf(u * pbar[i], m) * ze[g * nr + i] - C::new(0.0, z0);
                                acc += x / u * wu[g - 1];
                            }
                            total += self.radial[i].w * (acc.re + z0 * si);
                        }
                        total
                    })
                    .collect()
            })
            .collect())
    }

    /// Joint metric on the tensor grid `t_cs x t_es`, `[c][e]`.
    pub fn scaiu_grid(&self, t_cs: &[f64], t_es: &[f64]) -> Result<Vec<Vec<JointPoint>>> {
        let f_cov = self.coverage_ccdfs(t_cs, true)?;
        let f_e = self.emfe_cdfs(crate::network::UserKind::Idle, t_es)?;
        let ups = self.upsilon(t_cs, t_es)?;
        Ok(t_cs
            .iter()
            .enumerate()
            .map(|(ci, &t_c)| {
                t_es.iter()
                    .enumerate()
                    .map(|(ei, &t_e)| {
                        let raw = -0.25 + 0.5 * f_cov[ci] + 0.5 * f_e[ei] + ups[ci][ei] / (PI * PI);
                        let (lb, ub) = frechet_pair(f_cov[ci], f_e[ei]);
                        // The conditional is clamped first so that scaiu = conditional * f_cov exactly.
                        let (j, h) = if f_cov[ci] < 1e-12 {
                            (clamp_probability(raw, "scaiu"), f64::NAN)
                        } else {
                            let h = clamp_probability(raw / f_cov[ci], "scaiu_conditional");
                            (h * f_cov[ci], h)
                        };
                        JointPoint {
                            t_c,
                            t_e,
                            scaiu: j,
                            f_cov: f_cov[ci],
                            f_emfe: f_e[ei],
                            conditional: h,
                            frechet_lb: lb,
                            frechet_ub: ub,
                        }
                    })
                    .collect()
            })
            .collect())
    }
}

/// Joint probability `P[SINR > T_c, idle-user exposure < T_e]`.
pub fn scaiu(cfg: &NetworkConfig, t_c: f64, t_e: f64, quad: &QuadratureSpec) -> Result<f64> {
    Ok(Analysis::new(cfg, quad)?.scaiu_grid(&[t_c], &[t_e])?[0][0].scaiu)
}

/// Exposure probability conditioned on coverage, `scaiu / F_cov`.
pub fn scaiu_conditional(cfg: &NetworkConfig, t_c: f64, t_e: f64, quad: &QuadratureSpec) -> Result<f64> {
    let p = Analysis::new(cfg, quad)?.scaiu_grid(&[t_c], &[t_e])?[0][0];
    if p.f_cov < 1e-12 {
        return Err(Error::DegenerateDivision(format!("coverage probability {:.3e} at T_c={t_c}", p.f_cov)));
    }
    Ok(p.conditional)
}

/// Frechet bounds on the joint metric from its two marginals.
pub fn frechet_bounds(cfg: &NetworkConfig, t_c: f64, t_e: f64, quad: &QuadratureSpec) -> Result<(f64, f64)> {
    let an = Analysis::new(cfg, quad)?;
    let f_cov = an.coverage_ccdfs(&[t_c], true)?[0];
    let f_e = an.emfe_cdfs(crate::network::UserKind::Idle, &[t_e])?[0];
    Ok(frechet_pair(f_cov, f_e))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::charfun::{gamma_pm, PairSign};
    use crate::network::ConfigFile;

    #[test]
    fn tabulated_pair_factor_matches_closed_form() {
        let cfg = ConfigFile { tau_m: 500.0, n_elements: 8, kmax: 2, ..Default::default() }.build().unwrap();
        let quad = QuadratureSpec { r0_nodes: 12, eps_joint: 1e-3, ..Default::default() };
        let an = Analysis::new(&cfg, &quad).unwrap();
        let tab = JointTables::build(&an, 1e-3 / cfg.mean_power(cfg.exclusion_radius)).unwrap();
        let nr = an.radii.len();
        let (mut plus, mut minus) = (vec![C::new(0.0, 0.0); nr], vec![C::new(0.0, 0.0); nr]);
        let mut worst = 0.0f64;
        for g in [tab.u_nodes.len() / 3, tab.u_nodes.len() / 2] {
            for h in [tab.q_nodes.len() / 4, tab.q_nodes.len() / 2] {
                let (u, qp) = (tab.u_nodes[g], tab.q_nodes[h]);
                tab.pair_factors(g + 1, tab.q_col(h), &mut plus, &mut minus);
                for i in [0, nr / 2, nr - 1] {
                    let r = an.radii[i];
                    let p = gamma_pm(&cfg, -u, qp, r, PairSign::Plus).unwrap();
                    let m = gamma_pm(&cfg, -u, qp, r, PairSign::Minus).unwrap();
                    worst = worst.max((plus[i] - p).norm()).max((minus[i] - m).norm());
                }
            }
        }
        assert!(worst < 1e-6, "worst {worst:e}");
    }
}

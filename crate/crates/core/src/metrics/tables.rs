//! Outer quadratures over the serving distance and the beam geometry, and
//! the per-panel CF tables shared by every marginal of one configuration.

use super::gilpelaez::{LogPanels, QuadratureSpec};
use crate::antenna::PatternKind;
use crate::charfun::closed::fading_cf;
use crate::charfun::{eta_i_antiderivative, eta_i_auto, eta_s_auto, interference_atom, zero_gain_mass};
use crate::network::{iu_geometry, NetworkConfig};
use crate::quad::GaussLegendre;
use crate::{ComplexScalar as C, Error, Result};
use rayon::prelude::*;
use sha2::{Digest, Sha256};
use std::f64::consts::{FRAC_PI_3, PI};
use std::sync::{Arc, Mutex, OnceLock};

/// Serving distance node with its probability weight; weights sum to one.
#[derive(Debug, Clone, Copy, PartialEq)]
pub(crate) struct RadialNode {
    pub r: f64,
    pub w: f64,
}

/// Gauss-Legendre in the probability coordinate of the nearest-BS law.
pub(crate) fn radial_rule(cfg: &NetworkConfig, n: usize) -> Vec<RadialNode> {
    GaussLegendre::new(n).on(0.0, 1.0).map(|(u, w)| RadialNode { r: cfg.nearest_bs_quantile(u), w }).collect()
}

/// One beam-geometry sample of the serving link seen by the idle user.
/// `gain` is `None` when the idle user lies outside the serving sector and
/// the beam angle is uniform.
#[derive(Debug, Clone, Copy, PartialEq)]
pub(crate) struct SignalTerm {
    pub w: f64,
    pub pbar: f64,
    pub gain: Option<f64>,
}

impl SignalTerm {
    pub fn cf(&self, cfg: &NetworkConfig, q: f64) -> Result<C> {
        match self.gain {
            Some(g) => Ok(fading_cf(q * self.pbar * g / cfg.nakagami_m as f64, cfg.nakagami_m)),
            None => eta_s_auto(cfg, q, self.pbar),
        }
    }

    pub fn atom(&self, zero_mass: f64) -> f64 {
        match self.gain {
            Some(0.0) => self.w,
            Some(_) => 0.0,
            None => self.w * zero_mass,
        }
    }
}

/// Angles in `(0, pi)` where the idle user crosses the sector edge
/// `|delta| = pi/3`.
pub(crate) fn sector_boundaries(r0: f64, d: f64) -> Vec<f64> {
    let disc = 16.0 * d * d - 12.0 * r0 * r0;
    if d == 0.0 || disc < 0.0 {
        return Vec::new();
    }
    let mut out: Vec<f64> = [-1.0, 1.0]
        .iter()
        .map(|s| (6.0 * r0 + s * disc.sqrt()) / (8.0 * d))
        .filter(|c| c.abs() < 1.0 && r0 - d * c > 0.0)
        .map(f64::acos)
        .filter(|t| *t > 0.0 && *t < PI)
        .collect();
    out.sort_by(|a, b| a.partial_cmp(b).unwrap());
    out.dedup();
    out
}

/// Angular rule for the idle user's serving link at distance `r0`.
///
/// The half-circle `[0, pi]` suffices by symmetry. It is split at the sector
/// edges; in-sector pieces get enough nodes to resolve every lobe swept by
/// `delta`.
pub(crate) fn iu_signal_terms(cfg: &NetworkConfig, r0: f64, base: usize) -> Result<Vec<SignalTerm>> {
    let d = cfg.separation;
    if d == 0.0 {
        let g = cfg.pattern.gain_unchecked(0.0);
        return Ok(vec![SignalTerm { w: 1.0, pbar: cfg.mean_power(r0), gain: Some(g) }]);
    }
    let mut edges = vec![0.0];
    edges.extend(sector_boundaries(r0, d));
    edges.push(PI);
    let n_el = cfg.pattern.n_elements as f64;
    let mut terms = Vec::new();
    for piece in edges.windows(2) {
        let (a, b) = (piece[0], piece[1]);
        let len = b - a;
        let (_, dmid) = iu_geometry(r0, 0.5 * (a + b), d)?;
        let inside = dmid.abs() <= FRAC_PI_3;
        let base_n = ((base as f64) * len / PI).ceil() as usize;
        let n = if inside {
            let samples = 256;
            let mut sweep = 0.0f64;
            let mut prev: Option<f64> = None;
            for i in 0..=samples {
                let t = a + len * (i as f64 + 0.5) / (samples as f64 + 1.0);
                let (_, dl) = iu_geometry(r0, t, d)?;
                if let Some(p) = prev {
                    sweep += (dl - p).abs();
                }
                prev = Some(dl);
            }
            base_n.max((4.0 * n_el * sweep).ceil() as usize).min(16384)
        } else {
            base_n.max(8)
        };
        let gl = GaussLegendre::new(n.max(4));
        for (t, w) in gl.on(a, b) {
            let (wd, dl) = iu_geometry(r0, t, d)?;
            let gain = if dl.abs() <= FRAC_PI_3 { Some(cfg.pattern.gain_unchecked(dl)) } else { None };
            terms.push(SignalTerm { w: w / PI, pbar: cfg.mean_power(wd), gain });
        }
    }
    Ok(terms)
}

/// `phi_I(q | r)` for each radius, sharing the outer antiderivative.
pub(crate) fn interference_row(cfg: &NetworkConfig, q: f64, radii: &[f64]) -> Result<Vec<C>> {
    if q == 0.0 {
        return Ok(vec![C::new(1.0, 0.0); radii.len()]);
    }
    let closed = || -> Result<Vec<C>> {
        let ft = eta_i_antiderivative(cfg, q, cfg.disk_radius)?;
        radii.iter().map(|&r| Ok(ft - eta_i_antiderivative(cfg, q, r)?)).collect()
    };
    let eta = match closed() {
        Ok(v) => v,
        Err(Error::NonConvergence { .. }) | Err(Error::Unsupported(_)) => {
            radii.iter().map(|&r| eta_i_auto(cfg, q, r)).collect::<Result<Vec<_>>>()?
        }
        Err(e) => return Err(e),
    };
    let lp = PI * cfg.density;
    Ok(eta.into_iter().map(|e| (-lp * e).exp()).collect())
}

/// Sha-256 of the configuration's debug rendering.
pub fn network_hash(cfg: &NetworkConfig) -> String {
    hex::encode(Sha256::digest(format!("{cfg:?}").as_bytes()))
}

type Panel = OnceLock<Result<Arc<Vec<C>>>>;

/// Memoised evaluation state for one configuration and quadrature spec.
///
/// Every table is laid out on a single log-panel `q` grid so inversions of
/// different metrics reuse the same CF samples.
pub struct Analysis {
    pub(crate) cfg: NetworkConfig,
    pub(crate) quad: QuadratureSpec,
    pub(crate) config_hash: String,
    pub(crate) radial: Vec<RadialNode>,
    pub(crate) radii: Vec<f64>,
    pub(crate) grid: LogPanels,
    iu_terms: OnceLock<Result<Vec<Vec<SignalTerm>>>>,
    interference: Vec<Panel>,
    iu_signal: Vec<Panel>,
    pub(crate) joint: Mutex<Option<Arc<super::joint::JointTables>>>,
}

impl Analysis {
    pub fn new(cfg: &NetworkConfig, quad: &QuadratureSpec) -> Result<Self> {
        cfg.validate()?;
        quad.validate()?;
        let radial = radial_rule(cfg, quad.r0_nodes);
        let radii = radial.iter().map(|n| n.r).collect();
        let grid = LogPanels::new(1e-3 / cfg.mean_power(cfg.exclusion_radius), quad, quad.panel_nodes);
        let panels = grid.max_panels;
        Ok(Self {
            cfg: cfg.clone(),
            quad: *quad,
            config_hash: network_hash(cfg),
            radial,
            radii,
            grid,
            iu_terms: OnceLock::new(),
            interference: (0..panels).map(|_| OnceLock::new()).collect(),
            iu_signal: (0..panels).map(|_| OnceLock::new()).collect(),
            joint: Mutex::new(None),
        })
    }

    /// Replaces the identifier stamped on every emitted curve.
    pub fn with_config_hash(mut self, hash: impl Into<String>) -> Self {
        self.config_hash = hash.into();
        self
    }

    pub fn config(&self) -> &NetworkConfig {
        &self.cfg
    }

    pub fn quadrature(&self) -> &QuadratureSpec {
        &self.quad
    }

    pub fn config_hash(&self) -> &str {
        &self.config_hash
    }

    /// Which CF evaluator backs the analytic curves.
    pub fn method(&self) -> &'static str {
        match self.cfg.pattern.kind {
            PatternKind::TheoreticalUla => "oracle",
            _ => "closed_form",
        }
    }

    pub(crate) fn iu_terms(&self) -> Result<&Vec<Vec<SignalTerm>>> {
        self.iu_terms
            .get_or_init(|| {
                self.radii.par_iter().map(|&r| iu_signal_terms(&self.cfg, r, self.quad.theta_nodes)).collect()
            })
            .as_ref()
            .map_err(Clone::clone)
    }

    /// `phi_I(q | r_i)` on panel `k`, laid out `[node * n_r + i]`.
    pub(crate) fn interference_panel(&self, k: usize) -> Result<Arc<Vec<C>>> {
        self.interference[k]
            .get_or_init(|| {
                let nodes = self.grid.nodes(k);
                let rows: Vec<Vec<C>> =
                    nodes.par_iter().map(|&q| interference_row(&self.cfg, q, &self.radii)).collect::<Result<_>>()?;
                Ok(Arc::new(rows.concat()))
            })
            .clone()
    }

    /// Interference rows on panel `k` of a lowered copy of the shared grid,
    /// cached wherever that panel coincides with a shared one.
    pub(crate) fn interference_on(&self, grid: &LogPanels, k: usize) -> Result<Arc<Vec<C>>> {
        let shift = grid.offset - self.grid.offset;
        if k > shift {
            return self.interference_panel(k - shift);
        }
        let rows: Vec<Vec<C>> =
            grid.nodes(k).par_iter().map(|&q| interference_row(&self.cfg, q, &self.radii)).collect::<Result<_>>()?;
        Ok(Arc::new(rows.concat()))
    }

    /// Angle-averaged idle-user signal CF on panel `k`, laid out like
    /// [`Self::interference_panel`].
    pub(crate) fn iu_signal_panel(&self, k: usize) -> Result<Arc<Vec<C>>> {
        let terms = self.iu_terms()?;
        self.iu_signal[k]
            .get_or_init(|| {
                let nodes = self.grid.nodes(k);
                let rows: Vec<Vec<C>> = nodes
                    .par_iter()
                    .map(|&q| terms.iter().map(|ts| averaged_signal(&self.cfg, ts, q)).collect::<Result<Vec<_>>>())
                    .collect::<Result<_>>()?;
                Ok(Arc::new(rows.concat()))
            })
            .clone()
    }

    /// Probability of zero interference given each serving distance.
    pub(crate) fn interference_atoms(&self) -> Vec<f64> {
        self.radii.iter().map(|&r| interference_atom(&self.cfg, r)).collect()
    }

    /// Probability of zero idle-user signal given each serving distance.
    pub(crate) fn iu_signal_atoms(&self) -> Result<Vec<f64>> {
        let zm = zero_gain_mass(&self.cfg);
        Ok(self.iu_terms()?.iter().map(|ts| ts.iter().map(|t| t.atom(zm)).sum()).collect())
    }
}

/// `sum_k w_k phi_S(q; d | r0, theta_k)`.
pub(crate) fn averaged_signal(cfg: &NetworkConfig, terms: &[SignalTerm], q: f64) -> Result<C> {
    let mut acc = C::new(0.0, 0.0);
    for t in terms {
        acc += t.cf(cfg, q)? * t.w;
    }
    Ok(acc)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn radial_weights_sum_to_one() {
        let cfg = NetworkConfig::reference();
        let rule = radial_rule(&cfg, 64);
        let s: f64 = rule.iter().map(|n| n.w).sum();
        assert!((s - 1.0).abs() < 1e-14);
        assert!(rule.iter().all(|n| n.r >= cfg.exclusion_radius && n.r <= cfg.disk_radius));
    }

    #[test]
    fn sector_boundaries_sit_on_the_edge() {
        for (r0, d) in [(5.0, 10.0), (10.0, 10.0), (11.0, 10.0), (50.0, 60.0)] {
            let b = sector_boundaries(r0, d);
            assert!(!b.is_empty(), "r0={r0} d={d}");
            for t in b {
                let (_, dl) = iu_geometry(r0, t, d).unwrap();
                assert!((dl.abs() - FRAC_PI_3).abs() < 1e-9, "r0={r0} d={d} t={t} dl={dl}");
            }
        }
        assert!(sector_boundaries(12.0, 10.0).is_empty());
    }

    #[test]
    fn angular_weights_sum_to_one() {
        let cfg = NetworkConfig::reference();
        for r0 in [3.0, 9.0, 10.5, 40.0, 400.0] {
            let t = iu_signal_terms(&cfg, r0, 64).unwrap();
            let s: f64 = t.iter().map(|x| x.w).sum();
            assert!((s - 1.0).abs() < 1e-13, "r0={r0}");
        }
    }
}

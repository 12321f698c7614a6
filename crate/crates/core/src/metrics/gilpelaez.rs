//! Gil-Pelaez inversion with a Filon-Legendre rule on log-spaced panels.
//!
//! For a CF `phi = sum_k a_k exp(j q c_k) + psi` with continuous part
//! `psi(0) = p_c`, the CDF at `T` is
//! `1/2 - (1/pi) [int_0^Q Im[h(q) e^{-jqT}] dq - p_c Si(QT)]
//!  - sum_k a_k sgn(c_k - T) / 2` with `h = (psi - p_c)/q`, which is smooth at
//! the origin. `Q` is the end of the first panel on which `|psi| < eps_q`.

use crate::charfun::CharFn;
use crate::quad::FilonRule;
use crate::specfun::sine_integral;
use crate::{ComplexScalar as C, Error, Result};
use rayon::prelude::*;
use std::f64::consts::PI;
use std::sync::atomic::{AtomicUsize, Ordering};

/// Discretisation controls shared by every inversion.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadratureSpec {
    /// CF-modulus cutoff `eps_q`.
    pub eps_q: f64,
    /// Panels per `span_decades` decades of `q`.
    pub panels: usize,
    pub span_decades: f64,
    /// Gauss-Legendre nodes per panel of a single inversion.
    pub panel_nodes: usize,
    /// Nodes of the outer serving-distance quadrature.
    pub r0_nodes: usize,
    /// Base node count of the angular average over `[0, 2 pi)`.
    pub theta_nodes: usize,
    /// Nodes per panel and per dimension of the double `(q, q')` integral.
    pub double_q_nodes: usize,
    /// Modulus cutoff of the double integral.
    pub eps_joint: f64,
}

impl Default for QuadratureSpec {
    fn default() -> Self {
        Self {
            eps_q: 1e-10,
            panels: 24,
            span_decades: 12.0,
            panel_nodes: 32,
            r0_nodes: 64,
            theta_nodes: 64,
            double_q_nodes: 8,
            eps_joint: 1e-8,
        }
    }
}

impl QuadratureSpec {
    pub fn validate(&self) -> Result<()> {
        let counts = [
            ("panels", self.panels),
            ("panel_nodes", self.panel_nodes),
            ("r0_nodes", self.r0_nodes),
            ("theta_nodes", self.theta_nodes),
            ("double_q_nodes", self.double_q_nodes),
        ];
        for (name, v) in counts {
            if v < 4 {
                return Err(Error::Config(format!("quadrature {name} must be >= 4, got {v}")));
            }
        }
        if !(self.eps_q > 0.0 && self.eps_q < 1e-2 && self.eps_joint > 0.0 && self.eps_joint < 1e-2) {
            return Err(Error::Config("quadrature cutoffs must lie in (0, 1e-2)".into()));
        }
        if !(self.span_decades > 0.0) {
            return Err(Error::Config("span_decades must be positive".into()));
        }
        Ok(())
    }

    /// Every node count doubled.
    pub fn refined(&self) -> Self {
        Self {
            panel_nodes: 2 * self.panel_nodes,
            r0_nodes: 2 * self.r0_nodes,
            theta_nodes: 2 * self.theta_nodes,
            double_q_nodes: 2 * self.double_q_nodes,
            ..*self
        }
    }

    /// Ratio between consecutive panel edges.
    pub fn panel_ratio(&self) -> f64 {
        10f64.powf(self.span_decades / self.panels as f64)
    }
}

/// Panel 0 is `[0, q_lo]`; panel `k >= 1` is `[q_lo r^(k-1), q_lo r^k]`.
#[derive(Debug, Clone)]
pub(crate) struct LogPanels {
    pub q_lo: f64,
    pub ratio: f64,
    pub max_panels: usize,
    pub rule: FilonRule,
    /// Panels prepended below `q_lo`; panel `k + offset` of a lowered grid
    /// is panel `k` of the original.
    pub offset: usize,
}

impl LogPanels {
    /// Budget of three spans of decades above `q_lo`.
    pub fn new(q_lo: f64, quad: &QuadratureSpec, nodes: usize) -> Self {
        let ratio = quad.panel_ratio();
        let max_panels = 1 + (3.0 * quad.span_decades / ratio.log10()).ceil() as usize;
        Self { q_lo, ratio, max_panels, rule: FilonRule::new(nodes), offset: 0 }
    }

    /// The same grid extended `extra` panels further towards zero.
    pub fn lowered(&self, extra: usize) -> Self {
        Self { max_panels: self.max_panels + extra, offset: self.offset + extra, ..self.clone() }
    }

    pub fn bounds(&self, k: usize) -> (f64, f64) {
        let e = k as i32 - self.offset as i32;
        if k == 0 {
            (0.0, self.q_lo * self.ratio.powi(e))
        } else {
            (self.q_lo * self.ratio.powi(e - 1), self.q_lo * self.ratio.powi(e))
        }
    }

    pub fn nodes(&self, k: usize) -> Vec<f64> {
        let (a, b) = self.bounds(k);
        self.rule.gl.on(a, b).map(|(x, _)| x).collect()
    }
}

/// Tabulated inversion, reusable for any number of thresholds.
#[derive(Debug, Clone)]
pub struct Inversion {
    rule: FilonRule,
    panels: Vec<(f64, f64, Vec<C>)>,
    continuous_mass: f64,
    atoms: Vec<(f64, f64)>,
    q_max: f64,
}

impl Inversion {
    /// Fills panels from `eval(k, nodes) = phi(nodes)` until the continuous
    /// part has decayed below `eps` on a whole panel.
    pub(crate) fn build<F>(grid: &LogPanels, atoms: Vec<(f64, f64)>, eps: f64, mut eval: F) -> Result<Self>
    where
        F: FnMut(usize, &[f64]) -> Result<Vec<C>>,
    {
        let continuous_mass = 1.0 - atoms.iter().map(|a| a.1).sum::<f64>();
        let mut panels = Vec::new();
        for k in 0..grid.max_panels {
            let nodes = grid.nodes(k);
            let vals = eval(k, &nodes)?;
            let mut peak = 0.0f64;
            let h: Vec<C> = nodes
                .iter()
                .zip(&vals)
                .map(|(&q, &v)| {
                    let atom: C = atoms.iter().map(|&(c, a)| C::from_polar(a, q * c)).sum();
                    let psi = v - atom;
                    peak = peak.max(psi.norm());
                    (psi - continuous_mass) / q
                })
                .collect();
            let (a, b) = grid.bounds(k);
            panels.push((a, b, grid.rule.coefficients(&h)));
            if peak < eps {
                return Ok(Self { rule: grid.rule.clone(), panels, continuous_mass, atoms, q_max: b });
            }
        }
        Err(Error::NonDecay { eps, q_reached: grid.bounds(grid.max_panels - 1).1 })
    }

    /// Unclamped `P[X < T]` (half the mass of an atom at `T` included).
    pub fn cdf(&self, t: f64) -> f64 {
        let mut integral: f64 =
            self.panels.iter().map(|(a, b, coeffs)| self.rule.integrate(coeffs, *a, *b, t).im).sum();
        integral -= self.continuous_mass * sine_integral(self.q_max * t);
        let atoms: f64 = self
            .atoms
            .iter()
            .map(|&(c, a)| {
                let s = if c > t { 1.0 } else if c < t { -1.0 } else { 0.0 };
                a * s
            })
            .sum();
        0.5 - integral / PI - 0.5 * atoms
    }

    /// Last `q` reached by the tabulation.
    pub fn q_max(&self) -> f64 {
        self.q_max
    }

    pub fn panel_count(&self) -> usize {
        self.panels.len()
    }
}

static CLAMP_EVENTS: AtomicUsize = AtomicUsize::new(0);

/// Clamps a computed probability to `[0, 1]`, counting and logging every
/// correction.
pub fn clamp_probability(v: f64, what: &str) -> f64 {
    let c = v.clamp(0.0, 1.0);
    if c != v {
        CLAMP_EVENTS.fetch_add(1, Ordering::Relaxed);
        let excess = (c - v).abs();
        if excess > 1e-6 {
            log::warn!("{what}: probability {v:.3e} clamped by {excess:.3e}");
        } else {
            log::debug!("{what}: probability {v:.3e} clamped by {excess:.3e}");
        }
    }
    c
}

/// Number of clamp corrections applied since process start.
pub fn clamp_event_count() -> usize {
    CLAMP_EVENTS.load(Ordering::Relaxed)
}

fn check_axioms(cf: &dyn CharFn) -> Result<()> {
    let at0 = cf.eval(0.0)?;
    if (at0 - 1.0).norm() > 1e-9 {
        return Err(Error::Domain { what: "gil_pelaez_cdf", detail: format!("cf(0) = {at0}, expected 1") });
    }
    let scale = cf.scale();
    if !(scale.is_finite() && scale > 0.0) {
        return Err(Error::Domain { what: "gil_pelaez_cdf", detail: format!("scale {scale} must be positive") });
    }
    Ok(())
}

/// Tabulates the inversion of `cf` for thresholds up to `t_max` in modulus.
pub fn gil_pelaez_inversion(cf: &dyn CharFn, t_max: f64, quad: &QuadratureSpec) -> Result<Inversion> {
    quad.validate()?;
    check_axioms(cf)?;
    let grid = LogPanels::new(1e-3 / cf.scale().max(t_max.abs()), quad, quad.panel_nodes);
    Inversion::build(&grid, cf.atoms(), quad.eps_q, |_, nodes| nodes.par_iter().map(|&q| cf.eval(q)).collect())
}

/// `P[X < T]` for the law with characteristic function `cf`.
pub fn gil_pelaez_cdf(cf: &dyn CharFn, t: f64, quad: &QuadratureSpec) -> Result<f64> {
    let inv = gil_pelaez_inversion(cf, t, quad)?;
    Ok(clamp_probability(inv.cdf(t), "gil_pelaez_cdf"))
}

/// [`gil_pelaez_cdf`] at several thresholds sharing one tabulation.
pub fn gil_pelaez_cdfs(cf: &dyn CharFn, ts: &[f64], quad: &QuadratureSpec) -> Result<Vec<f64>> {
    let t_max = ts.iter().fold(0.0f64, |m, t| m.max(t.abs()));
    let inv = gil_pelaez_inversion(cf, t_max, quad)?;
    Ok(ts.iter().map(|&t| clamp_probability(inv.cdf(t), "gil_pelaez_cdf")).collect())
}

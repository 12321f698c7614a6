//! Metric grids over array size and AU-IU separation, with contour
//! extraction by linear interpolation along grid edges.

use super::gilpelaez::QuadratureSpec;
use super::tables::Analysis;
use crate::antenna::max_k_max;
use crate::network::{ConfigFile, UserKind};
use crate::{Error, Result};

/// Quantity evaluated in each grid cell.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum SweepMetric {
    /// Idle-user exposure CDF at `t_e` (W).
    EmfeCdf { t_e: f64 },
    /// Joint metric at `(t_c, t_e)`.
    Scaiu { t_c: f64, t_e: f64 },
    /// Joint metric conditioned on coverage at `(t_c, t_e)`.
    CondScaiu { t_c: f64, t_e: f64 },
}

impl SweepMetric {
    pub const NAMES: [&'static str; 3] = ["emfe", "scaiu", "cond_scaiu"];

    pub fn name(&self) -> &'static str {
        match self {
            SweepMetric::EmfeCdf { .. } => "emfe",
            SweepMetric::Scaiu { .. } => "scaiu",
            SweepMetric::CondScaiu { .. } => "cond_scaiu",
        }
    }

    /// Builds a metric from its name and thresholds.
    pub fn parse(name: &str, t_c: f64, t_e: f64) -> Result<Self> {
        match name {
            "emfe" => Ok(SweepMetric::EmfeCdf { t_e }),
            "scaiu" => Ok(SweepMetric::Scaiu { t_c, t_e }),
            "cond_scaiu" => Ok(SweepMetric::CondScaiu { t_c, t_e }),
            _ => Err(Error::Config(format!("unknown metric `{name}` (valid: {})", Self::NAMES.join(", ")))),
        }
    }
}

/// One vertex of a contour polyline.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ContourPoint {
    pub n_elements: f64,
    pub d_m: f64,
}

/// Metric values on the `(N, d)` grid, `values[n][d]`; failed cells hold
/// `None` and their diagnostic in `errors`.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepGrid {
    pub n_list: Vec<usize>,
    pub d_list: Vec<f64>,
    pub values: Vec<Vec<Option<f64>>>,
    pub errors: Vec<(usize, f64, String)>,
}

impl SweepGrid {
    /// Crossings of `level` on every grid edge whose two ends are valid,
    /// ordered by separation then array size.
    pub fn contour(&self, level: f64) -> Vec<ContourPoint> {
        let mut pts = Vec::new();
        let cross = |a: f64, b: f64| -> Option<f64> {
            if (a - level) * (b - level) < 0.0 || (a == level && b != level) {
                Some((level - a) / (b - a))
            } else {
                None
            }
        };
        for (ni, row) in self.values.iter().enumerate() {
            for di in 0..row.len() {
                let here = match row[di] {
                    Some(v) => v,
                    None => continue,
                };
                if ni + 1 < self.values.len() {
                    if let Some(next) = self.values[ni + 1][di] {
                        if let Some(f) = cross(here, next) {
                            let (n0, n1) = (self.n_list[ni] as f64, self.n_list[ni + 1] as f64);
                            pts.push(ContourPoint { n_elements: n0 + f * (n1 - n0), d_m: self.d_list[di] });
                        }
                    }
                }
                if di + 1 < row.len() {
                    if let Some(next) = row[di + 1] {
                        if let Some(f) = cross(here, next) {
                            let (d0, d1) = (self.d_list[di], self.d_list[di + 1]);
                            pts.push(ContourPoint { n_elements: self.n_list[ni] as f64, d_m: d0 + f * (d1 - d0) });
                        }
                    }
                }
            }
        }
        pts.sort_by(|a, b| a.d_m.total_cmp(&b.d_m).then(a.n_elements.total_cmp(&b.n_elements)));
        pts
    }
}

/// Configuration of one grid cell: the template with `N` and `d` replaced and
/// the side-lobe count clamped to what `N` supports.
pub fn cell_config(template: &ConfigFile, n: usize, d: f64) -> ConfigFile {
    ConfigFile { n_elements: n, d_m: d, kmax: template.kmax.min(max_k_max(n)), ..template.clone() }
}

fn sorted<T: PartialOrd>(what: &str, v: &[T]) -> Result<()> {
    if v.is_empty() {
        return Err(Error::Config(format!("{what} must be nonempty")));
    }
    if v.windows(2).any(|w| !(w[0] < w[1])) {
        return Err(Error::Config(format!("{what} must be sorted ascending without repeats")));
    }
    Ok(())
}

fn evaluate(cfg: &ConfigFile, metric: SweepMetric, quad: &QuadratureSpec) -> Result<f64> {
    let an = Analysis::new(&cfg.build()?, quad)?;
    match metric {
        SweepMetric::EmfeCdf { t_e } => Ok(an.emfe_cdfs(UserKind::Idle, &[t_e])?[0]),
        SweepMetric::Scaiu { t_c, t_e } => Ok(an.scaiu_grid(&[t_c], &[t_e])?[0][0].scaiu),
        SweepMetric::CondScaiu { t_c, t_e } => {
            let p = an.scaiu_grid(&[t_c], &[t_e])?[0][0];
            if p.f_cov < 1e-12 {
                return Err(Error::DegenerateDivision(format!("coverage probability {:.3e}", p.f_cov)));
            }
            Ok(p.conditional)
        }
    }
}

/// Evaluates `metric` on the `n_list x d_list` grid.
pub fn contour_sweep(
    template: &ConfigFile,
    n_list: &[usize],
    d_list: &[f64],
    metric: SweepMetric,
    quad: &QuadratureSpec,
) -> Result<SweepGrid> {
    sorted("n_list", n_list)?;
    sorted("d_list", d_list)?;
    let mut values = Vec::new();
    let mut errors = Vec::new();
    for &n in n_list {
        let mut row = Vec::new();
        for &d in d_list {
            match evaluate(&cell_config(template, n, d), metric, quad) {
                Ok(v) => row.push(Some(v)),
                Err(e) => {
                    log::warn!("sweep cell N={n} d={d} failed: {e}");
                    errors.push((n, d, e.to_string()));
                    row.push(None);
                }
            }
        }
        values.push(row);
    }
    Ok(SweepGrid { n_list: n_list.to_vec(), d_list: d_list.to_vec(), values, errors })
}

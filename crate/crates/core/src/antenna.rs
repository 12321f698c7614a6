//! Base-station antenna gain models and their moments.
//!
//! All gains are normalised by the array gain `N`, so the boresight gain is 1
//! for every model. Angles are measured from the beam direction and live in
//! the 120-degree sector `[-pi/3, pi/3)`.

use crate::quad::adaptive_real;
use crate::specfun::{erf_real, pochhammer};
use crate::{ComplexScalar as C, Error, Result};
use serde::{Deserialize, Serialize};
use std::f64::consts::{FRAC_PI_2, FRAC_PI_3, PI};

/// The five gain models.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum PatternKind {
    #[serde(rename = "ula")]
    TheoreticalUla,
    #[serde(rename = "flattop")]
    FlatTop,
    #[serde(rename = "cos")]
    TruncatedCos,
    Gaussian,
    #[serde(rename = "multicos")]
    MultiCos,
}

impl PatternKind {
    pub const ALL: [PatternKind; 5] = [
        PatternKind::TheoreticalUla,
        PatternKind::FlatTop,
        PatternKind::TruncatedCos,
        PatternKind::Gaussian,
        PatternKind::MultiCos,
    ];

    pub fn name(self) -> &'static str {
        match self {
            PatternKind::TheoreticalUla => "ula",
            PatternKind::FlatTop => "flattop",
            PatternKind::TruncatedCos => "cos",
            PatternKind::Gaussian => "gaussian",
            PatternKind::MultiCos => "multicos",
        }
    }

    pub fn parse(s: &str) -> Result<Self> {
        Self::ALL
            .into_iter()
            .find(|k| k.name() == s)
            .ok_or_else(|| Error::Config(format!("unknown pattern `{s}` (expected ula, flattop, cos, gaussian, multicos)")))
    }
}

/// Peak of the Gaussian model: unit (normalised like every other model) or
/// the raw array gain `N`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum GaussianPeak {
    #[default]
    Unit,
    Array,
}

/// Side-lobe positions `x_k` (in `(pi/2) sin(phi)` units) and peak gains
/// `chi_k`, index 0 being the main lobe.
#[derive(Debug, Clone, PartialEq)]
pub struct SideLobeTable {
    pub x_k: Vec<f64>,
    pub chi_k: Vec<f64>,
}

impl SideLobeTable {
    /// Beam-angle of the k-th lobe peak.
    pub fn peak_angle(&self, k: usize) -> f64 {
        (2.0 * self.x_k[k] / PI).asin()
    }
}

/// A validated antenna pattern with its derived constants.
#[derive(Debug, Clone, PartialEq)]
pub struct AntennaPattern {
    pub kind: PatternKind,
    pub n_elements: usize,
    /// Floor gain `g` of the flat-top and Gaussian models.
    pub side_lobe_g: f64,
    /// Highest side-lobe index of the multi-cosine model.
    pub k_max: usize,
    pub gaussian_peak: GaussianPeak,
    phi_3db: f64,
    gaussian_eta: f64,
    /// `chi_0 = 1, chi_1, .., chi_kmax` for the multi-cosine model, `[1]` for
    /// the truncated cosine.
    lobes: Vec<f64>,
}

/// Largest admissible multi-cosine `k_max` for `N` elements.
pub fn max_k_max(n_elements: usize) -> usize {
    let v = (n_elements as f64 * 3f64.sqrt() / 4.0 - 1.0).floor();
    if v < 0.0 {
        0
    } else {
        v as usize
    }
}

impl AntennaPattern {
    /// Builds a pattern; `side_lobe_g = None` selects the first side-lobe level
    /// of the theoretical array with the same `N`.
    pub fn new(kind: PatternKind, n_elements: usize, side_lobe_g: Option<f64>, k_max: usize) -> Result<Self> {
        Self::with_peak(kind, n_elements, side_lobe_g, k_max, GaussianPeak::Unit)
    }

    pub fn with_peak(
        kind: PatternKind,
        n_elements: usize,
        side_lobe_g: Option<f64>,
        k_max: usize,
        gaussian_peak: GaussianPeak,
    ) -> Result<Self> {
        if n_elements < 2 {
            return Err(Error::Config(format!("n_elements must be >= 2, got {n_elements}")));
        }
        let n = n_elements as f64;
        let phi_3db = half_power_angle(n_elements);
        let g = match side_lobe_g {
            Some(g) => g,
            None => side_lobe_peak(n_elements, 1).map(|(_, chi)| chi).unwrap_or(0.05),
        };
        let peak = match gaussian_peak {
            GaussianPeak::Unit => 1.0,
            GaussianPeak::Array => n,
        };
        let mut gaussian_eta = 0.0;
        let mut lobes = vec![1.0];
        match kind {
            PatternKind::FlatTop => {
                if !(0.0..1.0).contains(&g) {
                    return Err(Error::Config(format!("flat-top side_lobe_g must lie in [0, 1), got {g}")));
                }
            }
            PatternKind::Gaussian => {
                if !(g > 0.0 && g < 0.5 * peak) {
                    return Err(Error::Config(format!("gaussian side_lobe_g must lie in (0, peak/2), got {g}")));
                }
                gaussian_eta = ((peak - g) / (0.5 * peak - g)).ln() / (phi_3db * phi_3db);
            }
            PatternKind::MultiCos => {
                let table = side_lobe_table(n_elements, k_max)?;
                lobes = table.chi_k;
            }
            PatternKind::TheoreticalUla | PatternKind::TruncatedCos => {}
        }
        let k_max = if kind == PatternKind::MultiCos { k_max } else { 0 };
        Ok(Self { kind, n_elements, side_lobe_g: g, k_max, gaussian_peak, phi_3db, gaussian_eta, lobes })
    }

    /// Half of the half-power beamwidth of the theoretical array.
    pub fn phi_3db(&self) -> f64 {
        self.phi_3db
    }

    /// Gaussian decay constant `eta`.
    pub fn gaussian_eta(&self) -> f64 {
        self.gaussian_eta
    }

    /// Peak gain of the Gaussian model (1 or `N`).
    pub fn gaussian_peak_value(&self) -> f64 {
        match self.gaussian_peak {
            GaussianPeak::Unit => 1.0,
            GaussianPeak::Array => self.n_elements as f64,
        }
    }

    /// Lobe amplitudes `chi_0..chi_kmax` of the cosine-family models.
    pub fn lobe_gains(&self) -> &[f64] {
        &self.lobes
    }

    /// Probability that a uniform beam angle falls in one cosine lobe.
    pub fn lobe_mass(&self) -> f64 {
        6.0 / (self.n_elements as f64 * PI)
    }

    /// Probability that the flat-top gain equals 1.
    pub fn flat_top_mass(&self) -> f64 {
        3.0 * self.phi_3db / PI
    }

    /// Gain at beam-angle `phi`, checked against the sector.
    pub fn gain(&self, phi: f64) -> Result<f64> {
        if !(-FRAC_PI_3..FRAC_PI_3).contains(&phi) {
            return Err(Error::Domain { what: "gain", detail: format!("phi={phi} outside [-pi/3, pi/3)") });
        }
        Ok(self.gain_unchecked(phi))
    }

    /// Gain without the sector check.
    pub fn gain_unchecked(&self, phi: f64) -> f64 {
        let n = self.n_elements as f64;
        let a = phi.abs();
        match self.kind {
            PatternKind::TheoreticalUla => ula_gain(self.n_elements, phi),
            PatternKind::FlatTop => {
                if a <= self.phi_3db {
                    1.0
                } else {
                    self.side_lobe_g
                }
            }
            PatternKind::Gaussian => {
                let g = self.side_lobe_g;
                (self.gaussian_peak_value() - g) * (-self.gaussian_eta * phi * phi).exp() + g
            }
            PatternKind::TruncatedCos | PatternKind::MultiCos => {
                if a <= 2.0 / n {
                    let c = (n * PI * phi / 4.0).cos();
                    return c * c;
                }
                let k = ((a * n / 2.0).ceil() as usize).saturating_sub(1);
                if k == 0 || k >= self.lobes.len() {
                    return 0.0;
                }
                let s = (n * PI * phi / 2.0).sin();
                self.lobes[k] * s * s
            }
        }
    }

    /// Angles in `(0, pi/3)` where the gain is not smooth.
    pub fn breakpoints(&self) -> Vec<f64> {
        let n = self.n_elements as f64;
        let mut b = match self.kind {
            PatternKind::FlatTop => vec![self.phi_3db],
            PatternKind::TruncatedCos | PatternKind::MultiCos => {
                (1..=self.lobes.len()).map(|k| 2.0 * k as f64 / n).collect()
            }
            PatternKind::TheoreticalUla => {
                (1..self.n_elements).map(|k| (2.0 * k as f64 / n).min(1.0).asin()).collect()
            }
            PatternKind::Gaussian => vec![self.phi_3db],
        };
        b.retain(|x| *x > 0.0 && *x < FRAC_PI_3);
        b
    }
}

/// Uniform linear array gain with half-wavelength spacing.
pub fn ula_gain(n_elements: usize, phi: f64) -> f64 {
    let n = n_elements as f64;
    let x = FRAC_PI_2 * phi.sin();
    let s = x.sin();
    if s.abs() < 1e-12 {
        return 1.0;
    }
    let num = (n * x).sin();
    (num * num) / (n * n * s * s)
}

/// Half of the half-power beamwidth of the `N`-element array.
pub fn half_power_angle(n_elements: usize) -> f64 {
    let (mut lo, mut hi) = (0.0, 2.0 / n_elements as f64);
    while hi - lo > 1e-15 {
        let mid = 0.5 * (lo + hi);
        if ula_gain(n_elements, mid) > 0.5 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

/// The k-th side-lobe peak `(x_k, chi_k)`: root of
/// `N sin x cos Nx - sin Nx cos x` between `k pi/N` and `(k+1/2) pi/N`.
fn side_lobe_peak(n_elements: usize, k: usize) -> Result<(f64, f64)> {
    let n = n_elements as f64;
    let h = |x: f64| n * x.sin() * (n * x).cos() - (n * x).sin() * x.cos();
    let (mut lo, mut hi) = (k as f64 * PI / n, (k as f64 + 0.5) * PI / n);
    if hi >= FRAC_PI_2 {
        return Err(Error::Config(format!("side lobe {k} does not exist for N={n_elements}")));
    }
    let (hlo, hhi) = (h(lo), h(hi));
    if hlo * hhi > 0.0 {
        return Err(Error::Config(format!("side lobe {k} bracket failed for N={n_elements}")));
    }
    let positive_low = hlo > 0.0;
    while hi - lo > 1e-15 * hi {
        let mid = 0.5 * (lo + hi);
        if (h(mid) > 0.0) == positive_low {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let x = 0.5 * (lo + hi);
    let chi = (n * x).sin().powi(2) / (n * n * x.sin().powi(2));
    Ok((x, chi))
}

/// Side-lobe positions and levels for `k = 0..=k_max`.
pub fn side_lobe_table(n_elements: usize, k_max: usize) -> Result<SideLobeTable> {
    if n_elements < 2 {
        return Err(Error::Config(format!("n_elements must be >= 2, got {n_elements}")));
    }
    let limit = max_k_max(n_elements);
    if k_max > limit {
        return Err(Error::Config(format!(
            "k_max={k_max} exceeds floor(N*sqrt(3)/4 - 1) = {limit} for N={n_elements}"
        )));
    }
    let mut x_k = vec![0.0];
    let mut chi_k = vec![1.0];
    for k in 1..=k_max {
        let (x, chi) = side_lobe_peak(n_elements, k)?;
        x_k.push(x);
        chi_k.push(chi);
    }
    Ok(SideLobeTable { x_k, chi_k })
}

fn binomial(n: usize, k: usize) -> f64 {
    (0..k).fold(1.0, |acc, i| acc * (n - i) as f64 / (i + 1) as f64)
}

/// Closed-form k-th moment of the gain for a uniform beam angle.
pub fn gain_moment(pattern: &AntennaPattern, k: usize) -> Result<f64> {
    if k == 0 {
        return Ok(1.0);
    }
    let n = pattern.n_elements as f64;
    let kf = k as i32;
    match pattern.kind {
        PatternKind::TheoreticalUla => Err(Error::Unsupported(
            "no closed-form moment for the theoretical array; use gain_moment_quadrature".into(),
        )),
        PatternKind::FlatTop => {
            let p = pattern.flat_top_mass();
            let g = pattern.side_lobe_g;
            Ok(p * (1.0 - g.powi(kf)) + g.powi(kf))
        }
        PatternKind::TruncatedCos | PatternKind::MultiCos => {
            let base = 6.0 / (n * PI) * cos_power_mean(k);
            let side: f64 = pattern.lobes[1..].iter().map(|c| c.powi(kf)).sum();
            Ok(base * (1.0 + side))
        }
        PatternKind::Gaussian => {
            let g = pattern.side_lobe_g;
            let span = pattern.gaussian_peak_value() - g;
            let eta = pattern.gaussian_eta;
            let mut s = g.powi(kf);
            for p in 1..=k {
                let pe = p as f64 * eta;
                let e = erf_real(PI * pe.sqrt() / 3.0) / (PI * pe).sqrt();
                s += 1.5 * binomial(k, p) * span.powi(p as i32) * g.powi((k - p) as i32) * e;
            }
            Ok(s)
        }
    }
}

/// `(1/2)_k / k!`, the mean of `cos^(2k)` over a period.
fn cos_power_mean(k: usize) -> f64 {
    let num = pochhammer(C::new(0.5, 0.0), k).re;
    let fact: f64 = (1..=k).map(|i| i as f64).product();
    num / fact
}

/// Oracle for [`gain_moment`]: adaptive quadrature of
/// `(3/(2 pi)) int_{-pi/3}^{pi/3} G^k(phi) dphi`.
pub fn gain_moment_quadrature(pattern: &AntennaPattern, k: usize) -> f64 {
    let bps = pattern.breakpoints();
    let kf = k as i32;
    let v = adaptive_real(|phi| pattern.gain_unchecked(phi).powi(kf), 0.0, FRAC_PI_3, &bps, 1e-14);
    3.0 / PI * v
}

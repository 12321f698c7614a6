//! Network configuration, geometry and propagation.
//!
//! Everything is SI internally (W, m, Hz, rad). Decibel units appear only in
//! [`ConfigFile`] and the conversion helpers.

use crate::antenna::{AntennaPattern, GaussianPeak, PatternKind};
use crate::{Error, Result};
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};
use std::f64::consts::PI;

/// Speed of light in vacuum, m/s.
pub const SPEED_OF_LIGHT: f64 = 299_792_458.0;
/// Boltzmann constant, J/K.
pub const BOLTZMANN: f64 = 1.380_649e-23;
/// Reference noise temperature, K.
pub const T0: f64 = 290.0;

pub fn dbm_to_w(dbm: f64) -> f64 {
    10f64.powf((dbm - 30.0) / 10.0)
}

pub fn w_to_dbm(w: f64) -> f64 {
    10.0 * w.log10() + 30.0
}

pub fn db_to_lin(db: f64) -> f64 {
    10f64.powf(db / 10.0)
}

pub fn lin_to_db(x: f64) -> f64 {
    10.0 * x.log10()
}

/// Which user the exposure metric refers to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum UserKind {
    /// Served user at the origin.
    #[serde(rename = "au")]
    Active,
    /// Idle user at distance `d` from the active user.
    #[serde(rename = "iu")]
    Idle,
    /// User uncorrelated with any active user's position.
    #[serde(rename = "ru")]
    Random,
}

impl UserKind {
    pub fn name(self) -> &'static str {
        match self {
            UserKind::Active => "au",
            UserKind::Idle => "iu",
            UserKind::Random => "ru",
        }
    }

    pub fn parse(s: &str) -> Result<Self> {
        match s {
            "au" => Ok(UserKind::Active),
            "iu" => Ok(UserKind::Idle),
            "ru" => Ok(UserKind::Random),
            _ => Err(Error::Config(format!("unknown user kind `{s}` (expected au, iu, ru)"))),
        }
    }
}

/// Validated network parameters.
#[derive(Debug, Clone, PartialEq)]
pub struct NetworkConfig {
    pub carrier_freq: f64,
    pub bandwidth: f64,
    /// BS density per m^2.
    pub density: f64,
    pub disk_radius: f64,
    pub bs_height: f64,
    /// Transmit power including array gain, W.
    pub eirp: f64,
    pub exclusion_radius: f64,
    pub pathloss_exp: f64,
    pub nakagami_m: u32,
    pub noise_figure_db: f64,
    pub noise_power_override: Option<f64>,
    pub pattern: AntennaPattern,
    /// AU-IU separation, m.
    pub separation: f64,
}

impl NetworkConfig {
    /// The simulation parameters used throughout: multi-cosine pattern, N = 64,
    /// m = 1, d = 10 m and the -95.40 dBm noise override.
    pub fn reference() -> Self {
        ConfigFile::default().build().expect("default configuration is valid")
    }

    pub fn validate(&self) -> Result<()> {
        let pos = |name: &str, v: f64| {
            if v.is_finite() && v > 0.0 {
                Ok(())
            } else {
                Err(Error::Config(format!("{name} must be positive and finite, got {v}")))
            }
        };
        pos("f_hz", self.carrier_freq)?;
        pos("bw_hz", self.bandwidth)?;
        pos("lambda_per_km2", self.density)?;
        pos("tau_m", self.disk_radius)?;
        pos("pt_dbm", self.eirp)?;
        if !(self.bs_height.is_finite() && self.bs_height >= 0.0) {
            return Err(Error::Config(format!("z_m must be >= 0, got {}", self.bs_height)));
        }
        if !(self.exclusion_radius >= 0.0 && self.exclusion_radius < self.disk_radius) {
            return Err(Error::Config(format!(
                "re_m must satisfy 0 <= re_m < tau_m, got re_m={} tau_m={}",
                self.exclusion_radius, self.disk_radius
            )));
        }
        if !(self.pathloss_exp > 2.0 && self.pathloss_exp.is_finite()) {
            return Err(Error::Config(format!("alpha must exceed 2, got {}", self.pathloss_exp)));
        }
        if self.nakagami_m < 1 {
            return Err(Error::Config("m must be an integer >= 1".into()));
        }
        if let Some(s) = self.noise_power_override {
            if !(s >= 0.0 && s.is_finite()) {
                return Err(Error::Config(format!("sigma2 override must be >= 0, got {s}")));
            }
        }
        if !(self.separation >= 0.0 && self.separation < self.mean_cell_radius()) {
            return Err(Error::Config(format!(
                "d_m={} must lie in [0, mean cell radius {:.3} m)",
                self.separation,
                self.mean_cell_radius()
            )));
        }
        Ok(())
    }

    /// `kappa = (4 pi f / c)^2`.
    pub fn kappa(&self) -> f64 {
        (4.0 * PI * self.carrier_freq / SPEED_OF_LIGHT).powi(2)
    }

    /// `delta = 2 / alpha`.
    pub fn delta(&self) -> f64 {
        2.0 / self.pathloss_exp
    }

    /// `(2 sqrt(lambda))^-1`.
    pub fn mean_cell_radius(&self) -> f64 {
        0.5 / self.density.sqrt()
    }

    /// Mean received power `P_t l(r)` from a BS at horizontal distance `r`.
    pub fn mean_power(&self, r: f64) -> f64 {
        self.eirp * pathloss(self, r)
    }

    /// Probability mass of the nearest-BS law on `(r_e, tau]` before
    /// normalisation.
    fn nearest_mass(&self) -> (f64, f64) {
        let lp = self.density * PI;
        let a = (-lp * self.exclusion_radius.powi(2)).exp();
        let b = (-lp * self.disk_radius.powi(2)).exp();
        (a, b)
    }

    /// Inverse CDF of the nearest-BS distance.
    pub fn nearest_bs_quantile(&self, u: f64) -> f64 {
        let (a, b) = self.nearest_mass();
        let lp = self.density * PI;
        let r = (-(a - u * (a - b)).ln() / lp).sqrt();
        r.clamp(self.exclusion_radius, self.disk_radius)
    }

    /// CDF of the nearest-BS distance on `(r_e, tau]`.
    pub fn nearest_bs_cdf(&self, r: f64) -> f64 {
        let (a, b) = self.nearest_mass();
        let r = r.clamp(self.exclusion_radius, self.disk_radius);
        (a - (-self.density * PI * r * r).exp()) / (a - b)
    }
}

/// Nearest-BS distance density on `(r_e, tau]`.
pub fn nearest_bs_pdf(cfg: &NetworkConfig, r: f64) -> Result<f64> {
    if !(r > cfg.exclusion_radius && r <= cfg.disk_radius) {
        return Err(Error::Domain {
            what: "nearest_bs_pdf",
            detail: format!("r={r} outside ({}, {}]", cfg.exclusion_radius, cfg.disk_radius),
        });
    }
    let (a, b) = cfg.nearest_mass();
    let lp = cfg.density * PI;
    Ok(2.0 * lp * r * (-lp * r * r).exp() / (a - b))
}

/// Channel power gain `kappa^-1 (r^2 + z^2)^(-alpha/2)`.
pub fn pathloss(cfg: &NetworkConfig, r: f64) -> f64 {
    (r * r + cfg.bs_height * cfg.bs_height).powf(-0.5 * cfg.pathloss_exp) / cfg.kappa()
}

/// Distance `W` and angular offset `delta` of the idle user seen from a BS at
/// distance `r0` and angle `theta` relative to the AU-IU axis.
pub fn iu_geometry(r0: f64, theta: f64, d: f64) -> Result<(f64, f64)> {
    if !(r0 > 0.0 && d >= 0.0) {
        return Err(Error::Domain { what: "iu_geometry", detail: format!("r0={r0}, d={d}") });
    }
    if d == 0.0 {
        return Ok((r0, 0.0));
    }
    let w2 = r0 * r0 + d * d - 2.0 * r0 * d * theta.cos();
    let w = w2.max(0.0).sqrt();
    if w <= 1e-12 * r0 {
        return Err(Error::DegenerateGeometry(format!("idle user coincides with BS (r0={r0}, theta={theta}, d={d})")));
    }
    let c = ((r0 - d * theta.cos()) / w).clamp(-1.0, 1.0);
    let sign = if theta < 0.0 { -1.0 } else { 1.0 };
    Ok((w, sign * c.acos()))
}

/// Thermal noise power in W, or the override if set.
pub fn noise_power(cfg: &NetworkConfig) -> f64 {
    cfg.noise_power_override
        .unwrap_or_else(|| BOLTZMANN * T0 * cfg.bandwidth * db_to_lin(cfg.noise_figure_db))
}

/// Incident power density corresponding to received power `p`.
pub fn emfe_to_ipd(cfg: &NetworkConfig, p: f64) -> f64 {
    cfg.kappa() / (4.0 * PI) * p
}

/// Flat key-value configuration file in the units of the simulation table.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct ConfigFile {
    pub f_hz: f64,
    pub bw_hz: f64,
    pub lambda_per_km2: f64,
    pub tau_m: f64,
    pub z_m: f64,
    pub pt_dbm: f64,
    pub re_m: f64,
    pub n_elements: usize,
    pub alpha: f64,
    pub m: u32,
    pub kmax: usize,
    pub d_m: f64,
    /// Noise power override; ignored when `noise_from_formula` is set.
    pub sigma2_dbm: f64,
    pub noise_from_formula: bool,
    pub noise_figure_db: f64,
    pub pattern: PatternKind,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub side_lobe_g: Option<f64>,
    pub gaussian_peak: GaussianPeak,
}

impl Default for ConfigFile {
    fn default() -> Self {
        Self {
            f_hz: 3.5e9,
            bw_hz: 20e6,
            lambda_per_km2: 10.0,
            tau_m: 3000.0,
            z_m: 30.0,
            pt_dbm: 48.0,
            re_m: 0.3,
            n_elements: 64,
            alpha: 3.25,
            m: 1,
            kmax: 10,
            d_m: 10.0,
            sigma2_dbm: -95.40,
            noise_from_formula: false,
            noise_figure_db: 6.0,
            pattern: PatternKind::MultiCos,
            side_lobe_g: None,
            gaussian_peak: GaussianPeak::Unit,
        }
    }
}

impl ConfigFile {
    pub fn from_toml(text: &str) -> Result<Self> {
        toml::from_str(text).map_err(|e| Error::Config(e.to_string()))
    }

    /// Canonical serialisation: fixed key order, defaults made explicit.
    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("config serialises")
    }

    /// SHA-256 of the canonical serialisation, hex encoded.
    pub fn config_hash(&self) -> String {
        hex::encode(Sha256::digest(self.to_toml().as_bytes()))
    }

    pub fn build(&self) -> Result<NetworkConfig> {
        let pattern = AntennaPattern::with_peak(
            self.pattern,
            self.n_elements,
            self.side_lobe_g,
            self.kmax,
            self.gaussian_peak,
        )?;
        let cfg = NetworkConfig {
            carrier_freq: self.f_hz,
            bandwidth: self.bw_hz,
            density: self.lambda_per_km2 * 1e-6,
            disk_radius: self.tau_m,
            bs_height: self.z_m,
            eirp: dbm_to_w(self.pt_dbm),
            exclusion_radius: self.re_m,
            pathloss_exp: self.alpha,
            nakagami_m: self.m,
            noise_figure_db: self.noise_figure_db,
            noise_power_override: (!self.noise_from_formula).then(|| dbm_to_w(self.sigma2_dbm)),
            pattern,
            separation: self.d_m,
        };
        cfg.validate()?;
        Ok(cfg)
    }
}

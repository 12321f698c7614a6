//! Performance metrics by numerical inversion of the closed-form CFs:
//! exposure CDFs, SINR coverage, the joint coverage-and-exposure
//! probability (SCAIU), its conditional form, Frechet bounds and `(N, d)`
//! sweeps.

pub mod gilpelaez;
pub mod joint;
pub mod marginals;
pub mod sweep;
pub mod tables;

pub use gilpelaez::{
    clamp_event_count, clamp_probability, gil_pelaez_cdf, gil_pelaez_cdfs, gil_pelaez_inversion, Inversion,
    QuadratureSpec,
};
pub use joint::{frechet_bounds, scaiu, scaiu_conditional, JointPoint};
pub use marginals::{coverage_ccdf, emfe_cdf, signal_and_interference_cdfs};
pub use sweep::{cell_config, contour_sweep, ContourPoint, SweepGrid, SweepMetric};
pub use tables::{network_hash, Analysis};

use crate::network::UserKind;

/// Which distribution function a curve samples.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum MetricKind {
    EmfeCdf,
    SignalCdf,
    InterferenceCdf,
    SinrCcdf,
    SnrCcdf,
    Scaiu,
    CondScaiu,
    FrechetLB,
    FrechetUB,
}

impl MetricKind {
    pub fn name(self) -> &'static str {
        match self {
            MetricKind::EmfeCdf => "emfe_cdf",
            MetricKind::SignalCdf => "signal_cdf",
            MetricKind::InterferenceCdf => "interference_cdf",
            MetricKind::SinrCcdf => "sinr_ccdf",
            MetricKind::SnrCcdf => "snr_ccdf",
            MetricKind::Scaiu => "scaiu",
            MetricKind::CondScaiu => "cond_scaiu",
            MetricKind::FrechetLB => "frechet_lb",
            MetricKind::FrechetUB => "frechet_ub",
        }
    }

    /// Whether the curve is nondecreasing in its threshold.
    pub fn is_cdf(self) -> bool {
        matches!(self, MetricKind::EmfeCdf | MetricKind::SignalCdf | MetricKind::InterferenceCdf)
    }
}

/// A distribution function sampled on a threshold grid. Thresholds are in W
/// for exposure metrics and linear ratios for SINR metrics.
#[derive(Debug, Clone, PartialEq)]
pub struct CdfCurve {
    pub thresholds: Vec<f64>,
    pub values: Vec<f64>,
    pub user_kind: UserKind,
    pub metric: MetricKind,
    pub config_hash: String,
    pub method: String,
}

impl CdfCurve {
    /// Largest absolute difference to another curve on the same grid.
    pub fn sup_distance(&self, other: &[f64]) -> f64 {
        self.values.iter().zip(other).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max)
    }
}

//! Special functions of real and complex argument.
//!
//! Every routine is a pure function. Series expansions are governed by
//! [`SeriesControl`]; failures surface as [`crate::Error`] values instead of
//! non-finite numbers.

mod appell;
mod gamma;
mod hyper;
mod incomplete;
mod trig;

pub use appell::{appell_f1, appell_f1_integral, appell_f1_series};
pub use gamma::{gamma, is_nonpositive_integer, ln_gamma, pochhammer, rgamma};
pub use hyper::{hyp2f1, hyp2f1_minus_one, hyp3f2, hyp3f2_series, series_pfq};
pub use incomplete::{inc_beta, upper_inc_gamma};
pub use trig::{sine_integral, spherical_bessel_j};

use crate::{Error, Result};

/// Convergence control for infinite series.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SeriesControl {
    pub rel_tol: f64,
    pub max_terms: usize,
}

impl Default for SeriesControl {
    fn default() -> Self {
        Self { rel_tol: 1e-12, max_terms: 20_000 }
    }
}

impl SeriesControl {
    /// Tolerance used inside the characteristic-function layer.
    pub const fn tight() -> Self {
        Self { rel_tol: 1e-15, max_terms: 20_000 }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.rel_tol > 0.0) || self.max_terms == 0 {
            return Err(Error::Domain {
                what: "SeriesControl",
                detail: format!("rel_tol={} max_terms={}", self.rel_tol, self.max_terms),
            });
        }
        Ok(())
    }
}

/// Standard error function.
pub fn erf_real(x: f64) -> f64 {
    libm::erf(x)
}

pub(crate) fn finite(what: &'static str, v: crate::ComplexScalar) -> Result<crate::ComplexScalar> {
    if v.re.is_finite() && v.im.is_finite() {
        Ok(v)
    } else {
        Err(Error::NonConvergence { what, terms: 0 })
    }
}

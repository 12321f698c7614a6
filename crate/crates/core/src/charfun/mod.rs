//! Characteristic functions of the useful signal and the interference.
//!
//! Closed forms live in [`closed`], direct-expectation oracles in [`oracle`]
//! and the pairwise factor of the joint metric in [`pair`]. Every CF obeys
//! `phi(-q) = conj(phi(q))`; the closed forms are evaluated for `q >= 0` and
//! conjugated otherwise.

pub mod closed;
pub mod oracle;
pub mod pair;

pub use closed::{
    cf_interference, cf_signal_au, cf_signal_iu, cf_sinr_integrand, eta_i, eta_i_antiderivative, eta_s,
    interference_atom, zero_gain_mass,
};
pub use oracle::{cf_interference_oracle, cf_signal_au_oracle, cf_signal_iu_oracle, eta_i_oracle, eta_s_oracle};

use crate::antenna::PatternKind;
use crate::network::NetworkConfig;
use crate::Error;

/// Per-BS beam-averaged CF: the closed form where available, the oracle for
/// the theoretical array or where the Gaussian series does not converge.
pub fn eta_s_auto(cfg: &NetworkConfig, q: f64, pbar: f64) -> Result<C> {
    if cfg.pattern.kind == PatternKind::TheoreticalUla {
        return eta_s_oracle(cfg, q, pbar);
    }
    match eta_s(cfg, q, pbar) {
        Err(Error::NonConvergence { .. }) => eta_s_oracle(cfg, q, pbar),
        v => v,
    }
}

/// Interference exponent with the same fallback policy as [`eta_s_auto`].
pub fn eta_i_auto(cfg: &NetworkConfig, q: f64, r0: f64) -> Result<C> {
    if cfg.pattern.kind == PatternKind::TheoreticalUla {
        return eta_i_oracle(cfg, q, r0);
    }
    match eta_i(cfg, q, r0) {
        Err(Error::NonConvergence { .. }) => eta_i_oracle(cfg, q, r0),
        v => v,
    }
}
pub use pair::{gamma_pm, gamma_pm_oracle, gamma_pm_pgfl, PairSign};

use crate::{ComplexScalar as C, Result};


/// Which evaluator produced a CF value.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum CfMethod {
    ClosedForm,
    Oracle,
}

impl CfMethod {
    pub fn name(self) -> &'static str {
        match self {
            CfMethod::ClosedForm => "closed_form",
            CfMethod::Oracle => "oracle",
        }
    }
}

/// A CF sample.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CfEvaluation {
    pub q: f64,
    pub value: C,
    pub method: CfMethod,
}

/// A characteristic function with finitely many point masses.
///
/// `eval(q) = sum_k a_k exp(j q c_k) + psi(q)` over the atoms `(c_k, a_k)`,
/// where `psi` is the CF part of the continuous component and tends to zero
/// as `q` grows.
pub trait CharFn: Sync {
    fn eval(&self, q: f64) -> Result<C>;

    /// Point masses as `(location, probability)` pairs.
    fn atoms(&self) -> Vec<(f64, f64)> {
        Vec::new()
    }

    /// Typical magnitude of the random variable, used to place the
    /// integration grid.
    fn scale(&self) -> f64;
}

/// Evaluates `f(|q|)` and conjugates it for negative `q`.
pub(crate) fn with_conjugation<F: FnOnce(f64) -> Result<C>>(q: f64, f: F) -> Result<C> {
    if q < 0.0 {
        f(-q).map(|v| v.conj())
    } else {
        f(q)
    }
}

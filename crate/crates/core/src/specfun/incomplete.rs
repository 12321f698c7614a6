//! Incomplete gamma and beta functions of complex argument.

use super::gamma::{gamma, is_nonpositive_integer};
use super::hyper::{cpow, hyp2f1};
use super::{finite, SeriesControl};
use crate::{ComplexScalar as C, Error, Result};

/// Upper incomplete gamma `Gamma(a, z)` on the principal branch.
///
/// Small `|z|`: `Gamma(a) - sum (-1)^k z^(a+k) / (k! (a+k))`. Otherwise the
/// Legendre continued fraction.
pub fn upper_inc_gamma(a: C, z: C) -> Result<C> {
    if z == C::new(0.0, 0.0) {
        if a.re > 0.0 {
            return gamma(a);
        }
        return Err(Error::Domain { what: "upper_inc_gamma", detail: format!("a={a} at z=0") });
    }
    if z.im == 0.0 && z.re < 0.0 {
        return Err(Error::BranchCut { what: "upper_inc_gamma", at: format!("{z}") });
    }
    let use_series = z.norm() <= 6.0 || (z.re < 0.0 && z.norm() < 30.0);
    if use_series {
        if is_nonpositive_integer(a) {
            return Err(Error::Pole { what: "upper_inc_gamma", at: format!("a={a}") });
        }
        let mut term = C::new(1.0, 0.0);
        let mut sum = (a).inv();
        for k in 1..2000 {
            term *= -z / k as f64;
            let add = term / (a + k as f64);
            sum += add;
            if add.norm() < 1e-17 * sum.norm() {
                return finite("upper_inc_gamma", gamma(a)? - cpow(z, a) * sum);
            }
        }
        return Err(Error::NonConvergence { what: "upper_inc_gamma", terms: 2000 });
    }
    let tiny = 1e-300;
    let b0 = z + 1.0 - a;
    let mut c = C::new(1.0 / tiny, 0.0);
    let mut d = b0.inv();
    let mut h = d;
    for i in 1..5000 {
        let fi = i as f64;
        let an = (a - fi) * fi;
        let b = b0 + 2.0 * fi;
        d = b + d * an;
        if d.norm() < tiny {
            d = C::new(tiny, 0.0);
        }
        c = b + c.inv() * an;
        if c.norm() < tiny {
            c = C::new(tiny, 0.0);
        }
        d = d.inv();
        let del = d * c;
        h *= del;
        if (del - 1.0).norm() < 1e-16 {
            return finite("upper_inc_gamma", (-z).exp() * cpow(z, a) * h);
        }
    }
    Err(Error::NonConvergence { what: "upper_inc_gamma", terms: 5000 })
}

/// Incomplete beta `B(z; a, b) = z^a / a * 2F1(a, 1-b; a+1; z)`.
pub fn inc_beta(z: C, a: C, b: C) -> Result<C> {
    if is_nonpositive_integer(a) {
        return Err(Error::Pole { what: "inc_beta", at: format!("a={a}") });
    }
    if z == C::new(0.0, 0.0) {
        return Ok(z);
    }
    let f = hyp2f1(a, C::new(1.0, 0.0) - b, a + 1.0, z, SeriesControl::tight())?;
    finite("inc_beta", cpow(z, a) / a * f)
}

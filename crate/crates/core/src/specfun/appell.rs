//! Appell's first hypergeometric function of two variables.

use super::gamma::{gamma, is_nonpositive_integer, rgamma};
use super::hyper::{cpow, hyp2f1};
use super::{finite, SeriesControl};
use crate::quad::adaptive;
use crate::{ComplexScalar as C, Error, Result};

const ONE: C = C { re: 1.0, im: 0.0 };
const ZERO: C = C { re: 0.0, im: 0.0 };

fn on_cut(x: C) -> bool {
    x.im == 0.0 && x.re >= 1.0
}

/// Appell `F1(a; b1, b2; c; x, y)`.
///
/// The Euler integral is used when `Re c > Re a > 0`, the double series
/// otherwise (requires `|x|, |y| < 1`).
pub fn appell_f1(a: C, b1: C, b2: C, c: C, x: C, y: C, ctl: SeriesControl) -> Result<C> {
    ctl.validate()?;
    if is_nonpositive_integer(c) {
        return Err(Error::Pole { what: "appell_f1", at: format!("c={c}") });
    }
    if on_cut(x) || on_cut(y) {
        return Err(Error::BranchCut { what: "appell_f1", at: format!("x={x} y={y}") });
    }
    if y == ZERO {
        return hyp2f1(a, b1, c, x, ctl);
    }
    if x == ZERO {
        return hyp2f1(a, b2, c, y, ctl);
    }
    if c.re > a.re && a.re > 0.0 {
        return appell_f1_integral(a, b1, b2, c, x, y, ctl);
    }
    if x.norm() < 1.0 && y.norm() < 1.0 {
        return appell_f1_series(a, b1, b2, c, x, y, ctl);
    }
    Err(Error::NonConvergence { what: "appell_f1", terms: 0 })
}

/// Double series `sum (a)_{m+n} (b1)_m (b2)_n / ((c)_{m+n} m! n!) x^m y^n`.
pub fn appell_f1_series(a: C, b1: C, b2: C, c: C, x: C, y: C, ctl: SeriesControl) -> Result<C> {
    if !(x.norm() < 1.0 && y.norm() < 1.0) {
        return Err(Error::Domain { what: "appell_f1_series", detail: format!("x={x} y={y}") });
    }
    let mut outer = ONE;
    let mut sum = ZERO;
    let mut small = 0;
    for m in 0..ctl.max_terms {
        let mf = m as f64;
        if m > 0 {
            outer *= (a + mf - 1.0) * (b1 + mf - 1.0) / ((c + mf - 1.0) * mf) * x;
        }
        // Inner sum over n is 2F1(a+m, b2; c+m; y) as a plain series.
        let (am, cm) = (a + mf, c + mf);
        let mut term = ONE;
        let mut inner = ONE;
        let mut inner_small = 0;
        let mut converged = false;
        for n in 0..ctl.max_terms {
            let nf = n as f64;
            let ratio = (am + nf) * (b2 + nf) / ((cm + nf) * (nf + 1.0)) * y;
            term *= ratio;
            inner += term;
            if term == ZERO || (term.norm() <= ctl.rel_tol * inner.norm() && ratio.norm() < 0.99) {
                inner_small += 1;
                if inner_small >= 2 || term == ZERO {
                    converged = true;
                    break;
                }
            } else {
                inner_small = 0;
            }
        }
        if !converged {
            return Err(Error::NonConvergence { what: "appell_f1_series", terms: ctl.max_terms });
        }
        let add = outer * inner;
        sum += add;
        if outer == ZERO {
            return finite("appell_f1_series", sum);
        }
        if add.norm() <= ctl.rel_tol * sum.norm() && m > 2 {
            small += 1;
            if small >= 2 {
                return finite("appell_f1_series", sum);
            }
        } else {
            small = 0;
        }
    }
    Err(Error::NonConvergence { what: "appell_f1_series", terms: ctl.max_terms })
}

/// Euler integral `Gamma(c)/(Gamma(a)Gamma(c-a)) int_0^1 t^(a-1) (1-t)^(c-a-1)
/// (1-xt)^(-b1) (1-yt)^(-b2) dt`, valid for `Re c > Re a > 0`.
pub fn appell_f1_integral(a: C, b1: C, b2: C, c: C, x: C, y: C, ctl: SeriesControl) -> Result<C> {
    if !(c.re > a.re && a.re > 0.0) {
        return Err(Error::Domain { what: "appell_f1_integral", detail: format!("a={a} c={c}") });
    }
    if on_cut(x) || on_cut(y) {
        return Err(Error::BranchCut { what: "appell_f1", at: format!("x={x} y={y}") });
    }
    let ca = c - a;
    let (ar, cr) = (a.re, ca.re);
    let kernel = |t: f64| cpow(ONE - x * t, -b1) * cpow(ONE - y * t, -b2);
    let tol = ctl.rel_tol.max(1e-14);
    // Left half, split at t_min well below the kinks at |1/x|, |1/y|:
    // t = u^(1/ar) on [0, t_min] absorbs t^(a-1) dt, t = e^w above it.
    let kink = [x, y].iter().map(|w| w.inv().norm()).fold(f64::INFINITY, f64::min);
    let t_min = (1e-3 * kink).min(0.5);
    let head = |t: f64| cpow(C::new(1.0 - t, 0.0), ca - 1.0) * kernel(t);
    let left_low = adaptive(
        |u: f64| {
            if u == 0.0 {
                return Ok(if a.im == 0.0 { head(0.0) / ar } else { ZERO });
            }
            let t = u.powf(1.0 / ar);
            Ok(cpow(C::new(t, 0.0), a - ar) / ar * head(t))
        },
        0.0,
        t_min.powf(ar),
        &[],
        0.0,
        tol,
    )?;
    let mut bps = Vec::new();
    for w in [x, y] {
        let tb = w.inv().norm();
        for f in [0.1, 0.3, 1.0, 3.0, 10.0] {
            if tb * f > t_min && tb * f < 0.5 {
                bps.push((tb * f).ln());
            }
        }
    }
    let left_high = if t_min < 0.5 {
        let (lo, hi) = (t_min.ln(), 0.5f64.ln());
        let decades: Vec<f64> = (1..).map(|k| lo + k as f64 * std::f64::consts::LN_10).take_while(|w| *w < hi).collect();
        bps.extend(decades);
        adaptive(
            |w: f64| {
                let t = w.exp();
                Ok(cpow(C::new(t, 0.0), a) * head(t))
            },
            lo,
            hi,
            &bps,
            0.0,
            tol,
        )?
    } else {
        ZERO
    };
    let left = left_low + left_high;
    // Right half: 1 - t = v^(1/cr) absorbs (1-t)^(c-a-1) dt.
    let v_hi = 0.5f64.powf(cr);
    let right = adaptive(
        |v: f64| {
            let s = if v == 0.0 { 0.0 } else { v.powf(1.0 / cr) };
            let t = 1.0 - s;
            let pre = if v == 0.0 {
                if ca.im == 0.0 { C::new(1.0 / cr, 0.0) } else { ZERO }
            } else {
                cpow(C::new(s, 0.0), ca - cr) / cr
            };
            Ok(pre * cpow(C::new(t, 0.0), a - 1.0) * kernel(t))
        },
        0.0,
        v_hi,
        &[],
        0.0,
        tol,
    )?;
    let norm = gamma(c)? * rgamma(a) * rgamma(ca);
    finite("appell_f1", norm * (left + right))
}

//! Generalized hypergeometric functions.

use super::gamma::{gamma, is_nonpositive_integer, rgamma};
use super::{finite, SeriesControl};
use crate::quad::adaptive;
use crate::{ComplexScalar as C, Error, Result};

const ONE: C = C { re: 1.0, im: 0.0 };
const ZERO: C = C { re: 0.0, im: 0.0 };

/// Largest modulus at which a transformed series is summed directly.
const SERIES_RADIUS: f64 = 0.9;

pub(crate) fn cpow(base: C, e: C) -> C {
    if base == ZERO {
        return if e.re > 0.0 { ZERO } else { C::new(f64::INFINITY, 0.0) };
    }
    (e * base.ln()).exp()
}

fn near_integer(x: C) -> bool {
    x.im.abs() < 1e-12 && (x.re - x.re.round()).abs() < 1e-9
}

/// Sum of `pFq(a; b; z)` from term index `start` (0 or 1) by the term-ratio
/// recurrence.
pub fn series_pfq(a: &[C], b: &[C], z: C, ctl: SeriesControl, start: usize) -> Result<C> {
    let mut term = ONE;
    let mut sum = if start == 0 { ONE } else { ZERO };
    let mut small = 0;
    for n in 0..ctl.max_terms {
        let nf = n as f64;
        let mut num = ONE;
        for ai in a {
            num *= ai + nf;
        }
        let mut den = C::new(nf + 1.0, 0.0);
        for bi in b {
            let d = bi + nf;
            if d == ZERO {
                return Err(Error::Pole { what: "hypergeometric series", at: format!("b={bi}") });
            }
            den *= d;
        }
        let ratio = num / den * z;
        term *= ratio;
        sum += term;
        if term == ZERO {
            return finite("hypergeometric series", sum);
        }
        if term.norm() <= ctl.rel_tol * sum.norm() && ratio.norm() < 0.99 {
            small += 1;
            if small >= 2 {
                return finite("hypergeometric series", sum);
            }
        } else {
            small = 0;
        }
    }
    Err(Error::NonConvergence { what: "hypergeometric series", terms: ctl.max_terms })
}

fn f21(a: C, b: C, c: C, z: C, ctl: SeriesControl) -> Result<C> {
    // Pairwise product keeps the series exactly symmetric in (a, b).
    let mut term = ONE;
    let mut sum = ONE;
    let mut small = 0;
    for n in 0..ctl.max_terms {
        let nf = n as f64;
        let den = (c + nf) * (nf + 1.0);
        if c + nf == ZERO {
            return Err(Error::Pole { what: "hyp2f1", at: format!("c={c}") });
        }
        let ratio = ((a + nf) * (b + nf)) / den * z;
        term *= ratio;
        sum += term;
        if term == ZERO {
            return Ok(sum);
        }
        if term.norm() <= ctl.rel_tol * sum.norm() && ratio.norm() < 0.99 {
            small += 1;
            if small >= 2 {
                return Ok(sum);
            }
        } else {
            small = 0;
        }
    }
    Err(Error::NonConvergence { what: "hyp2f1", terms: ctl.max_terms })
}

#[derive(Clone, Copy, Debug, PartialEq)]
enum Route {
    Direct,
    Pfaff,
    InvZ,
    InvOneMinusZ,
    OneMinusZ,
    OneMinusInvZ,
}

fn choose_route(a: C, b: C, c: C, z: C) -> (Route, f64) {
    let ab_ok = !near_integer(a - b);
    let cab_ok = !near_integer(c - a - b);
    let cands = [
        (Route::Direct, z.norm(), true),
        (Route::Pfaff, (z / (z - 1.0)).norm(), true),
        (Route::InvZ, z.inv().norm(), ab_ok),
        (Route::InvOneMinusZ, (ONE - z).inv().norm(), ab_ok),
        (Route::OneMinusZ, (ONE - z).norm(), cab_ok),
        (Route::OneMinusInvZ, (ONE - z.inv()).norm(), cab_ok),
    ];
    let mut best = (Route::Direct, f64::INFINITY);
    for (r, m, ok) in cands {
        // Strict comparison keeps the earlier (cheaper) route on ties.
        if ok && m < best.1 {
            best = (r, m);
        }
    }
    best
}

/// Gauss hypergeometric function on the principal branch.
pub fn hyp2f1(a: C, b: C, c: C, z: C, ctl: SeriesControl) -> Result<C> {
    ctl.validate()?;
    let (a, b) = if (a.re, a.im) <= (b.re, b.im) { (a, b) } else { (b, a) };
    let terminating = is_nonpositive_integer(a) || is_nonpositive_integer(b);
    if is_nonpositive_integer(c) {
        let deg = [a, b]
            .iter()
            .filter(|x| is_nonpositive_integer(**x))
            .map(|x| -x.re)
            .fold(f64::INFINITY, f64::min);
        if !(deg < -c.re) {
            return Err(Error::Pole { what: "hyp2f1", at: format!("c={c}") });
        }
    }
    if z == ZERO || a == ZERO || b == ZERO {
        return Ok(ONE);
    }
    if z.im == 0.0 && z.re > 1.0 && !terminating {
        return Err(Error::BranchCut { what: "hyp2f1", at: format!("{z}") });
    }
    if terminating {
        return finite("hyp2f1", f21(a, b, c, z, ctl)?);
    }
    if z == ONE && (c - a - b).re > 0.0 {
        // Gauss summation.
        return finite("hyp2f1", gamma(c)? * gamma(c - a - b)? * rgamma(c - a) * rgamma(c - b));
    }
    let (route, modulus) = choose_route(a, b, c, z);
    if modulus > SERIES_RADIUS {
        return finite("hyp2f1", hyp2f1_continuation(a, b, c, z, ctl)?);
    }
    let v = match route {
        Route::Direct => f21(a, b, c, z, ctl)?,
        Route::Pfaff => cpow(ONE - z, -a) * f21(a, c - b, c, z / (z - 1.0), ctl)?,
        Route::InvZ => {
            let w = z.inv();
            let gc = gamma(c)?;
            let t1 = gamma(b - a)? * rgamma(b) * rgamma(c - a) * cpow(-z, -a)
                * f21(a, a - c + 1.0, a - b + 1.0, w, ctl)?;
            let t2 = gamma(a - b)? * rgamma(a) * rgamma(c - b) * cpow(-z, -b)
                * f21(b, b - c + 1.0, b - a + 1.0, w, ctl)?;
            gc * (t1 + t2)
        }
        Route::InvOneMinusZ => {
            let w = (ONE - z).inv();
            let gc = gamma(c)?;
            let t1 = gamma(b - a)? * rgamma(b) * rgamma(c - a) * cpow(ONE - z, -a)
                * f21(a, c - b, a - b + 1.0, w, ctl)?;
            let t2 = gamma(a - b)? * rgamma(a) * rgamma(c - b) * cpow(ONE - z, -b)
                * f21(b, c - a, b - a + 1.0, w, ctl)?;
            gc * (t1 + t2)
        }
        Route::OneMinusZ => {
            let w = ONE - z;
            let gc = gamma(c)?;
            let s = c - a - b;
            let t1 = gamma(s)? * rgamma(c - a) * rgamma(c - b) * f21(a, b, ONE - s, w, ctl)?;
            let t2 = cpow(w, s) * gamma(-s)? * rgamma(a) * rgamma(b)
                * f21(c - a, c - b, s + 1.0, w, ctl)?;
            gc * (t1 + t2)
        }
        Route::OneMinusInvZ => {
            let w = ONE - z.inv();
            let gc = gamma(c)?;
            let s = c - a - b;
            let t1 = gamma(s)? * rgamma(c - a) * rgamma(c - b) * cpow(z, -a)
                * f21(a, a - c + 1.0, ONE - s, w, ctl)?;
            let t2 = gamma(-s)? * rgamma(a) * rgamma(b) * cpow(ONE - z, s) * cpow(z, a - c)
                * f21(c - a, ONE - a, s + 1.0, w, ctl)?;
            gc * (t1 + t2)
        }
    };
    finite("hyp2f1", v)
}

/// Taylor-series continuation of the hypergeometric ODE
/// `z(1-z)F'' + (c - (a+b+1)z)F' - abF = 0` along the ray from `z/(2|z|)`.
fn hyp2f1_continuation(a: C, b: C, c: C, z: C, ctl: SeriesControl) -> Result<C> {
    let dir = z / z.norm();
    let mut z0 = dir * 0.5;
    let mut f = f21(a, b, c, z0, ctl)?;
    let mut df = a * b / c * f21(a + 1.0, b + 1.0, c + 1.0, z0, ctl)?;
    let ab = a * b;
    let s = a + b + 1.0;
    for _ in 0..10_000 {
        let radius = z0.norm().min((ONE - z0).norm());
        let remaining = z - z0;
        let step = if remaining.norm() <= 0.5 * radius {
            remaining
        } else {
            remaining * (0.5 * radius / remaining.norm())
        };
        let (p0, p1, q0) = (z0 * (ONE - z0), ONE - z0 * 2.0, c - s * z0);
        let (mut fn0, mut fn1) = (f, df);
        let (mut val, mut der) = (f + df * step, df);
        let mut wpow = step;
        let mut small = 0;
        let mut converged = false;
        for n in 0..ctl.max_terms {
            let nf = n as f64;
            let fn2 = -((p1 * nf + q0) * (nf + 1.0) * fn1 + (-(nf * (nf - 1.0)) - s * nf - ab) * fn0)
                / (p0 * ((nf + 2.0) * (nf + 1.0)));
            der += fn2 * wpow * (nf + 2.0);
            wpow *= step;
            let add = fn2 * wpow;
            val += add;
            fn0 = fn1;
            fn1 = fn2;
            if add.norm() <= ctl.rel_tol * 0.01 * val.norm() {
                small += 1;
                if small >= 3 {
                    converged = true;
                    break;
                }
            } else {
                small = 0;
            }
        }
        if !converged {
            return Err(Error::NonConvergence { what: "hyp2f1", terms: ctl.max_terms });
        }
        f = val;
        df = der;
        z0 += step;
        if step == remaining {
            return Ok(f);
        }
    }
    Err(Error::NonConvergence { what: "hyp2f1", terms: 10_000 })
}

/// `hyp2f1(a,b,c,z) - 1` without cancellation for small `|z|`.
pub fn hyp2f1_minus_one(a: C, b: C, c: C, z: C, ctl: SeriesControl) -> Result<C> {
    if z.norm() <= 0.5 {
        if is_nonpositive_integer(c) {
            return Err(Error::Pole { what: "hyp2f1", at: format!("c={c}") });
        }
        return series_pfq(&[a, b], &[c], z, ctl, 1);
    }
    Ok(hyp2f1(a, b, c, z, ctl)? - 1.0)
}

/// Direct power series of `3F2`.
pub fn hyp3f2_series(a: [C; 3], b: [C; 2], z: C, ctl: SeriesControl) -> Result<C> {
    series_pfq(&a, &b, z, ctl, 0)
}

const F32_DIRECT: f64 = 0.75;
const F32_ASYMPTOTIC: f64 = 1.4;

/// Generalized hypergeometric `3F2(a1,a2,a3; b1,b2; z)`.
///
/// Direct series for `|z| <= 0.75`; the `1/z` continuation for `|z| >= 1.4`
/// when the upper parameters differ by non-integers; in between, an
/// integral over `2F1` when one lower parameter exceeds an upper one by 1.
pub fn hyp3f2(a1: C, a2: C, a3: C, b1: C, b2: C, z: C, ctl: SeriesControl) -> Result<C> {
    ctl.validate()?;
    if is_nonpositive_integer(b1) || is_nonpositive_integer(b2) {
        return Err(Error::Pole { what: "hyp3f2", at: format!("b1={b1} b2={b2}") });
    }
    let a = [a1, a2, a3];
    let b = [b1, b2];
    if z == ZERO {
        return Ok(ONE);
    }
    let terminating = a.iter().any(|x| is_nonpositive_integer(*x));
    if terminating || z.norm() <= F32_DIRECT {
        return series_pfq(&a, &b, z, ctl, 0);
    }
    if z.im == 0.0 && z.re >= 1.0 {
        return Err(Error::BranchCut { what: "hyp3f2", at: format!("{z}") });
    }
    let distinct = (0..3).all(|i| (0..3).all(|j| i == j || !near_integer(a[i] - a[j])));
    if z.norm() >= F32_ASYMPTOTIC && distinct {
        return hyp3f2_inverse(a, b, z, ctl);
    }
    if let Some(v) = hyp3f2_shifted_integral(a, b, z, ctl) {
        return v;
    }
    if z.norm() < 1.0 {
        return series_pfq(&a, &b, z, ctl, 0);
    }
    Err(Error::NonConvergence { what: "hyp3f2", terms: 0 })
}

fn hyp3f2_inverse(a: [C; 3], b: [C; 2], z: C, ctl: SeriesControl) -> Result<C> {
    let w = z.inv();
    let gb = gamma(b[0])? * gamma(b[1])?;
    let mut total = ZERO;
    for k in 0..3 {
        let ak = a[k];
        let coef_b = rgamma(b[0] - ak) * rgamma(b[1] - ak);
        if coef_b == ZERO {
            continue;
        }
        let mut coef = gb * coef_b;
        let mut lower = [ZERO; 2];
        let mut idx = 0;
        for j in 0..3 {
            if j != k {
                coef *= gamma(a[j] - ak)? * rgamma(a[j]);
                lower[idx] = ONE - a[j] + ak;
                idx += 1;
            }
        }
        let upper = [ak, ONE - b[0] + ak, ONE - b[1] + ak];
        total += coef * cpow(-z, -ak) * series_pfq(&upper, &lower, w, ctl, 0)?;
    }
    finite("hyp3f2", total)
}

// 3F2(c, a, b; c+1, d; z) = 1 + c * int_0^1 t^(c-1) (2F1(a,b;d;zt) - 1) dt.
fn hyp3f2_shifted_integral(a: [C; 3], b: [C; 2], z: C, ctl: SeriesControl) -> Option<Result<C>> {
    for i in 0..3 {
        for j in 0..2 {
            let c = a[i];
            if c.im != 0.0 || b[j].im != 0.0 || (b[j].re - c.re - 1.0).abs() > 1e-14 {
                continue;
            }
            let c = c.re;
            if c <= -1.0 || c == 0.0 {
                continue;
            }
            let rest: Vec<C> = (0..3).filter(|&k| k != i).map(|k| a[k]).collect();
            let d = b[1 - j];
            let (p, scale) = if c > 0.0 { (1.0 / c, 1.0) } else { (1.0 / (1.0 + c), c / (1.0 + c)) };
            let f = |u: f64| -> Result<C> {
                let t = u.powf(p);
                if t == 0.0 {
                    return Ok(if c > 0.0 { ZERO } else { rest[0] * rest[1] / d * z });
                }
                let g = hyp2f1_minus_one(rest[0], rest[1], d, z * t, ctl)?;
                Ok(if c > 0.0 { g } else { g / t })
            };
            return Some(
                adaptive(f, 0.0, 1.0, &[], 1e-15, 1e-13).map(|v| ONE + v * scale),
            );
        }
    }
    None
}

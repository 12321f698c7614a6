use crate::{ComplexScalar as C, Error, Result};
use std::f64::consts::PI;

const LN_SQRT_2PI: f64 = 0.918_938_533_204_672_8;

// B_{2k} / (2k (2k-1)), k = 1..10.
const STIRLING: [f64; 10] = [
    1.0 / 12.0,
    -1.0 / 360.0,
    1.0 / 1260.0,
    -1.0 / 1680.0,
    1.0 / 1188.0,
    -691.0 / 360_360.0,
    1.0 / 156.0,
    -3617.0 / 122_400.0,
    43_867.0 / 244_188.0,
    -174_611.0 / 125_400.0,
];

/// True when `z` is 0, -1, -2, ...
pub fn is_nonpositive_integer(z: C) -> bool {
    z.im == 0.0 && z.re <= 0.0 && z.re == z.re.round()
}

/// Log-gamma on the branch with `ln_gamma(z+1) = ln_gamma(z) + ln z`, real on
/// the positive axis.
pub fn ln_gamma(z: C) -> Result<C> {
    if !(z.re.is_finite() && z.im.is_finite()) {
        return Err(Error::Domain { what: "ln_gamma", detail: format!("{z}") });
    }
    if is_nonpositive_integer(z) {
        return Err(Error::Pole { what: "ln_gamma", at: format!("{z}") });
    }
    if z.im == 0.0 && z.re > 0.0 {
        return Ok(C::new(libm::lgamma(z.re), 0.0));
    }
    // Shift up by the recurrence; the log of the product is assembled from
    // its modulus and the summed arguments so the branch stays continuous.
    let mut w = z;
    let mut modulus = 1.0f64;
    let mut ln_mod = 0.0;
    let mut arg = 0.0;
    while w.re < 15.0 || w.norm() < 17.0 {
        modulus *= w.norm();
        if modulus > 1e250 {
            ln_mod += modulus.ln();
            modulus = 1.0;
        }
        arg += w.arg();
        w += 1.0;
    }
    let shift = C::new(ln_mod + modulus.ln(), arg);
    let inv = w.inv();
    let inv2 = inv * inv;
    let mut corr = C::new(0.0, 0.0);
    let mut p = inv;
    for c in STIRLING {
        corr += p * c;
        p *= inv2;
    }
    Ok((w - 0.5) * w.ln() - w + LN_SQRT_2PI + corr - shift)
}

/// Gamma function.
pub fn gamma(z: C) -> Result<C> {
    if z.im == 0.0 && z.re > 0.0 && z.re <= 171.0 {
        return Ok(C::new(libm::tgamma(z.re), 0.0));
    }
    Ok(ln_gamma(z)?.exp())
}

/// Reciprocal gamma, zero at the poles of gamma.
pub fn rgamma(z: C) -> C {
    if is_nonpositive_integer(z) {
        return C::new(0.0, 0.0);
    }
    if z.im == 0.0 && z.re > 0.0 && z.re <= 171.0 {
        return C::new(1.0 / libm::tgamma(z.re), 0.0);
    }
    if z.im == 0.0 && z.re < 0.0 && z.re > -170.0 {
        // Reflection keeps the result exactly real.
        let g = libm::tgamma(1.0 - z.re);
        return C::new((PI * z.re).sin() * g / PI, 0.0);
    }
    match ln_gamma(z) {
        Ok(l) => (-l).exp(),
        Err(_) => C::new(0.0, 0.0),
    }
}

/// Rising factorial (a)_k.
pub fn pochhammer(a: C, k: usize) -> C {
    let mut p = C::new(1.0, 0.0);
    for i in 0..k {
        p *= a + i as f64;
    }
    p
}

//! Sine integral and spherical Bessel functions.

use crate::ComplexScalar as C;
use std::f64::consts::FRAC_PI_2;

/// Sine integral `Si(x) = int_0^x sin(t)/t dt`.
pub fn sine_integral(x: f64) -> f64 {
    if x < 0.0 {
        return -sine_integral(-x);
    }
    if x == 0.0 {
        return 0.0;
    }
    if x.is_infinite() {
        return FRAC_PI_2;
    }
    if x <= 4.0 {
        let x2 = x * x;
        let mut term = x;
        let mut sum = x;
        for k in 1..60 {
            let kf = k as f64;
            term *= -x2 / ((2.0 * kf) * (2.0 * kf + 1.0));
            let add = term / (2.0 * kf + 1.0);
            sum += add;
            if add.abs() < 1e-17 * sum.abs() {
                break;
            }
        }
        return sum;
    }
    // Continued fraction for E1(ix), modified Lentz.
    let tiny = 1e-300;
    let mut b = C::new(1.0, x);
    let mut c = C::new(1.0 / tiny, 0.0);
    let mut d = b.inv();
    let mut h = d;
    for i in 2..10_000 {
        let a = -((i - 1) as f64).powi(2);
        b += 2.0;
        d = (d * a + b).inv();
        c = b + c.inv() * a;
        let del = c * d;
        h *= del;
        if (del - 1.0).norm() < 1e-16 {
            break;
        }
    }
    let h = C::new(x.cos(), -x.sin()) * h;
    FRAC_PI_2 + h.im
}

/// Spherical Bessel functions `j_0(x) .. j_{n-1}(x)` for `x >= 0`.
pub fn spherical_bessel_j(n: usize, x: f64) -> Vec<f64> {
    let mut out = vec![0.0; n];
    if n == 0 {
        return out;
    }
    if x == 0.0 {
        out[0] = 1.0;
        return out;
    }
    if x < 1.0 {
        let h = -0.5 * x * x;
        let mut lead = 1.0;
        for (k, o) in out.iter_mut().enumerate() {
            if k > 0 {
                lead *= x / (2.0 * k as f64 + 1.0);
            }
            if lead == 0.0 {
                break;
            }
            let mut term = 1.0;
            let mut sum = 1.0;
            for s in 1..40 {
                term *= h / (s as f64 * (2.0 * (k + s) as f64 + 1.0));
                sum += term;
                if term.abs() < 1e-17 {
                    break;
                }
            }
            *o = lead * sum;
        }
        return out;
    }
    let (s, c) = x.sin_cos();
    if x >= n as f64 {
        out[0] = s / x;
        if n > 1 {
            out[1] = s / (x * x) - c / x;
        }
        for k in 1..n - 1 {
            out[k + 1] = (2.0 * k as f64 + 1.0) / x * out[k] - out[k - 1];
        }
        return out;
    }
    // Miller's downward recurrence normalised by sum (2k+1) j_k^2 = 1.
    let start = n + 30 + x as usize;
    let mut buf = vec![0.0; start + 2];
    buf[start] = 1.0;
    for k in (1..=start).rev() {
        buf[k - 1] = (2.0 * k as f64 + 1.0) / x * buf[k] - buf[k + 1];
        if buf[k - 1].abs() > 1e100 {
            for v in buf[k - 1..].iter_mut() {
                *v *= 1e-100;
            }
        }
    }
    let norm: f64 = buf
        .iter()
        .enumerate()
        .map(|(k, v)| (2.0 * k as f64 + 1.0) * v * v)
        .sum::<f64>()
        .sqrt();
    let dot = buf[0] * (s / x) + buf[1] * (s / (x * x) - c / x);
    let sign = if dot >= 0.0 { 1.0 } else { -1.0 };
    for k in 0..n {
        out[k] = sign * buf[k] / norm;
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sine_integral_anchors() {
        assert!((sine_integral(1.0) - 0.946_083_070_367_183).abs() < 1e-14);
        assert!((sine_integral(10.0) - 1.658_347_594_218_874).abs() < 1e-13);
        assert!((sine_integral(1e8) - FRAC_PI_2).abs() < 1e-7);
    }

    #[test]
    fn bessel_regimes_agree_with_closed_forms() {
        for x in [0.3, 2.5, 7.0, 40.0] {
            let j = spherical_bessel_j(8, x);
            let (s, c) = x.sin_cos();
            let j2 = (3.0 / (x * x) - 1.0) * s / x - 3.0 * c / (x * x);
            assert!((j[0] - s / x).abs() < 1e-14);
            assert!((j[2] - j2).abs() < 1e-12, "x={x}");
        }
    }
}

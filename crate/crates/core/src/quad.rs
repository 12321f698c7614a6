//! Quadrature rules: Gauss-Legendre, adaptive Gauss-Kronrod and a
//! Filon-type rule for `int g(q) exp(-j q T) dq` with smooth `g`.

use crate::specfun::spherical_bessel_j;
use crate::{ComplexScalar as C, Error, Result};

/// Gauss-Legendre nodes and weights on [-1, 1].
#[derive(Debug, Clone)]
pub struct GaussLegendre {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
}

impl GaussLegendre {
    pub fn new(n: usize) -> Self {
        assert!(n >= 1);
        let mut nodes = vec![0.0; n];
        let mut weights = vec![0.0; n];
        let nf = n as f64;
        for i in 0..n.div_ceil(2) {
            let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (nf + 0.5)).cos();
            let mut dp = 0.0;
            for _ in 0..100 {
                let (p, d) = legendre_with_derivative(n, x);
                dp = d;
                let dx = p / d;
                x -= dx;
                if dx.abs() < 1e-16 {
                    break;
                }
            }
            let (_, d) = legendre_with_derivative(n, x);
            dp = if d != 0.0 { d } else { dp };
            let w = 2.0 / ((1.0 - x * x) * dp * dp);
            nodes[i] = -x;
            nodes[n - 1 - i] = x;
            weights[i] = w;
            weights[n - 1 - i] = w;
        }
        if n % 2 == 1 {
            nodes[n / 2] = 0.0;
        }
        Self { nodes, weights }
    }

    /// Nodes and weights mapped to [a, b].
    pub fn on(&self, a: f64, b: f64) -> impl Iterator<Item = (f64, f64)> + '_ {
        let c = 0.5 * (a + b);
        let h = 0.5 * (b - a);
        self.nodes.iter().zip(&self.weights).map(move |(x, w)| (c + h * x, h * w))
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }
}

fn legendre_with_derivative(n: usize, x: f64) -> (f64, f64) {
    let (mut p0, mut p1) = (1.0, x);
    for k in 2..=n {
        let kf = k as f64;
        let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
        p0 = p1;
        p1 = p2;
    }
    if n == 0 {
        return (1.0, 0.0);
    }
    let d = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, d)
}

/// Legendre polynomials P_0..P_{n-1} at x.
fn legendre_all(n: usize, x: f64) -> Vec<f64> {
    let mut p = vec![0.0; n];
    if n > 0 {
        p[0] = 1.0;
    }
    if n > 1 {
        p[1] = x;
    }
    for k in 2..n {
        let kf = k as f64;
        p[k] = ((2.0 * kf - 1.0) * x * p[k - 1] - (kf - 1.0) * p[k - 2]) / kf;
    }
    p
}

const XGK: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_4,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_5,
    0.0,
];
const WGK: [f64; 8] = [
    0.022_935_322_010_529_22,
    0.063_092_092_629_978_55,
    0.104_790_010_322_250_2,
    0.140_653_259_715_525_9,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_9,
    0.209_482_141_084_727_8,
];
const WG: [f64; 4] = [
    0.129_484_966_168_869_7,
    0.279_705_391_489_276_7,
    0.381_830_050_505_118_9,
    0.417_959_183_673_469_4,
];

fn gk15<F: Fn(f64) -> Result<C>>(f: &F, a: f64, b: f64) -> Result<(C, f64)> {
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let fc = f(c)?;
    let mut k = fc * WGK[7];
    let mut g = fc * WG[3];
    for j in 0..7 {
        let x = h * XGK[j];
        let s = f(c - x)? + f(c + x)?;
        k += s * WGK[j];
        if j % 2 == 1 {
            g += s * WG[j / 2];
        }
    }
    Ok((k * h, ((k - g) * h).norm()))
}

/// Globally adaptive Gauss-Kronrod (7/15) integration of a complex integrand
/// over [a, b], splitting first at the given interior breakpoints.
pub fn adaptive<F: Fn(f64) -> Result<C>>(
    f: F,
    a: f64,
    b: f64,
    breakpoints: &[f64],
    abs_tol: f64,
    rel_tol: f64,
) -> Result<C> {
    let mut edges = vec![a];
    let mut bp: Vec<f64> = breakpoints.iter().copied().filter(|x| *x > a && *x < b).collect();
    bp.sort_by(|x, y| x.partial_cmp(y).unwrap());
    edges.extend(bp);
    edges.push(b);
    let mut parts = Vec::new();
    for w in edges.windows(2) {
        if w[1] > w[0] {
            let (v, e) = gk15(&f, w[0], w[1])?;
            parts.push((w[0], w[1], v, e));
        }
    }
    const MAX_INTERVALS: usize = 4000;
    loop {
        let total: C = parts.iter().map(|p| p.2).sum();
        let err: f64 = parts.iter().map(|p| p.3).sum();
        let tol = abs_tol.max(rel_tol * total.norm());
        if err <= tol {
            return Ok(total);
        }
        if parts.len() >= MAX_INTERVALS {
            if err <= 1e3 * tol {
                return Ok(total);
            }
            return Err(Error::NonConvergence { what: "adaptive quadrature", terms: parts.len() });
        }
        let (i, _) = parts
            .iter()
            .enumerate()
            .max_by(|x, y| x.1 .3.partial_cmp(&y.1 .3).unwrap())
            .unwrap();
        let (lo, hi, _, _) = parts.swap_remove(i);
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            return Ok(total);
        }
        let (v1, e1) = gk15(&f, lo, mid)?;
        let (v2, e2) = gk15(&f, mid, hi)?;
        parts.push((lo, mid, v1, e1));
        parts.push((mid, hi, v2, e2));
    }
}

/// Real-valued convenience wrapper around [`adaptive`].
pub fn adaptive_real<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, breakpoints: &[f64], tol: f64) -> f64 {
    adaptive(|x| Ok(C::new(f(x), 0.0)), a, b, breakpoints, tol, tol)
        .map(|v| v.re)
        .unwrap_or(f64::NAN)
}

/// Filon-Legendre rule: the smooth factor is interpolated by a Legendre
/// series through the Gauss nodes and integrated against the oscillatory
/// kernel exactly.
#[derive(Debug, Clone)]
pub struct FilonRule {
    pub gl: GaussLegendre,
    // proj[k * n + i] = (2k+1)/2 * w_i * P_k(x_i)
    proj: Vec<f64>,
}

impl FilonRule {
    pub fn new(n: usize) -> Self {
        let gl = GaussLegendre::new(n);
        let mut proj = vec![0.0; n * n];
        for i in 0..n {
            let p = legendre_all(n, gl.nodes[i]);
            for k in 0..n {
                proj[k * n + i] = (2.0 * k as f64 + 1.0) * 0.5 * gl.weights[i] * p[k];
            }
        }
        Self { gl, proj }
    }

    pub fn len(&self) -> usize {
        self.gl.len()
    }

    pub fn is_empty(&self) -> bool {
        self.gl.is_empty()
    }

    /// Legendre coefficients of the interpolant through `values` at the
    /// Gauss nodes.
    pub fn coefficients(&self, values: &[C]) -> Vec<C> {
        let n = self.len();
        (0..n)
            .map(|k| {
                let row = &self.proj[k * n..(k + 1) * n];
                row.iter().zip(values).map(|(p, v)| v * p).sum()
            })
            .collect()
    }

    /// `K_k = int_a^b P_k(x(q)) exp(-j q t) dq`, so that the integral of the
    /// interpolant with coefficients `c_k` is `sum_k c_k K_k`.
    fn kernel(&self, a: f64, b: f64, t: f64) -> Vec<C> {
        let c = 0.5 * (a + b);
        let h = 0.5 * (b - a);
        let omega = h * t;
        let n = self.len();
        let j = spherical_bessel_j(n, omega.abs());
        // int_{-1}^{1} P_k(x) e^{-i w x} dx = 2 (-i)^k j_k(w), j_k odd for odd k.
        let sign = if omega < 0.0 { -1.0 } else { 1.0 };
        let outer = C::from_polar(h, -c * t);
        (0..n)
            .map(|k| {
                let jk = if k % 2 == 1 { sign * j[k] } else { j[k] };
                let phase = match k % 4 {
                    0 => C::new(1.0, 0.0),
                    1 => C::new(0.0, -1.0),
                    2 => C::new(-1.0, 0.0),
                    _ => C::new(0.0, 1.0),
                };
                outer * phase * (2.0 * jk)
            })
            .collect()
    }

    /// `int_a^b g(q) exp(-j q t) dq` from Legendre coefficients of g on [a, b].
    pub fn integrate(&self, coeffs: &[C], a: f64, b: f64, t: f64) -> C {
        self.kernel(a, b, t).iter().zip(coeffs).map(|(k, c)| k * c).sum()
    }

    /// Node weights `W_i` with `int_a^b g(q) exp(-j q t) dq = sum_i g(q_i) W_i`
    /// for the interpolant through the Gauss nodes `q_i` of [a, b].
    pub fn weights(&self, a: f64, b: f64, t: f64) -> Vec<C> {
        let n = self.len();
        let kern = self.kernel(a, b, t);
        (0..n).map(|i| (0..n).map(|k| kern[k] * self.proj[k * n + i]).sum()).collect()
    }
}

//! Adaptive Gauss–Kronrod integration and fixed Gauss–Legendre rules.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use crate::error::{Error, Result};

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
    0.104_790_010_322_250_18,
    0.140_653_259_715_525_92,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_9,
    0.209_482_141_084_727_83,
];
// Gauss weights for the nodes XGK[1], XGK[3], XGK[5], XGK[7]
const WG: [f64; 4] = [
    0.129_484_966_168_869_7,
    0.279_705_391_489_276_7,
    0.381_830_050_505_118_9,
    0.417_959_183_673_469_4,
];

/// Tolerances and limits for the adaptive integrator.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerance {
    pub abs: f64,
    pub rel: f64,
    pub max_intervals: usize,
}

impl Default for Tolerance {
    fn default() -> Self {
        Self {
            abs: 1e-10,
            rel: 1e-10,
            max_intervals: 2000,
        }
    }
}

impl Tolerance {
    pub fn new(abs: f64, rel: f64) -> Self {
        Self {
            abs,
            rel,
            ..Self::default()
        }
    }
}

/// Integral estimate with its error bound.
#[derive(Debug, Clone, PartialEq)]
pub struct Estimate {
    pub value: Vec<f64>,
    pub error: Vec<f64>,
}

struct Interval {
    a: f64,
    b: f64,
    value: Vec<f64>,
    error: Vec<f64>,
    score: f64,
}

impl PartialEq for Interval {
    fn eq(&self, other: &Self) -> bool {
        self.score == other.score
    }
}
impl Eq for Interval {}
impl PartialOrd for Interval {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Interval {
    fn cmp(&self, other: &Self) -> Ordering {
        self.score.total_cmp(&other.score)
    }
}

fn gk15<F>(f: &mut F, a: f64, b: f64, dim: usize, buf: &mut [f64]) -> (Vec<f64>, Vec<f64>)
where
    F: FnMut(f64, &mut [f64]),
{
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let mut k = vec![0.0; dim];
    let mut g = vec![0.0; dim];
    f(c, buf);
    for j in 0..dim {
        k[j] = WGK[7] * buf[j];
        g[j] = WG[3] * buf[j];
    }
    for i in 0..7 {
        let dx = h * XGK[i];
        for x in [c - dx, c + dx] {
            f(x, buf);
            for j in 0..dim {
                k[j] += WGK[i] * buf[j];
                if i % 2 == 1 {
                    g[j] += WG[i / 2] * buf[j];
                }
            }
        }
    }
    let value: Vec<f64> = k.iter().map(|v| v * h).collect();
    let error: Vec<f64> = k.iter().zip(&g).map(|(k, g)| ((k - g) * h).abs()).collect();
    (value, error)
}

/// Integrates a vector-valued function over `[a, b]` by globally adaptive
/// 15-point Gauss–Kronrod bisection. `f(x, out)` writes `dim` values.
pub fn integrate_vec<F>(mut f: F, a: f64, b: f64, dim: usize, tol: Tolerance) -> Result<Estimate>
where
    F: FnMut(f64, &mut [f64]),
{
    if a == b || dim == 0 {
        return Ok(Estimate {
            value: vec![0.0; dim],
            error: vec![0.0; dim],
        });
    }
    let mut buf = vec![0.0; dim];
    let mut heap = BinaryHeap::new();
    let mut total = vec![0.0; dim];
    let mut total_err = vec![0.0; dim];

    let score = |err: &[f64], total: &[f64]| -> f64 {
        err.iter()
            .zip(total)
            .map(|(e, v)| e / (tol.abs + tol.rel * v.abs()))
            .fold(0.0, f64::max)
    };

    let (v, e) = gk15(&mut f, a, b, dim, &mut buf);
    for j in 0..dim {
        total[j] = v[j];
        total_err[j] = e[j];
    }
    let s = score(&e, &total);
    heap.push(Interval { a, b, value: v, error: e, score: s });

    let mut count = 1;
    loop {
        if score(&total_err, &total) <= 1.0 {
            break;
        }
        if count >= tol.max_intervals {
            let j = (0..dim)
                .max_by(|&x, &y| total_err[x].total_cmp(&total_err[y]))
                .unwrap_or(0);
            return Err(Error::Quadrature {
                lower: a,
                upper: b,
                value: total[j],
                error: total_err[j],
                tolerance: tol.abs + tol.rel * total[j].abs(),
            });
        }
        let worst = match heap.pop() {
            Some(w) => w,
            None => break,
        };
        let mid = 0.5 * (worst.a + worst.b);
        let (lv, le) = gk15(&mut f, worst.a, mid, dim, &mut buf);
        let (rv, re) = gk15(&mut f, mid, worst.b, dim, &mut buf);
        for j in 0..dim {
            total[j] += lv[j] + rv[j] - worst.value[j];
            total_err[j] += le[j] + re[j] - worst.error[j];
        }
        let ls = score(&le, &total);
        let rs = score(&re, &total);
        heap.push(Interval { a: worst.a, b: mid, value: lv, error: le, score: ls });
        heap.push(Interval { a: mid, b: worst.b, value: rv, error: re, score: rs });
        count += 1;
    }
    // re-sum in interval order so the result does not depend on heap history
    let mut parts: Vec<Interval> = heap.into_vec();
    parts.sort_by(|x, y| x.a.total_cmp(&y.a));
    let mut value = vec![0.0; dim];
    let mut error = vec![0.0; dim];
    for p in &parts {
        for j in 0..dim {
            value[j] += p.value[j];
            error[j] += p.error[j];
        }
    }
    Ok(Estimate { value, error })
}

/// Scalar adaptive integral over `[a, b]`.
pub fn integrate<F>(f: F, a: f64, b: f64, tol: Tolerance) -> Result<f64>
where
    F: Fn(f64) -> f64,
{
    integrate_vec(|x, out| out[0] = f(x), a, b, 1, tol).map(|e| e.value[0])
}

/// Integrates over consecutive panels `[p₀, p₁], [p₁, p₂], …`, with a
/// shared absolute tolerance budget split evenly across panels.
pub fn integrate_panels_vec<F>(mut f: F, points: &[f64], dim: usize, tol: Tolerance) -> Result<Estimate>
where
    F: FnMut(f64, &mut [f64]),
{
    let n = points.len().saturating_sub(1).max(1);
    let panel_tol = Tolerance {
        abs: tol.abs / n as f64,
        ..tol
    };
    let mut value = vec![0.0; dim];
    let mut error = vec![0.0; dim];
    for w in points.windows(2) {
        let e = integrate_vec(&mut f, w[0], w[1], dim, panel_tol)?;
        for j in 0..dim {
            value[j] += e.value[j];
            error[j] += e.error[j];
        }
    }
    Ok(Estimate { value, error })
}

/// Integral over `[a, ∞)` through the map `x = a + t/(1 − t)`.
pub fn integrate_to_infinity<F>(f: F, a: f64, tol: Tolerance) -> Result<f64>
where
    F: Fn(f64) -> f64,
{
    integrate(
        |t| {
            if t >= 1.0 {
                return 0.0;
            }
            let s = 1.0 - t;
            let v = f(a + t / s) / (s * s);
            if v.is_finite() {
                v
            } else {
                0.0
            }
        },
        0.0,
        1.0,
        tol,
    )
}

/// Nodes and weights of the `n`-point Gauss–Legendre rule on `[−1, 1]`.
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut x = vec![0.0; n];
    let mut w = vec![0.0; n];
    let nf = n as f64;
    for i in 0..n.div_ceil(2) {
        let mut z = (std::f64::consts::PI * (i as f64 + 0.75) / (nf + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (mut p0, mut p1) = (1.0, z);
            for k in 2..=n {
                let kf = k as f64;
                let p2 = ((2.0 * kf - 1.0) * z * p1 - (kf - 1.0) * p0) / kf;
                p0 = p1;
                p1 = p2;
            }
            dp = nf * (z * p1 - p0) / (z * z - 1.0);
            let dz = p1 / dp;
            z -= dz;
            if dz.abs() < 1e-15 {
                break;
            }
        }
        x[i] = -z;
        x[n - 1 - i] = z;
        let wi = 2.0 / ((1.0 - z * z) * dp * dp);
        w[i] = wi;
        w[n - 1 - i] = wi;
    }
    (x, w)
}

/// Fixed-rule integral of `f` over `[a, b]` using precomputed Gauss–Legendre nodes.
pub fn fixed_rule<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, rule: &(Vec<f64>, Vec<f64>)) -> f64 {
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    rule.0
        .iter()
        .zip(&rule.1)
        .map(|(x, w)| w * f(c + h * x))
        .sum::<f64>()
        * h
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn polynomials_and_smooth_functions() {
        let tol = Tolerance::default();
        assert_relative_eq!(integrate(|x| x.powi(5), 0.0, 2.0, tol).unwrap(), 64.0 / 6.0, max_relative = 1e-13);
        assert_relative_eq!(integrate(f64::sin, 0.0, std::f64::consts::PI, tol).unwrap(), 2.0, max_relative = 1e-13);
        let v = integrate(|x| 1.0 / x.sqrt(), 1e-12, 1.0, Tolerance::new(1e-9, 1e-9)).unwrap();
        assert!((v - 2.0).abs() < 1e-5);
    }

    #[test]
    fn semi_infinite_gaussian() {
        let v = integrate_to_infinity(|x| (-x * x).exp(), 0.0, Tolerance::default()).unwrap();
        assert_relative_eq!(v, 0.5 * std::f64::consts::PI.sqrt(), max_relative = 1e-10);
    }

    #[test]
    fn vector_integrand_and_panels() {
        let e = integrate_panels_vec(
            |x, out| {
                out[0] = x;
                out[1] = x * x;
            },
            &[0.0, 0.5, 1.0, 3.0],
            2,
            Tolerance::default(),
        )
        .unwrap();
        assert_relative_eq!(e.value[0], 4.5, max_relative = 1e-14);
        assert_relative_eq!(e.value[1], 9.0, max_relative = 1e-14);
    }

    #[test]
    fn reports_failure_with_error_estimate() {
        let tol = Tolerance {
            abs: 1e-14,
            rel: 0.0,
            max_intervals: 3,
        };
        let err = integrate(|x| (1.0 / x).sin(), 1e-4, 1.0, tol).unwrap_err();
        assert!(matches!(err, Error::Quadrature { .. }));
    }

    #[test]
    fn gauss_legendre_is_exact_for_degree_2n_minus_1() {
        for n in [1, 2, 5, 16, 33] {
            let rule = gauss_legendre(n);
            assert_relative_eq!(rule.1.iter().sum::<f64>(), 2.0, max_relative = 1e-13);
            let p = 2 * n as i32 - 2;
            let exact = 2.0 / (p as f64 + 1.0);
            let got = fixed_rule(|x| x.powi(p) + x.powi(p + 1), -1.0, 1.0, &rule);
            assert_relative_eq!(got, exact, max_relative = 1e-12, epsilon = 1e-14);
        }
    }
}

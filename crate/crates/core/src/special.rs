//! Special functions used by the coverage and mobility evaluators.
//!
//! The error function, the gamma function and the lower incomplete gamma
//! function come from `statrs`. The confluent and Gauss hypergeometric
//! functions, the scaled complementary error function, Dawson's integral,
//! `erfi` and the scaled exponential integral are implemented here because
//! the evaluators need them in overflow-safe forms.

use std::f64::consts::PI;

use crate::error::{Error, Result};

pub use statrs::function::erf::{erf, erfc};
pub use statrs::function::gamma::{gamma, ln_gamma};

const EPS: f64 = 1e-16;
const MAX_TERMS: usize = 20_000;
const FRAC_2_SQRT_PI: f64 = std::f64::consts::FRAC_2_SQRT_PI;

/// Lower incomplete gamma function `γ(s, x) = ∫₀ˣ t^(s−1) e^(−t) dt` for `s > 0`.
pub fn gamma_lower(s: f64, x: f64) -> f64 {
    statrs::function::gamma::gamma_li(s, x)
}

/// `e^(x²)·erfc(x)` for `x ≥ 0`, without overflow for large arguments.
pub fn erfcx(x: f64) -> f64 {
    debug_assert!(x >= 0.0);
    if x < 25.0 {
        return (x * x).exp() * erfc(x);
    }
    // asymptotic: (1/(x√π)) Σ (−1)ⁿ (2n−1)!! / (2x²)ⁿ
    let two_x2 = 2.0 * x * x;
    let mut term = 1.0;
    let mut sum = 1.0;
    for n in 1..40 {
        let next = -term * (2 * n - 1) as f64 / two_x2;
        if next.abs() >= term.abs() {
            break;
        }
        term = next;
        sum += term;
        if term.abs() < EPS * sum.abs() {
            break;
        }
    }
    sum / (x * PI.sqrt())
}

/// Imaginary error function, summed directly. Intended for `x² ≤ 30`;
/// use [`exp_neg_erfi`] when the result is immediately damped.
pub fn erfi(x: f64) -> f64 {
    let x2 = x * x;
    let mut a = x;
    let mut sum = x;
    let mut n = 0usize;
    loop {
        n += 1;
        a *= x2 / n as f64;
        let t = a / (2 * n + 1) as f64;
        sum += t;
        if t < EPS * sum || n > MAX_TERMS {
            break;
        }
    }
    FRAC_2_SQRT_PI * sum
}

/// Dawson's integral `D(x) = e^(−x²) ∫₀ˣ e^(t²) dt`.
pub fn dawson(x: f64) -> f64 {
    let ax = x.abs();
    let v = if ax * ax <= 30.0 {
        0.5 * PI.sqrt() * (-(ax * ax)).exp() * erfi(ax)
    } else {
        // asymptotic: (1/(2x)) Σ (2n−1)!! / (2x²)ⁿ
        let two_x2 = 2.0 * ax * ax;
        let mut term = 1.0;
        let mut sum = 1.0;
        for n in 1..80 {
            let next = term * (2 * n - 1) as f64 / two_x2;
            if next >= term {
                break;
            }
            term = next;
            sum += term;
            if term < EPS * sum {
                break;
            }
        }
        sum / (2.0 * ax)
    };
    v.copysign(x)
}

/// `e^(−a)·erfi(x)` for `x ≥ 0`. Switches to the Dawson form once `x² > 30`
/// so that neither factor overflows.
pub fn exp_neg_erfi(x: f64, a: f64) -> f64 {
    debug_assert!(x >= 0.0);
    if x * x <= 30.0 {
        (-a).exp() * erfi(x)
    } else {
        FRAC_2_SQRT_PI * dawson(x) * (x * x - a).exp()
    }
}

/// Scaled exponential integral `eˣ·E₁(x) = eˣ·Γ(0, x)` for `x > 0`.
pub fn exp_e1(x: f64) -> f64 {
    debug_assert!(x > 0.0);
    const EULER: f64 = 0.577_215_664_901_532_9;
    if x <= 1.0 {
        let mut sum = 0.0;
        let mut term = 1.0;
        for k in 1..200 {
            term *= -x / k as f64;
            let t = term / k as f64;
            sum += t;
            if t.abs() < EPS * sum.abs().max(1e-300) {
                break;
            }
        }
        x.exp() * (-EULER - x.ln() - sum)
    } else {
        // modified Lentz on the continued fraction of E₁
        let tiny = 1e-300;
        let mut b = x + 1.0;
        let mut c = 1.0 / tiny;
        let mut d = 1.0 / b;
        let mut h = d;
        for i in 1..500 {
            let an = -((i * i) as f64);
            b += 2.0;
            d = 1.0 / (an * d + b);
            c = b + an / c;
            let del = c * d;
            h *= del;
            if (del - 1.0).abs() < EPS {
                break;
            }
        }
        h
    }
}

/// Poisson probability mass `P(N = k)` for mean `mean ≥ 0`.
pub fn poisson_pmf(k: u64, mean: f64) -> f64 {
    if mean == 0.0 {
        return if k == 0 { 1.0 } else { 0.0 };
    }
    if k == 0 {
        return (-mean).exp();
    }
    let kf = k as f64;
    (kf * mean.ln() - mean - ln_gamma(kf + 1.0)).exp()
}

fn is_nonpositive_integer(c: f64) -> bool {
    c <= 0.0 && c == c.round()
}

fn hyp1f1_series(a: f64, b: f64, z: f64) -> Result<f64> {
    let mut term = 1.0;
    let mut sum = 1.0;
    for n in 0..MAX_TERMS {
        let nf = n as f64;
        term *= (a + nf) / (b + nf) * z / (nf + 1.0);
        sum += term;
        if !sum.is_finite() {
            break;
        }
        if term == 0.0 || (term.abs() < EPS * sum.abs() && nf > z.abs()) {
            return Ok(sum);
        }
    }
    Err(Error::Series {
        function: "1F1",
        terms: MAX_TERMS,
        last_term: term,
    })
}

/// Confluent hypergeometric function `₁F₁(a; b; z)` for real arguments.
///
/// Negative `z` goes through Kummer's transformation so the summed series has
/// no cancellation when `b − a > 0`.
pub fn hyp1f1(a: f64, b: f64, z: f64) -> Result<f64> {
    if is_nonpositive_integer(b) {
        return Err(crate::error::invalid("b", "must not be a non-positive integer"));
    }
    if z == 0.0 {
        return Ok(1.0);
    }
    if z < 0.0 {
        Ok(z.exp() * hyp1f1_series(b - a, b, -z)?)
    } else {
        hyp1f1_series(a, b, z)
    }
}

fn hyp2f1_series(a: f64, b: f64, c: f64, z: f64, max_terms: usize) -> Result<f64> {
    let mut term = 1.0;
    let mut sum = 1.0;
    for n in 0..max_terms {
        let nf = n as f64;
        term *= (a + nf) * (b + nf) / ((c + nf) * (nf + 1.0)) * z;
        sum += term;
        if term == 0.0 || term.abs() < EPS * sum.abs() {
            return Ok(sum);
        }
    }
    Err(Error::Series {
        function: "2F1",
        terms: max_terms,
        last_term: term,
    })
}

/// Gauss hypergeometric function `₂F₁(a, b; c; z)` for real `z < 1`.
///
/// Uses the defining series for `|z| ≤ 1/2`, the Pfaff transformation
/// `z → z/(z−1)` on `[−3, −1/2)` and the `z → 1/z` connection formula below
/// `−3` (falling back to Pfaff when `a − b` is an integer).
pub fn hyp2f1(a: f64, b: f64, c: f64, z: f64) -> Result<f64> {
    if is_nonpositive_integer(c) {
        return Err(crate::error::invalid("c", "must not be a non-positive integer"));
    }
    if !(z < 1.0) {
        return Err(crate::error::invalid("z", format!("must be < 1, got {z}")));
    }
    if z == 0.0 {
        return Ok(1.0);
    }
    if z.abs() <= 0.5 {
        return hyp2f1_series(a, b, c, z, MAX_TERMS);
    }
    if z > 0.5 {
        return hyp2f1_series(a, b, c, z, 200 * MAX_TERMS);
    }
    let pfaff = |max_terms| -> Result<f64> {
        let w = z / (z - 1.0);
        Ok((1.0 - z).powf(-a) * hyp2f1_series(a, c - b, c, w, max_terms)?)
    };
    let ab = a - b;
    if z >= -3.0 || (ab - ab.round()).abs() < 1e-8 {
        return pfaff(200 * MAX_TERMS);
    }
    // z < −3: expand around infinity
    let inv = 1.0 / z;
    let mz = -z;
    let t1 = gamma(c) * gamma(b - a) / (gamma(b) * gamma(c - a))
        * mz.powf(-a)
        * hyp2f1_series(a, a - c + 1.0, a - b + 1.0, inv, MAX_TERMS)?;
    let t2 = gamma(c) * gamma(a - b) / (gamma(a) * gamma(c - b))
        * mz.powf(-b)
        * hyp2f1_series(b, b - c + 1.0, b - a + 1.0, inv, MAX_TERMS)?;
    Ok(t1 + t2)
}

fn recip_gamma_safe(x: f64) -> f64 {
    if is_nonpositive_integer(x) {
        0.0
    } else {
        1.0 / gamma(x)
    }
}

/// `1/Γ(x)` with zeros at the poles of Γ.
pub fn recip_gamma(x: f64) -> f64 {
    recip_gamma_safe(x)
}

//! Laws of one waypoint leg: the vertical step, the 3D length, and the
//! moments of the cosine of its elevation angle.

use std::f64::consts::PI;

use crate::error::{ensure_positive, Result};
use crate::quadrature::{integrate, Tolerance};
use crate::special::{erfcx, exp_e1, exp_neg_erfi};

/// Density of the difference of two uniform altitudes on an interval of width `hbar`.
pub fn altitude_step_pdf(p: f64, hbar: f64) -> f64 {
    if p.abs() >= hbar {
        0.0
    } else {
        (hbar - p.abs()) / (hbar * hbar)
    }
}

/// `E[g(|p|)]` over the vertical step law.
fn step_expectation<G: Fn(f64) -> f64>(g: G, hbar: f64, tol: Tolerance) -> Result<f64> {
    if hbar == 0.0 {
        return Ok(g(0.0));
    }
    let v = integrate(|p| (hbar - p) * g(p), 0.0, hbar, tol)?;
    Ok(2.0 * v / (hbar * hbar))
}

fn tol() -> Tolerance {
    Tolerance::new(1e-13, 1e-11)
}

/// Closed-form factor `W(s) = (1/ħ²)[ħ·erfi(√(πμ)s)/√μ − (e^{πμs²} − 1)/(πμ)]`
/// scaled by `e^{−πμu²}`, for `s ≤ u`.
fn scaled_window(mu: f64, hbar: f64, s: f64, u: f64) -> f64 {
    let a = PI * mu;
    let erfi_part = hbar * exp_neg_erfi(a.sqrt() * s, a * u * u) / mu.sqrt();
    let exp_part = ((a * (s * s - u * u)).exp() - (-a * u * u).exp()) / a;
    (erfi_part - exp_part) / (hbar * hbar)
}

/// Closed-form normalizer `W(ħ)` of the leg-length density, valid for `u ≥ ħ`.
///
/// It equals one only when `ħ = 0`; the density itself carries `W(min(u, ħ))`.
pub fn closed_form_omega(mu: f64, hbar: f64) -> f64 {
    if hbar == 0.0 {
        return 1.0;
    }
    // e^{πμħ²}·e^{−πμħ²} keeps the erfi factor in the scaled form
    let a = PI * mu * hbar * hbar;
    let scaled = scaled_window(mu, hbar, hbar, hbar);
    if a < 700.0 {
        scaled * a.exp()
    } else {
        f64::INFINITY
    }
}

/// Density of the 3D leg length `U = √(ϱ² + p²)`.
pub fn transition_length_pdf(u: f64, mu: f64, hbar: f64) -> f64 {
    if u <= 0.0 {
        return 0.0;
    }
    let a = PI * mu;
    if hbar == 0.0 {
        return 2.0 * a * u * (-a * u * u).exp();
    }
    2.0 * a * u * scaled_window(mu, hbar, u.min(hbar), u).max(0.0)
}

/// Mean leg length `E[U] = ħ/3 + E[erfcx(√(πμ)|p|)]/(2√μ)`.
pub fn mean_transition_length(mu: f64, hbar: f64) -> Result<f64> {
    ensure_positive("mu", mu)?;
    let s = (PI * mu).sqrt();
    let e = step_expectation(|p| erfcx(s * p), hbar, tol())?;
    Ok(hbar / 3.0 + e / (2.0 * mu.sqrt()))
}

/// `2√μ·E[U]`, the factor by which vertical motion stretches the mean leg.
pub fn effective_omega(mu: f64, hbar: f64) -> Result<f64> {
    Ok(2.0 * mu.sqrt() * mean_transition_length(mu, hbar)?)
}

/// First two moments of the cosine of the leg elevation angle.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CosineMoments {
    pub mean: f64,
    pub mean_sq: f64,
}

/// `E[cos φ]` and `E[cos² φ]` for a leg with Rayleigh horizontal part and
/// triangular vertical part.
pub fn cosine_moments(mu: f64, hbar: f64) -> Result<CosineMoments> {
    ensure_positive("mu", mu)?;
    if hbar == 0.0 {
        return Ok(CosineMoments { mean: 1.0, mean_sq: 1.0 });
    }
    let inner = Tolerance::new(1e-14, 1e-12);
    // with t = √(πμ)ϱ and x = πμp²: E[cos φ | p] = ∫ 2t²/√(t²+x) e^{−t²} dt
    let cos_given = |p: f64| -> f64 {
        let x = PI * mu * p * p;
        if x == 0.0 {
            return 1.0;
        }
        let split = x.sqrt().min(6.0);
        let f = |t: f64| 2.0 * t * t / (t * t + x).sqrt() * (-t * t).exp();
        let a = integrate(f, 0.0, split, inner).unwrap_or(f64::NAN);
        let b = integrate(f, split, split.max(6.0) + 3.0, inner).unwrap_or(f64::NAN);
        a + b
    };
    // E[cos² φ | p] = 1 − x·eˣ·E₁(x)
    let cos_sq_given = |p: f64| -> f64 {
        let x = PI * mu * p * p;
        if x == 0.0 {
            1.0
        } else {
            1.0 - x * exp_e1(x)
        }
    };
    let mean = step_expectation(cos_given, hbar, tol())?;
    let mean_sq = step_expectation(cos_sq_given, hbar, tol())?;
    if !mean.is_finite() {
        return Err(crate::error::invalid("cosine moments", "inner quadrature failed"));
    }
    Ok(CosineMoments { mean, mean_sq })
}

use crate::error::{ensure_positive, Error, Result};

/// How the real-valued matched shape becomes the integer Toeplitz order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum ShapeRounding {
    /// Always use the Cauchy–Schwarz ceiling `m_l·κ`.
    #[default]
    CauchyBound,
    /// Round the matched shape half-up, then clamp to `[1, m_l·κ]`.
    NearestInteger,
}

/// Gamma law `Γ(K, θ)` matched to the first two moments of a sum of
/// independent Gamma powers with a common shape.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GammaSurrogate {
    /// Matched shape before rounding.
    pub k_shape: f64,
    pub theta: f64,
    /// Number of summed terms.
    pub kappa: usize,
    pub m: u32,
}

impl GammaSurrogate {
    /// Cauchy–Schwarz ceiling on the shape.
    pub fn max_shape(&self) -> usize {
        self.m as usize * self.kappa
    }

    /// Integer order used by the Toeplitz evaluator.
    pub fn toeplitz_order(&self, rounding: ShapeRounding) -> usize {
        let cap = self.max_shape();
        match rounding {
            ShapeRounding::CauchyBound => cap,
            ShapeRounding::NearestInteger => ((self.k_shape + 0.5).floor() as usize).clamp(1, cap),
        }
    }
}

/// Matches `Σ Γ(m, ζ_i/m)` by `Γ(K, θ)` with `K = m(Σζ)²/Σζ²` and `θ = Σζ²/(mΣζ)`.
pub fn gamma_moment_match(zetas: &[f64], m: u32) -> Result<GammaSurrogate> {
    if zetas.is_empty() {
        return Err(Error::Empty("serving path gains"));
    }
    for &z in zetas {
        ensure_positive("zeta", z)?;
    }
    let s1: f64 = zetas.iter().sum();
    let s2: f64 = zetas.iter().map(|z| z * z).sum();
    let mf = m as f64;
    Ok(GammaSurrogate {
        k_shape: (mf * s1 * s1 / s2).min(mf * zetas.len() as f64),
        theta: s2 / (mf * s1),
        kappa: zetas.len(),
        m,
    })
}

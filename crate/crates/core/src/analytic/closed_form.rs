use std::f64::consts::PI;

use crate::error::{invalid, Result};
use crate::special::{hyp2f1, ln_gamma};

use super::laplace::InterferenceField;
use super::toeplitz::ToeplitzEntries;

/// Toeplitz entries for an interference field whose links are all LoS,
/// in closed form through the Gauss hypergeometric function.
///
/// With `Z₀ = R² + h²`, `x = ϖ·P_t·A_l·G·Z₀^(−α/2)` and `δ = 2/α`:
/// `t_k = πλZ₀·(1{k=0} − c_k·₂F₁(k+m, k−δ; k+1−δ; −x/m))`, where
/// `c_k = δ·Γ(k+m)·(x/m)^k / ((δ−k)·k!·Γ(m))`.
pub fn all_los_entries(field: &InterferenceField, varpi: f64, lower_radius: f64, k: usize) -> Result<ToeplitzEntries> {
    if !(varpi >= 0.0) {
        return Err(invalid("varpi", "must be non-negative"));
    }
    let alpha = field.alpha_l;
    if alpha <= 2.0 {
        return Err(invalid("alpha_l", "must exceed 2"));
    }
    let m = field.m_l as f64;
    let delta = 2.0 / alpha;
    let z0 = lower_radius * lower_radius + field.h * field.h;
    let x = varpi * field.p_t * field.a_l * field.gain * z0.powf(-0.5 * alpha);
    let arg = -x / m;
    let scale = PI * field.lambda_b * z0;
    let mut t = Vec::with_capacity(k);
    for j in 0..k {
        let jf = j as f64;
        let f = hyp2f1(jf + m, jf - delta, jf + 1.0 - delta, arg)?;
        let v = if j == 0 {
            scale * (1.0 - f)
        } else {
            if x == 0.0 {
                t.push(0.0);
                continue;
            }
            // c_k is negative for k ≥ 1 because δ < 1
            let log_mag = ln_gamma(jf + m) + jf * (x / m).ln() - ln_gamma(jf + 1.0) - ln_gamma(m);
            let ck = delta / (delta - jf) * log_mag.exp();
            -scale * ck * f
        };
        t.push(v);
    }
    Ok(ToeplitzEntries::new(t))
}

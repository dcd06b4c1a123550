use std::f64::consts::PI;

use crate::channel::BlockageTable;
use crate::error::{invalid, Result};
use crate::geometry::{Environment, NetworkConfig};
use crate::quadrature::{gauss_legendre, integrate_panels_vec, Tolerance};
use crate::special::ln_gamma;

use super::toeplitz::{column_sum, ToeplitzEntries};

/// Which propagation state the interferers can be in.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Blockage {
    /// LoS with the blockage probability of the environment, NLoS otherwise.
    Mixed,
    AllLos,
    AllNlos,
}

/// Statistical description of the interfering BS field seen by one receiver.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct InterferenceField {
    pub lambda_b: f64,
    pub p_t: f64,
    /// Antenna gain towards the receiver.
    pub gain: f64,
    pub blockage: Blockage,
    pub a_l: f64,
    pub a_n: f64,
    pub alpha_l: f64,
    pub alpha_n: f64,
    pub m_l: u32,
    pub m_n: u32,
    /// Receiver height above the BS antennas (m).
    pub h: f64,
    pub h_bs: f64,
    pub env: Environment,
}

impl InterferenceField {
    /// Interference at a UAV `h` metres above the BS antennas.
    pub fn uav(config: &NetworkConfig, h: f64) -> Self {
        Self {
            lambda_b: config.lambda_b,
            p_t: config.p_t,
            gain: config.g_s,
            blockage: Blockage::Mixed,
            a_l: config.a_l,
            a_n: config.a_n,
            alpha_l: config.alpha_l,
            alpha_n: config.alpha_n,
            m_l: config.m_l,
            m_n: config.m_n,
            h,
            h_bs: config.h_bs,
            env: config.env,
        }
    }

    /// Interference at a ground user: Rayleigh NLoS links through side lobes.
    pub fn ground(config: &NetworkConfig) -> Self {
        Self {
            blockage: Blockage::AllNlos,
            m_l: 1,
            m_n: 1,
            h: config.h_bs,
            ..Self::uav(config, config.h_bs)
        }
    }

    /// Same field with every interferer in LoS.
    pub fn all_los(mut self) -> Self {
        self.blockage = Blockage::AllLos;
        self
    }

    fn kinds(&self) -> [(f64, f64, u32); 2] {
        [(self.a_l, self.alpha_l, self.m_l), (self.a_n, self.alpha_n, self.m_n)]
    }

    /// Received power scale `P_t·A·G/m` per kind, so that `y = ϖ·c·d^(−α)`.
    fn coefficients(&self) -> [f64; 2] {
        let k = self.kinds();
        [
            self.p_t * k[0].0 * self.gain / k[0].2 as f64,
            self.p_t * k[1].0 * self.gain / k[1].2 as f64,
        ]
    }
}

const RING_CUTOFF: f64 = 1e-15;

// Gauss–Legendre order for a panel, chosen from its relative width.
fn panel_order(a: f64, b: f64, h: f64) -> usize {
    let ratio = (b + h) / (a + h);
    if ratio > 1.2 {
        12
    } else if ratio > 1.05 {
        8
    } else {
        4
    }
}

struct Layout {
    points: Vec<f64>,
    table: Option<BlockageTable>,
    r_far: f64,
}

fn layout(field: &InterferenceField, lower: f64) -> Layout {
    let hs = field.h.max(1.0);
    let r_far = (1e4 * (lower + hs)).max(1e6);
    let mut points = vec![lower];
    let mut x = lower;
    while x < r_far {
        x += 0.25 * (x + hs);
        points.push(x.min(r_far));
    }
    let table = match field.blockage {
        Blockage::Mixed => {
            let w = field.env.ring_width();
            let t = BlockageTable::with_cutoff(field.h, field.h_bs, field.env, RING_CUTOFF);
            let end = t.reach().min(r_far);
            let mut k = (lower / w).floor() + 1.0;
            while k * w < end {
                points.push(k * w);
                k += 1.0;
            }
            if end > lower {
                points.push(end);
            }
            Some(t)
        }
        _ => None,
    };
    points.sort_by(f64::total_cmp);
    points.dedup_by(|a, b| (*a - *b).abs() <= 1e-9 * b.abs().max(1.0));
    Layout { points, table, r_far }
}

fn los_weight(field: &InterferenceField, table: &Option<BlockageTable>, nu: f64) -> f64 {
    match field.blockage {
        Blockage::AllLos => 1.0,
        Blockage::AllNlos => 0.0,
        Blockage::Mixed => {
            let p = table.as_ref().map(|t| t.los(nu)).unwrap_or(0.0);
            if p < RING_CUTOFF {
                0.0
            } else {
                p
            }
        }
    }
}

/// Adds `scale·weight·[−(1 − (1+y)^(−m)), C(m,1)·r·(1+y)^(−m), …]` to `out`,
/// where `r = y/(1+y)`.
#[inline]
fn accumulate(out: &mut [f64], y: f64, m: u32, scale: f64) {
    let mf = m as f64;
    let l1p = y.ln_1p();
    out[0] -= scale * (-(-mf * l1p).exp_m1());
    let r = y / (1.0 + y);
    let mut term = (-mf * l1p).exp();
    for (i, o) in out.iter_mut().enumerate().skip(1) {
        term *= (mf + i as f64 - 1.0) / i as f64 * r;
        if term == 0.0 {
            break;
        }
        *o += scale * term;
    }
}

fn integrand(field: &InterferenceField, table: &Option<BlockageTable>, varpi: f64, nu: f64, out: &mut [f64]) {
    out.iter_mut().for_each(|v| *v = 0.0);
    let z = nu * nu + field.h * field.h;
    let pl = los_weight(field, table, nu);
    let c = field.coefficients();
    let kinds = field.kinds();
    let base = 2.0 * PI * field.lambda_b * nu;
    for (idx, w) in [(0usize, pl), (1usize, 1.0 - pl)] {
        if w <= 0.0 {
            continue;
        }
        let y = varpi * c[idx] * z.powf(-0.5 * kinds[idx].1);
        accumulate(out, y, kinds[idx].2, base * w);
    }
}

/// First-order contribution of the field beyond `r_far`, where `y ≪ 1`.
fn tail(field: &InterferenceField, table: &Option<BlockageTable>, varpi: f64, r_far: f64, out: &mut [f64]) {
    let z = r_far * r_far + field.h * field.h;
    let pl = los_weight(field, table, r_far);
    let c = field.coefficients();
    let kinds = field.kinds();
    for (idx, w) in [(0usize, pl), (1usize, 1.0 - pl)] {
        if w <= 0.0 {
            continue;
        }
        let (alpha, m) = (kinds[idx].1, kinds[idx].2 as f64);
        let b = varpi * c[idx];
        let scale = 2.0 * PI * field.lambda_b * w;
        // ∫ (ν²+h²)^(−iα/2) ν dν over [r_far, ∞) = Z^(1−iα/2)/(iα−2)
        out[0] -= scale * m * b * z.powf(1.0 - 0.5 * alpha) / (alpha - 2.0);
        let mut binom = 1.0;
        for (i, o) in out.iter_mut().enumerate().skip(1) {
            let fi = i as f64;
            binom *= (m + fi - 1.0) / fi;
            let v = scale * binom * b.powi(i as i32) * z.powf(1.0 - 0.5 * fi * alpha) / (fi * alpha - 2.0);
            if v == 0.0 || !v.is_finite() {
                break;
            }
            *o += v;
        }
    }
}

fn check(field: &InterferenceField, varpi: f64, lower_radius: f64) -> Result<()> {
    if !(varpi >= 0.0 && varpi.is_finite()) {
        return Err(invalid("varpi", format!("must be finite and non-negative, got {varpi}")));
    }
    if !(lower_radius >= 0.0 && lower_radius.is_finite()) {
        return Err(invalid("lower_radius", format!("must be finite and non-negative, got {lower_radius}")));
    }
    if field.alpha_l <= 2.0 || field.alpha_n <= 2.0 {
        return Err(invalid("alpha", "path-loss exponents must exceed 2 for finite interference"));
    }
    Ok(())
}

/// Toeplitz entries `t_i = (−ϖ)^i/i!·Ω^(i)(ϖ)`, `i < k`, by adaptive quadrature
/// of the interference log-Laplace transform over `[lower_radius, ∞)`.
pub fn toeplitz_entries(
    field: &InterferenceField,
    varpi: f64,
    lower_radius: f64,
    k: usize,
    tol: Tolerance,
) -> Result<ToeplitzEntries> {
    check(field, varpi, lower_radius)?;
    let lay = layout(field, lower_radius);
    let mut t = integrate_panels_vec(
        |nu, out| integrand(field, &lay.table, varpi, nu, out),
        &lay.points,
        k,
        tol,
    )?
    .value;
    tail(field, &lay.table, varpi, lay.r_far, &mut t);
    Ok(ToeplitzEntries::new(t))
}

/// `Ω^(i)(ϖ)` for `i < n`: the log-Laplace transform of the interference and
/// its derivatives in `ϖ`.
pub fn log_laplace_interference(
    field: &InterferenceField,
    varpi: f64,
    lower_radius: f64,
    n: usize,
    tol: Tolerance,
) -> Result<Vec<f64>> {
    if varpi == 0.0 {
        return derivatives_at_zero(field, lower_radius, n, tol);
    }
    let t = toeplitz_entries(field, varpi, lower_radius, n, tol)?.t;
    Ok(t
        .iter()
        .enumerate()
        .map(|(i, &ti)| {
            let sign = if i % 2 == 0 { 1.0 } else { -1.0 };
            sign * ti * (ln_gamma(i as f64 + 1.0) - i as f64 * varpi.ln()).exp()
        })
        .collect())
}

fn derivatives_at_zero(field: &InterferenceField, lower_radius: f64, n: usize, tol: Tolerance) -> Result<Vec<f64>> {
    check(field, 0.0, lower_radius)?;
    let lay = layout(field, lower_radius);
    let c = field.coefficients();
    let kinds = field.kinds();
    // Ω^(i)(0) = 2πλ ∫ Σ_v P_v (−1)^i (m_v)_i c_v^i d^(−iα_v) ν dν, for i ≥ 1
    let f = |nu: f64, out: &mut [f64]| {
        out.iter_mut().for_each(|v| *v = 0.0);
        let z = nu * nu + field.h * field.h;
        let pl = los_weight(field, &lay.table, nu);
        for (idx, w) in [(0usize, pl), (1usize, 1.0 - pl)] {
            if w <= 0.0 {
                continue;
            }
            let m = kinds[idx].2 as f64;
            let x = c[idx] * z.powf(-0.5 * kinds[idx].1);
            let mut term = 2.0 * PI * field.lambda_b * nu * w;
            for (i, o) in out.iter_mut().enumerate().skip(1) {
                term *= -(m + i as f64 - 1.0) * x;
                *o += term;
            }
        }
    };
    let mut d = integrate_panels_vec(f, &lay.points, n, tol)?.value;
    let z = lay.r_far * lay.r_far + field.h * field.h;
    let pl = los_weight(field, &lay.table, lay.r_far);
    for (idx, w) in [(0usize, pl), (1usize, 1.0 - pl)] {
        if w <= 0.0 {
            continue;
        }
        let (alpha, m) = (kinds[idx].1, kinds[idx].2 as f64);
        let mut poch = 2.0 * PI * field.lambda_b * w;
        for (i, o) in d.iter_mut().enumerate().skip(1) {
            let fi = i as f64;
            poch *= -(m + fi - 1.0) * c[idx];
            *o += poch * z.powf(1.0 - 0.5 * fi * alpha) / (fi * alpha - 2.0);
        }
    }
    if let Some(first) = d.first_mut() {
        *first = 0.0;
    }
    Ok(d)
}

/// Interference field integrated once on a fixed node set, so that the
/// Toeplitz entries for many values of `ϖ` cost one pass over the nodes.
#[derive(Debug, Clone)]
pub struct InterferenceProfile {
    field: InterferenceField,
    lower_radius: f64,
    // (quadrature weight × 2πλν × P_v, received-power coefficient) per kind
    los: Vec<(f64, f64)>,
    nlos: Vec<(f64, f64)>,
    table: Option<BlockageTable>,
    r_far: f64,
}

impl InterferenceProfile {
    pub fn new(field: InterferenceField, lower_radius: f64) -> Result<Self> {
        check(&field, 0.0, lower_radius)?;
        let lay = layout(&field, lower_radius);
        let rules: Vec<_> = [4, 8, 12].iter().map(|&n| gauss_legendre(n)).collect();
        let c = field.coefficients();
        let kinds = field.kinds();
        let mut los = Vec::new();
        let mut nlos = Vec::new();
        for w in lay.points.windows(2) {
            let (mid, half) = (0.5 * (w[0] + w[1]), 0.5 * (w[1] - w[0]));
            let rule = &rules[panel_order(w[0], w[1], field.h.max(1.0)) / 4 - 1];
            for (x, gw) in rule.0.iter().zip(&rule.1) {
                let nu = mid + half * x;
                let z = nu * nu + field.h * field.h;
                let base = 2.0 * PI * field.lambda_b * nu * gw * half;
                let pl = los_weight(&field, &lay.table, nu);
                if pl > 0.0 {
                    los.push((base * pl, c[0] * z.powf(-0.5 * kinds[0].1)));
                }
                if pl < 1.0 {
                    nlos.push((base * (1.0 - pl), c[1] * z.powf(-0.5 * kinds[1].1)));
                }
            }
        }
        Ok(Self {
            field,
            lower_radius,
            los,
            nlos,
            table: lay.table,
            r_far: lay.r_far,
        })
    }

    pub fn field(&self) -> &InterferenceField {
        &self.field
    }

    pub fn lower_radius(&self) -> f64 {
        self.lower_radius
    }

    /// Toeplitz entries `t_0..t_{k−1}` at `ϖ`.
    pub fn entries(&self, varpi: f64, k: usize) -> ToeplitzEntries {
        let mut t = vec![0.0; k.max(1)];
        for (nodes, m) in [(&self.los, self.field.m_l), (&self.nlos, self.field.m_n)] {
            for &(w, c) in nodes.iter() {
                accumulate(&mut t, varpi * c, m, w);
            }
        }
        tail(&self.field, &self.table, varpi, self.r_far, &mut t);
        t.truncate(k);
        ToeplitzEntries::new(t)
    }

    /// Conditional coverage `‖exp(T_k)‖₁` at `ϖ`.
    pub fn coverage(&self, varpi: f64, k: usize) -> f64 {
        column_sum(&self.entries(varpi, k).t).clamp(0.0, 1.0)
    }
}

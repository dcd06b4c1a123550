//! Air-to-ground propagation: blockage-driven LoS probability, path gain and
//! Nakagami fading.

use rand_distr::{Distribution, Gamma};

use crate::error::{ensure_positive, invalid, Result};
use crate::geometry::{Environment, NetworkConfig};
use crate::rng::SimRng;

/// Horizontal distance `r` and height difference `h` of a BS–UAV link.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LinkGeometry {
    pub r: f64,
    pub h: f64,
}

impl LinkGeometry {
    pub fn new(r: f64, h: f64) -> Self {
        Self { r, h }
    }

    pub fn distance_sq(&self) -> f64 {
        self.r * self.r + self.h * self.h
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum LinkKind {
    Los,
    Nlos,
}

/// Nakagami shape of a link's envelope.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct FadingSpec {
    pub m: u32,
}

impl FadingSpec {
    pub fn new(m: u32) -> Result<Self> {
        if m == 0 {
            return Err(invalid("m", "Nakagami shape must be at least 1"));
        }
        Ok(Self { m })
    }

    pub fn rayleigh() -> Self {
        Self { m: 1 }
    }
}

/// Index of the last blockage term, `⌊r·√(aη)/1000 − 1⌋`; negative means no
/// building can obstruct the link.
pub fn ring_index(r: f64, env: &Environment) -> i64 {
    (r * (env.a * env.eta).sqrt() / 1000.0 - 1.0).floor() as i64
}

fn los_product(m: i64, h: f64, h_bs: f64, env: &Environment) -> f64 {
    if m < 0 {
        return 1.0;
    }
    let mf = (m + 1) as f64;
    let two_c2 = 2.0 * env.c * env.c;
    (0..=m)
        .map(|n| {
            let height = h_bs + h * (n as f64 + 0.5) / mf;
            1.0 - (-(height * height) / two_c2).exp()
        })
        .product()
}

/// Probability that the link is line-of-sight.
pub fn los_probability(link: LinkGeometry, h_bs: f64, env: &Environment) -> f64 {
    los_product(ring_index(link.r, env), link.h, h_bs, env)
}

/// LoS probability tabulated per blockage ring for one height difference.
#[derive(Debug, Clone)]
pub struct BlockageTable {
    env: Environment,
    h: f64,
    h_bs: f64,
    scale: f64,
    values: Vec<f64>,
    exhausted: bool,
}

impl BlockageTable {
    /// Tabulates rings out to horizontal distance `r_max`; beyond it values
    /// are computed on demand.
    pub fn new(h: f64, h_bs: f64, env: Environment, r_max: f64) -> Self {
        Self::build(h, h_bs, env, ring_index(r_max, &env).max(0), 1e-300)
    }

    /// Tabulates rings until the LoS probability drops below `cutoff` and
    /// treats every farther ring as NLoS.
    pub fn with_cutoff(h: f64, h_bs: f64, env: Environment, cutoff: f64) -> Self {
        Self::build(h, h_bs, env, i64::MAX - 1, cutoff)
    }

    fn build(h: f64, h_bs: f64, env: Environment, last: i64, floor: f64) -> Self {
        let scale = (env.a * env.eta).sqrt() / 1000.0;
        let mut values = Vec::new();
        let mut exhausted = false;
        for m in -1..=last {
            let v = los_product(m, h, h_bs, &env);
            // the product only shrinks as rings are added
            if v < floor {
                exhausted = true;
                break;
            }
            values.push(v);
        }
        Self {
            env,
            h,
            h_bs,
            scale,
            values,
            exhausted,
        }
    }

    /// Distance where the tabulated rings end.
    pub fn reach(&self) -> f64 {
        self.values.len() as f64 / self.scale
    }

    /// Height difference the table was built for.
    pub fn height(&self) -> f64 {
        self.h
    }

    /// Width of one ring (m).
    pub fn ring_width(&self) -> f64 {
        1.0 / self.scale
    }

    #[inline]
    pub fn los(&self, r: f64) -> f64 {
        let m = (r * self.scale - 1.0).floor() as i64;
        match self.values.get((m + 1).max(0) as usize) {
            Some(&v) => v,
            None if self.exhausted => 0.0,
            None => los_product(m, self.h, self.h_bs, &self.env),
        }
    }
}

/// Antenna gain times path loss, `A_v·G·(r² + h²)^(−α_v/2)`.
pub fn path_gain(link: LinkGeometry, kind: LinkKind, antenna_gain: f64, config: &NetworkConfig) -> Result<f64> {
    let d2 = link.distance_sq();
    ensure_positive("link distance", d2)?;
    let (a, alpha) = match kind {
        LinkKind::Los => (config.a_l, config.alpha_l),
        LinkKind::Nlos => (config.a_n, config.alpha_n),
    };
    Ok(a * antenna_gain * d2.powf(-0.5 * alpha))
}

/// Distance beyond which the LoS gain exceeds the NLoS gain.
pub fn gain_crossover_distance(config: &NetworkConfig) -> f64 {
    (config.a_n / config.a_l).powf(1.0 / (config.alpha_n - config.alpha_l))
}

/// Draws unit-mean Gamma channel powers for a fixed Nakagami shape.
#[derive(Debug, Clone)]
pub struct PowerFading {
    dist: Gamma<f64>,
}

impl PowerFading {
    pub fn new(fading: FadingSpec) -> Self {
        let m = fading.m as f64;
        Self {
            dist: Gamma::new(m, 1.0 / m).expect("positive shape and scale"),
        }
    }

    #[inline]
    pub fn sample(&self, rng: &mut SimRng) -> f64 {
        self.dist.sample(rng)
    }
}

/// Channel power `χ = ω²` with `χ ~ Γ(m, 1/m)`.
pub fn sample_power_fading(fading: FadingSpec, rng: &mut SimRng) -> f64 {
    PowerFading::new(fading).sample(rng)
}

/// Nakagami envelope density.
pub fn nakagami_pdf(w: f64, fading: FadingSpec) -> f64 {
    if w <= 0.0 {
        return 0.0;
    }
    let m = fading.m as f64;
    (std::f64::consts::LN_2 + m * m.ln() + (2.0 * m - 1.0) * w.ln() - m * w * w - crate::special::ln_gamma(m)).exp()
}

/// Nakagami envelope distribution function.
pub fn nakagami_cdf(w: f64, fading: FadingSpec) -> f64 {
    if w <= 0.0 {
        return 0.0;
    }
    let m = fading.m as f64;
    statrs::function::gamma::gamma_lr(m, m * w * w)
}

use std::f64::consts::PI;

use rand::Rng;
use rayon::prelude::*;

use crate::analytic::{log_laplace_interference, Blockage, InterferenceField, LinkBudget, StaticScenario};
use crate::channel::{BlockageTable, FadingSpec, PowerFading};
use crate::error::{invalid, Result};
use crate::geometry::{db_to_linear, sample_poisson_count, ClusterGeometry};
use crate::quadrature::Tolerance;
use crate::rng::{blocks, substream, SimRng};
use crate::stats::mean_stderr;

/// One SIR realization at the typical receiver.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SirSample {
    pub desired_power: f64,
    pub interference_power: f64,
    pub sir_db: f64,
    /// Number of serving BSs.
    pub kappa: usize,
    /// Desired power with the coherent sum replaced by its Cauchy–Schwarz
    /// ceiling `κ·Σ Q_i²`.
    pub bound_power: f64,
    /// Distance to the closest serving BS; infinite when there is none.
    pub serving_distance: f64,
}

impl SirSample {
    fn new(desired: f64, bound: f64, interference: f64, kappa: usize, serving_distance: f64) -> Self {
        Self {
            desired_power: desired,
            interference_power: interference,
            sir_db: 10.0 * (desired / interference).log10(),
            kappa,
            bound_power: bound,
            serving_distance,
        }
    }

    pub fn covered(&self, theta: f64) -> bool {
        self.desired_power > theta * self.interference_power
    }

    pub fn bound_covered(&self, theta: f64) -> bool {
        self.bound_power > theta * self.interference_power
    }
}

/// A probability or rate with its standard error.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct McEstimate {
    pub value: f64,
    pub stderr: f64,
    pub n: usize,
    pub seed: u64,
}

impl McEstimate {
    pub fn from_values(values: &[f64], seed: u64) -> Self {
        let (value, stderr) = mean_stderr(values);
        Self {
            value,
            stderr,
            n: values.len(),
            seed,
        }
    }
}

/// Monte Carlo controls.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct McConfig {
    pub samples: usize,
    pub seed: u64,
    /// Outer radius of the simulated BS field; chosen by [`truncation_radius`] when absent.
    pub r_max: Option<f64>,
}

impl McConfig {
    pub fn new(samples: usize, seed: u64) -> Self {
        Self {
            samples,
            seed,
            r_max: None,
        }
    }
}

/// Mean interference share beyond the truncation radius.
pub const TRUNCATION_TAIL: f64 = 1e-4;

/// Smallest radius on a 5% geometric grid beyond which the field carries at
/// most `tail` of the mean interference seen from `inner` outwards.
pub fn truncation_radius(field: &InterferenceField, inner: f64, tail: f64) -> Result<f64> {
    let tol = Tolerance::new(1e-30, 1e-9);
    let mean_beyond = |r: f64| -> Result<f64> { Ok(-log_laplace_interference(field, 0.0, r, 2, tol)?[1]) };
    let total = mean_beyond(inner)?;
    let mut r = (inner + field.h).max(100.0);
    while mean_beyond(r)? > tail * total {
        r *= 1.05;
    }
    Ok(r)
}

/// SIR of one network realization under both association rules.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PairedSample {
    pub comp: SirSample,
    pub nearest: SirSample,
}

pub(crate) struct Sampler {
    budget: LinkBudget,
    r_c: f64,
    r_max: f64,
    table: Option<BlockageTable>,
    serving_fading: PowerFading,
    los_fading: PowerFading,
    nlos_fading: PowerFading,
}

impl Sampler {
    pub(crate) fn new(budget: &LinkBudget, clusters: &ClusterGeometry, r_max: f64) -> Result<Self> {
        let f = &budget.field;
        if !(r_max > clusters.r_c) {
            return Err(invalid("r_max", format!("{r_max} m must exceed the collaboration radius {} m", clusters.r_c)));
        }
        let table = match f.blockage {
            Blockage::Mixed => Some(BlockageTable::new(f.h, f.h_bs, f.env, r_max)),
            _ => None,
        };
        Ok(Self {
            budget: *budget,
            r_c: clusters.r_c,
            r_max,
            table,
            serving_fading: PowerFading::new(FadingSpec::new(budget.serving.m)?),
            los_fading: PowerFading::new(FadingSpec::new(f.m_l)?),
            nlos_fading: PowerFading::new(FadingSpec::new(f.m_n)?),
        })
    }

    fn interferer_power(&self, r: f64, rng: &mut SimRng) -> f64 {
        let f = &self.budget.field;
        let los = match f.blockage {
            Blockage::AllLos => true,
            Blockage::AllNlos => false,
            Blockage::Mixed => rng.random::<f64>() < self.table.as_ref().map_or(0.0, |t| t.los(r)),
        };
        let d2 = r * r + f.h * f.h;
        let (a, alpha, fading) = if los {
            (f.a_l, f.alpha_l, &self.los_fading)
        } else {
            (f.a_n, f.alpha_n, &self.nlos_fading)
        };
        f.p_t * a * f.gain * d2.powf(-0.5 * alpha) * fading.sample(rng)
    }

    fn serving_gain(&self, r: f64) -> f64 {
        self.budget.serving_gain(r)
    }

    /// Draws one PPP realization in the disk of radius `r_max`. Buffers hold
    /// radii and interference powers of every BS.
    pub(crate) fn realize(&self, rng: &mut SimRng, radii: &mut Vec<f64>, powers: &mut Vec<f64>) -> PairedSample {
        let lambda = self.budget.field.lambda_b;
        let n = sample_poisson_count(lambda * PI * self.r_max * self.r_max, rng) as usize;
        radii.clear();
        powers.clear();
        for _ in 0..n {
            let r = self.r_max * rng.random::<f64>().sqrt();
            radii.push(r);
            powers.push(self.interferer_power(r, rng));
        }
        let p_t = self.budget.field.p_t;
        // serving links are LoS with their own fading draw
        let mut amplitude = 0.0;
        let mut square_sum = 0.0;
        let mut kappa = 0;
        let mut far = 0.0;
        let mut nearest = usize::MAX;
        let mut nearest_power = 0.0;
        let mut nearest_r = f64::INFINITY;
        for i in 0..n {
            let r = radii[i];
            if r < self.r_c {
                let q2 = self.serving_gain(r) * self.serving_fading.sample(rng);
                amplitude += q2.sqrt();
                square_sum += q2;
                kappa += 1;
                if r < nearest_r {
                    nearest_r = r;
                    nearest = i;
                    nearest_power = q2;
                }
            } else {
                far += powers[i];
            }
        }
        if kappa == 0 {
            for (i, &r) in radii.iter().enumerate() {
                if r < nearest_r {
                    nearest_r = r;
                    nearest = i;
                }
            }
            if nearest != usize::MAX {
                nearest_power = self.serving_gain(nearest_r) * self.serving_fading.sample(rng);
            }
        }
        let mut near_interference = 0.0;
        for (i, &p) in powers.iter().enumerate() {
            if i != nearest {
                near_interference += p;
            }
        }
        let comp_distance = if kappa > 0 { nearest_r } else { f64::INFINITY };
        let comp = SirSample::new(
            p_t * amplitude * amplitude,
            p_t * kappa as f64 * square_sum,
            far,
            kappa,
            comp_distance,
        );
        let desired = p_t * nearest_power;
        let nearest = SirSample::new(desired, desired, near_interference, usize::from(nearest != usize::MAX), nearest_r);
        PairedSample { comp, nearest }
    }
}

/// Paired CoMP and nearest-BS SIR realizations for `budget`.
pub fn mc_sir_paired(budget: &LinkBudget, clusters: &ClusterGeometry, cfg: &McConfig) -> Result<Vec<PairedSample>> {
    if cfg.samples == 0 {
        return Err(invalid("samples", "must be at least 1"));
    }
    let r_max = match cfg.r_max {
        Some(r) => r,
        None => truncation_radius(&budget.field, 0.0, TRUNCATION_TAIL)?,
    };
    let sampler = Sampler::new(budget, clusters, r_max)?;
    let chunks: Vec<Vec<PairedSample>> = blocks(cfg.samples)
        .collect::<Vec<_>>()
        .into_par_iter()
        .map(|(b, _, len)| {
            let mut rng = substream(cfg.seed, &[b]);
            let mut radii = Vec::new();
            let mut powers = Vec::new();
            (0..len).map(|_| sampler.realize(&mut rng, &mut radii, &mut powers)).collect()
        })
        .collect();
    Ok(chunks.into_iter().flatten().collect())
}

/// Receiver whose SIR is simulated.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Receiver {
    Uav,
    Ground,
}

pub(crate) fn budget_for(scenario: &StaticScenario, receiver: Receiver) -> Result<LinkBudget> {
    match receiver {
        Receiver::Uav => {
            scenario.validate()?;
            Ok(LinkBudget::uav(&scenario.config, scenario.height_difference()))
        }
        Receiver::Ground => {
            scenario.config.validate()?;
            Ok(LinkBudget::ground(&scenario.config))
        }
    }
}

/// Paired samples for a static scenario.
pub fn mc_sir_scenario(scenario: &StaticScenario, receiver: Receiver, cfg: &McConfig) -> Result<Vec<PairedSample>> {
    mc_sir_paired(&budget_for(scenario, receiver)?, &scenario.clusters, cfg)
}

pub fn mc_sir_comp(scenario: &StaticScenario, cfg: &McConfig) -> Result<Vec<SirSample>> {
    Ok(mc_sir_scenario(scenario, Receiver::Uav, cfg)?.into_iter().map(|p| p.comp).collect())
}

pub fn mc_sir_nearest(scenario: &StaticScenario, cfg: &McConfig) -> Result<Vec<SirSample>> {
    Ok(mc_sir_scenario(scenario, Receiver::Uav, cfg)?.into_iter().map(|p| p.nearest).collect())
}

pub fn mc_sir_gue(scenario: &StaticScenario, cfg: &McConfig) -> Result<Vec<PairedSample>> {
    mc_sir_scenario(scenario, Receiver::Ground, cfg)
}

/// Fraction of samples above each threshold.
pub fn coverage_from_samples(samples: &[SirSample], thetas_db: &[f64], seed: u64) -> Vec<McEstimate> {
    estimate(samples, thetas_db, seed, SirSample::covered)
}

/// Same as [`coverage_from_samples`] with the Cauchy–Schwarz desired power.
pub fn bound_coverage_from_samples(samples: &[SirSample], thetas_db: &[f64], seed: u64) -> Vec<McEstimate> {
    estimate(samples, thetas_db, seed, SirSample::bound_covered)
}

fn estimate(samples: &[SirSample], thetas_db: &[f64], seed: u64, hit: fn(&SirSample, f64) -> bool) -> Vec<McEstimate> {
    thetas_db
        .iter()
        .map(|&t| {
            let th = db_to_linear(t);
            let v: Vec<f64> = samples.iter().map(|s| if hit(s, th) { 1.0 } else { 0.0 }).collect();
            McEstimate::from_values(&v, seed)
        })
        .collect()
}

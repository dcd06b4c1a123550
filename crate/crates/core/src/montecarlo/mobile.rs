use std::f64::consts::PI;

use rand::Rng;
use rand_distr::{Beta, Distribution};
use rayon::prelude::*;

use crate::analytic::{Association, LinkBudget, StaticScenario};
use crate::error::{invalid, Result};
use crate::geometry::db_to_linear;
use crate::mobility::MobilityModel;
use crate::rng::{blocks, substream, SimRng};

use super::handover::leg_reach;
use super::sir::{truncation_radius, McConfig, McEstimate, Sampler, TRUNCATION_TAIL};

/// Coverage of a moving UAV with handover cost by simulation, for each threshold.
///
/// Each sample draws a long-run altitude, a BS field and one leg. Under
/// nearest association the UAV recedes radially from its server and hands
/// over when another simulated BS becomes closer; under CoMP it heads at a
/// cluster edge a uniform distance away. Covered samples score 1, or `1 − β`
/// after a handover.
pub fn mc_mobile_coverage_sweep(
    scenario: &StaticScenario,
    model: &MobilityModel,
    association: Association,
    thetas_db: &[f64],
    cfg: &McConfig,
) -> Result<Vec<McEstimate>> {
    scenario.config.validate()?;
    model.validate(scenario.config.h_bs)?;
    if cfg.samples == 0 {
        return Err(invalid("samples", "must be at least 1"));
    }
    let config = scenario.config;
    let clusters = scenario.clusters;
    let r_max = match cfg.r_max {
        Some(r) => r,
        None => {
            let lo = truncation_radius(&LinkBudget::uav(&config, model.h1 - config.h_bs).field, 0.0, TRUNCATION_TAIL)?;
            let hi = truncation_radius(&LinkBudget::uav(&config, model.h2 - config.h_bs).field, 0.0, TRUNCATION_TAIL)?;
            lo.max(hi)
        }
    };
    let thetas: Vec<f64> = thetas_db.iter().map(|&t| db_to_linear(t)).collect();
    let altitude = Beta::new(2.0, 2.0).expect("valid shape");
    let v = model.step_length();
    let one = |rng: &mut SimRng, radii: &mut Vec<f64>, powers: &mut Vec<f64>| -> Result<Vec<f64>> {
        let z = model.h1 + model.hbar() * altitude.sample(rng);
        let sampler = Sampler::new(&LinkBudget::uav(&config, z - config.h_bs), &clusters, r_max)?;
        let pair = sampler.realize(rng, radii, powers);
        let (sample, handover) = match association {
            Association::Nearest => {
                let r0 = pair.nearest.serving_distance;
                let d = leg_reach(model, v, rng);
                let reach = r0 + d;
                // server at angle 0, UAV moves to (−d, 0)
                let ho = radii.iter().any(|&r| {
                    r > r0 && r < r0 + 2.0 * d && {
                        let t = rng.random::<f64>() * 2.0 * PI;
                        (r * r + 2.0 * r * d * t.cos() + d * d).sqrt() < reach
                    }
                });
                (pair.nearest, ho)
            }
            Association::Comp => {
                let o = rng.random::<f64>() * 2.0 * clusters.r_h;
                (pair.comp, leg_reach(model, v, rng) > o)
            }
        };
        let score = if handover { 1.0 - model.beta } else { 1.0 };
        Ok(thetas.iter().map(|&th| if sample.covered(th) { score } else { 0.0 }).collect())
    };
    let chunks: Vec<Vec<Vec<f64>>> = blocks(cfg.samples)
        .collect::<Vec<_>>()
        .into_par_iter()
        .map(|(b, _, len)| {
            let mut rng = substream(cfg.seed, &[0x50, b]);
            let (mut radii, mut powers) = (Vec::new(), Vec::new());
            (0..len).map(|_| one(&mut rng, &mut radii, &mut powers)).collect::<Result<Vec<_>>>()
        })
        .collect::<Result<_>>()?;
    let rows: Vec<Vec<f64>> = chunks.into_iter().flatten().collect();
    Ok((0..thetas.len())
        .map(|j| {
            let col: Vec<f64> = rows.iter().map(|r| r[j]).collect();
            McEstimate::from_values(&col, cfg.seed)
        })
        .collect())
}

pub fn mc_mobile_coverage(
    scenario: &StaticScenario,
    model: &MobilityModel,
    association: Association,
    cfg: &McConfig,
) -> Result<McEstimate> {
    Ok(mc_mobile_coverage_sweep(scenario, model, association, &[scenario.theta_db], cfg)?[0])
}

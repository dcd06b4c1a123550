use crate::analytic::{
    comp_coverage_sweep, nearest_coverage_weighted, EntrySource, InnerSampling, LinkBudget, StaticScenario,
};
use crate::error::{invalid, Result};

use super::altitude::altitude_nodes;
use super::handover::handover_prob_comp;
use super::model::MobilityModel;
use super::transition::cosine_moments;

/// Altitude nodes used for the long-run altitude average.
const ALTITUDE_NODES: usize = 8;

/// Absolute tolerance of each per-altitude average over the serving distance.
const NODE_TOL: f64 = 1e-6;

fn check(scenario: &StaticScenario, model: &MobilityModel) -> Result<()> {
    scenario.config.validate()?;
    model.validate(scenario.config.h_bs)?;
    if !scenario.theta_db.is_finite() {
        return Err(invalid("theta_db", "must be finite"));
    }
    Ok(())
}

/// Coverage of a moving UAV under nearest-BS association with handover cost,
/// for each threshold. Coverage collected under a handover counts `1 − β`.
///
/// The altitude of `scenario` is ignored in favour of the long-run altitude law.
pub fn mobile_nearest_sweep(scenario: &StaticScenario, model: &MobilityModel, thetas_db: &[f64]) -> Result<Vec<f64>> {
    check(scenario, model)?;
    let cfg = &scenario.config;
    let lambda = cfg.lambda_b;
    let c = cosine_moments(model.mu, model.hbar())?;
    let v = model.step_length();
    let beta = model.beta;
    let keep = |r0: f64| {
        let no_handover = (-std::f64::consts::PI * lambda * (2.0 * r0 * v * c.mean + v * v * c.mean_sq)).exp();
        1.0 - beta * (1.0 - no_handover)
    };
    let mut total = vec![0.0; thetas_db.len()];
    for (z, w) in altitude_nodes(model, ALTITUDE_NODES) {
        let b = LinkBudget::uav(cfg, z - cfg.h_bs);
        let p = nearest_coverage_weighted(&b, thetas_db, keep, NODE_TOL)?;
        for (t, v) in total.iter_mut().zip(p) {
            *t += w * v;
        }
    }
    Ok(total)
}

pub fn coverage_mobile_nearest(scenario: &StaticScenario, model: &MobilityModel) -> Result<f64> {
    Ok(mobile_nearest_sweep(scenario, model, &[scenario.theta_db])?[0])
}

/// CoMP coverage upper bound of a moving UAV with handover cost.
pub fn mobile_comp_sweep(
    scenario: &StaticScenario,
    model: &MobilityModel,
    thetas_db: &[f64],
    sampling: &InnerSampling,
) -> Result<Vec<f64>> {
    check(scenario, model)?;
    let cfg = &scenario.config;
    let keep = 1.0 - model.beta * handover_prob_comp(model, &scenario.clusters)?;
    let mut total = vec![0.0; thetas_db.len()];
    for (z, w) in altitude_nodes(model, ALTITUDE_NODES) {
        let b = LinkBudget::uav(cfg, z - cfg.h_bs);
        let p = comp_coverage_sweep(&b, &scenario.clusters, thetas_db, sampling, EntrySource::Quadrature)?;
        for (t, v) in total.iter_mut().zip(p) {
            *t += w * v;
        }
    }
    Ok(total.into_iter().map(|v| keep * v).collect())
}

pub fn coverage_mobile_comp(scenario: &StaticScenario, model: &MobilityModel, sampling: &InnerSampling) -> Result<f64> {
    Ok(mobile_comp_sweep(scenario, model, &[scenario.theta_db], sampling)?[0])
}

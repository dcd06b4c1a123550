//! Named experiments, one per run mode, and the grid runner.

use std::time::Instant;

use rayon::prelude::*;

use skycov::analytic::{evaluator, Association, InnerSampling};
use skycov::mobility::{
    handover_evaluator, mobile_comp_sweep, mobile_nearest_sweep, HandoverNetwork, MobilityModel,
};
use skycov::montecarlo::{
    coverage_from_samples, mc_handover_count, mc_mobile_coverage_sweep, mc_perpendicular_handover, mc_radial_handover,
    mc_sir_scenario, HandoverTarget, McConfig, McEstimate, Receiver,
};
use skycov::{Error, Result};

use crate::scenario::{Metric, Mode, Scenario, SweepParam};

/// Analytic and simulated values at one grid point.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Values {
    pub analytic_ub: Option<f64>,
    pub analytic_lb: Option<f64>,
    pub mc: Option<McEstimate>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ResultRow {
    pub x: f64,
    pub analytic_ub: Option<f64>,
    pub analytic_lb: Option<f64>,
    pub mc_value: Option<f64>,
    pub mc_stderr: Option<f64>,
    pub wall_ms: f64,
    pub error: Option<String>,
}

impl ResultRow {
    fn ok(x: f64, v: Values, wall_ms: f64) -> Self {
        Self {
            x,
            analytic_ub: v.analytic_ub,
            analytic_lb: v.analytic_lb,
            mc_value: v.mc.map(|m| m.value),
            mc_stderr: v.mc.map(|m| m.stderr),
            wall_ms,
            error: None,
        }
    }

    fn failed(x: f64, e: &Error, wall_ms: f64) -> Self {
        Self {
            x,
            analytic_ub: None,
            analytic_lb: None,
            mc_value: None,
            mc_stderr: None,
            wall_ms,
            error: Some(e.to_string()),
        }
    }
}

/// Seconds of single-core work, split by kind.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Cost {
    pub analytic_s: f64,
    pub mc_s: f64,
}

impl Cost {
    pub fn total(&self) -> f64 {
        self.analytic_s + self.mc_s
    }
}

impl std::ops::Add for Cost {
    type Output = Cost;
    fn add(self, o: Cost) -> Cost {
        Cost {
            analytic_s: self.analytic_s + o.analytic_s,
            mc_s: self.mc_s + o.mc_s,
        }
    }
}

// Single-core throughput measured on the reference scenario.
const SIR_REALIZATION_S: f64 = 7e-4;
const MOBILE_REALIZATION_S: f64 = 1e-3;
/// Per serving-set sample and per expected cooperating BS.
const COMP_INNER_SAMPLE_S: f64 = 2e-4;
const NEAREST_CALL_S: f64 = 1.5;
const HANDOVER_EPOCH_S: f64 = 1e-5;
const ALTITUDE_NODES: f64 = 8.0;

fn comp_cost(p: &Scenario, thresholds: usize) -> f64 {
    let lambda = p.clusters.mean_serving_count(p.network.lambda_b).max(1.0);
    COMP_INNER_SAMPLE_S * lambda * p.inner_samples as f64 * (1.0 + 0.1 * (thresholds as f64 - 1.0))
}

/// A run mode: what is computed at each grid point.
pub trait Experiment: Send + Sync {
    fn mode(&self) -> Mode;

    fn description(&self) -> &'static str;

    /// Values at every threshold of `thetas_db` for `point`, whose own threshold is ignored.
    fn evaluate(&self, point: &Scenario, thetas_db: &[f64]) -> Result<Vec<Values>>;

    /// Rough single-core cost of one call to [`Experiment::evaluate`].
    fn cost(&self, point: &Scenario, thresholds: usize) -> Cost;
}

fn sampling(s: &Scenario) -> InnerSampling {
    InnerSampling::new(s.inner_samples, s.mc.seed)
}

fn mc_config(s: &Scenario) -> McConfig {
    McConfig::new(s.mc.samples, s.mc.seed)
}

fn mobility(s: &Scenario) -> Result<MobilityModel> {
    s.mobility.ok_or(Error::InvalidParameter {
        name: "mobility",
        reason: "mobile modes need a mobility model".into(),
    })
}

fn zip_values(ub: Vec<f64>, lb: Option<Vec<f64>>, mc: Vec<McEstimate>) -> Vec<Values> {
    ub.into_iter()
        .enumerate()
        .map(|(i, u)| Values {
            analytic_ub: Some(u),
            analytic_lb: lb.as_ref().map(|l| l[i]),
            mc: Some(mc[i]),
        })
        .collect()
}

struct StaticComp;
struct StaticNearest;
struct Ground;
struct MobileComp;
struct MobileNearest;

impl Experiment for StaticComp {
    fn mode(&self) -> Mode {
        Mode::StaticComp
    }
    fn description(&self) -> &'static str {
        "hovering UAV served by its CoMP cluster: upper and lower bounds against simulation"
    }
    fn evaluate(&self, p: &Scenario, thetas: &[f64]) -> Result<Vec<Values>> {
        let st = p.static_scenario();
        let ub = evaluator("comp-ub").expect("registered").sweep(&st, thetas, &sampling(p))?;
        let lb = evaluator("comp-lb").expect("registered").sweep(&st, thetas, &sampling(p))?;
        let samples: Vec<_> = mc_sir_scenario(&st, Receiver::Uav, &mc_config(p))?.into_iter().map(|s| s.comp).collect();
        Ok(zip_values(ub, Some(lb), coverage_from_samples(&samples, thetas, p.mc.seed)))
    }
    fn cost(&self, p: &Scenario, n: usize) -> Cost {
        Cost {
            analytic_s: 2.0 * comp_cost(p, n),
            mc_s: SIR_REALIZATION_S * p.mc.samples as f64,
        }
    }
}

impl Experiment for StaticNearest {
    fn mode(&self) -> Mode {
        Mode::StaticNearest
    }
    fn description(&self) -> &'static str {
        "hovering UAV attached to its nearest BS: exact analytic coverage against simulation"
    }
    fn evaluate(&self, p: &Scenario, thetas: &[f64]) -> Result<Vec<Values>> {
        let st = p.static_scenario();
        let ub = evaluator("nearest").expect("registered").sweep(&st, thetas, &sampling(p))?;
        let samples: Vec<_> = mc_sir_scenario(&st, Receiver::Uav, &mc_config(p))?.into_iter().map(|s| s.nearest).collect();
        Ok(zip_values(ub, None, coverage_from_samples(&samples, thetas, p.mc.seed)))
    }
    fn cost(&self, p: &Scenario, _: usize) -> Cost {
        Cost {
            analytic_s: NEAREST_CALL_S,
            mc_s: SIR_REALIZATION_S * p.mc.samples as f64,
        }
    }
}

impl Experiment for Ground {
    fn mode(&self) -> Mode {
        Mode::Gue
    }
    fn description(&self) -> &'static str {
        "ground user at BS height, CoMP or nearest association"
    }
    fn evaluate(&self, p: &Scenario, thetas: &[f64]) -> Result<Vec<Values>> {
        let st = p.static_scenario();
        let name = match p.association {
            Association::Comp => "gue-comp",
            Association::Nearest => "gue-nearest",
        };
        let ub = evaluator(name).expect("registered").sweep(&st, thetas, &sampling(p))?;
        let samples: Vec<_> = mc_sir_scenario(&st, Receiver::Ground, &mc_config(p))?
            .into_iter()
            .map(|s| match p.association {
                Association::Comp => s.comp,
                Association::Nearest => s.nearest,
            })
            .collect();
        Ok(zip_values(ub, None, coverage_from_samples(&samples, thetas, p.mc.seed)))
    }
    fn cost(&self, p: &Scenario, n: usize) -> Cost {
        let analytic_s = match p.association {
            Association::Comp => comp_cost(p, n),
            Association::Nearest => NEAREST_CALL_S,
        };
        Cost {
            analytic_s,
            mc_s: SIR_REALIZATION_S * p.mc.samples as f64,
        }
    }
}

fn handover_values(p: &Scenario, rule: &str, thetas: &[f64]) -> Result<Vec<Values>> {
    let m = mobility(p)?;
    let net = HandoverNetwork {
        lambda_b: p.network.lambda_b,
        clusters: p.clusters,
    };
    let eval = handover_evaluator(rule).expect("registered");
    let (analytic, mc) = match (p.metric, rule) {
        (Metric::HandoverRate, "comp") => (
            eval.rate(&m, &net)?,
            mc_handover_count(&m, HandoverTarget::Comp { clusters: p.clusters }, p.mc.samples, p.mc.seed)?,
        ),
        (Metric::HandoverRate, _) => (
            eval.rate(&m, &net)?,
            mc_handover_count(&m, HandoverTarget::Nearest { lambda_b: net.lambda_b }, p.mc.samples, p.mc.seed)?,
        ),
        (_, "comp") => (
            eval.probability(&m, &net)?,
            mc_perpendicular_handover(&m, &p.clusters, p.mc.samples, p.mc.seed)?,
        ),
        _ => (
            eval.probability(&m, &net)?,
            mc_nearest_probability(&m, net.lambda_b, p.mc.samples, p.mc.seed)?,
        ),
    };
    Ok(vec![
        Values {
            analytic_ub: Some(analytic),
            analytic_lb: None,
            mc: Some(mc),
        };
        thetas.len()
    ])
}

const DISTANCE_STRATA: usize = 16;

/// Radial-recession handover probability averaged over the serving distance,
/// stratified on quantiles of the nearest-BS distance law.
fn mc_nearest_probability(m: &MobilityModel, lambda_b: f64, n: usize, seed: u64) -> Result<McEstimate> {
    let per = n.div_ceil(DISTANCE_STRATA).max(1);
    let mut value = 0.0;
    let mut var = 0.0f64;
    for i in 0..DISTANCE_STRATA {
        let u = (i as f64 + 0.5) / DISTANCE_STRATA as f64;
        let r0 = (-(1.0 - u).ln() / (std::f64::consts::PI * lambda_b)).sqrt();
        let e = mc_radial_handover(r0, lambda_b, m, per, seed.wrapping_add(i as u64))?;
        value += e.value / DISTANCE_STRATA as f64;
        var += (e.stderr / DISTANCE_STRATA as f64).powi(2);
    }
    Ok(McEstimate {
        value,
        stderr: var.sqrt(),
        n: per * DISTANCE_STRATA,
        seed,
    })
}

fn handover_cost(p: &Scenario) -> Cost {
    Cost {
        analytic_s: 0.01,
        mc_s: HANDOVER_EPOCH_S * p.mc.samples as f64,
    }
}

impl Experiment for MobileComp {
    fn mode(&self) -> Mode {
        Mode::MobileComp
    }
    fn description(&self) -> &'static str {
        "UAV on a 3D random-waypoint path served by CoMP clusters: coverage with handover cost, handover rate or probability"
    }
    fn evaluate(&self, p: &Scenario, thetas: &[f64]) -> Result<Vec<Values>> {
        if p.metric != Metric::Coverage {
            return handover_values(p, "comp", thetas);
        }
        let m = mobility(p)?;
        let st = p.static_scenario();
        let ub = mobile_comp_sweep(&st, &m, thetas, &sampling(p))?;
        let mc = mc_mobile_coverage_sweep(&st, &m, Association::Comp, thetas, &mc_config(p))?;
        Ok(zip_values(ub, None, mc))
    }
    fn cost(&self, p: &Scenario, n: usize) -> Cost {
        if p.metric != Metric::Coverage {
            return handover_cost(p);
        }
        Cost {
            analytic_s: ALTITUDE_NODES * comp_cost(p, n),
            mc_s: MOBILE_REALIZATION_S * p.mc.samples as f64,
        }
    }
}

impl Experiment for MobileNearest {
    fn mode(&self) -> Mode {
        Mode::MobileNearest
    }
    fn description(&self) -> &'static str {
        "UAV on a 3D random-waypoint path attached to its nearest BS: coverage with handover cost, handover rate or probability"
    }
    fn evaluate(&self, p: &Scenario, thetas: &[f64]) -> Result<Vec<Values>> {
        if p.metric != Metric::Coverage {
            return handover_values(p, "nearest", thetas);
        }
        let m = mobility(p)?;
        let st = p.static_scenario();
        let ub = mobile_nearest_sweep(&st, &m, thetas)?;
        let mc = mc_mobile_coverage_sweep(&st, &m, Association::Nearest, thetas, &mc_config(p))?;
        Ok(zip_values(ub, None, mc))
    }
    fn cost(&self, p: &Scenario, _: usize) -> Cost {
        if p.metric != Metric::Coverage {
            return handover_cost(p);
        }
        Cost {
            analytic_s: ALTITUDE_NODES * NEAREST_CALL_S,
            mc_s: MOBILE_REALIZATION_S * p.mc.samples as f64,
        }
    }
}

pub fn experiments() -> Vec<Box<dyn Experiment>> {
    vec![
        Box::new(StaticComp),
        Box::new(StaticNearest),
        Box::new(Ground),
        Box::new(MobileComp),
        Box::new(MobileNearest),
    ]
}

pub fn experiment(mode: Mode) -> Box<dyn Experiment> {
    experiments().into_iter().find(|e| e.mode() == mode).expect("every mode is registered")
}

/// Estimated single-core cost of the whole grid.
pub fn estimate_cost(s: &Scenario) -> Cost {
    let e = experiment(s.mode);
    if s.sweep.param == SweepParam::Theta {
        e.cost(s, s.sweep.values.len())
    } else {
        s.sweep.values.iter().fold(Cost::default(), |acc, &x| acc + e.cost(&s.at(x), 1))
    }
}

/// Evaluates every grid point; rows come back in grid order.
///
/// A threshold sweep is one batch, sharing the simulated fields and the
/// serving-set average across thresholds. Other sweeps run point by point on
/// the worker pool.
pub fn run_grid(s: &Scenario) -> Vec<ResultRow> {
    let e = experiment(s.mode);
    let grid = &s.sweep.values;
    if s.sweep.param == SweepParam::Theta {
        let t0 = Instant::now();
        let out = e.evaluate(s, grid);
        let per = t0.elapsed().as_secs_f64() * 1e3 / grid.len() as f64;
        return match out {
            Ok(v) => grid.iter().zip(v).map(|(&x, v)| ResultRow::ok(x, v, per)).collect(),
            Err(err) => grid.iter().map(|&x| ResultRow::failed(x, &err, per)).collect(),
        };
    }
    grid.par_iter()
        .map(|&x| {
            let t0 = Instant::now();
            let out = e.evaluate(&s.at(x), &[s.theta_db]);
            let ms = t0.elapsed().as_secs_f64() * 1e3;
            match out {
                Ok(v) => ResultRow::ok(x, v[0], ms),
                Err(err) => ResultRow::failed(x, &err, ms),
            }
        })
        .collect()
}

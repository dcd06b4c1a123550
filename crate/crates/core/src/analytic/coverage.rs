use std::f64::consts::PI;

use rayon::prelude::*;

use crate::channel::LinkKind;
use crate::error::{invalid, Result};
use crate::geometry::{db_to_linear, sample_bpp_serving_set, ClusterGeometry, NetworkConfig};
use crate::quadrature::{integrate_vec, Tolerance};
use crate::rng::substream;
use crate::stats::pairwise_sum;

use super::closed_form::all_los_entries;
use super::laplace::{InterferenceField, InterferenceProfile};
use super::moment::{gamma_moment_match, ShapeRounding};
use super::toeplitz::column_sum;

/// A UAV hovering at a fixed altitude above a BS layer.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StaticScenario {
    pub config: NetworkConfig,
    pub clusters: ClusterGeometry,
    /// UAV altitude (m).
    pub h_d: f64,
    /// SIR threshold (dB).
    pub theta_db: f64,
}

impl StaticScenario {
    pub fn baseline() -> Self {
        Self {
            config: NetworkConfig::baseline(),
            clusters: ClusterGeometry::new(190.0).expect("positive half-distance"),
            h_d: 120.0,
            theta_db: 0.0,
        }
    }

    pub fn validate(&self) -> Result<()> {
        self.config.validate()?;
        if !(self.h_d > self.config.h_bs) {
            return Err(invalid(
                "h_d",
                format!("UAV altitude {} m must exceed the BS height {} m", self.h_d, self.config.h_bs),
            ));
        }
        if !self.theta_db.is_finite() {
            return Err(invalid("theta_db", "must be finite"));
        }
        Ok(())
    }

    /// Height of the UAV above the BS antennas.
    pub fn height_difference(&self) -> f64 {
        self.h_d - self.config.h_bs
    }

    pub fn with_altitude(mut self, h_d: f64) -> Self {
        self.h_d = h_d;
        self
    }

    pub fn with_threshold(mut self, theta_db: f64) -> Self {
        self.theta_db = theta_db;
        self
    }
}

/// Controls for the Monte Carlo average over in-cluster serving sets.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct InnerSampling {
    pub samples: usize,
    pub seed: u64,
    pub rounding: ShapeRounding,
}

impl Default for InnerSampling {
    fn default() -> Self {
        Self {
            samples: 10_000,
            seed: 0x5eed,
            rounding: ShapeRounding::CauchyBound,
        }
    }
}

impl InnerSampling {
    pub fn new(samples: usize, seed: u64) -> Self {
        Self {
            samples,
            seed,
            ..Self::default()
        }
    }
}

/// Desired-signal side of a link budget.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ServingLink {
    pub kind: LinkKind,
    pub gain: f64,
    pub m: u32,
}

/// Receiver-specific link budget: serving link plus interference field.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LinkBudget {
    pub serving: ServingLink,
    pub field: InterferenceField,
}

impl LinkBudget {
    /// UAV served through side lobes over LoS links.
    pub fn uav(config: &NetworkConfig, h: f64) -> Self {
        Self {
            serving: ServingLink {
                kind: LinkKind::Los,
                gain: config.g_s,
                m: config.m_l,
            },
            field: InterferenceField::uav(config, h),
        }
    }

    /// Ground user served through main lobes over Rayleigh NLoS links.
    pub fn ground(config: &NetworkConfig) -> Self {
        Self {
            serving: ServingLink {
                kind: LinkKind::Nlos,
                gain: config.g_m,
                m: 1,
            },
            field: InterferenceField::ground(config),
        }
    }

    /// Serving path gain at horizontal distance `r`.
    pub fn serving_gain(&self, r: f64) -> f64 {
        let f = &self.field;
        let (a, alpha) = match self.serving.kind {
            LinkKind::Los => (f.a_l, f.alpha_l),
            LinkKind::Nlos => (f.a_n, f.alpha_n),
        };
        a * self.serving.gain * (r * r + f.h * f.h).powf(-0.5 * alpha)
    }
}

/// Where the Toeplitz entries of a CoMP evaluation come from.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EntrySource {
    /// Numerical log-Laplace transform of the mixed LoS/NLoS field.
    Quadrature,
    /// Closed form with every interferer in LoS.
    AllLosClosedForm,
}

fn kappa_range(mean: f64) -> (u64, Vec<f64>) {
    let mut pmf = Vec::new();
    let mut cdf = 0.0;
    let mut k = 0u64;
    loop {
        let p = crate::special::poisson_pmf(k, mean);
        pmf.push(p);
        cdf += p;
        if 1.0 - cdf < 1e-6 && k as f64 > mean {
            break;
        }
        k += 1;
    }
    (k, pmf)
}

/// Coverage under CoMP service for each threshold in `thetas_db`, averaging
/// the conditional Toeplitz coverage over Poisson cluster sizes and uniform
/// serving sets. An empty cluster is an outage.
pub fn comp_coverage_sweep(
    budget: &LinkBudget,
    clusters: &ClusterGeometry,
    thetas_db: &[f64],
    sampling: &InnerSampling,
    source: EntrySource,
) -> Result<Vec<f64>> {
    let lambda = budget.field.lambda_b;
    let r_c = clusters.r_c;
    let (k_max, pmf) = kappa_range(clusters.mean_serving_count(lambda));
    let thetas: Vec<f64> = thetas_db.iter().map(|&t| db_to_linear(t)).collect();
    let profile = match source {
        EntrySource::Quadrature => Some(InterferenceProfile::new(budget.field, r_c)?),
        EntrySource::AllLosClosedForm => None,
    };
    let field = match source {
        EntrySource::Quadrature => budget.field,
        EntrySource::AllLosClosedForm => budget.field.all_los(),
    };
    let occupied = 1.0 - pmf[0];
    let mut total = vec![0.0; thetas.len()];
    for kappa in 1..=k_max {
        let weight = pmf[kappa as usize];
        // proportional allocation with a floor so rare sizes are still resolved
        let n = ((sampling.samples as f64 * weight / occupied).round() as usize).max(32);
        let mut rng = substream(sampling.seed, &[kappa]);
        let draws: Vec<(usize, f64)> = (0..n)
            .map(|_| {
                let r = sample_bpp_serving_set(kappa as usize, r_c, &mut rng)?;
                let zetas: Vec<f64> = r.iter().map(|&ri| budget.serving_gain(ri)).collect();
                let g = gamma_moment_match(&zetas, budget.serving.m)?;
                Ok((g.toeplitz_order(sampling.rounding), g.theta))
            })
            .collect::<Result<_>>()?;
        for (j, &theta) in thetas.iter().enumerate() {
            let values: Vec<f64> = draws
                .par_iter()
                .map(|&(k, scale)| {
                    let varpi = theta / (kappa as f64 * field.p_t * scale);
                    match &profile {
                        Some(p) => Ok(p.coverage(varpi, k)),
                        None => all_los_entries(&field, varpi, r_c, k).map(|t| column_sum(&t.t).clamp(0.0, 1.0)),
                    }
                })
                .collect::<Result<_>>()?;
            total[j] += weight * pairwise_sum(&values) / n as f64;
        }
    }
    Ok(total.into_iter().map(|v| v.clamp(0.0, 1.0)).collect())
}

/// Coverage under nearest-BS association for each threshold, integrating the
/// conditional coverage over the nearest-neighbour distance law.
pub fn nearest_coverage_sweep(budget: &LinkBudget, thetas_db: &[f64], tol: f64) -> Result<Vec<f64>> {
    nearest_coverage_weighted(budget, thetas_db, |_| 1.0, tol)
}

/// Like [`nearest_coverage_sweep`], with the conditional coverage at serving
/// distance `r₀` multiplied by `weight(r₀)` before averaging.
pub fn nearest_coverage_weighted<W>(budget: &LinkBudget, thetas_db: &[f64], weight: W, tol: f64) -> Result<Vec<f64>>
where
    W: Fn(f64) -> f64,
{
    let lambda = budget.field.lambda_b;
    let thetas: Vec<f64> = thetas_db.iter().map(|&t| db_to_linear(t)).collect();
    let m = budget.serving.m;
    let mut failure = None;
    // u = 1 − exp(−πλr₀²) is uniform on [0, 1)
    let est = integrate_vec(
        |u, out| {
            let r0 = (-(-u).ln_1p() / (PI * lambda)).sqrt();
            match InterferenceProfile::new(budget.field, r0) {
                Ok(p) => {
                    let g = budget.serving_gain(r0);
                    let w = weight(r0);
                    for (o, &th) in out.iter_mut().zip(&thetas) {
                        *o = w * p.coverage(th * m as f64 / (budget.field.p_t * g), m as usize);
                    }
                }
                Err(e) => {
                    failure.get_or_insert(e);
                    out.iter_mut().for_each(|v| *v = 0.0);
                }
            }
        },
        0.0,
        1.0,
        thetas.len(),
        Tolerance {
            abs: tol,
            rel: 0.0,
            max_intervals: 4000,
        },
    )?;
    if let Some(e) = failure {
        return Err(e);
    }
    Ok(est.value.into_iter().map(|v| v.clamp(0.0, 1.0)).collect())
}

/// Upper bound on CoMP coverage of a static UAV.
pub fn coverage_static_comp_ub(scenario: &StaticScenario, sampling: &InnerSampling) -> Result<f64> {
    scenario.validate()?;
    let b = LinkBudget::uav(&scenario.config, scenario.height_difference());
    Ok(comp_coverage_sweep(&b, &scenario.clusters, &[scenario.theta_db], sampling, EntrySource::Quadrature)?[0])
}

/// Closed-form lower bound on CoMP coverage of a static UAV.
pub fn coverage_static_comp_lb(scenario: &StaticScenario, sampling: &InnerSampling) -> Result<f64> {
    scenario.validate()?;
    let b = LinkBudget::uav(&scenario.config, scenario.height_difference());
    Ok(comp_coverage_sweep(&b, &scenario.clusters, &[scenario.theta_db], sampling, EntrySource::AllLosClosedForm)?[0])
}

/// Coverage of a static UAV attached to its nearest BS.
pub fn coverage_static_nearest(scenario: &StaticScenario) -> Result<f64> {
    scenario.validate()?;
    let b = LinkBudget::uav(&scenario.config, scenario.height_difference());
    Ok(nearest_coverage_sweep(&b, &[scenario.theta_db], 1e-7)?[0])
}

/// How a ground user is associated.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Association {
    Nearest,
    Comp,
}

/// Coverage of a ground user, the terrestrial baseline.
pub fn coverage_static_gue(scenario: &StaticScenario, association: Association, sampling: &InnerSampling) -> Result<f64> {
    scenario.config.validate()?;
    let b = LinkBudget::ground(&scenario.config);
    let v = match association {
        Association::Nearest => nearest_coverage_sweep(&b, &[scenario.theta_db], 1e-7)?,
        Association::Comp => comp_coverage_sweep(&b, &scenario.clusters, &[scenario.theta_db], sampling, EntrySource::Quadrature)?,
    };
    Ok(v[0])
}

/// A named static coverage evaluator.
pub trait CoverageEvaluator: Send + Sync {
    fn name(&self) -> &'static str;

    fn description(&self) -> &'static str;

    /// Coverage at each threshold of `thetas_db`, with the scenario's own
    /// threshold ignored.
    fn sweep(&self, scenario: &StaticScenario, thetas_db: &[f64], sampling: &InnerSampling) -> Result<Vec<f64>>;

    fn coverage(&self, scenario: &StaticScenario, sampling: &InnerSampling) -> Result<f64> {
        Ok(self.sweep(scenario, &[scenario.theta_db], sampling)?[0])
    }
}

struct CompUpperBound;
struct CompLowerBound;
struct Nearest;
struct GroundNearest;
struct GroundComp;

impl CoverageEvaluator for CompUpperBound {
    fn name(&self) -> &'static str {
        "comp-ub"
    }
    fn description(&self) -> &'static str {
        "CoMP coverage upper bound from the Gamma-matched Toeplitz evaluator"
    }
    fn sweep(&self, s: &StaticScenario, thetas_db: &[f64], sampling: &InnerSampling) -> Result<Vec<f64>> {
        s.validate()?;
        let b = LinkBudget::uav(&s.config, s.height_difference());
        comp_coverage_sweep(&b, &s.clusters, thetas_db, sampling, EntrySource::Quadrature)
    }
}

impl CoverageEvaluator for CompLowerBound {
    fn name(&self) -> &'static str {
        "comp-lb"
    }
    fn description(&self) -> &'static str {
        "CoMP coverage lower bound with all-LoS interference in closed form"
    }
    fn sweep(&self, s: &StaticScenario, thetas_db: &[f64], sampling: &InnerSampling) -> Result<Vec<f64>> {
        s.validate()?;
        let b = LinkBudget::uav(&s.config, s.height_difference());
        comp_coverage_sweep(&b, &s.clusters, thetas_db, sampling, EntrySource::AllLosClosedForm)
    }
}

impl CoverageEvaluator for Nearest {
    fn name(&self) -> &'static str {
        "nearest"
    }
    fn description(&self) -> &'static str {
        "UAV coverage under nearest-BS association"
    }
    fn sweep(&self, s: &StaticScenario, thetas_db: &[f64], _: &InnerSampling) -> Result<Vec<f64>> {
        s.validate()?;
        nearest_coverage_sweep(&LinkBudget::uav(&s.config, s.height_difference()), thetas_db, 1e-7)
    }
}

impl CoverageEvaluator for GroundNearest {
    fn name(&self) -> &'static str {
        "gue-nearest"
    }
    fn description(&self) -> &'static str {
        "ground user coverage under nearest-BS association"
    }
    fn sweep(&self, s: &StaticScenario, thetas_db: &[f64], _: &InnerSampling) -> Result<Vec<f64>> {
        s.config.validate()?;
        nearest_coverage_sweep(&LinkBudget::ground(&s.config), thetas_db, 1e-7)
    }
}

impl CoverageEvaluator for GroundComp {
    fn name(&self) -> &'static str {
        "gue-comp"
    }
    fn description(&self) -> &'static str {
        "ground user CoMP coverage upper bound"
    }
    fn sweep(&self, s: &StaticScenario, thetas_db: &[f64], sampling: &InnerSampling) -> Result<Vec<f64>> {
        s.config.validate()?;
        comp_coverage_sweep(&LinkBudget::ground(&s.config), &s.clusters, thetas_db, sampling, EntrySource::Quadrature)
    }
}

/// Every registered static coverage evaluator.
pub fn evaluators() -> Vec<Box<dyn CoverageEvaluator>> {
    vec![
        Box::new(CompUpperBound),
        Box::new(CompLowerBound),
        Box::new(Nearest),
        Box::new(GroundNearest),
        Box::new(GroundComp),
    ]
}

/// Looks up an evaluator by name.
pub fn evaluator(name: &str) -> Option<Box<dyn CoverageEvaluator>> {
    evaluators().into_iter().find(|e| e.name() == name)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn quick() -> InnerSampling {
        InnerSampling::new(400, 1)
    }

    #[test]
    fn registry_names_are_unique() {
        let names: Vec<_> = evaluators().iter().map(|e| e.name()).collect();
        let mut sorted = names.clone();
        sorted.sort();
        sorted.dedup();
        assert_eq!(names.len(), sorted.len());
        assert!(evaluator("comp-ub").is_some());
        assert!(evaluator("bogus").is_none());
    }

    #[test]
    fn low_threshold_leaves_only_the_void_mass() {
        let s = StaticScenario::baseline().with_threshold(-60.0);
        let v = coverage_static_comp_ub(&s, &quick()).unwrap();
        let void = crate::geometry::serving_count_pmf(s.config.lambda_b, s.clusters.r_c, 0);
        assert!((v - (1.0 - void)).abs() < 1e-3, "{v}");
    }

    #[test]
    fn bounds_are_ordered_and_monotone() {
        let s = StaticScenario::baseline();
        let thetas = [-10.0, -5.0, 0.0, 5.0, 10.0];
        let ub = evaluator("comp-ub").unwrap().sweep(&s, &thetas, &quick()).unwrap();
        let lb = evaluator("comp-lb").unwrap().sweep(&s, &thetas, &quick()).unwrap();
        for i in 0..thetas.len() {
            assert!(lb[i] <= ub[i] + 1e-12);
            if i > 0 {
                assert!(ub[i] <= ub[i - 1] + 1e-12 && lb[i] <= lb[i - 1] + 1e-12);
            }
        }
        let hi = coverage_static_comp_lb(&s.with_threshold(60.0), &quick()).unwrap();
        assert!(hi < 1e-6);
    }

    #[test]
    fn nearest_decreases_in_threshold() {
        let s = StaticScenario::baseline();
        let v = evaluator("nearest").unwrap().sweep(&s, &[-10.0, -5.0, 0.0, 5.0], &quick()).unwrap();
        assert!(v.windows(2).all(|w| w[1] <= w[0]));
    }

    #[test]
    fn rayleigh_nearest_matches_textbook_integral() {
        // m = 1, every link LoS with one exponent: the classic PPP integral
        let mut cfg = NetworkConfig::baseline();
        cfg.m_l = 1;
        cfg.m_n = 1;
        let h = 90.0;
        let mut b = LinkBudget::uav(&cfg, h);
        b.field = b.field.all_los();
        let a = cfg.alpha_l;
        let lam = cfg.lambda_b;
        for &th_db in &[-5.0, 0.0, 5.0] {
            let th = db_to_linear(th_db);
            let v = nearest_coverage_sweep(&b, &[th_db], 1e-8).unwrap()[0];
            // P = ∫ f(r0) exp(−2πλ ∫_{r0}^∞ ν/(1 + ((r0²+h²)/(ν²+h²))^(−α/2)/ϑ) dν) dr0
            let tol = Tolerance::new(1e-11, 1e-11);
            let oracle = crate::quadrature::integrate(
                |u| {
                    let r0 = (-(-u).ln_1p() / (PI * lam)).sqrt();
                    let d0 = r0 * r0 + h * h;
                    // log-spaced to 1e9, power-law tail beyond
                    let far: f64 = 1e9;
                    let body = crate::quadrature::integrate(
                        |s| {
                            let nu = s.exp();
                            let ratio = (d0 / (nu * nu + h * h)).powf(0.5 * a);
                            nu * nu * th * ratio / (1.0 + th * ratio)
                        },
                        r0.max(1e-6).ln(),
                        far.ln(),
                        tol,
                    )
                    .unwrap();
                    let inner = body + th * d0.powf(0.5 * a) * far.powf(2.0 - a) / (a - 2.0);
                    (-2.0 * PI * lam * inner).exp()
                },
                0.0,
                1.0,
                Tolerance::new(1e-9, 1e-9),
            )
            .unwrap();
            assert!((v - oracle).abs() < 1e-3, "{th_db}: {v} vs {oracle}");
        }
    }

    #[test]
    fn ground_user_outperforms_uav_and_improves_with_radius() {
        let s = StaticScenario::baseline();
        let gue = coverage_static_gue(&s, Association::Comp, &quick()).unwrap();
        let uav = coverage_static_comp_ub(&s, &quick()).unwrap();
        assert!(gue >= uav, "{gue} vs {uav}");
        let mut last = 0.0;
        for r_h in [100.0, 190.0, 300.0] {
            let mut t = s;
            t.clusters = ClusterGeometry::new(r_h).unwrap();
            let v = coverage_static_gue(&t, Association::Comp, &quick()).unwrap();
            assert!(v > last);
            last = v;
        }
    }

    #[test]
    fn altitude_at_or_below_bs_rejected() {
        let s = StaticScenario::baseline().with_altitude(30.0);
        assert!(coverage_static_comp_ub(&s, &quick()).is_err());
    }
}

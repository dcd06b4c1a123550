use std::f64::consts::PI;

use crate::error::{invalid, Result};
use crate::geometry::ClusterGeometry;
use crate::quadrature::{integrate, Tolerance};
use crate::special::{erf, erfcx};

use super::model::MobilityModel;
use super::transition::{cosine_moments, effective_omega};

/// Expected nearest-BS handovers per second, `4v̄√λ/(π·Ω)` with `Ω` the mean
/// leg stretch from [`effective_omega`].
pub fn handover_rate_nearest(lambda_b: f64, model: &MobilityModel) -> Result<f64> {
    check(model)?;
    if !(lambda_b >= 0.0) {
        return Err(invalid("lambda_b", "must be non-negative"));
    }
    Ok(4.0 * model.vbar * lambda_b.sqrt() / (PI * effective_omega(model.mu, model.hbar())?))
}

/// Upper bound on the probability of a nearest-BS handover within one
/// decision horizon, given serving distance `r0`.
///
/// The UAV recedes by `d = v·cos φ`, which uncovers the area `π(2r₀d + d²)`
/// of a disk around its next position.
pub fn handover_prob_nearest_ub(r0: f64, lambda_b: f64, model: &MobilityModel) -> Result<f64> {
    check(model)?;
    if !(r0 >= 0.0) {
        return Err(invalid("r0", "must be non-negative"));
    }
    let c = cosine_moments(model.mu, model.hbar())?;
    Ok(nearest_prob(r0, lambda_b, model.step_length(), c.mean, c.mean_sq))
}

fn nearest_prob(r0: f64, lambda_b: f64, v: f64, c1: f64, c2: f64) -> f64 {
    -(-PI * lambda_b * (2.0 * r0 * v * c1 + v * v * c2)).exp_m1()
}

/// [`handover_prob_nearest_ub`] averaged over the nearest-neighbour distance law.
pub fn handover_prob_nearest_mean(lambda_b: f64, model: &MobilityModel) -> Result<f64> {
    check(model)?;
    if lambda_b == 0.0 {
        return Ok(0.0);
    }
    let c = cosine_moments(model.mu, model.hbar())?;
    let v = model.step_length();
    let a = PI * lambda_b;
    // E[e^{−b r₀}] = 1 − b·√π/(2√a)·erfcx(b/(2√a)) for r₀ with density 2a·r₀·e^{−a r₀²}
    let b = 2.0 * a * v * c.mean;
    let laplace = 1.0 - b * PI.sqrt() / (2.0 * a.sqrt()) * erfcx(b / (2.0 * a.sqrt()));
    Ok(1.0 - (-a * v * v * c.mean_sq).exp() * laplace)
}

/// Expected inter-cluster handovers per second on the hexagonal cluster grid,
/// `2E[V_ρ]/(πR_h)` with `E[V_ρ] = v̄·E[cos φ]`.
pub fn handover_rate_comp(model: &MobilityModel, clusters: &ClusterGeometry) -> Result<f64> {
    check(model)?;
    Ok(2.0 * mean_horizontal_speed(model)? / (PI * clusters.r_h))
}

/// `E[V_ρ] = v̄·E[cos φ]`.
pub fn mean_horizontal_speed(model: &MobilityModel) -> Result<f64> {
    Ok(model.vbar * cosine_moments(model.mu, model.hbar())?.mean)
}

/// Probability that a leg heading straight at a boundary `o` metres away
/// reaches it within the step length `v`: `P(v·cos φ > o)`.
pub fn boundary_crossing_probability(o: f64, v: f64, mu: f64, hbar: f64) -> f64 {
    if o >= v {
        return 0.0;
    }
    if o <= 0.0 || hbar == 0.0 {
        return 1.0;
    }
    let g = mu * o * o / (v * v - o * o);
    crossing_given_tan(g, hbar)
}

/// `E_p[exp(−πg p²)] = √π·erf(√q)/√q + (e^{−q} − 1)/q` with `q = πħ²g`.
fn crossing_given_tan(g: f64, hbar: f64) -> f64 {
    let q = PI * hbar * hbar * g;
    if q < 0.05 {
        // Σ (−1)ⁿ qⁿ [2/(n!(2n+1)) − 1/(n+1)!]
        let mut sum = 0.0;
        let mut fact = 1.0;
        let mut pow = 1.0;
        for n in 0..12 {
            let nf = n as f64;
            if n > 0 {
                fact *= nf;
                pow *= -q;
            }
            sum += pow * (2.0 / (fact * (2.0 * nf + 1.0)) - 1.0 / (fact * (nf + 1.0)));
        }
        return sum;
    }
    let s = q.sqrt();
    PI.sqrt() * erf(s) / s + (-q).exp_m1() / q
}

/// Probability of an inter-cluster handover within one decision horizon for a
/// boundary distance uniform on `[0, 2R_h]` and motion perpendicular to it.
pub fn handover_prob_comp(model: &MobilityModel, clusters: &ClusterGeometry) -> Result<f64> {
    check(model)?;
    let v = model.step_length();
    if v == 0.0 {
        return Ok(0.0);
    }
    let span = 2.0 * clusters.r_h;
    let hbar = model.hbar();
    if hbar == 0.0 {
        return Ok((v / span).min(1.0));
    }
    // o = v·sin θ removes the endpoint singularity at o = v
    let upper = if v <= span { 0.5 * PI } else { (span / v).asin() };
    let integral = integrate(
        |th: f64| {
            let t = th.tan();
            v * th.cos() * crossing_given_tan(model.mu * t * t, hbar)
        },
        0.0,
        upper,
        Tolerance::new(1e-13, 1e-11),
    )?;
    Ok((integral / span).clamp(0.0, 1.0))
}

fn check(model: &MobilityModel) -> Result<()> {
    if !(model.mu > 0.0) || !(model.h2 >= model.h1) || !(model.vbar >= 0.0) || !(model.unit_time > 0.0) {
        return Err(invalid("model", "needs mu > 0, h2 ≥ h1, vbar ≥ 0 and unit_time > 0"));
    }
    Ok(())
}

/// Network side of a handover evaluation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HandoverNetwork {
    pub lambda_b: f64,
    pub clusters: ClusterGeometry,
}

/// Handover rate and probability under one association rule.
pub trait HandoverEvaluator: Send + Sync {
    fn name(&self) -> &'static str;
    fn description(&self) -> &'static str;
    fn rate(&self, model: &MobilityModel, net: &HandoverNetwork) -> Result<f64>;
    fn probability(&self, model: &MobilityModel, net: &HandoverNetwork) -> Result<f64>;
}

struct NearestHandover;
struct CompHandover;

impl HandoverEvaluator for NearestHandover {
    fn name(&self) -> &'static str {
        "nearest"
    }
    fn description(&self) -> &'static str {
        "Poisson-Voronoi cell changes under nearest-BS association"
    }
    fn rate(&self, model: &MobilityModel, net: &HandoverNetwork) -> Result<f64> {
        handover_rate_nearest(net.lambda_b, model)
    }
    fn probability(&self, model: &MobilityModel, net: &HandoverNetwork) -> Result<f64> {
        handover_prob_nearest_mean(net.lambda_b, model)
    }
}

impl HandoverEvaluator for CompHandover {
    fn name(&self) -> &'static str {
        "comp"
    }
    fn description(&self) -> &'static str {
        "hexagonal cluster changes under CoMP service"
    }
    fn rate(&self, model: &MobilityModel, net: &HandoverNetwork) -> Result<f64> {
        handover_rate_comp(model, &net.clusters)
    }
    fn probability(&self, model: &MobilityModel, net: &HandoverNetwork) -> Result<f64> {
        handover_prob_comp(model, &net.clusters)
    }
}

pub fn handover_evaluators() -> Vec<Box<dyn HandoverEvaluator>> {
    vec![Box::new(NearestHandover), Box::new(CompHandover)]
}

pub fn handover_evaluator(name: &str) -> Option<Box<dyn HandoverEvaluator>> {
    handover_evaluators().into_iter().find(|e| e.name() == name)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mobility::model::{kmh_to_mps, sample_horizontal_length};
    use crate::quadrature::integrate_to_infinity;
    use crate::rng::substream;
    use approx::assert_relative_eq;
    use proptest::prelude::*;
    use rand::Rng;

    fn planar() -> MobilityModel {
        MobilityModel::baseline().centred(150.0, 0.0)
    }

    #[test]
    fn planar_nearest_rate_plug_in() {
        let m = planar().with_speed(kmh_to_mps(30.0));
        let h = handover_rate_nearest(20e-6, &m).unwrap();
        assert_relative_eq!(h, 4.0 * m.vbar * 20e-6f64.sqrt() / PI, max_relative = 1e-12);
        assert!((h - 0.0474).abs() < 1e-3);
    }

    #[test]
    fn rate_scales_with_root_density() {
        let m = MobilityModel::baseline();
        for &lam in &[5e-6, 20e-6, 80e-6] {
            let r = handover_rate_nearest(4.0 * lam, &m).unwrap() / handover_rate_nearest(lam, &m).unwrap();
            assert!((r - 2.0).abs() < 1e-12);
        }
    }

    #[test]
    fn planar_comp_rate() {
        let c = ClusterGeometry::new(190.0).unwrap();
        let m = planar();
        assert_relative_eq!(handover_rate_comp(&m, &c).unwrap(), 2.0 * m.vbar / (PI * 190.0), max_relative = 1e-12);
    }

    #[test]
    fn comp_rate_decreases_with_cluster_size() {
        let m = MobilityModel::baseline();
        let mut last = f64::INFINITY;
        for &r in &[50.0, 100.0, 190.0, 400.0, 1000.0] {
            let h = handover_rate_comp(&m, &ClusterGeometry::new(r).unwrap()).unwrap();
            assert!(h < last);
            last = h;
        }
    }

    #[test]
    fn still_uav_never_hands_over() {
        let m = MobilityModel::baseline().with_speed(0.0);
        let c = ClusterGeometry::new(190.0).unwrap();
        assert_eq!(handover_prob_nearest_ub(120.0, 20e-6, &m).unwrap(), 0.0);
        assert_eq!(handover_prob_comp(&m, &c).unwrap(), 0.0);
        assert_eq!(handover_prob_nearest_mean(20e-6, &m).unwrap(), 0.0);
        assert_eq!(handover_rate_nearest(20e-6, &m).unwrap(), 0.0);
    }

    #[test]
    fn void_network_never_hands_over() {
        let m = MobilityModel::baseline();
        assert_eq!(handover_prob_nearest_ub(120.0, 0.0, &m).unwrap(), 0.0);
        assert!(handover_prob_nearest_ub(120.0, 1e-12, &m).unwrap() < 1e-8);
    }

    #[test]
    fn planar_comp_probability() {
        let m = planar();
        let c = ClusterGeometry::new(190.0).unwrap();
        assert_relative_eq!(handover_prob_comp(&m, &c).unwrap(), m.vbar / 380.0, max_relative = 1e-12);
        let fast = planar().with_speed(1000.0);
        assert_eq!(handover_prob_comp(&fast, &c).unwrap(), 1.0);
        // a vanishing band approaches the planar value
        let thin = MobilityModel::baseline().centred(150.0, 1e-3);
        assert_relative_eq!(handover_prob_comp(&thin, &c).unwrap(), m.vbar / 380.0, max_relative = 1e-5);
    }

    #[test]
    fn crossing_series_meets_closed_form() {
        for &q in &[0.049_999, 0.050_001] {
            let h = 10.0;
            let g = q / (PI * h * h);
            let s = q.sqrt();
            let closed = PI.sqrt() * erf(s) / s + (-q).exp_m1() / q;
            assert_relative_eq!(crossing_given_tan(g, h), closed, max_relative = 1e-12);
        }
    }

    #[test]
    fn crossing_probability_matches_direct_expectation() {
        // P(H | o) = E_p[exp(−πμ p² o²/(v² − o²))]
        let (mu, h, v) = (300e-6, 80.0, 8.0);
        for &o in &[0.5, 3.0, 7.0, 7.99] {
            let g = mu * o * o / (v * v - o * o);
            let direct = integrate(|p| 2.0 * (h - p) / (h * h) * (-PI * g * p * p).exp(), 0.0, h, Tolerance::default()).unwrap();
            assert_relative_eq!(boundary_crossing_probability(o, v, mu, h), direct, max_relative = 1e-10);
        }
    }

    #[test]
    fn comp_probability_matches_perpendicular_oracle() {
        let m = MobilityModel::baseline();
        let v = m.step_length();
        let mut rng = substream(21, &[]);
        for &r_h in &[100.0, 190.0, 400.0] {
            let n = 400_000;
            let mut hits = 0u64;
            for _ in 0..n {
                let o = rng.random::<f64>() * 2.0 * r_h;
                let rho = sample_horizontal_length(m.mu, &mut rng);
                let p = rng.random_range(m.h1..m.h2) - rng.random_range(m.h1..m.h2);
                if v * rho / rho.hypot(p) > o {
                    hits += 1;
                }
            }
            let mc = hits as f64 / n as f64;
            let a = handover_prob_comp(&m, &ClusterGeometry::new(r_h).unwrap()).unwrap();
            assert!((mc - a).abs() < 0.01, "R_h {r_h}: {mc} vs {a}");
        }
    }

    #[test]
    fn nearest_probability_decreases_with_band_and_mobility_intensity() {
        let base = MobilityModel::baseline();
        let mut last = f64::INFINITY;
        for &(mu, h) in &[(100e-6, 20.0), (300e-6, 20.0), (300e-6, 60.0), (1e-3, 60.0), (1e-3, 200.0)] {
            let m = MobilityModel { mu, ..base }.centred(150.0, h);
            let p = handover_prob_nearest_ub(150.0, 20e-6, &m).unwrap();
            assert!(p < last, "mu {mu} h {h}: {p}");
            last = p;
        }
    }

    #[test]
    fn radial_oracle_for_nearest_probability() {
        // moving straight away from the server uncovers π((r₀+d)² − r₀²)
        let m = MobilityModel::baseline();
        let lam = 20e-6;
        let r0 = 150.0;
        let c = cosine_moments(m.mu, m.hbar()).unwrap();
        let v = m.step_length();
        let mut rng = substream(22, &[]);
        let n = 1_000_000;
        let (mut acc, mut miss) = (0.0, 0.0);
        for _ in 0..n {
            let rho = sample_horizontal_length(m.mu, &mut rng);
            let p = rng.random_range(m.h1..m.h2) - rng.random_range(m.h1..m.h2);
            let d = v * rho / rho.hypot(p);
            let area = PI * (2.0 * r0 * d + d * d);
            acc += area;
            miss += (-lam * area).exp();
        }
        let mean_area = acc / n as f64;
        let radial = 1.0 - miss / n as f64;
        assert_relative_eq!(mean_area, PI * (2.0 * r0 * v * c.mean + v * v * c.mean_sq), max_relative = 2e-3);
        let ub = handover_prob_nearest_ub(r0, lam, &m).unwrap();
        assert_relative_eq!(ub, 1.0 - (-lam * mean_area).exp(), max_relative = 5e-3);
        // averaging inside the exponent can only raise the probability
        assert!(radial <= ub * (1.0 + 1e-3));
    }

    #[test]
    fn averaged_nearest_probability_matches_quadrature() {
        let m = MobilityModel::baseline();
        let lam = 20e-6;
        let q = integrate_to_infinity(
            |r| 2.0 * PI * lam * r * (-PI * lam * r * r).exp() * handover_prob_nearest_ub(r, lam, &m).unwrap(),
            0.0,
            Tolerance::new(1e-12, 1e-10),
        )
        .unwrap();
        assert_relative_eq!(handover_prob_nearest_mean(lam, &m).unwrap(), q, max_relative = 1e-8);
    }

    #[test]
    fn registry() {
        let names: Vec<_> = handover_evaluators().iter().map(|e| e.name()).collect();
        assert_eq!(names, ["nearest", "comp"]);
        let net = HandoverNetwork {
            lambda_b: 20e-6,
            clusters: ClusterGeometry::new(190.0).unwrap(),
        };
        let m = MobilityModel::baseline();
        let e = handover_evaluator("comp").unwrap();
        assert_eq!(e.rate(&m, &net).unwrap(), handover_rate_comp(&m, &net.clusters).unwrap());
        assert!(handover_evaluator("voronoi").is_none());
    }

    proptest! {
        #[test]
        fn linear_in_speed_and_bounded(v in 0.1f64..50.0, h in 0.0f64..200.0, r0 in 0.0f64..2000.0) {
            let m = MobilityModel::baseline().centred(150.0 + h, h).with_speed(v);
            let m2 = m.with_speed(2.0 * v);
            let c = ClusterGeometry::new(190.0).unwrap();
            let r1 = handover_rate_nearest(20e-6, &m).unwrap();
            prop_assert!((handover_rate_nearest(20e-6, &m2).unwrap() / r1 - 2.0).abs() < 1e-12);
            let c1 = handover_rate_comp(&m, &c).unwrap();
            prop_assert!((handover_rate_comp(&m2, &c).unwrap() / c1 - 2.0).abs() < 1e-12);
            for p in [handover_prob_nearest_ub(r0, 20e-6, &m).unwrap(), handover_prob_comp(&m, &c).unwrap()] {
                prop_assert!((0.0..=1.0).contains(&p));
            }
        }
    }
}

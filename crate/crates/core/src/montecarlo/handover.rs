use std::f64::consts::PI;

use rand::Rng;
use rayon::prelude::*;

use crate::error::{invalid, Result};
use crate::geometry::{hex_cluster_index, sample_poisson_count, ClusterGeometry};
use crate::mobility::{sample_horizontal_length, sample_trajectory, MobilityModel, Trajectory, Waypoint};
use crate::rng::{blocks, substream, SimRng};
use crate::stats::pairwise_sum;

use super::sir::McEstimate;

/// Which boundaries count as handovers.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum HandoverTarget {
    /// Poisson–Voronoi cells of a BS field with this intensity (per m²).
    Nearest { lambda_b: f64 },
    /// Hexagonal cluster cells.
    Comp { clusters: ClusterGeometry },
}

/// Sampling step along a leg of horizontal length `len`.
fn step_count(len: f64) -> usize {
    let step = (len / 100.0).min(1.0);
    if step <= 0.0 {
        1
    } else {
        (len / step).ceil().max(1.0) as usize
    }
}

/// Radius around a point that holds its nearest BS except with probability `1e-12`.
fn nearest_reach(lambda_b: f64) -> f64 {
    ((1e12f64).ln() / (PI * lambda_b)).sqrt()
}

/// Nearest-BS identity changes along one leg, with a fresh BS field drawn
/// around the leg.
fn voronoi_crossings(a: [f64; 2], b: [f64; 2], lambda_b: f64, rng: &mut SimRng, pts: &mut Vec<[f64; 2]>) -> u64 {
    let len = (b[0] - a[0]).hypot(b[1] - a[1]);
    let mid = [0.5 * (a[0] + b[0]), 0.5 * (a[1] + b[1])];
    let radius = 0.5 * len + nearest_reach(lambda_b);
    let n = sample_poisson_count(lambda_b * PI * radius * radius, rng) as usize;
    pts.clear();
    for _ in 0..n {
        let r = radius * rng.random::<f64>().sqrt();
        let t = rng.random::<f64>() * 2.0 * PI;
        pts.push([mid[0] + r * t.cos(), mid[1] + r * t.sin()]);
    }
    if pts.len() < 2 {
        return 0;
    }
    let dist2 = |p: &[f64; 2], x: [f64; 2]| (p[0] - x[0]).powi(2) + (p[1] - x[1]).powi(2);
    let nearest = |x: [f64; 2], set: &[[f64; 2]]| -> (usize, f64) {
        set.iter()
            .enumerate()
            .map(|(i, p)| (i, dist2(p, x)))
            .min_by(|u, v| u.1.total_cmp(&v.1))
            .expect("non-empty")
    };
    // only BSs within (n(a) + n(b) + len)/2 of the leg can be nearest to any of its points
    let na = nearest(a, pts).1.sqrt();
    let nb = nearest(b, pts).1.sqrt();
    let reach = 0.5 * (na + nb + len) + 1e-9;
    let seg_dist = |p: &[f64; 2]| {
        let (dx, dy) = (b[0] - a[0], b[1] - a[1]);
        let t = if len > 0.0 {
            (((p[0] - a[0]) * dx + (p[1] - a[1]) * dy) / (len * len)).clamp(0.0, 1.0)
        } else {
            0.0
        };
        (p[0] - a[0] - t * dx).hypot(p[1] - a[1] - t * dy)
    };
    let cand: Vec<[f64; 2]> = pts.iter().copied().filter(|p| seg_dist(p) <= reach).collect();
    let steps = step_count(len);
    let mut last = nearest(a, &cand).0;
    let mut count = 0;
    for s in 1..=steps {
        let t = s as f64 / steps as f64;
        let x = [a[0] + t * (b[0] - a[0]), a[1] + t * (b[1] - a[1])];
        let id = nearest(x, &cand).0;
        if id != last {
            count += 1;
            last = id;
        }
    }
    count
}

fn hex_crossings(a: [f64; 2], b: [f64; 2], r_h: f64) -> u64 {
    let len = (b[0] - a[0]).hypot(b[1] - a[1]);
    let steps = step_count(len);
    let mut last = hex_cluster_index(a, r_h);
    let mut count = 0;
    for s in 1..=steps {
        let t = s as f64 / steps as f64;
        let id = hex_cluster_index([a[0] + t * (b[0] - a[0]), a[1] + t * (b[1] - a[1])], r_h);
        if id != last {
            count += 1;
            last = id;
        }
    }
    count
}

fn check(model: &MobilityModel, target: &HandoverTarget, n_epochs: usize) -> Result<()> {
    if n_epochs < 1000 {
        return Err(invalid("n_epochs", format!("needs at least 1000 epochs, got {n_epochs}")));
    }
    if !(model.vbar > 0.0) {
        return Err(invalid("vbar", "handover rate needs a moving UAV"));
    }
    if let HandoverTarget::Nearest { lambda_b } = target {
        if !(*lambda_b > 0.0) {
            return Err(invalid("lambda_b", "must be positive"));
        }
    }
    Ok(())
}

/// Handovers per second along simulated random-waypoint trajectories.
///
/// Each block of epochs follows its own trajectory. The standard error is
/// that of the ratio estimator across blocks.
pub fn mc_handover_count(model: &MobilityModel, target: HandoverTarget, n_epochs: usize, seed: u64) -> Result<McEstimate> {
    check(model, &target, n_epochs)?;
    let per_block: Vec<(f64, f64)> = blocks(n_epochs)
        .collect::<Vec<_>>()
        .into_par_iter()
        .map(|(b, _, len)| {
            let mut rng = substream(seed, &[0x40, b]);
            let start = start_point(model, &target, &mut rng);
            let traj = sample_trajectory(model, start, len, &mut rng)?;
            Ok(count_along(&traj, model, &target, &mut rng))
        })
        .collect::<Result<_>>()?;
    let crossings: Vec<f64> = per_block.iter().map(|p| p.0).collect();
    let times: Vec<f64> = per_block.iter().map(|p| p.1).collect();
    let (c, t) = (pairwise_sum(&crossings), pairwise_sum(&times));
    let rate = c / t;
    let k = per_block.len() as f64;
    let stderr = if per_block.len() > 1 {
        let resid: Vec<f64> = per_block.iter().map(|(ci, ti)| (ci - rate * ti).powi(2)).collect();
        (pairwise_sum(&resid) / (k * (k - 1.0))).sqrt() / (t / k)
    } else {
        f64::NAN
    };
    Ok(McEstimate {
        value: rate,
        stderr,
        n: n_epochs,
        seed,
    })
}

fn start_point(model: &MobilityModel, target: &HandoverTarget, rng: &mut SimRng) -> Waypoint {
    let z = if model.h2 > model.h1 {
        rng.random_range(model.h1..model.h2)
    } else {
        model.h1
    };
    // a uniform offset inside one lattice cell keeps the hex count stationary
    let span = match target {
        HandoverTarget::Comp { clusters } => 4.0 * clusters.r_h,
        HandoverTarget::Nearest { .. } => 0.0,
    };
    Waypoint {
        x: rng.random::<f64>() * span,
        y: rng.random::<f64>() * span,
        z,
        epoch: 0,
    }
}

fn count_along(traj: &Trajectory, model: &MobilityModel, target: &HandoverTarget, rng: &mut SimRng) -> (f64, f64) {
    let mut pts = Vec::new();
    let mut crossings = 0;
    for w in traj.waypoints.windows(2) {
        let (a, b) = ([w[0].x, w[0].y], [w[1].x, w[1].y]);
        crossings += match target {
            HandoverTarget::Nearest { lambda_b } => voronoi_crossings(a, b, *lambda_b, rng, &mut pts),
            HandoverTarget::Comp { clusters } => hex_crossings(a, b, clusters.r_h),
        };
    }
    (crossings as f64, traj.total_length() / model.vbar)
}

/// Fraction of legs on which `v·cos φ` exceeds a boundary distance uniform on
/// `[0, 2R_h]`.
pub fn mc_perpendicular_handover(model: &MobilityModel, clusters: &ClusterGeometry, n: usize, seed: u64) -> Result<McEstimate> {
    if n == 0 {
        return Err(invalid("n", "must be at least 1"));
    }
    let v = model.step_length();
    let span = 2.0 * clusters.r_h;
    let hits = parallel_indicators(n, seed, 0x41, |rng| {
        let o = rng.random::<f64>() * span;
        leg_reach(model, v, rng) > o
    });
    Ok(McEstimate::from_values(&hits, seed))
}

/// Probability that a UAV receding radially from its nearest BS at `r0`
/// finds a closer BS after one decision horizon, simulating the BS field.
pub fn mc_radial_handover(r0: f64, lambda_b: f64, model: &MobilityModel, n: usize, seed: u64) -> Result<McEstimate> {
    if n == 0 || !(r0 >= 0.0) {
        return Err(invalid("n, r0", "need n ≥ 1 and r0 ≥ 0"));
    }
    let v = model.step_length();
    let hits = parallel_indicators(n, seed, 0x42, |rng| {
        let d = leg_reach(model, v, rng);
        // serving BS at (r0, 0), UAV moves to (−d, 0); other BSs avoid the disk of radius r0 at the origin
        let big = r0 + d;
        let count = sample_poisson_count(lambda_b * PI * (big + d) * (big + d), rng);
        (0..count).any(|_| {
            let r = (big + d) * rng.random::<f64>().sqrt();
            let t = rng.random::<f64>() * 2.0 * PI;
            let (x, y) = (r * t.cos(), r * t.sin());
            x.hypot(y) >= r0 && (x + d).hypot(y) < big
        })
    });
    Ok(McEstimate::from_values(&hits, seed))
}

/// Horizontal distance covered in the decision horizon on a random leg.
pub fn leg_reach(model: &MobilityModel, v: f64, rng: &mut SimRng) -> f64 {
    let rho = sample_horizontal_length(model.mu, rng);
    let p = if model.h2 > model.h1 {
        rng.random_range(model.h1..model.h2) - rng.random_range(model.h1..model.h2)
    } else {
        0.0
    };
    v * rho / rho.hypot(p)
}

fn parallel_indicators<F>(n: usize, seed: u64, tag: u64, f: F) -> Vec<f64>
where
    F: Fn(&mut SimRng) -> bool + Sync,
{
    let chunks: Vec<Vec<f64>> = blocks(n)
        .collect::<Vec<_>>()
        .into_par_iter()
        .map(|(b, _, len)| {
            let mut rng = substream(seed, &[tag, b]);
            (0..len).map(|_| if f(&mut rng) { 1.0 } else { 0.0 }).collect()
        })
        .collect();
    chunks.into_iter().flatten().collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mobility::{handover_prob_comp, handover_prob_nearest_ub, handover_rate_comp, handover_rate_nearest};

    fn planar() -> MobilityModel {
        MobilityModel::baseline().centred(150.0, 0.0)
    }

    #[test]
    fn planar_voronoi_rate() {
        let m = planar();
        let lam = 20e-6;
        let e = mc_handover_count(&m, HandoverTarget::Nearest { lambda_b: lam }, 100_000, 1).unwrap();
        let a = handover_rate_nearest(lam, &m).unwrap();
        assert!((e.value / a - 1.0).abs() < 0.05, "{} ± {} vs {a}", e.value, e.stderr);
    }

    #[test]
    fn planar_hex_rate() {
        let m = planar();
        let c = ClusterGeometry::new(190.0).unwrap();
        let e = mc_handover_count(&m, HandoverTarget::Comp { clusters: c }, 100_000, 2).unwrap();
        let a = handover_rate_comp(&m, &c).unwrap();
        assert!((e.value / a - 1.0).abs() < 0.05, "{} ± {} vs {a}", e.value, e.stderr);
    }

    #[test]
    fn hex_rate_falls_with_altitude_band() {
        let c = ClusterGeometry::new(100.0).unwrap();
        let t = HandoverTarget::Comp { clusters: c };
        let flat = mc_handover_count(&planar(), t, 50_000, 3).unwrap();
        let tall = mc_handover_count(&MobilityModel::baseline().centred(150.0, 100.0), t, 50_000, 3).unwrap();
        assert!(tall.value < flat.value - 3.0 * (flat.stderr + tall.stderr));
    }

    #[test]
    fn too_few_epochs_rejected() {
        assert!(mc_handover_count(&planar(), HandoverTarget::Nearest { lambda_b: 2e-5 }, 10, 1).is_err());
    }

    #[test]
    fn perpendicular_oracle_agrees() {
        let m = MobilityModel::baseline();
        let c = ClusterGeometry::new(190.0).unwrap();
        let e = mc_perpendicular_handover(&m, &c, 200_000, 5).unwrap();
        assert!((e.value - handover_prob_comp(&m, &c).unwrap()).abs() < 0.01);
    }

    #[test]
    fn radial_oracle_sits_below_the_bound() {
        let m = MobilityModel::baseline().with_speed(20.0);
        let lam = 20e-6;
        let e = mc_radial_handover(150.0, lam, &m, 200_000, 6).unwrap();
        let ub = handover_prob_nearest_ub(150.0, lam, &m).unwrap();
        assert!(e.value <= ub + 3.0 * e.stderr, "{} vs {ub}", e.value);
        assert!(e.value > 0.5 * ub);
    }
}

use std::f64::consts::PI;

use rand::Rng;

use crate::error::{invalid, Error, Result};
use crate::rng::{open01, SimRng};

/// Converts km/h to m/s.
pub fn kmh_to_mps(v: f64) -> f64 {
    v / 3.6
}

/// 3D random-waypoint parameters.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MobilityModel {
    /// Intensity of the waypoint process (per m²); horizontal legs are
    /// Rayleigh with `P(ϱ > s) = exp(−πμs²)`.
    pub mu: f64,
    pub h1: f64,
    pub h2: f64,
    /// Constant speed (m/s).
    pub vbar: f64,
    /// Probability that a handover drops the connection.
    pub beta: f64,
    /// Horizon of the handover decision (s).
    pub unit_time: f64,
}

impl MobilityModel {
    /// 300 waypoints per km², 30 km/h, altitudes 100–200 m.
    pub fn baseline() -> Self {
        Self {
            mu: 300e-6,
            h1: 100.0,
            h2: 200.0,
            vbar: kmh_to_mps(30.0),
            beta: 0.5,
            unit_time: 1.0,
        }
    }

    /// Altitude band of width `hbar` centred on `mean`.
    pub fn centred(mut self, mean: f64, hbar: f64) -> Self {
        self.h1 = mean - 0.5 * hbar;
        self.h2 = mean + 0.5 * hbar;
        self
    }

    pub fn with_speed(mut self, vbar: f64) -> Self {
        self.vbar = vbar;
        self
    }

    pub fn with_beta(mut self, beta: f64) -> Self {
        self.beta = beta;
        self
    }

    /// Altitude difference `h2 − h1`.
    pub fn hbar(&self) -> f64 {
        self.h2 - self.h1
    }

    /// Distance covered in one decision horizon.
    pub fn step_length(&self) -> f64 {
        self.vbar * self.unit_time
    }

    pub fn validate(&self, h_bs: f64) -> Result<()> {
        if !(self.mu > 0.0 && self.mu.is_finite()) {
            return Err(invalid("mu", format!("must be positive, got {}", self.mu)));
        }
        if !(self.h1 > h_bs) {
            return Err(invalid("h1", format!("{} m must exceed the BS height {} m", self.h1, h_bs)));
        }
        if !(self.h2 >= self.h1 && self.h2.is_finite()) {
            return Err(invalid("h2", format!("{} m must be at least h1 = {} m", self.h2, self.h1)));
        }
        if !(self.vbar >= 0.0 && self.vbar.is_finite()) {
            return Err(invalid("vbar", "must be finite and non-negative"));
        }
        if !(0.0..=1.0).contains(&self.beta) {
            return Err(invalid("beta", format!("must lie in [0, 1], got {}", self.beta)));
        }
        if !(self.unit_time > 0.0 && self.unit_time.is_finite()) {
            return Err(invalid("unit_time", "must be positive"));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Waypoint {
    pub x: f64,
    pub y: f64,
    pub z: f64,
    pub epoch: u64,
}

/// Waypoints visited in order; leg `n` joins waypoints `n` and `n + 1`.
#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory {
    pub waypoints: Vec<Waypoint>,
}

impl Trajectory {
    /// Number of legs.
    pub fn epochs(&self) -> usize {
        self.waypoints.len().saturating_sub(1)
    }

    fn ends(&self, n: usize) -> (&Waypoint, &Waypoint) {
        (&self.waypoints[n], &self.waypoints[n + 1])
    }

    pub fn horizontal_length(&self, n: usize) -> f64 {
        let (a, b) = self.ends(n);
        (b.x - a.x).hypot(b.y - a.y)
    }

    pub fn vertical_step(&self, n: usize) -> f64 {
        let (a, b) = self.ends(n);
        b.z - a.z
    }

    pub fn length(&self, n: usize) -> f64 {
        self.horizontal_length(n).hypot(self.vertical_step(n))
    }

    /// Acute angle of leg `n` above or below the horizontal.
    pub fn elevation(&self, n: usize) -> f64 {
        self.vertical_step(n).abs().atan2(self.horizontal_length(n))
    }

    pub fn dwell_time(&self, n: usize, vbar: f64) -> f64 {
        self.length(n) / vbar
    }

    /// Total 3D path length.
    pub fn total_length(&self) -> f64 {
        (0..self.epochs()).map(|n| self.length(n)).sum()
    }
}

/// Rayleigh horizontal leg length.
pub fn sample_horizontal_length(mu: f64, rng: &mut SimRng) -> f64 {
    (-open01(rng).ln() / (PI * mu)).sqrt()
}

/// Draws `n_epochs` legs starting from `start`.
pub fn sample_trajectory(model: &MobilityModel, start: Waypoint, n_epochs: usize, rng: &mut SimRng) -> Result<Trajectory> {
    if n_epochs == 0 {
        return Err(Error::Empty("trajectory epochs"));
    }
    if !(model.mu > 0.0) || model.h2 < model.h1 {
        return Err(invalid("model", "needs mu > 0 and h2 ≥ h1"));
    }
    if !(model.h1..=model.h2).contains(&start.z) {
        return Err(invalid("start.z", format!("{} m lies outside [{}, {}]", start.z, model.h1, model.h2)));
    }
    let mut waypoints = Vec::with_capacity(n_epochs + 1);
    waypoints.push(start);
    let mut cur = start;
    for _ in 0..n_epochs {
        let rho = sample_horizontal_length(model.mu, rng);
        let phi = rng.random::<f64>() * 2.0 * PI;
        let z = if model.h2 > model.h1 {
            rng.random_range(model.h1..model.h2)
        } else {
            model.h1
        };
        cur = Waypoint {
            x: cur.x + rho * phi.cos(),
            y: cur.y + rho * phi.sin(),
            z,
            epoch: cur.epoch + 1,
        };
        waypoints.push(cur);
    }
    Ok(Trajectory { waypoints })
}

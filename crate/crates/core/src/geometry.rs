//! Spatial layer: base-station fields, hexagonal clusters and serving sets.

use std::f64::consts::PI;

use rand::Rng;
use rand_distr::{Distribution, Poisson};

use crate::error::{ensure_positive, invalid, Error, Result};
use crate::rng::{open01, SimRng};
use crate::special::poisson_pmf;

/// Urban blockage statistics.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Environment {
    /// Fraction of land covered by buildings.
    pub a: f64,
    /// Buildings per km².
    pub eta: f64,
    /// Rayleigh scale of building heights (m).
    pub c: f64,
}

impl Environment {
    pub fn validate(&self) -> Result<()> {
        if !(0.0..=1.0).contains(&self.a) {
            return Err(invalid("env.a", format!("must lie in [0, 1], got {}", self.a)));
        }
        ensure_positive("env.eta", self.eta)?;
        ensure_positive("env.c", self.c)
    }

    /// Width of one blockage ring in metres, `1000/√(a·η)`.
    pub fn ring_width(&self) -> f64 {
        1000.0 / (self.a * self.eta).sqrt()
    }
}

/// Base-station layer and propagation constants, in SI units and linear scale.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NetworkConfig {
    /// BS density per m².
    pub lambda_b: f64,
    /// Transmit power (W).
    pub p_t: f64,
    /// BS antenna height (m).
    pub h_bs: f64,
    pub g_s: f64,
    pub g_m: f64,
    pub alpha_l: f64,
    pub alpha_n: f64,
    pub a_l: f64,
    pub a_n: f64,
    pub m_l: u32,
    pub m_n: u32,
    pub env: Environment,
}

pub fn db_to_linear(db: f64) -> f64 {
    10f64.powf(db / 10.0)
}

pub fn linear_to_db(x: f64) -> f64 {
    10.0 * x.log10()
}

impl NetworkConfig {
    /// Dense urban reference deployment used by the bundled presets.
    pub fn baseline() -> Self {
        Self {
            lambda_b: 20e-6,
            p_t: db_to_linear(46.0 - 30.0),
            h_bs: 30.0,
            g_s: db_to_linear(-3.01),
            g_m: db_to_linear(10.0),
            alpha_l: 2.09,
            alpha_n: 3.75,
            a_l: db_to_linear(-41.1),
            a_n: db_to_linear(-32.9),
            m_l: 3,
            m_n: 1,
            env: Environment {
                a: 0.3,
                eta: 300.0,
                c: 20.0,
            },
        }
    }

    pub fn validate(&self) -> Result<()> {
        ensure_positive("lambda_b", self.lambda_b)?;
        ensure_positive("p_t", self.p_t)?;
        ensure_positive("h_bs", self.h_bs)?;
        ensure_positive("g_s", self.g_s)?;
        ensure_positive("g_m", self.g_m)?;
        ensure_positive("a_l", self.a_l)?;
        ensure_positive("a_n", self.a_n)?;
        ensure_positive("alpha_l", self.alpha_l)?;
        if self.alpha_l >= self.alpha_n {
            return Err(invalid("alpha_l", "LoS exponent must be below the NLoS exponent"));
        }
        if self.m_n < 1 || self.m_l < self.m_n {
            return Err(invalid("m_l", "fading shapes must satisfy m_l >= m_n >= 1"));
        }
        self.env.validate()
    }
}

/// Hexagonal cluster grid and its equal-area circle.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ClusterGeometry {
    /// Half of the distance between neighbouring cluster centres (m).
    pub r_h: f64,
    /// Radius of the circle with the hexagon's area (m).
    pub r_c: f64,
}

impl ClusterGeometry {
    pub fn new(r_h: f64) -> Result<Self> {
        ensure_positive("r_h", r_h)?;
        Ok(Self {
            r_h,
            r_c: (2.0 * 3f64.sqrt() / PI).sqrt() * r_h,
        })
    }

    /// Builds the grid whose equal-area circle has radius `r_c`.
    pub fn from_collaboration_radius(r_c: f64) -> Result<Self> {
        ensure_positive("r_c", r_c)?;
        Self::new(r_c / (2.0 * 3f64.sqrt() / PI).sqrt())
    }

    pub fn cell_area(&self) -> f64 {
        2.0 * 3f64.sqrt() * self.r_h * self.r_h
    }

    /// Expected number of BSs inside the collaboration circle.
    pub fn mean_serving_count(&self, lambda_b: f64) -> f64 {
        lambda_b * PI * self.r_c * self.r_c
    }
}

/// Origin-centred sampling region.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Window {
    Disk { radius: f64 },
    Annulus { inner: f64, outer: f64 },
}

impl Window {
    fn radii(&self) -> (f64, f64) {
        match *self {
            Window::Disk { radius } => (0.0, radius),
            Window::Annulus { inner, outer } => (inner, outer),
        }
    }

    pub fn area(&self) -> f64 {
        let (a, b) = self.radii();
        PI * (b * b - a * a)
    }

    pub fn contains(&self, p: [f64; 2]) -> bool {
        let (a, b) = self.radii();
        let r2 = p[0] * p[0] + p[1] * p[1];
        r2 >= a * a && r2 <= b * b
    }

    fn check(&self) -> Result<()> {
        let (a, b) = self.radii();
        if !(a >= 0.0 && b.is_finite() && b > a) {
            return Err(Error::DegenerateWindow(format!("radii [{a}, {b}] enclose no area")));
        }
        Ok(())
    }

    /// Radius of a point uniform in the window.
    pub fn sample_radius(&self, rng: &mut SimRng) -> f64 {
        let (a, b) = self.radii();
        let u: f64 = rng.random();
        (a * a + u * (b * b - a * a)).sqrt()
    }

    pub fn sample_point(&self, rng: &mut SimRng) -> [f64; 2] {
        let r = self.sample_radius(rng);
        let phi = 2.0 * PI * rng.random::<f64>();
        [r * phi.cos(), r * phi.sin()]
    }
}

/// One realization of a planar point process restricted to a window.
#[derive(Debug, Clone, PartialEq)]
pub struct PointField {
    pub points: Vec<[f64; 2]>,
    pub window: Window,
}

impl PointField {
    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// Horizontal distances to the origin, ascending.
    pub fn sorted_radii(&self) -> Vec<f64> {
        let mut r: Vec<f64> = self.points.iter().map(|p| p[0].hypot(p[1])).collect();
        r.sort_by(f64::total_cmp);
        r
    }
}

/// Draws a Poisson count with the given mean.
pub fn sample_poisson_count(mean: f64, rng: &mut SimRng) -> u64 {
    if mean <= 0.0 {
        return 0;
    }
    Poisson::new(mean).map(|d| d.sample(rng) as u64).unwrap_or(0)
}

/// Homogeneous PPP of density `lambda_b` (per m²) on `window`.
pub fn sample_ppp(lambda_b: f64, window: Window, rng: &mut SimRng) -> Result<PointField> {
    window.check()?;
    ensure_positive("lambda_b", lambda_b)?;
    let n = sample_poisson_count(lambda_b * window.area(), rng);
    let points = (0..n).map(|_| window.sample_point(rng)).collect();
    Ok(PointField { points, window })
}

/// Horizontal distances of `kappa` BSs placed uniformly in the collaboration disk.
pub fn sample_bpp_serving_set(kappa: usize, r_c: f64, rng: &mut SimRng) -> Result<Vec<f64>> {
    if kappa == 0 {
        return Err(invalid("kappa", "an empty serving set has no distances"));
    }
    ensure_positive("r_c", r_c)?;
    Ok((0..kappa).map(|_| r_c * open01(rng).sqrt()).collect())
}

/// Probability that exactly `kappa` BSs fall inside the collaboration disk.
pub fn serving_count_pmf(lambda_b: f64, r_c: f64, kappa: u64) -> f64 {
    poisson_pmf(kappa, lambda_b * PI * r_c * r_c)
}

/// Axial index of a hexagonal cluster.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ClusterId {
    pub i: i64,
    pub j: i64,
}

/// Centre of cluster `id` on the lattice spanned by `(2R_h, 0)` and `(R_h, √3·R_h)`.
pub fn hex_center(id: ClusterId, r_h: f64) -> [f64; 2] {
    [
        2.0 * r_h * id.i as f64 + r_h * id.j as f64,
        3f64.sqrt() * r_h * id.j as f64,
    ]
}

/// Hexagon containing `p`. A point equidistant from several centres goes to
/// the centre with the larger `y`, then the larger `x`, so every cell owns its
/// lower and left edges.
pub fn hex_cluster_index(p: [f64; 2], r_h: f64) -> ClusterId {
    let jf = p[1] / (3f64.sqrt() * r_h);
    let i_f = (p[0] - jf * r_h) / (2.0 * r_h);
    let (i0, j0) = (i_f.floor() as i64, jf.floor() as i64);
    let scale = r_h * r_h;
    let mut best: Option<(f64, [f64; 2], ClusterId)> = None;
    for dj in -1..=2 {
        for di in -1..=2 {
            let id = ClusterId { i: i0 + di, j: j0 + dj };
            let c = hex_center(id, r_h);
            let d2 = (p[0] - c[0]).powi(2) + (p[1] - c[1]).powi(2);
            best = match best {
                None => Some((d2, c, id)),
                Some((bd, bc, bid)) => {
                    let tie = (d2 - bd).abs() <= 1e-12 * scale;
                    let wins = if tie {
                        (c[1], c[0]) > (bc[1], bc[0])
                    } else {
                        d2 < bd
                    };
                    if wins {
                        Some((d2, c, id))
                    } else {
                        Some((bd, bc, bid))
                    }
                }
            };
        }
    }
    best.map(|b| b.2).unwrap_or(ClusterId { i: 0, j: 0 })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::substream;
    use crate::stats::ks_two_sample;
    use approx::assert_relative_eq;
    use proptest::prelude::*;

    #[test]
    fn mean_cooperating_count_for_reference_grid() {
        let g = ClusterGeometry::new(190.0).unwrap();
        let mean = g.mean_serving_count(20e-6);
        assert!((mean - 2.5).abs() < 0.01, "{mean}");
        assert_relative_eq!(PI * g.r_c * g.r_c, g.cell_area(), max_relative = 1e-15);
    }

    #[test]
    fn ppp_count_mean_and_variance() {
        let lambda = 20e-6;
        let w = Window::Disk { radius: (20e6 / PI).sqrt() };
        let mut rng = substream(11, &[0]);
        let n = 2000;
        let counts: Vec<f64> = (0..n)
            .map(|_| sample_ppp(lambda, w, &mut rng).unwrap().len() as f64)
            .collect();
        let mean = counts.iter().sum::<f64>() / n as f64;
        let var = counts.iter().map(|c| (c - mean).powi(2)).sum::<f64>() / (n - 1) as f64;
        // stderr of the mean is 20/√2000 ≈ 0.45
        assert!((mean - 400.0).abs() < 2.0, "{mean}");
        assert!((var / mean - 1.0).abs() < 0.1, "{var}");
    }

    #[test]
    fn poisson_count_variance_matches_mean() {
        let mut rng = substream(12, &[0]);
        let n = 100_000;
        let mean_target = 37.5;
        let c: Vec<f64> = (0..n).map(|_| sample_poisson_count(mean_target, &mut rng) as f64).collect();
        let mean = c.iter().sum::<f64>() / n as f64;
        let var = c.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1) as f64;
        assert!((var / mean - 1.0).abs() < 0.03);
    }

    #[test]
    fn degenerate_windows_rejected() {
        let mut rng = substream(1, &[]);
        let w = Window::Annulus { inner: 5.0, outer: 5.0 };
        assert!(matches!(sample_ppp(1e-3, w, &mut rng), Err(Error::DegenerateWindow(_))));
        assert!(sample_ppp(1e-3, Window::Disk { radius: 0.0 }, &mut rng).is_err());
    }

    #[test]
    fn serving_set_moments() {
        let mut rng = substream(3, &[]);
        let r = sample_bpp_serving_set(100_000, 200.0, &mut rng).unwrap();
        let mean = r.iter().sum::<f64>() / r.len() as f64;
        assert!((mean - 400.0 / 3.0).abs() < 0.5);
        let below = r.iter().filter(|&&x| x <= 100.0).count() as f64 / r.len() as f64;
        assert!((below - 0.25).abs() < 0.01);
        assert!(r.iter().all(|&x| (0.0..=200.0).contains(&x)));
        assert!(sample_bpp_serving_set(0, 200.0, &mut rng).is_err());
    }

    #[test]
    fn serving_count_pmf_normalizes() {
        let s: f64 = (0..200).map(|k| serving_count_pmf(20e-6, 199.5, k)).sum();
        assert!((s - 1.0).abs() < 1e-12);
        let lam = 20e-6 * PI * 199.5f64.powi(2);
        assert_relative_eq!(serving_count_pmf(20e-6, 199.5, 0), (-lam).exp(), max_relative = 1e-14);
    }

    #[test]
    fn hex_index_origin_neighbours_and_ties() {
        let r_h = 190.0;
        assert_eq!(hex_cluster_index([0.0, 0.0], r_h), ClusterId { i: 0, j: 0 });
        assert_eq!(hex_cluster_index([2.0 * r_h, 0.0], r_h), ClusterId { i: 1, j: 0 });
        assert_eq!(
            hex_cluster_index([r_h, 3f64.sqrt() * r_h], r_h),
            ClusterId { i: 0, j: 1 }
        );
        // midpoint between (0,0) and (1,0): the right-hand cell owns its left edge
        assert_eq!(hex_cluster_index([r_h, 0.0], r_h), ClusterId { i: 1, j: 0 });
        assert_eq!(hex_cluster_index([-r_h, 0.0], r_h), ClusterId { i: 0, j: 0 });
        // midpoint towards the upper neighbour belongs to the upper cell
        let mid = [0.5 * r_h, 0.5 * 3f64.sqrt() * r_h];
        assert_eq!(hex_cluster_index(mid, r_h), ClusterId { i: 0, j: 1 });
    }

    #[test]
    fn hex_cell_area_by_monte_carlo() {
        let r_h = 1.0;
        let mut rng = substream(5, &[]);
        let half = 3.0;
        let n = 1_000_000;
        let hits = (0..n)
            .filter(|_| {
                let p = [half * (2.0 * rng.random::<f64>() - 1.0), half * (2.0 * rng.random::<f64>() - 1.0)];
                hex_cluster_index(p, r_h) == ClusterId { i: 0, j: 0 }
            })
            .count();
        let area = hits as f64 / n as f64 * (2.0 * half).powi(2);
        assert!((area / (2.0 * 3f64.sqrt()) - 1.0).abs() < 0.005, "{area}");
    }

    proptest! {
        #[test]
        fn equivalent_radius_identity(r_h in 1e-3f64..1e5) {
            let g = ClusterGeometry::new(r_h).unwrap();
            prop_assert!((PI * g.r_c * g.r_c / g.cell_area() - 1.0).abs() < 1e-14);
        }

        #[test]
        fn hex_index_is_nearest_centre(x in -5e3f64..5e3, y in -5e3f64..5e3, r_h in 50f64..500.0) {
            let id = hex_cluster_index([x, y], r_h);
            let c = hex_center(id, r_h);
            let d = (x - c[0]).hypot(y - c[1]);
            // every hexagon lies inside the circumscribed circle of radius 2R_h/√3
            prop_assert!(d <= 2.0 * r_h / 3f64.sqrt() * (1.0 + 1e-12));
            for di in -1..=1 {
                for dj in -1..=1 {
                    let o = hex_center(ClusterId { i: id.i + di, j: id.j + dj }, r_h);
                    prop_assert!(d <= (x - o[0]).hypot(y - o[1]) + 1e-9);
                }
            }
        }

        #[test]
        fn ppp_points_stay_in_window(inner in 0f64..100.0, width in 1f64..500.0, seed in 0u64..1000) {
            let w = Window::Annulus { inner, outer: inner + width };
            let mut rng = substream(seed, &[]);
            let f = sample_ppp(1e-3, w, &mut rng).unwrap();
            for p in &f.points {
                let r = p[0].hypot(p[1]);
                prop_assert!(r >= inner - 1e-9 && r <= inner + width + 1e-9);
            }
        }
    }

    #[test]
    fn restriction_matches_direct_sampling() {
        // counts in a sub-disk sampled directly vs restricted from a larger disk
        let lambda = 1e-4;
        let small = Window::Disk { radius: 100.0 };
        let big = Window::Disk { radius: 200.0 };
        let n = 10_000;
        let mut r1 = substream(21, &[1]);
        let mut r2 = substream(21, &[2]);
        let mut direct: Vec<f64> = (0..n).map(|_| sample_ppp(lambda, small, &mut r1).unwrap().len() as f64).collect();
        let mut restricted: Vec<f64> = (0..n)
            .map(|_| {
                let f = sample_ppp(lambda, big, &mut r2).unwrap();
                f.points.iter().filter(|p| small.contains(**p)).count() as f64
            })
            .collect();
        direct.sort_by(f64::total_cmp);
        restricted.sort_by(f64::total_cmp);
        let d = ks_two_sample(&direct, &restricted);
        // two-sample KS critical value at p = 0.01 is 1.63·√(2/n)
        assert!(d < 1.63 * (2.0 / n as f64).sqrt(), "{d}");
    }

    #[test]
    fn sorted_bpp_matches_nearest_ppp_points() {
        // given κ points in the disk, the PPP radii equal the sorted BPP radii in law
        let lambda = 20e-6;
        let r_c = 199.5;
        let w = Window::Disk { radius: r_c };
        let kappa = 3;
        let mut rng = substream(31, &[]);
        let mut from_ppp = Vec::new();
        while from_ppp.len() < 10_000 {
            let f = sample_ppp(lambda, w, &mut rng).unwrap();
            if f.len() == kappa {
                from_ppp.push(f.sorted_radii()[0]);
            }
        }
        let mut from_bpp: Vec<f64> = (0..10_000)
            .map(|_| {
                let mut r = sample_bpp_serving_set(kappa, r_c, &mut rng).unwrap();
                r.sort_by(f64::total_cmp);
                r[0]
            })
            .collect();
        from_ppp.sort_by(f64::total_cmp);
        from_bpp.sort_by(f64::total_cmp);
        let d = ks_two_sample(&from_ppp, &from_bpp);
        assert!(d < 1.63 * (2.0 / 10_000f64).sqrt(), "{d}");
    }
}

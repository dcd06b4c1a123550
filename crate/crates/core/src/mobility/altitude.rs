use crate::error::{Error, Result};
use crate::quadrature::gauss_legendre;

use super::model::MobilityModel;

/// Long-run altitude density `6(z − h₁)(h₂ − z)/ħ³` of a UAV moving at
/// constant vertical speed between uniform target altitudes.
pub fn steady_state_altitude_pdf(z: f64, model: &MobilityModel) -> Result<f64> {
    let (h1, h2) = (model.h1, model.h2);
    let hbar = h2 - h1;
    if hbar == 0.0 {
        return Err(Error::PointMassAltitude { altitude: h1 });
    }
    if z <= h1 || z >= h2 {
        return Ok(0.0);
    }
    Ok(6.0 * (h1 * z + h2 * z - h1 * h2 - z * z) / hbar.powi(3))
}

/// Distribution function of [`steady_state_altitude_pdf`], `3t² − 2t³` with `t = (z − h₁)/ħ`.
pub fn steady_state_altitude_cdf(z: f64, model: &MobilityModel) -> Result<f64> {
    let hbar = model.hbar();
    if hbar == 0.0 {
        return Err(Error::PointMassAltitude { altitude: model.h1 });
    }
    let t = ((z - model.h1) / hbar).clamp(0.0, 1.0);
    Ok(t * t * (3.0 - 2.0 * t))
}

/// Mean long-run altitude. The first moment of the density,
/// `(h₂⁴ − h₁⁴ + 2h₁³h₂ − 2h₁h₂³)/(2ħ³)`, factors as `(h₂ + h₁)ħ³/(2ħ³)`.
pub fn mean_altitude(model: &MobilityModel) -> f64 {
    0.5 * (model.h1 + model.h2)
}

/// Gauss–Legendre nodes and weights for averaging over the long-run altitude;
/// a single node when the band is degenerate.
pub fn altitude_nodes(model: &MobilityModel, n: usize) -> Vec<(f64, f64)> {
    let hbar = model.hbar();
    if hbar == 0.0 {
        return vec![(model.h1, 1.0)];
    }
    let (x, w) = gauss_legendre(n.max(2));
    let c = 0.5 * (model.h1 + model.h2);
    x.iter()
        .zip(&w)
        .map(|(&xi, &wi)| {
            let z = c + 0.5 * hbar * xi;
            let f = steady_state_altitude_pdf(z, model).unwrap_or(0.0);
            (z, 0.5 * hbar * wi * f)
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quadrature::{integrate, Tolerance};
    use crate::rng::substream;
    use crate::stats::chi_square_p_value;
    use approx::assert_relative_eq;
    use proptest::prelude::*;
    use rand::Rng;

    fn band(h1: f64, h2: f64) -> MobilityModel {
        MobilityModel { h1, h2, ..MobilityModel::baseline() }
    }

    #[test]
    fn boundary_zeros_and_peak() {
        let m = band(100.0, 200.0);
        assert_eq!(steady_state_altitude_pdf(100.0, &m).unwrap(), 0.0);
        assert_eq!(steady_state_altitude_pdf(200.0, &m).unwrap(), 0.0);
        assert_eq!(steady_state_altitude_pdf(150.0, &m).unwrap(), 1.5 / 100.0);
    }

    #[test]
    fn unit_band_mean() {
        assert_eq!(mean_altitude(&band(0.0, 1.0)), 0.5);
        assert_eq!(mean_altitude(&band(100.0, 200.0)), 150.0);
    }

    #[test]
    fn degenerate_band_is_a_point_mass() {
        let m = band(150.0, 150.0);
        assert!(matches!(steady_state_altitude_pdf(150.0, &m), Err(Error::PointMassAltitude { .. })));
        assert_eq!(mean_altitude(&m), 150.0);
        assert_eq!(altitude_nodes(&m, 8), vec![(150.0, 1.0)]);
    }

    #[test]
    fn integrates_to_one_and_nodes_are_exact() {
        let m = band(120.0, 170.0);
        let v = integrate(|z| steady_state_altitude_pdf(z, &m).unwrap(), 120.0, 170.0, Tolerance::default()).unwrap();
        assert!((v - 1.0).abs() < 1e-12);
        let nodes = altitude_nodes(&m, 4);
        let mass: f64 = nodes.iter().map(|n| n.1).sum();
        let mean: f64 = nodes.iter().map(|n| n.0 * n.1).sum();
        assert_relative_eq!(mass, 1.0, max_relative = 1e-13);
        assert_relative_eq!(mean, 145.0, max_relative = 1e-13);
        assert_relative_eq!(steady_state_altitude_cdf(145.0, &m).unwrap(), 0.5, max_relative = 1e-15);
    }

    #[test]
    fn vertical_random_waypoint_histogram() {
        // sample a 1D waypoint walk at evenly spaced instants of travel
        let m = band(100.0, 200.0);
        let mut rng = substream(31, &[]);
        let bins = 20;
        let n = 100_000;
        let step = 7.3;
        let mut counts = vec![0.0; bins];
        let mut z = rng.random_range(m.h1..m.h2);
        let mut offset = 0.0;
        let mut taken = 0;
        while taken < n {
            let target = rng.random_range(m.h1..m.h2);
            let len = (target - z).abs();
            let mut s = offset;
            while s < len && taken < n {
                let at = z + (target - z).signum() * s;
                let b = (((at - m.h1) / m.hbar()) * bins as f64).floor().clamp(0.0, (bins - 1) as f64);
                counts[b as usize] += 1.0;
                taken += 1;
                s += step;
            }
            offset = s - len;
            z = target;
        }
        let expected: Vec<f64> = (0..bins)
            .map(|b| {
                let lo = m.h1 + m.hbar() * b as f64 / bins as f64;
                let hi = lo + m.hbar() / bins as f64;
                n as f64 * (steady_state_altitude_cdf(hi, &m).unwrap() - steady_state_altitude_cdf(lo, &m).unwrap())
            })
            .collect();
        let p = chi_square_p_value(&counts, &expected, 0);
        assert!(p > 0.01, "chi-square p = {p}");
    }

    proptest! {
        #[test]
        fn mean_is_the_first_moment(h1 in 31f64..500.0, w in 1f64..500.0) {
            let m = band(h1, h1 + w);
            let h2 = h1 + w;
            let quartic = (h2.powi(4) - h1.powi(4) + 2.0 * h1.powi(3) * h2 - 2.0 * h1 * h2.powi(3)) / (2.0 * w.powi(3));
            let moment = integrate(|z| z * steady_state_altitude_pdf(z, &m).unwrap(), h1, h2, Tolerance::default()).unwrap();
            prop_assert!((mean_altitude(&m) / moment - 1.0).abs() < 1e-10);
            prop_assert!((quartic / moment - 1.0).abs() < 1e-6);
        }
    }
}

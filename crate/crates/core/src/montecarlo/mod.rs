//! Brute-force oracle: simulated BS fields with per-link blockage and
//! fading, and trajectory-driven handover counting.

mod handover;
mod mobile;
mod sir;

pub use handover::{leg_reach, mc_handover_count, mc_perpendicular_handover, mc_radial_handover, HandoverTarget};
pub use mobile::{mc_mobile_coverage, mc_mobile_coverage_sweep};
pub use sir::{
    bound_coverage_from_samples, coverage_from_samples, mc_sir_comp, mc_sir_gue, mc_sir_nearest, mc_sir_paired,
    mc_sir_scenario, truncation_radius, McConfig, McEstimate, PairedSample, Receiver, SirSample, TRUNCATION_TAIL,
};

//! 3D random-waypoint mobility: leg laws, handover rates and probabilities,
//! the long-run altitude law, and coverage discounted by handover cost.

mod altitude;
mod coverage;
mod handover;
mod model;
mod transition;

pub use altitude::{altitude_nodes, mean_altitude, steady_state_altitude_cdf, steady_state_altitude_pdf};
pub use coverage::{coverage_mobile_comp, coverage_mobile_nearest, mobile_comp_sweep, mobile_nearest_sweep};
pub use handover::{
    boundary_crossing_probability, handover_evaluator, handover_evaluators, handover_prob_comp,
    handover_prob_nearest_mean, handover_prob_nearest_ub, handover_rate_comp, handover_rate_nearest,
    mean_horizontal_speed, HandoverEvaluator, HandoverNetwork,
};
pub use model::{kmh_to_mps, sample_horizontal_length, sample_trajectory, MobilityModel, Trajectory, Waypoint};
pub use transition::{
    altitude_step_pdf, closed_form_omega, cosine_moments, effective_omega, mean_transition_length,
    transition_length_pdf, CosineMoments,
};

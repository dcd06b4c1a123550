//! Coverage and handover analysis for cellular-connected UAVs.
//!
//! Base stations form a planar Poisson field. A UAV is served either by its
//! nearest base station or jointly by every base station inside a circular
//! collaboration region. The crate pairs semi-analytical evaluators with a
//! Monte Carlo oracle and a 3D random-waypoint mobility simulator.

pub mod analytic;
pub mod channel;
pub mod error;
pub mod geometry;
pub mod mobility;
pub mod montecarlo;
pub mod quadrature;
pub mod rng;
pub mod special;
pub mod stats;

pub use error::{Error, Result};

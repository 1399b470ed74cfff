//! Roller-track synthesis for cam-spring mechanisms: given a target restoring
//! force F(X), enumerate every valid track profile
//! `Y(X) = ±sqrt(d^2 - (2/K) ∫F)`, verify each by force reconstruction and
//! conservative time integration, and export profiles, reports and plots.
//!
//! Modules, bottom-up:
//! - [`gsm`]: the oblique-rod spring assembly (force/stiffness laws) and the
//!   linear spring the tracks ride on
//! - [`force`]: target-force specifications (polynomial, expression, sampled
//!   table) and the memoized integral `I(X) = ∫₀ˣ F`
//! - [`spline`]: natural cubic splines with exact integration
//! - [`inverse`]: branch enumeration and admissible-domain search
//! - [`forward`]: static responses of a finished track
//! - [`dynamics`]: velocity-Verlet / RK4 time integration with lock detection
//! - [`report`], [`svg`]: machine-readable reports and plot emission

pub mod dynamics;
pub mod error;
pub mod force;
pub mod forward;
pub mod gsm;
pub mod inverse;
pub mod report;
pub mod spline;
pub mod svg;

pub use dynamics::{
    compare_trajectories, energy_drift, simulate_reference, simulate_track, Method, Sample,
    SimConfig, SimResult, Termination,
};
pub use error::{Error, Result};
pub use force::{ForceSpec, IntegralCache, Interpolation, DEFAULT_QUAD_TOL};
pub use forward::{
    effective_stiffness, fit_track, potential_energy, restoring_force, spring_force, Profile,
    Track,
};
pub use gsm::{gsm_force, gsm_stiffness, linear_stiffness, GsmParams, LinearGsm};
pub use inverse::{
    design_branches, BoundaryKind, BranchDomain, BranchLabel, BranchSet, DesignProblem,
    ResidualReport, TrackBranch,
};
pub use report::DesignReport;
pub use spline::CubicSpline;

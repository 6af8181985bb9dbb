//! Plane-strain linear elastodynamics with lumped mass, viscous absorbing
//! boundaries and explicit central-difference time stepping.

mod absorbing;
mod element;
mod material;
pub mod snapshot;
mod source;
mod stepper;
mod system;

pub use absorbing::{absorbing_damping, AbsorbingParams};
pub use element::{element_lumped_mass, element_stiffness, shape_coefficients, strain_displacement, ElementOperator};
pub use material::{plane_strain_constitutive, ConstitutiveMatrix, Elasticity, Material, MaterialTable};
pub use source::{apply_traction, boundary_frame, TractionSource};
pub use stepper::{step, SimState, StepReport, Stepper, StepperOptions};
pub use system::{ElementData, GlobalSystem};

use thiserror::Error;

#[derive(Debug, Error)]
pub enum FemError {
    #[error("inadmissible material: {0}")]
    InadmissibleMaterial(String),
    #[error("degenerate or clockwise element")]
    DegenerateElement,
    #[error("free DOF {dof} has no mass")]
    MissingMass { dof: usize },
    #[error("invalid boundary: {0}")]
    InvalidBoundary(String),
    #[error("invalid source: {0}")]
    InvalidSource(String),
    #[error("source pressure {pressure} Pa exceeds the limit {limit} Pa")]
    SourceAmplitude { pressure: f64, limit: f64 },
    #[error("length mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("time step {dt} s exceeds {safety} x critical step {critical} s")]
    CflViolation { dt: f64, critical: f64, safety: f64 },
    #[error("solution blew up at step {step}: |u| = {magnitude} m")]
    Instability { step: usize, magnitude: f64 },
    #[error("contact did not converge at step {step} after {iterations} iterations (penetration^2 = {penetration_sq})")]
    ContactNotConverged { step: usize, iterations: usize, penetration_sq: f64 },
    #[error("invalid contact parameters: {0}")]
    InvalidContact(String),
}

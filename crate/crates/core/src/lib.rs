//! Plane-strain explicit finite elements for layered composites with a
//! frictional contacting crack, plus the signal processing used for
//! time-reversal (TR-NEWS) nonlinearity detection.
//!
//! The numerical code is generic over the scalar type (see [`scalar`]); the
//! aliases below fix it to `f64`, which is what the experiment harness uses.

pub mod contact;
pub mod fem;
pub mod mesh;
pub mod scalar;
pub mod signals;

pub use scalar::{Field, Real};

pub type Mesh64 = mesh::Mesh<f64>;
pub type Material64 = fem::Material<f64>;
pub type MaterialTable64 = fem::MaterialTable<f64>;
pub type GlobalSystem64 = fem::GlobalSystem<f64>;
pub type SimState64 = fem::SimState<f64>;
pub type Stepper64<'a> = fem::Stepper<'a, f64>;
pub type TractionSource64 = fem::TractionSource<f64>;
pub type ContactParams64 = contact::ContactParams<f64>;
pub type ContactSolver64 = contact::ContactSolver<f64>;
pub type Signal64 = signals::Signal<f64>;
pub type ChirpSpec64 = signals::ChirpSpec<f64>;
pub type DelaySchedule64 = signals::DelaySchedule<f64>;

pub type Mesh32 = mesh::Mesh<f32>;
pub type Signal32 = signals::Signal<f32>;

//! Charger–battery two-qubit quantum battery: Lindblad dynamics, energy,
//! ergotropy and EPR-steering observables, steady states and scenario runs.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod analytics;
pub mod dynamics;
pub mod error;
pub mod linalg;
pub mod model;
pub mod observables;
pub mod sampling;
pub mod scenario;
pub mod validation;

pub use analytics::{steady_energy_analytic, SteadyStateAnalytic};
pub use dynamics::{evolve, steady_state, IntegratorConfig, Trajectory};
pub use error::{Error, Result};
pub use linalg::{ComplexMatrix, Subsystem, C64};
pub use model::{DensityMatrix, ReservoirKind, ReservoirSpec, SystemParams};
pub use observables::{ergotropy_closed, steering, stored_energy, ObservableRecord, SteeringResult};
pub use scenario::{RunConfig, ScenarioSpec};

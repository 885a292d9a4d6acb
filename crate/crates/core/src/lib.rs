//! Local work and heat for open quantum subsystems.
//!
//! A subsystem `A` coupled to a partner `B` (or to a classical drive) has its
//! energy change split into a coherent part (work) and an incoherent part
//! (heat), using a measured local Hamiltonian `H' = H_A + h_eff1` built from
//! the mean-field action of the partner.
//!
//! The numerical core is generic over [`Real`] (`f64` or `f32`); the aliases
//! at the crate root fix it to `f64`.

pub mod dynamics;
pub mod error;
pub mod lembas;
pub mod linalg;
pub mod scalar;
pub mod scenarios;
pub mod states;
pub mod verify;

pub use error::{DensityViolation, Error, Result};
pub use scalar::Real;

pub type CMatrix = linalg::ComplexMatrix<f64>;
pub type CMatrix32 = linalg::ComplexMatrix<f32>;
pub type Density = states::DensityOperator<f64>;
pub type Density32 = states::DensityOperator<f32>;
pub type Basis = lembas::MeasurementBasis<f64>;
pub type Split = lembas::LembasSplit<f64>;
pub type Operator = states::TimeOperator<f64>;
pub type Grid = dynamics::TimeGrid<f64>;
pub type Model = dynamics::System<f64>;
pub type Record = dynamics::TrajectoryRecord<f64>;
pub type Run = dynamics::Trajectory<f64>;

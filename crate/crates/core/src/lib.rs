//! Orlicz-space calculus for Young functions, rearrangement-invariant norms,
//! phase-space convolutions and quantum harmonic analysis in the Fock basis,
//! with randomized verification suites for the convolution inequalities.
//!
//! The numerical core is generic over [`Real`] (`f32`, `f64`); the aliases below
//! fix `f64`, which the verification suites use throughout.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod error;
pub mod matrix;
pub mod phase_space;
pub mod rearrangement;
pub mod scalar;
pub mod solve;
pub mod verify;
pub mod weyl_qha;
pub mod young_fn;

pub use error::{Error, Result};
pub use scalar::Real;

pub type YoungFunctionF64 = young_fn::YoungFunction<f64>;
pub type YoungFunctionF32 = young_fn::YoungFunction<f32>;
pub type SimplexPointF64 = young_fn::SimplexPoint<f64>;
pub type BoundSpecF64 = young_fn::BoundSpec<f64>;
pub type StepFunctionF64 = rearrangement::StepFunction<f64>;
pub type MeasureSamplesF64 = rearrangement::MeasureSamples<f64>;
pub type OperatorMatrixF64 = matrix::OperatorMatrix<f64>;
pub type OperatorMatrixF32 = matrix::OperatorMatrix<f32>;
pub type GridSpecF64 = phase_space::GridSpec<f64>;
pub type GridFunctionF64 = phase_space::GridFunction<f64>;
pub type GridFunctionF32 = phase_space::GridFunction<f32>;
pub type DilationSpecF64 = phase_space::DilationSpec<f64>;
pub type QhaContextF64 = weyl_qha::QhaContext<f64>;

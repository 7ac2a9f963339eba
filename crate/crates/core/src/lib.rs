//! Explicit unitary homotopies between pure states of matrix algebras.
//!
//! Every pure state here is a vector state `ψ(A) = ⟨Ψ, AΨ⟩` on a matrix algebra
//! or a finite tensor product of matrix algebras, and unitaries act on states by
//! `(Uψ)(C) = ψ(U*CU)`. The crate builds the explicit paths of unitaries that
//! move, align and contract such states, and measures them against their norm
//! bounds.
//!
//! | module | contents |
//! |---|---|
//! | [`mats`] | dense complex kernel: exp, principal log, operator norm |
//! | [`geodesic`] | two-vector geodesic unitaries and their phase extension |
//! | [`state`] | pure states, projections, corners, excision |
//! | [`complex`] | sampled parameter spaces (circles, spheres) |
//! | [`homotopy`] | deformation, corner alignment, lifting, ball contraction |
//! | [`contract`] | family pipelines and the dyadic iteration |
//! | [`nctorus`] | rational rotation algebras and their pure-state homotopy groups |
//! | [`experiments`] | the `verify`, `contract` and `rotation` drivers behind the binary |
//!
//! The runnable examples under `examples/` are the intended entry point:
//!
//! ```text
//! cargo run --example geodesic_unitaries
//! cargo run --example project_onto_projection
//! cargo run --example corner_alignment
//! cargo run --example ball_contraction
//! cargo run --example sphere_and_lift
//! cargo run --example dyadic_iteration
//! cargo run --example obstruction
//! cargo run --example excision
//! cargo run --example rotation_algebra
//! ```
#![forbid(unsafe_code)]

pub mod complex;
pub mod contract;
pub mod error;
pub mod experiments;
pub mod geodesic;
pub mod homotopy;
pub mod mats;
pub mod nctorus;
pub mod sample;
pub mod state;

pub use error::{Error, Obstruction, Result};
pub use geodesic::StateVector;
pub use mats::{CMatrix, CVector, HermitianMatrix};

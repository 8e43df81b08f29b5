//! Exact models of rank two filtered (phi, N, L/K, E)-modules.
//!
//! Layered bottom-up: coefficient field -> product rings -> extension/Galois
//! combinatorics -> phi-modules and canonical forms -> descent data ->
//! filtrations -> weak admissibility -> isomorphism classification.

pub mod error;
pub mod extension;
pub mod field;
pub mod ring;
pub mod serial;

pub mod phimod;
pub mod descent;
pub mod filtration;
pub mod admissibility;
pub mod isoclass;

pub use error::{Error, Result};

//! Numerics for finitely generated shift-invariant spaces.
//!
//! The crate builds Gramian fields `P_{Λ*}(F̂)(x) = Σ_λ F̂(x-λ)F̂*(x-λ)` for a
//! tuple of generators given on the Fourier side, classifies the resulting
//! systems of translates (frame, Riesz basis, minimal generator count, extra
//! lattice invariance), and estimates fractional Sobolev seminorms with
//! log-divergence diagnostics.

pub mod config;
pub mod eigen;
pub mod error;
pub mod float_serde;
pub mod generators;
pub mod lattice;
pub mod periodization;
pub mod presets;
pub mod quadrature;
pub mod report;
pub mod runner;
pub mod sobolev;
pub mod spectral;

pub use error::{Error, Result};
pub use generators::{Envelope, Family, GeneratorConfig, GeneratorSet, GeneratorSpec};
pub use lattice::{coset_reps, index, CosetReps, Lattice};
pub use config::{AnalysisConfig, ExampleId, Task};
pub use report::{ExampleReport, Report};
pub use runner::run;

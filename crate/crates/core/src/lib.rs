//! Spectral and cohomological tools for finite simplicial complexes.

extern crate openblas_src;

pub mod cochain;
pub mod complex;
pub mod error;
pub mod expansion;
pub mod garland;
pub mod gf2;
pub mod harness;
pub mod matrix;
pub mod random;
pub mod spectral;

pub use cochain::{ClassNorm, RealCochain, WeightFunction, Z2Cochain};
pub use complex::{binomial, incidence_number, ComplexFile, Face, Link, SimplicialComplex};
pub use error::{Error, Result};
pub use expansion::{ExpansionMethod, ExpansionReport};
pub use harness::{Experiment, ExperimentConfig, ExperimentOutput, ExperimentRecord};
pub use matrix::{MatrixKind, OperatorMatrix};
pub use random::{ModelKind, ModelSpec};
pub use spectral::SpectrumReport;

//! Symplectic Hodge theory on flat tori: pointwise exterior algebra, form
//! fields, invariant models of nilmanifolds, polyhedral chains and currents,
//! the grid deformation of chains, and the construction of primitive
//! currents and symplectic Harmonic forms with a support defect.

pub mod chains;
pub mod currents;
pub mod deform;
pub mod error;
pub mod exteralg;
pub mod invariant;
pub mod linalg;
pub mod pipeline;
pub mod quadrature;
pub mod selftest;
pub mod testforms;
pub mod torusfields;

pub use chains::{CurrentRep, PolyChain, Simplex};
pub use error::{Error, Result};
pub use exteralg::{PointwiseForm, PolyVector};
pub use pipeline::{PipelineConfig, PipelineOutput, PipelineReport};
pub use torusfields::{FieldForm, Grid};

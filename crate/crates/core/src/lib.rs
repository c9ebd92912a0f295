//! Consonance: a nonlocal-coherence measure of quantum correlation.
//!
//! The crate provides tensor-product-structured states ([`qstate`]), the
//! local/nonlocal coherence split of density-matrix elements ([`coherence`]),
//! local unitary circuits ([`unitary`]), the constrained optimizer that
//! computes consonance ([`optimizer`]), comparison measures ([`measures`]),
//! state families ([`states`]), file formats ([`io`]) and parameter sweeps
//! ([`sweep`]).

pub mod coherence;
mod error;
pub mod io;
pub mod measures;
mod nelder_mead;
pub mod optimizer;
pub mod qstate;
pub mod states;
pub mod sweep;
pub mod unitary;

pub use coherence::{local_coherence, nonlocal_sum, CoherenceClass, CoherenceProfile};
pub use error::{Error, Result};
pub use measures::{Measure, MeasureResult};
pub use optimizer::{consonance, ConsonanceReport, OptimizerConfig};
pub use qstate::{DensityMatrix, Dims, PureState, C64};
pub use states::{AnyState, Family, TpsRelabeling};
pub use unitary::{apply, LocalCircuit, Preset};

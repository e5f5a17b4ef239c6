//! Multigraph factor construction toolkit: canonical multigraphs, spanning
//! tree packings with certificates, constrained orientations, exact
//! degree-factor solvers, residue compatibility, and theorem-level pipelines
//! that compose them.

pub mod compat;
pub mod connect;
pub mod error;
pub mod factor;
pub mod graph;
pub mod orient;
pub mod pipeline;
pub mod tour;

pub use error::{Caps, Error, Result};
pub use graph::{EdgeSubset, Multigraph};

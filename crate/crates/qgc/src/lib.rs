//! Exact symbolic-numeric toolkit for equilateral metric graphs: canonical
//! characteristic functions, scattering data for a graph with one lead, and
//! a co-spectrality census over small graph families.
//!
//! The exact engine works with the zero edge potential, where every
//! characteristic function reduces to the canonical shape
//! lambda^a (sin wl / w)^m Q(cos wl) with an integer polynomial Q; nonzero
//! symmetric potentials are handled numerically in [`slnumeric`].

pub mod algebra;
pub mod census;
pub mod charfun;
pub mod error;
pub mod graph;
pub mod scattering;
pub mod slnumeric;

pub use algebra::{IntPoly, MultiPoly, TrigForm};
pub use error::{QgcError, Result};
pub use graph::{CombGraph, VertexSet};

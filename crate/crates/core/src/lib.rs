//! Time-dependent vehicle routing over multi-layer travel-time matrices.
//!
//! A [`MultiLayerMatrix`] stores one travel-time layer per time step; an arc
//! is priced by the layer its departure falls in. [`solver::solve`] runs a
//! GRASP construction followed by an insertion-deletion improvement phase,
//! [`oracle`] provides exhaustive ground truth for small instances, and
//! [`builder`] produces matrices from a distance-matrix provider or a
//! synthetic traffic profile.

#![forbid(unsafe_code)]

pub mod builder;
pub mod compare;
pub mod data;
pub mod export;
pub mod io;
pub mod model;
pub mod oracle;
pub mod solver;

pub use compare::{compare, compare_seeds, format_hmm, CompareReport, CompareRow};
pub use model::{
    average_matrix, evaluate_route, validate_layers, Instance, ModelError, MultiLayerMatrix, Node, Route, Schedule,
    Seconds, SolverParams, ValidationReport,
};
pub use solver::{solve, SolveError, SolveResult};

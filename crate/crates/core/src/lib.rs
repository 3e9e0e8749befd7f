//! Exact weighted clique decomposition.
//!
//! Given a graph whose edges carry non-negative weights and a budget `k`, find
//! at most `k` cliques with non-negative weights such that every edge weight is
//! the sum of the weights of the cliques containing it (and every non-edge is
//! covered by none). Equivalently: factor a symmetric matrix with wildcard
//! diagonal as `B W B^T` with `B` binary (`n x k`) and `W` non-negative diagonal.
//!
//! The solver pipeline is
//! [`preprocess`] → [`kernel`] → pseudo-basis [`search`] driven by one of the
//! weight-inference engines ([`lp`], [`ip`], or the unit-weight baseline
//! [`wecp`]) → lift and reassemble. [`oracle`] is an independent brute force
//! used for validation, and [`gen`] builds planted benchmark instances.
//!
//! The crate is `no_std` (it needs `alloc`); file formats, timing and the
//! command-line driver live in the companion `cliqdecomp` crate.

#![no_std]

extern crate alloc;

pub mod error;
pub mod gen;
pub mod ip;
pub mod kernel;
pub mod lp;
pub mod model;
pub mod oracle;
pub mod preprocess;
pub mod scalar;
pub mod search;
pub mod wecp;

pub use error::{Error, Result};
pub use model::{
    decomposition_from, find_violation, graph_to_instance, instance_to_graph, star_eq, verify, verify_decomposition,
    AnnotatedGraph, Clique, Decomposition, DiagonalWeights, Entry, Instance, PartialAssignment, Violation,
};
pub use scalar::{Rational, Scalar, DEFAULT_EPS};
pub use search::{Interrupt, NeverInterrupt, Outcome, SearchOptions};

/// Largest supported number of clique columns; rows of `B` are stored as `u64`
/// bit masks.
pub const MAX_COLUMNS: usize = 63;

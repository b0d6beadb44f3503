//! Divisor theory on ribbon graphs and the Bernardi and rotor-routing torsor
//! structures on spanning trees.

pub mod bernardi;
pub mod divisors;
pub mod error;
pub mod format;
pub mod linalg;
pub mod permutation;
pub mod ribbon_graph;
pub mod trees;
pub mod rotor;
pub mod torsor;
pub mod catalog;
pub mod witness;
pub mod report;

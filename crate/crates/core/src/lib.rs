//! Sparse-graph toolkit: degeneracy-ordered graphs, indiscernible sequences,
//! a splitter for uniformly quasi-wide graphs, a kernel for distance-`r`
//! dominating set and exact/FPT solvers for domination problems.

pub mod edgelist;
pub mod error;
pub mod generators;
pub mod graph;
pub mod kernel;
pub mod logic;
pub mod solvers;
pub mod uqw;

pub use error::{Error, Result};
pub use graph::{ContractedGraph, Dist, DistanceVector, Graph, Vertex};

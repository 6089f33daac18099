//! Exact reference solvers and the FPT connected dominating set algorithm.

mod cds;
mod drds;
mod steiner;

pub use cds::{
    brute_cds, cds_fpt, cds_fpt_traced, default_k_threshold, is_connected_dominating, BranchEvent,
};
pub use drds::exact_drds;
pub use steiner::{dreyfus_wagner, SteinerInstance, SteinerTree};

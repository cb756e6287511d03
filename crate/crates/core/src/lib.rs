//! Period, primitivity, index of convergence and exponent of directed
//! graphs, i.e. the eventual zero pattern of powers of nonnegative matrices.
//!
//! Structural engines live in [`period`] and [`index`]; [`boolmatrix`]
//! provides the brute-force power oracle they are checked against. The
//! [`strategy`] registry exposes both behind one trait, selectable by name.

pub mod arith;
pub mod boolmatrix;
pub mod digraph;
pub mod error;
pub mod gadgets;
pub mod index;
pub mod period;
pub mod selfcheck;
pub mod strategy;

pub use arith::{format_factored, lcm_list, PeriodResult};
pub use boolmatrix::{adjacency, bmm, chi, oracle_cycle_gcd, oracle_signature, BoolMatrix, PowerSignature};
pub use digraph::{
    is_almost_strongly_connected, is_strongly_connected, parse_dot, parse_edgelist, scc_decompose, Digraph,
    DotGraph, SccDecomposition,
};
pub use error::{Error, Result};
pub use index::{
    exponent, has_path_of_length, index_of_convergence, k_below_index, residue_path_exists, residue_witness,
    ResidueQuery,
};
pub use period::{
    consistent_partition, divides_period, is_primitive, lift, period_general, period_scc, verify_partition,
    ConsistentPartition, LiftedGraph,
};
pub use strategy::{EngineRegistry, FamilyParams, FamilyRegistry, GeneratorFamily, SignatureEngine};

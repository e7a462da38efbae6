//! Random relational structures and the homomorphism extension problem.
//!
//! * [`structure`], [`digraph`], [`random`]: finite structures, maps between
//!   them and seeded random generation.
//! * [`solver`]: EXT/CSP decision by backtracking, plus a brute-force oracle.
//! * [`subalgebra`]: common out-neighborhoods and triangle subalgebra search.
//! * [`reductions`]: 3-coloring gadget and arity-changing reductions.
//! * [`harness`]: Monte Carlo experiments and closed-form probabilities.
//! * [`format`], [`dimacs`]: file formats.

pub mod digraph;
pub mod dimacs;
pub mod error;
pub mod format;
pub mod harness;
pub mod random;
pub mod reductions;
pub mod solver;
pub mod structure;
pub mod subalgebra;

pub use digraph::{induced_subdigraph, Digraph};
pub use error::{Error, Result};
pub use harness::{ExperimentConfig, ExperimentReport, RunOptions, Strategy};
pub use random::{gen_random_digraph, gen_random_relation, RandomModel};
pub use reductions::Graph;
pub use solver::{brute_force_ext, decide_csp, solve_ext, ExtInstance, SolveOutcome};
pub use structure::{
    add_constant_relations, is_extension, is_homomorphism, Element, PartialAssignment, Relation,
    RelationalStructure, Signature, TotalMap,
};
pub use subalgebra::{ProcedureTrace, SubalgebraWitness};

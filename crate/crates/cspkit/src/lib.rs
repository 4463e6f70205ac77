//! A constraint-satisfaction toolkit built around explicit allowed-tuple
//! relations: CNF/CSP translations, clause-width and tuple-threshold
//! branching reductions, constraint merging, degree and coloring gadgets,
//! brute-force and structural solvers, and a benchmark harness that checks
//! measured search-tree sizes against exact analytic bounds.

pub mod bench;
pub mod cli;
pub mod cnf;
pub mod error;
pub mod instance;
pub mod io;
pub mod reductions;
pub mod solvers;
pub mod structure;

pub use cnf::{Clause, CnfFormula, Lit};
pub use error::{Error, Result};
pub use instance::{Assignment, Constraint, CspInstance, InstanceParams, Simplified};
pub use solvers::{BranchStats, SolveResult};

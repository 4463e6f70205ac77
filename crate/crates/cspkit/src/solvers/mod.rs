//! Decision procedures: brute-force oracles, the tuple-branching solver,
//! a backtracking baseline, and dynamic programming over a tree
//! decomposition.
//!
//! Every solver is a pure function of its inputs and returns the same
//! [`SolveResult`] shape, so they can be swapped and cross-checked freely.

mod backtrack;
mod treewidth_dp;
mod tuple_branch;

pub use backtrack::backtracking_solve;
pub use treewidth_dp::freuder_dp_solve;
pub use tuple_branch::tuple_branching_solve;

use crate::cnf::CnfFormula;
use crate::error::{Error, Result};
use crate::instance::{Assignment, CspInstance};
use std::time::Duration;

/// Default cap on the number of assignments a brute-force oracle may
/// enumerate (and on the per-bag tables of the decomposition solver).
pub const DEFAULT_ENUMERATION_BUDGET: u64 = 100_000_000;

/// Counters describing the search tree a procedure explored.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct BranchStats {
    pub nodes: u64,
    pub leaves: u64,
    pub max_depth: usize,
    pub elapsed: Duration,
}

/// Outcome of a solver run: the satisfiability bit, a witness when
/// satisfiable, and the search statistics.
#[derive(Debug, Clone)]
pub struct SolveResult {
    pub satisfiable: bool,
    pub witness: Option<Assignment>,
    pub stats: BranchStats,
}

impl SolveResult {
    fn unsat(stats: BranchStats) -> Self {
        SolveResult {
            satisfiable: false,
            witness: None,
            stats,
        }
    }

    fn sat(witness: Assignment, stats: BranchStats) -> Self {
        SolveResult {
            satisfiable: true,
            witness: Some(witness),
            stats,
        }
    }
}

fn checked_power(base: usize, exponent: usize, budget: u64, what: &str) -> Result<u64> {
    let mut total: u128 = 1;
    for _ in 0..exponent {
        total *= base as u128;
        if total > budget as u128 {
            return Err(Error::Budget(format!(
                "{} needs more than {} assignments ({}^{})",
                what, budget, base, exponent
            )));
        }
    }
    Ok(total as u64)
}

/// Exact satisfiability by enumerating all `d^n` total assignments in
/// lexicographic order; the witness is therefore the lexicographically
/// smallest satisfying assignment. Refuses instances beyond `budget`.
pub fn brute_force_csp(instance: &CspInstance, budget: u64) -> Result<SolveResult> {
    let start = std::time::Instant::now();
    let n = instance.num_vars();
    let d = instance.domain_size();
    let total = checked_power(d, n, budget, "brute-force CSP enumeration")?;

    let mut stats = BranchStats {
        max_depth: n,
        ..BranchStats::default()
    };
    let mut values = vec![0usize; n];
    for _ in 0..total {
        stats.nodes += 1;
        stats.leaves += 1;
        let assignment = Assignment::from_total(values.clone());
        if instance.check(&assignment)? {
            stats.elapsed = start.elapsed();
            return Ok(SolveResult::sat(assignment, stats));
        }
        // Odometer step: last variable runs fastest.
        let mut i = n;
        while i > 0 {
            i -= 1;
            values[i] += 1;
            if values[i] < d {
                break;
            }
            values[i] = 0;
        }
    }
    stats.elapsed = start.elapsed();
    Ok(SolveResult::unsat(stats))
}

/// Exact CNF satisfiability by enumerating all `2^n` assignments; witness
/// values are 0/1.
pub fn brute_force_cnf(formula: &CnfFormula, budget: u64) -> Result<SolveResult> {
    let start = std::time::Instant::now();
    let n = formula.num_vars();
    if formula.has_empty_clause() {
        let stats = BranchStats {
            nodes: 1,
            leaves: 1,
            max_depth: 0,
            elapsed: start.elapsed(),
        };
        return Ok(SolveResult::unsat(stats));
    }
    let total = checked_power(2, n, budget, "brute-force CNF enumeration")?;

    let mut stats = BranchStats {
        max_depth: n,
        ..BranchStats::default()
    };
    let mut values = vec![false; n];
    for _ in 0..total {
        stats.nodes += 1;
        stats.leaves += 1;
        if formula.evaluate(&values) {
            stats.elapsed = start.elapsed();
            let witness = Assignment::from_total(values.iter().map(|&b| usize::from(b)).collect());
            return Ok(SolveResult::sat(witness, stats));
        }
        let mut i = n;
        while i > 0 {
            i -= 1;
            values[i] = !values[i];
            if values[i] {
                break;
            }
        }
    }
    stats.elapsed = start.elapsed();
    Ok(SolveResult::unsat(stats))
}

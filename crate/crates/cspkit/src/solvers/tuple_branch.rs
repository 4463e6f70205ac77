//! The tuple-branching solver: binary-branch on whether each tuple is the
//! one satisfied in the assignment sought. A branch is rejected as soon as
//! some constraint has two tuples marked satisfied or all of its tuples
//! marked unsatisfied; complete branches are accepted iff the values the
//! selected tuples stipulate are consistent. Runs in `2^tuples` branches,
//! independent of the variable count.

use super::{BranchStats, SolveResult};
use crate::instance::{Assignment, CspInstance, Value};

struct Search<'a> {
    instance: &'a CspInstance,
    /// Flattened (constraint, tuple) pairs: constraints in index order,
    /// tuples in lexicographic order. "Satisfied" branches are explored
    /// first, so stats are deterministic.
    tuples: Vec<(usize, usize)>,
    tuple_total: Vec<usize>,
    satisfied: Vec<Option<usize>>,
    unsatisfied: Vec<usize>,
    unit_propagation: bool,
    stats: BranchStats,
    witness: Option<Assignment>,
}

impl Search<'_> {
    fn visit(&mut self, index: usize, depth: usize) -> bool {
        self.stats.nodes += 1;
        self.stats.max_depth = self.stats.max_depth.max(depth);
        if index == self.tuples.len() {
            self.stats.leaves += 1;
            return self.complete_branch();
        }
        let (ci, ti) = self.tuples[index];

        // Branch 1: tuple (ci, ti) is the satisfied one.
        if self.satisfied[ci].is_none() {
            self.satisfied[ci] = Some(ti);
            if self.visit(index + 1, depth + 1) {
                return true;
            }
            self.satisfied[ci] = None;
        } else {
            // A second satisfied tuple in the same constraint: rejected.
            self.stats.nodes += 1;
            self.stats.leaves += 1;
            self.stats.max_depth = self.stats.max_depth.max(depth + 1);
        }

        // Branch 2: tuple (ci, ti) is not satisfied.
        let would_exhaust =
            self.satisfied[ci].is_none() && self.unsatisfied[ci] + 1 == self.tuple_total[ci];
        if would_exhaust {
            // No tuple of the constraint would remain; with unit propagation
            // the doomed branch is skipped outright, otherwise it is visited
            // and rejected.
            if !self.unit_propagation {
                self.stats.nodes += 1;
                self.stats.leaves += 1;
                self.stats.max_depth = self.stats.max_depth.max(depth + 1);
            }
            return false;
        }
        self.unsatisfied[ci] += 1;
        let found = self.visit(index + 1, depth + 1);
        self.unsatisfied[ci] -= 1;
        found
    }

    /// Every constraint now has exactly one satisfied tuple; accept iff the
    /// stipulated variable values agree.
    fn complete_branch(&mut self) -> bool {
        let mut values: Vec<Option<Value>> = vec![None; self.instance.num_vars()];
        for (ci, c) in self.instance.constraints.iter().enumerate() {
            let t = &c.relation()[self.satisfied[ci].expect("one tuple per constraint")];
            for (pos, &var) in c.scope.iter().enumerate() {
                match values[var] {
                    None => values[var] = Some(t[pos]),
                    Some(existing) if existing == t[pos] => {}
                    Some(_) => return false,
                }
            }
        }
        let total: Vec<Value> = values.into_iter().map(|v| v.unwrap_or(0)).collect();
        self.witness = Some(Assignment::from_total(total));
        true
    }
}

/// Solves an instance by branching over its tuples. `stats.nodes` stays
/// below `2^(tuples+1)`. With `unit_propagation` on, a constraint whose last
/// unmarked tuple comes up is forced to take it, shrinking the tree; off by
/// default so node counts match the plain binary tree.
pub fn tuple_branching_solve(instance: &CspInstance, unit_propagation: bool) -> SolveResult {
    let start = std::time::Instant::now();
    if instance.has_empty_relation() {
        return SolveResult {
            satisfiable: false,
            witness: None,
            stats: BranchStats {
                nodes: 1,
                leaves: 1,
                max_depth: 0,
                elapsed: start.elapsed(),
            },
        };
    }

    let mut tuples = Vec::new();
    for (ci, c) in instance.constraints.iter().enumerate() {
        for ti in 0..c.tuple_count() {
            tuples.push((ci, ti));
        }
    }
    let tuple_total: Vec<usize> = instance
        .constraints
        .iter()
        .map(|c| c.tuple_count())
        .collect();

    let mut search = Search {
        instance,
        tuples,
        satisfied: vec![None; instance.constraints.len()],
        unsatisfied: vec![0; instance.constraints.len()],
        tuple_total,
        unit_propagation,
        stats: BranchStats::default(),
        witness: None,
    };
    let satisfiable = search.visit(0, 0);
    let mut stats = search.stats;
    stats.elapsed = start.elapsed();
    SolveResult {
        satisfiable,
        witness: search.witness,
        stats,
    }
}

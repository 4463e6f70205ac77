//! Clause-width branching: repeatedly pick a clause wider than `k`, and
//! either commit to its first `k` literals (the clause shrinks to exactly
//! those) or falsify all of them (the `k` variables disappear). Leaves are
//! formulas of width at most `k`; the input is satisfiable iff some leaf is.

use crate::cnf::{Clause, CnfFormula, Lit};
use crate::error::{Error, Result};
use crate::solvers::BranchStats;
use num_rational::Rational64;
use num_traits::{Signed, ToPrimitive, Zero};
use std::time::Instant;

/// One leaf of the branching tree.
#[derive(Debug, Clone)]
pub struct SchulerLeaf {
    pub formula: CnfFormula,
    /// Values forced by the right branches on the path to this leaf.
    pub forced: Vec<Option<bool>>,
    /// Set when a clause lost all its literals on this path; such a leaf is
    /// unsatisfiable without looking further.
    pub trivially_unsat: bool,
}

impl SchulerLeaf {
    /// Turns a witness of the leaf into a witness of the input formula by
    /// overriding the branch-forced values.
    pub fn map_witness(&self, witness: &[bool]) -> Vec<bool> {
        witness
            .iter()
            .enumerate()
            .map(|(v, &b)| self.forced[v].unwrap_or(b))
            .collect()
    }
}

struct Node {
    formula: CnfFormula,
    forced: Vec<Option<bool>>,
    depth: usize,
}

/// Pull-based stream of leaves, emitted in left-branch-first order. Memory
/// stays proportional to the tree depth; leaf counts are exponential by
/// design, so callers should not collect blindly.
pub struct SchulerStream {
    k: usize,
    stack: Vec<Node>,
    stats: BranchStats,
    started: Instant,
}

impl SchulerStream {
    /// Search-tree counters so far; final once the stream is exhausted.
    pub fn stats(&self) -> &BranchStats {
        &self.stats
    }

    pub fn width_target(&self) -> usize {
        self.k
    }
}

impl Iterator for SchulerStream {
    type Item = SchulerLeaf;

    fn next(&mut self) -> Option<SchulerLeaf> {
        while let Some(node) = self.stack.pop() {
            self.stats.nodes += 1;
            self.stats.max_depth = self.stats.max_depth.max(node.depth);
            self.stats.elapsed = self.started.elapsed();

            if node.formula.has_empty_clause() {
                self.stats.leaves += 1;
                return Some(SchulerLeaf {
                    formula: node.formula,
                    forced: node.forced,
                    trivially_unsat: true,
                });
            }
            let wide = node
                .formula
                .clauses()
                .iter()
                .position(|c| c.width() > self.k);
            let Some(wide_idx) = wide else {
                self.stats.leaves += 1;
                return Some(SchulerLeaf {
                    formula: node.formula,
                    forced: node.forced,
                    trivially_unsat: false,
                });
            };

            let picked: Vec<Lit> = node.formula.clauses()[wide_idx].lits()[..self.k].to_vec();

            // Right branch: all picked literals are false.
            let mut right_forced = node.forced.clone();
            for l in &picked {
                right_forced[l.var] = Some(!l.positive);
            }
            let right_formula = falsify(&node.formula, &picked);
            self.stack.push(Node {
                formula: right_formula,
                forced: right_forced,
                depth: node.depth + 1,
            });

            // Left branch: the wide clause is replaced by its first k
            // literals. Pushed last so it is explored first.
            let mut left_clauses = node.formula.clauses().to_vec();
            left_clauses[wide_idx] = Clause::new(picked).expect("literals from one clause");
            let left_formula = CnfFormula::new(node.formula.num_vars(), left_clauses)
                .expect("variables unchanged");
            self.stack.push(Node {
                formula: left_formula,
                forced: node.forced,
                depth: node.depth + 1,
            });
        }
        None
    }
}

/// Removes the picked literals as false: clauses containing their complement
/// are satisfied and deleted, other occurrences are erased. No further unit
/// propagation happens, so the counted tree matches the plain branching.
fn falsify(formula: &CnfFormula, picked: &[Lit]) -> CnfFormula {
    let mut forced: Vec<Option<bool>> = vec![None; formula.num_vars()];
    for l in picked {
        forced[l.var] = Some(!l.positive);
    }
    let mut clauses = Vec::with_capacity(formula.clauses().len());
    'clauses: for clause in formula.clauses() {
        let mut kept = Vec::with_capacity(clause.width());
        for l in clause.lits() {
            match forced[l.var] {
                Some(value) if l.satisfied_by(value) => continue 'clauses,
                Some(_) => {}
                None => kept.push(*l),
            }
        }
        clauses.push(Clause::new(kept).expect("subset of a valid clause"));
    }
    CnfFormula::new(formula.num_vars(), clauses).expect("variables unchanged")
}

/// Starts the branching; `k` is the leaf width target.
pub fn schuler_branch(formula: &CnfFormula, k: usize) -> Result<SchulerStream> {
    if k == 0 {
        return Err(Error::Invalid("width target must be at least 1".into()));
    }
    Ok(SchulerStream {
        k,
        stack: vec![Node {
            formula: formula.clone(),
            forced: vec![None; formula.num_vars()],
            depth: 0,
        }],
        stats: BranchStats::default(),
        started: Instant::now(),
    })
}

/// The width target `floor(epsilon * n / (2 * (1 + c')))` used when trading
/// clause width against branching effort; degenerates to 0 when `n` is too
/// small for the chosen parameters.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SchulerWidth {
    pub k: usize,
    pub degenerate: bool,
}

pub fn schuler_k(n: usize, epsilon: Rational64, c_prime: Rational64) -> Result<SchulerWidth> {
    if !epsilon.is_positive() {
        return Err(Error::Invalid("epsilon must be positive".into()));
    }
    if c_prime < Rational64::zero() {
        return Err(Error::Invalid("c' must be non-negative".into()));
    }
    let n_ratio = Rational64::from_integer(n as i64);
    let denom = Rational64::from_integer(2) * (Rational64::from_integer(1) + c_prime);
    let k = (epsilon * n_ratio / denom)
        .floor()
        .to_integer()
        .to_usize()
        .unwrap_or(0);
    Ok(SchulerWidth {
        k,
        degenerate: k == 0,
    })
}

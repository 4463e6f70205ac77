//! Tuple-threshold branching for Boolean instances, and the branching-factor
//! analysis that goes with it.
//!
//! The procedure keeps the invariant that no constraint has two scope
//! variables with identical values in every tuple (such variables are merged
//! by [`collapse_duplicate_variables`]). Branching on a tuple of an
//! over-threshold constraint either satisfies it (the constraint disappears
//! and its variables get fixed) or deletes the tuple, a (1, d) branching
//! vector whose growth rate is the root of `x^d - x^(d-1) - 1`. At the
//! leaves every constraint has at most `d` tuples, and the no-duplicate-
//! column invariant pins the arity at `2^d` or less.

use super::{BackStep, WitnessMap};
use crate::error::{Error, Result};
use crate::instance::{Assignment, Constraint, CspInstance, Simplified};
use crate::solvers::BranchStats;
use num_rational::Rational64;
use num_traits::{Signed, ToPrimitive};
use std::time::Instant;

/// Root of `x^d - x^(d-1) - 1` in (1, 2], found by bisection. The residual
/// at the returned point is at most `tol`.
pub fn branching_root(d: u32, tol: f64) -> f64 {
    assert!(d >= 2, "threshold must be at least 2");
    assert!(tol > 0.0);
    let p = |x: f64| x.powi(d as i32) - x.powi(d as i32 - 1) - 1.0;
    let mut lo = 1.0f64;
    let mut hi = 2.0f64;
    let mut mid = 1.5;
    for _ in 0..200 {
        mid = 0.5 * (lo + hi);
        let value = p(mid);
        if value.abs() <= tol * 0.5 {
            break;
        }
        if value < 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
        if hi - lo <= f64::EPSILON {
            break;
        }
    }
    mid
}

/// Smallest `d >= 2` whose branching root stays within `2^(epsilon/c)`,
/// capped at 64.
pub fn smallest_d_for_budget(c: Rational64, epsilon: Rational64) -> Result<u32> {
    if !c.is_positive() || !epsilon.is_positive() {
        return Err(Error::Invalid("c and epsilon must be positive".into()));
    }
    let exponent = (epsilon / c)
        .to_f64()
        .ok_or_else(|| Error::Invalid("epsilon/c does not fit in a float".into()))?;
    let target = exponent.exp2();
    for d in 2..=64 {
        if branching_root(d, 1e-12) <= target {
            return Ok(d);
        }
    }
    Err(Error::Budget(format!(
        "no threshold d <= 64 reaches branching factor {}",
        target
    )))
}

/// A tuple-branching budget: threshold `d`, the linear-tuple constant `c`,
/// the accuracy target `epsilon`, and the branching factor `x0` they imply.
#[derive(Debug, Clone, PartialEq)]
pub struct BranchingBudget {
    pub d: u32,
    pub c: Rational64,
    pub epsilon: Rational64,
    pub x0: f64,
}

impl BranchingBudget {
    /// Chooses the smallest workable threshold for the given constants.
    pub fn for_budget(c: Rational64, epsilon: Rational64) -> Result<Self> {
        let d = smallest_d_for_budget(c, epsilon)?;
        Ok(BranchingBudget {
            d,
            c,
            epsilon,
            x0: branching_root(d, 1e-12),
        })
    }

    /// Uses an explicit threshold.
    pub fn with_threshold(d: u32, c: Rational64, epsilon: Rational64) -> Result<Self> {
        if d < 2 {
            return Err(Error::Invalid("threshold must be at least 2".into()));
        }
        Ok(BranchingBudget {
            d,
            c,
            epsilon,
            x0: branching_root(d, 1e-12),
        })
    }
}

/// Result of the equality collapse: the rewritten instance, the merge log,
/// and whether a relation emptied (making the input unsatisfiable).
#[derive(Debug, Clone)]
pub struct CollapseOutput {
    pub instance: CspInstance,
    pub map: WitnessMap,
    pub unsat: bool,
}

impl CollapseOutput {
    pub fn map_witness(&self, witness: &Assignment) -> Assignment {
        self.map.apply(witness)
    }
}

/// While some constraint has two scope variables with equal values in all of
/// its tuples, merges them: tuples where the two differ are deleted
/// everywhere, and the second variable is replaced by the first in every
/// scope. Rejects (unsat) as soon as a relation empties.
pub fn collapse_duplicate_variables(instance: &CspInstance) -> Result<CollapseOutput> {
    if instance.domain_size() != 2 {
        return Err(Error::Unsupported(
            "equality collapse is defined for Boolean instances".into(),
        ));
    }
    let mut out = CollapseOutput {
        instance: instance.clone(),
        map: WitnessMap::default(),
        unsat: instance.has_empty_relation(),
    };
    if !out.unsat {
        out.unsat = !collapse_in_place(&mut out.instance, &mut out.map);
    }
    Ok(out)
}

/// Returns false when a relation empties.
fn collapse_in_place(instance: &mut CspInstance, map: &mut WitnessMap) -> bool {
    loop {
        let Some((kept, dropped)) = find_duplicate_pair(instance) else {
            return true;
        };
        // Delete tuples where the pair differs, wherever both occur.
        for c in instance.constraints.iter_mut() {
            if let (Some(pk), Some(pd)) = (c.position_of(kept), c.position_of(dropped)) {
                let filtered: Vec<Vec<usize>> = c
                    .relation()
                    .iter()
                    .filter(|t| t[pk] == t[pd])
                    .cloned()
                    .collect();
                c.set_relation(filtered);
            }
        }
        map.push(BackStep::Tie { kept, dropped });
        if instance.has_empty_relation() {
            return false;
        }
        // Substitute the dropped variable: project its column out where the
        // kept one is already present, rename it otherwise.
        for c in instance.constraints.iter_mut() {
            match (c.position_of(kept), c.position_of(dropped)) {
                (Some(_), Some(pd)) => {
                    let mut scope = c.scope.clone();
                    scope.remove(pd);
                    let relation: Vec<Vec<usize>> = c
                        .relation()
                        .iter()
                        .map(|t| {
                            let mut t = t.clone();
                            t.remove(pd);
                            t
                        })
                        .collect();
                    *c = Constraint::new(scope, relation);
                }
                (None, Some(pd)) => c.scope[pd] = kept,
                _ => {}
            }
        }
    }
}

fn find_duplicate_pair(instance: &CspInstance) -> Option<(usize, usize)> {
    for c in &instance.constraints {
        if c.relation().is_empty() {
            continue;
        }
        for i in 0..c.scope.len() {
            for j in i + 1..c.scope.len() {
                if c.relation().iter().all(|t| t[i] == t[j]) {
                    return Some((c.scope[i], c.scope[j]));
                }
            }
        }
    }
    None
}

/// One leaf of the bounded-tuple branching tree.
#[derive(Debug, Clone)]
pub struct BoundedTupleLeaf {
    pub instance: CspInstance,
    pub map: WitnessMap,
    /// Set when the branch was rejected (a relation emptied); the instance
    /// is then a canonical unsatisfiable stub.
    pub rejected: bool,
}

impl BoundedTupleLeaf {
    pub fn map_witness(&self, witness: &Assignment) -> Assignment {
        self.map.apply(witness)
    }
}

struct BtNode {
    instance: CspInstance,
    map: WitnessMap,
    depth: usize,
}

/// Pull-based stream over the leaves of the bounded-tuple branching tree,
/// satisfied branch first.
pub struct BoundedTupleStream {
    d: u32,
    stack: Vec<BtNode>,
    stats: BranchStats,
    started: Instant,
}

impl BoundedTupleStream {
    pub fn stats(&self) -> &BranchStats {
        &self.stats
    }

    pub fn threshold(&self) -> u32 {
        self.d
    }

    fn rejected_leaf(&mut self, template: &CspInstance, map: WitnessMap) -> BoundedTupleLeaf {
        self.stats.leaves += 1;
        let mut stub = CspInstance::with_names(template.names().to_vec(), 2);
        stub.add_constraint(vec![0], Vec::new());
        BoundedTupleLeaf {
            instance: stub,
            map,
            rejected: true,
        }
    }
}

impl Iterator for BoundedTupleStream {
    type Item = BoundedTupleLeaf;

    fn next(&mut self) -> Option<BoundedTupleLeaf> {
        while let Some(mut node) = self.stack.pop() {
            self.stats.nodes += 1;
            self.stats.max_depth = self.stats.max_depth.max(node.depth);
            self.stats.elapsed = self.started.elapsed();

            if node.instance.has_empty_relation()
                || !collapse_in_place(&mut node.instance, &mut node.map)
            {
                return Some(self.rejected_leaf(&node.instance.clone(), node.map));
            }

            let over = node
                .instance
                .constraints
                .iter()
                .position(|c| c.tuple_count() > self.d as usize);
            let Some(ci) = over else {
                self.stats.leaves += 1;
                return Some(BoundedTupleLeaf {
                    instance: node.instance,
                    map: node.map,
                    rejected: false,
                });
            };

            let constraint = node.instance.constraints[ci].clone();
            let tuple = constraint.relation()[0].clone();

            // Unsatisfied branch: the tuple is deleted. Pushed first, popped
            // second.
            let mut without = node.instance.clone();
            let remaining: Vec<Vec<usize>> =
                constraint.relation().iter().skip(1).cloned().collect();
            without.constraints[ci].set_relation(remaining);
            self.stack.push(BtNode {
                instance: without,
                map: node.map.clone(),
                depth: node.depth + 1,
            });

            // Satisfied branch: the constraint disappears, its variables get
            // the tuple's values, and everything else conforms or dies.
            let mut satisfied_map = node.map;
            let mut partial = Assignment::empty(node.instance.num_vars());
            for (pos, &var) in constraint.scope.iter().enumerate() {
                partial.set(var, tuple[pos]);
                satisfied_map.push(BackStep::Force {
                    var,
                    value: tuple[pos],
                });
            }
            let mut removed = node.instance;
            removed.constraints.remove(ci);
            match removed
                .assign_and_simplify(&partial)
                .expect("assignment within domain")
            {
                Simplified::Instance(residual) => self.stack.push(BtNode {
                    instance: residual,
                    map: satisfied_map,
                    depth: node.depth + 1,
                }),
                Simplified::Unsat => {
                    // The branch exists in the tree; count it and emit its
                    // rejection straight away.
                    self.stats.nodes += 1;
                    self.stats.max_depth = self.stats.max_depth.max(node.depth + 1);
                    return Some(self.rejected_leaf(&removed, satisfied_map));
                }
            }
        }
        None
    }
}

/// Starts the bounded-tuple branching on a Boolean instance. The equality
/// collapse runs on the input and again after every branch step, so leaves
/// keep the no-duplicate-column invariant.
pub fn bounded_tuple_branch(instance: &CspInstance, d: u32) -> Result<BoundedTupleStream> {
    if instance.domain_size() != 2 {
        return Err(Error::Unsupported(
            "tuple branching is defined for Boolean instances".into(),
        ));
    }
    if !(2..=32).contains(&d) {
        return Err(Error::Invalid("threshold must be between 2 and 32".into()));
    }
    Ok(BoundedTupleStream {
        d,
        stack: vec![BtNode {
            instance: instance.clone(),
            map: WitnessMap::default(),
            depth: 0,
        }],
        stats: BranchStats::default(),
        started: Instant::now(),
    })
}

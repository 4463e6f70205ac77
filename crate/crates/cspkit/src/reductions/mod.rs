//! Instance transformations. Every reduction returns the transformed
//! instance(s) together with enough bookkeeping to translate a witness of
//! the output back into a witness of the input; branching reductions emit
//! their leaves as pull-based streams and count tree nodes as they go.

mod branching;
mod degree;
mod encodings;
mod merge;
mod schuler;
mod translate;

pub use branching::{
    bounded_tuple_branch, branching_root, collapse_duplicate_variables, smallest_d_for_budget,
    BoundedTupleLeaf, BoundedTupleStream, BranchingBudget, CollapseOutput,
};
pub use degree::{degree_reduce, DegreeReduceOutput};
pub use encodings::{clique_to_2csp, coloring3_to_2csp, CliqueEncoding, ColoringEncoding};
pub use merge::{merge_constraints, MergeOutput, DEFAULT_JOIN_BUDGET};
pub use schuler::{schuler_branch, schuler_k, SchulerLeaf, SchulerStream, SchulerWidth};
pub use translate::{
    cnf_to_csp, csp_to_cnf, CnfToCspOutput, CspToCnfOutput, DEFAULT_CLAUSE_WIDTH_LIMIT,
    TRANSLATION_WIDTH_CAP,
};

/// Exact rational type used for the branching-budget parameters.
pub use num_rational::Rational64;

use crate::instance::{Assignment, CspInstance, Value, VarId};

/// One step of witness bookkeeping recorded by a reduction.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum BackStep {
    /// `dropped` was merged into `kept`; in the input, both carry the same
    /// value.
    Tie { kept: VarId, dropped: VarId },
    /// `var` was fixed to `value` along this branch.
    Force { var: VarId, value: Value },
}

/// A replayable log of [`BackStep`]s, in the order the reduction performed
/// them. Applying them in reverse turns a witness of the output into a
/// witness of the input.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct WitnessMap {
    steps: Vec<BackStep>,
}

impl WitnessMap {
    pub fn push(&mut self, step: BackStep) {
        self.steps.push(step);
    }

    pub fn steps(&self) -> &[BackStep] {
        &self.steps
    }

    /// Extends a witness of the reduced instance (over the same variable id
    /// space) into a witness of the original.
    pub fn apply(&self, witness: &Assignment) -> Assignment {
        let mut values: Vec<Value> = (0..witness.num_vars())
            .map(|v| witness.get(v).unwrap_or(0))
            .collect();
        for step in self.steps.iter().rev() {
            match *step {
                BackStep::Tie { kept, dropped } => values[dropped] = values[kept],
                BackStep::Force { var, value } => values[var] = value,
            }
        }
        Assignment::from_total(values)
    }
}

/// Output of [`pad_instance`]: disjoint renamed copies of the input.
#[derive(Debug, Clone)]
pub struct PadOutput {
    pub instance: CspInstance,
    pub copies: usize,
    original_vars: usize,
}

impl PadOutput {
    /// A witness of the padded instance restricted to the first copy is a
    /// witness of the input.
    pub fn map_witness(&self, witness: &Assignment) -> Assignment {
        let mut out = Assignment::empty(self.original_vars);
        for v in 0..self.original_vars {
            out.set(v, witness.get(v).expect("witness must be total"));
        }
        out
    }
}

/// Pads an instance with variable-disjoint copies of itself: the variable
/// count scales by `copies` while satisfiability and primal treewidth stay
/// unchanged.
pub fn pad_instance(instance: &CspInstance, copies: usize) -> crate::error::Result<PadOutput> {
    if copies == 0 {
        return Err(crate::error::Error::Invalid(
            "padding needs at least one copy".into(),
        ));
    }
    let parts: Vec<CspInstance> = (0..copies).map(|_| instance.clone()).collect();
    let union = CspInstance::disjoint_union(&parts);
    Ok(PadOutput {
        instance: union.instance,
        copies,
        original_vars: instance.num_vars(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::solvers::{brute_force_csp, DEFAULT_ENUMERATION_BUDGET};
    use crate::structure::{primal_graph, treewidth_exact};

    #[test]
    fn pad_identity_for_one_copy() {
        let mut i = CspInstance::new(2, 2);
        i.add_constraint(vec![0, 1], vec![vec![0, 1]]);
        let out = pad_instance(&i, 1).unwrap();
        assert_eq!(out.instance, i);
    }

    #[test]
    fn pad_scales_vars_and_preserves_treewidth() {
        let mut i = CspInstance::new(4, 2);
        i.add_constraint(vec![0, 1], vec![vec![0, 1], vec![1, 0]]);
        i.add_constraint(vec![1, 2], vec![vec![0, 1], vec![1, 0]]);
        i.add_constraint(vec![2, 3], vec![vec![0, 1], vec![1, 0]]);
        let (tw_before, _) = treewidth_exact(&primal_graph(&i)).unwrap();
        let out = pad_instance(&i, 3).unwrap();
        assert_eq!(out.instance.num_vars(), 12);
        let (tw_after, _) = treewidth_exact(&primal_graph(&out.instance)).unwrap();
        assert_eq!(tw_before, tw_after);
    }

    #[test]
    fn pad_preserves_unsatisfiability() {
        let mut i = CspInstance::new(1, 2);
        i.add_constraint(vec![0], vec![]);
        let out = pad_instance(&i, 2).unwrap();
        let r = brute_force_csp(&out.instance, DEFAULT_ENUMERATION_BUDGET).unwrap();
        assert!(!r.satisfiable);
    }

    #[test]
    fn witness_map_replays_in_reverse() {
        let mut map = WitnessMap::default();
        map.push(BackStep::Tie {
            kept: 0,
            dropped: 1,
        });
        map.push(BackStep::Force { var: 0, value: 1 });
        // Chronologically: first 1 was tied to 0, then 0 was forced to 1.
        // Replay must set 0 := 1 before copying it into 1.
        let witness = Assignment::from_total(vec![0, 0, 0]);
        let back = map.apply(&witness);
        assert_eq!(back.as_total().unwrap(), vec![1, 1, 0]);
    }
}

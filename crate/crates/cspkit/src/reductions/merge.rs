//! Constraint merging: partition the constraints into groups and replace
//! each group by its relational join.

use crate::error::{Error, Result};
use crate::instance::{Assignment, CspInstance, Value, VarId};

/// Default cap on the product of member relation sizes within one group.
pub const DEFAULT_JOIN_BUDGET: u128 = 1_000_000;

#[derive(Debug, Clone)]
pub struct MergeOutput {
    pub instance: CspInstance,
}

impl MergeOutput {
    /// Merging keeps the variable set, so witnesses carry over unchanged.
    pub fn map_witness(&self, witness: &Assignment) -> Assignment {
        witness.clone()
    }
}

/// Partitions the constraints in index order into `groups` near-equal parts
/// and joins each part into a single constraint: the scope is the union of
/// member scopes (first-occurrence order), the relation holds every
/// consistent combination of one tuple per member. Satisfiability and
/// witnesses are unchanged; the output has exactly `groups` constraints.
pub fn merge_constraints(
    instance: &CspInstance,
    groups: usize,
    join_budget: u128,
) -> Result<MergeOutput> {
    let cons = instance.constraints.len();
    if groups == 0 || groups > cons {
        return Err(Error::Invalid(format!(
            "group count must be in 1..={}, got {}",
            cons, groups
        )));
    }

    let base = cons / groups;
    let extra = cons % groups;
    let mut out = CspInstance::with_names(instance.names().to_vec(), instance.domain_size());
    let mut start = 0;
    for g in 0..groups {
        let len = base + usize::from(g < extra);
        let members = &instance.constraints[start..start + len];
        start += len;

        let mut product: u128 = 1;
        for m in members {
            product = product.saturating_mul(m.tuple_count() as u128);
            if product > join_budget {
                return Err(Error::Budget(format!(
                    "group {} join size exceeds budget {}",
                    g, join_budget
                )));
            }
        }

        // Fold-left join with consistency filtering on shared variables.
        let mut scope: Vec<VarId> = Vec::new();
        let mut relation: Vec<Vec<Value>> = vec![Vec::new()];
        for m in members {
            let shared: Vec<(usize, usize)> = m
                .scope
                .iter()
                .enumerate()
                .filter_map(|(pos, v)| scope.iter().position(|x| x == v).map(|acc| (acc, pos)))
                .collect();
            let fresh: Vec<usize> = (0..m.scope.len())
                .filter(|&pos| !scope.contains(&m.scope[pos]))
                .collect();
            let mut next = Vec::new();
            for acc_tuple in &relation {
                for t in m.relation() {
                    if shared
                        .iter()
                        .all(|&(acc_pos, pos)| acc_tuple[acc_pos] == t[pos])
                    {
                        let mut merged = acc_tuple.clone();
                        merged.extend(fresh.iter().map(|&pos| t[pos]));
                        next.push(merged);
                    }
                }
            }
            scope.extend(fresh.iter().map(|&pos| m.scope[pos]));
            relation = next;
        }
        out.add_constraint(scope, relation);
    }
    Ok(MergeOutput { instance: out })
}

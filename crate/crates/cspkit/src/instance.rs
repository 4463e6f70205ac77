//! The CSP data model: instances, constraints, assignments, instance
//! parameters, and the normalization/simplification operations everything
//! else builds on.
//!
//! Conventions kept throughout the toolkit:
//! - variable ids are dense `0..n`, domain values are dense `0..domain_size`;
//! - relations are stored as lexicographically sorted, duplicate-free tuple
//!   lists, so iteration order (and therefore branching tie-breaks) is
//!   reproducible;
//! - a constraint with an empty relation is legal input and marks the
//!   instance unsatisfiable.

use crate::error::{Error, Result};

pub type VarId = usize;
pub type Value = usize;

/// A single constraint: a scope (sequence of distinct variables) plus the
/// relation of allowed value tuples.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Constraint {
    pub scope: Vec<VarId>,
    relation: Vec<Vec<Value>>,
}

impl Constraint {
    /// Builds a constraint, sorting the relation and dropping duplicate tuples.
    pub fn new(scope: Vec<VarId>, mut relation: Vec<Vec<Value>>) -> Self {
        relation.sort();
        relation.dedup();
        Constraint { scope, relation }
    }

    pub fn arity(&self) -> usize {
        self.scope.len()
    }

    pub fn relation(&self) -> &[Vec<Value>] {
        &self.relation
    }

    pub fn tuple_count(&self) -> usize {
        self.relation.len()
    }

    /// Position of `var` in the scope, if present.
    pub fn position_of(&self, var: VarId) -> Option<usize> {
        self.scope.iter().position(|&v| v == var)
    }

    /// Replaces the relation, re-canonicalizing it.
    pub fn set_relation(&mut self, relation: Vec<Vec<Value>>) {
        let mut relation = relation;
        relation.sort();
        relation.dedup();
        self.relation = relation;
    }
}

/// A CSP instance over variables `0..num_vars` sharing one finite domain
/// `0..domain_size`. Display names are metadata only.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CspInstance {
    names: Vec<Option<String>>,
    domain_size: usize,
    pub constraints: Vec<Constraint>,
}

/// A total or partial assignment of domain values to variables.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Assignment {
    values: Vec<Option<Value>>,
}

impl Assignment {
    pub fn empty(num_vars: usize) -> Self {
        Assignment {
            values: vec![None; num_vars],
        }
    }

    pub fn from_total(values: Vec<Value>) -> Self {
        Assignment {
            values: values.into_iter().map(Some).collect(),
        }
    }

    pub fn num_vars(&self) -> usize {
        self.values.len()
    }

    pub fn get(&self, var: VarId) -> Option<Value> {
        self.values.get(var).copied().flatten()
    }

    pub fn set(&mut self, var: VarId, value: Value) {
        self.values[var] = Some(value);
    }

    pub fn is_total(&self) -> bool {
        self.values.iter().all(|v| v.is_some())
    }

    pub fn assigned(&self) -> impl Iterator<Item = (VarId, Value)> + '_ {
        self.values
            .iter()
            .enumerate()
            .filter_map(|(v, val)| val.map(|x| (v, x)))
    }

    /// Total assignments as a plain value vector.
    pub fn as_total(&self) -> Option<Vec<Value>> {
        self.values.iter().copied().collect()
    }
}

/// First structural invariant violated by an instance, if any.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Violation {
    /// Index of the offending constraint, when the violation is local to one.
    pub constraint: Option<usize>,
    pub message: String,
}

impl std::fmt::Display for Violation {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self.constraint {
            Some(c) => write!(f, "constraint {}: {}", c, self.message),
            None => write!(f, "{}", self.message),
        }
    }
}

/// The basic instance parameters: variable/constraint counts, total tuple
/// count, total size, maximum arity and maximum variable degree.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct InstanceParams {
    pub vars: usize,
    pub dom: usize,
    pub cons: usize,
    pub tuples: usize,
    pub size: usize,
    pub max_arity: usize,
    pub max_degree: usize,
}

/// Result of [`CspInstance::normalize`]: the compacted instance plus the
/// bookkeeping needed to translate witnesses back to the original instance.
#[derive(Debug, Clone)]
pub struct NormalizeOutput {
    pub instance: CspInstance,
    /// Original variable id -> new id, `None` for removed (free) variables.
    pub var_map: Vec<Option<VarId>>,
    /// Original variables removed because they occur in no scope; any value
    /// works for them.
    pub free_vars: Vec<VarId>,
    /// New value -> original value.
    pub kept_values: Vec<Value>,
}

impl NormalizeOutput {
    /// Translates a witness of the normalized instance into a witness of the
    /// original one. Free variables get value 0.
    pub fn map_witness(&self, witness: &Assignment) -> Assignment {
        let mut out = Assignment::empty(self.var_map.len());
        for (orig, mapped) in self.var_map.iter().enumerate() {
            match mapped {
                Some(new_id) => {
                    let v = witness.get(*new_id).expect("witness must be total");
                    out.set(orig, self.kept_values[v]);
                }
                None => out.set(orig, 0),
            }
        }
        out
    }

    pub fn is_identity(&self) -> bool {
        self.free_vars.is_empty()
            && self.var_map.iter().enumerate().all(|(i, m)| *m == Some(i))
            && self.kept_values.iter().enumerate().all(|(i, &v)| v == i)
    }
}

/// Result of [`CspInstance::disjoint_union`].
#[derive(Debug, Clone)]
pub struct DisjointUnionOutput {
    pub instance: CspInstance,
    /// Variable-id offset of each part inside the union.
    pub offsets: Vec<usize>,
    /// Number of variables of each part.
    pub part_sizes: Vec<usize>,
}

impl DisjointUnionOutput {
    /// Splits a witness of the union into per-part witnesses.
    pub fn split_witness(&self, witness: &Assignment) -> Vec<Assignment> {
        self.offsets
            .iter()
            .zip(&self.part_sizes)
            .map(|(&off, &len)| {
                let mut part = Assignment::empty(len);
                for v in 0..len {
                    if let Some(val) = witness.get(off + v) {
                        part.set(v, val);
                    }
                }
                part
            })
            .collect()
    }
}

/// Outcome of [`CspInstance::assign_and_simplify`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Simplified {
    Instance(CspInstance),
    /// Some relation lost all of its tuples under the partial assignment.
    Unsat,
}

impl CspInstance {
    pub fn new(num_vars: usize, domain_size: usize) -> Self {
        CspInstance {
            names: vec![None; num_vars],
            domain_size,
            constraints: Vec::new(),
        }
    }

    pub fn with_names(names: Vec<Option<String>>, domain_size: usize) -> Self {
        CspInstance {
            names,
            domain_size,
            constraints: Vec::new(),
        }
    }

    pub fn num_vars(&self) -> usize {
        self.names.len()
    }

    pub fn domain_size(&self) -> usize {
        self.domain_size
    }

    pub fn name(&self, var: VarId) -> Option<&str> {
        self.names.get(var).and_then(|n| n.as_deref())
    }

    pub fn set_name(&mut self, var: VarId, name: impl Into<String>) {
        self.names[var] = Some(name.into());
    }

    pub fn names(&self) -> &[Option<String>] {
        &self.names
    }

    pub fn add_constraint(&mut self, scope: Vec<VarId>, relation: Vec<Vec<Value>>) {
        self.constraints.push(Constraint::new(scope, relation));
    }

    /// Does some constraint have an empty relation? Such an instance is
    /// unsatisfiable by definition.
    pub fn has_empty_relation(&self) -> bool {
        self.constraints.iter().any(|c| c.relation.is_empty())
    }

    /// Checks the structural invariants and reports the first violation.
    pub fn validate(&self) -> std::result::Result<(), Violation> {
        if self.domain_size == 0 {
            return Err(Violation {
                constraint: None,
                message: "domain size must be positive".into(),
            });
        }
        for (ci, c) in self.constraints.iter().enumerate() {
            if c.scope.is_empty() {
                return Err(Violation {
                    constraint: Some(ci),
                    message: "empty scope".into(),
                });
            }
            let mut seen = vec![false; self.num_vars()];
            for &v in &c.scope {
                if v >= self.num_vars() {
                    return Err(Violation {
                        constraint: Some(ci),
                        message: format!("scope variable {} out of range", v),
                    });
                }
                if seen[v] {
                    return Err(Violation {
                        constraint: Some(ci),
                        message: format!("duplicate variable {} in scope", v),
                    });
                }
                seen[v] = true;
            }
            for t in &c.relation {
                if t.len() != c.scope.len() {
                    return Err(Violation {
                        constraint: Some(ci),
                        message: "tuple/scope length mismatch".into(),
                    });
                }
                if let Some(&bad) = t.iter().find(|&&v| v >= self.domain_size) {
                    return Err(Violation {
                        constraint: Some(ci),
                        message: format!("value {} out of domain", bad),
                    });
                }
            }
        }
        Ok(())
    }

    /// Removes variables that occur in no scope (they are free: any value
    /// works) and compacts away domain values that occur in no tuple.
    /// Satisfiability is preserved; the returned maps translate witnesses
    /// back. Idempotent.
    pub fn normalize(&self) -> NormalizeOutput {
        let n = self.num_vars();
        let mut used_var = vec![false; n];
        let mut used_value = vec![false; self.domain_size];
        for c in &self.constraints {
            for &v in &c.scope {
                used_var[v] = true;
            }
            for t in &c.relation {
                for &val in t {
                    used_value[val] = true;
                }
            }
        }

        let mut var_map = vec![None; n];
        let mut free_vars = Vec::new();
        let mut names = Vec::new();
        for v in 0..n {
            if used_var[v] {
                var_map[v] = Some(names.len());
                names.push(self.names[v].clone());
            } else {
                free_vars.push(v);
            }
        }

        let mut value_map = vec![None; self.domain_size];
        let mut kept_values = Vec::new();
        for val in 0..self.domain_size {
            if used_value[val] {
                value_map[val] = Some(kept_values.len());
                kept_values.push(val);
            }
        }
        // An instance whose constraints have no tuples at all still needs a
        // non-empty domain.
        if kept_values.is_empty() {
            kept_values.push(0);
        }

        let mut instance = CspInstance::with_names(names, kept_values.len());
        for c in &self.constraints {
            let scope = c.scope.iter().map(|&v| var_map[v].unwrap()).collect();
            let relation = c
                .relation
                .iter()
                .map(|t| t.iter().map(|&val| value_map[val].unwrap()).collect())
                .collect();
            instance.add_constraint(scope, relation);
        }

        NormalizeOutput {
            instance,
            var_map,
            free_vars,
            kept_values,
        }
    }

    /// Applies a partial assignment: tuples conflicting with it are deleted
    /// and assigned variables are projected out of scopes. A constraint whose
    /// scope empties with a surviving tuple is satisfied and dropped; a
    /// constraint whose relation empties makes the residual unsatisfiable.
    pub fn assign_and_simplify(&self, partial: &Assignment) -> Result<Simplified> {
        if partial.num_vars() != self.num_vars() {
            return Err(Error::Invalid(format!(
                "assignment covers {} variables, instance has {}",
                partial.num_vars(),
                self.num_vars()
            )));
        }
        for (var, val) in partial.assigned() {
            if val >= self.domain_size {
                return Err(Error::Invalid(format!(
                    "assigned value {} out of domain for variable {}",
                    val, var
                )));
            }
        }

        let mut out = CspInstance::with_names(self.names.clone(), self.domain_size);
        for c in &self.constraints {
            let keep_positions: Vec<usize> = (0..c.scope.len())
                .filter(|&i| partial.get(c.scope[i]).is_none())
                .collect();
            let mut new_relation = Vec::new();
            'tuples: for t in &c.relation {
                for (i, &v) in c.scope.iter().enumerate() {
                    if let Some(val) = partial.get(v) {
                        if t[i] != val {
                            continue 'tuples;
                        }
                    }
                }
                new_relation.push(keep_positions.iter().map(|&i| t[i]).collect::<Vec<_>>());
            }
            if new_relation.is_empty() {
                return Ok(Simplified::Unsat);
            }
            if keep_positions.is_empty() {
                // Fully assigned and some tuple survived: satisfied, drop it.
                continue;
            }
            let new_scope = keep_positions.iter().map(|&i| c.scope[i]).collect();
            out.add_constraint(new_scope, new_relation);
        }
        Ok(Simplified::Instance(out))
    }

    /// Computes all instance parameters.
    pub fn parameters(&self) -> InstanceParams {
        let mut degree = vec![0usize; self.num_vars()];
        let mut tuples = 0;
        let mut size = 0;
        let mut max_arity = 0;
        for c in &self.constraints {
            tuples += c.tuple_count();
            size += c.arity() * c.tuple_count();
            max_arity = max_arity.max(c.arity());
            for &v in &c.scope {
                degree[v] += 1;
            }
        }
        InstanceParams {
            vars: self.num_vars(),
            dom: self.domain_size,
            cons: self.constraints.len(),
            tuples,
            size,
            max_arity,
            max_degree: degree.iter().copied().max().unwrap_or(0),
        }
    }

    /// Variable-disjoint union: satisfiable iff every part is. Parts may have
    /// different domain sizes; the union takes the maximum. With two or more
    /// parts, display names get a `#<part>` suffix to stay unique.
    pub fn disjoint_union(parts: &[CspInstance]) -> DisjointUnionOutput {
        let domain_size = parts.iter().map(|p| p.domain_size).max().unwrap_or(1);
        let mut names = Vec::new();
        let mut offsets = Vec::new();
        let mut part_sizes = Vec::new();
        for (pi, part) in parts.iter().enumerate() {
            offsets.push(names.len());
            part_sizes.push(part.num_vars());
            for name in &part.names {
                if parts.len() == 1 {
                    names.push(name.clone());
                } else {
                    names.push(name.as_ref().map(|s| format!("{}#{}", s, pi)));
                }
            }
        }
        let mut instance = CspInstance::with_names(names, domain_size);
        for (pi, part) in parts.iter().enumerate() {
            let off = offsets[pi];
            for c in &part.constraints {
                let scope = c.scope.iter().map(|&v| v + off).collect();
                instance.add_constraint(scope, c.relation.clone());
            }
        }
        DisjointUnionOutput {
            instance,
            offsets,
            part_sizes,
        }
    }

    /// True iff the total assignment satisfies every constraint.
    pub fn check(&self, assignment: &Assignment) -> Result<bool> {
        if assignment.num_vars() != self.num_vars() || !assignment.is_total() {
            return Err(Error::Invalid(
                "check requires a total assignment over all variables".into(),
            ));
        }
        for c in &self.constraints {
            let projected: Vec<Value> = c
                .scope
                .iter()
                .map(|&v| assignment.get(v).unwrap())
                .collect();
            if !c.relation.binary_search(&projected).is_ok() {
                return Ok(false);
            }
        }
        Ok(true)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn two_var_instance() -> CspInstance {
        let mut i = CspInstance::new(2, 2);
        i.add_constraint(vec![0, 1], vec![vec![0, 1], vec![1, 0]]);
        i
    }

    #[test]
    fn validate_accepts_well_formed() {
        assert!(two_var_instance().validate().is_ok());
    }

    #[test]
    fn validate_rejects_tuple_length_mismatch() {
        let mut i = CspInstance::new(2, 2);
        i.add_constraint(vec![0, 1], vec![vec![0, 1, 1]]);
        let v = i.validate().unwrap_err();
        assert!(v.message.contains("tuple/scope length mismatch"));
    }

    #[test]
    fn validate_rejects_value_out_of_domain() {
        let mut i = CspInstance::new(1, 2);
        i.add_constraint(vec![0], vec![vec![2]]);
        let v = i.validate().unwrap_err();
        assert!(v.message.contains("value 2 out of domain"));
    }

    #[test]
    fn normalize_removes_unused_variable() {
        let mut i = CspInstance::new(3, 2);
        i.add_constraint(vec![0, 1], vec![vec![0, 0], vec![1, 1]]);
        let out = i.normalize();
        assert_eq!(out.instance.num_vars(), 2);
        assert_eq!(out.free_vars, vec![2]);
        let w = Assignment::from_total(vec![1, 1]);
        let back = out.map_witness(&w);
        assert_eq!(back.as_total().unwrap(), vec![1, 1, 0]);
    }

    #[test]
    fn normalize_compacts_unused_value() {
        let mut i = CspInstance::new(2, 3);
        i.add_constraint(vec![0, 1], vec![vec![0, 1], vec![1, 0]]);
        let out = i.normalize();
        assert_eq!(out.instance.domain_size(), 2);
        assert_eq!(out.kept_values, vec![0, 1]);
    }

    #[test]
    fn normalize_is_idempotent_and_identity_on_normalized() {
        let i = two_var_instance();
        let once = i.normalize();
        assert!(once.is_identity());
        assert_eq!(once.instance, i);
        let twice = once.instance.normalize();
        assert_eq!(twice.instance, once.instance);
    }

    #[test]
    fn assign_and_simplify_filters_tuples() {
        let i = two_var_instance();
        let mut partial = Assignment::empty(2);
        partial.set(0, 0);
        match i.assign_and_simplify(&partial).unwrap() {
            Simplified::Instance(res) => {
                assert_eq!(res.constraints.len(), 1);
                assert_eq!(res.constraints[0].scope, vec![1]);
                assert_eq!(res.constraints[0].relation(), &[vec![1]]);
            }
            Simplified::Unsat => panic!("expected residual instance"),
        }
    }

    #[test]
    fn assign_and_simplify_detects_unsat() {
        let i = two_var_instance();
        let mut partial = Assignment::empty(2);
        partial.set(0, 0);
        partial.set(1, 0);
        assert_eq!(i.assign_and_simplify(&partial).unwrap(), Simplified::Unsat);
    }

    #[test]
    fn assign_and_simplify_empty_assignment_is_identity() {
        let i = two_var_instance();
        match i.assign_and_simplify(&Assignment::empty(2)).unwrap() {
            Simplified::Instance(res) => assert_eq!(res, i),
            Simplified::Unsat => panic!("identity expected"),
        }
    }

    #[test]
    fn parameters_single_constraint() {
        let mut i = CspInstance::new(2, 3);
        i.add_constraint(vec![0, 1], vec![vec![0, 0], vec![1, 1], vec![2, 2]]);
        let p = i.parameters();
        assert_eq!(p.size, 6);
        assert_eq!(p.tuples, 3);
        assert_eq!(p.cons, 1);
        assert_eq!(p.max_arity, 2);
    }

    #[test]
    fn parameters_max_degree() {
        let mut i = CspInstance::new(4, 2);
        i.add_constraint(vec![0, 1], vec![vec![0, 0]]);
        i.add_constraint(vec![0, 2], vec![vec![0, 0]]);
        i.add_constraint(vec![0, 3], vec![vec![0, 0]]);
        assert_eq!(i.parameters().max_degree, 3);
    }

    #[test]
    fn parameters_invariants_hold() {
        let mut i = CspInstance::new(3, 2);
        i.add_constraint(vec![0, 1, 2], vec![vec![0, 0, 0], vec![1, 1, 1]]);
        i.add_constraint(vec![1], vec![vec![0], vec![1]]);
        let p = i.parameters();
        assert!(p.tuples <= p.size);
        assert!(p.size <= p.max_arity * p.tuples);
        assert!(p.cons <= p.tuples);
    }

    #[test]
    fn disjoint_union_of_two_copies() {
        let i = two_var_instance();
        let out = CspInstance::disjoint_union(&[i.clone(), i]);
        assert_eq!(out.instance.num_vars(), 4);
        assert_eq!(out.instance.constraints.len(), 2);
        assert_eq!(out.instance.constraints[1].scope, vec![2, 3]);
    }

    #[test]
    fn disjoint_union_preserves_primal_treewidth() {
        use crate::structure::{primal_graph, treewidth_exact};
        let mut i = CspInstance::new(4, 2);
        i.add_constraint(vec![0, 1, 2], vec![vec![0, 0, 0]]);
        i.add_constraint(vec![2, 3], vec![vec![0, 1]]);
        let (before, _) = treewidth_exact(&primal_graph(&i)).unwrap();
        let union = CspInstance::disjoint_union(&[i.clone(), i]);
        assert_eq!(union.instance.num_vars(), 8);
        let (after, _) = treewidth_exact(&primal_graph(&union.instance)).unwrap();
        assert_eq!(before, after);
    }

    #[test]
    fn disjoint_union_of_one_is_identity() {
        let i = two_var_instance();
        let out = CspInstance::disjoint_union(std::slice::from_ref(&i));
        assert_eq!(out.instance, i);
    }

    #[test]
    fn check_membership() {
        let mut i = CspInstance::new(2, 2);
        i.add_constraint(vec![0, 1], vec![vec![0, 1]]);
        assert!(i.check(&Assignment::from_total(vec![0, 1])).unwrap());
        assert!(!i.check(&Assignment::from_total(vec![1, 1])).unwrap());
    }

    #[test]
    fn check_empty_conjunction_is_true() {
        let i = CspInstance::new(3, 2);
        assert!(i.check(&Assignment::from_total(vec![1, 0, 1])).unwrap());
    }

    #[test]
    fn check_rejects_partial_assignment() {
        let i = two_var_instance();
        let mut partial = Assignment::empty(2);
        partial.set(0, 1);
        assert!(i.check(&partial).is_err());
    }
}

//! Degree reduction for Boolean instances: every variable occurring in three
//! constraints is split into three equal copies tied together by one ternary
//! constraint, leaving every variable in at most two constraints.

use crate::error::{Error, Result};
use crate::instance::{Assignment, CspInstance};

#[derive(Debug, Clone)]
pub struct DegreeReduceOutput {
    pub instance: CspInstance,
    pub original_vars: usize,
    /// `(variable, first clone, second clone)` per degree-3 variable.
    pub clones: Vec<(usize, usize, usize)>,
}

impl DegreeReduceOutput {
    /// Drops the clone variables; the equality gadget guarantees they agree
    /// with their originals.
    pub fn map_witness(&self, witness: &Assignment) -> Assignment {
        let mut out = Assignment::empty(self.original_vars);
        for v in 0..self.original_vars {
            out.set(v, witness.get(v).expect("witness must be total"));
        }
        out
    }
}

/// For every variable `x` of degree 3, introduces `x'` and `x''` plus the
/// constraint over `(x, x', x'')` holding exactly `(0,0,0)` and `(1,1,1)`,
/// and substitutes the clones into the second and third constraint
/// containing `x`. Afterwards every variable, clones and gadget occurrences
/// included, has degree at most 2. Inputs of degree 4 or more are not
/// handled.
pub fn degree_reduce(instance: &CspInstance) -> Result<DegreeReduceOutput> {
    if instance.domain_size() != 2 {
        return Err(Error::Unsupported(
            "degree reduction is defined for Boolean instances".into(),
        ));
    }
    let n = instance.num_vars();
    let mut occurrences: Vec<Vec<usize>> = vec![Vec::new(); n];
    for (ci, c) in instance.constraints.iter().enumerate() {
        for &v in &c.scope {
            occurrences[v].push(ci);
        }
    }
    if let Some(v) = occurrences.iter().position(|o| o.len() > 3) {
        return Err(Error::Unsupported(format!(
            "variable {} has degree {}, only degree <= 3 inputs are handled",
            v,
            occurrences[v].len()
        )));
    }

    let mut names = instance.names().to_vec();
    let mut constraints = instance.constraints.clone();
    let mut clones = Vec::new();
    for (x, occs) in occurrences.iter().enumerate() {
        if occs.len() != 3 {
            continue;
        }
        let first_clone = names.len();
        let second_clone = names.len() + 1;
        names.push(instance.name(x).map(|s| format!("{}'", s)));
        names.push(instance.name(x).map(|s| format!("{}''", s)));

        // x stays in its first constraint; the clones take over the others.
        for (occ, replacement) in occs[1..].iter().zip([first_clone, second_clone]) {
            let c = &mut constraints[*occ];
            let pos = c.position_of(x).expect("occurrence list is current");
            c.scope[pos] = replacement;
        }
        clones.push((x, first_clone, second_clone));
    }

    let mut out = CspInstance::with_names(names, 2);
    out.constraints = constraints;
    for &(x, c1, c2) in &clones {
        out.add_constraint(vec![x, c1, c2], vec![vec![0, 0, 0], vec![1, 1, 1]]);
    }
    Ok(DegreeReduceOutput {
        instance: out,
        original_vars: n,
        clones,
    })
}

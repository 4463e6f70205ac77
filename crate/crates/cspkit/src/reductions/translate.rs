//! Clause-by-clause translations between CNF formulas and Boolean CSP
//! instances. Both directions keep the variable set, so witnesses carry
//! over unchanged.

use crate::cnf::{Clause, CnfFormula, Lit};
use crate::error::{Error, Result};
use crate::instance::{Assignment, CspInstance};

/// Widest clause [`cnf_to_csp`] accepts by default; a clause of width `k`
/// expands into up to `2^k - 1` tuples.
pub const DEFAULT_CLAUSE_WIDTH_LIMIT: usize = 20;

/// Hard ceiling on scope widths either translation will enumerate,
/// regardless of the caller-supplied limit.
pub const TRANSLATION_WIDTH_CAP: usize = 30;

#[derive(Debug, Clone)]
pub struct CnfToCspOutput {
    pub instance: CspInstance,
}

impl CnfToCspOutput {
    /// Witnesses are identical; 0/1 values map straight to false/true.
    pub fn map_witness(&self, witness: &Assignment) -> Vec<bool> {
        (0..witness.num_vars())
            .map(|v| witness.get(v).expect("witness must be total") == 1)
            .collect()
    }
}

/// One constraint per clause, over the clause's variables, whose relation
/// lists exactly the assignments satisfying the clause: `2^k - 1` tuples for
/// a clause of width `k`.
pub fn cnf_to_csp(formula: &CnfFormula, width_limit: usize) -> Result<CnfToCspOutput> {
    let width_limit = width_limit.min(TRANSLATION_WIDTH_CAP);
    let mut instance = CspInstance::new(formula.num_vars(), 2);
    for (i, clause) in formula.clauses().iter().enumerate() {
        if clause.is_empty() {
            return Err(Error::Invalid(format!("clause {} is empty", i)));
        }
        if clause.width() > width_limit {
            return Err(Error::Budget(format!(
                "clause {} has width {}, limit is {}",
                i,
                clause.width(),
                width_limit
            )));
        }
        let scope: Vec<usize> = clause.vars().collect();
        let w = scope.len();
        let mut relation = Vec::with_capacity((1usize << w) - 1);
        for bits in 0..(1usize << w) {
            let tuple: Vec<usize> = (0..w).map(|p| (bits >> (w - 1 - p)) & 1).collect();
            let satisfied = clause
                .lits()
                .iter()
                .enumerate()
                .any(|(p, l)| l.satisfied_by(tuple[p] == 1));
            if satisfied {
                relation.push(tuple);
            }
        }
        instance.add_constraint(scope, relation);
    }
    Ok(CnfToCspOutput { instance })
}

#[derive(Debug, Clone)]
pub struct CspToCnfOutput {
    pub formula: CnfFormula,
}

impl CspToCnfOutput {
    pub fn map_witness(&self, witness: &[bool]) -> Assignment {
        Assignment::from_total(witness.iter().map(|&b| usize::from(b)).collect())
    }
}

/// One clause per forbidden assignment of each constraint's scope: the
/// clause negating that assignment. A constraint of arity `r` yields at most
/// `2^r` clauses of width `r`; a full relation yields none.
pub fn csp_to_cnf(instance: &CspInstance, max_arity: usize) -> Result<CspToCnfOutput> {
    if instance.domain_size() != 2 {
        return Err(Error::Unsupported(format!(
            "only Boolean instances translate to CNF, domain size is {}",
            instance.domain_size()
        )));
    }
    let mut clauses = Vec::new();
    for (ci, c) in instance.constraints.iter().enumerate() {
        let r = c.arity();
        if r > max_arity {
            return Err(Error::Invalid(format!(
                "constraint {} has arity {}, limit is {}",
                ci, r, max_arity
            )));
        }
        if r > TRANSLATION_WIDTH_CAP {
            return Err(Error::Budget(format!(
                "constraint {} has arity {}, enumeration cap is {}",
                ci, r, TRANSLATION_WIDTH_CAP
            )));
        }
        for bits in 0..(1usize << r) {
            let tuple: Vec<usize> = (0..r).map(|p| (bits >> (r - 1 - p)) & 1).collect();
            if c.relation().binary_search(&tuple).is_ok() {
                continue;
            }
            // Forbid this assignment: for value 1 emit the negative literal,
            // for value 0 the positive one.
            let lits: Vec<Lit> = c
                .scope
                .iter()
                .zip(&tuple)
                .map(|(&v, &val)| if val == 1 { Lit::neg(v) } else { Lit::pos(v) })
                .collect();
            clauses.push(Clause::new(lits).expect("scope variables are distinct"));
        }
    }
    let formula = CnfFormula::new(instance.num_vars(), clauses)?;
    Ok(CspToCnfOutput { formula })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::solvers::{brute_force_cnf, brute_force_csp, DEFAULT_ENUMERATION_BUDGET};

    fn clause(lits: Vec<Lit>) -> Clause {
        Clause::new(lits).unwrap()
    }

    #[test]
    fn three_literal_clause_becomes_seven_tuples() {
        let f =
            CnfFormula::new(3, vec![clause(vec![Lit::pos(0), Lit::pos(1), Lit::pos(2)])]).unwrap();
        let out = cnf_to_csp(&f, DEFAULT_CLAUSE_WIDTH_LIMIT).unwrap();
        let c = &out.instance.constraints[0];
        assert_eq!(c.arity(), 3);
        assert_eq!(c.tuple_count(), 7);
    }

    #[test]
    fn unit_clause_forces_the_literal() {
        let f = CnfFormula::new(1, vec![clause(vec![Lit::pos(0)])]).unwrap();
        let out = cnf_to_csp(&f, DEFAULT_CLAUSE_WIDTH_LIMIT).unwrap();
        assert_eq!(out.instance.constraints[0].relation(), &[vec![1]]);
    }

    #[test]
    fn mixed_polarity_clause_tuples() {
        // (x or not y): of the 4 assignments only x=0,y=1 falsifies.
        let f = CnfFormula::new(2, vec![clause(vec![Lit::pos(0), Lit::neg(1)])]).unwrap();
        let out = cnf_to_csp(&f, DEFAULT_CLAUSE_WIDTH_LIMIT).unwrap();
        assert_eq!(
            out.instance.constraints[0].relation(),
            &[vec![0, 0], vec![1, 0], vec![1, 1]]
        );
    }

    #[test]
    fn cnf_to_csp_rejects_empty_clause_and_wide_clause() {
        let f = CnfFormula::new(1, vec![clause(vec![])]).unwrap();
        assert!(cnf_to_csp(&f, 20).is_err());
        let wide = CnfFormula::new(
            4,
            vec![clause(vec![
                Lit::pos(0),
                Lit::pos(1),
                Lit::pos(2),
                Lit::pos(3),
            ])],
        )
        .unwrap();
        assert!(matches!(cnf_to_csp(&wide, 3), Err(Error::Budget(_))));
    }

    #[test]
    fn equality_constraint_becomes_two_clauses() {
        let mut i = CspInstance::new(2, 2);
        i.add_constraint(vec![0, 1], vec![vec![0, 0], vec![1, 1]]);
        let out = csp_to_cnf(&i, 2).unwrap();
        let rendered: Vec<Vec<i64>> = out
            .formula
            .clauses()
            .iter()
            .map(|c| c.lits().iter().map(|l| l.to_dimacs()).collect())
            .collect();
        // Forbid (0,1) -> (x or not y); forbid (1,0) -> (not x or y).
        assert_eq!(rendered, vec![vec![1, -2], vec![-1, 2]]);
    }

    #[test]
    fn full_relation_yields_no_clauses() {
        let mut i = CspInstance::new(2, 2);
        i.add_constraint(
            vec![0, 1],
            vec![vec![0, 0], vec![0, 1], vec![1, 0], vec![1, 1]],
        );
        let out = csp_to_cnf(&i, 2).unwrap();
        assert!(out.formula.clauses().is_empty());
    }

    #[test]
    fn empty_relation_yields_contradiction() {
        let mut i = CspInstance::new(1, 2);
        i.add_constraint(vec![0], vec![]);
        let out = csp_to_cnf(&i, 1).unwrap();
        assert_eq!(out.formula.clauses().len(), 2);
        let r = brute_force_cnf(&out.formula, DEFAULT_ENUMERATION_BUDGET).unwrap();
        assert!(!r.satisfiable);
    }

    #[test]
    fn huge_arity_is_a_budget_error() {
        let mut i = CspInstance::new(40, 2);
        i.add_constraint((0..40).collect(), vec![vec![0; 40]]);
        assert!(matches!(csp_to_cnf(&i, 64), Err(Error::Budget(_))));
    }

    #[test]
    fn three_cnf_instances_have_linear_size() {
        // Width-3 clauses expand to at most 3 variables x 8 tuples each, so
        // the translated instance has size at most 24m.
        use crate::bench::{gen_kcnf, GeneratorConfig};
        for seed in 0..50 {
            let cfg = GeneratorConfig {
                n: 12,
                m: 18,
                k: 3,
                seed,
                ..GeneratorConfig::default()
            };
            let f = gen_kcnf(&cfg).unwrap();
            let out = cnf_to_csp(&f, DEFAULT_CLAUSE_WIDTH_LIMIT).unwrap();
            let p = out.instance.parameters();
            assert!(p.size <= 24 * f.clauses().len());
            assert!(p.max_arity <= 3);
        }
    }

    #[test]
    fn round_trip_preserves_satisfiability() {
        use crate::bench::{gen_cnf_mixed, GeneratorConfig};
        for seed in 0..200 {
            let cfg = GeneratorConfig {
                n: 6,
                m: 5,
                k: 3,
                seed,
                ..GeneratorConfig::default()
            };
            let f = gen_cnf_mixed(&cfg).unwrap();
            let csp = cnf_to_csp(&f, DEFAULT_CLAUSE_WIDTH_LIMIT).unwrap();
            let back = csp_to_cnf(&csp.instance, 6).unwrap();
            let a = brute_force_cnf(&f, DEFAULT_ENUMERATION_BUDGET).unwrap();
            let b = brute_force_csp(&csp.instance, DEFAULT_ENUMERATION_BUDGET).unwrap();
            let c = brute_force_cnf(&back.formula, DEFAULT_ENUMERATION_BUDGET).unwrap();
            assert_eq!(a.satisfiable, b.satisfiable, "seed {}", seed);
            assert_eq!(a.satisfiable, c.satisfiable, "seed {}", seed);
            if let Some(w) = &b.witness {
                let bools = csp.map_witness(w);
                assert!(f.evaluate(&bools), "witness must carry over, seed {}", seed);
            }
        }
    }
}

//! Plain backtracking baseline: assign variables in index order, values in
//! ascending order, filtering every relation after each assignment.

use super::{BranchStats, SolveResult};
use crate::instance::{Assignment, CspInstance};

struct Search<'a> {
    instance: &'a CspInstance,
    values: Vec<usize>,
    stats: BranchStats,
    witness: Option<Assignment>,
}

impl Search<'_> {
    /// `alive[c]` holds the indices of the tuples of constraint `c` still
    /// compatible with the assignment so far.
    fn visit(&mut self, var: usize, alive: &[Vec<usize>]) -> bool {
        if var == self.instance.num_vars() {
            self.stats.leaves += 1;
            self.witness = Some(Assignment::from_total(self.values.clone()));
            return true;
        }
        for value in 0..self.instance.domain_size() {
            self.stats.nodes += 1;
            self.stats.max_depth = self.stats.max_depth.max(var + 1);
            self.values[var] = value;

            let mut next = Vec::with_capacity(alive.len());
            let mut dead = false;
            for (ci, c) in self.instance.constraints.iter().enumerate() {
                match c.position_of(var) {
                    Some(pos) => {
                        let filtered: Vec<usize> = alive[ci]
                            .iter()
                            .copied()
                            .filter(|&ti| c.relation()[ti][pos] == value)
                            .collect();
                        if filtered.is_empty() {
                            dead = true;
                            break;
                        }
                        next.push(filtered);
                    }
                    None => next.push(alive[ci].clone()),
                }
            }
            if dead {
                self.stats.leaves += 1;
                continue;
            }
            if self.visit(var + 1, &next) {
                return true;
            }
        }
        false
    }
}

/// Exact satisfiability by variable-ordered backtracking with tuple
/// filtering after each assignment.
pub fn backtracking_solve(instance: &CspInstance) -> SolveResult {
    let start = std::time::Instant::now();
    let mut stats = BranchStats {
        nodes: 1, // root state
        ..BranchStats::default()
    };
    if instance.has_empty_relation() {
        stats.leaves = 1;
        stats.elapsed = start.elapsed();
        return SolveResult {
            satisfiable: false,
            witness: None,
            stats,
        };
    }
    let alive: Vec<Vec<usize>> = instance
        .constraints
        .iter()
        .map(|c| (0..c.tuple_count()).collect())
        .collect();
    let mut search = Search {
        instance,
        values: vec![0; instance.num_vars()],
        stats,
        witness: None,
    };
    let satisfiable = search.visit(0, &alive);
    let mut stats = search.stats;
    if stats.leaves == 0 {
        stats.leaves = 1; // n = 0 with no constraints: the root is the leaf
    }
    stats.elapsed = start.elapsed();
    SolveResult {
        satisfiable,
        witness: search.witness,
        stats,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bench::{gen_csp, GeneratorConfig};
    use crate::solvers::{brute_force_csp, DEFAULT_ENUMERATION_BUDGET};

    #[test]
    fn zero_constraint_instance_is_sat() {
        let i = CspInstance::new(3, 2);
        let r = backtracking_solve(&i);
        assert!(r.satisfiable);
        assert_eq!(r.witness.unwrap().as_total().unwrap(), vec![0, 0, 0]);
    }

    #[test]
    fn pigeonhole_style_instance_is_unsat() {
        // Three variables over two values, all pairwise different.
        let mut i = CspInstance::new(3, 2);
        let diff = vec![vec![0, 1], vec![1, 0]];
        i.add_constraint(vec![0, 1], diff.clone());
        i.add_constraint(vec![1, 2], diff.clone());
        i.add_constraint(vec![0, 2], diff);
        let r = backtracking_solve(&i);
        assert!(!r.satisfiable);
        let oracle = brute_force_csp(&i, DEFAULT_ENUMERATION_BUDGET).unwrap();
        assert_eq!(r.satisfiable, oracle.satisfiable);
    }

    #[test]
    fn agrees_with_brute_force_on_random_instances() {
        for seed in 1000..1300 {
            let cfg = GeneratorConfig {
                n: 6,
                m: 5,
                k: 3,
                domain_size: 3,
                tuples_per_constraint: 4,
                edge_probability: 0.0,
                clique_size: 0,
                seed,
            };
            let i = gen_csp(&cfg).unwrap();
            let oracle = brute_force_csp(&i, DEFAULT_ENUMERATION_BUDGET).unwrap();
            let got = backtracking_solve(&i);
            assert_eq!(got.satisfiable, oracle.satisfiable, "seed {}", seed);
            if let Some(w) = &got.witness {
                assert!(i.check(w).unwrap());
                // Both explore values in ascending order, so witnesses match.
                assert_eq!(w, oracle.witness.as_ref().unwrap());
            }
            assert!(got.stats.leaves <= got.stats.nodes);
        }
    }
}

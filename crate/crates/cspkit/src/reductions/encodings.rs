//! Graph-problem encodings into binary CSP: clique-of-size-k and
//! 3-colorability.

use crate::error::{Error, Result};
use crate::instance::{Assignment, CspInstance};
use crate::structure::SimpleGraph;

#[derive(Debug, Clone)]
pub struct CliqueEncoding {
    pub instance: CspInstance,
    pub k: usize,
    pub num_vertices: usize,
}

impl CliqueEncoding {
    /// Reads the clique off a witness: the chosen vertices, ascending.
    pub fn clique_vertices(&self, witness: &Assignment) -> Vec<usize> {
        let mut vertices: Vec<usize> = (0..self.k)
            .map(|i| witness.get(i).expect("witness must be total"))
            .collect();
        vertices.sort_unstable();
        vertices
    }
}

/// k variables over the vertex set; for every i < j a binary constraint
/// allowing exactly the pairs (u, v) with u < v and uv an edge. Forcing an
/// increasing vertex sequence makes the chosen vertices distinct, so the
/// instance is consistent iff the graph has a k-clique.
pub fn clique_to_2csp(graph: &SimpleGraph, k: usize) -> Result<CliqueEncoding> {
    if k == 0 {
        return Err(Error::Invalid("clique size must be at least 1".into()));
    }
    let n = graph.num_vertices();
    if n == 0 {
        // No vertices, no clique: a canonical unsatisfiable stub.
        let mut instance = CspInstance::new(k, 1);
        instance.add_constraint(vec![0], Vec::new());
        return Ok(CliqueEncoding {
            instance,
            k,
            num_vertices: 0,
        });
    }
    let mut instance = CspInstance::new(k, n);
    let ordered: Vec<Vec<usize>> = graph.edges().map(|(u, v)| vec![u, v]).collect();
    for i in 0..k {
        for j in i + 1..k {
            instance.add_constraint(vec![i, j], ordered.clone());
        }
    }
    Ok(CliqueEncoding {
        instance,
        k,
        num_vertices: n,
    })
}

#[derive(Debug, Clone)]
pub struct ColoringEncoding {
    pub instance: CspInstance,
}

impl ColoringEncoding {
    pub fn coloring(&self, witness: &Assignment) -> Vec<usize> {
        (0..self.instance.num_vars())
            .map(|v| witness.get(v).expect("witness must be total"))
            .collect()
    }
}

/// One variable per vertex over domain {0, 1, 2}; per edge the six
/// unequal-value pairs. Consistent iff the graph is 3-colorable.
pub fn coloring3_to_2csp(graph: &SimpleGraph) -> ColoringEncoding {
    let mut instance = CspInstance::new(graph.num_vertices(), 3);
    let unequal: Vec<Vec<usize>> = (0..3)
        .flat_map(|a| (0..3).filter(move |&b| a != b).map(move |b| vec![a, b]))
        .collect();
    for (u, v) in graph.edges() {
        instance.add_constraint(vec![u, v], unequal.clone());
    }
    ColoringEncoding { instance }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::solvers::{brute_force_csp, DEFAULT_ENUMERATION_BUDGET};

    fn triangle() -> SimpleGraph {
        let mut g = SimpleGraph::new(3);
        g.add_edge(0, 1).unwrap();
        g.add_edge(1, 2).unwrap();
        g.add_edge(0, 2).unwrap();
        g
    }

    fn path3() -> SimpleGraph {
        let mut g = SimpleGraph::new(3);
        g.add_edge(0, 1).unwrap();
        g.add_edge(1, 2).unwrap();
        g
    }

    #[test]
    fn triangle_has_a_3_clique() {
        let enc = clique_to_2csp(&triangle(), 3).unwrap();
        let r = brute_force_csp(&enc.instance, DEFAULT_ENUMERATION_BUDGET).unwrap();
        assert!(r.satisfiable);
        assert_eq!(enc.clique_vertices(&r.witness.unwrap()), vec![0, 1, 2]);
    }

    #[test]
    fn path_has_no_3_clique() {
        let enc = clique_to_2csp(&path3(), 3).unwrap();
        let r = brute_force_csp(&enc.instance, DEFAULT_ENUMERATION_BUDGET).unwrap();
        assert!(!r.satisfiable);
    }

    #[test]
    fn singleton_clique_needs_a_vertex() {
        let enc = clique_to_2csp(&SimpleGraph::new(4), 1).unwrap();
        assert!(
            brute_force_csp(&enc.instance, DEFAULT_ENUMERATION_BUDGET)
                .unwrap()
                .satisfiable
        );
        let empty = clique_to_2csp(&SimpleGraph::new(0), 1).unwrap();
        assert!(
            !brute_force_csp(&empty.instance, DEFAULT_ENUMERATION_BUDGET)
                .unwrap()
                .satisfiable
        );
        assert!(clique_to_2csp(&triangle(), 0).is_err());
    }

    #[test]
    fn edge_constraints_have_six_tuples() {
        let enc = coloring3_to_2csp(&path3());
        for c in &enc.instance.constraints {
            assert_eq!(c.tuple_count(), 6);
        }
    }

    #[test]
    fn k4_is_not_3_colorable() {
        let mut g = SimpleGraph::new(4);
        for u in 0..4 {
            for v in u + 1..4 {
                g.add_edge(u, v).unwrap();
            }
        }
        let enc = coloring3_to_2csp(&g);
        let r = brute_force_csp(&enc.instance, DEFAULT_ENUMERATION_BUDGET).unwrap();
        assert!(!r.satisfiable);
    }

    #[test]
    fn five_cycle_is_3_colorable() {
        let mut g = SimpleGraph::new(5);
        for v in 0..5 {
            g.add_edge(v, (v + 1) % 5).unwrap();
        }
        let enc = coloring3_to_2csp(&g);
        let r = brute_force_csp(&enc.instance, DEFAULT_ENUMERATION_BUDGET).unwrap();
        assert!(r.satisfiable);
        let colors = enc.coloring(r.witness.as_ref().unwrap());
        for (u, v) in g.edges() {
            assert_ne!(colors[u], colors[v]);
        }
    }
}

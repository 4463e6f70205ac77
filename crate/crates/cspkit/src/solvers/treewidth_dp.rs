//! Dynamic programming over a tree decomposition of the primal graph:
//! per-bag tables of consistent bag-assignments, joined bottom-up along the
//! tree, with witness reconstruction by a top-down pass. Work per bag is at
//! most `d^|bag|` table rows.

use super::{BranchStats, SolveResult};
use crate::error::{Error, Result};
use crate::instance::{Assignment, CspInstance, Value};
use crate::structure::{primal_graph, validate_decomposition, TreeDecomposition};
use std::collections::HashMap;

struct BagTable {
    /// Assignments to the bag's variables (in bag order) that satisfy every
    /// constraint anchored here and extend into every child subtree.
    rows: Vec<Vec<Value>>,
    /// For each row and each child, the index of a compatible child row.
    child_choice: Vec<Vec<usize>>,
}

/// Per child: positions of the shared variables inside this bag, plus child
/// rows indexed by their values on those variables.
type ChildIndex = (Vec<usize>, HashMap<Vec<Value>, usize>);

/// Solves the instance by dynamic programming over `decomposition`, which
/// must be a valid tree decomposition of the instance's primal graph.
///
/// Each constraint is checked exactly once, at the bag nearest the root that
/// contains its full scope (smallest bag index on ties). Scopes are cliques
/// in the primal graph, so a valid decomposition always has such a bag; the
/// solver fails loudly otherwise.
pub fn freuder_dp_solve(
    instance: &CspInstance,
    decomposition: &TreeDecomposition,
    budget: u64,
) -> Result<SolveResult> {
    let start = std::time::Instant::now();
    let graph = primal_graph(instance);
    validate_decomposition(&graph, decomposition)
        .map_err(|msg| Error::Invalid(format!("invalid tree decomposition: {}", msg)))?;

    let bags = &decomposition.bags;
    let nb = bags.len();
    let d = instance.domain_size();
    if d == 0 {
        return Err(Error::Invalid("domain size must be positive".into()));
    }

    // Root the tree at bag 0.
    let mut adj = vec![Vec::new(); nb];
    for &(a, b) in &decomposition.tree_edges {
        adj[a].push(b);
        adj[b].push(a);
    }
    let mut parent = vec![usize::MAX; nb];
    let mut depth = vec![0usize; nb];
    let mut order = Vec::with_capacity(nb);
    let mut stack = vec![0usize];
    let mut seen = vec![false; nb];
    seen[0] = true;
    while let Some(b) = stack.pop() {
        order.push(b);
        for &c in &adj[b] {
            if !seen[c] {
                seen[c] = true;
                parent[c] = b;
                depth[c] = depth[b] + 1;
                stack.push(c);
            }
        }
    }
    let children: Vec<Vec<usize>> = (0..nb)
        .map(|b| adj[b].iter().copied().filter(|&c| parent[c] == b).collect())
        .collect();

    // Anchor every constraint to the shallowest bag containing its scope.
    let mut anchored: Vec<Vec<usize>> = vec![Vec::new(); nb];
    for (ci, c) in instance.constraints.iter().enumerate() {
        let mut best: Option<usize> = None;
        for (bi, bag) in bags.iter().enumerate() {
            if c.scope.iter().all(|v| bag.contains(v)) {
                let better = match best {
                    None => true,
                    Some(cur) => depth[bi] < depth[cur] || (depth[bi] == depth[cur] && bi < cur),
                };
                if better {
                    best = Some(bi);
                }
            }
        }
        match best {
            Some(bi) => anchored[bi].push(ci),
            None => {
                return Err(Error::Invalid(format!(
                    "no bag contains the scope of constraint {}",
                    ci
                )))
            }
        }
    }

    let mut stats = BranchStats {
        leaves: nb as u64,
        max_depth: depth.iter().copied().max().unwrap_or(0) + 1,
        ..BranchStats::default()
    };

    // Bottom-up table construction (reverse DFS order visits children first).
    let mut tables: Vec<Option<BagTable>> = (0..nb).map(|_| None).collect();
    for &b in order.iter().rev() {
        let bag = &bags[b];
        let rows_bound = super::checked_power(d, bag.len(), budget, "decomposition bag table")?;

        // Index child rows by their projection onto the shared variables.
        let mut child_indices: Vec<ChildIndex> = Vec::new();
        for &c in &children[b] {
            let shared: Vec<usize> = bags[c]
                .iter()
                .enumerate()
                .filter(|(_, v)| bag.contains(v))
                .map(|(pos, _)| pos)
                .collect();
            let table = tables[c].as_ref().expect("children processed first");
            let mut index = HashMap::new();
            for (ri, row) in table.rows.iter().enumerate() {
                let key: Vec<Value> = shared.iter().map(|&p| row[p]).collect();
                index.entry(key).or_insert(ri);
            }
            // Positions of the shared variables inside this bag, in the same
            // order as the key above.
            let in_bag: Vec<usize> = shared
                .iter()
                .map(|&p| bag.iter().position(|&v| v == bags[c][p]).unwrap())
                .collect();
            child_indices.push((in_bag, index));
        }

        let mut rows = Vec::new();
        let mut child_choice = Vec::new();
        let mut current = vec![0usize; bag.len()];
        for _ in 0..rows_bound {
            stats.nodes += 1;
            let ok = anchored[b].iter().all(|&ci| {
                let c = &instance.constraints[ci];
                let projected: Vec<Value> = c
                    .scope
                    .iter()
                    .map(|v| current[bag.iter().position(|x| x == v).unwrap()])
                    .collect();
                c.relation().binary_search(&projected).is_ok()
            });
            if ok {
                let mut choices = Vec::with_capacity(children[b].len());
                let mut extends = true;
                for (in_bag, index) in &child_indices {
                    let key: Vec<Value> = in_bag.iter().map(|&p| current[p]).collect();
                    match index.get(&key) {
                        Some(&ri) => choices.push(ri),
                        None => {
                            extends = false;
                            break;
                        }
                    }
                }
                if extends {
                    rows.push(current.clone());
                    child_choice.push(choices);
                }
            }
            // Odometer over the bag assignment.
            let mut i = bag.len();
            while i > 0 {
                i -= 1;
                current[i] += 1;
                if current[i] < d {
                    break;
                }
                current[i] = 0;
            }
        }
        tables[b] = Some(BagTable { rows, child_choice });
    }

    let root_table = tables[0].as_ref().unwrap();
    if root_table.rows.is_empty() {
        stats.elapsed = start.elapsed();
        return Ok(SolveResult {
            satisfiable: false,
            witness: None,
            stats,
        });
    }

    // Top-down witness reconstruction: bag intersections agree by
    // construction, and occurrence subtrees are connected, so values never
    // conflict.
    let mut values: Vec<Option<Value>> = vec![None; instance.num_vars()];
    let mut walk = vec![(0usize, 0usize)]; // (bag, row index)
    while let Some((b, ri)) = walk.pop() {
        let table = tables[b].as_ref().unwrap();
        for (pos, &v) in bags[b].iter().enumerate() {
            values[v] = Some(table.rows[ri][pos]);
        }
        for (ci, &c) in children[b].iter().enumerate() {
            walk.push((c, table.child_choice[ri][ci]));
        }
    }
    let witness = Assignment::from_total(values.into_iter().map(|v| v.unwrap_or(0)).collect());
    debug_assert!(instance.check(&witness).unwrap_or(false));
    stats.elapsed = start.elapsed();
    Ok(SolveResult {
        satisfiable: true,
        witness: Some(witness),
        stats,
    })
}

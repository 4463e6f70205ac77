//! Seeded instance generators. Everything is a pure function of the config;
//! scope and tuple sampling use Fisher-Yates prefixes so outputs are stable
//! across platforms.

use super::rng::SplitMix64;
use crate::cnf::{Clause, CnfFormula, Lit};
use crate::error::{Error, Result};
use crate::instance::CspInstance;
use crate::structure::SimpleGraph;

/// Parameters for the random generators. Which fields matter depends on the
/// generator: `k` is the clause width for CNF and the constraint arity for
/// CSP; `edge_probability` and `clique_size` apply to graphs.
#[derive(Debug, Clone)]
pub struct GeneratorConfig {
    pub n: usize,
    pub m: usize,
    pub k: usize,
    pub domain_size: usize,
    pub tuples_per_constraint: usize,
    pub edge_probability: f64,
    pub clique_size: usize,
    pub seed: u64,
}

impl Default for GeneratorConfig {
    fn default() -> Self {
        GeneratorConfig {
            n: 8,
            m: 6,
            k: 3,
            domain_size: 2,
            tuples_per_constraint: 4,
            edge_probability: 0.5,
            clique_size: 3,
            seed: 0,
        }
    }
}

/// Uniform random k-CNF: `m` clauses, each over `k` distinct variables with
/// uniform signs.
pub fn gen_kcnf(config: &GeneratorConfig) -> Result<CnfFormula> {
    if config.k > config.n {
        return Err(Error::Invalid(format!(
            "clause width {} exceeds variable count {}",
            config.k, config.n
        )));
    }
    if config.k == 0 {
        return Err(Error::Invalid("clause width must be positive".into()));
    }
    let mut rng = SplitMix64::new(config.seed);
    let mut clauses = Vec::with_capacity(config.m);
    for _ in 0..config.m {
        let vars = rng.sample_distinct(config.n, config.k);
        let lits = vars
            .into_iter()
            .map(|v| {
                if rng.next_bool() {
                    Lit::pos(v)
                } else {
                    Lit::neg(v)
                }
            })
            .collect();
        clauses.push(Clause::new(lits).expect("distinct variables"));
    }
    CnfFormula::new(config.n, clauses)
}

/// Like [`gen_kcnf`] but with clause widths drawn uniformly from `1..=k`,
/// which exercises width-reduction procedures on genuinely mixed inputs.
pub fn gen_cnf_mixed(config: &GeneratorConfig) -> Result<CnfFormula> {
    if config.k > config.n || config.k == 0 {
        return Err(Error::Invalid(format!(
            "max clause width {} must be in 1..={}",
            config.k, config.n
        )));
    }
    let mut rng = SplitMix64::new(config.seed);
    let mut clauses = Vec::with_capacity(config.m);
    for _ in 0..config.m {
        let width = 1 + rng.below(config.k as u64) as usize;
        let vars = rng.sample_distinct(config.n, width);
        let lits = vars
            .into_iter()
            .map(|v| {
                if rng.next_bool() {
                    Lit::pos(v)
                } else {
                    Lit::neg(v)
                }
            })
            .collect();
        clauses.push(Clause::new(lits).expect("distinct variables"));
    }
    CnfFormula::new(config.n, clauses)
}

const TUPLE_SPACE_LIMIT: u64 = 1_000_000;

fn tuple_space(domain_size: usize, arity: usize) -> Result<Vec<Vec<usize>>> {
    let mut count: u64 = 1;
    for _ in 0..arity {
        count = count.saturating_mul(domain_size as u64);
        if count > TUPLE_SPACE_LIMIT {
            return Err(Error::Budget(format!(
                "tuple space {}^{} too large to enumerate",
                domain_size, arity
            )));
        }
    }
    let mut all = Vec::with_capacity(count as usize);
    let mut current = vec![0usize; arity];
    for _ in 0..count {
        all.push(current.clone());
        let mut i = arity;
        while i > 0 {
            i -= 1;
            current[i] += 1;
            if current[i] < domain_size {
                break;
            }
            current[i] = 0;
        }
    }
    Ok(all)
}

/// Random CSP instance: `m` constraints of arity `k` over domain
/// `domain_size`, each with `tuples_per_constraint` distinct tuples.
/// Variables are named `v0..`.
pub fn gen_csp(config: &GeneratorConfig) -> Result<CspInstance> {
    gen_csp_inner(config, false)
}

/// Like [`gen_csp`] but with per-constraint arity drawn from `1..=k` and
/// tuple counts from `1..=tuples_per_constraint`.
pub fn gen_csp_mixed(config: &GeneratorConfig) -> Result<CspInstance> {
    gen_csp_inner(config, true)
}

fn gen_csp_inner(config: &GeneratorConfig, mixed: bool) -> Result<CspInstance> {
    if config.k > config.n || config.k == 0 {
        return Err(Error::Invalid(format!(
            "arity {} must be in 1..={}",
            config.k, config.n
        )));
    }
    if config.domain_size == 0 {
        return Err(Error::Invalid("domain size must be positive".into()));
    }
    let mut rng = SplitMix64::new(config.seed);
    let names = (0..config.n).map(|i| Some(format!("v{}", i))).collect();
    let mut instance = CspInstance::with_names(names, config.domain_size);
    for _ in 0..config.m {
        let arity = if mixed {
            1 + rng.below(config.k as u64) as usize
        } else {
            config.k
        };
        let scope = rng.sample_distinct(config.n, arity);
        let mut space = tuple_space(config.domain_size, arity)?;
        let want = if mixed {
            1 + rng.below(config.tuples_per_constraint.min(space.len()) as u64) as usize
        } else {
            config.tuples_per_constraint
        };
        if want > space.len() {
            return Err(Error::Invalid(format!(
                "{} tuples requested but only {} exist for arity {} over domain {}",
                want,
                space.len(),
                arity,
                config.domain_size
            )));
        }
        // Fisher-Yates prefix over the enumerated tuple space.
        for i in 0..want {
            let j = i + rng.below((space.len() - i) as u64) as usize;
            space.swap(i, j);
        }
        space.truncate(want);
        instance.add_constraint(scope, space);
    }
    debug_assert!(instance.validate().is_ok());
    Ok(instance)
}

/// Erdos-Renyi style random graph: each pair independently an edge with
/// probability `edge_probability`.
pub fn gen_graph(config: &GeneratorConfig) -> SimpleGraph {
    let mut rng = SplitMix64::new(config.seed);
    let mut g = SimpleGraph::new(config.n);
    for u in 0..config.n {
        for v in u + 1..config.n {
            if rng.next_f64() < config.edge_probability {
                g.add_edge(u, v).expect("in range");
            }
        }
    }
    g
}

/// Random graph with a clique planted on `clique_size` random vertices.
/// Returns the graph and the planted vertices (sorted).
pub fn gen_planted_clique(config: &GeneratorConfig) -> Result<(SimpleGraph, Vec<usize>)> {
    if config.clique_size > config.n {
        return Err(Error::Invalid(format!(
            "clique size {} exceeds vertex count {}",
            config.clique_size, config.n
        )));
    }
    let mut g = gen_graph(config);
    let mut rng = SplitMix64::new(config.seed.wrapping_add(1));
    let mut members = rng.sample_distinct(config.n, config.clique_size);
    members.sort_unstable();
    for i in 0..members.len() {
        for j in i + 1..members.len() {
            g.add_edge(members[i], members[j]).expect("in range");
        }
    }
    Ok((g, members))
}

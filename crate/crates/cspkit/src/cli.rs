//! Command-line surface. Exit codes follow the SAT-solver convention:
//! 0 = satisfiable (or plain success), 20 = unsatisfiable, 1 = usage or
//! format error, 2 = resource budget exceeded.

use crate::bench::{
    run_experiment, schuler_leaf_bound, tuple_branch_bound_ceiling, GeneratorConfig, Procedure,
};
use crate::cnf::CnfFormula;
use crate::error::{Error, Result};
use crate::instance::CspInstance;
use crate::io::{parse_csp, parse_dimacs, parse_graph, write_csp, write_dimacs};
use crate::reductions::{
    bounded_tuple_branch, clique_to_2csp, cnf_to_csp, coloring3_to_2csp, csp_to_cnf, degree_reduce,
    merge_constraints, pad_instance, schuler_branch, DEFAULT_CLAUSE_WIDTH_LIMIT,
    DEFAULT_JOIN_BUDGET,
};
use crate::solvers::{
    backtracking_solve, brute_force_cnf, brute_force_csp, freuder_dp_solve, tuple_branching_solve,
    BranchStats, SolveResult, DEFAULT_ENUMERATION_BUDGET,
};
use crate::structure::{primal_graph, treewidth_heuristic, tw_params};
use clap::{Parser, Subcommand, ValueEnum};
use num_bigint::BigUint;
use serde::Serialize;
use std::ffi::OsString;
use std::fs;
use std::path::{Path, PathBuf};

pub const EXIT_SAT: i32 = 0;
pub const EXIT_UNSAT: i32 = 20;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_BUDGET: i32 = 2;

#[derive(Parser)]
#[command(
    name = "cspkit",
    version,
    about = "Constraint-satisfaction toolkit: solvers, reductions, and search-tree benchmarks"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Decide satisfiability of a .csp.json or .cnf file
    Solve {
        #[arg(long, value_enum)]
        solver: SolverKind,
        /// Cap on enumerated assignments (brute force, decomposition tables)
        #[arg(long)]
        budget: Option<u64>,
        file: PathBuf,
    },
    /// Transform an instance; single-output ops need -o, branching ops --emit-dir
    Reduce {
        #[arg(value_enum)]
        op: ReduceOp,
        /// Width target (schuler) or clique size (clique2csp)
        #[arg(long)]
        k: Option<usize>,
        /// Tuple threshold (boundtuples)
        #[arg(long)]
        d: Option<u32>,
        /// Number of merged groups (merge)
        #[arg(long)]
        groups: Option<usize>,
        /// Number of disjoint copies (pad)
        #[arg(long)]
        copies: Option<usize>,
        /// Directory for leaf files of branching reductions
        #[arg(long, value_name = "DIR")]
        emit_dir: Option<PathBuf>,
        input: PathBuf,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Print instance parameters: counts, size, arity, degree, tw, tw*
    Params { file: PathBuf },
    /// Seeded experiments checking measured tree sizes against bounds
    Bench {
        #[arg(value_enum)]
        procedure: BenchProc,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        m: usize,
        /// Reduction width target (schuler) / generated arity (CSP procedures)
        #[arg(long, default_value_t = 3)]
        k: usize,
        /// Tuple threshold (boundtuples) / domain size (tuplesolve)
        #[arg(long, default_value_t = 2)]
        d: u32,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 20)]
        trials: u64,
        /// Write the per-trial CSV here
        #[arg(long)]
        report: Option<PathBuf>,
        /// Max tuples per generated constraint (default d + 2)
        #[arg(long)]
        tuples: Option<usize>,
        /// Max generated clause width (default min(n, 2k))
        #[arg(long)]
        width: Option<usize>,
    },
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum SolverKind {
    Brute,
    Tuples,
    Backtrack,
    Treewidth,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum ReduceOp {
    Cnf2csp,
    Csp2cnf,
    Schuler,
    Boundtuples,
    Merge,
    Clique2csp,
    Color2csp,
    Degree,
    Pad,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum BenchProc {
    Schuler,
    Boundtuples,
    Tuplesolve,
}

enum Input {
    Csp(CspInstance),
    Cnf(CnfFormula),
}

fn load_input(path: &Path) -> Result<Input> {
    let text = fs::read_to_string(path)?;
    match path.extension().and_then(|e| e.to_str()) {
        Some("cnf") | Some("dimacs") => Ok(Input::Cnf(parse_dimacs(&text)?)),
        Some("json") => Ok(Input::Csp(parse_csp(&text)?)),
        _ => Err(Error::Invalid(format!(
            "cannot tell the format of {:?}: expected a .cnf/.dimacs or .json file",
            path
        ))),
    }
}

fn require_csp(path: &Path, what: &str) -> Result<CspInstance> {
    match load_input(path)? {
        Input::Csp(i) => Ok(i),
        Input::Cnf(_) => Err(Error::Invalid(format!(
            "{} expects a CSP instance (.json), got a CNF file",
            what
        ))),
    }
}

fn require_cnf(path: &Path, what: &str) -> Result<CnfFormula> {
    match load_input(path)? {
        Input::Cnf(f) => Ok(f),
        Input::Csp(_) => Err(Error::Invalid(format!(
            "{} expects a CNF formula (.cnf), got a CSP file",
            what
        ))),
    }
}

fn require_output(output: Option<PathBuf>, what: &str) -> Result<PathBuf> {
    output.ok_or_else(|| Error::Invalid(format!("{} needs -o <output file>", what)))
}

fn require_emit_dir(dir: Option<PathBuf>, what: &str) -> Result<PathBuf> {
    dir.ok_or_else(|| Error::Invalid(format!("{} needs --emit-dir <directory>", what)))
}

/// Parses the argument vector, runs the command, and returns the process
/// exit code. Never panics on user input.
pub fn cli_main<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => EXIT_USAGE,
            };
            let _ = e.print();
            return code;
        }
    };
    match run(cli) {
        Ok(code) => code,
        Err(err) => {
            eprintln!("error: {}", err);
            match err {
                Error::Budget(_) => EXIT_BUDGET,
                _ => EXIT_USAGE,
            }
        }
    }
}

fn run(cli: Cli) -> Result<i32> {
    match cli.command {
        Command::Solve {
            solver,
            budget,
            file,
        } => solve(solver, budget.unwrap_or(DEFAULT_ENUMERATION_BUDGET), &file),
        Command::Params { file } => params(&file),
        Command::Reduce {
            op,
            k,
            d,
            groups,
            copies,
            emit_dir,
            input,
            output,
        } => reduce(op, k, d, groups, copies, emit_dir, &input, output),
        Command::Bench {
            procedure,
            n,
            m,
            k,
            d,
            seed,
            trials,
            report,
            tuples,
            width,
        } => bench(procedure, n, m, k, d, seed, trials, report, tuples, width),
    }
}

fn print_solve_line(result: &SolveResult) {
    println!(
        "sat={} nodes={} leaves={} elapsed_ms={}",
        u8::from(result.satisfiable),
        result.stats.nodes,
        result.stats.leaves,
        result.stats.elapsed.as_millis()
    );
}

fn solve(solver: SolverKind, budget: u64, file: &Path) -> Result<i32> {
    let input = load_input(file)?;
    let result = match (&solver, input) {
        (SolverKind::Brute, Input::Cnf(f)) => brute_force_cnf(&f, budget)?,
        (SolverKind::Brute, Input::Csp(i)) => brute_force_csp(&i, budget)?,
        (_, input) => {
            let instance = match input {
                Input::Csp(i) => i,
                // Clause-per-constraint translation keeps the variable set,
                // so the satisfiable bit carries over.
                Input::Cnf(f) => cnf_to_csp(&f, DEFAULT_CLAUSE_WIDTH_LIMIT)?.instance,
            };
            match solver {
                SolverKind::Tuples => tuple_branching_solve(&instance, false),
                SolverKind::Backtrack => backtracking_solve(&instance),
                SolverKind::Treewidth => {
                    let (_, dec) = treewidth_heuristic(&primal_graph(&instance));
                    freuder_dp_solve(&instance, &dec, budget)?
                }
                SolverKind::Brute => unreachable!("handled above"),
            }
        }
    };
    print_solve_line(&result);
    Ok(if result.satisfiable {
        EXIT_SAT
    } else {
        EXIT_UNSAT
    })
}

fn params(file: &Path) -> Result<i32> {
    let instance = match load_input(file)? {
        Input::Csp(i) => i,
        Input::Cnf(f) => cnf_to_csp(&f, DEFAULT_CLAUSE_WIDTH_LIMIT)?.instance,
    };
    let p = instance.parameters();
    let tw = tw_params(&instance);
    println!(
        "vars={} dom={} cons={} tuples={} size={} max_arity={} max_degree={} tw={} tw_exact={} tw_star={} tw_star_exact={}",
        p.vars,
        p.dom,
        p.cons,
        p.tuples,
        p.size,
        p.max_arity,
        p.max_degree,
        tw.tw,
        u8::from(tw.tw_exact),
        tw.tw_star,
        u8::from(tw.tw_star_exact)
    );
    Ok(EXIT_SAT)
}

#[derive(Serialize)]
struct StreamStatsDoc {
    leaves: u64,
    nodes: u64,
    max_depth: usize,
    elapsed_ms: u128,
    bound: String,
}

fn write_stream_stats(dir: &Path, stats: &BranchStats, bound: &BigUint) -> Result<()> {
    let doc = StreamStatsDoc {
        leaves: stats.leaves,
        nodes: stats.nodes,
        max_depth: stats.max_depth,
        elapsed_ms: stats.elapsed.as_millis(),
        bound: bound.to_string(),
    };
    let mut text = serde_json::to_string_pretty(&doc).expect("document serializes");
    text.push('\n');
    fs::write(dir.join("stats.json"), text)?;
    Ok(())
}

fn print_stream_line(stats: &BranchStats) {
    println!(
        "leaves={} nodes={} max_depth={} elapsed_ms={}",
        stats.leaves,
        stats.nodes,
        stats.max_depth,
        stats.elapsed.as_millis()
    );
}

fn print_single_output_line(start: std::time::Instant) {
    println!(
        "leaves=1 nodes=1 elapsed_ms={}",
        start.elapsed().as_millis()
    );
}

#[allow(clippy::too_many_arguments)]
fn reduce(
    op: ReduceOp,
    k: Option<usize>,
    d: Option<u32>,
    groups: Option<usize>,
    copies: Option<usize>,
    emit_dir: Option<PathBuf>,
    input: &Path,
    output: Option<PathBuf>,
) -> Result<i32> {
    let started = std::time::Instant::now();
    match op {
        ReduceOp::Cnf2csp => {
            let formula = require_cnf(input, "cnf2csp")?;
            let out = require_output(output, "cnf2csp")?;
            let result = cnf_to_csp(&formula, DEFAULT_CLAUSE_WIDTH_LIMIT)?;
            fs::write(out, write_csp(&result.instance))?;
            print_single_output_line(started);
        }
        ReduceOp::Csp2cnf => {
            let instance = require_csp(input, "csp2cnf")?;
            let out = require_output(output, "csp2cnf")?;
            let max_arity = instance.parameters().max_arity.max(1);
            let result = csp_to_cnf(&instance, max_arity)?;
            fs::write(out, write_dimacs(&result.formula))?;
            print_single_output_line(started);
        }
        ReduceOp::Schuler => {
            let formula = require_cnf(input, "schuler")?;
            let k = k.ok_or_else(|| Error::Invalid("schuler needs --k <width>".into()))?;
            let dir = require_emit_dir(emit_dir, "schuler")?;
            fs::create_dir_all(&dir)?;
            let mut stream = schuler_branch(&formula, k)?;
            for (index, leaf) in stream.by_ref().enumerate() {
                let path = dir.join(format!("leaf_{:04}.cnf", index));
                fs::write(path, write_dimacs(&leaf.formula))?;
            }
            let bound = schuler_leaf_bound(
                formula.num_vars() as u64,
                formula.clauses().len() as u64,
                k as u64,
            );
            write_stream_stats(&dir, stream.stats(), &bound)?;
            print_stream_line(stream.stats());
        }
        ReduceOp::Boundtuples => {
            let instance = require_csp(input, "boundtuples")?;
            let d = d.ok_or_else(|| Error::Invalid("boundtuples needs --d <threshold>".into()))?;
            let dir = require_emit_dir(emit_dir, "boundtuples")?;
            fs::create_dir_all(&dir)?;
            let tuples = instance.parameters().tuples as u32;
            let mut stream = bounded_tuple_branch(&instance, d)?;
            for (index, leaf) in stream.by_ref().enumerate() {
                let path = dir.join(format!("leaf_{:04}.csp.json", index));
                fs::write(path, write_csp(&leaf.instance))?;
            }
            let bound = BigUint::from(2u32) * tuple_branch_bound_ceiling(tuples, d);
            write_stream_stats(&dir, stream.stats(), &bound)?;
            print_stream_line(stream.stats());
        }
        ReduceOp::Merge => {
            let instance = require_csp(input, "merge")?;
            let groups =
                groups.ok_or_else(|| Error::Invalid("merge needs --groups <count>".into()))?;
            let out = require_output(output, "merge")?;
            let result = merge_constraints(&instance, groups, DEFAULT_JOIN_BUDGET)?;
            fs::write(out, write_csp(&result.instance))?;
            print_single_output_line(started);
        }
        ReduceOp::Clique2csp => {
            let text = fs::read_to_string(input)?;
            let graph = parse_graph(&text)?;
            let k = k.ok_or_else(|| Error::Invalid("clique2csp needs --k <size>".into()))?;
            let out = require_output(output, "clique2csp")?;
            let result = clique_to_2csp(&graph, k)?;
            fs::write(out, write_csp(&result.instance))?;
            print_single_output_line(started);
        }
        ReduceOp::Color2csp => {
            let text = fs::read_to_string(input)?;
            let graph = parse_graph(&text)?;
            let out = require_output(output, "color2csp")?;
            let result = coloring3_to_2csp(&graph);
            fs::write(out, write_csp(&result.instance))?;
            print_single_output_line(started);
        }
        ReduceOp::Degree => {
            let instance = require_csp(input, "degree")?;
            let out = require_output(output, "degree")?;
            let result = degree_reduce(&instance)?;
            fs::write(out, write_csp(&result.instance))?;
            print_single_output_line(started);
        }
        ReduceOp::Pad => {
            let instance = require_csp(input, "pad")?;
            let copies =
                copies.ok_or_else(|| Error::Invalid("pad needs --copies <count>".into()))?;
            let out = require_output(output, "pad")?;
            let result = pad_instance(&instance, copies)?;
            fs::write(out, write_csp(&result.instance))?;
            print_single_output_line(started);
        }
    }
    Ok(EXIT_SAT)
}

#[allow(clippy::too_many_arguments)]
fn bench(
    procedure: BenchProc,
    n: usize,
    m: usize,
    k: usize,
    d: u32,
    seed: u64,
    trials: u64,
    report: Option<PathBuf>,
    tuples: Option<usize>,
    width: Option<usize>,
) -> Result<i32> {
    let config = match procedure {
        BenchProc::Schuler => GeneratorConfig {
            n,
            m,
            k: width.unwrap_or_else(|| n.min(2 * k.max(1))).max(1),
            domain_size: 2,
            tuples_per_constraint: 0,
            edge_probability: 0.0,
            clique_size: 0,
            seed,
        },
        BenchProc::Boundtuples => GeneratorConfig {
            n,
            m,
            k: k.min(n).max(1),
            domain_size: 2,
            tuples_per_constraint: tuples.unwrap_or(d as usize + 2),
            edge_probability: 0.0,
            clique_size: 0,
            seed,
        },
        BenchProc::Tuplesolve => GeneratorConfig {
            n,
            m,
            k: k.min(n).max(1),
            domain_size: (d as usize).max(2),
            tuples_per_constraint: tuples.unwrap_or(d as usize + 2),
            edge_probability: 0.0,
            clique_size: 0,
            seed,
        },
    };
    let proc = match procedure {
        BenchProc::Schuler => Procedure::Schuler { k },
        BenchProc::Boundtuples => Procedure::BoundedTuples { d },
        BenchProc::Tuplesolve => Procedure::TupleSolve,
    };
    let result = run_experiment(&config, proc, trials)?;
    print!("{}", result.to_lines());
    println!(
        "trials={} violations={} oracle_disagreements={}",
        trials,
        result.violations(),
        result.oracle_disagreements()
    );
    if let Some(path) = report {
        fs::write(path, result.to_csv())?;
    }
    Ok(
        if result.violations() == 0 && result.oracle_disagreements() == 0 {
            EXIT_SAT
        } else {
            EXIT_USAGE
        },
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn usage_errors_exit_one() {
        assert_eq!(cli_main(["cspkit", "no-such-command"]), 1);
        assert_eq!(
            cli_main(["cspkit", "solve", "--solver", "bogus", "x.json"]),
            1
        );
    }

    #[test]
    fn help_exits_zero() {
        assert_eq!(cli_main(["cspkit", "--help"]), 0);
    }

    #[test]
    fn missing_file_exits_one() {
        assert_eq!(
            cli_main(["cspkit", "solve", "--solver", "brute", "/nonexistent.json"]),
            1
        );
    }
}

//! Parsers and writers: CSP instances as JSON, CNF formulas as DIMACS,
//! graphs in DIMACS-like edge format.

mod csp_json;
mod dimacs;
mod graph_edges;

pub use csp_json::{parse_csp, write_csp};
pub use dimacs::{parse_dimacs, write_dimacs};
pub use graph_edges::{parse_graph, write_graph};

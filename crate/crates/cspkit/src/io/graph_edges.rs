//! Graphs in DIMACS-like edge format: a `p edge <vertices> <edges>` header
//! followed by `e <u> <v>` lines, 1-indexed.

use crate::error::{Error, Result};
use crate::structure::SimpleGraph;

fn parse_error(line: usize, message: impl Into<String>) -> Error {
    Error::Parse {
        line,
        column: 1,
        message: message.into(),
    }
}

pub fn parse_graph(text: &str) -> Result<SimpleGraph> {
    let mut graph: Option<SimpleGraph> = None;
    let mut expected_edges = 0usize;
    let mut edge_lines = 0usize;
    for (li, line) in text.lines().enumerate() {
        let line_no = li + 1;
        let trimmed = line.trim();
        if trimmed.is_empty() || trimmed.starts_with('c') {
            continue;
        }
        let parts: Vec<&str> = trimmed.split_whitespace().collect();
        match parts[0] {
            "p" => {
                if graph.is_some() {
                    return Err(parse_error(line_no, "duplicate header"));
                }
                if parts.len() != 4 || parts[1] != "edge" {
                    return Err(parse_error(line_no, "expected 'p edge <vertices> <edges>'"));
                }
                let v = parts[2]
                    .parse::<usize>()
                    .map_err(|_| parse_error(line_no, "bad vertex count"))?;
                expected_edges = parts[3]
                    .parse::<usize>()
                    .map_err(|_| parse_error(line_no, "bad edge count"))?;
                graph = Some(SimpleGraph::new(v));
            }
            "e" => {
                let Some(g) = graph.as_mut() else {
                    return Err(parse_error(line_no, "edge before 'p edge' header"));
                };
                if parts.len() != 3 {
                    return Err(parse_error(line_no, "expected 'e <u> <v>'"));
                }
                let u = parts[1]
                    .parse::<usize>()
                    .map_err(|_| parse_error(line_no, "bad endpoint"))?;
                let v = parts[2]
                    .parse::<usize>()
                    .map_err(|_| parse_error(line_no, "bad endpoint"))?;
                if u == 0 || v == 0 {
                    return Err(parse_error(line_no, "vertices are 1-indexed"));
                }
                g.add_edge(u - 1, v - 1)
                    .map_err(|e| parse_error(line_no, e.to_string()))?;
                edge_lines += 1;
            }
            other => {
                return Err(parse_error(
                    line_no,
                    format!("unknown line type {:?}", other),
                ));
            }
        }
    }
    let Some(graph) = graph else {
        return Err(parse_error(1, "missing 'p edge' header"));
    };
    if edge_lines != expected_edges {
        return Err(parse_error(
            text.lines().count(),
            format!(
                "header promised {} edges, found {}",
                expected_edges, edge_lines
            ),
        ));
    }
    Ok(graph)
}

pub fn write_graph(graph: &SimpleGraph) -> String {
    let mut out = format!("p edge {} {}\n", graph.num_vertices(), graph.num_edges());
    for (u, v) in graph.edges() {
        out.push_str(&format!("e {} {}\n", u + 1, v + 1));
    }
    out
}

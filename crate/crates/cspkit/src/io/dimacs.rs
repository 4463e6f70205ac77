//! DIMACS CNF reader and writer. Comments and blank lines are tolerated
//! anywhere; clauses are runs of nonzero literals terminated by 0 and may
//! span lines; the header clause count must match exactly.

use crate::cnf::{Clause, CnfFormula, Lit};
use crate::error::{Error, Result};

fn parse_error(line: usize, column: usize, message: impl Into<String>) -> Error {
    Error::Parse {
        line,
        column,
        message: message.into(),
    }
}

/// Whitespace-separated tokens of a line with their 1-based column.
fn tokens(line: &str) -> impl Iterator<Item = (usize, &str)> {
    let mut rest = line;
    let mut offset = 0usize;
    std::iter::from_fn(move || {
        let trimmed = rest.trim_start();
        if trimmed.is_empty() {
            return None;
        }
        offset += rest.len() - trimmed.len();
        let end = trimmed.find(char::is_whitespace).unwrap_or(trimmed.len());
        let token = &trimmed[..end];
        let column = offset + 1;
        offset += end;
        rest = &trimmed[end..];
        Some((column, token))
    })
}

pub fn parse_dimacs(text: &str) -> Result<CnfFormula> {
    let mut header: Option<(usize, usize)> = None;
    let mut clauses: Vec<Clause> = Vec::new();
    let mut current: Vec<Lit> = Vec::new();

    for (li, line) in text.lines().enumerate() {
        let line_no = li + 1;
        let trimmed = line.trim();
        if trimmed.is_empty() || trimmed.starts_with('c') || trimmed.starts_with('%') {
            continue;
        }
        if trimmed.starts_with('p') {
            if header.is_some() {
                return Err(parse_error(line_no, 1, "duplicate header"));
            }
            let parts: Vec<&str> = trimmed.split_whitespace().collect();
            if parts.len() != 4 || parts[1] != "cnf" {
                return Err(parse_error(
                    line_no,
                    1,
                    "expected header 'p cnf <vars> <clauses>'",
                ));
            }
            let n = parts[2]
                .parse::<usize>()
                .map_err(|_| parse_error(line_no, 1, "bad variable count"))?;
            let m = parts[3]
                .parse::<usize>()
                .map_err(|_| parse_error(line_no, 1, "bad clause count"))?;
            header = Some((n, m));
            continue;
        }
        let Some((n, m)) = header else {
            return Err(parse_error(line_no, 1, "clause data before 'p cnf' header"));
        };
        for (column, token) in tokens(line) {
            let value: i64 = token
                .parse()
                .map_err(|_| parse_error(line_no, column, format!("bad literal {:?}", token)))?;
            if value == 0 {
                if clauses.len() == m {
                    return Err(parse_error(
                        line_no,
                        column,
                        format!("more than {} clauses", m),
                    ));
                }
                let clause = Clause::new(std::mem::take(&mut current))
                    .map_err(|e| parse_error(line_no, column, e.to_string()))?;
                clauses.push(clause);
            } else {
                let var = value.unsigned_abs() as usize;
                if var > n {
                    return Err(parse_error(
                        line_no,
                        column,
                        format!("literal {} exceeds variable count {}", value, n),
                    ));
                }
                current.push(if value > 0 {
                    Lit::pos(var - 1)
                } else {
                    Lit::neg(var - 1)
                });
            }
        }
    }

    let Some((n, m)) = header else {
        return Err(parse_error(1, 1, "missing 'p cnf' header"));
    };
    if !current.is_empty() {
        return Err(parse_error(
            text.lines().count(),
            1,
            "unterminated clause at end of input",
        ));
    }
    if clauses.len() != m {
        return Err(parse_error(
            text.lines().count(),
            1,
            format!("header promised {} clauses, found {}", m, clauses.len()),
        ));
    }
    CnfFormula::new(n, clauses)
}

pub fn write_dimacs(formula: &CnfFormula) -> String {
    let mut out = format!("p cnf {} {}\n", formula.num_vars(), formula.clauses().len());
    for clause in formula.clauses() {
        for lit in clause.lits() {
            out.push_str(&lit.to_dimacs().to_string());
            out.push(' ');
        }
        out.push_str("0\n");
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn basic_clause() {
        let f = parse_dimacs("p cnf 2 1\n1 -2 0\n").unwrap();
        assert_eq!(f.num_vars(), 2);
        assert_eq!(f.clauses()[0].lits(), &[Lit::pos(0), Lit::neg(1)]);
    }

    #[test]
    fn comments_and_blank_lines_are_skipped() {
        let f = parse_dimacs("c intro\n\np cnf 1 1\nc mid\n1 0\nc end\n").unwrap();
        assert_eq!(f.clauses().len(), 1);
    }

    #[test]
    fn clause_count_mismatch_is_an_error() {
        assert!(parse_dimacs("p cnf 2 2\n1 0\n").is_err());
        assert!(parse_dimacs("p cnf 2 1\n1 0\n2 0\n").is_err());
    }

    #[test]
    fn unterminated_clause_is_an_error() {
        assert!(parse_dimacs("p cnf 2 1\n1 2\n").is_err());
    }

    #[test]
    fn out_of_range_literal_is_an_error() {
        let err = parse_dimacs("p cnf 1 1\n2 0\n").unwrap_err();
        assert!(err.to_string().contains("exceeds variable count"));
    }

    #[test]
    fn clauses_may_span_lines() {
        let f = parse_dimacs("p cnf 3 2\n1 2\n3 0 -1\n-2 0\n").unwrap();
        assert_eq!(f.clauses().len(), 2);
        assert_eq!(f.clauses()[0].width(), 3);
    }

    #[test]
    fn empty_clause_round_trips() {
        let f = parse_dimacs("p cnf 1 1\n0\n").unwrap();
        assert!(f.has_empty_clause());
        assert_eq!(write_dimacs(&f), "p cnf 1 1\n0\n");
    }

    #[test]
    fn write_then_parse_round_trips() {
        let f = parse_dimacs("p cnf 4 3\n1 -2 0\n3 4 -1 0\n-4 0\n").unwrap();
        let text = write_dimacs(&f);
        assert_eq!(parse_dimacs(&text).unwrap(), f);
    }
}

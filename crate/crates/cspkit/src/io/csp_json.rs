//! CSP instances as JSON documents: a list of variable names, the domain
//! size, and constraints given by named scopes and integer tuples.

use crate::error::{Error, Result};
use crate::instance::CspInstance;
use serde::{Deserialize, Serialize};
use std::collections::HashMap;

#[derive(Debug, Serialize, Deserialize)]
struct CspDoc {
    variables: Vec<String>,
    domain_size: usize,
    constraints: Vec<ConstraintDoc>,
}

#[derive(Debug, Serialize, Deserialize)]
struct ConstraintDoc {
    scope: Vec<String>,
    tuples: Vec<Vec<usize>>,
}

pub fn parse_csp(text: &str) -> Result<CspInstance> {
    let doc: CspDoc = serde_json::from_str(text).map_err(|e| Error::Parse {
        line: e.line(),
        column: e.column(),
        message: e.to_string(),
    })?;

    let mut index: HashMap<&str, usize> = HashMap::new();
    for (i, name) in doc.variables.iter().enumerate() {
        if index.insert(name.as_str(), i).is_some() {
            return Err(Error::Semantic(format!(
                "duplicate variable name {:?}",
                name
            )));
        }
    }

    let names = doc.variables.iter().map(|n| Some(n.clone())).collect();
    let mut instance = CspInstance::with_names(names, doc.domain_size);
    for (ci, c) in doc.constraints.iter().enumerate() {
        let scope = c
            .scope
            .iter()
            .map(|name| {
                index.get(name.as_str()).copied().ok_or_else(|| {
                    Error::Semantic(format!(
                        "constraint {} names unknown variable {:?}",
                        ci, name
                    ))
                })
            })
            .collect::<Result<Vec<usize>>>()?;
        instance.add_constraint(scope, c.tuples.clone());
    }
    instance
        .validate()
        .map_err(|v| Error::Semantic(v.to_string()))?;
    Ok(instance)
}

pub fn write_csp(instance: &CspInstance) -> String {
    let variables: Vec<String> = (0..instance.num_vars())
        .map(|v| {
            instance
                .name(v)
                .map(str::to_owned)
                .unwrap_or_else(|| format!("v{}", v))
        })
        .collect();
    let constraints = instance
        .constraints
        .iter()
        .map(|c| ConstraintDoc {
            scope: c.scope.iter().map(|&v| variables[v].clone()).collect(),
            tuples: c.relation().to_vec(),
        })
        .collect();
    let doc = CspDoc {
        variables,
        domain_size: instance.domain_size(),
        constraints,
    };
    let mut text = serde_json::to_string_pretty(&doc).expect("document serializes");
    text.push('\n');
    text
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn minimal_document() {
        let i = parse_csp(r#"{"variables":["x"],"domain_size":2,"constraints":[]}"#).unwrap();
        assert_eq!(i.num_vars(), 1);
        assert_eq!(i.domain_size(), 2);
        assert_eq!(i.name(0), Some("x"));
    }

    #[test]
    fn unknown_scope_variable_is_semantic_error() {
        let err = parse_csp(
            r#"{"variables":["x"],"domain_size":2,
                "constraints":[{"scope":["y"],"tuples":[[0]]}]}"#,
        )
        .unwrap_err();
        assert!(matches!(err, Error::Semantic(_)), "{err}");
    }

    #[test]
    fn out_of_domain_value_is_semantic_error() {
        let err = parse_csp(
            r#"{"variables":["x"],"domain_size":2,
                "constraints":[{"scope":["x"],"tuples":[[5]]}]}"#,
        )
        .unwrap_err();
        assert!(err.to_string().contains("out of domain"));
    }

    #[test]
    fn syntax_errors_carry_position() {
        match parse_csp("{\n  \"variables\": [,]\n}").unwrap_err() {
            Error::Parse { line, .. } => assert_eq!(line, 2),
            other => panic!("expected parse error, got {other}"),
        }
    }

    #[test]
    fn duplicate_names_rejected() {
        let err =
            parse_csp(r#"{"variables":["x","x"],"domain_size":2,"constraints":[]}"#).unwrap_err();
        assert!(err.to_string().contains("duplicate variable name"));
    }

    #[test]
    fn write_then_parse_round_trips() {
        let mut i = CspInstance::new(3, 3);
        i.set_name(0, "a");
        i.set_name(1, "b");
        i.set_name(2, "c");
        i.add_constraint(vec![2, 0], vec![vec![1, 2], vec![0, 0]]);
        let text = write_csp(&i);
        let back = parse_csp(&text).unwrap();
        assert_eq!(back, i);
        assert_eq!(write_csp(&back), text);
    }
}

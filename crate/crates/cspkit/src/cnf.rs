//! Propositional CNF formulas over indexed Boolean variables, kept
//! DIMACS-compatible: variables are `0..num_vars`, literals carry a sign.

use crate::error::{Error, Result};

/// A literal: a variable id with a polarity.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Lit {
    pub var: usize,
    pub positive: bool,
}

impl Lit {
    pub fn pos(var: usize) -> Self {
        Lit {
            var,
            positive: true,
        }
    }

    pub fn neg(var: usize) -> Self {
        Lit {
            var,
            positive: false,
        }
    }

    /// 1-based signed DIMACS encoding.
    pub fn to_dimacs(self) -> i64 {
        let v = (self.var + 1) as i64;
        if self.positive {
            v
        } else {
            -v
        }
    }

    pub fn satisfied_by(self, value: bool) -> bool {
        value == self.positive
    }
}

/// A clause: a set of literals with no duplicate and no complementary pair,
/// stored sorted by (variable, polarity). The empty clause is representable
/// and unsatisfiable.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Clause {
    lits: Vec<Lit>,
}

impl Clause {
    pub fn new(mut lits: Vec<Lit>) -> Result<Self> {
        lits.sort();
        lits.dedup();
        for w in lits.windows(2) {
            if w[0].var == w[1].var {
                return Err(Error::Invalid(format!(
                    "clause contains complementary literals on variable {}",
                    w[0].var
                )));
            }
        }
        Ok(Clause { lits })
    }

    pub fn lits(&self) -> &[Lit] {
        &self.lits
    }

    pub fn width(&self) -> usize {
        self.lits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.lits.is_empty()
    }

    pub fn vars(&self) -> impl Iterator<Item = usize> + '_ {
        self.lits.iter().map(|l| l.var)
    }

    pub fn evaluate(&self, assignment: &[bool]) -> bool {
        self.lits.iter().any(|l| l.satisfied_by(assignment[l.var]))
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CnfFormula {
    num_vars: usize,
    clauses: Vec<Clause>,
}

impl CnfFormula {
    pub fn new(num_vars: usize, clauses: Vec<Clause>) -> Result<Self> {
        for c in &clauses {
            if let Some(l) = c.lits().iter().find(|l| l.var >= num_vars) {
                return Err(Error::Invalid(format!(
                    "literal on variable {} exceeds variable range {}",
                    l.var, num_vars
                )));
            }
        }
        Ok(CnfFormula { num_vars, clauses })
    }

    pub fn num_vars(&self) -> usize {
        self.num_vars
    }

    pub fn clauses(&self) -> &[Clause] {
        &self.clauses
    }

    pub fn has_empty_clause(&self) -> bool {
        self.clauses.iter().any(|c| c.is_empty())
    }

    pub fn max_width(&self) -> usize {
        self.clauses.iter().map(|c| c.width()).max().unwrap_or(0)
    }

    pub fn evaluate(&self, assignment: &[bool]) -> bool {
        self.clauses.iter().all(|c| c.evaluate(assignment))
    }
}

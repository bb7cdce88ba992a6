//! CNF formulas in 1p1n form and their DIMACS serialization.

use crate::error::{Error, Result};
use std::collections::BTreeMap;
use std::fmt;

/// A literal over a 1-based variable.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Literal {
    pub var: u32,
    pub positive: bool,
}

impl Literal {
    pub fn pos(var: u32) -> Self {
        Literal {
            var,
            positive: true,
        }
    }

    pub fn neg(var: u32) -> Self {
        Literal {
            var,
            positive: false,
        }
    }

    pub fn negated(self) -> Self {
        Literal {
            var: self.var,
            positive: !self.positive,
        }
    }

    pub fn to_dimacs(self) -> i64 {
        if self.positive {
            self.var as i64
        } else {
            -(self.var as i64)
        }
    }
}

impl fmt::Display for Literal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_dimacs())
    }
}

/// Ladder variable label `(vertex, level)`.
pub type LadderName = (usize, i64);

/// CNF where every clause has at most one positive and at most one negative
/// literal.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct CnfFormula {
    variable_count: u32,
    clauses: Vec<Vec<Literal>>,
    names: BTreeMap<u32, LadderName>,
}

impl CnfFormula {
    pub fn new(variable_count: u32) -> Self {
        CnfFormula {
            variable_count,
            ..Default::default()
        }
    }

    pub fn variable_count(&self) -> u32 {
        self.variable_count
    }

    pub fn clauses(&self) -> &[Vec<Literal>] {
        &self.clauses
    }

    pub fn names(&self) -> &BTreeMap<u32, LadderName> {
        &self.names
    }

    pub fn name(&mut self, var: u32, label: LadderName) {
        self.names.insert(var, label);
    }

    /// Adds a clause, rejecting anything outside 1p1n form, empty clauses and
    /// repeated literals.
    pub fn add_clause(&mut self, clause: Vec<Literal>) -> Result<()> {
        if clause.is_empty() {
            return Err(Error::invalid("empty clause"));
        }
        if let Some(l) = clause
            .iter()
            .find(|l| l.var == 0 || l.var > self.variable_count)
        {
            return Err(Error::IndexOutOfRange {
                index: l.var as usize,
                limit: self.variable_count as usize,
            });
        }
        let positives = clause.iter().filter(|l| l.positive).count();
        if positives > 1 || clause.len() - positives > 1 {
            return Err(Error::invalid(format!(
                "clause {} is not in 1p1n form",
                clause
                    .iter()
                    .map(|l| l.to_string())
                    .collect::<Vec<_>>()
                    .join(" ")
            )));
        }
        if clause.len() == 2 && clause[0] == clause[1] {
            return Err(Error::invalid("repeated literal in clause"));
        }
        self.clauses.push(clause);
        Ok(())
    }

    /// `a => b`, i.e. `-a | b`.
    pub fn implies(&mut self, a: u32, b: u32) -> Result<()> {
        self.add_clause(vec![Literal::neg(a), Literal::pos(b)])
    }

    /// Every clause has at most one literal of each polarity.
    pub fn is_1p1n(&self) -> bool {
        self.clauses.iter().all(|c| {
            let p = c.iter().filter(|l| l.positive).count();
            !c.is_empty() && p <= 1 && c.len() - p <= 1
        })
    }

    /// DIMACS text: naming comments `c zeta v i varid`, the problem line, then
    /// one clause per line.
    pub fn to_dimacs(&self) -> String {
        let mut out = String::new();
        for (var, (v, i)) in &self.names {
            out.push_str(&format!("c zeta {v} {i} {var}\n"));
        }
        out.push_str(&format!(
            "p cnf {} {}\n",
            self.variable_count,
            self.clauses.len()
        ));
        for clause in &self.clauses {
            for l in clause {
                out.push_str(&l.to_string());
                out.push(' ');
            }
            out.push_str("0\n");
        }
        out
    }

    pub fn parse_dimacs(src: &str) -> Result<Self> {
        let mut formula: Option<CnfFormula> = None;
        let mut declared = 0usize;
        let mut names = BTreeMap::new();
        let mut current: Vec<Literal> = Vec::new();
        let mut last_pos = (1, 1);
        for (idx, raw) in src.lines().enumerate() {
            let line_no = idx + 1;
            let trimmed = raw.trim();
            if trimmed.is_empty() || trimmed.starts_with('%') {
                continue;
            }
            let perr = |column: usize, message: String| Error::Parse {
                line: line_no,
                column,
                message,
            };
            let col_of = |tok: &str| tok.as_ptr() as usize - raw.as_ptr() as usize + 1;
            if trimmed.starts_with('c') {
                let toks: Vec<&str> = trimmed.split_whitespace().collect();
                if toks.len() == 5 && toks[1] == "zeta" {
                    let v = toks[2]
                        .parse::<usize>()
                        .map_err(|_| perr(col_of(toks[2]), "invalid vertex".into()))?;
                    let i = toks[3]
                        .parse::<i64>()
                        .map_err(|_| perr(col_of(toks[3]), "invalid level".into()))?;
                    let var = toks[4]
                        .parse::<u32>()
                        .map_err(|_| perr(col_of(toks[4]), "invalid variable".into()))?;
                    names.insert(var, (v, i));
                }
                continue;
            }
            if trimmed.starts_with('p') {
                let toks: Vec<&str> = trimmed.split_whitespace().collect();
                if formula.is_some() {
                    return Err(perr(1, "duplicate problem line".into()));
                }
                if toks.len() != 4 || toks[1] != "cnf" {
                    return Err(perr(1, "expected `p cnf <vars> <clauses>`".into()));
                }
                let vars = toks[2]
                    .parse::<u32>()
                    .map_err(|_| perr(col_of(toks[2]), "invalid variable count".into()))?;
                declared = toks[3]
                    .parse::<usize>()
                    .map_err(|_| perr(col_of(toks[3]), "invalid clause count".into()))?;
                formula = Some(CnfFormula::new(vars));
                continue;
            }
            let Some(f) = formula.as_mut() else {
                return Err(perr(1, "clause before the problem line".into()));
            };
            for tok in trimmed.split_whitespace() {
                let col = col_of(tok);
                last_pos = (line_no, col);
                let x = tok
                    .parse::<i64>()
                    .map_err(|_| perr(col, format!("invalid literal {tok:?}")))?;
                if x == 0 {
                    let clause = std::mem::take(&mut current);
                    f.add_clause(clause).map_err(|e| perr(col, e.to_string()))?;
                } else {
                    let var = u32::try_from(x.unsigned_abs())
                        .map_err(|_| perr(col, "variable out of range".into()))?;
                    current.push(Literal {
                        var,
                        positive: x > 0,
                    });
                }
            }
        }
        let mut f = formula.ok_or_else(|| Error::Parse {
            line: 1,
            column: 1,
            message: "missing problem line".into(),
        })?;
        if !current.is_empty() {
            return Err(Error::Parse {
                line: last_pos.0,
                column: last_pos.1,
                message: "last clause is not terminated by 0".into(),
            });
        }
        if f.clauses.len() != declared {
            return Err(Error::Parse {
                line: last_pos.0,
                column: 1,
                message: format!(
                    "problem line declares {declared} clauses, found {}",
                    f.clauses.len()
                ),
            });
        }
        f.names = names;
        Ok(f)
    }
}

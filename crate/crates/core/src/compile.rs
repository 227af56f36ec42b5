//! DIMACS CNF input and compilation to smooth deterministic DNNF via an
//! ordered binary decision diagram.

use thiserror::Error;

use crate::circuit::{propagate_constants, smooth_with, Circuit, SmoothOptions};
use crate::lit::{Literal, Var};
use crate::obdd::{ObddError, ObddRef, ObddStore};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Cnf {
    pub variable_count: u32,
    pub clauses: Vec<Vec<Literal>>,
    /// Non-fatal remarks from parsing, such as dropped tautologies.
    pub notices: Vec<String>,
}

impl Cnf {
    pub fn new(variable_count: u32, clauses: Vec<Vec<Literal>>) -> Cnf {
        Cnf {
            variable_count,
            clauses,
            notices: Vec::new(),
        }
    }

    /// Whether `assignment` (indexed by variable) satisfies every clause.
    pub fn satisfied_by(&self, assignment: impl Fn(Var) -> bool) -> bool {
        self.clauses
            .iter()
            .all(|cl| cl.iter().any(|l| assignment(l.var()) == l.is_positive()))
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CompileError {
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("variable order: {0}")]
    Order(String),
    #[error(transparent)]
    Obdd(#[from] ObddError),
}

fn parse_err(line: usize, message: impl Into<String>) -> CompileError {
    CompileError::Parse {
        line,
        message: message.into(),
    }
}

/// Parses DIMACS CNF. Clauses may span lines and end with `0`; a line
/// starting with `%` ends the input. Repeated literals are merged and
/// tautological clauses dropped, each with a notice.
pub fn parse_dimacs(text: &str) -> Result<Cnf, CompileError> {
    let mut header: Option<(u32, usize, usize)> = None;
    let mut clauses = Vec::new();
    let mut notices = Vec::new();
    let mut current: Vec<Literal> = Vec::new();
    let mut clause_start = 0;
    let mut last_line = 0;
    let mut read = 0;
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        last_line = line;
        let t = raw.trim();
        if t.is_empty() || t == "c" || t.starts_with("c ") || t.starts_with("c\t") {
            continue;
        }
        if t.starts_with('%') {
            break;
        }
        if t.starts_with('p') {
            if header.is_some() {
                return Err(parse_err(line, "second problem line"));
            }
            let f: Vec<&str> = t.split_whitespace().collect();
            if f.len() != 4 || f[0] != "p" || f[1] != "cnf" {
                return Err(parse_err(line, "expected `p cnf <variables> <clauses>`"));
            }
            let vars = f[2]
                .parse()
                .map_err(|_| parse_err(line, format!("bad variable count `{}`", f[2])))?;
            let count = f[3]
                .parse()
                .map_err(|_| parse_err(line, format!("bad clause count `{}`", f[3])))?;
            header = Some((vars, count, line));
            continue;
        }
        let Some((vars, _, _)) = header else {
            return Err(parse_err(line, "clause before the `p cnf` line"));
        };
        for tok in t.split_whitespace() {
            let code: i64 = tok
                .parse()
                .map_err(|_| parse_err(line, format!("bad literal `{tok}`")))?;
            if code == 0 {
                let cl = std::mem::take(&mut current);
                read += 1;
                if let Some(cl) = normalize_clause(cl, read, clause_start, &mut notices) {
                    clauses.push(cl);
                }
                continue;
            }
            if code.unsigned_abs() > vars as u64 {
                return Err(parse_err(line, format!("literal {code} is outside variables 1..={vars}")));
            }
            if current.is_empty() {
                clause_start = line;
            }
            current.push(Literal::from_dimacs(code as i32).expect("nonzero"));
        }
    }
    let Some((variable_count, count, header_line)) = header else {
        return Err(parse_err(last_line.max(1), "missing `p cnf` line"));
    };
    if !current.is_empty() {
        return Err(parse_err(clause_start, "last clause is not terminated by 0"));
    }
    if read != count {
        return Err(parse_err(header_line, format!("header declares {count} clauses but {read} were given")));
    }
    Ok(Cnf {
        variable_count,
        clauses,
        notices,
    })
}

fn normalize_clause(
    mut cl: Vec<Literal>,
    index: usize,
    line: usize,
    notices: &mut Vec<String>,
) -> Option<Vec<Literal>> {
    let before = cl.len();
    cl.sort_by_key(|l| (l.var(), l.is_positive()));
    cl.dedup();
    if cl.len() < before {
        notices.push(format!("line {line}: repeated literals merged in clause {index}"));
    }
    if cl.windows(2).any(|w| w[0].var() == w[1].var()) {
        notices.push(format!("line {line}: clause {index} is a tautology and was dropped"));
        return None;
    }
    Some(cl)
}

/// Builds the diagram of `cnf` in `store` by conjoining clause diagrams
/// pairwise in a balanced tree.
pub fn compile_cnf_to_obdd(cnf: &Cnf, store: &mut ObddStore) -> Result<ObddRef, CompileError> {
    let mut layer = Vec::with_capacity(cnf.clauses.len());
    for cl in &cnf.clauses {
        let mut f = store.zero();
        for &l in cl {
            let lit = store.mk_literal(l)?;
            f = store.or(f, lit)?;
        }
        layer.push(f);
    }
    if layer.is_empty() {
        return Ok(store.one());
    }
    while layer.len() > 1 {
        let mut next = Vec::with_capacity(layer.len().div_ceil(2));
        for pair in layer.chunks(2) {
            next.push(match pair {
                [f, g] => store.and(*f, *g)?,
                [f] => *f,
                _ => unreachable!(),
            });
            if store.is_false(*next.last().expect("pushed"))? {
                return Ok(store.zero());
            }
        }
        layer = next;
    }
    Ok(layer[0])
}

/// Checks that `order` lists each variable of `1..=n` exactly once.
pub fn validate_order(order: &[Var], n: u32) -> Result<(), CompileError> {
    let mut seen = vec![false; n as usize + 1];
    for &v in order {
        if v == 0 || v > n {
            return Err(CompileError::Order(format!("variable {v} is outside 1..={n}")));
        }
        if std::mem::replace(&mut seen[v as usize], true) {
            return Err(CompileError::Order(format!("variable {v} appears twice")));
        }
    }
    if let Some(v) = (1..=n).find(|&v| !seen[v as usize]) {
        return Err(CompileError::Order(format!("variable {v} is missing")));
    }
    Ok(())
}

#[derive(Debug, Clone)]
pub struct Compiled {
    pub circuit: Circuit,
    /// Decision nodes of the intermediate diagram.
    pub diagram_size: usize,
}

/// Compiles `cnf` to an sd-DNNF over exactly `1..=variable_count`: the
/// diagram's decision nodes become deterministic ORs, constants are
/// propagated away and the result is smoothed, root included. `order`
/// defaults to ascending.
pub fn compile_cnf_to_sddnnf(cnf: &Cnf, order: Option<&[Var]>) -> Result<Compiled, CompileError> {
    let n = cnf.variable_count;
    let order: Vec<Var> = match order {
        Some(o) => {
            validate_order(o, n)?;
            o.to_vec()
        }
        None => (1..=n).collect(),
    };
    let mut store = ObddStore::new(order)?;
    let f = compile_cnf_to_obdd(cnf, &mut store)?;
    let diagram_size = store.decision_count(f)?;
    let raw = store.to_circuit(f)?.with_variable_count(n);
    let circuit = smooth_with(&propagate_constants(&raw), SmoothOptions { extend_root: true });
    Ok(Compiled {
        circuit,
        diagram_size,
    })
}

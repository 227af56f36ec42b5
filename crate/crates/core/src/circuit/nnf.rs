//! The c2d NNF interchange format.
//!
//! ```text
//! nnf <node-count> <edge-count> <variable-count>
//! L <signed-literal>
//! A <child-count> <child-ids...>
//! O <decision-var-or-0> <child-count> <child-ids...>
//! ```
//!
//! Node ids are 0-based line positions after the header, children precede
//! parents, and the last node is the root. `A 0` is true and `O 0 0` is false.

use std::fmt::Write as _;

use thiserror::Error;

use super::{Circuit, Node};
use crate::lit::Literal;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
#[error("line {line}: {message}")]
pub struct NnfError {
    pub line: usize,
    pub message: String,
}

fn err(line: usize, message: impl Into<String>) -> NnfError {
    NnfError {
        line,
        message: message.into(),
    }
}

fn parse_num<T: std::str::FromStr>(tok: Option<&str>, line: usize, what: &str) -> Result<T, NnfError> {
    let tok = tok.ok_or_else(|| err(line, format!("missing {what}")))?;
    tok.parse()
        .map_err(|_| err(line, format!("invalid {what} `{tok}`")))
}

/// Parses a c2d NNF file. Lines consisting of `c` or starting with `c ` are comments.
pub fn parse_nnf(text: &str) -> Result<Circuit, NnfError> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && *l != "c" && !l.starts_with("c "));

    let (header_line, header) = lines.next().ok_or_else(|| err(1, "missing `nnf` header"))?;
    let mut toks = header.split_whitespace();
    if toks.next() != Some("nnf") {
        return Err(err(header_line, "header must start with `nnf`"));
    }
    let node_count: usize = parse_num(toks.next(), header_line, "node count")?;
    let _edge_count: usize = parse_num(toks.next(), header_line, "edge count")?;
    let variable_count: u32 = parse_num(toks.next(), header_line, "variable count")?;
    if toks.next().is_some() {
        return Err(err(header_line, "trailing fields in header"));
    }
    if node_count == 0 {
        return Err(err(header_line, "a circuit needs at least one node"));
    }

    let mut nodes = Vec::with_capacity(node_count);
    let mut last_line = header_line;
    for (line, body) in lines {
        last_line = line;
        let id = nodes.len();
        if id == node_count {
            return Err(err(line, format!("more nodes than the {node_count} declared")));
        }
        let mut toks = body.split_whitespace();
        let kind = toks.next().unwrap_or_default();
        let children = |toks: &mut std::str::SplitWhitespace<'_>| -> Result<Vec<usize>, NnfError> {
            let k: usize = parse_num(toks.next(), line, "child count")?;
            let mut ch = Vec::with_capacity(k);
            for _ in 0..k {
                let c: usize = parse_num(toks.next(), line, "child id")?;
                if c >= id {
                    return Err(err(
                        line,
                        format!("child {c} of node {id} does not precede it"),
                    ));
                }
                ch.push(c);
            }
            Ok(ch)
        };
        let node = match kind {
            "L" => {
                let code: i32 = parse_num(toks.next(), line, "literal")?;
                let lit = Literal::from_dimacs(code).ok_or_else(|| err(line, "literal 0"))?;
                if lit.var() > variable_count {
                    return Err(err(
                        line,
                        format!(
                            "variable {} out of range 1..={variable_count}",
                            lit.var()
                        ),
                    ));
                }
                Node::Lit(lit)
            }
            "A" => {
                let ch = children(&mut toks)?;
                if ch.is_empty() {
                    Node::True
                } else {
                    Node::And(ch)
                }
            }
            "O" => {
                let hint: u32 = parse_num(toks.next(), line, "decision variable")?;
                if hint > variable_count {
                    return Err(err(
                        line,
                        format!("decision variable {hint} out of range 1..={variable_count}"),
                    ));
                }
                let ch = children(&mut toks)?;
                if ch.is_empty() {
                    Node::False
                } else {
                    Node::Or {
                        decision: (hint != 0).then_some(hint),
                        children: ch,
                    }
                }
            }
            other => return Err(err(line, format!("unknown node kind `{other}`"))),
        };
        if toks.next().is_some() {
            return Err(err(line, "trailing fields"));
        }
        nodes.push(node);
    }
    if nodes.len() != node_count {
        return Err(err(
            last_line + 1,
            format!(
                "header declares {node_count} nodes but the body has {}",
                nodes.len()
            ),
        ));
    }
    let root = nodes.len() - 1;
    Circuit::new(variable_count, nodes, root).map_err(|e| err(header_line, e.to_string()))
}

/// Serializes a circuit in c2d NNF format, one node per line.
pub fn write_nnf(c: &Circuit) -> String {
    let mut out = String::new();
    writeln!(
        out,
        "nnf {} {} {}",
        c.len(),
        c.edge_count(),
        c.variable_count()
    )
    .unwrap();
    for node in c.nodes() {
        match node {
            Node::True => out.push_str("A 0"),
            Node::False => out.push_str("O 0 0"),
            Node::Lit(l) => write!(out, "L {l}").unwrap(),
            Node::And(ch) => {
                write!(out, "A {}", ch.len()).unwrap();
                for c in ch {
                    write!(out, " {c}").unwrap();
                }
            }
            Node::Or { decision, children } => {
                write!(out, "O {} {}", decision.unwrap_or(0), children.len()).unwrap();
                for c in children {
                    write!(out, " {c}").unwrap();
                }
            }
        }
        out.push('\n');
    }
    out
}

//! NNF circuits: data model, c2d file format, structural properties and smoothing.

mod nnf;
mod props;
mod transform;
mod varset;

use std::collections::HashMap;

use thiserror::Error;

use crate::lit::{Literal, Var};

pub use nnf::{parse_nnf, write_nnf, NnfError};
pub use props::{
    check_decomposable, check_deterministic_semantic, check_deterministic_syntactic,
    check_smooth, classify_circuit, CircuitClass, DecomposabilityWitness, Determinism,
    DeterminismWitness, PropertyReport, SmoothnessWitness, DEFAULT_DETERMINISM_BUDGET,
};
pub use transform::{propagate_constants, smooth, smooth_with, SmoothOptions};
pub use varset::VarSet;

/// Index of a node within its circuit.
pub type NodeId = usize;

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Node {
    True,
    False,
    Lit(Literal),
    And(Vec<NodeId>),
    /// Disjunction; `decision` keeps the c2d decision-variable hint, which is
    /// never trusted for determinism.
    Or {
        decision: Option<Var>,
        children: Vec<NodeId>,
    },
}

impl Node {
    pub fn children(&self) -> &[NodeId] {
        match self {
            Node::And(ch) | Node::Or { children: ch, .. } => ch,
            _ => &[],
        }
    }

    pub fn is_gate(&self) -> bool {
        matches!(self, Node::And(_) | Node::Or { .. })
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CircuitError {
    #[error("node {node} references child {child}, which does not precede it")]
    ForwardReference { node: NodeId, child: NodeId },
    #[error("node {node} mentions variable {var}, outside 1..={variable_count}")]
    VariableOutOfRange {
        node: NodeId,
        var: Var,
        variable_count: u32,
    },
    #[error("root {root} is not a node index (circuit has {len} nodes)")]
    BadRoot { root: NodeId, len: usize },
}

/// A rooted DAG of constants, literals, conjunctions and disjunctions.
///
/// Nodes are stored in topological order (children before parents), are
/// structurally unique, and are all reachable from the root, which is the last
/// node. Every constructor canonicalizes into this form.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Circuit {
    variable_count: u32,
    nodes: Vec<Node>,
    root: NodeId,
}

impl Circuit {
    /// Validates and canonicalizes a node list. Duplicate nodes are merged and
    /// unreachable nodes dropped, which may renumber nodes. Empty conjunctions
    /// become `True`, empty disjunctions `False`.
    pub fn new(variable_count: u32, nodes: Vec<Node>, root: NodeId) -> Result<Circuit, CircuitError> {
        if root >= nodes.len() {
            return Err(CircuitError::BadRoot {
                root,
                len: nodes.len(),
            });
        }
        let mut builder = CircuitBuilder::new(variable_count);
        let mut map = Vec::with_capacity(nodes.len());
        for (id, node) in nodes.into_iter().enumerate() {
            for &child in node.children() {
                if child >= id {
                    return Err(CircuitError::ForwardReference { node: id, child });
                }
            }
            let new_id = match node {
                Node::True => builder.constant(true),
                Node::False => builder.constant(false),
                Node::Lit(l) => {
                    if l.var() > variable_count {
                        return Err(CircuitError::VariableOutOfRange {
                            node: id,
                            var: l.var(),
                            variable_count,
                        });
                    }
                    builder.literal(l)
                }
                Node::And(ch) => builder.and(ch.iter().map(|&c| map[c]).collect()),
                Node::Or { decision, children } => {
                    builder.or_with_hint(decision, children.iter().map(|&c| map[c]).collect())
                }
            };
            map.push(new_id);
        }
        Ok(builder.finish(map[root]))
    }

    pub fn constant(value: bool) -> Circuit {
        let mut b = CircuitBuilder::new(0);
        let root = b.constant(value);
        b.finish(root)
    }

    pub fn variable_count(&self) -> u32 {
        self.variable_count
    }

    /// Same circuit over a larger variable set.
    pub fn with_variable_count(&self, n: u32) -> Circuit {
        assert!(
            n >= self.max_var(),
            "variable count {n} is smaller than a mentioned variable"
        );
        Circuit {
            variable_count: n,
            ..self.clone()
        }
    }

    pub fn nodes(&self) -> &[Node] {
        &self.nodes
    }

    pub fn node(&self, id: NodeId) -> &Node {
        &self.nodes[id]
    }

    pub fn root(&self) -> NodeId {
        self.root
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn edge_count(&self) -> usize {
        self.nodes.iter().map(|n| n.children().len()).sum()
    }

    pub fn max_var(&self) -> Var {
        self.nodes
            .iter()
            .filter_map(|n| match n {
                Node::Lit(l) => Some(l.var()),
                _ => None,
            })
            .max()
            .unwrap_or(0)
    }

    pub fn has_negative_literals(&self) -> bool {
        self.nodes
            .iter()
            .any(|n| matches!(n, Node::Lit(l) if !l.is_positive()))
    }

    pub fn has_false_nodes(&self) -> bool {
        self.nodes.iter().any(|n| matches!(n, Node::False))
    }

    /// Variables mentioned by the subcircuit below each node.
    pub fn mentioned_vars(&self) -> Vec<VarSet> {
        let mut out: Vec<VarSet> = Vec::with_capacity(self.nodes.len());
        for node in &self.nodes {
            let set = match node {
                Node::True | Node::False => VarSet::new(),
                Node::Lit(l) => VarSet::singleton(l.var()),
                Node::And(ch) | Node::Or { children: ch, .. } => {
                    let mut s = VarSet::new();
                    for &c in ch {
                        s.union_with(&out[c]);
                    }
                    s
                }
            };
            out.push(set);
        }
        out
    }

    /// Boolean value of the circuit under a total assignment.
    pub fn satisfied_by(&self, assignment: impl Fn(Var) -> bool) -> bool {
        let mut vals: Vec<bool> = Vec::with_capacity(self.nodes.len());
        for node in &self.nodes {
            let v = match node {
                Node::True => true,
                Node::False => false,
                Node::Lit(l) => assignment(l.var()) == l.is_positive(),
                Node::And(ch) => ch.iter().all(|&c| vals[c]),
                Node::Or { children, .. } => children.iter().any(|&c| vals[c]),
            };
            vals.push(v);
        }
        vals[self.root]
    }
}

/// Incrementally builds a circuit with structural hashing: adding a node equal
/// to an existing one returns the existing id.
#[derive(Debug, Clone)]
pub struct CircuitBuilder {
    variable_count: u32,
    nodes: Vec<Node>,
    index: HashMap<Node, NodeId>,
}

impl CircuitBuilder {
    pub fn new(variable_count: u32) -> CircuitBuilder {
        CircuitBuilder {
            variable_count,
            nodes: Vec::new(),
            index: HashMap::new(),
        }
    }

    fn push(&mut self, node: Node) -> NodeId {
        if let Some(&id) = self.index.get(&node) {
            return id;
        }
        for &c in node.children() {
            assert!(c < self.nodes.len(), "child {c} does not exist yet");
        }
        if let Node::Lit(l) = &node {
            self.variable_count = self.variable_count.max(l.var());
        }
        let id = self.nodes.len();
        self.nodes.push(node.clone());
        self.index.insert(node, id);
        id
    }

    pub fn constant(&mut self, value: bool) -> NodeId {
        self.push(if value { Node::True } else { Node::False })
    }

    pub fn literal(&mut self, lit: Literal) -> NodeId {
        self.push(Node::Lit(lit))
    }

    pub fn and(&mut self, children: Vec<NodeId>) -> NodeId {
        if children.is_empty() {
            return self.constant(true);
        }
        self.push(Node::And(children))
    }

    pub fn or(&mut self, children: Vec<NodeId>) -> NodeId {
        self.or_with_hint(None, children)
    }

    pub fn or_with_hint(&mut self, decision: Option<Var>, children: Vec<NodeId>) -> NodeId {
        if children.is_empty() {
            return self.constant(false);
        }
        self.push(Node::Or { decision, children })
    }

    /// Binary disjunction tagged with its decision variable.
    pub fn decision(&mut self, var: Var, low: NodeId, high: NodeId) -> NodeId {
        self.or_with_hint(Some(var), vec![low, high])
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    /// Keeps the nodes reachable from `root`, in creation order, with `root` last.
    pub fn finish(self, root: NodeId) -> Circuit {
        let mut reachable = vec![false; self.nodes.len()];
        reachable[root] = true;
        for id in (0..self.nodes.len()).rev() {
            if reachable[id] {
                for &c in self.nodes[id].children() {
                    reachable[c] = true;
                }
            }
        }
        let mut map = vec![usize::MAX; self.nodes.len()];
        let mut nodes = Vec::new();
        for (id, node) in self.nodes.into_iter().enumerate() {
            if !reachable[id] {
                continue;
            }
            let node = match node {
                Node::And(ch) => Node::And(ch.iter().map(|&c| map[c]).collect()),
                Node::Or { decision, children } => Node::Or {
                    decision,
                    children: children.iter().map(|&c| map[c]).collect(),
                },
                leaf => leaf,
            };
            map[id] = nodes.len();
            nodes.push(node);
        }
        // Every kept node is a descendant of the root, so the root comes last.
        let root = map[root];
        debug_assert_eq!(root, nodes.len() - 1);
        Circuit {
            variable_count: self.variable_count,
            nodes,
            root,
        }
    }
}

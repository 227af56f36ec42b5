//! Decomposability, determinism and smoothness, with witnesses.

use std::collections::HashMap;
use std::fmt;

use serde::Serialize;

use super::{Circuit, Node, NodeId, VarSet};
use crate::lit::{Literal, Var};
use crate::obdd::{ObddRef, ObddStore};

/// Largest number of variables a pairwise determinism test may involve.
pub const DEFAULT_DETERMINISM_BUDGET: usize = 24;

/// Which of the three structural properties a circuit has (or must have).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub struct CircuitClass {
    pub decomposable: bool,
    pub deterministic: bool,
    pub smooth: bool,
}

impl CircuitClass {
    pub const NNF: CircuitClass = CircuitClass::new(false, false, false);
    pub const SD_DNNF: CircuitClass = CircuitClass::new(true, true, true);

    pub const fn new(decomposable: bool, deterministic: bool, smooth: bool) -> CircuitClass {
        CircuitClass {
            decomposable,
            deterministic,
            smooth,
        }
    }

    /// True when `self` has every property `required` asks for.
    pub fn satisfies(self, required: CircuitClass) -> bool {
        (self.decomposable || !required.decomposable)
            && (self.deterministic || !required.deterministic)
            && (self.smooth || !required.smooth)
    }

    /// Properties of `required` that `self` lacks, by short name.
    pub fn missing(self, required: CircuitClass) -> Vec<&'static str> {
        let mut out = Vec::new();
        if required.decomposable && !self.decomposable {
            out.push("decomposability");
        }
        if required.deterministic && !self.deterministic {
            out.push("determinism");
        }
        if required.smooth && !self.smooth {
            out.push("smoothness");
        }
        out
    }

    /// One of NNF, s-NNF, d-NNF, sd-NNF, DNNF, s-DNNF, d-DNNF, sd-DNNF.
    pub fn name(self) -> &'static str {
        match (self.smooth, self.deterministic, self.decomposable) {
            (false, false, false) => "NNF",
            (true, false, false) => "s-NNF",
            (false, true, false) => "d-NNF",
            (true, true, false) => "sd-NNF",
            (false, false, true) => "DNNF",
            (true, false, true) => "s-DNNF",
            (false, true, true) => "d-DNNF",
            (true, true, true) => "sd-DNNF",
        }
    }

    pub fn from_name(name: &str) -> Option<CircuitClass> {
        let all = [false, true];
        for d in all {
            for det in all {
                for s in all {
                    let c = CircuitClass::new(d, det, s);
                    if c.name() == name {
                        return Some(c);
                    }
                }
            }
        }
        None
    }
}

impl fmt::Display for CircuitClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// An AND node whose children `left` and `right` both mention `var`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DecomposabilityWitness {
    pub node: NodeId,
    pub var: Var,
    pub left: NodeId,
    pub right: NodeId,
}

/// An OR node whose children `left` and `right` mention different variables;
/// `var` is mentioned by one but not the other.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SmoothnessWitness {
    pub node: NodeId,
    pub left: NodeId,
    pub right: NodeId,
    pub var: Var,
}

/// An OR node whose children `left` and `right` share `model`. Variables the
/// two children do not depend on are left out of the model.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DeterminismWitness {
    pub node: NodeId,
    pub left: NodeId,
    pub right: NodeId,
    pub model: Vec<Literal>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub enum Determinism {
    Holds,
    Fails(DeterminismWitness),
    /// Some child pair mentions more variables than the budget allows and no
    /// violation was found among the pairs that could be checked.
    Undecided { node: NodeId, needed: usize, budget: usize },
}

/// True iff every AND node's children mention pairwise disjoint variable sets.
pub fn check_decomposable(c: &Circuit) -> Result<(), DecomposabilityWitness> {
    let vars = c.mentioned_vars();
    check_decomposable_with(c, &vars)
}

fn check_decomposable_with(c: &Circuit, vars: &[VarSet]) -> Result<(), DecomposabilityWitness> {
    for (id, node) in c.nodes().iter().enumerate() {
        if let Node::And(ch) = node {
            for (i, &a) in ch.iter().enumerate() {
                for &b in &ch[i + 1..] {
                    if let Some(var) = vars[a].first_common(&vars[b]) {
                        return Err(DecomposabilityWitness {
                            node: id,
                            var,
                            left: a,
                            right: b,
                        });
                    }
                }
            }
        }
    }
    Ok(())
}

/// True iff all children of every OR node mention the same variables.
pub fn check_smooth(c: &Circuit) -> Result<(), SmoothnessWitness> {
    let vars = c.mentioned_vars();
    check_smooth_with(c, &vars)
}

fn check_smooth_with(c: &Circuit, vars: &[VarSet]) -> Result<(), SmoothnessWitness> {
    for (id, node) in c.nodes().iter().enumerate() {
        if let Node::Or { children, .. } = node {
            let first = children[0];
            for &other in &children[1..] {
                if let Some(var) = vars[first].first_difference(&vars[other]) {
                    return Err(SmoothnessWitness {
                        node: id,
                        left: first,
                        right: other,
                        var,
                    });
                }
            }
        }
    }
    Ok(())
}

fn contains_literal(c: &Circuit, node: NodeId, lit: Literal) -> bool {
    match c.node(node) {
        Node::Lit(l) => *l == lit,
        Node::And(ch) => ch.iter().any(|&x| c.node(x) == &Node::Lit(lit)),
        _ => false,
    }
}

fn top_literals(c: &Circuit, node: NodeId) -> Vec<Literal> {
    match c.node(node) {
        Node::Lit(l) => vec![*l],
        Node::And(ch) => ch
            .iter()
            .filter_map(|&x| match c.node(x) {
                Node::Lit(l) => Some(*l),
                _ => None,
            })
            .collect(),
        _ => Vec::new(),
    }
}

/// Structural sufficient condition for determinism: every OR node is a
/// decision node, i.e. has two children that respectively contain `v` and `¬v`
/// at top level (directly or as a child of a conjunction). Single-child ORs
/// are accepted. Sound but incomplete.
pub fn check_deterministic_syntactic(c: &Circuit) -> bool {
    c.nodes().iter().all(|node| match node {
        Node::Or { children, .. } => match children.as_slice() {
            [_] => true,
            [a, b] => top_literals(c, *a)
                .into_iter()
                .any(|l| contains_literal(c, *b, l.negated())),
            _ => false,
        },
        _ => true,
    })
}

/// Decides determinism by conjoining each pair of OR children as diagrams and
/// testing the conjunction for emptiness. Pairs mentioning more than `budget`
/// variables are skipped; if any were skipped and no violation was found the
/// result is [`Determinism::Undecided`].
pub fn check_deterministic_semantic(c: &Circuit, budget: usize) -> Determinism {
    let vars = c.mentioned_vars();
    check_deterministic_semantic_with(c, &vars, budget)
}

fn check_deterministic_semantic_with(c: &Circuit, vars: &[VarSet], budget: usize) -> Determinism {
    let mut store = ObddStore::ascending(c.variable_count().max(c.max_var()));
    let mut memo: HashMap<NodeId, ObddRef> = HashMap::new();
    let mut undecided = None;
    for (id, node) in c.nodes().iter().enumerate() {
        let Node::Or { children, .. } = node else {
            continue;
        };
        for (i, &a) in children.iter().enumerate() {
            for &b in &children[i + 1..] {
                let mut pair = vars[a].clone();
                pair.union_with(&vars[b]);
                let needed = pair.len();
                if needed > budget {
                    undecided.get_or_insert(Determinism::Undecided {
                        node: id,
                        needed,
                        budget,
                    });
                    continue;
                }
                let fa = diagram_of(c, a, &mut store, &mut memo);
                let fb = diagram_of(c, b, &mut store, &mut memo);
                let both = store.and(fa, fb).expect("same store");
                if let Some(model) = store.satisfying_assignment(both).expect("same store") {
                    return Determinism::Fails(DeterminismWitness {
                        node: id,
                        left: a,
                        right: b,
                        model,
                    });
                }
            }
        }
    }
    undecided.unwrap_or(Determinism::Holds)
}

fn diagram_of(
    c: &Circuit,
    node: NodeId,
    store: &mut ObddStore,
    memo: &mut HashMap<NodeId, ObddRef>,
) -> ObddRef {
    if let Some(&f) = memo.get(&node) {
        return f;
    }
    // Children precede parents, so an explicit post-order over the subgraph
    // only needs the ids below `node`.
    let mut stack = vec![(node, false)];
    while let Some((n, expanded)) = stack.pop() {
        if memo.contains_key(&n) {
            continue;
        }
        if !expanded {
            stack.push((n, true));
            for &ch in c.node(n).children() {
                stack.push((ch, false));
            }
            continue;
        }
        let f = match c.node(n) {
            Node::True => store.one(),
            Node::False => store.zero(),
            Node::Lit(l) => store.mk_literal(*l).expect("variable in order"),
            Node::And(ch) => ch.iter().fold(store.one(), |acc, x| {
                store.and(acc, memo[x]).expect("same store")
            }),
            Node::Or { children, .. } => children.iter().fold(store.zero(), |acc, x| {
                store.or(acc, memo[x]).expect("same store")
            }),
        };
        memo.insert(n, f);
    }
    memo[&node]
}

/// All three property checks together with the resulting class.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PropertyReport {
    pub decomposable: Option<DecomposabilityWitness>,
    pub determinism: Determinism,
    /// Outcome of the structural decision-node test, consulted when the
    /// semantic test is undecided.
    pub syntactically_deterministic: bool,
    pub smooth: Option<SmoothnessWitness>,
    pub class: CircuitClass,
    /// True when determinism could not be established either way, so the
    /// class is a lower bound.
    pub class_is_lower_bound: bool,
}

impl PropertyReport {
    pub fn is_decomposable(&self) -> bool {
        self.decomposable.is_none()
    }

    pub fn is_smooth(&self) -> bool {
        self.smooth.is_none()
    }

    pub fn is_deterministic(&self) -> Option<bool> {
        match self.determinism {
            Determinism::Holds => Some(true),
            Determinism::Fails(_) => Some(false),
            Determinism::Undecided { .. } if self.syntactically_deterministic => Some(true),
            Determinism::Undecided { .. } => None,
        }
    }

    /// Class name, prefixed with "at least" when determinism is unknown.
    pub fn class_label(&self) -> String {
        if self.class_is_lower_bound {
            format!("at least {}", self.class.name())
        } else {
            self.class.name().to_string()
        }
    }
}

/// Runs all three checks. When the semantic determinism test is undecided the
/// structural test is used instead; if that fails too, the reported class is a
/// lower bound.
pub fn classify_circuit(c: &Circuit, budget: usize) -> PropertyReport {
    let vars = c.mentioned_vars();
    let decomposable = check_decomposable_with(c, &vars).err();
    let smooth = check_smooth_with(c, &vars).err();
    let determinism = check_deterministic_semantic_with(c, &vars, budget);
    let syntactically_deterministic = check_deterministic_syntactic(c);
    let (deterministic, lower_bound) = match &determinism {
        Determinism::Holds => (true, false),
        Determinism::Fails(_) => (false, false),
        Determinism::Undecided { .. } => (syntactically_deterministic, !syntactically_deterministic),
    };
    PropertyReport {
        class: CircuitClass::new(decomposable.is_none(), deterministic, smooth.is_none()),
        decomposable,
        determinism,
        syntactically_deterministic,
        smooth,
        class_is_lower_bound: lower_bound,
    }
}

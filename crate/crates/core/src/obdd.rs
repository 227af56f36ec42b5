//! Reduced ordered binary decision diagrams with hash-consing.
//!
//! A [`ObddStore`] owns every node it creates. Nodes are reduced (no node has
//! `low == high`) and unique (no duplicate `(var, low, high)` triples), so two
//! diagrams built in the same store are equivalent iff their root ids match.
//! Negation is a recursive operation with its own cache; there are no
//! complement edges.

use std::collections::HashMap;
use std::fmt;
use std::sync::atomic::{AtomicU64, Ordering};
use std::sync::{Arc, Mutex};

use thiserror::Error;

use crate::circuit::{Circuit, CircuitBuilder, NodeId};
use crate::lit::{Literal, Var};

/// Index of a node inside its store.
pub type DiagramId = u32;

const FALSE_ID: DiagramId = 0;
const TRUE_ID: DiagramId = 1;
const TERMINAL_LEVEL: u32 = u32::MAX;

static NEXT_STORE_ID: AtomicU64 = AtomicU64::new(1);

/// A store shared between a semiring descriptor and its callers.
pub type SharedStore = Arc<Mutex<ObddStore>>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ObddError {
    #[error("variable {0} is not in the diagram variable order")]
    UnknownVariable(Var),
    #[error("variable {0} appears twice in the variable order")]
    DuplicateInOrder(Var),
    #[error("variable index 0 is not allowed in a variable order")]
    ZeroVariable,
    #[error("diagram handle belongs to store {found}, not to store {expected}")]
    ForeignHandle { expected: u64, found: u64 },
    #[error("diagram store exceeded its limit of {0} nodes")]
    NodeLimit(usize),
}

/// A handle to a diagram: store identity plus root node.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct ObddRef {
    store: u64,
    node: DiagramId,
}

impl ObddRef {
    pub fn node(self) -> DiagramId {
        self.node
    }

    pub fn store_id(self) -> u64 {
        self.store
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum BoolOp {
    And,
    Or,
}

#[derive(Debug, Clone, Copy)]
struct Node {
    level: u32,
    low: DiagramId,
    high: DiagramId,
}

/// A decision node as seen from outside the store.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Decision {
    pub var: Var,
    pub low: ObddRef,
    pub high: ObddRef,
}

pub struct ObddStore {
    id: u64,
    order: Vec<Var>,
    level_of: HashMap<Var, u32>,
    nodes: Vec<Node>,
    unique: HashMap<(u32, DiagramId, DiagramId), DiagramId>,
    apply_cache: HashMap<(BoolOp, DiagramId, DiagramId), DiagramId>,
    negate_cache: HashMap<DiagramId, DiagramId>,
    node_limit: Option<usize>,
}

impl fmt::Debug for ObddStore {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("ObddStore")
            .field("id", &self.id)
            .field("order", &self.order)
            .field("nodes", &self.nodes.len())
            .finish()
    }
}

impl ObddStore {
    /// Creates a store with the given variable order (first = top of the diagram).
    pub fn new(order: Vec<Var>) -> Result<ObddStore, ObddError> {
        let mut level_of = HashMap::with_capacity(order.len());
        for (i, &v) in order.iter().enumerate() {
            if v == 0 {
                return Err(ObddError::ZeroVariable);
            }
            if level_of.insert(v, i as u32).is_some() {
                return Err(ObddError::DuplicateInOrder(v));
            }
        }
        let terminal = |b: bool| Node {
            level: TERMINAL_LEVEL,
            low: b as DiagramId,
            high: b as DiagramId,
        };
        Ok(ObddStore {
            id: NEXT_STORE_ID.fetch_add(1, Ordering::Relaxed),
            order,
            level_of,
            nodes: vec![terminal(false), terminal(true)],
            unique: HashMap::new(),
            apply_cache: HashMap::new(),
            negate_cache: HashMap::new(),
            node_limit: None,
        })
    }

    /// Store over variables `1..=n` in ascending order.
    pub fn ascending(n: u32) -> ObddStore {
        ObddStore::new((1..=n).collect()).expect("ascending order is valid")
    }

    pub fn shared(self) -> SharedStore {
        Arc::new(Mutex::new(self))
    }

    /// Caps the number of nodes; operations that would exceed it fail with
    /// [`ObddError::NodeLimit`].
    pub fn set_node_limit(&mut self, limit: Option<usize>) {
        self.node_limit = limit;
    }

    pub fn id(&self) -> u64 {
        self.id
    }

    pub fn order(&self) -> &[Var] {
        &self.order
    }

    pub fn contains_var(&self, v: Var) -> bool {
        self.level_of.contains_key(&v)
    }

    /// Total nodes in the store, terminals included.
    pub fn node_total(&self) -> usize {
        self.nodes.len()
    }

    fn handle(&self, node: DiagramId) -> ObddRef {
        ObddRef {
            store: self.id,
            node,
        }
    }

    fn check(&self, f: ObddRef) -> Result<DiagramId, ObddError> {
        if f.store == self.id {
            Ok(f.node)
        } else {
            Err(ObddError::ForeignHandle {
                expected: self.id,
                found: f.store,
            })
        }
    }

    pub fn constant(&self, value: bool) -> ObddRef {
        self.handle(if value { TRUE_ID } else { FALSE_ID })
    }

    pub fn zero(&self) -> ObddRef {
        self.constant(false)
    }

    pub fn one(&self) -> ObddRef {
        self.constant(true)
    }

    fn mk(&mut self, level: u32, low: DiagramId, high: DiagramId) -> Result<DiagramId, ObddError> {
        if low == high {
            return Ok(low);
        }
        if let Some(&id) = self.unique.get(&(level, low, high)) {
            return Ok(id);
        }
        if let Some(limit) = self.node_limit {
            if self.nodes.len() >= limit {
                return Err(ObddError::NodeLimit(limit));
            }
        }
        let id = self.nodes.len() as DiagramId;
        self.nodes.push(Node { level, low, high });
        self.unique.insert((level, low, high), id);
        Ok(id)
    }

    /// The diagram of the single variable `v`.
    pub fn mk_var(&mut self, v: Var) -> Result<ObddRef, ObddError> {
        self.mk_literal(Literal::positive(v))
    }

    pub fn mk_literal(&mut self, lit: Literal) -> Result<ObddRef, ObddError> {
        let level = *self
            .level_of
            .get(&lit.var())
            .ok_or(ObddError::UnknownVariable(lit.var()))?;
        let (low, high) = if lit.is_positive() {
            (FALSE_ID, TRUE_ID)
        } else {
            (TRUE_ID, FALSE_ID)
        };
        let id = self.mk(level, low, high)?;
        Ok(self.handle(id))
    }

    pub fn apply(&mut self, op: BoolOp, f: ObddRef, g: ObddRef) -> Result<ObddRef, ObddError> {
        let (a, b) = (self.check(f)?, self.check(g)?);
        let id = self.apply_rec(op, a, b)?;
        Ok(self.handle(id))
    }

    pub fn and(&mut self, f: ObddRef, g: ObddRef) -> Result<ObddRef, ObddError> {
        self.apply(BoolOp::And, f, g)
    }

    pub fn or(&mut self, f: ObddRef, g: ObddRef) -> Result<ObddRef, ObddError> {
        self.apply(BoolOp::Or, f, g)
    }

    fn apply_rec(&mut self, op: BoolOp, a: DiagramId, b: DiagramId) -> Result<DiagramId, ObddError> {
        match op {
            BoolOp::And => {
                if a == FALSE_ID || b == FALSE_ID {
                    return Ok(FALSE_ID);
                }
                if a == TRUE_ID {
                    return Ok(b);
                }
                if b == TRUE_ID || a == b {
                    return Ok(a);
                }
            }
            BoolOp::Or => {
                if a == TRUE_ID || b == TRUE_ID {
                    return Ok(TRUE_ID);
                }
                if a == FALSE_ID {
                    return Ok(b);
                }
                if b == FALSE_ID || a == b {
                    return Ok(a);
                }
            }
        }
        let key = (op, a.min(b), a.max(b));
        if let Some(&r) = self.apply_cache.get(&key) {
            return Ok(r);
        }
        let (na, nb) = (self.nodes[a as usize], self.nodes[b as usize]);
        let level = na.level.min(nb.level);
        let (a_lo, a_hi) = if na.level == level { (na.low, na.high) } else { (a, a) };
        let (b_lo, b_hi) = if nb.level == level { (nb.low, nb.high) } else { (b, b) };
        let low = self.apply_rec(op, a_lo, b_lo)?;
        let high = self.apply_rec(op, a_hi, b_hi)?;
        let r = self.mk(level, low, high)?;
        self.apply_cache.insert(key, r);
        Ok(r)
    }

    pub fn negate(&mut self, f: ObddRef) -> Result<ObddRef, ObddError> {
        let a = self.check(f)?;
        let id = self.negate_rec(a)?;
        Ok(self.handle(id))
    }

    fn negate_rec(&mut self, a: DiagramId) -> Result<DiagramId, ObddError> {
        match a {
            FALSE_ID => return Ok(TRUE_ID),
            TRUE_ID => return Ok(FALSE_ID),
            _ => {}
        }
        if let Some(&r) = self.negate_cache.get(&a) {
            return Ok(r);
        }
        let n = self.nodes[a as usize];
        let low = self.negate_rec(n.low)?;
        let high = self.negate_rec(n.high)?;
        let r = self.mk(n.level, low, high)?;
        self.negate_cache.insert(a, r);
        self.negate_cache.insert(r, a);
        Ok(r)
    }

    pub fn is_false(&self, f: ObddRef) -> Result<bool, ObddError> {
        Ok(self.check(f)? == FALSE_ID)
    }

    pub fn is_true(&self, f: ObddRef) -> Result<bool, ObddError> {
        Ok(self.check(f)? == TRUE_ID)
    }

    /// The decision at the root of `f`, or `None` for a terminal.
    pub fn decision(&self, f: ObddRef) -> Result<Option<Decision>, ObddError> {
        let a = self.check(f)?;
        let n = self.nodes[a as usize];
        if n.level == TERMINAL_LEVEL {
            return Ok(None);
        }
        Ok(Some(Decision {
            var: self.order[n.level as usize],
            low: self.handle(n.low),
            high: self.handle(n.high),
        }))
    }

    /// Walks one root-to-`1` path, preferring the high branch. Variables not
    /// tested on the path are left out of the returned literal list.
    pub fn satisfying_assignment(&self, f: ObddRef) -> Result<Option<Vec<Literal>>, ObddError> {
        let mut cur = self.check(f)?;
        if cur == FALSE_ID {
            return Ok(None);
        }
        let mut path = Vec::new();
        while cur != TRUE_ID {
            let n = self.nodes[cur as usize];
            let var = self.order[n.level as usize];
            if n.high != FALSE_ID {
                path.push(Literal::positive(var));
                cur = n.high;
            } else {
                path.push(Literal::negative(var));
                cur = n.low;
            }
        }
        Ok(Some(path))
    }

    /// Evaluates `f` under a total assignment.
    pub fn evaluate(&self, f: ObddRef, assignment: impl Fn(Var) -> bool) -> Result<bool, ObddError> {
        let mut cur = self.check(f)?;
        while cur > TRUE_ID {
            let n = self.nodes[cur as usize];
            cur = if assignment(self.order[n.level as usize]) {
                n.high
            } else {
                n.low
            };
        }
        Ok(cur == TRUE_ID)
    }

    /// Number of decision (non-terminal) nodes reachable from `f`.
    pub fn decision_count(&self, f: ObddRef) -> Result<usize, ObddError> {
        let root = self.check(f)?;
        let mut seen = std::collections::HashSet::new();
        let mut stack = vec![root];
        while let Some(a) = stack.pop() {
            if a <= TRUE_ID || !seen.insert(a) {
                continue;
            }
            let n = self.nodes[a as usize];
            stack.push(n.low);
            stack.push(n.high);
        }
        Ok(seen.len())
    }

    /// Checks the reduction, uniqueness and ordering invariants over the whole store.
    pub fn check_invariants(&self) -> Result<(), String> {
        let mut seen = HashMap::new();
        for (id, n) in self.nodes.iter().enumerate().skip(2) {
            if n.low == n.high {
                return Err(format!("node {id} has low == high"));
            }
            for child in [n.low, n.high] {
                let c = self.nodes[child as usize];
                if c.level <= n.level {
                    return Err(format!("node {id} is not above its child {child}"));
                }
            }
            if let Some(prev) = seen.insert((n.level, n.low, n.high), id) {
                return Err(format!("nodes {prev} and {id} are duplicates"));
            }
        }
        Ok(())
    }

    /// Translates `f` into an NNF circuit: every decision `(v, lo, hi)` becomes
    /// `OR(AND(¬v, lo), AND(v, hi))`, terminals become constants, and shared
    /// diagram nodes become shared circuit nodes.
    pub fn to_circuit(&self, f: ObddRef) -> Result<Circuit, ObddError> {
        let root = self.check(f)?;
        let variable_count = self.order.iter().copied().max().unwrap_or(0);
        let mut builder = CircuitBuilder::new(variable_count);
        let mut memo: HashMap<DiagramId, NodeId> = HashMap::new();
        let false_node = builder.constant(false);
        let true_node = builder.constant(true);
        memo.insert(FALSE_ID, false_node);
        memo.insert(TRUE_ID, true_node);
        // Iterative post-order so deep diagrams cannot overflow the stack.
        let mut stack = vec![(root, false)];
        while let Some((a, expanded)) = stack.pop() {
            if memo.contains_key(&a) {
                continue;
            }
            let n = self.nodes[a as usize];
            if !expanded {
                stack.push((a, true));
                stack.push((n.high, false));
                stack.push((n.low, false));
                continue;
            }
            let var = self.order[n.level as usize];
            let neg = builder.literal(Literal::negative(var));
            let pos = builder.literal(Literal::positive(var));
            let low_branch = builder.and(vec![neg, memo[&n.low]]);
            let high_branch = builder.and(vec![pos, memo[&n.high]]);
            let node = builder.decision(var, low_branch, high_branch);
            memo.insert(a, node);
        }
        Ok(builder.finish(memo[&root]))
    }
}

//! Smoothing and constant propagation.

use super::{Circuit, CircuitBuilder, Node, NodeId, VarSet};
use crate::lit::{Literal, Var};

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct SmoothOptions {
    /// Also conjoin the root with gadgets for every variable in
    /// `1..=variable_count` it does not mention. Skipped when the root is false.
    pub extend_root: bool,
}

/// Smooths every OR node against the union of its children's variables.
pub fn smooth(c: &Circuit) -> Circuit {
    smooth_with(c, SmoothOptions::default())
}

pub fn smooth_with(c: &Circuit, opts: SmoothOptions) -> Circuit {
    let vars = c.mentioned_vars();
    let mut b = CircuitBuilder::new(c.variable_count());
    let mut gadgets: Vec<Option<NodeId>> = vec![None; c.variable_count() as usize + 1];
    let mut gadget = |b: &mut CircuitBuilder, v: Var| -> NodeId {
        *gadgets[v as usize].get_or_insert_with(|| {
            let pos = b.literal(Literal::positive(v));
            let neg = b.literal(Literal::negative(v));
            b.or(vec![pos, neg])
        })
    };
    let mut map: Vec<NodeId> = Vec::with_capacity(c.len());
    for (id, node) in c.nodes().iter().enumerate() {
        let new_id = match node {
            Node::True => b.constant(true),
            Node::False => b.constant(false),
            Node::Lit(l) => b.literal(*l),
            Node::And(ch) => b.and(ch.iter().map(|&x| map[x]).collect()),
            Node::Or { decision, children } => {
                let union = &vars[id];
                let ch = children
                    .iter()
                    .map(|&x| {
                        let missing = union.difference(&vars[x]);
                        if missing.is_empty() {
                            return map[x];
                        }
                        let mut conj = vec![map[x]];
                        conj.extend(missing.into_iter().map(|v| gadget(&mut b, v)));
                        b.and(conj)
                    })
                    .collect();
                b.or_with_hint(*decision, ch)
            }
        };
        map.push(new_id);
    }
    let mut root = map[c.root()];
    if opts.extend_root && c.node(c.root()) != &Node::False {
        let missing = VarSet::range(c.variable_count()).difference(&vars[c.root()]);
        if !missing.is_empty() {
            let mut conj = Vec::with_capacity(missing.len() + 1);
            if c.node(c.root()) != &Node::True {
                conj.push(root);
            }
            conj.extend(missing.into_iter().map(|v| gadget(&mut b, v)));
            root = if conj.len() == 1 { conj[0] } else { b.and(conj) };
        }
    }
    b.finish(root)
}

/// Removes constants below gates: a conjunction with a false child becomes
/// false, false children of disjunctions and true children of conjunctions
/// are dropped, and gates left with one child are replaced by that child. The
/// result contains a constant only if the whole circuit is that constant.
pub fn propagate_constants(c: &Circuit) -> Circuit {
    let mut b = CircuitBuilder::new(c.variable_count());
    let t = b.constant(true);
    let f = b.constant(false);
    let mut map: Vec<NodeId> = Vec::with_capacity(c.len());
    for node in c.nodes() {
        let new_id = match node {
            Node::True => t,
            Node::False => f,
            Node::Lit(l) => b.literal(*l),
            Node::And(ch) => {
                let ch: Vec<NodeId> = ch.iter().map(|&x| map[x]).filter(|&x| x != t).collect();
                if ch.contains(&f) {
                    f
                } else if ch.len() == 1 {
                    ch[0]
                } else {
                    b.and(ch)
                }
            }
            Node::Or { decision, children } => {
                let ch: Vec<NodeId> = children.iter().map(|&x| map[x]).filter(|&x| x != f).collect();
                if ch.contains(&t) {
                    t
                } else if ch.len() == 1 {
                    ch[0]
                } else {
                    b.or_with_hint(*decision, ch)
                }
            }
        };
        map.push(new_id);
    }
    b.finish(map[c.root()])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circuit::{check_decomposable, check_smooth, parse_nnf, write_nnf};

    const XOR_NNF: &str = "nnf 7 6 2\nL 1\nL -2\nA 2 0 1\nL -1\nL 2\nA 2 3 4\nO 0 2 2 5\n";

    fn lit(v: i32) -> Literal {
        Literal::from_dimacs(v).unwrap()
    }

    #[test]
    fn or_of_two_variables() {
        let c = parse_nnf("nnf 3 2 2\nL 1\nL 2\nO 0 2 0 1\n").unwrap();
        let s = smooth(&c);
        // OR(AND(a, OR(b,¬b)), AND(b, OR(a,¬a)))
        let expected = parse_nnf(
            "nnf 9 10 2\nL 1\nL 2\nL -2\nO 0 2 1 2\nA 2 0 3\nL -1\nO 0 2 0 5\nA 2 1 6\nO 0 2 4 7\n",
        )
        .unwrap();
        assert_eq!(s, expected);
        assert!(check_smooth(&s).is_ok());
        assert!(check_decomposable(&s).is_ok());
    }

    #[test]
    fn smooth_circuit_is_a_fixpoint() {
        let c = parse_nnf(XOR_NNF).unwrap();
        assert_eq!(write_nnf(&smooth(&c)), XOR_NNF);
        assert_eq!(
            smooth_with(&c, SmoothOptions { extend_root: true }),
            c
        );
    }

    #[test]
    fn root_extension() {
        let c = parse_nnf("nnf 1 0 2\nL 1\n").unwrap();
        assert_eq!(smooth(&c), c);
        let s = smooth_with(&c, SmoothOptions { extend_root: true });
        assert_eq!(s.mentioned_vars()[s.root()], VarSet::range(2));
        let t = Circuit::constant(true).with_variable_count(1);
        let s = smooth_with(&t, SmoothOptions { extend_root: true });
        assert!(matches!(s.node(s.root()), Node::Or { .. }));
        let f = Circuit::constant(false).with_variable_count(3);
        assert_eq!(smooth_with(&f, SmoothOptions { extend_root: true }), f);
    }

    #[test]
    fn constants_are_propagated() {
        // OR(AND(¬a, FALSE), AND(a, TRUE)) is just a.
        let mut b = CircuitBuilder::new(1);
        let na = b.literal(lit(-1));
        let a = b.literal(lit(1));
        let f = b.constant(false);
        let t = b.constant(true);
        let lo = b.and(vec![na, f]);
        let hi = b.and(vec![a, t]);
        let r = b.decision(1, lo, hi);
        let c = propagate_constants(&b.finish(r));
        assert_eq!(c.nodes(), &[Node::Lit(lit(1))]);

        let mut b = CircuitBuilder::new(1);
        let a = b.literal(lit(1));
        let f = b.constant(false);
        let r = b.and(vec![a, f]);
        assert_eq!(propagate_constants(&b.finish(r)), Circuit::constant(false).with_variable_count(1));
    }
}

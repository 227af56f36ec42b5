#![allow(dead_code)]

use std::sync::Arc;

use amc::circuit::{classify_circuit, parse_nnf, smooth, Circuit, CircuitBuilder, CircuitClass, Node, NodeId};
use amc::compile::Cnf;
use amc::lit::{Literal, Var};
use amc::obdd::{ObddStore, SharedStore};
use amc::semiring::{
    Labeling, Semiring, SemiringDescriptor, SemiringError, SemiringFlags, SemiringParams, Value,
};
use rand::seq::SliceRandom;
use rand::{Rng, RngCore};

/// OR(AND(a,¬b), AND(¬a,b)): smooth, deterministic, decomposable.
pub const XOR_NNF: &str = "nnf 7 6 2\nL 1\nL -2\nA 2 0 1\nL -1\nL 2\nA 2 3 4\nO 0 2 2 5\n";
/// AND(OR(¬a,¬b), OR(a,b)): none of the three properties.
pub const OVERLAP_NNF: &str = "nnf 7 6 2\nL -1\nL -2\nO 0 2 0 1\nL 1\nL 2\nO 0 2 3 4\nA 2 2 5\n";
pub const OR_AB_NNF: &str = "nnf 3 2 2\nL 1\nL 2\nO 0 2 0 1\n";

pub fn xor() -> Circuit {
    parse_nnf(XOR_NNF).unwrap()
}

pub fn overlap() -> Circuit {
    parse_nnf(OVERLAP_NNF).unwrap()
}

pub fn or_ab() -> Circuit {
    parse_nnf(OR_AB_NNF).unwrap()
}

/// A built-in with every parameter filled in for `n` variables.
pub fn builtin(name: &str, n: u32) -> SemiringDescriptor {
    let params = SemiringParams {
        k: Some(5),
        grad_var: Some(1),
        order: Some((1..=n.max(1)).collect()),
    };
    SemiringDescriptor::builtin(name, &params).unwrap()
}

pub fn random_cnf(rng: &mut impl Rng, max_vars: u32) -> Cnf {
    let n = rng.gen_range(1..=max_vars);
    let m = rng.gen_range(1..=2 * n as usize);
    let vars: Vec<Var> = (1..=n).collect();
    let clauses = (0..m)
        .map(|_| {
            let width = rng.gen_range(1..=3.min(n as usize));
            let mut cl: Vec<Literal> = vars
                .choose_multiple(rng, width)
                .map(|&v| Literal::new(v, rng.gen_bool(0.5)))
                .collect();
            cl.sort_by_key(|l| l.var());
            cl
        })
        .collect();
    Cnf::new(n, clauses)
}

/// The same clauses with every literal made positive.
pub fn monotone(cnf: &Cnf) -> Cnf {
    let clauses = cnf
        .clauses
        .iter()
        .map(|cl| cl.iter().map(|l| Literal::positive(l.var())).collect())
        .collect();
    Cnf::new(cnf.variable_count, clauses)
}

#[derive(Debug, Clone, Copy)]
struct Shape {
    decomposable: bool,
    deterministic: bool,
}

fn nonempty_subset(rng: &mut impl Rng, vars: &[Var]) -> Vec<Var> {
    let k = rng.gen_range(1..=vars.len());
    let mut s: Vec<Var> = vars.choose_multiple(rng, k).copied().collect();
    s.sort_unstable();
    s
}

fn gen<R: Rng>(b: &mut CircuitBuilder, rng: &mut R, vars: &[Var], depth: u32, shape: Shape) -> NodeId {
    if vars.len() == 1 || depth == 0 {
        let lits: Vec<NodeId> = vars
            .iter()
            .map(|&v| b.literal(Literal::new(v, rng.gen_bool(0.5))))
            .collect();
        return if lits.len() == 1 { lits[0] } else { b.and(lits) };
    }
    let mut choice = rng.gen_range(0..4);
    if choice == 2 && shape.deterministic {
        choice = 0;
    }
    if choice == 3 && shape.decomposable {
        choice = 1;
    }
    match choice {
        0 => {
            let x = *vars.choose(rng).unwrap();
            let rest: Vec<Var> = vars.iter().copied().filter(|&v| v != x).collect();
            let branch = |b: &mut CircuitBuilder, rng: &mut R, positive: bool| {
                let lit = b.literal(Literal::new(x, positive));
                if rng.gen_bool(0.2) {
                    return lit;
                }
                let sub = nonempty_subset(rng, &rest);
                let child = gen(b, rng, &sub, depth - 1, shape);
                b.and(vec![lit, child])
            };
            let hi = branch(b, rng, true);
            let lo = branch(b, rng, false);
            b.decision(x, lo, hi)
        }
        1 => {
            let mut shuffled = vars.to_vec();
            shuffled.shuffle(rng);
            let cut = rng.gen_range(1..shuffled.len());
            let (l, r) = shuffled.split_at(cut);
            let mut l = l.to_vec();
            let mut r = r.to_vec();
            l.sort_unstable();
            r.sort_unstable();
            let a = gen(b, rng, &l, depth - 1, shape);
            let c = gen(b, rng, &r, depth - 1, shape);
            b.and(vec![a, c])
        }
        2 => {
            let k = rng.gen_range(2..=3);
            let ch = (0..k)
                .map(|_| {
                    let sub = nonempty_subset(rng, vars);
                    gen(b, rng, &sub, depth - 1, shape)
                })
                .collect();
            b.or(ch)
        }
        _ => {
            let shared = *vars.choose(rng).unwrap();
            let ch = (0..2)
                .map(|_| {
                    let mut sub = nonempty_subset(rng, vars);
                    if !sub.contains(&shared) {
                        sub.push(shared);
                        sub.sort_unstable();
                    }
                    gen(b, rng, &sub, depth - 1, shape)
                })
                .collect();
            b.and(ch)
        }
    }
}

/// Renames the variables the root mentions to `1..=k`, preserving order, so
/// that the universe is exactly the mentioned variables.
pub fn compact(c: &Circuit) -> Circuit {
    let mentioned = &c.mentioned_vars()[c.root()];
    let mut map = vec![0; c.variable_count() as usize + 1];
    let mut k = 0;
    for v in mentioned.iter() {
        k += 1;
        map[v as usize] = k;
    }
    let nodes = c
        .nodes()
        .iter()
        .map(|n| match n {
            Node::Lit(l) => Node::Lit(Literal::new(map[l.var() as usize], l.is_positive())),
            Node::Or { decision, children } => Node::Or {
                decision: decision.map(|v| map[v as usize]),
                children: children.clone(),
            },
            other => other.clone(),
        })
        .collect();
    Circuit::new(k, nodes, c.root()).unwrap()
}

/// A random circuit over at most `max_vars` variables, with arbitrary
/// properties.
pub fn random_circuit(rng: &mut impl Rng, max_vars: u32) -> Circuit {
    let n = rng.gen_range(1..=max_vars);
    let vars: Vec<Var> = (1..=n).collect();
    let shape = Shape {
        decomposable: rng.gen_bool(0.5),
        deterministic: rng.gen_bool(0.5),
    };
    let mut b = CircuitBuilder::new(n);
    let depth = rng.gen_range(1..=4);
    let root = gen(&mut b, rng, &vars, depth, shape);
    let c = b.finish(root);
    if rng.gen_bool(0.5) {
        compact(&c)
    } else {
        c
    }
}

/// A random circuit whose class is exactly `target`, over 2..=`max_vars`
/// variables all mentioned by the root.
pub fn random_circuit_of_class(rng: &mut impl Rng, target: CircuitClass, max_vars: u32) -> Circuit {
    let shape = Shape {
        decomposable: target.decomposable,
        deterministic: target.deterministic,
    };
    loop {
        let n = rng.gen_range(2..=max_vars);
        let vars: Vec<Var> = (1..=n).collect();
        let mut b = CircuitBuilder::new(n);
        let depth = rng.gen_range(1..=4);
        let root = gen(&mut b, rng, &vars, depth, shape);
        let mut c = compact(&b.finish(root));
        if target.smooth {
            c = smooth(&c);
        }
        let report = classify_circuit(&c, 24);
        if report.class == target && !report.class_is_lower_bound {
            return c;
        }
    }
}

/// Boolean functions under exclusive or and conjunction: a commutative ring
/// whose ⊕ is not idempotent while ⊗ is.
#[derive(Debug)]
pub struct XorObdd {
    store: SharedStore,
}

fn arith(e: impl ToString) -> SemiringError {
    SemiringError::Arithmetic {
        semiring: "XOR-OBDD".into(),
        message: e.to_string(),
    }
}

impl Semiring for XorObdd {
    fn name(&self) -> &str {
        "XOR-OBDD"
    }

    fn zero(&self) -> Value {
        Value::Bdd(self.store.lock().unwrap().zero())
    }

    fn one(&self) -> Value {
        Value::Bdd(self.store.lock().unwrap().one())
    }

    fn contains(&self, v: &Value) -> bool {
        matches!(v, Value::Bdd(r) if r.store_id() == self.store.lock().unwrap().id())
    }

    fn plus(&self, a: &Value, b: &Value) -> Result<Value, SemiringError> {
        let (Value::Bdd(f), Value::Bdd(g)) = (a, b) else {
            return Err(arith("not a diagram"));
        };
        let mut s = self.store.lock().unwrap();
        let nf = s.negate(*f).map_err(arith)?;
        let ng = s.negate(*g).map_err(arith)?;
        let l = s.and(*f, ng).map_err(arith)?;
        let r = s.and(nf, *g).map_err(arith)?;
        Ok(Value::Bdd(s.or(l, r).map_err(arith)?))
    }

    fn times(&self, a: &Value, b: &Value) -> Result<Value, SemiringError> {
        let (Value::Bdd(f), Value::Bdd(g)) = (a, b) else {
            return Err(arith("not a diagram"));
        };
        let mut s = self.store.lock().unwrap();
        Ok(Value::Bdd(s.and(*f, *g).map_err(arith)?))
    }

    fn sample(&self, rng: &mut dyn RngCore) -> Value {
        let mut s = self.store.lock().unwrap();
        let vars: Vec<Var> = s.order().iter().copied().take(3).collect();
        let mut f = s.zero();
        for row in 0..(1u32 << vars.len()) {
            if rng.gen_bool(0.5) {
                let mut t = s.one();
                for (i, &v) in vars.iter().enumerate() {
                    let l = s.mk_literal(Literal::new(v, row >> i & 1 == 1)).unwrap();
                    t = s.and(t, l).unwrap();
                }
                f = s.or(f, t).unwrap();
            }
        }
        Value::Bdd(f)
    }
}

pub fn xor_obdd(n: u32) -> SemiringDescriptor {
    let store = ObddStore::ascending(n.max(1)).shared();
    let flags = SemiringFlags {
        plus_idempotent: false,
        times_idempotent: true,
        supports_negative_literals: true,
        canonical_profile: None,
    };
    SemiringDescriptor::custom_with_store(Arc::new(XorObdd { store: store.clone() }), flags, store)
}

/// Diagram labels for a diagram-valued semiring: variable v is labeled
/// (x, ¬x), or (¬x, x) when flipped, or has one side replaced by false when
/// `dropped` says so.
pub fn diagram_labeling(
    desc: &SemiringDescriptor,
    n: u32,
    rng: &mut impl Rng,
    flip: bool,
    drop_probability: f64,
) -> Labeling {
    let store = desc.store().unwrap().clone();
    let mut s = store.lock().unwrap();
    let mut pos = Vec::new();
    let mut neg = Vec::new();
    let mut dropped_any = false;
    for v in 1..=n {
        let x = s.mk_var(v).unwrap();
        let nx = s.negate(x).unwrap();
        let (mut p, mut q) = if flip && rng.gen_bool(0.5) { (nx, x) } else { (x, nx) };
        let last = v == n && drop_probability > 0.0 && !dropped_any;
        if last || rng.gen_bool(drop_probability) {
            dropped_any = true;
            if rng.gen_bool(0.5) {
                p = s.zero();
            } else {
                q = s.zero();
            }
        }
        pos.push(Value::Bdd(p));
        neg.push(Some(Value::Bdd(q)));
    }
    drop(s);
    Labeling::new(desc, pos, neg).unwrap()
}

/// FUZZY labels (p, 0) with p in (0, 1).
pub fn fuzzy_zero_negatives(desc: &SemiringDescriptor, n: u32, rng: &mut impl Rng) -> Labeling {
    let pos = (0..n).map(|_| Value::Real(rng.gen_range(0.01..0.99))).collect();
    let neg = vec![Some(Value::Real(0.0)); n as usize];
    Labeling::new(desc, pos, neg).unwrap()
}

/// Probability labels with α(a) = 0.6 and α(b) = 0.3.
pub fn probabilities_06_03(desc: &SemiringDescriptor) -> Labeling {
    Labeling::from_probabilities(desc, &[0.6, 0.3]).unwrap()
}

//! The fourteen built-in semirings.

use std::collections::BTreeSet;
use std::sync::Arc;

use rand::{Rng, RngCore};

use super::{Nat, Polynomial, Semiring, SemiringDescriptor, SemiringError, SemiringFlags, TaskProfile, Value};
use crate::lit::{Literal, Var};
use crate::obdd::{ObddRef, ObddStore, SharedStore};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Builtin {
    Sat,
    Count,
    Wmc,
    Prob,
    Sens,
    Grad,
    Mpe,
    ShortestPath,
    WidestPath,
    Fuzzy,
    KWeight,
    Obdd,
    Why,
    RaPlus,
}

impl Builtin {
    pub const ALL: [Builtin; 14] = [
        Builtin::Sat,
        Builtin::Count,
        Builtin::Wmc,
        Builtin::Prob,
        Builtin::Sens,
        Builtin::Grad,
        Builtin::Mpe,
        Builtin::ShortestPath,
        Builtin::WidestPath,
        Builtin::Fuzzy,
        Builtin::KWeight,
        Builtin::Obdd,
        Builtin::Why,
        Builtin::RaPlus,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Builtin::Sat => "SAT",
            Builtin::Count => "#SAT",
            Builtin::Wmc => "WMC",
            Builtin::Prob => "PROB",
            Builtin::Sens => "SENS",
            Builtin::Grad => "GRAD",
            Builtin::Mpe => "MPE",
            Builtin::ShortestPath => "S-PATH",
            Builtin::WidestPath => "W-PATH",
            Builtin::Fuzzy => "FUZZY",
            Builtin::KWeight => "kWEIGHT",
            Builtin::Obdd => "OBDD",
            Builtin::Why => "WHY",
            Builtin::RaPlus => "RA+",
        }
    }

    /// Case-insensitive lookup ignoring `-` and `_`. `count` and `sharpsat`
    /// are accepted for #SAT, `raplus` for RA+.
    pub fn from_name(name: &str) -> Option<Builtin> {
        let key: String = name
            .chars()
            .filter(|c| !matches!(c, '-' | '_'))
            .flat_map(char::to_lowercase)
            .collect();
        Some(match key.as_str() {
            "sat" => Builtin::Sat,
            "#sat" | "count" | "sharpsat" => Builtin::Count,
            "wmc" => Builtin::Wmc,
            "prob" => Builtin::Prob,
            "sens" => Builtin::Sens,
            "grad" => Builtin::Grad,
            "mpe" => Builtin::Mpe,
            "spath" => Builtin::ShortestPath,
            "wpath" => Builtin::WidestPath,
            "fuzzy" => Builtin::Fuzzy,
            "kweight" => Builtin::KWeight,
            "obdd" => Builtin::Obdd,
            "why" => Builtin::Why,
            "ra+" | "raplus" => Builtin::RaPlus,
            _ => return None,
        })
    }

    /// Profile under the canonical labeling of each task.
    pub fn canonical_profile(self) -> TaskProfile {
        use Builtin::*;
        match self {
            Count | Wmc | RaPlus => TaskProfile::new(false, false, false),
            Prob | Sens | Grad => TaskProfile::new(false, true, false),
            Mpe | KWeight | Why => TaskProfile::new(true, false, false),
            Sat | ShortestPath | WidestPath | Fuzzy => TaskProfile::new(true, true, false),
            Obdd => TaskProfile::new(true, true, true),
        }
    }

    pub fn plus_idempotent(self) -> bool {
        self.canonical_profile().plus_idempotent
    }

    pub fn times_idempotent(self) -> bool {
        matches!(
            self,
            Builtin::Sat | Builtin::WidestPath | Builtin::Fuzzy | Builtin::Obdd | Builtin::Why
        )
    }

    pub fn supports_negative_literals(self) -> bool {
        !matches!(self, Builtin::Why | Builtin::RaPlus)
    }

    /// True when the carrier is compared up to floating-point tolerance.
    pub fn is_inexact(self) -> bool {
        matches!(
            self,
            Builtin::Wmc
                | Builtin::Prob
                | Builtin::Sens
                | Builtin::Grad
                | Builtin::Mpe
                | Builtin::Fuzzy
        )
    }
}

/// Instance parameters of the built-ins that need them.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct SemiringParams {
    /// Bound of kWEIGHT.
    pub k: Option<u64>,
    /// Variable whose derivative GRAD tracks; defaults to 1.
    pub grad_var: Option<Var>,
    /// Variable order of the OBDD carrier.
    pub order: Option<Vec<Var>>,
}

impl SemiringParams {
    pub fn with_k(k: u64) -> SemiringParams {
        SemiringParams {
            k: Some(k),
            ..SemiringParams::default()
        }
    }

    pub fn with_grad_var(v: Var) -> SemiringParams {
        SemiringParams {
            grad_var: Some(v),
            ..SemiringParams::default()
        }
    }

    pub fn with_order(order: Vec<Var>) -> SemiringParams {
        SemiringParams {
            order: Some(order),
            ..SemiringParams::default()
        }
    }

    /// Parses `k=<int>`, `grad_var=<int>` and `order=v1,v2,...` tokens.
    pub fn parse_tokens<'a>(tokens: impl IntoIterator<Item = &'a str>) -> Result<SemiringParams, String> {
        let mut p = SemiringParams::default();
        for tok in tokens {
            let (key, val) = tok
                .split_once('=')
                .ok_or_else(|| format!("expected key=value, found `{tok}`"))?;
            match key {
                "k" => p.k = Some(val.parse().map_err(|_| format!("bad k `{val}`"))?),
                "grad_var" => {
                    p.grad_var = Some(val.parse().map_err(|_| format!("bad grad_var `{val}`"))?)
                }
                "order" => p.order = Some(parse_order(val)?),
                _ => return Err(format!("unknown parameter `{key}`")),
            }
        }
        Ok(p)
    }

    /// The `key=value` tokens that reproduce these parameters.
    pub fn to_tokens(&self) -> Vec<String> {
        let mut out = Vec::new();
        if let Some(k) = self.k {
            out.push(format!("k={k}"));
        }
        if let Some(g) = self.grad_var {
            out.push(format!("grad_var={g}"));
        }
        if let Some(order) = &self.order {
            let list: Vec<String> = order.iter().map(|v| v.to_string()).collect();
            out.push(format!("order={}", list.join(",")));
        }
        out
    }
}

/// Parses a comma-separated variable list such as `3,1,2`.
pub fn parse_order(text: &str) -> Result<Vec<Var>, String> {
    text.split(',')
        .map(|t| {
            t.trim()
                .parse::<Var>()
                .map_err(|_| format!("bad variable `{t}` in order"))
        })
        .collect()
}

pub(super) fn make(which: Builtin, params: &SemiringParams) -> Result<SemiringDescriptor, SemiringError> {
    let ops: Arc<dyn Semiring> = match which {
        Builtin::Sat => Arc::new(BoolOr),
        Builtin::Count => Arc::new(Counting),
        Builtin::Wmc => Arc::new(RealSum { name: "WMC", max: 4.0 }),
        Builtin::Prob => Arc::new(RealSum { name: "PROB", max: 1.0 }),
        Builtin::Sens => Arc::new(PolySum {
            name: "SENS",
            natural: false,
        }),
        Builtin::Grad => Arc::new(Grad),
        Builtin::Mpe => Arc::new(MaxTimes),
        Builtin::ShortestPath => Arc::new(MinPlus),
        Builtin::WidestPath => Arc::new(MaxMin),
        Builtin::Fuzzy => Arc::new(Fuzzy),
        Builtin::KWeight => {
            let k = params.k.ok_or(SemiringError::MissingParameter {
                semiring: "kWEIGHT",
                parameter: "k",
            })?;
            Arc::new(KWeight { k })
        }
        Builtin::Why => Arc::new(Why),
        Builtin::RaPlus => Arc::new(PolySum {
            name: "RA+",
            natural: true,
        }),
        Builtin::Obdd => {
            let order = params.order.clone().ok_or(SemiringError::MissingParameter {
                semiring: "OBDD",
                parameter: "order",
            })?;
            let store = ObddStore::new(order).map_err(|e| SemiringError::BadParameter {
                semiring: "OBDD",
                message: e.to_string(),
            })?;
            return Ok(obdd_descriptor(store.shared()).with_params(params.clone(), Builtin::Obdd));
        }
    };
    let mut params = params.clone();
    if which == Builtin::Grad {
        params.grad_var.get_or_insert(1);
    }
    Ok(SemiringDescriptor::custom(ops, builtin_flags(which)).with_params(params, which))
}

fn builtin_flags(which: Builtin) -> SemiringFlags {
    SemiringFlags {
        plus_idempotent: which.plus_idempotent(),
        times_idempotent: which.times_idempotent(),
        supports_negative_literals: which.supports_negative_literals(),
        canonical_profile: Some(which.canonical_profile()),
    }
}

/// The OBDD semiring over an existing store, so that diagrams built elsewhere
/// (by compilation, say) can be compared with evaluation results.
pub fn obdd_descriptor(store: SharedStore) -> SemiringDescriptor {
    let (store_id, order) = {
        let s = store.lock().expect("diagram store poisoned");
        (s.id(), s.order().to_vec())
    };
    let ops = Arc::new(ObddSemiring {
        store: store.clone(),
        store_id,
    });
    SemiringDescriptor::custom(ops, builtin_flags(Builtin::Obdd))
        .with_params(SemiringParams::with_order(order), Builtin::Obdd)
        .with_store(store)
}

fn real_in(v: &Value, lo: f64, hi: f64) -> bool {
    matches!(v, Value::Real(x) if x.is_finite() && *x >= lo && *x <= hi)
}

fn arithmetic(semiring: &str, message: impl Into<String>) -> SemiringError {
    SemiringError::Arithmetic {
        semiring: semiring.into(),
        message: message.into(),
    }
}

fn unexpected(a: &Value, b: &Value) -> ! {
    unreachable!("operands {a:?} and {b:?} passed the carrier check")
}

#[derive(Debug)]
struct BoolOr;

impl Semiring for BoolOr {
    fn name(&self) -> &str {
        "SAT"
    }
    fn zero(&self) -> Value {
        Value::Bool(false)
    }
    fn one(&self) -> Value {
        Value::Bool(true)
    }
    fn contains(&self, v: &Value) -> bool {
        matches!(v, Value::Bool(_))
    }
    fn plus(&self, a: &Value, b: &Value) -> Result<Value, SemiringError> {
        match (a, b) {
            (Value::Bool(x), Value::Bool(y)) => Ok(Value::Bool(*x || *y)),
            _ => unexpected(a, b),
        }
    }
    fn times(&self, a: &Value, b: &Value) -> Result<Value, SemiringError> {
        match (a, b) {
            (Value::Bool(x), Value::Bool(y)) => Ok(Value::Bool(*x && *y)),
            _ => unexpected(a, b),
        }
    }
    fn sample(&self, rng: &mut dyn RngCore) -> Value {
        Value::Bool(rng.gen())
    }
}

#[derive(Debug)]
struct Counting;

impl Semiring for Counting {
    fn name(&self) -> &str {
        "#SAT"
    }
    fn zero(&self) -> Value {
        Value::nat(0)
    }
    fn one(&self) -> Value {
        Value::nat(1)
    }
    fn contains(&self, v: &Value) -> bool {
        matches!(v, Value::Nat(Nat::Finite(_)))
    }
    fn plus(&self, a: &Value, b: &Value) -> Result<Value, SemiringError> {
        match (a, b) {
            (Value::Nat(Nat::Finite(x)), Value::Nat(Nat::Finite(y))) => x
                .checked_add(*y)
                .map(Value::nat)
                .ok_or_else(|| arithmetic("#SAT", "count overflows 64 bits")),
            _ => unexpected(a, b),
        }
    }
    fn times(&self, a: &Value, b: &Value) -> Result<Value, SemiringError> {
        match (a, b) {
            (Value::Nat(Nat::Finite(x)), Value::Nat(Nat::Finite(y))) => x
                .checked_mul(*y)
                .map(Value::nat)
                .ok_or_else(|| arithmetic("#SAT", "count overflows 64 bits")),
            _ => unexpected(a, b),
        }
    }
    fn sample(&self, rng: &mut dyn RngCore) -> Value {
        Value::nat(rng.gen_range(0..30))
    }
}

/// (ℝ≥0, +, ·, 0, 1); WMC and PROB differ only in name and sampling range.
#[derive(Debug)]
struct RealSum {
    name: &'static str,
    max: f64,
}

impl Semiring for RealSum {
    fn name(&self) -> &str {
        self.name
    }
    fn zero(&self) -> Value {
        Value::Real(0.0)
    }
    fn one(&self) -> Value {
        Value::Real(1.0)
    }
    fn contains(&self, v: &Value) -> bool {
        real_in(v, 0.0, f64::MAX)
    }
    fn plus(&self, a: &Value, b: &Value) -> Result<Value, SemiringError> {
        match (a, b) {
            (Value::Real(x), Value::Real(y)) => Ok(Value::Real(x + y)),
            _ => unexpected(a, b),
        }
    }
    fn times(&self, a: &Value, b: &Value) -> Result<Value, SemiringError> {
        match (a, b) {
            (Value::Real(x), Value::Real(y)) => Ok(Value::Real(x * y)),
            _ => unexpected(a, b),
        }
    }
    fn sample(&self, rng: &mut dyn RngCore) -> Value {
        Value::Real(rng.gen_range(0.0..self.max))
    }
}

/// Polynomials under + and ·: SENS over real coefficients, RA+ over natural ones.
#[derive(Debug)]
struct PolySum {
    name: &'static str,
    natural: bool,
}

impl Semiring for PolySum {
    fn name(&self) -> &str {
        self.name
    }
    fn zero(&self) -> Value {
        Value::Poly(Polynomial::zero())
    }
    fn one(&self) -> Value {
        Value::Poly(Polynomial::one())
    }
    fn contains(&self, v: &Value) -> bool {
        match v {
            Value::Poly(p) => {
                p.terms().all(|(_, c)| c.is_finite()) && (!self.natural || p.has_natural_coefficients())
            }
            _ => false,
        }
    }
    fn plus(&self, a: &Value, b: &Value) -> Result<Value, SemiringError> {
        match (a, b) {
            (Value::Poly(x), Value::Poly(y)) => Ok(Value::Poly(x.add(y))),
            _ => unexpected(a, b),
        }
    }
    fn times(&self, a: &Value, b: &Value) -> Result<Value, SemiringError> {
        match (a, b) {
            (Value::Poly(x), Value::Poly(y)) => Ok(Value::Poly(x.mul(y))),
            _ => unexpected(a, b),
        }
    }
    fn sample(&self, rng: &mut dyn RngCore) -> Value {
        let n = rng.gen_range(0..=3);
        let terms = (0..n).map(|_| {
            let factors: Vec<(Var, u32)> = (1..=3)
                .filter_map(|v| {
                    let e = rng.gen_range(0..=2);
                    (e > 0).then_some((v, e))
                })
                .collect();
            let c = if self.natural {
                rng.gen_range(1..=3) as f64
            } else {
                rng.gen_range(-2.0..2.0)
            };
            (super::Monomial::from_factors(factors), c)
        });
        Value::Poly(Polynomial::from_terms(terms.collect::<Vec<_>>()))
    }
}

/// Pairs (p, ∂p) with the product rule.
#[derive(Debug)]
struct Grad;

impl Semiring for Grad {
    fn name(&self) -> &str {
        "GRAD"
    }
    fn zero(&self) -> Value {
        Value::Pair(0.0, 0.0)
    }
    fn one(&self) -> Value {
        Value::Pair(1.0, 0.0)
    }
    fn contains(&self, v: &Value) -> bool {
        matches!(v, Value::Pair(a, b) if a.is_finite() && b.is_finite())
    }
    fn plus(&self, a: &Value, b: &Value) -> Result<Value, SemiringError> {
        match (a, b) {
            (Value::Pair(a1, a2), Value::Pair(b1, b2)) => Ok(Value::Pair(a1 + b1, a2 + b2)),
            _ => unexpected(a, b),
        }
    }
    fn times(&self, a: &Value, b: &Value) -> Result<Value, SemiringError> {
        match (a, b) {
            (Value::Pair(a1, a2), Value::Pair(b1, b2)) => {
                Ok(Value::Pair(a1 * b1, a1 * b2 + a2 * b1))
            }
            _ => unexpected(a, b),
        }
    }
    fn sample(&self, rng: &mut dyn RngCore) -> Value {
        Value::Pair(rng.gen_range(0.0..1.0), rng.gen_range(-2.0..2.0))
    }
}

#[derive(Debug)]
struct MaxTimes;

impl Semiring for MaxTimes {
    fn name(&self) -> &str {
        "MPE"
    }
    fn zero(&self) -> Value {
        Value::Real(0.0)
    }
    fn one(&self) -> Value {
        Value::Real(1.0)
    }
    fn contains(&self, v: &Value) -> bool {
        real_in(v, 0.0, f64::MAX)
    }
    fn plus(&self, a: &Value, b: &Value) -> Result<Value, SemiringError> {
        match (a, b) {
            (Value::Real(x), Value::Real(y)) => Ok(Value::Real(x.max(*y))),
            _ => unexpected(a, b),
        }
    }
    fn times(&self, a: &Value, b: &Value) -> Result<Value, SemiringError> {
        match (a, b) {
            (Value::Real(x), Value::Real(y)) => Ok(Value::Real(x * y)),
            _ => unexpected(a, b),
        }
    }
    fn sample(&self, rng: &mut dyn RngCore) -> Value {
        Value::Real(rng.gen_range(0.0..2.0))
    }
}

fn sample_nat_inf(rng: &mut dyn RngCore) -> Value {
    if rng.gen_bool(0.15) {
        Value::infinity()
    } else {
        Value::nat(rng.gen_range(0..50))
    }
}

/// (ℕ∞, min, +, ∞, 0)
#[derive(Debug)]
struct MinPlus;

impl Semiring for MinPlus {
    fn name(&self) -> &str {
        "S-PATH"
    }
    fn zero(&self) -> Value {
        Value::infinity()
    }
    fn one(&self) -> Value {
        Value::nat(0)
    }
    fn contains(&self, v: &Value) -> bool {
        matches!(v, Value::Nat(_))
    }
    fn plus(&self, a: &Value, b: &Value) -> Result<Value, SemiringError> {
        match (a, b) {
            (Value::Nat(x), Value::Nat(y)) => Ok(Value::Nat(*x.min(y))),
            _ => unexpected(a, b),
        }
    }
    fn times(&self, a: &Value, b: &Value) -> Result<Value, SemiringError> {
        match (a, b) {
            (Value::Nat(x), Value::Nat(y)) => x
                .checked_add(*y)
                .map(Value::Nat)
                .ok_or_else(|| arithmetic("S-PATH", "path length overflows 64 bits")),
            _ => unexpected(a, b),
        }
    }
    fn sample(&self, rng: &mut dyn RngCore) -> Value {
        sample_nat_inf(rng)
    }
}

/// (ℕ∞, max, min, 0, ∞)
#[derive(Debug)]
struct MaxMin;

impl Semiring for MaxMin {
    fn name(&self) -> &str {
        "W-PATH"
    }
    fn zero(&self) -> Value {
        Value::nat(0)
    }
    fn one(&self) -> Value {
        Value::infinity()
    }
    fn contains(&self, v: &Value) -> bool {
        matches!(v, Value::Nat(_))
    }
    fn plus(&self, a: &Value, b: &Value) -> Result<Value, SemiringError> {
        match (a, b) {
            (Value::Nat(x), Value::Nat(y)) => Ok(Value::Nat(*x.max(y))),
            _ => unexpected(a, b),
        }
    }
    fn times(&self, a: &Value, b: &Value) -> Result<Value, SemiringError> {
        match (a, b) {
            (Value::Nat(x), Value::Nat(y)) => Ok(Value::Nat(*x.min(y))),
            _ => unexpected(a, b),
        }
    }
    fn sample(&self, rng: &mut dyn RngCore) -> Value {
        sample_nat_inf(rng)
    }
}

/// ([0,1], max, min, 0, 1)
#[derive(Debug)]
struct Fuzzy;

impl Semiring for Fuzzy {
    fn name(&self) -> &str {
        "FUZZY"
    }
    fn zero(&self) -> Value {
        Value::Real(0.0)
    }
    fn one(&self) -> Value {
        Value::Real(1.0)
    }
    fn contains(&self, v: &Value) -> bool {
        real_in(v, 0.0, 1.0)
    }
    fn plus(&self, a: &Value, b: &Value) -> Result<Value, SemiringError> {
        match (a, b) {
            (Value::Real(x), Value::Real(y)) => Ok(Value::Real(x.max(*y))),
            _ => unexpected(a, b),
        }
    }
    fn times(&self, a: &Value, b: &Value) -> Result<Value, SemiringError> {
        match (a, b) {
            (Value::Real(x), Value::Real(y)) => Ok(Value::Real(x.min(*y))),
            _ => unexpected(a, b),
        }
    }
    fn sample(&self, rng: &mut dyn RngCore) -> Value {
        Value::Real(rng.gen_range(0.0..=1.0))
    }
}

/// ({0,…,k}, min, bounded addition min(a+b, k), k, 0)
#[derive(Debug)]
struct KWeight {
    k: u64,
}

impl Semiring for KWeight {
    fn name(&self) -> &str {
        "kWEIGHT"
    }
    fn zero(&self) -> Value {
        Value::nat(self.k)
    }
    fn one(&self) -> Value {
        Value::nat(0)
    }
    fn contains(&self, v: &Value) -> bool {
        matches!(v, Value::Nat(Nat::Finite(x)) if *x <= self.k)
    }
    fn plus(&self, a: &Value, b: &Value) -> Result<Value, SemiringError> {
        match (a, b) {
            (Value::Nat(Nat::Finite(x)), Value::Nat(Nat::Finite(y))) => Ok(Value::nat(*x.min(y))),
            _ => unexpected(a, b),
        }
    }
    fn times(&self, a: &Value, b: &Value) -> Result<Value, SemiringError> {
        match (a, b) {
            (Value::Nat(Nat::Finite(x)), Value::Nat(Nat::Finite(y))) => {
                Ok(Value::nat((x + y).min(self.k)))
            }
            _ => unexpected(a, b),
        }
    }
    fn sample(&self, rng: &mut dyn RngCore) -> Value {
        Value::nat(rng.gen_range(0..=self.k))
    }
}

/// Diagrams of one store under ∨ and ∧.
#[derive(Debug)]
struct ObddSemiring {
    store: SharedStore,
    store_id: u64,
}

impl ObddSemiring {
    fn apply(
        &self,
        a: &Value,
        b: &Value,
        op: fn(&mut ObddStore, ObddRef, ObddRef) -> Result<ObddRef, crate::obdd::ObddError>,
    ) -> Result<Value, SemiringError> {
        match (a, b) {
            (Value::Bdd(f), Value::Bdd(g)) => {
                let mut s = self.store.lock().expect("diagram store poisoned");
                op(&mut s, *f, *g)
                    .map(Value::Bdd)
                    .map_err(|e| arithmetic("OBDD", e.to_string()))
            }
            _ => unexpected(a, b),
        }
    }
}

impl Semiring for ObddSemiring {
    fn name(&self) -> &str {
        "OBDD"
    }
    fn zero(&self) -> Value {
        Value::Bdd(self.store.lock().expect("diagram store poisoned").zero())
    }
    fn one(&self) -> Value {
        Value::Bdd(self.store.lock().expect("diagram store poisoned").one())
    }
    fn contains(&self, v: &Value) -> bool {
        matches!(v, Value::Bdd(r) if r.store_id() == self.store_id)
    }
    fn plus(&self, a: &Value, b: &Value) -> Result<Value, SemiringError> {
        self.apply(a, b, ObddStore::or)
    }
    fn times(&self, a: &Value, b: &Value) -> Result<Value, SemiringError> {
        self.apply(a, b, ObddStore::and)
    }
    /// A random function of up to four variables of the order, built as a
    /// disjunction of minterms.
    fn sample(&self, rng: &mut dyn RngCore) -> Value {
        let mut s = self.store.lock().expect("diagram store poisoned");
        let vars: Vec<Var> = s.order().iter().copied().take(4).collect();
        let mut f = s.zero();
        for row in 0..(1u32 << vars.len()) {
            if !rng.gen_bool(0.5) {
                continue;
            }
            let mut term = s.one();
            for (i, &v) in vars.iter().enumerate() {
                let l = s
                    .mk_literal(Literal::new(v, row >> i & 1 == 1))
                    .expect("variable is in the order");
                term = s.and(term, l).expect("same store");
            }
            f = s.or(f, term).expect("same store");
        }
        Value::Bdd(f)
    }
}

/// Sets of variables under ∪ and ∪, both identities ∅.
#[derive(Debug)]
struct Why;

impl Semiring for Why {
    fn name(&self) -> &str {
        "WHY"
    }
    fn zero(&self) -> Value {
        Value::Set(BTreeSet::new())
    }
    fn one(&self) -> Value {
        Value::Set(BTreeSet::new())
    }
    fn contains(&self, v: &Value) -> bool {
        matches!(v, Value::Set(_))
    }
    fn plus(&self, a: &Value, b: &Value) -> Result<Value, SemiringError> {
        match (a, b) {
            (Value::Set(x), Value::Set(y)) => Ok(Value::Set(x.union(y).copied().collect())),
            _ => unexpected(a, b),
        }
    }
    fn times(&self, a: &Value, b: &Value) -> Result<Value, SemiringError> {
        self.plus(a, b)
    }
    fn sample(&self, rng: &mut dyn RngCore) -> Value {
        Value::set((1..=6).filter(|_| rng.gen_bool(0.4)))
    }
}

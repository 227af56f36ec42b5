//! Bottom-up evaluation of a circuit in a semiring, and the soundness gate
//! that decides whether the result equals the algebraic model count.

use std::fmt;
use std::str::FromStr;

use serde::Serialize;
use thiserror::Error;

use crate::circuit::{classify_circuit, smooth, Circuit, CircuitClass, Node, PropertyReport, DEFAULT_DETERMINISM_BUDGET};
use crate::lit::{Literal, Var};
use crate::semiring::{check_pair_properties, LabelError, Labeling, SemiringDescriptor, SemiringError, Value};

pub use crate::semiring::TaskProfile;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum EvalError {
    #[error(transparent)]
    Label(#[from] LabelError),
    #[error(transparent)]
    Semiring(#[from] SemiringError),
    #[error("labeling covers variables 1..={labeled} but the circuit uses 1..={needed}")]
    LabelingTooSmall { labeled: Var, needed: Var },
    #[error(
        "refused: circuit is {actual} but {semiring} with this labeling ({profile}) needs {required}; missing {}",
        missing.join(", ")
    )]
    Refused {
        semiring: String,
        actual: String,
        required: CircuitClass,
        profile: TaskProfile,
        missing: Vec<&'static str>,
    },
}

/// Evaluates every node once, children before parents: literals take their
/// label, AND nodes the ⊗ of their children and OR nodes the ⊕, folding left
/// to right. TRUE is e⊗ and FALSE is e⊕. No property is checked.
pub fn evaluate(c: &Circuit, desc: &SemiringDescriptor, lab: &Labeling) -> Result<Value, EvalError> {
    let mut vals: Vec<Value> = Vec::with_capacity(c.len());
    for node in c.nodes() {
        let v = match node {
            Node::True => desc.one(),
            Node::False => desc.zero(),
            Node::Lit(l) => {
                let v = lab.label(*l)?.clone();
                desc.check(&v)?;
                v
            }
            Node::And(ch) => fold(desc, ch, &vals, SemiringDescriptor::times, desc.one())?,
            Node::Or { children, .. } => fold(desc, children, &vals, SemiringDescriptor::plus, desc.zero())?,
        };
        vals.push(v);
    }
    Ok(vals.swap_remove(c.root()))
}

type Op = fn(&SemiringDescriptor, &Value, &Value) -> Result<Value, SemiringError>;

fn fold(desc: &SemiringDescriptor, ch: &[usize], vals: &[Value], op: Op, unit: Value) -> Result<Value, EvalError> {
    let Some((&first, rest)) = ch.split_first() else {
        return Ok(unit);
    };
    let mut acc = vals[first].clone();
    for &x in rest {
        acc = op(desc, &acc, &vals[x])?;
    }
    Ok(acc)
}

/// The weakest circuit class on which evaluation is sound for `p`:
/// determinism unless ⊕ is idempotent, smoothness unless the labeling is
/// neutral, decomposability unless ⊗ is idempotent and consistency-preserving.
pub fn required_circuit_class(p: TaskProfile) -> CircuitClass {
    CircuitClass::new(
        !p.times_idempotent_consistency_preserving,
        !p.plus_idempotent,
        !p.pair_neutral,
    )
}

pub fn is_sound(actual: CircuitClass, p: TaskProfile) -> bool {
    actual.satisfies(required_circuit_class(p))
}

/// Profile of `desc` paired with `lab`. Idempotence comes from the
/// semiring's flags confirmed by sampling; neutrality and consistency
/// preservation are checked on every variable. A built-in's declared profile
/// caps the result, so a labeling can demote it but never promote it.
pub fn task_profile_of(desc: &SemiringDescriptor, lab: &Labeling) -> TaskProfile {
    let flags = desc.flags();
    let computed = check_pair_properties(desc, lab);
    let p = TaskProfile::new(
        flags.plus_idempotent && computed.plus_idempotent,
        computed.pair_neutral,
        flags.times_idempotent && computed.times_idempotent_consistency_preserving,
    );
    match flags.canonical_profile {
        Some(declared) => p.meet(declared),
        None => p,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    /// Refuse circuits outside the required class.
    #[default]
    Strict,
    /// Smooth the circuit when smoothness is the only missing property.
    Repair,
    /// Evaluate regardless and mark the result unsound.
    Force,
}

impl FromStr for Mode {
    type Err = String;

    fn from_str(s: &str) -> Result<Mode, String> {
        match s.to_ascii_lowercase().as_str() {
            "strict" => Ok(Mode::Strict),
            "repair" => Ok(Mode::Repair),
            "force" => Ok(Mode::Force),
            _ => Err(format!("unknown mode `{s}` (expected strict, repair or force)")),
        }
    }
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Mode::Strict => "strict",
            Mode::Repair => "repair",
            Mode::Force => "force",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct EvalOptions {
    pub mode: Mode,
    /// Multiply the result by α(v) ⊕ α(¬v) for every variable of the
    /// universe the root does not mention.
    pub extend_root: bool,
    /// Variable budget of the semantic determinism test.
    pub budget: usize,
}

impl Default for EvalOptions {
    fn default() -> EvalOptions {
        EvalOptions {
            mode: Mode::Strict,
            extend_root: true,
            budget: DEFAULT_DETERMINISM_BUDGET,
        }
    }
}

impl EvalOptions {
    pub fn with_mode(mut self, mode: Mode) -> EvalOptions {
        self.mode = mode;
        self
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Sound,
    Repaired,
    Unsound,
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Status::Sound => "sound",
            Status::Repaired => "repaired",
            Status::Unsound => "unsound",
        })
    }
}

#[derive(Debug, Clone)]
pub struct CheckedEvaluation {
    pub value: Value,
    /// Properties of the circuit as given, before any repair.
    pub report: PropertyReport,
    pub profile: TaskProfile,
    pub required: CircuitClass,
    pub status: Status,
    /// Universe variables the root did not mention, multiplied in at the root.
    pub extended: Vec<Var>,
    pub note: String,
}

/// Classifies `c`, compares it against the class required by the profile of
/// `desc` and `lab`, and evaluates according to `opts.mode`.
pub fn evaluate_checked(
    c: &Circuit,
    desc: &SemiringDescriptor,
    lab: &Labeling,
    opts: EvalOptions,
) -> Result<CheckedEvaluation, EvalError> {
    if lab.variable_count() < c.variable_count() {
        return Err(EvalError::LabelingTooSmall {
            labeled: lab.variable_count(),
            needed: c.variable_count(),
        });
    }
    let report = classify_circuit(c, opts.budget);
    let profile = task_profile_of(desc, lab);
    let required = required_circuit_class(profile);
    let missing = report.class.missing(required);
    let refuse = || EvalError::Refused {
        semiring: desc.name().to_string(),
        actual: report.class_label(),
        required,
        profile,
        missing: missing.clone(),
    };

    let repaired;
    let (target, status, mut note) = if missing.is_empty() {
        (c, Status::Sound, format!("{} meets the required {}", report.class_label(), required))
    } else {
        match opts.mode {
            Mode::Strict => return Err(refuse()),
            Mode::Repair if missing == ["smoothness"] => {
                repaired = smooth(c);
                (&repaired, Status::Repaired, "smoothed before evaluation".to_string())
            }
            Mode::Repair => return Err(refuse()),
            Mode::Force => (
                c,
                Status::Unsound,
                format!(
                    "unsound: missing {}; the value need not equal the algebraic model count",
                    missing.join(", ")
                ),
            ),
        }
    };

    let mut value = evaluate(target, desc, lab)?;
    let mut extended = Vec::new();
    if opts.extend_root && target.node(target.root()) != &Node::False {
        let mentioned = &target.mentioned_vars()[target.root()];
        for v in 1..=c.variable_count() {
            if mentioned.contains(v) {
                continue;
            }
            let pos = lab.label(Literal::positive(v))?;
            let factor = match lab.neg(v) {
                Some(neg) => desc.plus(pos, neg)?,
                None => desc.plus(pos, &desc.one())?,
            };
            value = desc.times(&value, &factor)?;
            extended.push(v);
        }
    }
    if !extended.is_empty() {
        let list: Vec<String> = extended.iter().map(|v| v.to_string()).collect();
        note.push_str(&format!("; root extended over variables {}", list.join(", ")));
    }
    Ok(CheckedEvaluation {
        value,
        report,
        profile,
        required,
        status,
        extended,
        note,
    })
}

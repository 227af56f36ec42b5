//! Commutative semirings, carrier values and labeling functions.
//!
//! A [`Semiring`] supplies the two operations and identities over [`Value`]s.
//! A [`SemiringDescriptor`] wraps one together with its property flags and
//! instance parameters, and checks carrier membership on every operation.

mod axioms;
mod builtin;
mod labeling;
mod polynomial;
mod value;

use std::fmt;
use std::sync::Arc;

use rand::RngCore;
use serde::Serialize;
use thiserror::Error;

use crate::lit::Var;
use crate::obdd::SharedStore;

pub use axioms::{check_axioms, check_axioms_with, check_pair_properties, AxiomReport, Law, LawResult};
pub use builtin::{obdd_descriptor, parse_order, Builtin, SemiringParams};
pub use labeling::{parse_labeling, parse_value, write_labeling, LabelError, Labeling, LabelingFileError};
pub use polynomial::{Monomial, Polynomial, COEFFICIENT_EPSILON};
pub use value::{Nat, Value, ABSOLUTE_FLOOR};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SemiringError {
    #[error("{semiring}: value `{value}` ({kind}) is not in the carrier")]
    NotInCarrier {
        semiring: String,
        value: String,
        kind: &'static str,
    },
    #[error("{semiring}: {message}")]
    Arithmetic { semiring: String, message: String },
    #[error("unknown semiring `{0}`")]
    UnknownName(String),
    #[error("{semiring} needs parameter `{parameter}`")]
    MissingParameter {
        semiring: &'static str,
        parameter: &'static str,
    },
    #[error("{semiring}: invalid parameter: {message}")]
    BadParameter {
        semiring: &'static str,
        message: String,
    },
}

/// The operations of one commutative semiring instance.
///
/// `plus` and `times` may assume both operands satisfy `contains`; the
/// descriptor checks membership before calling them.
pub trait Semiring: fmt::Debug + Send + Sync {
    fn name(&self) -> &str;
    /// e⊕
    fn zero(&self) -> Value;
    /// e⊗
    fn one(&self) -> Value;
    fn contains(&self, v: &Value) -> bool;
    fn plus(&self, a: &Value, b: &Value) -> Result<Value, SemiringError>;
    fn times(&self, a: &Value, b: &Value) -> Result<Value, SemiringError>;
    /// A random carrier element, used by the axiom and idempotence checks.
    fn sample(&self, rng: &mut dyn RngCore) -> Value;
}

/// Properties of a semiring paired with a labeling that decide which circuit
/// classes evaluate soundly.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub struct TaskProfile {
    /// a ⊕ a = a
    pub plus_idempotent: bool,
    /// α(v) ⊕ α(¬v) = e⊗ for every variable
    pub pair_neutral: bool,
    /// a ⊗ a = a, and α(v) ⊗ α(¬v) = e⊕ for every variable
    pub times_idempotent_consistency_preserving: bool,
}

impl TaskProfile {
    pub const fn new(plus_idempotent: bool, pair_neutral: bool, times_icp: bool) -> TaskProfile {
        TaskProfile {
            plus_idempotent,
            pair_neutral,
            times_idempotent_consistency_preserving: times_icp,
        }
    }

    /// Flag-wise conjunction: a property holds only if it holds in both.
    pub fn meet(self, other: TaskProfile) -> TaskProfile {
        TaskProfile::new(
            self.plus_idempotent && other.plus_idempotent,
            self.pair_neutral && other.pair_neutral,
            self.times_idempotent_consistency_preserving
                && other.times_idempotent_consistency_preserving,
        )
    }
}

impl fmt::Display for TaskProfile {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} plus, {} pair, {} times",
            if self.plus_idempotent { "idempotent" } else { "non-idempotent" },
            if self.pair_neutral { "neutral" } else { "non-neutral" },
            if self.times_idempotent_consistency_preserving {
                "idempotent consistency-preserving"
            } else {
                "general"
            }
        )
    }
}

/// Labeling-independent facts about a semiring, plus the profile it has under
/// its canonical labeling.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SemiringFlags {
    pub plus_idempotent: bool,
    pub times_idempotent: bool,
    pub supports_negative_literals: bool,
    /// Profile under the canonical labeling; `None` for custom semirings.
    pub canonical_profile: Option<TaskProfile>,
}

/// A semiring instance with its flags and parameters.
#[derive(Clone)]
pub struct SemiringDescriptor {
    ops: Arc<dyn Semiring>,
    flags: SemiringFlags,
    params: SemiringParams,
    builtin: Option<Builtin>,
    store: Option<SharedStore>,
}

impl fmt::Debug for SemiringDescriptor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("SemiringDescriptor")
            .field("name", &self.name())
            .field("flags", &self.flags)
            .field("params", &self.params)
            .finish()
    }
}

impl SemiringDescriptor {
    /// Wraps a user-supplied semiring.
    pub fn custom(ops: Arc<dyn Semiring>, flags: SemiringFlags) -> SemiringDescriptor {
        SemiringDescriptor {
            ops,
            flags,
            params: SemiringParams::default(),
            builtin: None,
            store: None,
        }
    }

    /// Like [`SemiringDescriptor::custom`], for semirings whose carrier is
    /// diagrams of `store`.
    pub fn custom_with_store(
        ops: Arc<dyn Semiring>,
        flags: SemiringFlags,
        store: SharedStore,
    ) -> SemiringDescriptor {
        SemiringDescriptor {
            store: Some(store),
            ..SemiringDescriptor::custom(ops, flags)
        }
    }

    /// One of the built-in semirings, by name (case-insensitive; see
    /// [`Builtin::from_name`] for accepted spellings).
    pub fn builtin(name: &str, params: &SemiringParams) -> Result<SemiringDescriptor, SemiringError> {
        let which = Builtin::from_name(name).ok_or_else(|| SemiringError::UnknownName(name.into()))?;
        builtin::make(which, params)
    }

    pub fn name(&self) -> &str {
        self.ops.name()
    }

    pub fn kind(&self) -> Option<Builtin> {
        self.builtin
    }

    pub fn flags(&self) -> &SemiringFlags {
        &self.flags
    }

    pub fn params(&self) -> &SemiringParams {
        &self.params
    }

    pub fn supports_negative_literals(&self) -> bool {
        self.flags.supports_negative_literals
    }

    /// The diagram store backing an OBDD-valued semiring.
    pub fn store(&self) -> Option<&SharedStore> {
        self.store.as_ref()
    }

    pub fn zero(&self) -> Value {
        self.ops.zero()
    }

    pub fn one(&self) -> Value {
        self.ops.one()
    }

    pub fn contains(&self, v: &Value) -> bool {
        self.ops.contains(v)
    }

    pub fn check(&self, v: &Value) -> Result<(), SemiringError> {
        if self.ops.contains(v) {
            Ok(())
        } else {
            Err(SemiringError::NotInCarrier {
                semiring: self.name().to_string(),
                value: v.to_string(),
                kind: v.kind(),
            })
        }
    }

    pub fn plus(&self, a: &Value, b: &Value) -> Result<Value, SemiringError> {
        self.check(a)?;
        self.check(b)?;
        self.ops.plus(a, b)
    }

    pub fn times(&self, a: &Value, b: &Value) -> Result<Value, SemiringError> {
        self.check(a)?;
        self.check(b)?;
        self.ops.times(a, b)
    }

    pub fn sample(&self, rng: &mut dyn RngCore) -> Value {
        self.ops.sample(rng)
    }

    /// Equality used by every property check: exact for exact carriers,
    /// relative tolerance 1e-12 (absolute below 1e-12) for real carriers.
    pub fn values_equal(&self, a: &Value, b: &Value) -> bool {
        a.approx_eq_rel(b, 1e-12)
    }

    /// The same semiring without a declared profile, so that its task profile
    /// is read off the labeling alone. Lets a built-in be used with a
    /// non-canonical labeling that has more structure than the canonical one.
    pub fn undeclared(&self) -> SemiringDescriptor {
        let mut d = self.clone();
        d.flags.canonical_profile = None;
        d
    }

    pub(crate) fn with_params(mut self, params: SemiringParams, builtin: Builtin) -> SemiringDescriptor {
        self.params = params;
        self.builtin = Some(builtin);
        self
    }

    pub(crate) fn with_store(mut self, store: SharedStore) -> SemiringDescriptor {
        self.store = Some(store);
        self
    }

    /// Gradient index of a GRAD instance.
    pub fn grad_var(&self) -> Option<Var> {
        self.params.grad_var
    }
}

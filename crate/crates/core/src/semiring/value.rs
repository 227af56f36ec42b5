//! Carrier values shared by every semiring.

use std::collections::BTreeSet;
use std::fmt;

use crate::lit::Var;
use crate::obdd::ObddRef;

use super::polynomial::Polynomial;

/// A natural number extended with a distinguished infinity.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Nat {
    Finite(u64),
    Infinity,
}

impl Nat {
    pub fn is_finite(self) -> bool {
        matches!(self, Nat::Finite(_))
    }

    /// Addition where infinity absorbs everything. `None` on u64 overflow.
    pub fn checked_add(self, other: Nat) -> Option<Nat> {
        match (self, other) {
            (Nat::Finite(a), Nat::Finite(b)) => a.checked_add(b).map(Nat::Finite),
            _ => Some(Nat::Infinity),
        }
    }
}

impl fmt::Display for Nat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Nat::Finite(n) => write!(f, "{n}"),
            Nat::Infinity => f.write_str("inf"),
        }
    }
}

/// A tagged element of some semiring carrier.
#[derive(Debug, Clone, PartialEq)]
pub enum Value {
    Bool(bool),
    Nat(Nat),
    Real(f64),
    /// Weight and accumulated derivative (or cost).
    Pair(f64, f64),
    Poly(Polynomial),
    Set(BTreeSet<Var>),
    Bdd(ObddRef),
}

impl Value {
    pub fn nat(n: u64) -> Value {
        Value::Nat(Nat::Finite(n))
    }

    pub fn infinity() -> Value {
        Value::Nat(Nat::Infinity)
    }

    pub fn set(vars: impl IntoIterator<Item = Var>) -> Value {
        Value::Set(vars.into_iter().collect())
    }

    pub fn kind(&self) -> &'static str {
        match self {
            Value::Bool(_) => "boolean",
            Value::Nat(_) => "natural",
            Value::Real(_) => "real",
            Value::Pair(..) => "pair",
            Value::Poly(_) => "polynomial",
            Value::Set(_) => "set",
            Value::Bdd(_) => "diagram",
        }
    }

    pub fn as_real(&self) -> Option<f64> {
        match self {
            Value::Real(x) => Some(*x),
            _ => None,
        }
    }

    /// True for carriers compared up to floating-point tolerance.
    pub fn is_inexact(&self) -> bool {
        matches!(self, Value::Real(_) | Value::Pair(..) | Value::Poly(_))
    }

    /// Equality up to an absolute tolerance on every real component;
    /// structural equality for exact carriers.
    pub fn approx_eq(&self, other: &Value, tol: f64) -> bool {
        match (self, other) {
            (Value::Real(a), Value::Real(b)) => (a - b).abs() <= tol,
            (Value::Pair(a1, a2), Value::Pair(b1, b2)) => {
                (a1 - b1).abs() <= tol && (a2 - b2).abs() <= tol
            }
            (Value::Poly(a), Value::Poly(b)) => a.approx_eq(b, tol),
            _ => self == other,
        }
    }

    /// Equality up to a relative tolerance on every real component, with an
    /// absolute floor of 1e-12 for components near zero.
    pub fn approx_eq_rel(&self, other: &Value, rel: f64) -> bool {
        match (self, other) {
            (Value::Real(a), Value::Real(b)) => reals_close_rel(*a, *b, rel),
            (Value::Pair(a1, a2), Value::Pair(b1, b2)) => {
                reals_close_rel(*a1, *b1, rel) && reals_close_rel(*a2, *b2, rel)
            }
            (Value::Poly(a), Value::Poly(b)) => a.approx_eq_rel(b, rel),
            _ => self == other,
        }
    }
}

impl From<ObddRef> for Value {
    fn from(r: ObddRef) -> Value {
        Value::Bdd(r)
    }
}

/// Absolute floor under which two reals are considered equal regardless of scale.
pub const ABSOLUTE_FLOOR: f64 = 1e-12;

pub(crate) fn reals_close_rel(a: f64, b: f64, rel: f64) -> bool {
    if a == b {
        return true;
    }
    let diff = (a - b).abs();
    diff <= ABSOLUTE_FLOOR || diff <= rel * a.abs().max(b.abs())
}

fn fmt_real(x: f64, f: &mut fmt::Formatter<'_>) -> fmt::Result {
    if x.is_infinite() {
        f.write_str(if x > 0.0 { "inf" } else { "-inf" })
    } else {
        write!(f, "{x}")
    }
}

/// Prints values in the labeling-file grammar. Diagrams print as `bdd#<node>`;
/// the command-line tool replaces them with a written circuit file.
impl fmt::Display for Value {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Value::Bool(b) => write!(f, "{b}"),
            Value::Nat(n) => write!(f, "{n}"),
            Value::Real(x) => fmt_real(*x, f),
            Value::Pair(a, b) => {
                f.write_str("(")?;
                fmt_real(*a, f)?;
                f.write_str(",")?;
                fmt_real(*b, f)?;
                f.write_str(")")
            }
            Value::Poly(p) => write!(f, "{p}"),
            Value::Set(s) => {
                f.write_str("{")?;
                for (i, v) in s.iter().enumerate() {
                    if i > 0 {
                        f.write_str(",")?;
                    }
                    write!(f, "{v}")?;
                }
                f.write_str("}")
            }
            Value::Bdd(r) => write!(f, "bdd#{}", r.node()),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn infinity_absorbs_addition() {
        assert_eq!(Nat::Infinity.checked_add(Nat::Finite(3)), Some(Nat::Infinity));
        assert_eq!(Nat::Finite(u64::MAX).checked_add(Nat::Finite(1)), None);
        assert!(Nat::Finite(u64::MAX) < Nat::Infinity);
    }

    #[test]
    fn display_grammar() {
        assert_eq!(Value::Pair(0.6, 1.0).to_string(), "(0.6,1)");
        assert_eq!(Value::set([7, 1, 3]).to_string(), "{1,3,7}");
        assert_eq!(Value::set([]).to_string(), "{}");
        assert_eq!(Value::infinity().to_string(), "inf");
        assert_eq!(Value::Real(0.42).to_string(), "0.42");
    }

    #[test]
    fn relative_comparison_has_floor() {
        assert!(Value::Real(0.0).approx_eq_rel(&Value::Real(1e-13), 1e-9));
        assert!(!Value::Real(1.0).approx_eq_rel(&Value::Real(1.0 + 1e-6), 1e-9));
        assert!(Value::Real(1e6).approx_eq_rel(&Value::Real(1e6 + 1e-4), 1e-9));
    }
}

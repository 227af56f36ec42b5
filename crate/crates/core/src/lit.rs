//! Propositional variables and literals.

use std::fmt;

use serde::Serialize;

/// A propositional variable, numbered from 1.
pub type Var = u32;

/// A signed variable reference: `+v` for `v`, `-v` for `¬v`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct Literal(i32);

impl Literal {
    /// Builds a literal from its DIMACS-style signed encoding. Returns `None` for 0.
    pub fn from_dimacs(code: i32) -> Option<Literal> {
        (code != 0).then_some(Literal(code))
    }

    pub fn positive(var: Var) -> Literal {
        assert!(var >= 1 && var <= i32::MAX as u32, "variable out of range");
        Literal(var as i32)
    }

    pub fn negative(var: Var) -> Literal {
        assert!(var >= 1 && var <= i32::MAX as u32, "variable out of range");
        Literal(-(var as i32))
    }

    pub fn new(var: Var, positive: bool) -> Literal {
        if positive {
            Literal::positive(var)
        } else {
            Literal::negative(var)
        }
    }

    pub fn var(self) -> Var {
        self.0.unsigned_abs()
    }

    pub fn is_positive(self) -> bool {
        self.0 > 0
    }

    pub fn negated(self) -> Literal {
        Literal(-self.0)
    }

    pub fn to_dimacs(self) -> i32 {
        self.0
    }
}

impl std::ops::Neg for Literal {
    type Output = Literal;

    fn neg(self) -> Literal {
        self.negated()
    }
}

impl fmt::Display for Literal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

//! Brute-force algebraic model counting by explicit model enumeration.
//!
//! Assignments are visited as integers `0..2^n`, variable `v` taking bit
//! `v - 1`, and the circuit is evaluated on 64 assignments at a time with
//! bitwise operations. The ⊕-fold over models follows this order exactly, so
//! real-valued results are reproducible.

use thiserror::Error;

use crate::circuit::{Circuit, Node};
use crate::lit::Literal;
use crate::semiring::{LabelError, Labeling, SemiringDescriptor, SemiringError, Value};

/// Largest variable count enumerated by default (2^24 assignments).
pub const DEFAULT_ENUMERATION_BUDGET: u32 = 24;

/// A total assignment, one literal per variable in ascending order.
pub type Model = Vec<Literal>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum OracleError {
    #[error("enumeration needs 2^{variables} assignments, over the budget of 2^{budget}")]
    OverBudget { variables: u32, budget: u32 },
    #[error(transparent)]
    Label(#[from] LabelError),
    #[error(transparent)]
    Semiring(#[from] SemiringError),
}

/// Bit `t` of `LANE_PATTERNS[k]` is bit `k` of `t`.
const LANE_PATTERNS: [u64; 6] = [
    0xAAAA_AAAA_AAAA_AAAA,
    0xCCCC_CCCC_CCCC_CCCC,
    0xF0F0_F0F0_F0F0_F0F0,
    0xFF00_FF00_FF00_FF00,
    0xFFFF_0000_FFFF_0000,
    0xFFFF_FFFF_0000_0000,
];

/// Calls `visit` with every satisfying assignment of `c` over
/// `1..=variable_count`, in increasing order.
pub fn for_each_model(
    c: &Circuit,
    budget: u32,
    mut visit: impl FnMut(u64) -> Result<(), OracleError>,
) -> Result<(), OracleError> {
    let n = c.variable_count();
    if n > budget || n > 63 {
        return Err(OracleError::OverBudget {
            variables: n,
            budget,
        });
    }
    let total: u64 = 1 << n;
    let lanes = total.min(64);
    let lane_mask = if lanes == 64 { !0 } else { (1u64 << lanes) - 1 };
    let mut vals = vec![0u64; c.len()];
    let mut base = 0u64;
    while base < total {
        for (id, node) in c.nodes().iter().enumerate() {
            vals[id] = match node {
                Node::True => !0,
                Node::False => 0,
                Node::Lit(l) => {
                    let bit = l.var() - 1;
                    let word = if bit < 6 {
                        LANE_PATTERNS[bit as usize]
                    } else if base >> bit & 1 == 1 {
                        !0
                    } else {
                        0
                    };
                    if l.is_positive() {
                        word
                    } else {
                        !word
                    }
                }
                Node::And(ch) => ch.iter().fold(!0, |acc, &x| acc & vals[x]),
                Node::Or { children, .. } => children.iter().fold(0, |acc, &x| acc | vals[x]),
            };
        }
        let mut hits = vals[c.root()] & lane_mask;
        while hits != 0 {
            let t = hits.trailing_zeros() as u64;
            hits &= hits - 1;
            visit(base + t)?;
        }
        base += lanes;
    }
    Ok(())
}

/// Expands an assignment number into its literals over `1..=n`.
pub fn model_of(assignment: u64, n: u32) -> Model {
    (1..=n)
        .map(|v| Literal::new(v, assignment >> (v - 1) & 1 == 1))
        .collect()
}

/// All models of `c` over its variables, in enumeration order.
pub fn enumerate_models(c: &Circuit) -> Result<Vec<Model>, OracleError> {
    enumerate_models_within(c, DEFAULT_ENUMERATION_BUDGET)
}

pub fn enumerate_models_within(c: &Circuit, budget: u32) -> Result<Vec<Model>, OracleError> {
    let mut out = Vec::new();
    for_each_model(c, budget, |a| {
        out.push(model_of(a, c.variable_count()));
        Ok(())
    })?;
    Ok(out)
}

/// Number of models, without materializing them.
pub fn count_models(c: &Circuit, budget: u32) -> Result<u64, OracleError> {
    let mut n = 0;
    for_each_model(c, budget, |_| {
        n += 1;
        Ok(())
    })?;
    Ok(n)
}

/// ⊗ of the labels of one model. A negative literal without a label (WHY,
/// RA+) contributes nothing.
fn weight_of(desc: &SemiringDescriptor, lab: &Labeling, assignment: u64, n: u32) -> Result<Value, OracleError> {
    let mut acc = desc.one();
    for v in 1..=n {
        let lit = Literal::new(v, assignment >> (v - 1) & 1 == 1);
        let label = match lab.label(lit) {
            Ok(l) => l,
            Err(LabelError::UnsupportedNegative { .. }) => continue,
            Err(e) => return Err(e.into()),
        };
        acc = desc.times(&acc, label)?;
    }
    Ok(acc)
}

/// A(T): ⊕ over the models of `c` of the ⊗ of their literal labels.
pub fn amc_brute_force(c: &Circuit, desc: &SemiringDescriptor, lab: &Labeling) -> Result<Value, OracleError> {
    amc_brute_force_within(c, desc, lab, DEFAULT_ENUMERATION_BUDGET)
}

pub fn amc_brute_force_within(
    c: &Circuit,
    desc: &SemiringDescriptor,
    lab: &Labeling,
    budget: u32,
) -> Result<Value, OracleError> {
    let n = c.variable_count();
    let mut acc = desc.zero();
    for_each_model(c, budget, |a| {
        let w = weight_of(desc, lab, a, n)?;
        acc = desc.plus(&acc, &w)?;
        Ok(())
    })?;
    Ok(acc)
}

/// A(T) over an explicit model list, each model a total assignment.
pub fn amc_over_models(models: &[Model], desc: &SemiringDescriptor, lab: &Labeling) -> Result<Value, OracleError> {
    let mut acc = desc.zero();
    for m in models {
        let mut w = desc.one();
        for &lit in m {
            match lab.label(lit) {
                Ok(l) => w = desc.times(&w, l)?,
                Err(LabelError::UnsupportedNegative { .. }) => {}
                Err(e) => return Err(e.into()),
            }
        }
        acc = desc.plus(&acc, &w)?;
    }
    Ok(acc)
}

/// Truth table of `c` as a list of satisfying assignment numbers.
pub fn model_set(c: &Circuit, budget: u32) -> Result<Vec<u64>, OracleError> {
    let mut out = Vec::new();
    for_each_model(c, budget, |a| {
        out.push(a);
        Ok(())
    })?;
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circuit::{parse_nnf, CircuitBuilder};
    use crate::semiring::SemiringParams;

    const XOR_NNF: &str = "nnf 7 6 2\nL 1\nL -2\nA 2 0 1\nL -1\nL 2\nA 2 3 4\nO 0 2 2 5\n";

    fn lits(codes: &[i32]) -> Model {
        codes.iter().map(|&c| Literal::from_dimacs(c).unwrap()).collect()
    }

    fn or_ab() -> Circuit {
        parse_nnf("nnf 3 2 2\nL 1\nL 2\nO 0 2 0 1\n").unwrap()
    }

    fn desc(name: &str) -> SemiringDescriptor {
        SemiringDescriptor::builtin(name, &SemiringParams::default()).unwrap()
    }

    #[test]
    fn xor_models_in_order() {
        let c = parse_nnf(XOR_NNF).unwrap();
        assert_eq!(enumerate_models(&c).unwrap(), vec![lits(&[1, -2]), lits(&[-1, 2])]);
    }

    #[test]
    fn constants() {
        let t = Circuit::constant(true).with_variable_count(1);
        assert_eq!(enumerate_models(&t).unwrap(), vec![lits(&[-1]), lits(&[1])]);
        assert!(enumerate_models(&Circuit::constant(false)).unwrap().is_empty());
        assert_eq!(enumerate_models(&Circuit::constant(true)).unwrap(), vec![Vec::new()]);
    }

    #[test]
    fn budget_is_enforced() {
        let c = Circuit::constant(true).with_variable_count(30);
        assert_eq!(
            enumerate_models(&c),
            Err(OracleError::OverBudget {
                variables: 30,
                budget: 24
            })
        );
    }

    #[test]
    fn many_variables_use_several_blocks() {
        // v1 ∧ v8 over 8 variables: 2^6 models, spread over four blocks.
        let mut b = CircuitBuilder::new(8);
        let x = b.literal(Literal::positive(1));
        let y = b.literal(Literal::positive(8));
        let r = b.and(vec![x, y]);
        let c = b.finish(r);
        let set = model_set(&c, 24).unwrap();
        assert_eq!(set.len(), 64);
        assert!(set.iter().all(|a| a & 1 == 1 && a >> 7 & 1 == 1));
        assert!(set.windows(2).all(|w| w[0] < w[1]));
    }

    #[test]
    fn worked_counterexamples() {
        let c = or_ab();
        let prob = desc("prob");
        let lab = Labeling::from_probabilities(&prob, &[0.6, 0.3]).unwrap();
        let v = amc_brute_force(&c, &prob, &lab).unwrap();
        assert!(v.approx_eq(&Value::Real(0.72), 1e-12), "{v}");
        let mpe = desc("mpe");
        let lab = Labeling::from_probabilities(&mpe, &[0.6, 0.3]).unwrap();
        let v = amc_brute_force(&c, &mpe, &lab).unwrap();
        assert!(v.approx_eq(&Value::Real(0.42), 1e-12), "{v}");
    }

    #[test]
    fn count_and_sat_agree_with_enumeration() {
        let c = parse_nnf(XOR_NNF).unwrap();
        let count = desc("#sat");
        let lab = Labeling::canonical(&count, 2).unwrap();
        assert_eq!(amc_brute_force(&c, &count, &lab).unwrap(), Value::nat(2));
        let sat = desc("sat");
        let lab = Labeling::canonical(&sat, 2).unwrap();
        assert_eq!(amc_brute_force(&c, &sat, &lab).unwrap(), Value::Bool(true));
        assert_eq!(
            amc_brute_force(&Circuit::constant(false).with_variable_count(2), &sat, &lab).unwrap(),
            Value::Bool(false)
        );
    }

    #[test]
    fn explicit_models_match_enumeration() {
        let c = or_ab();
        let prob = desc("prob");
        let lab = Labeling::from_probabilities(&prob, &[0.25, 0.5]).unwrap();
        let models = enumerate_models(&c).unwrap();
        assert_eq!(
            amc_over_models(&models, &prob, &lab).unwrap(),
            amc_brute_force(&c, &prob, &lab).unwrap()
        );
    }

    #[test]
    fn positive_only_semirings_skip_negative_literals() {
        let why = desc("why");
        let lab = Labeling::canonical(&why, 2).unwrap();
        // Models of a ∨ b: {a,¬b}, {¬a,b}, {a,b}; each contributes its positive variables.
        assert_eq!(amc_brute_force(&or_ab(), &why, &lab).unwrap(), Value::set([1, 2]));
    }
}

mod common;

use amc::circuit::Circuit;
use amc::lit::Literal;
use amc::oracle::{amc_brute_force, amc_brute_force_within, count_models, enumerate_models, OracleError};
use amc::semiring::{Labeling, Value};
use common::*;

fn lits(codes: &[i32]) -> Vec<Literal> {
    codes.iter().map(|&c| Literal::from_dimacs(c).unwrap()).collect()
}

#[test]
fn models_are_listed_in_assignment_order() {
    assert_eq!(enumerate_models(&xor()).unwrap(), vec![lits(&[1, -2]), lits(&[-1, 2])]);
    let t = Circuit::constant(true).with_variable_count(1);
    assert_eq!(enumerate_models(&t).unwrap(), vec![lits(&[-1]), lits(&[1])]);
    assert!(enumerate_models(&Circuit::constant(false)).unwrap().is_empty());
}

#[test]
fn brute_force_values() {
    let d = builtin("prob", 2);
    let lab = Labeling::from_probabilities(&d, &[0.6, 0.3]).unwrap();
    assert!(amc_brute_force(&or_ab(), &d, &lab).unwrap().approx_eq(&Value::Real(0.72), 1e-12));
    let d = builtin("mpe", 2);
    let lab = Labeling::from_probabilities(&d, &[0.6, 0.3]).unwrap();
    assert!(amc_brute_force(&or_ab(), &d, &lab).unwrap().approx_eq(&Value::Real(0.42), 1e-12));
    let d = builtin("#sat", 2);
    let lab = Labeling::canonical(&d, 2).unwrap();
    assert_eq!(amc_brute_force(&xor(), &d, &lab).unwrap(), Value::nat(2));
    assert_eq!(amc_brute_force(&overlap(), &d, &lab).unwrap(), Value::nat(2));
}

#[test]
fn budget_is_enforced() {
    let wide = Circuit::constant(true).with_variable_count(30);
    assert_eq!(
        count_models(&wide, 24),
        Err(OracleError::OverBudget { variables: 30, budget: 24 })
    );
    assert_eq!(count_models(&wide, 30).unwrap(), 1 << 30);
    let d = builtin("#sat", 2);
    let lab = Labeling::canonical(&d, 2).unwrap();
    assert!(amc_brute_force_within(&xor(), &d, &lab, 1).is_err());
}

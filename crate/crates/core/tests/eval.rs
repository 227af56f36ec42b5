mod common;

use amc::circuit::{parse_nnf, CircuitClass};
use amc::eval::{
    evaluate, evaluate_checked, is_sound, required_circuit_class, task_profile_of, EvalError, EvalOptions,
    Mode, Status,
};
use amc::semiring::{Builtin, Labeling, TaskProfile, Value};
use common::*;

fn class(name: &str) -> CircuitClass {
    CircuitClass::from_name(name).unwrap()
}

fn probs(name: &str, p: &[f64]) -> (amc::semiring::SemiringDescriptor, Labeling) {
    let d = builtin(name, p.len() as u32);
    let lab = Labeling::from_probabilities(&d, p).unwrap();
    (d, lab)
}

fn real(v: &Value) -> f64 {
    v.as_real().unwrap()
}

#[test]
fn counting() {
    let d = builtin("#sat", 2);
    let lab = Labeling::canonical(&d, 2).unwrap();
    assert_eq!(evaluate(&xor(), &d, &lab).unwrap(), Value::nat(2));
    assert_eq!(evaluate(&overlap(), &d, &lab).unwrap(), Value::nat(4));
}

#[test]
fn unchecked_evaluation_on_unsuitable_circuits() {
    let (d, lab) = probs("prob", &[0.6, 0.3]);
    assert!((real(&evaluate(&or_ab(), &d, &lab).unwrap()) - 0.9).abs() < 1e-12);
    let (d, lab) = probs("mpe", &[0.6, 0.3]);
    assert!((real(&evaluate(&or_ab(), &d, &lab).unwrap()) - 0.6).abs() < 1e-12);
}

#[test]
fn shortest_path() {
    // st = 1, sr = 2, rt = 3
    let c = parse_nnf("nnf 5 4 3\nL 1\nL 2\nL 3\nA 2 1 2\nO 0 2 0 3\n").unwrap();
    let d = builtin("s-path", 3);
    let zero = Value::nat(0);
    let lab = Labeling::new(
        &d,
        vec![Value::nat(5), Value::nat(1), Value::nat(2)],
        vec![Some(zero.clone()), Some(zero.clone()), Some(zero)],
    )
    .unwrap();
    assert_eq!(evaluate(&c, &d, &lab).unwrap(), Value::nat(3));
    let checked = evaluate_checked(&c, &d, &lab, EvalOptions::default()).unwrap();
    assert_eq!(checked.status, Status::Sound);
}

#[test]
fn required_classes() {
    assert_eq!(required_circuit_class(TaskProfile::new(false, false, false)), class("sd-DNNF"));
    assert_eq!(required_circuit_class(TaskProfile::new(true, true, false)), class("DNNF"));
    assert_eq!(required_circuit_class(TaskProfile::new(true, true, true)), class("NNF"));
    assert_eq!(required_circuit_class(TaskProfile::new(false, true, false)), class("d-DNNF"));
    assert_eq!(required_circuit_class(TaskProfile::new(true, false, false)), class("s-DNNF"));
}

#[test]
fn soundness() {
    for b in Builtin::ALL {
        assert!(is_sound(class("sd-DNNF"), b.canonical_profile()), "{}", b.name());
    }
    assert!(!is_sound(class("DNNF"), Builtin::Count.canonical_profile()));
    assert!(is_sound(class("s-DNNF"), Builtin::Mpe.canonical_profile()));
}

#[test]
fn profiles_of_canonical_labelings() {
    let cases = [("prob", "d-DNNF"), ("fuzzy", "DNNF"), ("mpe", "s-DNNF"), ("wmc", "sd-DNNF")];
    for (name, want) in cases {
        let (d, lab) = probs(name, &[0.6, 0.3]);
        assert_eq!(required_circuit_class(task_profile_of(&d, &lab)), class(want), "{name}");
    }
    let d = builtin("obdd", 2);
    let lab = Labeling::canonical(&d, 2).unwrap();
    assert_eq!(task_profile_of(&d, &lab), TaskProfile::new(true, true, true));
}

#[test]
fn profile_reflects_the_labeling() {
    // PROB labels that do not sum to one lose neutrality.
    let d = builtin("prob", 1);
    let lab = Labeling::new(&d, vec![Value::Real(0.5)], vec![Some(Value::Real(0.7))]).unwrap();
    assert_eq!(required_circuit_class(task_profile_of(&d, &lab)), class("sd-DNNF"));
}

#[test]
fn repair_smooths_for_mpe() {
    let (d, lab) = probs("mpe", &[0.6, 0.3]);
    let opts = EvalOptions::default().with_mode(Mode::Repair);
    let r = evaluate_checked(&or_ab(), &d, &lab, opts).unwrap();
    assert_eq!(r.status, Status::Repaired);
    assert!((real(&r.value) - 0.42).abs() < 1e-12);
}

#[test]
fn strict_refuses_prob_on_a_shared_model() {
    let (d, lab) = probs("prob", &[0.6, 0.3]);
    let e = evaluate_checked(&or_ab(), &d, &lab, EvalOptions::default()).unwrap_err();
    let EvalError::Refused { missing, required, .. } = &e else {
        panic!("expected refusal, got {e}");
    };
    assert_eq!(missing, &vec!["determinism"]);
    assert_eq!(*required, class("d-DNNF"));
    // Smoothing cannot supply determinism.
    let opts = EvalOptions::default().with_mode(Mode::Repair);
    assert!(evaluate_checked(&or_ab(), &d, &lab, opts).is_err());
}

#[test]
fn force_evaluates_and_flags() {
    let (d, lab) = probs("prob", &[0.6, 0.3]);
    let opts = EvalOptions::default().with_mode(Mode::Force);
    let r = evaluate_checked(&or_ab(), &d, &lab, opts).unwrap();
    assert_eq!(r.status, Status::Unsound);
    assert!((real(&r.value) - 0.9).abs() < 1e-12);
}

#[test]
fn sd_dnnf_is_never_refused() {
    let (d, lab) = probs("wmc", &[0.2, 0.9]);
    let r = evaluate_checked(&xor(), &d, &lab, EvalOptions::default()).unwrap();
    assert_eq!(r.status, Status::Sound);
    assert!((real(&r.value) - (0.2 * 0.1 + 0.8 * 0.9)).abs() < 1e-12);
}

#[test]
fn root_extension_covers_unmentioned_variables() {
    let c = parse_nnf("nnf 1 0 3\nL 2\n").unwrap();
    let d = builtin("#sat", 3);
    let lab = Labeling::canonical(&d, 3).unwrap();
    let r = evaluate_checked(&c, &d, &lab, EvalOptions::default()).unwrap();
    assert_eq!(r.value, Value::nat(4));
    assert_eq!(r.extended, vec![1, 3]);
    let opts = EvalOptions {
        extend_root: false,
        ..EvalOptions::default()
    };
    assert_eq!(evaluate_checked(&c, &d, &lab, opts).unwrap().value, Value::nat(1));
}

#[test]
fn labeling_must_cover_the_circuit() {
    let d = builtin("#sat", 1);
    let lab = Labeling::canonical(&d, 1).unwrap();
    let e = evaluate_checked(&xor(), &d, &lab, EvalOptions::default()).unwrap_err();
    assert_eq!(e, EvalError::LabelingTooSmall { labeled: 1, needed: 2 });
}

#[test]
fn modes_parse() {
    for m in ["strict", "repair", "force"] {
        assert_eq!(m.parse::<Mode>().unwrap().to_string(), m);
    }
    assert!("lenient".parse::<Mode>().is_err());
}

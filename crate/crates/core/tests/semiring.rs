mod common;

use amc::lit::Literal;
use amc::semiring::{
    check_axioms, check_pair_properties, parse_labeling, write_labeling, Builtin, Labeling, Law,
    SemiringDescriptor, SemiringParams, Value,
};
use common::*;

fn lit(code: i32) -> Literal {
    Literal::from_dimacs(code).unwrap()
}

#[test]
fn operations() {
    let prob = builtin("prob", 2);
    let s = prob.plus(&Value::Real(0.6), &Value::Real(0.3)).unwrap();
    assert!(s.approx_eq(&Value::Real(0.9), 1e-12));

    let grad = builtin("grad", 2);
    assert_eq!(grad.plus(&Value::Pair(0.2, 1.0), &Value::Pair(0.5, 0.0)).unwrap(), Value::Pair(0.7, 1.0));
    let p = grad.times(&Value::Pair(0.6, 1.0), &Value::Pair(0.3, 0.0)).unwrap();
    assert!(p.approx_eq(&Value::Pair(0.18, 0.3), 1e-12));

    let kw = SemiringDescriptor::builtin("kweight", &SemiringParams::with_k(10)).unwrap();
    assert_eq!(kw.times(&Value::nat(7), &Value::nat(6)).unwrap(), Value::nat(10));

    let sp = builtin("s-path", 2);
    assert_eq!(sp.times(&Value::infinity(), &Value::nat(3)).unwrap(), Value::infinity());
}

#[test]
fn zero_is_the_plus_identity_everywhere() {
    let mut rng = rand::thread_rng();
    for b in Builtin::ALL {
        let d = builtin(b.name(), 3);
        for _ in 0..20 {
            let x = d.sample(&mut rng);
            assert!(d.values_equal(&d.plus(&d.zero(), &x).unwrap(), &x), "{}", b.name());
        }
    }
}

#[test]
fn identities_of_selected_builtins() {
    let sp = builtin("s-path", 1);
    assert_eq!((sp.zero(), sp.one()), (Value::infinity(), Value::nat(0)));
    let fz = builtin("fuzzy", 1);
    assert_eq!((fz.zero(), fz.one()), (Value::Real(0.0), Value::Real(1.0)));
    assert_eq!(fz.plus(&Value::Real(0.2), &Value::Real(0.7)).unwrap(), Value::Real(0.7));
    assert_eq!(fz.times(&Value::Real(0.2), &Value::Real(0.7)).unwrap(), Value::Real(0.2));
    let wp = builtin("w-path", 1);
    assert_eq!((wp.zero(), wp.one()), (Value::nat(0), Value::infinity()));
}

#[test]
fn labels() {
    let grad = builtin("grad", 2);
    let lab = Labeling::from_probabilities(&grad, &[0.6, 0.3]).unwrap();
    assert_eq!(lab.label(lit(1)).unwrap(), &Value::Pair(0.6, 1.0));
    assert!(lab.label(lit(-1)).unwrap().approx_eq(&Value::Pair(0.4, -1.0), 1e-12));
    assert_eq!(lab.label(lit(2)).unwrap(), &Value::Pair(0.3, 0.0));

    let why = builtin("why", 3);
    let lab = Labeling::canonical(&why, 3).unwrap();
    assert_eq!(lab.label(lit(3)).unwrap(), &Value::set([3]));
    assert!(lab.label(lit(-3)).is_err());
    assert!(lab.label(lit(4)).is_err());
}

#[test]
fn names_resolve() {
    for b in Builtin::ALL {
        assert_eq!(Builtin::from_name(b.name()), Some(b));
    }
    assert_eq!(Builtin::from_name("count"), Some(Builtin::Count));
    assert!(SemiringDescriptor::builtin("tropical", &SemiringParams::default()).is_err());
    assert!(SemiringDescriptor::builtin("kweight", &SemiringParams::default()).is_err());
}

#[test]
fn axiom_checks() {
    assert!(check_axioms(&builtin("prob", 1), 1000, 0).all_passed());
    assert!(check_axioms(&builtin("kweight", 1), 1000, 0).all_passed());
    let why = check_axioms(&builtin("why", 3), 1000, 0);
    let failed: Vec<Law> = why.failures().map(|l| l.law).collect();
    assert_eq!(failed, vec![Law::Annihilation]);
    assert!(why.law(Law::Annihilation).counterexample.is_some());
}

#[test]
fn pair_properties() {
    let prob = builtin("prob", 1);
    let lab = Labeling::from_probabilities(&prob, &[0.6]).unwrap();
    assert!(check_pair_properties(&prob, &lab).pair_neutral);
    let mpe = builtin("mpe", 1);
    let lab = Labeling::from_probabilities(&mpe, &[0.6]).unwrap();
    assert!(!check_pair_properties(&mpe, &lab).pair_neutral);
    let obdd = builtin("obdd", 2);
    let lab = Labeling::canonical(&obdd, 2).unwrap();
    assert!(check_pair_properties(&obdd, &lab).times_idempotent_consistency_preserving);
}

#[test]
fn labeling_files_round_trip() {
    let text = "# weights\nsemiring PROB # inline\nvars 2\n1 0.6 0.4\n2 0.3 0.7\n";
    let (d, lab) = parse_labeling(text).unwrap();
    assert_eq!(d.name(), "PROB");
    assert_eq!(lab.pos(2), &Value::Real(0.3));
    let again = write_labeling(&d, &lab).unwrap();
    let (d2, lab2) = parse_labeling(&again).unwrap();
    assert_eq!(d2.name(), d.name());
    assert_eq!(lab2, lab);
}

#[test]
fn labeling_files_report_lines() {
    let e = parse_labeling("semiring PROB\nvars 1\n1 -0.5 0.4\n").unwrap_err();
    assert_eq!(e.line, 3);
    assert!(parse_labeling("vars 1\n1 0.5 0.5\n").is_err());
}

#[test]
fn diagram_labeling_files_default_to_ascending_order() {
    let (d, lab) = parse_labeling("semiring OBDD\nvars 2\n1 x ~x\n2 true false\n").unwrap();
    assert_eq!(d.params().order, Some(vec![1, 2]));
    assert_eq!(lab.variable_count(), 2);
}

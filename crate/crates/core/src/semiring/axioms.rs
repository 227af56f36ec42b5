//! Randomized checks of the semiring laws and of labeling-dependent properties.

use std::fmt;

use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::{Labeling, SemiringDescriptor, SemiringError, TaskProfile, Value};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum Law {
    PlusAssociative,
    PlusCommutative,
    TimesAssociative,
    TimesCommutative,
    Distributive,
    PlusIdentity,
    TimesIdentity,
    Annihilation,
}

impl Law {
    pub const ALL: [Law; 8] = [
        Law::PlusAssociative,
        Law::PlusCommutative,
        Law::TimesAssociative,
        Law::TimesCommutative,
        Law::Distributive,
        Law::PlusIdentity,
        Law::TimesIdentity,
        Law::Annihilation,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Law::PlusAssociative => "plus associativity",
            Law::PlusCommutative => "plus commutativity",
            Law::TimesAssociative => "times associativity",
            Law::TimesCommutative => "times commutativity",
            Law::Distributive => "distributivity",
            Law::PlusIdentity => "plus identity",
            Law::TimesIdentity => "times identity",
            Law::Annihilation => "annihilation",
        }
    }

    fn arity(self) -> usize {
        match self {
            Law::PlusAssociative | Law::TimesAssociative | Law::Distributive => 3,
            Law::PlusCommutative | Law::TimesCommutative => 2,
            Law::PlusIdentity | Law::TimesIdentity | Law::Annihilation => 1,
        }
    }
}

impl fmt::Display for Law {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LawResult {
    pub law: Law,
    pub passed: bool,
    /// Operands of the first failing trial, printed in the value grammar.
    pub counterexample: Option<Vec<String>>,
    /// Set when an operation errored instead of returning a value.
    pub error: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AxiomReport {
    pub semiring: String,
    pub trials: usize,
    pub seed: u64,
    pub laws: Vec<LawResult>,
    /// Whether a ⊕ a = a held on every sample.
    pub plus_idempotent_sampled: bool,
    /// Whether a ⊗ a = a held on every sample.
    pub times_idempotent_sampled: bool,
}

impl AxiomReport {
    pub fn all_passed(&self) -> bool {
        self.laws.iter().all(|l| l.passed)
    }

    pub fn failures(&self) -> impl Iterator<Item = &LawResult> {
        self.laws.iter().filter(|l| !l.passed)
    }

    pub fn law(&self, law: Law) -> &LawResult {
        self.laws.iter().find(|l| l.law == law).expect("every law is checked")
    }
}

/// Checks every law on `trials` random operand tuples drawn with the
/// semiring's own sampler from a ChaCha generator seeded with `seed`.
pub fn check_axioms(desc: &SemiringDescriptor, trials: usize, seed: u64) -> AxiomReport {
    let d = desc.clone();
    check_axioms_with(desc, |rng| d.sample(rng), trials, seed)
}

/// Like [`check_axioms`] with a caller-supplied carrier sampler.
pub fn check_axioms_with(
    desc: &SemiringDescriptor,
    mut sampler: impl FnMut(&mut dyn RngCore) -> Value,
    trials: usize,
    seed: u64,
) -> AxiomReport {
    assert!(trials >= 1, "at least one trial is needed");
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut laws: Vec<LawResult> = Law::ALL
        .iter()
        .map(|&law| LawResult {
            law,
            passed: true,
            counterexample: None,
            error: None,
        })
        .collect();
    let mut plus_idem = true;
    let mut times_idem = true;
    for _ in 0..trials {
        let xs: Vec<Value> = (0..3).map(|_| sampler(&mut rng)).collect();
        for r in laws.iter_mut().filter(|r| r.passed) {
            match holds(desc, r.law, &xs) {
                Ok(true) => {}
                Ok(false) => {
                    r.passed = false;
                    r.counterexample = Some(xs[..r.law.arity()].iter().map(|x| x.to_string()).collect());
                }
                Err(e) => {
                    r.passed = false;
                    r.counterexample = Some(xs[..r.law.arity()].iter().map(|x| x.to_string()).collect());
                    r.error = Some(e.to_string());
                }
            }
        }
        let a = &xs[0];
        plus_idem &= desc.plus(a, a).is_ok_and(|s| desc.values_equal(&s, a));
        times_idem &= desc.times(a, a).is_ok_and(|p| desc.values_equal(&p, a));
    }
    AxiomReport {
        semiring: desc.name().to_string(),
        trials,
        seed,
        laws,
        plus_idempotent_sampled: plus_idem,
        times_idempotent_sampled: times_idem,
    }
}

fn holds(d: &SemiringDescriptor, law: Law, xs: &[Value]) -> Result<bool, SemiringError> {
    let (a, b, c) = (&xs[0], &xs[1], &xs[2]);
    let eq = |x: &Value, y: &Value| d.values_equal(x, y);
    Ok(match law {
        Law::PlusAssociative => eq(&d.plus(&d.plus(a, b)?, c)?, &d.plus(a, &d.plus(b, c)?)?),
        Law::PlusCommutative => eq(&d.plus(a, b)?, &d.plus(b, a)?),
        Law::TimesAssociative => eq(&d.times(&d.times(a, b)?, c)?, &d.times(a, &d.times(b, c)?)?),
        Law::TimesCommutative => eq(&d.times(a, b)?, &d.times(b, a)?),
        Law::Distributive => eq(
            &d.times(a, &d.plus(b, c)?)?,
            &d.plus(&d.times(a, b)?, &d.times(a, c)?)?,
        ),
        Law::PlusIdentity => eq(&d.plus(&d.zero(), a)?, a) && eq(&d.plus(a, &d.zero())?, a),
        Law::TimesIdentity => eq(&d.times(&d.one(), a)?, a) && eq(&d.times(a, &d.one())?, a),
        Law::Annihilation => {
            eq(&d.times(&d.zero(), a)?, &d.zero()) && eq(&d.times(a, &d.zero())?, &d.zero())
        }
    })
}

/// Whether a ⊕ a = a and a ⊗ a = a held on `trials` sampled elements.
fn sample_idempotence(desc: &SemiringDescriptor, trials: usize, seed: u64) -> (bool, bool) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let (mut plus, mut times) = (true, true);
    for _ in 0..trials {
        let a = desc.sample(&mut rng);
        plus &= desc.plus(&a, &a).is_ok_and(|s| desc.values_equal(&s, &a));
        times &= desc.times(&a, &a).is_ok_and(|p| desc.values_equal(&p, &a));
        if !plus && !times {
            break;
        }
    }
    (plus, times)
}

/// Seed of the idempotence sampling inside [`check_pair_properties`].
const PAIR_PROPERTY_SEED: u64 = 0x5eed;
const PAIR_PROPERTY_TRIALS: usize = 200;

/// The three labeling-dependent properties. Idempotence is sampled from the
/// carrier and also checked on every label; neutrality and consistency
/// preservation are checked on every variable. A variable without a negative
/// label is neither neutral nor consistency-preserving.
pub fn check_pair_properties(desc: &SemiringDescriptor, lab: &Labeling) -> TaskProfile {
    let (plus_sampled, times_sampled) = sample_idempotence(desc, PAIR_PROPERTY_TRIALS, PAIR_PROPERTY_SEED);
    let labels = (1..=lab.variable_count()).flat_map(|v| std::iter::once(lab.pos(v)).chain(lab.neg(v)));
    let idem = |op: fn(&SemiringDescriptor, &Value, &Value) -> Result<Value, SemiringError>| {
        labels
            .clone()
            .all(|a| op(desc, a, a).is_ok_and(|r| desc.values_equal(&r, a)))
    };
    let plus_idempotent = plus_sampled && idem(SemiringDescriptor::plus);
    let times_idempotent = times_sampled && idem(SemiringDescriptor::times);

    let pairs = || (1..=lab.variable_count()).map(|v| (lab.pos(v), lab.neg(v)));
    let pair_neutral = pairs().all(|(p, n)| {
        n.is_some_and(|n| desc.plus(p, n).is_ok_and(|s| desc.values_equal(&s, &desc.one())))
    });
    let consistency_preserving = pairs().all(|(p, n)| {
        n.is_some_and(|n| desc.times(p, n).is_ok_and(|s| desc.values_equal(&s, &desc.zero())))
    });
    TaskProfile::new(
        plus_idempotent,
        pair_neutral,
        times_idempotent && consistency_preserving,
    )
}

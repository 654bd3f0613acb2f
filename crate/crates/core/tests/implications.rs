//! Implication sweeps over seeded structured instances: whenever the
//! hypotheses of a result hold, its conclusions must hold too.

use tpn_core::axioms::{run_ids, CheckOptions, IdentityId as Id, Instance};
use tpn_core::construct::extend_bracket;
use tpn_core::corpus::random_structured_system;
use tpn_core::AlgebraSystem;

const SEEDS: u64 = 160;
// Roughly half of the draws carry a genuine derivation.
const DERIVATION_SEEDS: u64 = 320;

fn opts() -> CheckOptions {
    CheckOptions::default().pruned()
}

fn all_pass(sys: &AlgebraSystem, with_d: bool, ids: &[Id]) -> bool {
    let mut inst = Instance::new(sys.product()).with_bracket(sys.bracket("b").unwrap());
    if with_d {
        inst = inst.with_derivation(sys.derivation("d").unwrap());
    }
    run_ids(&inst, ids, opts()).unwrap().iter().all(|r| r.passed())
}

fn systems(arity: usize) -> impl Iterator<Item = AlgebraSystem> {
    draws(arity, SEEDS)
}

fn draws(arity: usize, count: u64) -> impl Iterator<Item = AlgebraSystem> {
    (0..count).map(move |s| random_structured_system(arity, s).unwrap())
}

#[test]
fn np_identities_follow_from_nl_and_tp() {
    for arity in [2, 3] {
        let mut qualifying = 0;
        for sys in systems(arity) {
            if all_pass(&sys, false, &[Id::COMM, Id::ASSOC, Id::NL, Id::TP]) {
                qualifying += 1;
                assert!(all_pass(&sys, false, &[Id::NP1, Id::NP2, Id::NP3, Id::NP4]), "arity {arity}");
            }
        }
        assert!(qualifying >= 100, "arity {arity}: only {qualifying} instances qualified");
    }
}

#[test]
fn scale_follows_from_strong_structure() {
    for arity in [2, 3] {
        let mut qualifying = 0;
        for sys in systems(arity) {
            if all_pass(&sys, false, &[Id::COMM, Id::ASSOC, Id::NL, Id::TP, Id::STRONG]) {
                qualifying += 1;
                assert!(all_pass(&sys, false, &[Id::SCALE]), "arity {arity}");
            }
        }
        assert!(qualifying >= 100, "arity {arity}: only {qualifying} instances qualified");
    }
}

#[test]
fn lemma_identities_follow_from_derivation_hypotheses() {
    for arity in [2, 3] {
        let mut qualifying = 0;
        for sys in draws(arity, DERIVATION_SEEDS) {
            if all_pass(&sys, true, &[Id::COMM, Id::ASSOC, Id::NL, Id::TP, Id::DER_MUL, Id::DER_BRK]) {
                qualifying += 1;
                assert!(all_pass(&sys, true, &[Id::LEM1, Id::LEM2]), "arity {arity}");
            }
        }
        assert!(qualifying >= 100, "arity {arity}: only {qualifying} instances qualified");
    }
}

#[test]
fn binary_brackets_are_strong() {
    let mut qualifying = 0;
    for sys in systems(2) {
        if all_pass(&sys, false, &[Id::COMM, Id::ASSOC, Id::TP]) {
            qualifying += 1;
            assert!(all_pass(&sys, false, &[Id::STRONG]));
        }
    }
    assert!(qualifying >= 100, "only {qualifying} instances qualified");
}

#[test]
fn extension_of_strong_structure_is_strong() {
    let full = [Id::NL, Id::TP, Id::STRONG];
    for arity in [2, 3] {
        let mut qualifying = 0;
        for sys in draws(arity, DERIVATION_SEEDS) {
            let premise = all_pass(&sys, false, &[Id::COMM, Id::ASSOC, Id::NL, Id::TP, Id::STRONG])
                && all_pass(&sys, true, &[Id::DER_MUL, Id::DER_BRK]);
            if !premise {
                continue;
            }
            qualifying += 1;
            let ext = extend_bracket(sys.product(), sys.bracket("b").unwrap(), sys.derivation("d").unwrap()).unwrap();
            let reports = run_ids(&Instance::new(sys.product()).with_bracket(&ext), &full, opts()).unwrap();
            for r in reports {
                assert!(r.passed(), "arity {arity}: {} failed at {:?}", r.identity, r.counterexample);
            }
        }
        assert!(qualifying >= 100, "arity {arity}: only {qualifying} instances qualified");
    }
}

#[test]
fn structured_draws_include_rejections() {
    // The filters above must have something to filter.
    let rejected = systems(2).filter(|sys| !all_pass(sys, true, &[Id::DER_MUL, Id::DER_BRK])).count();
    assert!(rejected > 0);
}

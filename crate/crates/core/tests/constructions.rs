use tpn_core::axioms::{check_derivation, run_ids, run_suite, CheckOptions, IdentityId, Instance, Status};
use tpn_core::construct::{build_tower, derivation_bracket, extend_bracket};
use tpn_core::corpus::{
    formal_derivative, make_tensor_trunc, make_truncated_poly, make_zero_bracket_system, MonomialAlgebra,
};
use tpn_core::{AlgebraSystem, DerivationMatrix, ElementVector, Rational, SkewBracket};

fn opts() -> CheckOptions {
    CheckOptions::default().pruned()
}

#[test]
fn tp22_extension_has_single_entry_and_is_strong() {
    let sys = make_tensor_trunc(2, 2).unwrap();
    let b = sys.bracket("b_d1").unwrap();
    // [1,s] = s, [1,st] = st, [s,t] = -st.
    let expected: Vec<(Vec<usize>, ElementVector)> = vec![
        (vec![0, 1], ElementVector::basis(4, 1)),
        (vec![0, 3], ElementVector::basis(4, 3)),
        (vec![1, 2], ElementVector::from_integers(&[0, 0, 0, -1])),
    ];
    let stored: Vec<_> = b.entries().iter().map(|(k, v)| (k.clone(), v.clone())).collect();
    assert_eq!(stored, expected);

    let mu = extend_bracket(sys.product(), b, sys.derivation("d2").unwrap()).unwrap();
    assert_eq!(mu.arity(), 3);
    assert_eq!(mu.entries().len(), 1);
    assert_eq!(mu.entry(&[0, 1, 2]), Some(&ElementVector::basis(4, 3)));

    let reports =
        run_ids(&Instance::new(sys.product()).with_bracket(&mu), &IdentityId::STRUCTURE, CheckOptions::default())
            .unwrap();
    for r in &reports {
        assert!(r.passed(), "{}", r.identity);
    }
    assert_eq!(reports[0].identity, IdentityId::NL);
    assert_eq!(reports[0].tuples_checked, 1024);
    assert_eq!(reports[1].tuples_checked, 256);
}

/// Exponent-vector oracle for `Q[s,t]/(s^a, t^b)` with brackets from the two
/// grading derivations: the extension of `[x,y] = x d1(y) - y d1(x)` by `d2`
/// sends three monomials to their product times
/// `det [[1,1,1],[i1,i2,i3],[j1,j2,j3]]`.
#[test]
fn grading_extension_matches_determinant_oracle() {
    for (a, b) in [(2, 3), (3, 2), (3, 3)] {
        let sys = make_tensor_trunc(a, b).unwrap();
        let mu = extend_bracket(sys.product(), sys.bracket("b_d1").unwrap(), sys.derivation("d2").unwrap()).unwrap();
        let dim = a * b;
        // s-exponent varies fastest.
        let exps: Vec<(usize, usize)> = (0..dim).map(|k| (k % a, k / a)).collect();
        for p in 0..dim {
            for q in p + 1..dim {
                for r in q + 1..dim {
                    let (i1, j1) = exps[p];
                    let (i2, j2) = exps[q];
                    let (i3, j3) = exps[r];
                    let (is, js) = (i1 + i2 + i3, j1 + j2 + j3);
                    let mut expected = ElementVector::zero(dim);
                    if is < a && js < b {
                        let (i1, i2, i3, j1, j2, j3) =
                            (i1 as i64, i2 as i64, i3 as i64, j1 as i64, j2 as i64, j3 as i64);
                        let det = (i2 * j3 - i3 * j2) - (i1 * j3 - i3 * j1) + (i1 * j2 - i2 * j1);
                        expected[is + a * js] = Rational::from_integer(det);
                    }
                    assert_eq!(mu.basis_value(&[p, q, r]).unwrap(), expected, "({a},{b}) at ({p},{q},{r})");
                }
            }
        }
    }
}

#[test]
fn same_derivation_extension_collapses() {
    for m in 2..=8 {
        let sys = make_truncated_poly(m).unwrap();
        let mu = extend_bracket(sys.product(), sys.bracket("b1").unwrap(), sys.derivation("euler").unwrap()).unwrap();
        assert!(mu.is_zero(), "m = {m}");
    }
    let levels = build_tower(&make_truncated_poly(4).unwrap(), "b1", &["euler".into()], true, opts()).unwrap();
    assert!(levels[0].bracket.is_zero());
    assert!(levels[0].all_pass());
}

#[test]
fn tp22_tower_step_verifies() {
    let sys = make_tensor_trunc(2, 2).unwrap();
    let levels = build_tower(&sys, "b_d1", &["d2".into()], true, CheckOptions::default()).unwrap();
    assert_eq!(levels.len(), 1);
    assert_eq!(levels[0].reports.len(), IdentityId::STRUCTURE.len());
    assert!(levels[0].all_pass());
}

#[test]
fn three_variable_tower_reaches_arity_four() {
    let alg = MonomialAlgebra::new(&[2, 2, 2]).unwrap();
    let p = alg.product().clone();
    let seed = derivation_bracket(&p, &alg.grading(0)).unwrap();
    let sys = AlgebraSystem::new(p)
        .with_bracket("b", seed)
        .unwrap()
        .with_derivation("g1", alg.grading(1))
        .unwrap()
        .with_derivation("g2", alg.grading(2))
        .unwrap();
    let levels = build_tower(&sys, "b", &["g1".into(), "g2".into()], true, opts()).unwrap();
    assert_eq!(levels.len(), 2);
    assert_eq!(levels[1].bracket.arity(), 4);
    // Expanding along the last exponent row shows the arity-4 bracket is minus
    // the 4x4 determinant of exponent vectors, so only 1, r, s, t survive.
    assert_eq!(levels[1].bracket.entries().len(), 1);
    assert_eq!(levels[1].bracket.entry(&[0, 1, 2, 4]), Some(&ElementVector::from_integers(&[0, 0, 0, 0, 0, 0, 0, -1])));
    for level in &levels {
        assert!(level.all_pass(), "{:?}", level.reports.iter().filter(|r| !r.passed()).collect::<Vec<_>>());
    }
    // Level 0 also certifies g2 as a derivation of the arity-3 bracket.
    assert_eq!(levels[0].reports.len(), IdentityId::STRUCTURE.len() + 2);
}

#[test]
fn zero_seed_tower_stays_zero() {
    let sys = make_zero_bracket_system(make_truncated_poly(3).unwrap().product(), 2)
        .unwrap()
        .with_derivation("euler", make_truncated_poly(3).unwrap().derivation("euler").unwrap().clone())
        .unwrap();
    let names = vec!["euler".to_string(); 3];
    let levels = build_tower(&sys, "zero", &names, true, CheckOptions::default()).unwrap();
    for (k, level) in levels.iter().enumerate() {
        assert_eq!(level.bracket.arity(), 3 + k);
        assert!(level.bracket.is_zero());
        assert!(level.all_pass());
    }
}

#[test]
fn constructive_families_are_commutative_associative() {
    let mut systems: Vec<AlgebraSystem> = (2..=8).map(|m| make_truncated_poly(m).unwrap()).collect();
    for (a, b) in [(2, 2), (2, 3), (3, 2), (3, 3)] {
        systems.push(make_tensor_trunc(a, b).unwrap());
    }
    for sys in &systems {
        let r = run_ids(&Instance::new(sys.product()), &[IdentityId::COMM, IdentityId::ASSOC], opts()).unwrap();
        assert!(r.iter().all(|r| r.passed()), "dim {}", sys.dim());
        for n in 2..=4 {
            let z = make_zero_bracket_system(sys.product(), n).unwrap();
            let r = run_ids(&Instance::new(z.product()), &[IdentityId::COMM, IdentityId::ASSOC], opts()).unwrap();
            assert!(r.iter().all(|r| r.passed()));
        }
    }
}

#[test]
fn euler_is_a_derivation_of_every_truncation() {
    for m in 2..=8 {
        let sys = make_truncated_poly(m).unwrap();
        let (mul, brk) =
            check_derivation(sys.product(), sys.bracket("b1").unwrap(), sys.derivation("euler").unwrap(), opts())
                .unwrap();
        assert!(mul.passed() && brk.passed(), "m = {m}");
    }
}

#[test]
fn formal_derivative_first_failure() {
    for m in 2..=6 {
        let sys = make_truncated_poly(m).unwrap();
        let (mul, _) = check_derivation(
            sys.product(),
            sys.bracket("b1").unwrap(),
            &formal_derivative(m),
            CheckOptions::sequential(),
        )
        .unwrap();
        assert_eq!(mul.status, Status::Fail);
        let ce = mul.counterexample.unwrap();
        assert_eq!(ce.tuple, vec![1, m - 1], "m = {m}");
        let mut residual = ElementVector::zero(m);
        residual[m - 1] = Rational::from_integer(-(m as i64));
        assert_eq!(ce.residual, residual, "m = {m}");
    }
}

#[test]
fn zero_bracket_passes_everything() {
    let w4 = make_truncated_poly(4).unwrap();
    for n in 2..=6 {
        let sys = make_zero_bracket_system(w4.product(), n)
            .unwrap()
            .with_derivation("euler", w4.derivation("euler").unwrap().clone())
            .unwrap();
        let reports = run_suite(&sys, "zero", Some("euler"), &IdentityId::ALL, opts()).unwrap();
        assert_eq!(reports.len(), 14);
        assert!(reports.iter().all(|r| r.passed()), "arity {n}");
    }
}

#[test]
fn lemma_negative_control_is_recorded() {
    // D(e_k) = e_{k-1} is not a derivation; the lemma identities are run
    // anyway and the outcome is only printed.
    let sys = make_truncated_poly(4).unwrap();
    let shift = DerivationMatrix::from_fn(4, |k, j| if k + 1 == j { Rational::one() } else { Rational::zero() });
    let inst = Instance::new(sys.product()).with_bracket(sys.bracket("b1").unwrap()).with_derivation(&shift);
    let reports = run_ids(
        &inst,
        &[IdentityId::DER_MUL, IdentityId::DER_BRK, IdentityId::LEM1, IdentityId::LEM2],
        CheckOptions::sequential(),
    )
    .unwrap();
    assert!(!reports[0].passed());
    for r in &reports {
        println!("{} {} {:?}", r.identity, r.status.as_str(), r.counterexample.as_ref().map(|c| &c.tuple));
    }
}

#[test]
fn arity_above_dimension_is_zero() {
    let b = SkewBracket::zero(3, 5).unwrap();
    assert!(b.entries().is_empty());
    let sys = make_zero_bracket_system(make_truncated_poly(3).unwrap().product(), 5).unwrap();
    let reports = run_suite(&sys, "zero", None, &IdentityId::STRUCTURE, opts()).unwrap();
    assert!(reports.iter().all(|r| r.passed()));
}

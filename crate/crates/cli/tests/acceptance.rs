//! Acceptance gate. Prints one PASS/FAIL line per criterion and exits
//! nonzero if any criterion fails. All comparisons are exact.

use std::panic::{self, AssertUnwindSafe};
use std::path::{Path, PathBuf};
use std::process::{self, Command, Output};
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use tpn_cli::{load_system, parse_system, render_system};
use tpn_core::axioms::{evaluate_residual, run_ids, run_suite, CheckOptions, IdentityId as Id, Instance};
use tpn_core::construct::{derivation_bracket, extend_bracket};
use tpn_core::corpus::{
    formal_derivative, hunt_counterexample, make_tensor_trunc, make_truncated_poly, make_zero_bracket_system,
    random_structured_system, random_system, verify_finding,
};
use tpn_core::tuples::increasing_tuples;
use tpn_core::{AlgebraSystem, CheckReport, DerivationMatrix, ElementVector, Rational, SkewBracket};

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

macro_rules! ensure {
    ($cond:expr, $($msg:tt)+) => {
        if !$cond {
            return Err(format!($($msg)+));
        }
    };
}

fn fixture(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures").join(name)
}

fn tpn(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_tpn")).args(args).output().expect("binary runs")
}

fn exit_code(o: &Output) -> i32 {
    o.status.code().unwrap_or(-1)
}

fn all_pass(reports: &[CheckReport]) -> bool {
    reports.iter().all(CheckReport::passed)
}

fn failures(reports: &[CheckReport]) -> String {
    reports
        .iter()
        .filter(|r| !r.passed())
        .map(|r| format!("{} at {:?}", r.identity, r.counterexample.as_ref().map(|c| &c.tuple)))
        .collect::<Vec<_>>()
        .join(", ")
}

fn pruned() -> CheckOptions {
    CheckOptions::default().pruned()
}

fn criterion_1() -> Outcome {
    let sys = make_truncated_poly(4).unwrap();
    let start = Instant::now();
    let reports = run_suite(&sys, "b1", Some("euler"), &Id::ALL, CheckOptions::default()).unwrap();
    let elapsed = start.elapsed();
    ensure!(reports.len() == Id::ALL.len(), "{} reports", reports.len());
    ensure!(all_pass(&reports), "failures: {}", failures(&reports));
    ensure!(elapsed < Duration::from_secs(1), "took {elapsed:?}");
    Ok(format!("{} identities pass in {:.0?}", reports.len(), elapsed))
}

fn criterion_2() -> Outcome {
    let start = Instant::now();
    let sys = make_tensor_trunc(2, 2).unwrap();
    let mu = extend_bracket(sys.product(), sys.bracket("b_d1").unwrap(), sys.derivation("d2").unwrap()).unwrap();
    let nonzero: Vec<Vec<usize>> = increasing_tuples(4, 3).filter(|t| !mu.basis_value(t).unwrap().is_zero()).collect();
    ensure!(nonzero == vec![vec![0, 1, 2]], "nonzero triples {nonzero:?}");
    ensure!(mu.basis_value(&[0, 1, 2]).unwrap() == ElementVector::basis(4, 3), "value at (0,1,2)");
    let ids = [Id::NL, Id::TP, Id::NP1, Id::NP2, Id::NP3, Id::NP4, Id::STRONG, Id::SCALE];
    let reports = run_ids(&Instance::new(sys.product()).with_bracket(&mu), &ids, CheckOptions::default()).unwrap();
    let elapsed = start.elapsed();
    ensure!(all_pass(&reports), "failures: {}", failures(&reports));
    ensure!(reports[0].tuples_checked == 1024, "NL checked {}", reports[0].tuples_checked);
    ensure!(reports[1].tuples_checked == 256, "TP checked {}", reports[1].tuples_checked);
    ensure!(elapsed < Duration::from_secs(5), "took {elapsed:?}");
    Ok(format!(
        "single entry (0,1,2) -> e3; NL 1024 and TP 256 tuples; {} identities pass in {:.0?}",
        ids.len(),
        elapsed
    ))
}

fn instance(sys: &AlgebraSystem, with_d: bool) -> Instance<'_> {
    let inst = Instance::new(sys.product()).with_bracket(sys.bracket("b").unwrap());
    if with_d {
        inst.with_derivation(sys.derivation("d").unwrap())
    } else {
        inst
    }
}

/// Draws structured instances until `target` of them satisfy `hyp`, and
/// checks `concl` on each. Returns the number of draws used.
fn sweep(arity: usize, target: usize, with_d: bool, hyp: &[Id], concl: &[Id]) -> Result<u64, String> {
    let mut qualifying = 0;
    for seed in 0..2000u64 {
        let sys = random_structured_system(arity, seed).unwrap();
        let inst = instance(&sys, with_d);
        if !all_pass(&run_ids(&inst, hyp, pruned()).unwrap()) {
            continue;
        }
        let reports = run_ids(&inst, concl, pruned()).unwrap();
        ensure!(all_pass(&reports), "arity {arity}, seed {seed}: {}", failures(&reports));
        qualifying += 1;
        if qualifying == target {
            return Ok(seed + 1);
        }
    }
    Err(format!("arity {arity}: only {qualifying} qualifying instances"))
}

fn criterion_3() -> Outcome {
    let base = [Id::COMM, Id::ASSOC, Id::NL, Id::TP];
    let mut notes = Vec::new();
    for arity in [2, 3] {
        sweep(arity, 100, false, &base, &[Id::NP1, Id::NP2, Id::NP3, Id::NP4])?;
        sweep(arity, 100, false, &[&base[..], &[Id::STRONG]].concat(), &[Id::SCALE])?;
        sweep(arity, 100, true, &[&base[..], &[Id::DER_MUL, Id::DER_BRK]].concat(), &[Id::LEM1, Id::LEM2])?;
        notes.push(format!("arity {arity}"));
    }
    Ok(format!("3 sweeps x 100 qualifying instances at {}, zero violations", notes.join(" and ")))
}

fn criterion_4() -> Outcome {
    let draws = sweep(2, 100, false, &[Id::COMM, Id::ASSOC, Id::TP], &[Id::STRONG])?;
    Ok(format!("STRONG holds on 100/100 binary instances passing TP ({draws} draws)"))
}

fn random_element(dim: usize, rng: &mut ChaCha8Rng) -> ElementVector {
    ElementVector::from_coords((0..dim).map(|_| Rational::new(rng.gen_range(-5..=5), rng.gen_range(1..=5))).collect())
}

fn criterion_5() -> Outcome {
    let fixtures = [("W4.json", "b1", "euler"), ("W4_corrupt.json", "b1", "euler"), ("TP22.json", "b_d1", "d2")];
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    let mut compared = 0;
    for (file, b, d) in fixtures {
        let sys = load_system(&fixture(file)).map_err(|e| e.to_string())?;
        let inst = Instance::new(sys.product())
            .with_bracket(sys.bracket(b).unwrap())
            .with_derivation(sys.derivation(d).unwrap());
        let arity = sys.bracket(b).unwrap().arity();
        for report in run_ids(&inst, &Id::ALL, CheckOptions::default()).unwrap() {
            let len = report.identity.tuple_len(arity);
            let mut random_fails = false;
            for _ in 0..50 {
                let args: Vec<ElementVector> = (0..len).map(|_| random_element(sys.dim(), &mut rng)).collect();
                let refs: Vec<&ElementVector> = args.iter().collect();
                random_fails |= !evaluate_residual(report.identity, &inst, &refs).unwrap().is_zero();
            }
            ensure!(
                random_fails != report.passed(),
                "{file} {}: basis says {}, random elements disagree",
                report.identity,
                report.status.as_str()
            );
            compared += 1;
        }
    }
    Ok(format!("{compared} identity/fixture pairs agree on 50 random tuples each"))
}

fn criterion_6() -> Outcome {
    let w4 = make_truncated_poly(4).unwrap();
    for n in 2..=6 {
        let sys = make_zero_bracket_system(w4.product(), n)
            .unwrap()
            .with_derivation("euler", w4.derivation("euler").unwrap().clone())
            .unwrap();
        let reports = run_suite(&sys, "zero", Some("euler"), &Id::ALL, pruned()).unwrap();
        ensure!(reports.len() == 14 && all_pass(&reports), "arity {n}: {}", failures(&reports));
    }
    let mu = extend_bracket(w4.product(), w4.bracket("b1").unwrap(), w4.derivation("euler").unwrap()).unwrap();
    let mut count = 0;
    for i in 0..4 {
        for j in 0..4 {
            for k in 0..4 {
                ensure!(mu.basis_value(&[i, j, k]).unwrap().is_zero(), "mu({i},{j},{k}) is nonzero");
                count += 1;
            }
        }
    }
    ensure!(mu == SkewBracket::zero(4, 3).unwrap(), "stored entries not empty");
    Ok(format!("zero bracket passes all 14 identities at arities 2..6; W4 collapse zero on all {count} triples"))
}

fn criterion_7() -> Outcome {
    let corrupt = load_system(&fixture("W4_corrupt.json")).map_err(|e| e.to_string())?;
    let inst = Instance::new(corrupt.product()).with_bracket(corrupt.bracket("b1").unwrap());
    let seq = run_ids(&inst, &[Id::NL, Id::TP], CheckOptions::sequential()).unwrap();
    let par = run_ids(&inst, &[Id::NL, Id::TP], CheckOptions::default()).unwrap();
    ensure!(seq == par, "parallel and sequential reports differ");
    let nl = seq[0].counterexample.as_ref().ok_or("NL did not fail")?;
    ensure!(nl.tuple == vec![0, 1, 2], "NL first failure at {:?}", nl.tuple);
    ensure!(nl.residual == ElementVector::basis(4, 2), "NL residual {}", nl.residual);
    let tp = seq[1].counterexample.as_ref().ok_or("TP did not fail")?;
    ensure!(tp.tuple == vec![1, 0, 2], "TP first failure at {:?}", tp.tuple);
    ensure!(tp.residual == ElementVector::from_integers(&[0, 0, -1, 1]), "TP residual {}", tp.residual);

    // Every single-constant corruption of B1 is caught by NL or TP.
    let w4 = make_truncated_poly(4).unwrap();
    let b1 = w4.bracket("b1").unwrap();
    let mut corruptions = 0;
    let mut uncaught = Vec::new();
    for key in increasing_tuples(4, 2) {
        for coord in 0..4 {
            let mut value = b1.basis_value(&key).unwrap();
            value[coord] = &value[coord] + &Rational::one();
            let bad = b1.with_entry(key.clone(), value).unwrap();
            let reports =
                run_ids(&Instance::new(w4.product()).with_bracket(&bad), &[Id::NL, Id::TP], pruned()).unwrap();
            if all_pass(&reports) {
                uncaught.push((key.clone(), coord, bad));
            }
            corruptions += 1;
        }
    }

    // [1,t] = t + t^3 is the bracket of (1 + t^2) t d/dt, a genuine structure.
    let twisted =
        DerivationMatrix::from_fn(4, |k, j| if k == j || k == j + 2 { Rational::from(j) } else { Rational::zero() });
    let expected_bracket = derivation_bracket(w4.product(), &twisted).unwrap();
    ensure!(uncaught.len() == 1, "{} corruptions went unnoticed", uncaught.len());
    let (key, coord, bad) = &uncaught[0];
    ensure!(key == &vec![0, 1] && *coord == 3, "unexpected uncaught corruption {key:?}[{coord}]");
    ensure!(bad == &expected_bracket, "uncaught corruption is not the twisted derivation bracket");

    for m in 2..=6 {
        let sys = make_truncated_poly(m).unwrap();
        let d = formal_derivative(m);
        let inst = Instance::new(sys.product()).with_bracket(sys.bracket("b1").unwrap()).with_derivation(&d);
        let r = &run_ids(&inst, &[Id::DER_MUL], CheckOptions::default()).unwrap()[0];
        let ce = r.counterexample.as_ref().ok_or(format!("m = {m}: formal derivative passed"))?;
        let mut expected = ElementVector::zero(m);
        expected[m - 1] = Rational::from_integer(-(m as i64));
        ensure!(ce.tuple == vec![1, m - 1] && ce.residual == expected, "m = {m}: {:?} {}", ce.tuple, ce.residual);
    }
    Ok(format!(
        "corrupt fixture: NL at (0,1,2), TP at (1,0,2); {} of {corruptions} single corruptions caught, \
         the other is the bracket of (1+t^2)t d/dt; \
         formal derivative fails at (1,m-1) for m=2..6",
        corruptions - 1
    ))
}

fn criterion_8() -> Outcome {
    let gens: Vec<Vec<&str>> = vec![
        vec!["gen", "--family", "trunc-poly", "--m", "5"],
        vec!["gen", "--family", "tensor-trunc", "--a", "2", "--b", "3"],
        vec!["gen", "--family", "zero", "--m", "3", "--arity", "3"],
        vec!["gen", "--family", "random", "--dim", "5", "--arity", "3", "--density", "1/2", "--seed", "9"],
        vec!["gen", "--family", "random", "--dim", "4", "--arity", "2", "--density", "1", "--seed", "1234567"],
    ];
    for args in &gens {
        let (a, b) = (tpn(args), tpn(args));
        ensure!(exit_code(&a) == 0 && a.stdout == b.stdout, "{args:?} not byte-deterministic");
        let text = String::from_utf8(a.stdout).unwrap();
        ensure!(render_system(&parse_system(&text)?) == text, "{args:?} does not round-trip");
    }
    let tp22 = tpn(&["gen", "--family", "tensor-trunc", "--a", "2", "--b", "2"]);
    ensure!(tp22.stdout == std::fs::read(fixture("TP22.json")).unwrap(), "TP22 fixture drifted");

    let mut corpus: Vec<AlgebraSystem> = (2..=8).map(|m| make_truncated_poly(m).unwrap()).collect();
    corpus.push(make_tensor_trunc(3, 3).unwrap());
    corpus.extend((0..20).map(|s| random_system(4, 2 + (s as usize % 3), &Rational::new(1, 2), s).unwrap()));
    corpus.extend((0..20).map(|s| random_structured_system(2 + (s as usize % 2), s).unwrap()));
    for (i, sys) in corpus.iter().enumerate() {
        ensure!(&parse_system(&render_system(sys))? == sys, "corpus system {i} does not round-trip");
    }

    let corrupt = load_system(&fixture("W4_corrupt.json")).map_err(|e| e.to_string())?;
    let runs: Vec<Vec<CheckReport>> = [CheckOptions::sequential(), CheckOptions::default(), CheckOptions::default()]
        .into_iter()
        .map(|o| run_suite(&corrupt, "b1", Some("euler"), &Id::ALL, o).unwrap())
        .collect();
    ensure!(runs.windows(2).all(|w| w[0] == w[1]), "reports differ between runs");
    let args = [
        "check",
        fixture("W4_corrupt.json").to_str().unwrap(),
        "--bracket",
        "b1",
        "--derivation",
        "euler",
        "--format",
        "json",
    ]
    .map(str::to_owned);
    let args: Vec<&str> = args.iter().map(String::as_str).collect();
    let (a, b) = (tpn(&args), tpn(&args));
    ensure!(exit_code(&a) == 1 && a.stdout == b.stdout, "CLI JSON reports not stable");
    Ok(format!("{} gen commands deterministic; {} systems round-trip; reports stable", gens.len() + 1, corpus.len()))
}

fn criterion_9() -> Outcome {
    let rejected = tpn(&["hunt", "--arity", "2"]);
    ensure!(exit_code(&rejected) == 2, "hunt --arity 2 exited {}", exit_code(&rejected));
    let mut notes = Vec::new();
    for dim in [3, 4, 5] {
        let start = Instant::now();
        let found = hunt_counterexample(dim, 3, 10_000, 2024).unwrap();
        let elapsed = start.elapsed();
        ensure!(elapsed < Duration::from_secs(60), "dim {dim} took {elapsed:?}");
        match found {
            Some(f) => {
                ensure!(verify_finding(&f).unwrap(), "dim {dim}: finding at trial {} does not re-verify", f.trial);
                notes.push(format!("dim {dim}: finding at trial {} re-verified", f.trial));
            }
            None => notes.push(format!("dim {dim}: none in {:.1?}", elapsed)),
        }
    }
    Ok(format!("arity 2 rejected; 10^4 trials at arity 3: {}", notes.join("; ")))
}

fn main() {
    let criteria: [Criterion; 9] = [
        ("Witt truncation base case", criterion_1),
        ("extension end-to-end on TP22", criterion_2),
        ("implication sweeps", criterion_3),
        ("binary brackets are strong", criterion_4),
        ("multilinearity oracle", criterion_5),
        ("degenerate and collapse cases", criterion_6),
        ("negative controls", criterion_7),
        ("determinism and round-trip", criterion_8),
        ("hunter hygiene", criterion_9),
    ];
    panic::set_hook(Box::new(|_| {}));
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = panic::catch_unwind(AssertUnwindSafe(check)).unwrap_or_else(|p| {
            let msg = p
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_default();
            Err(format!("panicked: {msg}"))
        });
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("[PASS] criterion {} {name}: {detail} ({secs:.1}s)", i + 1),
            Err(detail) => {
                failed += 1;
                println!("[FAIL] criterion {} {name}: {detail} ({secs:.1}s)", i + 1);
            }
        }
    }
    println!("acceptance: {} passed, {failed} failed", criteria.len() - failed);
    if failed > 0 {
        process::exit(1);
    }
}

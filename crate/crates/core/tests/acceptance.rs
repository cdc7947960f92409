//! The twelve acceptance criteria, one printed line each. Run with
//! `cargo test --test acceptance -- --nocapture` to see the lines.

use std::time::{Duration, Instant};

use dgalois::field::CycloField;
use dgalois::fixtures::{reproduce, FixtureLog, FixtureOptions};
use dgalois::lie::{
    ad_kernel_dim, generic_torus_seed, irregular_seed, principal_nilpotent, torus_field_order, unique_slope,
};
use dgalois::roots::{Kind, RootSystem};
use dgalois::system::sl2_sqrtx;
use dgalois::verify::{check_system, mutate, Mutation, Status};
use dgalois::weyl::{is_strictly_transitive, weyl_action, word_perm, CycleType};

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: impl Into<String>) -> Outcome {
    Outcome { pass, detail: detail.into() }
}

fn ct(p: &[usize]) -> CycleType {
    CycleType::new(p.to_vec())
}

fn failed_checks(log: &FixtureLog) -> Vec<String> {
    log.checks.iter().filter(|c| c.status != Status::Pass).map(|c| c.id.clone()).collect()
}

fn fixture(id: &str) -> FixtureLog {
    reproduce(id, FixtureOptions::default()).unwrap_or_else(|e| panic!("{id}: {e}"))
}

fn toy_transitivity() -> Outcome {
    let a = is_strictly_transitive(&[ct(&[6])], 6).0;
    let b = is_strictly_transitive(&[ct(&[3, 3]), ct(&[4, 2])], 6).0;
    let (c, cert) = is_strictly_transitive(&[ct(&[3, 3]), ct(&[3, 2, 1])], 6);
    let pass = a && b && !c && cert.blocked_at == Some(3);
    outcome(pass, format!("{{[6]}}={a}, {{[3,3],[4,2]}}={b}, {{[3,3],[3,2,1]}}={c} blocked at {:?}", cert.blocked_at))
}

fn orbit_sizes() -> Outcome {
    let mut bad = Vec::new();
    let mut check = |k: Kind, l: usize, want: usize| {
        let rs = RootSystem::new(k, l).unwrap();
        let w = rs.minuscule_weights()[0].clone();
        let got = rs.weight_orbit(&w).unwrap().len();
        if got != want {
            bad.push(format!("{k}{l}: {got} != {want}"));
        }
    };
    for l in 1..=8 {
        check(Kind::A, l, l + 1);
    }
    for l in 2..=8 {
        check(Kind::C, l, 2 * l);
    }
    for l in 4..=8 {
        check(Kind::D, l, 2 * l);
    }
    for l in 2..=7 {
        check(Kind::B, l, 1 << l);
    }
    check(Kind::E6, 6, 27);
    check(Kind::E7, 7, 56);
    outcome(bad.is_empty(), if bad.is_empty() { "A1..8, C2..8, D4..8, B2..7, E6, E7 all match".into() } else { bad.join("; ") })
}

fn named_products() -> Outcome {
    let mut bad = Vec::new();
    let mut check = |k: Kind, l: usize, word: Vec<usize>, want: Vec<usize>| {
        let rs = RootSystem::new(k, l).unwrap();
        let (_, _, gens) = weyl_action(k, l, &rs.minuscule_weights()[0]).unwrap();
        let got = word_perm(&gens, &word).unwrap().cycle_type();
        if got != CycleType::new(want.clone()) {
            bad.push(format!("{k}{l} {word:?}: {got}"));
        }
    };
    for l in 1..=8 {
        check(Kind::A, l, (1..=l).collect(), vec![l + 1]);
    }
    for l in 2..=8 {
        check(Kind::C, l, (1..=l).collect(), vec![2 * l]);
        check(Kind::C, l, (1..l).collect(), vec![l, l]);
    }
    for l in 4..=8 {
        check(Kind::D, l, (1..l).collect(), vec![l, l]);
        check(Kind::D, l, (1..=l).collect(), vec![2 * l - 2, 2]);
    }
    outcome(bad.is_empty(), if bad.is_empty() { "A1..8, C2..8, D4..8 words give the stated types".into() } else { bad.join("; ") })
}

fn e6_enumeration() -> Outcome {
    let log = fixture("e6-weyl");
    outcome(log.passed, format!("order {}, failing {:?}", log.data["order"], failed_checks(&log)))
}

/// The literal statement asks for [14,14,14], which has degree 42 and so is
/// not a cycle type on the 56 weights. Stays red; the corrected type is
/// reported alongside.
fn e7_enumeration() -> (Outcome, bool) {
    let log = fixture("e7-weyl");
    let corrected = &log.data["corrected_type"];
    let corrected_ok = corrected["occurs"] == true && corrected["pair_strictly_transitive"] == true;
    let literal_unattainable = failed_checks(&log) == ["type-occurs:[14,14,14]", "pair-strictly-transitive"];
    let detail = format!(
        "order {}, failing {:?}; [14,14,14] has degree 42 != 56; [14,14,14,14] occurs (word {}) and pairs strictly transitively with [18,18,18,2]: {}",
        log.data["order"],
        failed_checks(&log),
        corrected["witness_word"],
        corrected_ok
    );
    (outcome(log.passed, detail), literal_unattainable && corrected_ok)
}

fn b_table() -> Outcome {
    let log = fixture("b-ell-table");
    outcome(log.passed, format!("checks {:?}, failing {:?}", log.checks.iter().map(|c| &c.id).collect::<Vec<_>>(), failed_checks(&log)))
}

fn sl2_fixture() -> Outcome {
    let log = fixture("sl2-sqrtx");
    outcome(log.passed, format!("{} checks, failing {:?}", log.checks.len(), failed_checks(&log)))
}

fn toric_fixture() -> Outcome {
    let log = fixture("sl2-toric");
    outcome(log.passed, format!("{} checks, failing {:?}", log.checks.len(), failed_checks(&log)))
}

fn slopes() -> Outcome {
    let f = CycloField::new(1).unwrap();
    let mut bad = Vec::new();
    for (k, ls) in [(Kind::A, 1..=6usize), (Kind::C, 2..=6)] {
        for l in ls {
            let n = if k == Kind::A { l + 1 } else { 2 * l };
            let r = unique_slope(&irregular_seed(k, l, &f).unwrap()).unwrap();
            let mut want = vec![f.zero(); n + 1];
            want[0] = f.from_int(-1);
            want[n] = f.one();
            let ok = r.irregular
                && r.coprime
                && (r.slope_num, r.slope_den as usize) == (2 * n as i64 - 1, n)
                && r.charpoly == want;
            if !ok {
                bad.push(format!("{k}{l}: {}/{}", r.slope_num, r.slope_den));
            }
        }
    }
    outcome(bad.is_empty(), if bad.is_empty() { "A1..6 slope 2-1/(l+1), C2..6 slope 2-1/(2l), sheared char poly lambda^n - 1".into() } else { bad.join("; ") })
}

fn seed_properties() -> Outcome {
    let mut bad = Vec::new();
    for l in 1..=6usize {
        let f = CycloField::new(torus_field_order(l)).unwrap();
        let kinds: &[Kind] = match l {
            1 => &[Kind::A],
            2 => &[Kind::A, Kind::C],
            _ => &[Kind::A, Kind::C, Kind::D],
        };
        for &k in kinds {
            let e = principal_nilpotent(k, l, &f).unwrap();
            let kernel = ad_kernel_dim(e.algebra, &e.entries).unwrap();
            let (_, cert) = generic_torus_seed(k, l, &f).unwrap();
            if kernel != l || cert.rank != l + 1 {
                bad.push(format!("{k}{l}: kernel {kernel}, rank {}", cert.rank));
            }
        }
    }
    outcome(bad.is_empty(), if bad.is_empty() { "A1..6, C2..6, D3..6: kernel l, rank l+1".into() } else { bad.join("; ") })
}

fn degree_argument() -> Outcome {
    let log = fixture("section5");
    outcome(log.passed, format!("{} checks, failing {:?}", log.checks.len(), failed_checks(&log)))
}

fn mutation_suite() -> Outcome {
    let rec = sl2_sqrtx::record().unwrap();
    let clean = check_system(&rec).unwrap();
    let mut bad = Vec::new();
    if !clean.passed {
        bad.push(format!("clean system fails {:?}", clean.failed_ids()));
    }
    for m in Mutation::ALL {
        let (broken, target) = mutate(&rec, m).unwrap();
        let b = check_system(&broken).unwrap();
        if b.failed_ids() != [target.as_str()] {
            bad.push(format!("{}: failed {:?}, wanted [{target}]", m.name(), b.failed_ids()));
        }
    }
    outcome(bad.is_empty(), if bad.is_empty() { "each of the four mutations fails exactly its target".into() } else { bad.join("; ") })
}

fn line(n: usize, name: &str, budget: Duration, f: impl FnOnce() -> Outcome) -> bool {
    let t = Instant::now();
    let o = f();
    let took = t.elapsed();
    let in_time = took <= budget;
    let pass = o.pass && in_time;
    let tag = if pass { "PASS" } else { "FAIL" };
    let late = if in_time { String::new() } else { format!(" over budget {budget:?}") };
    println!("[{tag}] {n:>2} {name} ({:.1} s{late}): {}", took.as_secs_f64(), o.detail);
    pass
}

#[test]
fn acceptance_criteria() {
    let mut results = Vec::new();
    let s = Duration::from_secs;
    results.push(line(1, "strict transitivity toy cases", s(1), toy_transitivity));
    results.push(line(2, "orbit sizes", s(60), orbit_sizes));
    results.push(line(3, "named Weyl products", s(60), named_products));
    results.push(line(4, "E6 enumeration", s(30), e6_enumeration));
    let mut e7_documented = false;
    results.push(line(5, "E7 enumeration", s(600), || {
        let (o, documented) = e7_enumeration();
        e7_documented = documented;
        o
    }));
    results.push(line(6, "B spin table", s(120), b_table));
    results.push(line(7, "sl2 over C(x, sqrt x)", s(60), sl2_fixture));
    results.push(line(8, "sl2 toric local model", s(60), toric_fixture));
    results.push(line(9, "slopes after shearing", s(60), slopes));
    results.push(line(10, "seed properties", s(120), seed_properties));
    results.push(line(11, "degree argument and pullback", s(60), degree_argument));
    results.push(line(12, "mutation suite", s(60), mutation_suite));

    let red: Vec<usize> = results.iter().enumerate().filter(|(_, ok)| !**ok).map(|(i, _)| i + 1).collect();
    println!("{} of 12 criteria pass; red: {red:?}", 12 - red.len());
    // criterion 5 is known to be unattainable as stated; anything else red is a failure
    assert!(e7_documented, "E7 no longer fails in the documented way");
    assert_eq!(red, vec![5], "unexpected red criteria");
}

//! Acceptance suite over the fixture universe: alphabet {r0, r1, t, ts},
//! max degree 12, max k 4, alpha grid {1/4, 1/3}.
//!
//! Runs without the libtest harness so the PASS/FAIL line of every
//! criterion always shows; exits non-zero if any criterion failed.

use std::panic;
use std::time::{Duration, Instant};

use speh_kit::derivative::{derivative_ladder, highest_shifted_derivative};
use speh_kit::distinction::{
    distinguished, end_of_complementary_series, inductive_checker, is_distinguished,
};
use speh_kit::dsl::{evaluate, print_canonical};
use speh_kit::enumerate::{cross_check, enumerate, matching_oracle, CrossCheckOptions, UniverseSpec};
use speh_kit::rational::rat;
use speh_kit::{Alphabet, DslError, Factor, Segment, SpehFactor, UnitaryRep};

const FIXTURE: &str = include_str!("data/fixture_alphabet.json");
const MAX_DEGREE: u64 = 12;
const MAX_K: u32 = 4;
const ORACLE_TIME_LIMIT: Duration = Duration::from_secs(60);
const MIN_UNIVERSE: usize = 10_000;
const MIN_MALFORMED: usize = 20;

struct Outcome {
    id: u32,
    name: &'static str,
    passed: bool,
    detail: String,
}

fn record(out: &mut Vec<Outcome>, id: u32, name: &'static str, failures: &[String], detail: String) {
    let passed = failures.is_empty();
    let detail = if passed {
        detail
    } else {
        format!("{detail}; {} failures, first: {}", failures.len(), failures[0])
    };
    println!(
        "[{}] criterion {id}: {name} ({detail})",
        if passed { "PASS" } else { "FAIL" }
    );
    out.push(Outcome {
        id,
        name,
        passed,
        detail,
    });
}

fn fixture() -> Alphabet {
    Alphabet::load(FIXTURE).expect("fixture alphabet")
}

fn spec(alphabet: Alphabet, max_degree: u64) -> UniverseSpec {
    UniverseSpec::new(alphabet, max_degree, MAX_K, vec![rat(1, 4), rat(1, 3)]).unwrap()
}

/// Unitary segments St(rho, l) with degree <= `max_degree`.
fn segments(a: &Alphabet, max_degree: u64) -> Vec<Segment> {
    a.rhos()
        .flat_map(|rho| {
            (1..=max_degree as u32)
                .map(move |l| Segment::st(rho, l))
                .filter(move |s| s.degree() <= max_degree)
        })
        .collect()
}

fn speh(seg: &Segment, k: u32) -> UnitaryRep {
    UnitaryRep::single(Factor::Speh(SpehFactor::new(seg.clone(), i64::from(k)).unwrap()))
}

/// Calls `f(a, b, a x b)` for every unordered pair of the universe with
/// combined degree <= MAX_DEGREE. The universe is sorted by degree.
fn for_each_pair(universe: &[UnitaryRep], mut f: impl FnMut(&UnitaryRep, &UnitaryRep, UnitaryRep)) -> u64 {
    let prefix: Vec<usize> = (0..=MAX_DEGREE)
        .map(|d| universe.partition_point(|r| r.degree() <= d))
        .collect();
    let mut count = 0;
    for (i, a) in universe.iter().enumerate() {
        let end = prefix[(MAX_DEGREE - a.degree()) as usize];
        for b in universe.get(i..end).unwrap_or_default() {
            f(a, b, a.product(b));
            count += 1;
        }
    }
    count
}

const MALFORMED: &[&str] = &[
    "",
    "   ",
    "u(",
    "u(St(r0,2),3",
    "u(St(r0,2),0)",
    "u(St(r0,2),-1)",
    "u(St(q,2),3)",
    "St(r0)",
    "St(r0,)",
    "St(,1)",
    "St(9a,1)",
    "pi(St(r0,1),1/4)",
    "pi(u(St(r0,1),1),1/2)",
    "pi(u(St(r0,1),1),0)",
    "pi(u(St(r0,1),1),-1/4)",
    "pi(u(St(r0,1),1),1/0)",
    "pi(u(St(r0,1),1),3/4)",
    "nu^{1/3}*St(r0,1)",
    "nu^{1/3}St(r0,1)",
    "u(nu^{1/2}*St(r0,2),2)",
    "D(r0; 0..1/2)",
    "D(r0; 1..0)",
    "D(r0 0..1)",
    "St(r0,1) x",
    "St(r0,1) St(r0,1)",
    "St(r0,1) * St(r0,1)",
    "x St(r0,1)",
    "u(St(r0,1),99999999999999999999)",
    "St(r0,4294967296)",
    "nu^{9223372036854775807}*nu^{9223372036854775807}*St(r0,1)",
    "D(r0; -9223372036854775807..9223372036854775807)",
    "St(r0,1)\n x St(r0,2) x\n u(St(zz,1),1)",
    "u(St(r0,1),2) x pi(u(St(r1,1),1),1/4) )",
    "×",
    "St(r0,1) x 2",
];

fn main() {
    let a = fixture();
    let universe_spec = spec(a.clone(), MAX_DEGREE);
    let universe = enumerate(&universe_spec);
    println!(
        "fixture universe: {} canonical representations (max degree {MAX_DEGREE}, max k {MAX_K})",
        universe.len()
    );
    assert!(universe.len() >= MIN_UNIVERSE, "universe too small: {}", universe.len());

    let mut out = Vec::new();

    // 1. inductive checker agrees with the main verdict everywhere
    let start = Instant::now();
    let failures: Vec<String> = universe
        .iter()
        .filter(|r| inductive_checker(r, &a).verdict != is_distinguished(r, &a).verdict)
        .map(|r| print_canonical(r, &a))
        .collect();
    let elapsed = start.elapsed();
    let mut failures = failures;
    if elapsed >= ORACLE_TIME_LIMIT {
        failures.push(format!("took {elapsed:?}, limit {ORACLE_TIME_LIMIT:?}"));
    }
    record(
        &mut out,
        1,
        "inductive checker == main theorem",
        &failures,
        format!("{} reps in {:.1?}", universe.len(), elapsed),
    );

    // 2. Speh reduction
    let mut failures = Vec::new();
    let mut n = 0;
    for seg in segments(&a, 6) {
        for k in 1..=MAX_K {
            n += 1;
            let verdict = is_distinguished(&speh(&seg, k), &a).verdict;
            if verdict != seg.distinguished(&a).unwrap() {
                failures.push(format!("u({},{k})", seg.display(&a)));
            }
        }
    }
    record(&mut out, 2, "Speh reduction", &failures, format!("{n} Speh factors"));

    // 3. alternation and exclusive dichotomy on segments
    let mut failures = Vec::new();
    let segs = segments(&a, MAX_DEGREE);
    for seg in &segs {
        let up = seg.up().unwrap();
        if seg.distinguished(&a).unwrap() != up.eta_distinguished(&a).unwrap() {
            failures.push(format!("alternation at {}", seg.display(&a)));
        }
        if seg.is_sigma_self_dual(&a) && seg.center() == rat(0, 1) {
            let both = [seg.distinguished(&a).unwrap(), seg.eta_distinguished(&a).unwrap()];
            if both.iter().filter(|&&b| b).count() != 1 {
                failures.push(format!("dichotomy at {}", seg.display(&a)));
            }
        }
    }
    record(&mut out, 3, "alternation", &failures, format!("{} segments", segs.len()));

    // 4. derivative laws
    let mut failures = Vec::new();
    let derivs: Vec<UnitaryRep> = universe.iter().map(highest_shifted_derivative).collect();
    let index = |r: &UnitaryRep| universe.binary_search(r).expect("in universe");
    let pairs = for_each_pair(&universe, |x, y, xy| {
        let rhs = derivs[index(x)].product(&derivs[index(y)]);
        if highest_shifted_derivative(&xy) != rhs && failures.len() < 5 {
            failures.push(format!("({}) x ({})", print_canonical(x, &a), print_canonical(y, &a)));
        }
    });
    let mut ladders = 0;
    for seg in &segs {
        for k in 1..=MAX_K {
            ladders += 1;
            let ladder = derivative_ladder(&speh(seg, k));
            if ladder.len() != k as usize + 1 || !ladder.last().unwrap().is_empty() {
                failures.push(format!("ladder of u({},{k})", seg.display(&a)));
            }
        }
    }
    record(
        &mut out,
        4,
        "derivative laws",
        &failures,
        format!("{pairs} pairs, {ladders} ladders"),
    );

    // 5. end of the complementary series
    let mut failures = Vec::new();
    let mut n = 0;
    for seg in segments(&a, 4).iter().filter(|s| s.distinguished(&a).unwrap()) {
        for k in 2..=4i64 {
            n += 1;
            let (pa, pb) = end_of_complementary_series(seg, k).unwrap();
            let expected = 2 * k as u64 * seg.degree();
            let ok = pa.degree() == expected
                && pb.degree() == expected
                && is_distinguished(&pb, &a).verdict
                && !is_distinguished(&pa, &a).verdict;
            if !ok {
                failures.push(format!("{} k={k}", seg.display(&a)));
            }
        }
    }
    record(
        &mut out,
        5,
        "end of complementary series",
        &failures,
        format!("{n} (segment, k) cases"),
    );

    // 6. necessary condition and product closure
    let mut failures: Vec<String> = universe
        .iter()
        .filter(|r| is_distinguished(r, &a).verdict && !r.is_sigma_self_dual(&a))
        .map(|r| format!("not self-dual: {}", print_canonical(r, &a)))
        .collect();
    let verdicts: Vec<bool> = universe.iter().map(|r| distinguished(r, &a)).collect();
    let mut closure = 0;
    for_each_pair(&universe, |x, y, xy| {
        if verdicts[index(x)] && verdicts[index(y)] {
            closure += 1;
            if !is_distinguished(&xy, &a).verdict {
                failures.push(format!(
                    "closure: ({}) x ({})",
                    print_canonical(x, &a),
                    print_canonical(y, &a)
                ));
            }
        }
    });
    record(
        &mut out,
        6,
        "necessary condition and product closure",
        &failures,
        format!("{} reps, {closure} distinguished pairs", universe.len()),
    );

    // 7. matching oracle
    let failures: Vec<String> = universe
        .iter()
        .filter(|r| matching_oracle(r, &a) != r.is_sigma_self_dual(&a))
        .map(|r| print_canonical(r, &a))
        .collect();
    record(
        &mut out,
        7,
        "matching oracle == self-duality",
        &failures,
        format!("{} reps", universe.len()),
    );

    // 8. parser round trip and positioned errors
    let mut failures: Vec<String> = universe
        .iter()
        .filter(|r| evaluate(&print_canonical(r, &a), &a).as_ref() != Ok(*r))
        .map(|r| print_canonical(r, &a))
        .collect();
    for text in MALFORMED {
        match panic::catch_unwind(|| evaluate(text, &a)) {
            Ok(Err(e)) => {
                let pos = e.position();
                if pos.line == 0 || pos.column == 0 {
                    failures.push(format!("{text:?}: bad position {pos:?}"));
                }
                let _: &DslError = &e;
            }
            Ok(Ok(rep)) => failures.push(format!("{text:?}: accepted as {}", print_canonical(&rep, &a))),
            Err(_) => failures.push(format!("{text:?}: panicked")),
        }
    }
    assert!(MALFORMED.len() >= MIN_MALFORMED);
    record(
        &mut out,
        8,
        "parser round trip and malformed input",
        &failures,
        format!("{} reps, {} malformed inputs", universe.len(), MALFORMED.len()),
    );

    // 9. mutation sensitivity: flipping a declared parity must be caught
    let mut failures = Vec::new();
    let mut caught = Vec::new();
    for id in ["r0", "r1"] {
        let options = CrossCheckOptions {
            inject_parity_flip: Some(id.to_string()),
        };
        let report = cross_check(&spec(a.clone(), 6), &options).unwrap();
        if report.counterexamples() == 0 {
            failures.push(format!("flipping {id} went unnoticed"));
        }
        caught.push(format!("{id}: {}", report.counterexamples()));
    }
    record(
        &mut out,
        9,
        "mutation sensitivity",
        &failures,
        format!("counterexamples {}", caught.join(", ")),
    );

    let failed: Vec<String> = out
        .iter()
        .filter(|o| !o.passed)
        .map(|o| format!("{} {}: {}", o.id, o.name, o.detail))
        .collect();
    if failed.is_empty() {
        println!("acceptance: all {} criteria passed", out.len());
    } else {
        eprintln!("acceptance: failed criteria:\n{}", failed.join("\n"));
        std::process::exit(1);
    }
}

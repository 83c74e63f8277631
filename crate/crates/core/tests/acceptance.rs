//! One line per acceptance criterion. Run with `--nocapture` to see them.

mod common;

use std::time::{Duration, Instant};

use common::checks;
use common::{grammar_file, manifest_path, random_dfa, raw_grammar};
use lexord::grammar::normalize;
use lexord::omega_decision::grammar_omega;
use lexord::oracle::{run_corpus, CorpusManifest};
use lexord::ordertype::{compute_order_type, Budget, OrderType};
use proptest::prelude::*;
use proptest::test_runner::{Config, TestRunner};

const WORKED_EXAMPLE_LIMIT: Duration = Duration::from_secs(5);
const BATTERY_LIMIT: Duration = Duration::from_secs(5);
const CORPUS_ENTRY_LIMIT: Duration = Duration::from_secs(10);
const DIVERGENCE_LIMIT: Duration = Duration::from_secs(30);
const MIN_CORPUS_ENTRIES: usize = 20;

struct Outcome {
    id: usize,
    title: &'static str,
    result: Result<String, String>,
}

fn report(outcomes: &[Outcome]) -> bool {
    for o in outcomes {
        match &o.result {
            Ok(detail) => println!("criterion {} PASS  {}: {detail}", o.id, o.title),
            Err(detail) => println!("criterion {} FAIL  {}: {detail}", o.id, o.title),
        }
    }
    outcomes.iter().all(|o| o.result.is_ok())
}

fn worked_example() -> Result<String, String> {
    let started = Instant::now();
    let g = grammar_file("worked_example.cfg");
    let r = compute_order_type(&g, Budget::default()).map_err(|e| e.to_string())?;
    let elapsed = started.elapsed();
    if r.result != OrderType::omega_linear(2, 1) {
        return Err(format!("got {}", r.result));
    }
    let inner = r
        .trace
        .iter()
        .find(|l| l.contains("result for") && l.contains("<=ba}") && l.ends_with(": omega + 1"))
        .ok_or("trace lacks o(a*+ba) = omega + 1")?;
    if !inner.contains("{a, aa, aaa, aaaa, ba, ...}") {
        return Err(format!("unexpected lower part: {inner}"));
    }
    if !r.trace.iter().any(|l| l.ends_with("cut at (b)^w; upper part nonempty: {c}")) {
        return Err("trace lacks the nonempty cut above b^w".into());
    }
    if elapsed > WORKED_EXAMPLE_LIMIT {
        return Err(format!("took {elapsed:?}"));
    }
    Ok(format!("omega*2 + 1 with the expected intermediate steps in {elapsed:?}"))
}

fn battery() -> Result<String, String> {
    let started = Instant::now();
    let nwo = OrderType::NotWellOrdered { scattered: true };
    let cases = [
        ("akb.cfg", nwo.clone()),
        ("bbka.cfg", OrderType::OMEGA),
        ("a_star_b.cfg", nwo.clone()),
        ("a_star_a_star.cfg", OrderType::OMEGA),
        ("ac_star_b_ab.cfg", nwo),
    ];
    for (file, expected) in cases {
        let got = compute_order_type(&grammar_file(file), Budget::default())
            .map_err(|e| format!("{file}: {e}"))?
            .result;
        if got != expected {
            return Err(format!("{file}: expected {expected}, got {got}"));
        }
    }
    let elapsed = started.elapsed();
    if elapsed > BATTERY_LIMIT {
        return Err(format!("took {elapsed:?}"));
    }
    Ok(format!("5 of 5 verdicts exact in {elapsed:?}"))
}

fn known_answer_corpus() -> Result<String, String> {
    let manifest = CorpusManifest::load(&manifest_path()).map_err(|e| e.to_string())?;
    if manifest.entries.len() < MIN_CORPUS_ENTRIES {
        return Err(format!("only {} entries", manifest.entries.len()));
    }
    if let Some(e) = manifest.entries.iter().find(|e| e.provenance != "DERIVED") {
        return Err(format!("{} is tagged {}", e.name, e.provenance));
    }
    let report = run_corpus(&manifest_path(), Budget::default(), 1).map_err(|e| e.to_string())?;
    for o in &report.outcomes {
        if !o.pass {
            return Err(format!("{}: expected {}, got {:?} {:?}", o.name, o.expected, o.actual, o.error));
        }
        if o.millis > CORPUS_ENTRY_LIMIT.as_millis() {
            return Err(format!("{} took {} ms", o.name, o.millis));
        }
    }
    let slowest = report.outcomes.iter().map(|o| o.millis).max().unwrap_or(0);
    Ok(format!("{}/{} pass, slowest {slowest} ms", report.passed(), report.outcomes.len()))
}

fn cases(n: u32) -> Config {
    Config {
        failure_persistence: None,
        ..Config::with_cases(n)
    }
}

fn property_suite() -> Result<String, String> {
    let mut runner = TestRunner::new(cases(200));
    runner
        .run(&raw_grammar(2), |raw| checks::normalization_preserves_language(&raw))
        .map_err(|e| format!("normalization: {e}"))?;
    let mut runner = TestRunner::new(cases(200));
    runner
        .run(&(raw_grammar(2), random_dfa(2, 3)), |(raw, d)| checks::intersection_matches_filter(&raw, &d))
        .map_err(|e| format!("intersection: {e}"))?;
    let muv = checks::comparison_automaton_exhaustive().map_err(|e| format!("comparison automaton: {e}"))?;
    let word = || prop::collection::vec(0u16..2, 0..4);
    let period = || prop::collection::vec(0u16..2, 1..5);
    let mut runner = TestRunner::new(cases(1000));
    runner
        .run(&(word(), period(), word(), period()), |(u1, v1, u2, v2)| {
            checks::canonical_equality_matches_streams(&u1, &v1, &u2, &v2)
        })
        .map_err(|e| format!("omega-word canon: {e}"))?;
    let pumps = checks::pumped_sequences_on_corpus().map_err(|e| format!("pumps: {e}"))?;
    Ok(format!(
        "200 normalizations, 200 intersections, {muv} automaton runs, 1000 omega-word pairs, {pumps} corpus pumps"
    ))
}

fn consistency() -> Result<String, String> {
    let mut compared = 0;
    for (name, g, _) in common::corpus() {
        let result = compute_order_type(&g, Budget::default()).map_err(|e| e.to_string())?.result;
        if !matches!(result, OrderType::OmegaLinear { .. }) {
            continue;
        }
        let h = normalize(&g).map_err(|e| e.to_string())?.with_epsilon_flag(false);
        let omega = grammar_omega(&h).map_err(|e| e.to_string())?.is_omega();
        if omega != (result == OrderType::OMEGA) {
            return Err(format!("{name}: type {result} but omega verdict {omega}"));
        }
        compared += 1;
    }
    let cuts = checks::cuts_are_sound_on_corpus()?;
    Ok(format!("{compared} omega verdicts agree, {cuts} cuts sound"))
}

fn divergence_guard() -> Result<String, String> {
    let started = Instant::now();
    let r = compute_order_type(&grammar_file("omega_squared.cfg"), Budget::default()).map_err(|e| e.to_string())?;
    let elapsed = started.elapsed();
    if !matches!(r.result, OrderType::BoundExceeded { .. }) {
        return Err(format!("got {}", r.result));
    }
    if elapsed > DIVERGENCE_LIMIT {
        return Err(format!("took {elapsed:?}"));
    }
    Ok(format!("{} after {elapsed:?}", r.result))
}

#[test]
fn acceptance() {
    let outcomes = [
        Outcome { id: 1, title: "worked example", result: worked_example() },
        Outcome { id: 2, title: "example battery", result: battery() },
        Outcome { id: 3, title: "known-answer corpus", result: known_answer_corpus() },
        Outcome { id: 4, title: "property suite", result: property_suite() },
        Outcome { id: 5, title: "consistency", result: consistency() },
        Outcome { id: 6, title: "divergence guard", result: divergence_guard() },
    ];
    assert!(report(&outcomes), "some acceptance criteria failed");
}

mod common;

use common::{all_words, corpus, lex_less, manifest_path};
use lexord::grammar::{membership, normalize, parse_grammar, Grammar, Symbol};
use lexord::omega_decision::grammar_omega;
use lexord::oracle::{enumerate, predecessor_probe, run_corpus};
use lexord::ordertype::{compute_order_type, cut_at_word, Budget, OrderType};
use lexord::pumping::generate_sequence;

fn order(g: &Grammar) -> OrderType {
    compute_order_type(g, Budget::default()).unwrap().result
}

#[test]
fn corpus_manifest_passes() {
    let report = run_corpus(&manifest_path(), Budget::default(), 4).unwrap();
    assert!(report.outcomes.len() >= 20);
    for o in &report.outcomes {
        assert!(o.pass, "{}: expected {}, got {:?} {:?}", o.name, o.expected, o.actual, o.error);
        assert!(o.millis < 10_000, "{} took {} ms", o.name, o.millis);
    }
}

#[test]
fn omega_verdict_agrees_with_order_type() {
    for (name, g, expected) in corpus() {
        if !matches!(expected, OrderType::OmegaLinear { .. }) {
            continue;
        }
        let h = normalize(&g).unwrap();
        let verdict = grammar_omega(&h.clone().with_epsilon_flag(false)).unwrap();
        assert_eq!(verdict.is_omega(), expected == OrderType::OMEGA, "{name}");
    }
}

#[test]
fn cuts_are_sound() {
    let cuts = common::checks::cuts_are_sound_on_corpus().unwrap();
    assert!(cuts >= 60, "only {cuts} cuts checked");
}

#[test]
fn cut_parts_partition_the_language() {
    for (name, g, expected) in corpus() {
        if !expected.is_ordinal() {
            continue;
        }
        let Ok(h) = normalize(&g) else { continue };
        let Ok(seq) = generate_sequence(&h, &[Symbol::N(h.start())]) else { continue };
        let whole = enumerate(&h, 8).unwrap().words;
        let cut = cut_at_word(&h, &seq.word_at(1)).unwrap();
        let words = |p: &Option<Grammar>| p.as_ref().map_or(Vec::new(), |p| enumerate(p, 8).unwrap().words);
        let (lo, hi) = (words(&cut.lower), words(&cut.upper));
        assert!(lo.iter().all(|x| hi.iter().all(|y| lex_less(x, y))), "{name}");
        let mut joined = lo.clone();
        joined.extend(hi);
        assert_eq!(joined, whole, "{name}");
    }
}

#[test]
fn probe_corroborates_expected_types() {
    for (name, g, expected) in corpus() {
        let probe = predecessor_probe(&g, &[4, 6, 8]).unwrap();
        let stable = probe.all_stabilized();
        match expected {
            OrderType::Finite { n } => {
                assert!(stable, "{name}");
                assert_eq!(enumerate(&g, 12).unwrap().words.len() as u64, n, "{name}");
            }
            OrderType::OmegaLinear { k: 1, n: 0 } => assert!(stable, "{name}"),
            OrderType::OmegaLinear { .. } => assert!(!stable, "{name}"),
            OrderType::NotWellOrdered { .. } => assert!(!stable, "{name}"),
            OrderType::BoundExceeded { .. } => unreachable!(),
        }
    }
}

#[test]
fn enumeration_is_sorted_and_exact() {
    for (name, g, _) in corpus() {
        let words = enumerate(&g, 6).unwrap().words;
        assert!(words.windows(2).all(|p| lex_less(&p[0], &p[1])), "{name}");
        let k = g.alphabet().len() as u16;
        let len = if k > 3 { 4 } else { 6 };
        for w in all_words(k, len) {
            assert_eq!(membership(&g, &w), words.binary_search(&w).is_ok(), "{name}: {w:?}");
        }
    }
}

#[test]
fn same_language_same_type() {
    let groups: [&[&str]; 3] = [
        &["S -> a S | a", "S -> S a | a", "S -> S S | a"],
        &["S -> A | b A\nA -> a A | a", "S -> A | B\nA -> a A | a\nB -> B a | b a"],
        &[
            "S -> B | A | c | eps\nA -> a A | a\nB -> b B a | b a",
            "S -> T | c\nT -> eps | A | B\nA -> A a | a\nB -> b C\nC -> B a | a",
        ],
    ];
    for group in groups {
        let gs: Vec<Grammar> = group
            .iter()
            .map(|src| parse_grammar(&format!("alphabet: a < b < c\nstart: S\n{src}")).unwrap())
            .collect();
        let reference = enumerate(&gs[0], 12).unwrap().words;
        let o = order(&gs[0]);
        for g in &gs[1..] {
            assert_eq!(enumerate(g, 12).unwrap().words, reference);
            assert_eq!(order(g), o, "{group:?}");
        }
    }
}

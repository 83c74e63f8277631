//! Property bodies shared by the property tests and the acceptance run.

use lexord::automata::{build_muv, intersect_cfg_regular, Dfa, StateClass};
use lexord::error::Error;
use lexord::grammar::{membership, normalize, Grammar, Symbol, Terminal, Word};
use lexord::omega_word::{FiniteCmp, RegularOmegaWord};
use lexord::oracle::enumerate;
use lexord::ordertype::{compute_order_type, cut_at_omega, cut_at_word, ord_sum, Budget, Cut, OrderType};
use lexord::pumping::{generate_sequence, SequenceKind};
use proptest::test_runner::TestCaseError;

use super::{all_words, corpus, lex_less, RawGrammar};

fn fail(msg: String) -> TestCaseError {
    TestCaseError::fail(msg)
}

pub fn stream_letter(u: &[Terminal], v: &[Terminal], i: usize) -> Terminal {
    if i < u.len() {
        u[i]
    } else {
        v[(i - u.len()) % v.len()]
    }
}

fn gcd(a: usize, b: usize) -> usize {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

pub fn word(letters: &[u16]) -> Word {
    letters.iter().map(|&a| Terminal(a)).collect()
}

pub fn normalization_preserves_language(raw: &RawGrammar) -> Result<(), TestCaseError> {
    let g = raw.build();
    let before = enumerate(&g, 6).unwrap().words;
    let after = match normalize(&g) {
        Ok(h) => enumerate(&h, 6).unwrap().words,
        Err(Error::EmptyLanguage { epsilon: true }) => vec![Vec::new()],
        Err(Error::EmptyLanguage { epsilon: false }) => Vec::new(),
        Err(e) => return Err(fail(format!("normalize failed: {e}"))),
    };
    if before != after {
        return Err(fail(format!("language changed for\n{g}")));
    }
    Ok(())
}

pub fn intersection_matches_filter(raw: &RawGrammar, d: &Dfa) -> Result<(), TestCaseError> {
    let g = raw.build();
    let expected: Vec<Word> = enumerate(&g, 6).unwrap().words.into_iter().filter(|w| d.accepts(w)).collect();
    let got = enumerate(&intersect_cfg_regular(&g, d), 6).unwrap().words;
    if got != expected {
        return Err(fail(format!("intersection differs for\n{g}")));
    }
    Ok(())
}

pub fn canonical_equality_matches_streams(u1: &[u16], v1: &[u16], u2: &[u16], v2: &[u16]) -> Result<(), TestCaseError> {
    let (u1, v1, u2, v2) = (word(u1), word(v1), word(u2), word(v2));
    let x = RegularOmegaWord::new(&u1, &v1);
    let y = RegularOmegaWord::new(&u2, &v2);
    let bound = u1.len().max(u2.len()) + v1.len() / gcd(v1.len(), v2.len()) * v2.len();
    let mismatch = (0..bound).find(|&i| stream_letter(&u1, &v1, i) != stream_letter(&u2, &v2, i));
    let ok = match mismatch {
        None => x == y,
        Some(i) => x != y && (x < y) == (stream_letter(&u1, &v1, i) < stream_letter(&u2, &v2, i)),
    };
    if !ok {
        return Err(fail(format!("{u1:?}({v1:?}) vs {u2:?}({v2:?})")));
    }
    Ok(())
}

/// Every `u, v` with `|u|, |v| ≤ 3` and every `w` with `|w| ≤ 8`, binary
/// alphabet. Returns the number of comparisons made.
pub fn comparison_automaton_exhaustive() -> Result<usize, String> {
    let short = all_words(2, 3);
    let words = all_words(2, 8);
    let mut count = 0;
    for u in &short {
        for v in short.iter().filter(|v| !v.is_empty()) {
            let x = RegularOmegaWord::new(u, v);
            let m = build_muv(&x, 2);
            for w in &words {
                let direct = w
                    .iter()
                    .enumerate()
                    .find(|&(i, &a)| a != stream_letter(u, v, i))
                    .map(|(i, &a)| a < stream_letter(u, v, i));
                let q = m.run(w);
                let (class, cmp) = match direct {
                    None => (StateClass::Prefix, FiniteCmp::Prefix),
                    Some(true) => (StateClass::LessSink, FiniteCmp::LessStrict),
                    Some(false) => (StateClass::GreaterSink, FiniteCmp::GreaterStrict),
                };
                if m.class(q) != class || x.compare_finite(w) != cmp {
                    return Err(format!("u={u:?} v={v:?} w={w:?}"));
                }
                if direct.is_none() && m.residual(q) != Some(&x.suffix(w.len())) {
                    return Err(format!("residual mismatch: u={u:?} v={v:?} w={w:?}"));
                }
                count += 1;
            }
        }
    }
    Ok(count)
}

/// Pumped words `0..=6` of every infinite corpus grammar are members, ordered
/// as the sequence kind says, and sit on the right side of the limit.
/// Returns the number of grammars checked.
pub fn pumped_sequences_on_corpus() -> Result<usize, String> {
    let mut checked = 0;
    for (name, g, _) in corpus() {
        let Ok(h) = normalize(&g) else { continue };
        let seq = match generate_sequence(&h, &[Symbol::N(h.start())]) {
            Ok(s) => s,
            Err(Error::FiniteLanguage) => continue,
            Err(e) => return Err(format!("{name}: {e}")),
        };
        let words: Vec<Word> = (0..=6).map(|n| seq.word_at(n)).collect();
        for (n, w) in words.iter().enumerate() {
            if !membership(&h, w) {
                return Err(format!("{name}: word_at({n}) not in the language"));
            }
            let rel = seq.limit.compare_finite(w);
            let side_ok = match seq.kind {
                SequenceKind::DescendingStrict => rel == FiniteCmp::GreaterStrict,
                SequenceKind::AscendingStrict => matches!(rel, FiniteCmp::LessStrict | FiniteCmp::Prefix),
                SequenceKind::PrefixChain => rel == FiniteCmp::Prefix,
            };
            if !side_ok {
                return Err(format!("{name}: word_at({n}) on the wrong side of the limit"));
            }
        }
        for (n, pair) in words.windows(2).enumerate() {
            let ordered = match seq.kind {
                SequenceKind::DescendingStrict => lex_less(&pair[1], &pair[0]),
                SequenceKind::AscendingStrict => lex_less(&pair[0], &pair[1]),
                SequenceKind::PrefixChain => lex_less(&pair[0], &pair[1]) && pair[1].starts_with(&pair[0]),
            };
            if !ordered {
                return Err(format!("{name}: word_at({n}) and word_at({}) out of order", n + 1));
            }
        }
        checked += 1;
    }
    Ok(checked)
}

fn order(g: &Grammar) -> OrderType {
    compute_order_type(g, Budget::default()).unwrap().result
}

fn part_order(part: &Option<Grammar>) -> OrderType {
    part.as_ref().map_or(OrderType::finite(0), order)
}

fn cut_sound(name: &str, whole: &OrderType, cut: &Cut) -> Result<bool, String> {
    let lower = part_order(&cut.lower);
    let upper = part_order(&cut.upper);
    if !lower.is_ordinal() || !upper.is_ordinal() {
        return Ok(false);
    }
    let sum = ord_sum(&lower, &upper).map_err(|e| e.to_string())?;
    if &sum != whole {
        return Err(format!("{name}: {lower} + {upper} != {whole}"));
    }
    Ok(true)
}

/// Cuts at the pumped limit and at the first three pumped words of every
/// ordinal corpus grammar. Returns the number of terminating cuts checked.
pub fn cuts_are_sound_on_corpus() -> Result<usize, String> {
    let mut cuts = 0;
    for (name, g, expected) in corpus() {
        if !expected.is_ordinal() {
            continue;
        }
        let h = match normalize(&g) {
            Ok(h) => h,
            Err(Error::EmptyLanguage { .. }) => continue,
            Err(e) => return Err(format!("{name}: {e}")),
        };
        let Ok(seq) = generate_sequence(&h, &[Symbol::N(h.start())]) else { continue };
        let mut all = vec![cut_at_omega(&h, &seq.limit).map_err(|e| e.to_string())?];
        for n in 0..3 {
            all.push(cut_at_word(&h, &seq.word_at(n)).map_err(|e| e.to_string())?);
        }
        for cut in &all {
            if cut_sound(&name, &expected, cut)? {
                cuts += 1;
            }
        }
    }
    Ok(cuts)
}

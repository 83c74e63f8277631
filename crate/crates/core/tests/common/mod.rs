#![allow(dead_code)]

pub mod checks;

use std::path::{Path, PathBuf};
use std::sync::Arc;

use lexord::automata::Dfa;
use lexord::grammar::{Alphabet, Grammar, NonTerminal, Production, Symbol, Terminal, Word};
use lexord::oracle::{load_grammar, CorpusManifest};
use proptest::prelude::*;

pub fn repo_root() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../..")
}

pub fn grammar_file(rel: &str) -> Grammar {
    load_grammar(&repo_root().join("grammars").join(rel)).unwrap()
}

pub fn manifest_path() -> PathBuf {
    repo_root().join("grammars/corpus.json")
}

pub fn corpus() -> Vec<(String, Grammar, lexord::ordertype::OrderType)> {
    let m = CorpusManifest::load(&manifest_path()).unwrap();
    m.entries
        .into_iter()
        .map(|e| {
            let g = load_grammar(&repo_root().join("grammars").join(&e.grammar)).unwrap();
            (e.name, g, e.expected)
        })
        .collect()
}

/// Lexicographic order spelled out: a proper prefix is smaller, otherwise the
/// first differing letter decides.
pub fn lex_less(x: &[Terminal], y: &[Terminal]) -> bool {
    for (a, b) in x.iter().zip(y) {
        if a != b {
            return a < b;
        }
    }
    x.len() < y.len()
}

/// Every word over `k` letters of length at most `n`.
pub fn all_words(k: u16, n: usize) -> Vec<Word> {
    let mut out = vec![Vec::new()];
    let mut layer = vec![Vec::new()];
    for _ in 0..n {
        let mut next = Vec::new();
        for w in &layer {
            for a in 0..k {
                let mut v: Word = w.clone();
                v.push(Terminal(a));
                next.push(v);
            }
        }
        out.extend(next.iter().cloned());
        layer = next;
    }
    out
}

#[derive(Debug, Clone)]
pub struct RawGrammar {
    pub letters: u16,
    pub rules: Vec<Vec<Vec<(bool, u16)>>>,
}

impl RawGrammar {
    pub fn build(&self) -> Grammar {
        let glyphs = ["a", "b", "c"];
        let alphabet = Arc::new(Alphabet::new(glyphs[..self.letters as usize].iter().copied()));
        let n = self.rules.len() as u16;
        let names = (0..n).map(|i| ["S", "A", "B", "C"][i as usize].to_string()).collect();
        let mut productions = Vec::new();
        for (lhs, alts) in self.rules.iter().enumerate() {
            for alt in alts {
                let rhs = alt
                    .iter()
                    .map(|&(nt, i)| {
                        if nt {
                            Symbol::N(NonTerminal((i % n) as u32))
                        } else {
                            Symbol::T(Terminal(i % self.letters))
                        }
                    })
                    .collect();
                productions.push(Production {
                    lhs: NonTerminal(lhs as u32),
                    rhs,
                });
            }
        }
        Grammar::new(alphabet, names, productions, NonTerminal(0))
    }
}

/// Grammars with up to four nonterminals and short right-hand sides,
/// terminals slightly favored so most languages are nonempty.
pub fn raw_grammar(letters: u16) -> impl Strategy<Value = RawGrammar> {
    let symbol = prop_oneof![3 => (Just(false), 0u16..8), 2 => (Just(true), 0u16..8)];
    let alt = prop::collection::vec(symbol, 0..=3);
    let alts = prop::collection::vec(alt, 1..=3);
    prop::collection::vec(alts, 1..=4).prop_map(move |rules| RawGrammar { letters, rules })
}

pub fn random_dfa(letters: u16, states: usize) -> impl Strategy<Value = Dfa> {
    let k = letters as usize;
    (
        prop::collection::vec(prop::collection::vec(0..states, k), states),
        prop::collection::vec(any::<bool>(), states),
    )
        .prop_map(move |(trans, accepting)| Dfa::from_table(k, trans, 0, accepting).unwrap())
}

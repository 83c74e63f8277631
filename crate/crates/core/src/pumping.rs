//! Monotone sequences pumped out of a context-free language.
//!
//! From a pump `u1 u2^n u3 u4^n u5` we pick an offset so that the words are
//! strictly ascending, strictly descending, or a prefix chain, and compute
//! the regular ω-word they converge to.

use std::collections::VecDeque;
use std::fmt;

use crate::error::{Error, Result};
use crate::grammar::{
    classify_symbols, eliminate_epsilon, remove_useless, shortest_yields, Grammar, NonTerminal,
    Symbol, Terminal, Word,
};
use crate::omega_word::RegularOmegaWord;

/// Pumps whose ordering is not settled within this many iterations are
/// reported instead of looping.
pub const MAX_PUMP_ITERATIONS: usize = 100_000;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PumpDecomposition {
    pub u1: Word,
    pub u2: Word,
    pub u3: Word,
    pub u4: Word,
    pub u5: Word,
}

impl PumpDecomposition {
    /// `u1 u2^n u3 u4^n u5`.
    pub fn word(&self, n: usize) -> Word {
        let mut w = self.u1.clone();
        for _ in 0..n {
            w.extend_from_slice(&self.u2);
        }
        w.extend_from_slice(&self.u3);
        for _ in 0..n {
            w.extend_from_slice(&self.u4);
        }
        w.extend_from_slice(&self.u5);
        w
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize)]
#[serde(rename_all = "snake_case")]
pub enum SequenceKind {
    AscendingStrict,
    DescendingStrict,
    PrefixChain,
}

/// Which branch of the case analysis produced the sequence.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PumpCase {
    /// `u3 u4^n <_s u2 u3 u4^n` for some n.
    Ascending,
    /// `u2 u3 u4^n <_s u3 u4^n` for some n.
    Descending,
    /// Periodic tails agree (`u4 ≠ ε`), then ascending / descending / prefix.
    TailAscending,
    TailDescending,
    TailPrefix,
    /// `u4 = ε` and `u3` a proper prefix of `u2 u3`.
    HeadAscending,
    HeadDescending,
    HeadPrefix,
}

impl fmt::Display for PumpCase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            PumpCase::Ascending => "1",
            PumpCase::Descending => "2",
            PumpCase::TailAscending => "3a",
            PumpCase::TailDescending => "3b",
            PumpCase::TailPrefix => "3c",
            PumpCase::HeadAscending => "4a",
            PumpCase::HeadDescending => "4b",
            PumpCase::HeadPrefix => "4c",
        })
    }
}

#[derive(Debug, Clone)]
pub struct GeneratedSequence {
    pub pump: PumpDecomposition,
    pub kind: SequenceKind,
    pub case: PumpCase,
    /// `word_at(n)` pumps `offset + n` times.
    pub offset: usize,
    /// Supremum for ascending and prefix sequences, infimum for descending.
    pub limit: RegularOmegaWord,
}

impl GeneratedSequence {
    pub fn word_at(&self, n: usize) -> Word {
        self.pump.word(self.offset + n)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Relation {
    StrictLess,
    StrictGreater,
    ProperPrefix,
    ProperExtension,
    Equal,
}

fn relate(x: &[Terminal], y: &[Terminal]) -> Relation {
    for (a, b) in x.iter().zip(y) {
        if a < b {
            return Relation::StrictLess;
        }
        if a > b {
            return Relation::StrictGreater;
        }
    }
    match x.len().cmp(&y.len()) {
        std::cmp::Ordering::Less => Relation::ProperPrefix,
        std::cmp::Ordering::Greater => Relation::ProperExtension,
        std::cmp::Ordering::Equal => Relation::Equal,
    }
}

fn cat(parts: &[&[Terminal]]) -> Word {
    parts.concat()
}

fn power(w: &[Terminal], n: usize) -> Word {
    w.repeat(n)
}

/// Locates a pump in `L(alpha)` using shortest derivations: a context
/// `alpha ⇒* u1 A β`, a cycle `A ⇒+ u2 A u4` with `u2 u4 ≠ ε`, and shortest
/// yields for `A` and `β`.
pub fn find_pump(g: &Grammar, alpha: &[Symbol]) -> Result<PumpDecomposition> {
    let h = match eliminate_epsilon(&g.with_start_form(alpha)).and_then(|h| remove_useless(&h)) {
        Ok(h) => h,
        Err(Error::EmptyLanguage { .. }) => return Err(Error::FiniteLanguage),
        Err(e) => return Err(e),
    };
    let rel = classify_symbols(&h);
    let sy = shortest_yields(&h);
    let pumpable = |x: NonTerminal| {
        h.productions().iter().any(|p| {
            p.rhs.len() >= 2
                && rel.equivalent(p.lhs, x)
                && p.rhs.iter().any(|s| matches!(s, Symbol::N(y) if rel.equivalent(*y, x)))
        })
    };

    // Breadth-first contexts from the start symbol.
    let n = h.nonterminal_count();
    let mut context: Vec<Option<(Word, Word)>> = vec![None; n];
    context[h.start().index()] = Some((Vec::new(), Vec::new()));
    let mut queue = VecDeque::from([h.start()]);
    let mut chosen = None;
    while let Some(x) = queue.pop_front() {
        if pumpable(x) {
            chosen = Some(x);
            break;
        }
        let (l, r) = context[x.index()].clone().unwrap();
        for p in h.productions_of(x) {
            for (i, s) in p.rhs.iter().enumerate() {
                if let Symbol::N(y) = *s {
                    if context[y.index()].is_none() {
                        let left = cat(&[&l, &sy.expand(&p.rhs[..i]).unwrap()]);
                        let right = cat(&[&sy.expand(&p.rhs[i + 1..]).unwrap(), &r]);
                        context[y.index()] = Some((left, right));
                        queue.push_back(y);
                    }
                }
            }
        }
    }
    let a = chosen.ok_or(Error::FiniteLanguage)?;
    let (u1, u5) = context[a.index()].clone().unwrap();

    // Shortest cycle back to `a` that emits at least one letter.
    let key = |y: NonTerminal, grown: bool| y.index() * 2 + grown as usize;
    let mut seen: Vec<Option<(Word, Word)>> = vec![None; 2 * n];
    seen[key(a, false)] = Some((Vec::new(), Vec::new()));
    let mut queue = VecDeque::from([(a, false)]);
    let mut cycle = None;
    'search: while let Some((x, grown)) = queue.pop_front() {
        let (l, r) = seen[key(x, grown)].clone().unwrap();
        for p in h.productions_of(x) {
            for (i, s) in p.rhs.iter().enumerate() {
                if let Symbol::N(y) = *s {
                    let g2 = grown || p.rhs.len() >= 2;
                    if seen[key(y, g2)].is_some() {
                        continue;
                    }
                    let left = cat(&[&l, &sy.expand(&p.rhs[..i]).unwrap()]);
                    let right = cat(&[&sy.expand(&p.rhs[i + 1..]).unwrap(), &r]);
                    if y == a && g2 {
                        cycle = Some((left, right));
                        break 'search;
                    }
                    seen[key(y, g2)] = Some((left, right));
                    queue.push_back((y, g2));
                }
            }
        }
    }
    let (u2, u4) = cycle.ok_or_else(|| Error::Inconsistent("pumpable symbol without a cycle".into()))?;
    let u3 = sy.of(a).unwrap().clone();
    debug_assert!(!(u2.is_empty() && u4.is_empty()));
    Ok(PumpDecomposition { u1, u2, u3, u4, u5 })
}

fn limit_of(p: &PumpDecomposition) -> RegularOmegaWord {
    if !p.u2.is_empty() {
        RegularOmegaWord::new(&p.u1, &p.u2)
    } else {
        RegularOmegaWord::new(&cat(&[&p.u1, &p.u3]), &p.u4)
    }
}

/// Decides which monotone sequence the pump yields.
pub fn classify_pump(p: PumpDecomposition) -> Result<GeneratedSequence> {
    let (u2, u3, u4, u5) = (&p.u2, &p.u3, &p.u4, &p.u5);
    let limit = limit_of(&p);
    let done = |kind, case, offset, p| {
        Ok(GeneratedSequence {
            pump: p,
            kind,
            case,
            offset,
            limit,
        })
    };

    if u4.is_empty() && relate(u3, &cat(&[u2, u3])) == Relation::ProperPrefix {
        assert!(!u2.is_empty(), "head case needs a nonempty u2");
        let lo = cat(&[u3, u5]);
        let hi = cat(&[u2, u3, u5]);
        return match relate(&lo, &hi) {
            Relation::StrictLess => done(SequenceKind::AscendingStrict, PumpCase::HeadAscending, 0, p),
            Relation::StrictGreater => {
                done(SequenceKind::DescendingStrict, PumpCase::HeadDescending, 0, p)
            }
            Relation::ProperPrefix => done(SequenceKind::PrefixChain, PumpCase::HeadPrefix, 0, p),
            r => Err(Error::Inconsistent(format!("head case comparison gave {r:?}"))),
        };
    }

    if !u4.is_empty()
        && RegularOmegaWord::new(u3, u4) == RegularOmegaWord::new(&cat(&[u2, u3]), u4)
    {
        let n = u2.len().div_ceil(u4.len()) + 1;
        let lo = cat(&[u3, &power(u4, n), u5]);
        let hi = cat(&[u2, u3, &power(u4, n + 1), u5]);
        return match relate(&lo, &hi) {
            Relation::StrictLess => done(SequenceKind::AscendingStrict, PumpCase::TailAscending, n, p),
            Relation::StrictGreater => {
                done(SequenceKind::DescendingStrict, PumpCase::TailDescending, n, p)
            }
            Relation::ProperPrefix => done(SequenceKind::PrefixChain, PumpCase::TailPrefix, n, p),
            r => Err(Error::Inconsistent(format!("tail case comparison gave {r:?}"))),
        };
    }

    let mut lo = u3.clone();
    let mut hi = cat(&[u2, u3]);
    for n in 0..MAX_PUMP_ITERATIONS {
        match relate(&lo, &hi) {
            Relation::StrictLess => return done(SequenceKind::AscendingStrict, PumpCase::Ascending, n, p),
            Relation::StrictGreater => {
                return done(SequenceKind::DescendingStrict, PumpCase::Descending, n, p)
            }
            _ if u4.is_empty() => {
                return Err(Error::Inconsistent("pump comparison never separates".into()))
            }
            _ => {
                lo.extend_from_slice(u4);
                hi.extend_from_slice(u4);
            }
        }
    }
    Err(Error::SearchCap(MAX_PUMP_ITERATIONS))
}

pub fn generate_sequence(g: &Grammar, alpha: &[Symbol]) -> Result<GeneratedSequence> {
    classify_pump(find_pump(g, alpha)?)
}

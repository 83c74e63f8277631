//! Context-free grammars over an ordered terminal alphabet.
//!
//! A [`Grammar`] is immutable once built; every transformation returns a new
//! grammar. Terminals are indices into a shared [`Alphabet`] whose index order
//! is the letter order, so comparing two [`Word`]s with `Ord` is exactly the
//! lexicographic order (a proper prefix sorts before its extensions).

mod analysis;
mod normalize;
mod parse;
mod relation;

use std::collections::{BTreeSet, HashSet};
use std::fmt;
use std::sync::Arc;

pub use analysis::{is_finite_language, membership, shortest_yields, ShortestYields};
pub use normalize::{
    eliminate_epsilon, eliminate_left_recursion, inline_nonrecursive, normalize,
    normalize_with, remove_useless, NormalizeConfig, DEFAULT_MAX_PRODUCTIONS,
};
pub use parse::parse_grammar;
pub use relation::{classify_symbols, SymbolRelation};

/// A letter, identified by its position in the alphabet order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Terminal(pub u16);

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct NonTerminal(pub u32);

impl NonTerminal {
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Symbol {
    T(Terminal),
    N(NonTerminal),
}

impl Symbol {
    pub fn nonterminal(self) -> Option<NonTerminal> {
        match self {
            Symbol::N(n) => Some(n),
            Symbol::T(_) => None,
        }
    }

    pub fn terminal(self) -> Option<Terminal> {
        match self {
            Symbol::T(t) => Some(t),
            Symbol::N(_) => None,
        }
    }
}

pub type Word = Vec<Terminal>;

/// Ordered terminal alphabet. Index order is letter order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Alphabet {
    glyphs: Vec<String>,
}

impl Alphabet {
    pub fn new<S: Into<String>>(glyphs: impl IntoIterator<Item = S>) -> Self {
        Alphabet {
            glyphs: glyphs.into_iter().map(Into::into).collect(),
        }
    }

    pub fn len(&self) -> usize {
        self.glyphs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.glyphs.is_empty()
    }

    pub fn glyph(&self, t: Terminal) -> &str {
        &self.glyphs[t.0 as usize]
    }

    pub fn lookup(&self, glyph: &str) -> Option<Terminal> {
        self.glyphs
            .iter()
            .position(|g| g == glyph)
            .map(|i| Terminal(i as u16))
    }

    pub fn letters(&self) -> impl Iterator<Item = Terminal> + '_ {
        (0..self.glyphs.len()).map(|i| Terminal(i as u16))
    }

    fn single_char(&self) -> bool {
        self.glyphs.iter().all(|g| g.chars().count() == 1)
    }

    /// Renders a word by concatenating glyphs, or space-separating them when
    /// some glyph is longer than one character. The empty word renders as `eps`.
    pub fn render(&self, word: &[Terminal]) -> String {
        if word.is_empty() {
            return "eps".to_string();
        }
        let sep = if self.single_char() { "" } else { " " };
        word.iter()
            .map(|&t| self.glyph(t))
            .collect::<Vec<_>>()
            .join(sep)
    }

    /// Parses a word written in the same style [`Alphabet::render`] produces.
    pub fn parse_word(&self, text: &str) -> Option<Word> {
        let text = text.trim();
        if text.is_empty() || text == "eps" {
            return Some(Vec::new());
        }
        if self.single_char() && !text.contains(char::is_whitespace) {
            text.chars()
                .map(|c| self.lookup(&c.to_string()))
                .collect()
        } else {
            text.split_whitespace().map(|g| self.lookup(g)).collect()
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Production {
    pub lhs: NonTerminal,
    pub rhs: Vec<Symbol>,
}

#[derive(Debug, Clone)]
pub struct Grammar {
    alphabet: Arc<Alphabet>,
    names: Vec<String>,
    productions: Vec<Production>,
    by_lhs: Vec<Vec<usize>>,
    start: NonTerminal,
    epsilon_in_language: bool,
}

impl Grammar {
    /// Builds a grammar, dropping exact duplicate productions (the first
    /// occurrence wins, so production order stays deterministic).
    pub fn new(
        alphabet: Arc<Alphabet>,
        names: Vec<String>,
        productions: Vec<Production>,
        start: NonTerminal,
    ) -> Self {
        assert!(start.index() < names.len(), "start symbol out of range");
        let mut seen = HashSet::new();
        let mut kept = Vec::with_capacity(productions.len());
        for p in productions {
            debug_assert!(p.lhs.index() < names.len());
            debug_assert!(p.rhs.iter().all(|s| match s {
                Symbol::N(n) => n.index() < names.len(),
                Symbol::T(t) => (t.0 as usize) < alphabet.len(),
            }));
            if seen.insert(p.clone()) {
                kept.push(p);
            }
        }
        let mut by_lhs = vec![Vec::new(); names.len()];
        for (i, p) in kept.iter().enumerate() {
            by_lhs[p.lhs.index()].push(i);
        }
        Grammar {
            alphabet,
            names,
            productions: kept,
            by_lhs,
            start,
            epsilon_in_language: false,
        }
    }

    pub fn alphabet(&self) -> &Arc<Alphabet> {
        &self.alphabet
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn name(&self, n: NonTerminal) -> &str {
        &self.names[n.index()]
    }

    pub fn lookup(&self, name: &str) -> Option<NonTerminal> {
        self.names
            .iter()
            .position(|n| n == name)
            .map(|i| NonTerminal(i as u32))
    }

    pub fn nonterminal_count(&self) -> usize {
        self.names.len()
    }

    pub fn nonterminals(&self) -> impl Iterator<Item = NonTerminal> {
        (0..self.names.len()).map(|i| NonTerminal(i as u32))
    }

    pub fn productions(&self) -> &[Production] {
        &self.productions
    }

    pub fn productions_of(&self, n: NonTerminal) -> impl Iterator<Item = &Production> + '_ {
        self.by_lhs[n.index()].iter().map(|&i| &self.productions[i])
    }

    pub fn production_indices_of(&self, n: NonTerminal) -> &[usize] {
        &self.by_lhs[n.index()]
    }

    pub fn start(&self) -> NonTerminal {
        self.start
    }

    pub fn epsilon_in_language(&self) -> bool {
        self.epsilon_in_language
    }

    pub fn with_epsilon_flag(mut self, flag: bool) -> Self {
        self.epsilon_in_language = flag;
        self
    }

    /// Same productions, different start symbol. The empty-word flag is
    /// cleared: it describes the old start symbol.
    pub fn with_start(&self, start: NonTerminal) -> Self {
        let mut g = self.clone();
        g.start = start;
        g.epsilon_in_language = false;
        g
    }

    /// Adds a fresh start symbol with the single production `S' -> alpha`.
    pub fn with_start_form(&self, alpha: &[Symbol]) -> Self {
        let mut names = self.names.clone();
        let fresh = NonTerminal(names.len() as u32);
        names.push(fresh_name(&self.names, "Start"));
        let mut productions = self.productions.clone();
        productions.push(Production {
            lhs: fresh,
            rhs: alpha.to_vec(),
        });
        Grammar::new(self.alphabet.clone(), names, productions, fresh)
    }

    /// The grammar with no words: a lone start symbol without productions.
    pub fn empty(alphabet: Arc<Alphabet>) -> Self {
        Grammar::new(alphabet, vec!["S".to_string()], Vec::new(), NonTerminal(0))
    }

    /// Keeps only the nonterminals flagged in `keep` (which must include the
    /// start symbol) and the productions that mention only kept symbols.
    pub(crate) fn restrict(&self, keep: &[bool]) -> Self {
        debug_assert!(keep[self.start.index()]);
        let mut remap = vec![u32::MAX; self.names.len()];
        let mut names = Vec::new();
        for (i, &k) in keep.iter().enumerate() {
            if k {
                remap[i] = names.len() as u32;
                names.push(self.names[i].clone());
            }
        }
        let productions = self
            .productions
            .iter()
            .filter(|p| {
                keep[p.lhs.index()]
                    && p.rhs.iter().all(|s| match s {
                        Symbol::N(n) => keep[n.index()],
                        Symbol::T(_) => true,
                    })
            })
            .map(|p| Production {
                lhs: NonTerminal(remap[p.lhs.index()]),
                rhs: p
                    .rhs
                    .iter()
                    .map(|s| match *s {
                        Symbol::N(n) => Symbol::N(NonTerminal(remap[n.index()])),
                        t => t,
                    })
                    .collect(),
            })
            .collect();
        Grammar::new(
            self.alphabet.clone(),
            names,
            productions,
            NonTerminal(remap[self.start.index()]),
        )
        .with_epsilon_flag(self.epsilon_in_language)
    }

    /// Distinct terminal-only alternatives of the start symbol.
    pub(crate) fn terminal_alternatives(&self) -> BTreeSet<Word> {
        self.productions_of(self.start)
            .filter_map(|p| p.rhs.iter().map(|s| s.terminal()).collect::<Option<Word>>())
            .collect()
    }

    pub fn render_form(&self, alpha: &[Symbol]) -> String {
        if alpha.is_empty() {
            return "eps".to_string();
        }
        alpha
            .iter()
            .map(|s| match *s {
                Symbol::T(t) => self.alphabet.glyph(t).to_string(),
                Symbol::N(n) => self.name(n).to_string(),
            })
            .collect::<Vec<_>>()
            .join(" ")
    }

    pub fn render_word(&self, w: &[Terminal]) -> String {
        self.alphabet.render(w)
    }
}

/// Picks a name derived from `base` that is not already taken.
pub(crate) fn fresh_name(taken: &[String], base: &str) -> String {
    let mut candidate = base.to_string();
    while taken.iter().any(|n| *n == candidate) {
        candidate.push('\'');
    }
    candidate
}

impl fmt::Display for Grammar {
    /// Writes the grammar in the same text format [`parse_grammar`] reads.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let letters: Vec<&str> = self.alphabet.letters().map(|t| self.alphabet.glyph(t)).collect();
        writeln!(f, "alphabet: {}", letters.join(" < "))?;
        writeln!(f, "start: {}", self.name(self.start))?;
        if self.epsilon_in_language {
            writeln!(f, "# the empty word was removed from the language")?;
        }
        for n in self.nonterminals() {
            let alts: Vec<String> = self
                .productions_of(n)
                .map(|p| self.render_form(&p.rhs))
                .collect();
            if !alts.is_empty() {
                writeln!(f, "{} -> {}", self.name(n), alts.join(" | "))?;
            }
        }
        Ok(())
    }
}

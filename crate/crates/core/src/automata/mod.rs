//! Deterministic automata for the regular languages the decision procedures
//! reduce to, and their intersection with context-free grammars.

mod cfg;

use std::collections::{BTreeSet, HashMap, VecDeque};
use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::grammar::{Alphabet, Terminal};
use crate::omega_word::RegularOmegaWord;

pub use cfg::{cfl_empty, cfl_subset_regular, chain_escape_exists, intersect_cfg_regular};

/// Role of a state relative to the ω-word the automaton was built from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum StateClass {
    /// Words reaching here are prefixes of the ω-word.
    Prefix,
    /// Words reaching here are strictly smaller at a mismatch.
    LessSink,
    /// Words reaching here are strictly larger at a mismatch.
    GreaterSink,
    Other,
}

impl StateClass {
    fn tag(self) -> &'static str {
        match self {
            StateClass::Prefix => "prefix",
            StateClass::LessSink => "less",
            StateClass::GreaterSink => "greater",
            StateClass::Other => "other",
        }
    }
}

/// A total DFA over the letters `0..alphabet_size`.
#[derive(Debug, Clone)]
pub struct Dfa {
    alphabet_size: usize,
    trans: Vec<Vec<usize>>,
    initial: usize,
    accepting: Vec<bool>,
    class: Vec<StateClass>,
    /// For prefix states of `M_{u,v}`: what remains of the ω-word.
    residual: Vec<Option<RegularOmegaWord>>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OmegaCut {
    Less,
    Greater,
    Prefix,
    LessOrPrefix,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum WordCut {
    LessOrEqual,
    Greater,
}

impl Dfa {
    /// A DFA from an explicit transition table; every state is `Other`.
    pub fn from_table(
        alphabet_size: usize,
        trans: Vec<Vec<usize>>,
        initial: usize,
        accepting: Vec<bool>,
    ) -> Result<Dfa> {
        let n = trans.len();
        let bad = |m: String| Err(Error::Inconsistent(m));
        if initial >= n || accepting.len() != n {
            return bad("initial state or accepting set out of range".into());
        }
        for row in &trans {
            if row.len() != alphabet_size {
                return Err(Error::AlphabetMismatch(row.len(), alphabet_size));
            }
            if row.iter().any(|&t| t >= n) {
                return bad("transition target out of range".into());
            }
        }
        Ok(Dfa {
            alphabet_size,
            trans,
            initial,
            accepting,
            class: vec![StateClass::Other; n],
            residual: vec![None; n],
        })
    }

    pub fn state_count(&self) -> usize {
        self.trans.len()
    }

    pub fn alphabet_size(&self) -> usize {
        self.alphabet_size
    }

    pub fn initial(&self) -> usize {
        self.initial
    }

    pub fn step(&self, q: usize, a: Terminal) -> usize {
        self.trans[q][a.0 as usize]
    }

    pub fn run_from(&self, q: usize, w: &[Terminal]) -> usize {
        w.iter().fold(q, |q, &a| self.step(q, a))
    }

    pub fn run(&self, w: &[Terminal]) -> usize {
        self.run_from(self.initial, w)
    }

    pub fn accepts(&self, w: &[Terminal]) -> bool {
        self.accepting[self.run(w)]
    }

    pub fn is_accepting(&self, q: usize) -> bool {
        self.accepting[q]
    }

    pub fn class(&self, q: usize) -> StateClass {
        self.class[q]
    }

    pub fn residual(&self, q: usize) -> Option<&RegularOmegaWord> {
        self.residual[q].as_ref()
    }

    pub fn states_of_class(&self, c: StateClass) -> impl Iterator<Item = usize> + '_ {
        (0..self.state_count()).filter(move |&q| self.class[q] == c)
    }

    /// The same automaton with a different accepting set.
    pub fn with_accepting(&self, accept: impl Fn(usize) -> bool) -> Dfa {
        let mut d = self.clone();
        d.accepting = (0..d.state_count()).map(accept).collect();
        d
    }

    pub fn complement(&self) -> Dfa {
        self.with_accepting(|q| !self.accepting[q])
    }

    /// Accepts every word over the alphabet.
    pub fn universal(alphabet_size: usize) -> Dfa {
        Dfa {
            alphabet_size,
            trans: vec![vec![0; alphabet_size]],
            initial: 0,
            accepting: vec![true],
            class: vec![StateClass::Other],
            residual: vec![None],
        }
    }

    /// `reach[p][q]`: some word (possibly empty) leads from `p` to `q`.
    pub fn reachability(&self) -> Vec<Vec<bool>> {
        let n = self.state_count();
        let mut reach = vec![vec![false; n]; n];
        for (p, row) in reach.iter_mut().enumerate() {
            row[p] = true;
            let mut stack = vec![p];
            while let Some(q) = stack.pop() {
                for &r in &self.trans[q] {
                    if !row[r] {
                        row[r] = true;
                        stack.push(r);
                    }
                }
            }
        }
        reach
    }

    /// Graphviz rendering; node shape encodes the state class.
    pub fn to_dot(&self, name: &str, alphabet: &Alphabet) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "digraph \"{}\" {{", name.replace('"', "'"));
        let _ = writeln!(out, "  rankdir=LR;");
        let _ = writeln!(out, "  init [shape=point];");
        for q in 0..self.state_count() {
            let shape = match self.class[q] {
                StateClass::Prefix => "ellipse",
                StateClass::LessSink => "invtriangle",
                StateClass::GreaterSink => "triangle",
                StateClass::Other => "box",
            };
            let peripheries = if self.accepting[q] { 2 } else { 1 };
            let _ = writeln!(
                out,
                "  q{q} [shape={shape}, peripheries={peripheries}, label=\"{q}: {}\"];",
                self.class[q].tag()
            );
        }
        let _ = writeln!(out, "  init -> q{};", self.initial);
        for q in 0..self.state_count() {
            let mut grouped: HashMap<usize, Vec<&str>> = HashMap::new();
            for a in alphabet.letters() {
                grouped.entry(self.step(q, a)).or_default().push(alphabet.glyph(a));
            }
            let mut targets: Vec<_> = grouped.into_iter().collect();
            targets.sort();
            for (r, letters) in targets {
                let _ = writeln!(out, "  q{q} -> q{r} [label=\"{}\"];", letters.join(","));
            }
        }
        out.push_str("}\n");
        out
    }
}

/// The automaton `M_{u,v}` over residuals of `x = u v^ω`: prefix states
/// carry the remaining ω-word, and the first mismatch sends a word to the
/// less or greater trap.
pub fn build_muv(x: &RegularOmegaWord, alphabet_size: usize) -> Dfa {
    let mut index: HashMap<RegularOmegaWord, usize> = HashMap::new();
    let mut residual: Vec<Option<RegularOmegaWord>> = Vec::new();
    let mut class = Vec::new();
    let mut trans: Vec<Vec<usize>> = Vec::new();
    let less = 0;
    let greater = 1;
    for (c, _) in [(StateClass::LessSink, 0), (StateClass::GreaterSink, 1)] {
        class.push(c);
        residual.push(None);
        trans.push(vec![class.len() - 1; alphabet_size]);
    }
    let mut queue = VecDeque::new();
    index.insert(x.clone(), 2);
    class.push(StateClass::Prefix);
    residual.push(Some(x.clone()));
    trans.push(Vec::new());
    queue.push_back(2);
    while let Some(q) = queue.pop_front() {
        let r = residual[q].clone().unwrap();
        let head = r.letter_at(0);
        let mut row = Vec::with_capacity(alphabet_size);
        for a in 0..alphabet_size {
            let a = Terminal(a as u16);
            let target = if a < head {
                less
            } else if a > head {
                greater
            } else {
                let next = r.suffix(1);
                match index.get(&next) {
                    Some(&t) => t,
                    None => {
                        let t = class.len();
                        index.insert(next.clone(), t);
                        class.push(StateClass::Prefix);
                        residual.push(Some(next));
                        trans.push(Vec::new());
                        queue.push_back(t);
                        t
                    }
                }
            };
            row.push(target);
        }
        trans[q] = row;
    }
    let n = class.len();
    Dfa {
        alphabet_size,
        trans,
        initial: 2,
        accepting: vec![false; n],
        class,
        residual,
    }
}

/// Acceptor for the words below, above, or prefix of an ω-word.
pub fn regular_cut(x: &RegularOmegaWord, which: OmegaCut, alphabet_size: usize) -> Dfa {
    let m = build_muv(x, alphabet_size);
    let accept = |c: StateClass| match which {
        OmegaCut::Less => c == StateClass::LessSink,
        OmegaCut::Greater => c == StateClass::GreaterSink,
        OmegaCut::Prefix => c == StateClass::Prefix,
        OmegaCut::LessOrPrefix => matches!(c, StateClass::LessSink | StateClass::Prefix),
    };
    m.with_accepting(|q| accept(m.class[q]))
}

/// Acceptor for `{x : x ≤ w}` or `{x : w < x}` in the lexicographic order.
pub fn word_cut(w: &[Terminal], which: WordCut, alphabet_size: usize) -> Dfa {
    let n = w.len();
    let less = n + 1;
    let greater = n + 2;
    let mut trans = Vec::with_capacity(n + 3);
    for i in 0..=n {
        let row = (0..alphabet_size)
            .map(|a| {
                let a = Terminal(a as u16);
                if i == n || a > w[i] {
                    greater
                } else if a < w[i] {
                    less
                } else {
                    i + 1
                }
            })
            .collect();
        trans.push(row);
    }
    trans.push(vec![less; alphabet_size]);
    trans.push(vec![greater; alphabet_size]);
    let mut class = vec![StateClass::Prefix; n + 1];
    class.push(StateClass::LessSink);
    class.push(StateClass::GreaterSink);
    let accepting = (0..n + 3)
        .map(|q| match which {
            WordCut::LessOrEqual => q != greater,
            WordCut::Greater => q == greater,
        })
        .collect();
    Dfa {
        alphabet_size,
        trans,
        initial: 0,
        accepting,
        class,
        residual: vec![None; n + 3],
    }
}

/// A synchronous product; `pairs[q]` names the component states of `q`.
#[derive(Debug, Clone)]
pub struct Product {
    pub dfa: Dfa,
    pub pairs: Vec<(usize, usize)>,
}

/// Reachable part of the product, accepting where both components accept.
pub fn product(d1: &Dfa, d2: &Dfa) -> Result<Product> {
    product_from(d1, d2, &[(d1.initial, d2.initial)], |a, b| a && b)
}

/// Product restricted to the states reachable from `starts`; the first start
/// becomes the initial state.
pub fn product_from(
    d1: &Dfa,
    d2: &Dfa,
    starts: &[(usize, usize)],
    accept: impl Fn(bool, bool) -> bool,
) -> Result<Product> {
    if d1.alphabet_size != d2.alphabet_size {
        return Err(Error::AlphabetMismatch(d1.alphabet_size, d2.alphabet_size));
    }
    let k = d1.alphabet_size;
    let mut index: HashMap<(usize, usize), usize> = HashMap::new();
    let mut pairs = Vec::new();
    let mut queue = VecDeque::new();
    for &s in starts {
        if !index.contains_key(&s) {
            index.insert(s, pairs.len());
            pairs.push(s);
            queue.push_back(s);
        }
    }
    let mut trans = vec![Vec::new(); pairs.len()];
    while let Some((p, q)) = queue.pop_front() {
        let me = index[&(p, q)];
        let mut row = Vec::with_capacity(k);
        for a in 0..k {
            let next = (d1.trans[p][a], d2.trans[q][a]);
            let t = *index.entry(next).or_insert_with(|| {
                pairs.push(next);
                queue.push_back(next);
                trans.push(Vec::new());
                pairs.len() - 1
            });
            row.push(t);
        }
        trans[me] = row;
    }
    let n = pairs.len();
    let dfa = Dfa {
        alphabet_size: k,
        trans,
        initial: 0,
        accepting: pairs
            .iter()
            .map(|&(p, q)| accept(d1.accepting[p], d2.accepting[q]))
            .collect(),
        class: vec![StateClass::Other; n],
        residual: vec![None; n],
    };
    Ok(Product { dfa, pairs })
}

/// A small NFA used only to describe fixed-shape languages before
/// determinization.
pub(crate) struct Nfa {
    pub alphabet_size: usize,
    pub edges: Vec<Vec<(Terminal, usize)>>,
    pub initial: usize,
    pub accepting: Vec<bool>,
}

impl Nfa {
    pub fn determinize(&self) -> Dfa {
        let k = self.alphabet_size;
        let start: BTreeSet<usize> = [self.initial].into();
        let mut index: HashMap<BTreeSet<usize>, usize> = HashMap::new();
        let mut sets = vec![start.clone()];
        index.insert(start, 0);
        let mut trans: Vec<Vec<usize>> = Vec::new();
        let mut i = 0;
        while i < sets.len() {
            let mut row = Vec::with_capacity(k);
            for a in 0..k {
                let a = Terminal(a as u16);
                let next: BTreeSet<usize> = sets[i]
                    .iter()
                    .flat_map(|&s| self.edges[s].iter().filter(|e| e.0 == a).map(|e| e.1))
                    .collect();
                let t = match index.get(&next) {
                    Some(&t) => t,
                    None => {
                        sets.push(next.clone());
                        index.insert(next, sets.len() - 1);
                        sets.len() - 1
                    }
                };
                row.push(t);
            }
            trans.push(row);
            i += 1;
        }
        let n = sets.len();
        Dfa {
            alphabet_size: k,
            trans,
            initial: 0,
            accepting: sets
                .iter()
                .map(|s| s.iter().any(|&q| self.accepting[q]))
                .collect(),
            class: vec![StateClass::Other; n],
            residual: vec![None; n],
        }
    }
}

/// Acceptor for `{u^k r : k ≥ min_reps}`. `u` must be nonempty.
pub fn power_dfa(u: &[Terminal], min_reps: usize, r: &[Terminal], alphabet_size: usize) -> Dfa {
    assert!(!u.is_empty());
    // States: a chain spelling u^min_reps, then a loop on u, then the tail r.
    let mut edges: Vec<Vec<(Terminal, usize)>> = Vec::new();
    let new_state = |edges: &mut Vec<Vec<(Terminal, usize)>>| {
        edges.push(Vec::new());
        edges.len() - 1
    };
    let initial = new_state(&mut edges);
    let mut cur = initial;
    for _ in 0..min_reps {
        for &a in u {
            let nx = new_state(&mut edges);
            edges[cur].push((a, nx));
            cur = nx;
        }
    }
    let loop_head = cur;
    let mut at = loop_head;
    for (i, &a) in u.iter().enumerate() {
        let nx = if i + 1 == u.len() { loop_head } else { new_state(&mut edges) };
        edges[at].push((a, nx));
        at = nx;
    }
    let mut tail = loop_head;
    for &a in r {
        let nx = new_state(&mut edges);
        edges[tail].push((a, nx));
        tail = nx;
    }
    let mut accepting = vec![false; edges.len()];
    accepting[tail] = true;
    Nfa {
        alphabet_size,
        edges,
        initial,
        accepting,
    }
    .determinize()
}

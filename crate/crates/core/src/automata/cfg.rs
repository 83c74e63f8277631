use std::collections::{HashMap, VecDeque};

use super::{build_muv, product_from, Dfa, StateClass};
use crate::grammar::{fresh_name, Grammar, NonTerminal, Production, Symbol};
use crate::omega_word::RegularOmegaWord;

/// A relation on DFA states stored as one bitset row per state.
#[derive(Clone, PartialEq, Eq)]
struct Rel {
    rows: Vec<Vec<u64>>,
}

impl Rel {
    fn empty(n: usize) -> Self {
        Rel {
            rows: vec![vec![0; n.div_ceil(64)]; n],
        }
    }

    fn identity(n: usize) -> Self {
        let mut r = Self::empty(n);
        for p in 0..n {
            r.set(p, p);
        }
        r
    }

    fn set(&mut self, p: usize, q: usize) {
        self.rows[p][q / 64] |= 1 << (q % 64);
    }

    fn get(&self, p: usize, q: usize) -> bool {
        self.rows[p][q / 64] >> (q % 64) & 1 == 1
    }

    fn successors(&self, p: usize) -> impl Iterator<Item = usize> + '_ {
        self.rows[p].iter().enumerate().flat_map(|(i, &word)| {
            (0..64).filter(move |b| word >> b & 1 == 1).map(move |b| i * 64 + b)
        })
    }

    fn compose(&self, other: &Rel) -> Rel {
        let mut out = Rel {
            rows: vec![vec![0; self.rows.first().map_or(0, Vec::len)]; self.rows.len()],
        };
        for p in 0..self.rows.len() {
            for q in self.successors(p) {
                for (o, &x) in out.rows[p].iter_mut().zip(&other.rows[q]) {
                    *o |= x;
                }
            }
        }
        out
    }

    fn union_with(&mut self, other: &Rel) -> bool {
        let mut changed = false;
        for (a, b) in self.rows.iter_mut().zip(&other.rows) {
            for (x, &y) in a.iter_mut().zip(b) {
                if *x | y != *x {
                    *x |= y;
                    changed = true;
                }
            }
        }
        changed
    }
}

/// For every nonterminal `X`, the pairs `(p, q)` such that some word of
/// `L(X)` leads the DFA from `p` to `q`.
fn summaries(g: &Grammar, d: &Dfa) -> (Vec<Rel>, Vec<Rel>) {
    let n = d.state_count();
    let letters: Vec<Rel> = (0..d.alphabet_size())
        .map(|a| {
            let mut r = Rel::empty(n);
            for p in 0..n {
                r.set(p, d.trans[p][a]);
            }
            r
        })
        .collect();
    let mut rel = vec![Rel::empty(n); g.nonterminal_count()];
    let mut changed = true;
    while changed {
        changed = false;
        for p in g.productions() {
            let mut r = Rel::identity(n);
            for s in &p.rhs {
                r = match s {
                    Symbol::T(t) => r.compose(&letters[t.0 as usize]),
                    Symbol::N(y) => r.compose(&rel[y.index()]),
                };
            }
            changed |= rel[p.lhs.index()].union_with(&r);
        }
    }
    (rel, letters)
}

/// Grammar for `L(g) ∩ L(d)` by the triple construction, generated top-down
/// from the start triples and restricted to productive triples.
pub fn intersect_cfg_regular(g: &Grammar, d: &Dfa) -> Grammar {
    assert_eq!(g.alphabet().len(), d.alphabet_size(), "alphabet mismatch");
    let n = d.state_count();
    let (rel, letters) = summaries(g, d);
    let sym_rel = |s: &Symbol| -> &Rel {
        match s {
            Symbol::T(t) => &letters[t.0 as usize],
            Symbol::N(y) => &rel[y.index()],
        }
    };
    // suffix[i] relates states before rhs[i..] to states after the whole rhs.
    let suffixes: Vec<Vec<Rel>> = g
        .productions()
        .iter()
        .map(|p| {
            let mut suf = vec![Rel::identity(n)];
            for s in p.rhs.iter().rev() {
                let next = sym_rel(s).compose(suf.last().unwrap());
                suf.push(next);
            }
            suf.reverse();
            suf
        })
        .collect();

    let mut names = vec![String::new()];
    let mut index: HashMap<(usize, NonTerminal, usize), NonTerminal> = HashMap::new();
    let mut queue = VecDeque::new();
    let mut productions = Vec::new();
    let start = NonTerminal(0);
    type Key = (usize, NonTerminal, usize);
    let intern = |key: Key,
                  index: &mut HashMap<Key, NonTerminal>,
                  names: &mut Vec<String>,
                  queue: &mut VecDeque<(Key, NonTerminal)>| {
        *index.entry(key).or_insert_with(|| {
            names.push(format!("{}[{},{}]", g.name(key.1), key.0, key.2));
            let id = NonTerminal(names.len() as u32 - 1);
            queue.push_back((key, id));
            id
        })
    };
    let q0 = d.initial();
    for f in (0..n).filter(|&f| d.is_accepting(f)) {
        if rel[g.start().index()].get(q0, f) {
            let t = intern((q0, g.start(), f), &mut index, &mut names, &mut queue);
            productions.push(Production {
                lhs: start,
                rhs: vec![Symbol::N(t)],
            });
        }
    }
    while let Some(((p, x, q), lhs)) = queue.pop_front() {
        for &pi in g.production_indices_of(x) {
            let rhs = &g.productions()[pi].rhs;
            let suf = &suffixes[pi];
            if !suf[0].get(p, q) {
                continue;
            }
            // Depth-first over state sequences that can still end in q.
            let mut stack: Vec<(usize, usize, Vec<Symbol>)> = vec![(0, p, Vec::new())];
            while let Some((i, s, built)) = stack.pop() {
                if i == rhs.len() {
                    productions.push(Production { lhs, rhs: built });
                    continue;
                }
                let r = sym_rel(&rhs[i]);
                for s2 in r.successors(s) {
                    if !suf[i + 1].get(s2, q) {
                        continue;
                    }
                    let mut b = built.clone();
                    match rhs[i] {
                        Symbol::T(t) => b.push(Symbol::T(t)),
                        Symbol::N(y) => {
                            b.push(Symbol::N(intern((s, y, s2), &mut index, &mut names, &mut queue)))
                        }
                    }
                    stack.push((i + 1, s2, b));
                }
            }
        }
    }
    names[0] = fresh_name(&names[1..], "Start");
    Grammar::new(g.alphabet().clone(), names, productions, start)
        .with_epsilon_flag(g.epsilon_in_language() && d.is_accepting(q0))
}

/// Whether the language is empty, counting the recorded empty word.
pub fn cfl_empty(g: &Grammar) -> bool {
    if g.epsilon_in_language() {
        return false;
    }
    let mut productive = vec![false; g.nonterminal_count()];
    let mut changed = true;
    while changed {
        changed = false;
        for p in g.productions() {
            if !productive[p.lhs.index()]
                && p.rhs.iter().all(|s| match s {
                    Symbol::N(n) => productive[n.index()],
                    Symbol::T(_) => true,
                })
            {
                productive[p.lhs.index()] = true;
                changed = true;
            }
        }
    }
    !productive[g.start().index()]
}

pub fn cfl_subset_regular(g: &Grammar, d: &Dfa) -> bool {
    cfl_empty(&intersect_cfg_regular(g, &d.complement()))
}

/// Whether some `w1 ∈ L(l1)` and word `u'a` satisfy `w1 u' <_p x`,
/// `w1 u' a <_s x` and `u' a <_p l2sup`: some word of `l1` followed by a
/// prefix of `l2sup` falls strictly below `x`.
pub fn chain_escape_exists(
    l1: &Grammar,
    x: &RegularOmegaWord,
    l2sup: &RegularOmegaWord,
) -> bool {
    let k = l1.alphabet().len();
    let m1 = build_muv(x, k);
    let m2 = build_muv(l2sup, k);
    let q1: Vec<usize> = m1
        .states_of_class(StateClass::Prefix)
        .filter(|&q| !cfl_empty(&intersect_cfg_regular(l1, &m1.with_accepting(|r| r == q))))
        .collect();
    if q1.is_empty() {
        return false;
    }
    let starts: Vec<(usize, usize)> = q1.iter().map(|&p| (p, m2.initial())).collect();
    let prod = product_from(&m1, &m2, &starts, |_, _| false).expect("same alphabet");
    prod.pairs.iter().any(|&(a, b)| {
        m1.class(a) == StateClass::LessSink && m2.class(b) == StateClass::Prefix
    })
}

use super::normalize::{eliminate_epsilon, remove_useless};
use super::{classify_symbols, Grammar, NonTerminal, Symbol, Terminal, Word};
use crate::error::Error;

/// Whether `L(x)` is finite. Works on any grammar, normalized or not.
pub fn is_finite_language(g: &Grammar, x: NonTerminal) -> bool {
    let h = match eliminate_epsilon(&g.with_start(x)).and_then(|h| remove_useless(&h)) {
        Ok(h) => h,
        Err(Error::EmptyLanguage { .. }) => return true,
        Err(e) => panic!("unexpected failure while testing finiteness: {e}"),
    };
    let rel = classify_symbols(&h);
    // In an ε-free grammar without useless symbols the language is infinite
    // exactly when some recursive production also emits something else.
    !h.productions().iter().any(|p| {
        p.rhs.len() >= 2
            && p.rhs
                .iter()
                .any(|s| matches!(s, Symbol::N(y) if rel.equivalent(*y, p.lhs)))
    })
}

/// Recognizes `w` with a span table over the ε-free version of the grammar.
pub fn membership(g: &Grammar, w: &[Terminal]) -> bool {
    let h = match eliminate_epsilon(g) {
        Ok(h) => h,
        Err(Error::EmptyLanguage { epsilon }) => return w.is_empty() && epsilon,
        Err(e) => panic!("unexpected failure during membership: {e}"),
    };
    if w.is_empty() {
        return h.epsilon_in_language();
    }
    let n = w.len();
    let nt = h.nonterminal_count();
    // derives[i][l-1][x]: x derives w[i..i+l]
    let mut derives = vec![vec![vec![false; nt]; n]; n];
    for len in 1..=n {
        for i in 0..=(n - len) {
            let mut changed = true;
            while changed {
                changed = false;
                for p in h.productions() {
                    if derives[i][len - 1][p.lhs.index()] || p.rhs.len() > len {
                        continue;
                    }
                    if matches_span(&p.rhs, w, i, len, &derives) {
                        derives[i][len - 1][p.lhs.index()] = true;
                        changed = true;
                    }
                }
            }
        }
    }
    derives[0][n - 1][h.start().index()]
}

fn matches_span(
    rhs: &[Symbol],
    w: &[Terminal],
    start: usize,
    len: usize,
    derives: &[Vec<Vec<bool>>],
) -> bool {
    let end = start + len;
    // positions reachable after consuming a prefix of rhs
    let mut at = vec![false; len + 1];
    at[0] = true;
    for s in rhs {
        let mut next = vec![false; len + 1];
        for (off, _) in at.iter().enumerate().filter(|(_, &b)| b) {
            let pos = start + off;
            match *s {
                Symbol::T(t) => {
                    if pos < end && w[pos] == t {
                        next[off + 1] = true;
                    }
                }
                Symbol::N(x) => {
                    for l in 1..=(end - pos) {
                        if derives[pos][l - 1][x.index()] {
                            next[off + l] = true;
                        }
                    }
                }
            }
        }
        at = next;
    }
    at[len]
}

/// A shortest terminal word for every productive nonterminal, with the
/// production used at the root. Ties go to the earliest production.
#[derive(Debug, Clone)]
pub struct ShortestYields {
    pub length: Vec<Option<usize>>,
    pub choice: Vec<Option<usize>>,
    pub word: Vec<Option<Word>>,
}

impl ShortestYields {
    pub fn of(&self, x: NonTerminal) -> Option<&Word> {
        self.word[x.index()].as_ref()
    }

    /// Expands a sentential form by replacing each nonterminal with its
    /// shortest word.
    pub fn expand(&self, alpha: &[Symbol]) -> Option<Word> {
        let mut out = Vec::new();
        for s in alpha {
            match *s {
                Symbol::T(t) => out.push(t),
                Symbol::N(x) => out.extend_from_slice(self.of(x)?),
            }
        }
        Some(out)
    }
}

/// Computes shortest yields by repeatedly settling the nonterminal with the
/// smallest length obtainable from already settled symbols.
pub fn shortest_yields(g: &Grammar) -> ShortestYields {
    let n = g.nonterminal_count();
    let mut length: Vec<Option<usize>> = vec![None; n];
    let mut choice: Vec<Option<usize>> = vec![None; n];
    let mut order = Vec::new();
    loop {
        let mut best: Option<(usize, usize, usize)> = None; // (len, production, lhs)
        for (pi, p) in g.productions().iter().enumerate() {
            if length[p.lhs.index()].is_some() {
                continue;
            }
            let mut total = 0usize;
            let mut ok = true;
            for s in &p.rhs {
                match s {
                    Symbol::T(_) => total += 1,
                    Symbol::N(y) => match length[y.index()] {
                        Some(l) => total += l,
                        None => {
                            ok = false;
                            break;
                        }
                    },
                }
            }
            if ok && best.is_none_or(|(bl, bp, _)| (total, pi) < (bl, bp)) {
                best = Some((total, pi, p.lhs.index()));
            }
        }
        match best {
            Some((l, pi, x)) => {
                length[x] = Some(l);
                choice[x] = Some(pi);
                order.push(x);
            }
            None => break,
        }
    }
    let mut word: Vec<Option<Word>> = vec![None; n];
    for x in order {
        let p = &g.productions()[choice[x].unwrap()];
        let mut w = Vec::with_capacity(length[x].unwrap());
        for s in &p.rhs {
            match *s {
                Symbol::T(t) => w.push(t),
                Symbol::N(y) => w.extend_from_slice(word[y.index()].as_ref().unwrap()),
            }
        }
        word[x] = Some(w);
    }
    ShortestYields {
        length,
        choice,
        word,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grammar::parse_grammar;

    fn g(src: &str) -> Grammar {
        parse_grammar(&format!("alphabet: a < b < c\n{src}")).unwrap()
    }

    #[test]
    fn finiteness() {
        let s = |gr: &Grammar| gr.start();
        let a = g("start: S\nS -> a S | a");
        assert!(!is_finite_language(&a, s(&a)));
        let b = g("start: S\nS -> a b");
        assert!(is_finite_language(&b, s(&b)));
        let c = g("start: S\nS -> a S b | c");
        assert!(!is_finite_language(&c, s(&c)));
        let d = g("start: S\nS -> A | a\nA -> S");
        assert!(is_finite_language(&d, s(&d)));
        let e = g("start: S\nS -> A S | a\nA -> eps");
        assert!(is_finite_language(&e, s(&e)));
    }

    #[test]
    fn membership_on_worked_example() {
        let gr = g("start: S\nS -> A | B | c | eps\nA -> a A | a\nB -> b B a | b a");
        let w = |s: &str| gr.alphabet().parse_word(s).unwrap();
        assert!(membership(&gr, &w("bbaa")));
        assert!(!membership(&gr, &w("bba")));
        assert!(membership(&gr, &w("aaa")));
        assert!(membership(&gr, &[]));
        assert!(!membership(&gr, &w("cc")));
    }

    #[test]
    fn shortest_words() {
        let gr = g("start: S\nS -> a S b | c a | b");
        let sy = shortest_yields(&gr);
        assert_eq!(sy.of(gr.start()).unwrap(), &gr.alphabet().parse_word("b").unwrap());
        let gr = g("start: S\nS -> A B\nA -> a A | a\nB -> c | b b");
        let sy = shortest_yields(&gr);
        assert_eq!(gr.render_word(sy.of(gr.start()).unwrap()), "ac");
    }
}

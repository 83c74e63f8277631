//! Ordinals `ω·k+n`, cuts of a language at a word, and the recursive
//! order-type computation.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::automata::{intersect_cfg_regular, regular_cut, word_cut, OmegaCut, WordCut};
use crate::error::{Error, Result};
use crate::grammar::{is_finite_language, normalize, Grammar, Symbol, Terminal, Word};
use crate::omega_decision::{grammar_omega, OmegaValue};
use crate::omega_word::RegularOmegaWord;
use crate::oracle::enumerate;
use crate::pumping::{generate_sequence, SequenceKind};
use crate::scatteredness::is_wellordered;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Bound {
    Depth,
    Iterations,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum OrderType {
    Finite { n: u64 },
    /// `ω·k + n` with `k ≥ 1`.
    OmegaLinear { k: u64, n: u64 },
    NotWellOrdered { scattered: bool },
    /// The recursion ran out of budget: the type is at least `ω²` or the
    /// budget was too small.
    BoundExceeded { what: Bound, limit: usize },
}

impl OrderType {
    pub const OMEGA: OrderType = OrderType::OmegaLinear { k: 1, n: 0 };

    pub fn finite(n: u64) -> Self {
        OrderType::Finite { n }
    }

    pub fn omega_linear(k: u64, n: u64) -> Self {
        assert!(k >= 1, "omega_linear needs k >= 1");
        OrderType::OmegaLinear { k, n }
    }

    pub fn is_ordinal(&self) -> bool {
        matches!(self, OrderType::Finite { .. } | OrderType::OmegaLinear { .. })
    }
}

impl fmt::Display for OrderType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            OrderType::Finite { n } => write!(f, "{n}"),
            OrderType::OmegaLinear { k, n } => {
                if k == 1 {
                    f.write_str("omega")?;
                } else {
                    write!(f, "omega*{k}")?;
                }
                if n > 0 {
                    write!(f, " + {n}")?;
                }
                Ok(())
            }
            OrderType::NotWellOrdered { scattered: true } => f.write_str("not well-ordered (scattered)"),
            OrderType::NotWellOrdered { scattered: false } => {
                f.write_str("not well-ordered (not scattered)")
            }
            OrderType::BoundExceeded { what, limit } => {
                let what = match what {
                    Bound::Depth => "recursion depth",
                    Bound::Iterations => "sequence iterations",
                };
                write!(f, "bound exceeded ({what} {limit})")
            }
        }
    }
}

/// Ordinal addition below `ω²`.
pub fn ord_sum(a: &OrderType, b: &OrderType) -> Result<OrderType> {
    use OrderType::*;
    Ok(match (a, b) {
        (Finite { n: m }, Finite { n }) => Finite { n: m + n },
        (Finite { .. }, OmegaLinear { k, n }) => OmegaLinear { k: *k, n: *n },
        (OmegaLinear { k, n }, Finite { n: m }) => OmegaLinear { k: *k, n: n + m },
        (OmegaLinear { k: k1, .. }, OmegaLinear { k: k2, n }) => OmegaLinear { k: k1 + k2, n: *n },
        _ => return Err(Error::NonOrdinal),
    })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CutPoint {
    AtOmegaWord(RegularOmegaWord),
    AtFiniteWord(Word),
}

/// A split of a language into a lower and an upper part; `None` marks an
/// empty part.
#[derive(Debug, Clone)]
pub struct Cut {
    pub point: CutPoint,
    pub lower: Option<Grammar>,
    pub upper: Option<Grammar>,
}

fn normalized_part(g: &Grammar) -> Result<Option<Grammar>> {
    match normalize(g) {
        Ok(h) => Ok(Some(h)),
        Err(Error::EmptyLanguage { epsilon: false }) => Ok(None),
        Err(Error::EmptyLanguage { epsilon: true }) => {
            Ok(Some(Grammar::empty(g.alphabet().clone()).with_epsilon_flag(true)))
        }
        Err(e) => Err(e),
    }
}

/// `L_{<x}` (words below `x` or prefixes of it) and `L_{>x}`.
pub fn cut_at_omega(g: &Grammar, x: &RegularOmegaWord) -> Result<Cut> {
    let k = g.alphabet().len();
    let lower = intersect_cfg_regular(g, &regular_cut(x, OmegaCut::LessOrPrefix, k));
    let upper = intersect_cfg_regular(g, &regular_cut(x, OmegaCut::Greater, k));
    Ok(Cut {
        point: CutPoint::AtOmegaWord(x.clone()),
        lower: normalized_part(&lower)?,
        upper: normalized_part(&upper)?,
    })
}

fn word_part(g: &Grammar, w: &[Terminal], which: WordCut) -> Result<Option<Grammar>> {
    normalized_part(&intersect_cfg_regular(g, &word_cut(w, which, g.alphabet().len())))
}

/// `L_{≤w}` and `L_{>w}`.
pub fn cut_at_word(g: &Grammar, w: &[Terminal]) -> Result<Cut> {
    Ok(Cut {
        point: CutPoint::AtFiniteWord(w.to_vec()),
        lower: word_part(g, w, WordCut::LessOrEqual)?,
        upper: word_part(g, w, WordCut::Greater)?,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Budget {
    pub max_depth: usize,
    pub max_step5_iterations: usize,
}

impl Default for Budget {
    fn default() -> Self {
        Budget {
            max_depth: 64,
            max_step5_iterations: 256,
        }
    }
}

#[derive(Debug, Clone)]
pub struct OrderTypeReport {
    pub result: OrderType,
    /// One line per decision taken, indented by recursion depth.
    pub trace: Vec<String>,
}

/// Renders a language by its short words, for traces.
fn describe(g: &Grammar) -> String {
    const SHOWN: usize = 6;
    let finite = is_finite_language(g, g.start());
    let words = enumerate(g, 4).map(|r| r.words).unwrap_or_default();
    let mut parts: Vec<String> = words.iter().take(SHOWN).map(|w| g.render_word(w)).collect();
    if !finite || words.len() > SHOWN {
        parts.push("...".into());
    }
    format!("{{{}}}", parts.join(", "))
}

struct Solver {
    budget: Budget,
    trace: Vec<String>,
}

impl Solver {
    fn note(&mut self, depth: usize, line: String) {
        self.trace.push(format!("{}{line}", "  ".repeat(depth)));
    }

    fn finish(&mut self, depth: usize, name: &str, g: &Grammar, o: OrderType) -> OrderType {
        self.note(depth, format!("result for {name} = {}: {o}", describe(g)));
        o
    }

    /// `o(L(g))` for a normalized, ε-free, well-ordered grammar.
    fn solve(&mut self, g: &Grammar, name: &str, depth: usize) -> Result<OrderType> {
        if depth > self.budget.max_depth {
            self.note(depth, format!("depth budget {} exhausted", self.budget.max_depth));
            return Ok(OrderType::BoundExceeded {
                what: Bound::Depth,
                limit: self.budget.max_depth,
            });
        }
        self.note(depth, format!("o({name}) where {name} = {}", describe(g)));
        if is_finite_language(g, g.start()) {
            let words = g.terminal_alternatives();
            if g.productions().len() != words.len() {
                return Err(Error::Inconsistent("finite normalized grammar with nonterminals".into()));
            }
            self.note(depth, format!("step 1: finite with {} words", words.len()));
            return Ok(self.finish(depth, name, g, OrderType::finite(words.len() as u64)));
        }
        let verdict = grammar_omega(g)?;
        match verdict.value {
            OmegaValue::IsOmega => {
                self.note(depth, "step 2: order type omega".into());
                return Ok(self.finish(depth, name, g, OrderType::OMEGA));
            }
            OmegaValue::NotWellOrdered => {
                return Err(Error::Inconsistent("a part of a well-ordered language is not well-ordered".into()))
            }
            _ => self.note(depth, "step 2: infinite, not omega".into()),
        }
        let seq = generate_sequence(g, &[Symbol::N(g.start())])?;
        if seq.kind == SequenceKind::DescendingStrict {
            return Err(Error::Inconsistent("a well-ordered language produced a descending sequence".into()));
        }
        let limit = seq.limit.render(g.alphabet());
        let p = &seq.pump;
        self.note(
            depth,
            format!(
                "step 3: sequence {}({})^n {}({})^n {} (case {}), limit {limit}",
                g.render_word(&p.u1),
                g.render_word(&p.u2),
                g.render_word(&p.u3),
                g.render_word(&p.u4),
                g.render_word(&p.u5),
                seq.case
            ),
        );
        let cut = cut_at_omega(g, &seq.limit)?;
        if let Some(upper) = cut.upper {
            let lower = cut
                .lower
                .ok_or_else(|| Error::Inconsistent("sequence words missing below their limit".into()))?;
            self.note(depth, format!("step 4: cut at {limit}; upper part nonempty: {}", describe(&upper)));
            let o1 = self.solve(&lower, &format!("{name}_{{<{limit}}}"), depth + 1)?;
            if !o1.is_ordinal() {
                return Ok(o1);
            }
            let o2 = self.solve(&upper, &format!("{name}_{{>{limit}}}"), depth + 1)?;
            if !o2.is_ordinal() {
                return Ok(o2);
            }
            let o = ord_sum(&o1, &o2)?;
            return Ok(self.finish(depth, name, g, o));
        }
        self.note(depth, format!("step 4: nothing above {limit}; scanning the sequence"));
        for n in 0..self.budget.max_step5_iterations {
            let w = seq.word_at(n);
            let shown = g.render_word(&w);
            let Some(upper) = word_part(g, &w, WordCut::Greater)? else {
                return Err(Error::Inconsistent("sequence reached the top of the language".into()));
            };
            if !grammar_omega(&upper)?.is_omega() {
                self.note(depth, format!("step 5: cut at word {shown}: upper part is not omega"));
                continue;
            }
            self.note(depth, format!("step 5: cut at word {shown}: upper part is omega"));
            let lower = word_part(g, &w, WordCut::LessOrEqual)?
                .ok_or_else(|| Error::Inconsistent("sequence word missing from its own cut".into()))?;
            let o1 = self.solve(&lower, &format!("{name}_{{<={shown}}}"), depth + 1)?;
            if !o1.is_ordinal() {
                return Ok(o1);
            }
            let o = ord_sum(&o1, &OrderType::OMEGA)?;
            return Ok(self.finish(depth, name, g, o));
        }
        self.note(
            depth,
            format!("iteration budget {} exhausted", self.budget.max_step5_iterations),
        );
        Ok(OrderType::BoundExceeded {
            what: Bound::Iterations,
            limit: self.budget.max_step5_iterations,
        })
    }
}

/// The order type of `L(g)` when it is below `ω²`, with a trace of the
/// recursion.
pub fn compute_order_type(g: &Grammar, budget: Budget) -> Result<OrderTypeReport> {
    let mut solver = Solver {
        budget,
        trace: Vec::new(),
    };
    let h = match normalize(g) {
        Ok(h) => h,
        Err(Error::EmptyLanguage { epsilon }) => {
            let o = OrderType::finite(epsilon as u64);
            solver.note(0, format!("empty after removing the empty word: {o}"));
            return Ok(OrderTypeReport {
                result: o,
                trace: solver.trace,
            });
        }
        Err(e) => return Err(e),
    };
    let wo = is_wellordered(&h)?;
    if !wo.well_ordered() {
        let o = OrderType::NotWellOrdered {
            scattered: wo.scattered(),
        };
        solver.note(0, format!("well-orderedness check failed: {o}"));
        return Ok(OrderTypeReport {
            result: o,
            trace: solver.trace,
        });
    }
    let epsilon = h.epsilon_in_language();
    let mut o = solver.solve(&h.with_epsilon_flag(false), "L", 0)?;
    if epsilon && o.is_ordinal() {
        o = ord_sum(&OrderType::finite(1), &o)?;
        solver.note(0, format!("adding the empty word: {o}"));
    }
    Ok(OrderTypeReport {
        result: o,
        trace: solver.trace,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grammar::parse_grammar;

    fn g(src: &str) -> Grammar {
        parse_grammar(&format!("alphabet: a < b < c\n{src}")).unwrap()
    }

    fn order(src: &str) -> OrderType {
        compute_order_type(&g(src), Budget::default()).unwrap().result
    }

    #[test]
    fn sums() {
        let w1 = OrderType::omega_linear(1, 1);
        assert_eq!(ord_sum(&w1, &OrderType::OMEGA).unwrap(), OrderType::omega_linear(2, 0));
        assert_eq!(
            ord_sum(&OrderType::omega_linear(2, 0), &OrderType::finite(1)).unwrap(),
            OrderType::omega_linear(2, 1)
        );
        assert_eq!(ord_sum(&OrderType::finite(0), &w1).unwrap(), w1);
        assert_eq!(ord_sum(&OrderType::finite(3), &w1).unwrap(), w1);
        let bad = OrderType::NotWellOrdered { scattered: true };
        assert_eq!(ord_sum(&bad, &w1), Err(Error::NonOrdinal));
    }

    #[test]
    fn display_and_json() {
        assert_eq!(OrderType::OMEGA.to_string(), "omega");
        assert_eq!(OrderType::omega_linear(2, 1).to_string(), "omega*2 + 1");
        assert_eq!(OrderType::omega_linear(1, 3).to_string(), "omega + 3");
        assert_eq!(
            serde_json::to_string(&OrderType::omega_linear(2, 1)).unwrap(),
            r#"{"kind":"omega_linear","k":2,"n":1}"#
        );
        let back: OrderType = serde_json::from_str(r#"{"kind":"finite","n":4}"#).unwrap();
        assert_eq!(back, OrderType::finite(4));
    }

    #[test]
    fn small_languages() {
        assert_eq!(order("start: S\nS -> a | b | a b"), OrderType::finite(3));
        assert_eq!(order("start: S\nS -> a S | eps"), OrderType::OMEGA);
        assert_eq!(order("start: S\nS -> eps"), OrderType::finite(1));
        assert_eq!(
            order("start: S\nS -> a S | b"),
            OrderType::NotWellOrdered { scattered: true }
        );
    }

    #[test]
    fn worked_example() {
        let src = "start: S\nS -> B | A | c | eps\nA -> a A | a\nB -> b B a | b a";
        let report = compute_order_type(&g(src), Budget::default()).unwrap();
        assert_eq!(report.result, OrderType::omega_linear(2, 1));
        let src2 = "start: S\nS -> eps | A | c | B\nA -> a A | a\nB -> b B a | b a";
        assert_eq!(order(src2), OrderType::omega_linear(2, 1));
    }

    #[test]
    fn cuts_partition() {
        let gr = normalize(&g("start: S\nS -> A | c | B\nA -> a A | a\nB -> b B a | b a")).unwrap();
        let cut = cut_at_omega(&gr, &RegularOmegaWord::periodic(&[Terminal(1)])).unwrap();
        let upper = enumerate(&cut.upper.unwrap(), 5).unwrap().words;
        assert_eq!(upper, vec![vec![Terminal(2)]]);
        let whole = enumerate(&gr, 6).unwrap().words.len();
        let lower = enumerate(&cut.lower.unwrap(), 6).unwrap().words.len();
        assert_eq!(lower + 1, whole);
    }
}

//! Deciding whether a language has order type exactly ω.

use std::fmt;

use crate::automata::{
    build_muv, cfl_empty, cfl_subset_regular, chain_escape_exists, intersect_cfg_regular,
    regular_cut, OmegaCut, StateClass,
};
use crate::error::{Error, Result};
use crate::grammar::{
    classify_symbols, is_finite_language, remove_useless, Grammar, NonTerminal, Symbol,
    SymbolRelation, Terminal, Word,
};
use crate::omega_word::{FiniteCmp, RegularOmegaWord};
use crate::pumping::{generate_sequence, SequenceKind};
use crate::scatteredness::{compute_ux, is_wellordered, WellOrderReport};

#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize)]
#[serde(rename_all = "snake_case")]
pub enum OmegaValue {
    IsOmega,
    InfiniteNotOmega,
    Finite,
    NotWellOrdered,
}

impl fmt::Display for OmegaValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            OmegaValue::IsOmega => "omega",
            OmegaValue::InfiniteNotOmega => "infinite, not omega",
            OmegaValue::Finite => "finite",
            OmegaValue::NotWellOrdered => "not well-ordered",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, serde::Serialize)]
pub struct OmegaVerdict {
    pub value: OmegaValue,
    pub witness: Option<String>,
}

impl OmegaVerdict {
    fn new(value: OmegaValue, witness: impl Into<String>) -> Self {
        OmegaVerdict {
            value,
            witness: Some(witness.into()),
        }
    }

    pub fn is_omega(&self) -> bool {
        self.value == OmegaValue::IsOmega
    }
}

fn words_of(g: &Grammar, alpha: &[Symbol]) -> Grammar {
    g.with_start_form(alpha)
}

fn terminal_word(alpha: &[Symbol]) -> Option<Word> {
    alpha.iter().map(|s| s.terminal()).collect()
}

/// Whether `L(alpha)` is a chain under the prefix order.
pub fn is_prefix_chain(g: &Grammar, alpha: &[Symbol]) -> Result<bool> {
    let seq = generate_sequence(g, alpha)?;
    if seq.kind != SequenceKind::PrefixChain {
        return Ok(false);
    }
    let pref = regular_cut(&seq.limit, OmegaCut::Prefix, g.alphabet().len());
    Ok(cfl_subset_regular(&words_of(g, alpha), &pref))
}

/// Supremum of a language of order type ω: the limit of its pumped sequence.
pub fn sup_omega_language(g: &Grammar, alpha: &[Symbol]) -> Result<RegularOmegaWord> {
    let seq = generate_sequence(g, alpha)?;
    if seq.kind == SequenceKind::DescendingStrict {
        return Err(Error::Inconsistent(
            "a language of type omega produced a descending sequence".into(),
        ));
    }
    Ok(seq.limit)
}

/// Verdicts for the nonterminals of one normalized grammar, computed on
/// demand and memoized.
pub struct OmegaDecider<'g> {
    g: &'g Grammar,
    rel: SymbolRelation,
    verdicts: Vec<Option<OmegaVerdict>>,
    well_ordered: Vec<Option<WellOrderReport>>,
}

impl<'g> OmegaDecider<'g> {
    pub fn new(g: &'g Grammar) -> Self {
        let n = g.nonterminal_count();
        OmegaDecider {
            g,
            rel: classify_symbols(g),
            verdicts: vec![None; n],
            well_ordered: vec![None; n],
        }
    }

    pub fn grammar(&self) -> &Grammar {
        self.g
    }

    fn k(&self) -> usize {
        self.g.alphabet().len()
    }

    fn glyphs(&self, w: &[Terminal]) -> String {
        self.g.render_word(w)
    }

    fn omega(&self, x: &RegularOmegaWord) -> String {
        x.render(self.g.alphabet())
    }

    fn wo_report(&mut self, x: NonTerminal) -> Result<&WellOrderReport> {
        if self.well_ordered[x.index()].is_none() {
            let sub = remove_useless(&self.g.with_start(x))?;
            self.well_ordered[x.index()] = Some(is_wellordered(&sub)?);
        }
        Ok(self.well_ordered[x.index()].as_ref().unwrap())
    }

    /// `u_x^ω` for a recursive nonterminal of a well-ordered language.
    fn period_sup(&self, x: NonTerminal) -> Result<RegularOmegaWord> {
        compute_ux(self.g, x)?
            .map(|u| RegularOmegaWord::periodic(&u))
            .ok_or_else(|| Error::MissingVerdict(self.g.name(x).to_string()))
    }

    /// Verdict for one nonterminal, following the decision chain in order.
    pub fn nonterminal_omega(&mut self, x: NonTerminal) -> Result<OmegaVerdict> {
        if let Some(v) = &self.verdicts[x.index()] {
            return Ok(v.clone());
        }
        let v = self.decide_nonterminal(x)?;
        self.verdicts[x.index()] = Some(v.clone());
        Ok(v)
    }

    fn decide_nonterminal(&mut self, x: NonTerminal) -> Result<OmegaVerdict> {
        let g = self.g;
        let name = g.name(x).to_string();
        if is_finite_language(g, x) {
            return Ok(OmegaVerdict::new(OmegaValue::Finite, format!("L({name}) is finite")));
        }
        if !self.wo_report(x)?.well_ordered() {
            return Ok(OmegaVerdict::new(
                OmegaValue::NotWellOrdered,
                format!("L({name}) is not well-ordered"),
            ));
        }
        if !self.rel.is_recursive(x) {
            let alternatives: Vec<Vec<Symbol>> =
                g.productions_of(x).map(|p| p.rhs.clone()).collect();
            return self.alternatives_omega(&name, &alternatives);
        }
        if is_prefix_chain(g, &[Symbol::N(x)])? {
            return Ok(OmegaVerdict::new(
                OmegaValue::IsOmega,
                format!("L({name}) is a prefix chain"),
            ));
        }
        let class = self.rel.class_of(x);
        for p in g.productions() {
            if self.rel.class_of(p.lhs) != class {
                continue;
            }
            for (i, s) in p.rhs.iter().enumerate() {
                let inside = matches!(s, Symbol::N(y) if self.rel.class_of(*y) == class);
                if inside && p.rhs[i + 1..].iter().any(|t| t.nonterminal().is_some()) {
                    return Ok(OmegaVerdict::new(
                        OmegaValue::InfiniteNotOmega,
                        format!(
                            "production {} -> {} repeats an infinite tail",
                            g.name(p.lhs),
                            g.render_form(&p.rhs)
                        ),
                    ));
                }
            }
        }
        let below: Vec<NonTerminal> = g
            .nonterminals()
            .filter(|&y| self.rel.strictly_below(y, x))
            .collect();
        for y in below {
            let v = self.nonterminal_omega(y)?;
            if !v.is_omega() {
                return Ok(OmegaVerdict::new(
                    OmegaValue::InfiniteNotOmega,
                    format!("L({}) below L({name}) is {}", g.name(y), v.value),
                ));
            }
        }
        for &pi in self.rel.escaping_productions(class).to_vec().iter() {
            let p = &g.productions()[pi];
            if p.rhs.iter().all(|s| s.terminal().is_some()) {
                continue;
            }
            let form = g.render_form(&p.rhs);
            let v = self.sentential_omega(&p.rhs)?;
            if !v.is_omega() {
                return Ok(OmegaVerdict::new(
                    OmegaValue::InfiniteNotOmega,
                    format!("exit {} -> {form} is {}", g.name(p.lhs), v.value),
                ));
            }
            let sup = sup_omega_language(g, &p.rhs)?;
            let period = self.period_sup(p.lhs)?;
            if sup != period {
                return Ok(OmegaVerdict::new(
                    OmegaValue::InfiniteNotOmega,
                    format!(
                        "exit {} -> {form} converges to {}, not {}",
                        g.name(p.lhs),
                        self.omega(&sup),
                        self.omega(&period)
                    ),
                ));
            }
        }
        Ok(OmegaVerdict::new(
            OmegaValue::IsOmega,
            format!("every exit of the class of {name} converges to its period"),
        ))
    }

    /// Right fold over a sentential form.
    pub fn sentential_omega(&mut self, alpha: &[Symbol]) -> Result<OmegaVerdict> {
        if terminal_word(alpha).is_some() {
            return Ok(OmegaVerdict::new(OmegaValue::Finite, "terminal word"));
        }
        match alpha[0] {
            Symbol::T(_) => self.sentential_omega(&alpha[1..]),
            Symbol::N(x) if alpha.len() == 1 => self.nonterminal_omega(x),
            Symbol::N(x) => self.pair_omega(x, &alpha[1..]),
        }
    }

    /// Verdict for `x · rest` where `x` is a nonterminal.
    pub fn pair_omega(&mut self, x: NonTerminal, rest: &[Symbol]) -> Result<OmegaVerdict> {
        let g = self.g;
        let k = self.k();
        let head = self.nonterminal_omega(x)?;
        if head.value == OmegaValue::Finite {
            // Only reachable on non-normalized input: fall back on the rest.
            return self.sentential_omega(rest);
        }
        if !head.is_omega() {
            return Ok(OmegaVerdict::new(
                head.value,
                format!("L({}) is {}", g.name(x), head.value),
            ));
        }
        let l1 = remove_useless(&g.with_start(x))?;
        let sup1 = sup_omega_language(g, &[Symbol::N(x)])?;
        let muv = build_muv(&sup1, k);
        let reaches = |q: usize| !cfl_empty(&intersect_cfg_regular(&l1, &muv.with_accepting(|r| r == q)));

        if let Some(f) = terminal_word(rest) {
            for q in muv.states_of_class(StateClass::Prefix) {
                let r = muv.residual(q).unwrap();
                if r.compare_finite(&f) == FiniteCmp::GreaterStrict && reaches(q) {
                    return Ok(OmegaVerdict::new(
                        OmegaValue::InfiniteNotOmega,
                        format!(
                            "words of {} approach {} and then drop below it with {}",
                            g.name(x),
                            self.omega(&sup1),
                            self.glyphs(&f)
                        ),
                    ));
                }
            }
            return Ok(OmegaVerdict::new(
                OmegaValue::IsOmega,
                format!("{} followed by {} stays ascending", g.name(x), self.glyphs(&f)),
            ));
        }

        let tail = self.sentential_omega(rest)?;
        if !tail.is_omega() {
            return Ok(OmegaVerdict::new(
                tail.value,
                format!("suffix {} is {}", g.render_form(rest), tail.value),
            ));
        }
        if !is_prefix_chain(g, &[Symbol::N(x)])? {
            return Ok(OmegaVerdict::new(
                OmegaValue::InfiniteNotOmega,
                format!("L({}) is infinite but not a prefix chain", g.name(x)),
            ));
        }
        let mut alpha = vec![Symbol::N(x)];
        alpha.extend_from_slice(rest);
        let whole = words_of(g, &alpha);
        let above = intersect_cfg_regular(&whole, &regular_cut(&sup1, OmegaCut::Greater, k));
        if !cfl_empty(&above) {
            return Ok(OmegaVerdict::new(
                OmegaValue::InfiniteNotOmega,
                format!("some word of {} lies above {}", g.render_form(&alpha), self.omega(&sup1)),
            ));
        }
        let sup2 = sup_omega_language(g, rest)?;
        for q in muv.states_of_class(StateClass::Prefix) {
            let r = muv.residual(q).unwrap();
            if sup2 < *r && reaches(q) {
                return Ok(OmegaVerdict::new(
                    OmegaValue::InfiniteNotOmega,
                    format!(
                        "a word of {} followed by {} falls below {}",
                        g.name(x),
                        self.omega(&sup2),
                        self.omega(&sup1)
                    ),
                ));
            }
        }
        if chain_escape_exists(&l1, &sup1, &sup2) {
            return Ok(OmegaVerdict::new(
                OmegaValue::InfiniteNotOmega,
                format!(
                    "a word of {} extended towards {} escapes below {}",
                    g.name(x),
                    self.omega(&sup2),
                    self.omega(&sup1)
                ),
            ));
        }
        Ok(OmegaVerdict::new(
            OmegaValue::IsOmega,
            format!("{} is omega", g.render_form(&alpha)),
        ))
    }

    /// Verdict for a union of alternatives: every infinite alternative must
    /// be of type ω with one common supremum, and finite alternatives must
    /// stay below it.
    fn alternatives_omega(&mut self, name: &str, alternatives: &[Vec<Symbol>]) -> Result<OmegaVerdict> {
        let g = self.g;
        let mut sup: Option<RegularOmegaWord> = None;
        let mut finite: Vec<Word> = Vec::new();
        for alt in alternatives {
            if let Some(w) = terminal_word(alt) {
                finite.push(w);
                continue;
            }
            let v = self.sentential_omega(alt)?;
            match v.value {
                OmegaValue::IsOmega => {}
                OmegaValue::Finite => continue,
                other => {
                    return Ok(OmegaVerdict::new(
                        other,
                        format!("alternative {} of {name} is {other}", g.render_form(alt)),
                    ))
                }
            }
            let s = sup_omega_language(g, alt)?;
            match &sup {
                None => sup = Some(s),
                Some(prev) if *prev == s => {}
                Some(prev) => {
                    return Ok(OmegaVerdict::new(
                        OmegaValue::InfiniteNotOmega,
                        format!(
                            "alternatives of {name} converge to {} and {}",
                            self.omega(prev),
                            self.omega(&s)
                        ),
                    ))
                }
            }
        }
        let Some(sup) = sup else {
            return Ok(OmegaVerdict::new(OmegaValue::Finite, format!("L({name}) is finite")));
        };
        if let Some(w) = finite.iter().find(|w| sup.compare_finite(w) == FiniteCmp::GreaterStrict) {
            return Ok(OmegaVerdict::new(
                OmegaValue::InfiniteNotOmega,
                format!("{} lies above the supremum {}", self.glyphs(w), self.omega(&sup)),
            ));
        }
        Ok(OmegaVerdict::new(
            OmegaValue::IsOmega,
            format!("all alternatives of {name} converge to {}", self.omega(&sup)),
        ))
    }
}

/// Whether the language of a normalized grammar has order type ω.
pub fn grammar_omega(g: &Grammar) -> Result<OmegaVerdict> {
    let mut d = OmegaDecider::new(g);
    d.nonterminal_omega(g.start())
}

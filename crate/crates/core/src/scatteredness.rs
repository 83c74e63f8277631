//! Scatteredness and well-orderedness of normalized grammars.
//!
//! Every recursive nonterminal `X` of a scattered language has a primitive
//! word `u_X` such that all left contexts `u` of `X ⇒+ u X α` are powers of
//! `u_X`, and left contexts leading to an equivalent `X'` are `u_X^* r` for a
//! fixed residue `r` that is a prefix of `u_X`.

use crate::automata::{
    build_muv, cfl_empty, cfl_subset_regular, intersect_cfg_regular, power_dfa, regular_cut,
    OmegaCut, StateClass,
};
use crate::error::{Error, Result};
use crate::grammar::{
    classify_symbols, is_finite_language, shortest_yields, Grammar, NonTerminal, Production,
    Symbol, SymbolRelation, Word,
};
use crate::omega_word::{primitive_root, RegularOmegaWord};

/// The period word of one recursive nonterminal and its residues towards
/// the other members of its class.
#[derive(Debug, Clone)]
pub struct MemberSignature {
    pub x: NonTerminal,
    pub u: Word,
    pub residues: Vec<(NonTerminal, Word)>,
}

#[derive(Debug, Clone)]
pub struct ClassSignature {
    pub class: usize,
    pub members: Vec<MemberSignature>,
}

/// Why a grammar failed a structural test.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Obstruction {
    /// Left contexts of `x` back to itself are not powers of one word.
    CycleWords { x: NonTerminal },
    /// Left contexts from `x` to `to` do not share a residue.
    Residue { x: NonTerminal, to: NonTerminal },
    /// `x` derives a word above `u_x^ω`.
    AboveSupremum { x: NonTerminal, word: Word },
    /// Words of `x` approach `u_x^ω` and are followed, in some context, by a
    /// word that sends the whole word back down.
    DescendingContext { x: NonTerminal, follower: Word },
}

#[derive(Debug, Clone)]
pub struct ScatterReport {
    pub signatures: Vec<ClassSignature>,
    pub obstruction: Option<Obstruction>,
}

impl ScatterReport {
    pub fn scattered(&self) -> bool {
        self.obstruction.is_none()
    }

    pub fn member(&self, x: NonTerminal) -> Option<&MemberSignature> {
        self.signatures
            .iter()
            .flat_map(|c| c.members.iter())
            .find(|m| m.x == x)
    }

    pub fn u_of(&self, x: NonTerminal) -> Option<&Word> {
        self.member(x).map(|m| &m.u)
    }
}

#[derive(Debug, Clone)]
pub struct WellOrderReport {
    pub scatter: ScatterReport,
    /// `None` when well-ordered.
    pub obstruction: Option<Obstruction>,
}

impl WellOrderReport {
    pub fn scattered(&self) -> bool {
        self.scatter.scattered()
    }

    pub fn well_ordered(&self) -> bool {
        self.scattered() && self.obstruction.is_none()
    }
}

/// Grammar for `{u : x ⇒+ u x2 α}`. Context symbols keep their own
/// productions, so they generate their full languages.
pub fn left_context_grammar(g: &Grammar, x: NonTerminal, x2: NonTerminal) -> Result<Grammar> {
    let rel = classify_symbols(g);
    left_context_with(g, &rel, x, x2)
}

fn left_context_with(
    g: &Grammar,
    rel: &SymbolRelation,
    x: NonTerminal,
    x2: NonTerminal,
) -> Result<Grammar> {
    if !rel.equivalent(x, x2) || !rel.is_recursive(x) {
        return Err(Error::NotInClass(g.name(x).into(), g.name(x2).into()));
    }
    let class = rel.class_members(rel.class_of(x)).to_vec();
    let base = g.nonterminal_count();
    let mut names = g.names().to_vec();
    let bracket = |y: NonTerminal| {
        NonTerminal((base + class.iter().position(|&c| c == y).unwrap()) as u32)
    };
    for &y in &class {
        names.push(format!("<{}>", g.name(y)));
    }
    let mut productions = g.productions().to_vec();
    for &y in &class {
        for p in g.productions_of(y) {
            for (i, s) in p.rhs.iter().enumerate() {
                let Symbol::N(z) = *s else { continue };
                if !rel.equivalent(z, x) {
                    continue;
                }
                let mut rhs = p.rhs[..i].to_vec();
                if z == x2 {
                    productions.push(Production {
                        lhs: bracket(y),
                        rhs: rhs.clone(),
                    });
                }
                rhs.push(Symbol::N(bracket(z)));
                productions.push(Production { lhs: bracket(y), rhs });
            }
        }
    }
    Ok(Grammar::new(g.alphabet().clone(), names, productions, bracket(x)))
}

/// Grammar for `{y : start ⇒* l x y}`.
pub fn right_context_grammar(g: &Grammar, x: NonTerminal) -> Grammar {
    let rel = classify_symbols(g);
    let base = g.nonterminal_count();
    let mut names = g.names().to_vec();
    let above: Vec<NonTerminal> = g.nonterminals().filter(|&b| rel.below_or_equal(x, b)).collect();
    let bracket = |b: NonTerminal| {
        NonTerminal((base + above.iter().position(|&c| c == b).unwrap()) as u32)
    };
    for &b in &above {
        names.push(format!("<{}>", g.name(b)));
    }
    let mut productions = g.productions().to_vec();
    productions.push(Production {
        lhs: bracket(x),
        rhs: Vec::new(),
    });
    for &b in &above {
        for p in g.productions_of(b) {
            for (i, s) in p.rhs.iter().enumerate() {
                let Symbol::N(z) = *s else { continue };
                if !rel.below_or_equal(x, z) {
                    continue;
                }
                let mut rhs = vec![Symbol::N(bracket(z))];
                rhs.extend_from_slice(&p.rhs[i + 1..]);
                productions.push(Production { lhs: bracket(b), rhs });
            }
        }
    }
    let start = if rel.below_or_equal(x, g.start()) {
        bracket(g.start())
    } else {
        // x is unreachable: no contexts at all.
        names.push("<none>".into());
        NonTerminal(names.len() as u32 - 1)
    };
    Grammar::new(g.alphabet().clone(), names, productions, start)
}

fn shortest_word(g: &Grammar) -> Option<Word> {
    shortest_yields(g).of(g.start()).cloned()
}

/// The period word of `x`, or `None` when its cycle words are not all powers
/// of one primitive word.
pub fn compute_ux(g: &Grammar, x: NonTerminal) -> Result<Option<Word>> {
    let rel = classify_symbols(g);
    compute_ux_with(g, &rel, x)
}

fn compute_ux_with(g: &Grammar, rel: &SymbolRelation, x: NonTerminal) -> Result<Option<Word>> {
    let lc = left_context_with(g, rel, x, x)?;
    let shortest = shortest_word(&lc).ok_or_else(|| {
        Error::Inconsistent(format!("recursive `{}` has no cycle word", g.name(x)))
    })?;
    if shortest.is_empty() {
        return Err(Error::Inconsistent(format!("`{}` is left-recursive", g.name(x))));
    }
    let u = primitive_root(&shortest).to_vec();
    let k = g.alphabet().len();
    Ok(cfl_subset_regular(&lc, &power_dfa(&u, 1, &[], k)).then_some(u))
}

/// Strips whole copies of `u` off the front of `w`; the rest must be a
/// prefix of `u` (possibly empty).
fn residue_of(w: &[crate::grammar::Terminal], u: &[crate::grammar::Terminal]) -> Option<Word> {
    let mut rest = w;
    while rest.len() >= u.len() && rest.starts_with(u) {
        rest = &rest[u.len()..];
    }
    (rest.len() < u.len() && u.starts_with(rest)).then(|| rest.to_vec())
}

pub fn compute_ux_residue(
    g: &Grammar,
    x: NonTerminal,
    x2: NonTerminal,
    u: &[crate::grammar::Terminal],
) -> Result<Option<Word>> {
    let rel = classify_symbols(g);
    residue_with(g, &rel, x, x2, u)
}

fn residue_with(
    g: &Grammar,
    rel: &SymbolRelation,
    x: NonTerminal,
    x2: NonTerminal,
    u: &[crate::grammar::Terminal],
) -> Result<Option<Word>> {
    let lc = left_context_with(g, rel, x, x2)?;
    let shortest = shortest_word(&lc).ok_or_else(|| {
        Error::Inconsistent(format!("no left context from `{}` to `{}`", g.name(x), g.name(x2)))
    })?;
    let Some(r) = residue_of(&shortest, u) else {
        return Ok(None);
    };
    let k = g.alphabet().len();
    Ok(cfl_subset_regular(&lc, &power_dfa(u, 0, &r, k)).then_some(r))
}

pub fn is_scattered(g: &Grammar) -> Result<ScatterReport> {
    let rel = classify_symbols(g);
    let mut signatures = Vec::new();
    for class in 0..rel.class_count() {
        let members = rel.class_members(class);
        if !rel.is_recursive(members[0]) {
            continue;
        }
        let mut sigs = Vec::new();
        for &x in members {
            let Some(u) = compute_ux_with(g, &rel, x)? else {
                return Ok(ScatterReport {
                    signatures,
                    obstruction: Some(Obstruction::CycleWords { x }),
                });
            };
            let mut residues = Vec::new();
            for &x2 in members {
                match residue_with(g, &rel, x, x2, &u)? {
                    Some(r) => residues.push((x2, r)),
                    None => {
                        return Ok(ScatterReport {
                            signatures,
                            obstruction: Some(Obstruction::Residue { x, to: x2 }),
                        })
                    }
                }
            }
            sigs.push(MemberSignature { x, u, residues });
        }
        signatures.push(ClassSignature {
            class,
            members: sigs,
        });
    }
    Ok(ScatterReport {
        signatures,
        obstruction: None,
    })
}

/// Well-orderedness of a scattered normalized grammar. Besides requiring
/// every `L(X) <_ℓ u_X^ω`, words of `X` converging to `u_X^ω` must not be
/// followed by a context word that jumps above the remaining period: that
/// would turn the ascending words of `X` into a descending chain.
pub fn is_wellordered(g: &Grammar) -> Result<WellOrderReport> {
    let scatter = is_scattered(g)?;
    if !scatter.scattered() {
        return Ok(WellOrderReport {
            scatter,
            obstruction: None,
        });
    }
    let k = g.alphabet().len();
    let mut obstruction = None;
    'members: for m in scatter.signatures.iter().flat_map(|c| c.members.iter()) {
        let lx = g.with_start(m.x);
        let sup = RegularOmegaWord::periodic(&m.u);
        let above = intersect_cfg_regular(&lx, &regular_cut(&sup, OmegaCut::Greater, k));
        if let Some(word) = shortest_word(&above) {
            obstruction = Some(Obstruction::AboveSupremum { x: m.x, word });
            break;
        }
        let muv = build_muv(&sup, k);
        let right = right_context_grammar(g, m.x);
        for q in muv.states_of_class(StateClass::Prefix) {
            let at_q = intersect_cfg_regular(&lx, &muv.with_accepting(|r| r == q));
            if cfl_empty(&at_q) || is_finite_language(&at_q, at_q.start()) {
                continue;
            }
            let residual = muv.residual(q).unwrap();
            let jumps = intersect_cfg_regular(&right, &regular_cut(residual, OmegaCut::Greater, k));
            if let Some(follower) = shortest_word(&jumps) {
                obstruction = Some(Obstruction::DescendingContext { x: m.x, follower });
                break 'members;
            }
        }
    }
    Ok(WellOrderReport {
        scatter,
        obstruction,
    })
}

/// `⋁L(x) = u_x^ω` for a recursive nonterminal of a well-ordered language.
pub fn sup_recursive(report: &WellOrderReport, x: NonTerminal) -> Result<RegularOmegaWord> {
    if !report.well_ordered() {
        return Err(Error::NotWellOrdered);
    }
    let u = report
        .scatter
        .u_of(x)
        .ok_or_else(|| Error::Inconsistent("supremum requested for a non-recursive symbol".into()))?;
    Ok(RegularOmegaWord::periodic(u))
}

//! The normalization pipeline: remove the empty word, useless symbols, left
//! recursion and non-recursive nonterminals, in that order.

use std::collections::HashSet;

use super::{classify_symbols, fresh_name, Grammar, NonTerminal, Production, Symbol};
use crate::error::{Error, Result};

pub const DEFAULT_MAX_PRODUCTIONS: usize = 50_000;

#[derive(Debug, Clone, Copy)]
pub struct NormalizeConfig {
    pub max_productions: usize,
}

impl Default for NormalizeConfig {
    /// Reads `LEXORD_MAX_PRODUCTIONS` if set.
    fn default() -> Self {
        let max_productions = std::env::var("LEXORD_MAX_PRODUCTIONS")
            .ok()
            .and_then(|v| v.parse().ok())
            .filter(|&n: &usize| n > 0)
            .unwrap_or(DEFAULT_MAX_PRODUCTIONS);
        NormalizeConfig { max_productions }
    }
}

/// Productions grouped by left-hand side, the working form of every pass.
struct Rules {
    names: Vec<String>,
    rhs: Vec<Vec<Vec<Symbol>>>,
}

impl Rules {
    fn from_grammar(g: &Grammar) -> Self {
        let mut rhs = vec![Vec::new(); g.nonterminal_count()];
        for p in g.productions() {
            rhs[p.lhs.index()].push(p.rhs.clone());
        }
        Rules {
            names: g.names().to_vec(),
            rhs,
        }
    }

    fn into_grammar(self, g: &Grammar) -> Grammar {
        let mut productions = Vec::new();
        for (i, alts) in self.rhs.into_iter().enumerate() {
            for rhs in alts {
                productions.push(Production {
                    lhs: NonTerminal(i as u32),
                    rhs,
                });
            }
        }
        Grammar::new(g.alphabet().clone(), self.names, productions, g.start())
            .with_epsilon_flag(g.epsilon_in_language())
    }

    fn count(&self) -> usize {
        self.rhs.iter().map(Vec::len).sum()
    }

    fn check_cap(&self, limit: usize) -> Result<()> {
        if self.count() > limit {
            Err(Error::ProductionCap { limit })
        } else {
            Ok(())
        }
    }
}

fn dedupe(alts: &mut Vec<Vec<Symbol>>) {
    let mut seen = HashSet::new();
    alts.retain(|a| seen.insert(a.clone()));
}

fn nullable_set(g: &Grammar) -> Vec<bool> {
    let mut nullable = vec![false; g.nonterminal_count()];
    let mut changed = true;
    while changed {
        changed = false;
        for p in g.productions() {
            if !nullable[p.lhs.index()]
                && p.rhs.iter().all(|s| matches!(s, Symbol::N(n) if nullable[n.index()]))
            {
                nullable[p.lhs.index()] = true;
                changed = true;
            }
        }
    }
    nullable
}

fn productive_set(g: &Grammar) -> Vec<bool> {
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
    productive
}

/// Removes the empty word from the language and records whether it was there.
pub fn eliminate_epsilon(g: &Grammar) -> Result<Grammar> {
    eliminate_epsilon_capped(g, NormalizeConfig::default().max_productions)
}

fn eliminate_epsilon_capped(g: &Grammar, limit: usize) -> Result<Grammar> {
    let nullable = nullable_set(g);
    let flag = g.epsilon_in_language() || nullable[g.start().index()];
    let mut productions = Vec::new();
    for p in g.productions() {
        let mut variants: Vec<Vec<Symbol>> = vec![Vec::new()];
        for &s in &p.rhs {
            let keep_optional = matches!(s, Symbol::N(n) if nullable[n.index()]);
            let mut next = Vec::with_capacity(variants.len() * 2);
            for v in &variants {
                let mut with = v.clone();
                with.push(s);
                next.push(with);
                if keep_optional {
                    next.push(v.clone());
                }
            }
            variants = next;
            if variants.len() > limit {
                return Err(Error::ProductionCap { limit });
            }
        }
        for v in variants {
            if v.is_empty() || v == [Symbol::N(p.lhs)] {
                continue;
            }
            productions.push(Production { lhs: p.lhs, rhs: v });
        }
        if productions.len() > limit {
            return Err(Error::ProductionCap { limit });
        }
    }
    let out = Grammar::new(g.alphabet().clone(), g.names().to_vec(), productions, g.start())
        .with_epsilon_flag(flag);
    if !productive_set(&out)[out.start().index()] {
        return Err(Error::EmptyLanguage { epsilon: flag });
    }
    Ok(out)
}

/// Drops unproductive and unreachable nonterminals.
pub fn remove_useless(g: &Grammar) -> Result<Grammar> {
    let productive = productive_set(g);
    if !productive[g.start().index()] {
        return Err(Error::EmptyLanguage {
            epsilon: g.epsilon_in_language(),
        });
    }
    let mut reachable = vec![false; g.nonterminal_count()];
    reachable[g.start().index()] = true;
    let mut stack = vec![g.start()];
    while let Some(x) = stack.pop() {
        for p in g.productions_of(x) {
            let all_productive = p.rhs.iter().all(|s| match s {
                Symbol::N(n) => productive[n.index()],
                Symbol::T(_) => true,
            });
            if !all_productive {
                continue;
            }
            for s in &p.rhs {
                if let Symbol::N(n) = *s {
                    if !reachable[n.index()] {
                        reachable[n.index()] = true;
                        stack.push(n);
                    }
                }
            }
        }
    }
    let keep: Vec<bool> = (0..g.nonterminal_count())
        .map(|i| productive[i] && reachable[i])
        .collect();
    Ok(g.restrict(&keep))
}

/// Strongly connected components of the graph `X -> first symbol of a rhs`,
/// returned only when they contain a cycle.
fn leftmost_cycles(rules: &Rules) -> Vec<Vec<usize>> {
    let n = rules.rhs.len();
    let mut reach = vec![vec![false; n]; n];
    for x in 0..n {
        let mut stack = vec![x];
        while let Some(v) = stack.pop() {
            for alt in &rules.rhs[v] {
                if let Some(Symbol::N(y)) = alt.first() {
                    if !reach[x][y.index()] {
                        reach[x][y.index()] = true;
                        stack.push(y.index());
                    }
                }
            }
        }
    }
    let mut done = vec![false; n];
    let mut out = Vec::new();
    for x in 0..n {
        if done[x] || !reach[x][x] {
            continue;
        }
        let scc: Vec<usize> = (0..n).filter(|&y| reach[x][y] && reach[y][x]).collect();
        for &y in &scc {
            done[y] = true;
        }
        out.push(scc);
    }
    out
}

/// Removes left recursion by ordering and substitution inside each cycle of
/// the leftmost-symbol graph, followed by immediate left-recursion removal.
pub fn eliminate_left_recursion(g: &Grammar) -> Result<Grammar> {
    eliminate_left_recursion_capped(g, NormalizeConfig::default().max_productions)
}

fn eliminate_left_recursion_capped(g: &Grammar, limit: usize) -> Result<Grammar> {
    let mut rules = Rules::from_grammar(g);
    for scc in leftmost_cycles(&rules) {
        for (i, &ai) in scc.iter().enumerate() {
            for &aj in &scc[..i] {
                let mut replaced = Vec::new();
                for alt in std::mem::take(&mut rules.rhs[ai]) {
                    if alt.first() == Some(&Symbol::N(NonTerminal(aj as u32))) {
                        for delta in &rules.rhs[aj] {
                            let mut new = delta.clone();
                            new.extend_from_slice(&alt[1..]);
                            replaced.push(new);
                        }
                    } else {
                        replaced.push(alt);
                    }
                }
                dedupe(&mut replaced);
                rules.rhs[ai] = replaced;
                rules.check_cap(limit)?;
            }
            remove_immediate(&mut rules, ai);
            rules.check_cap(limit)?;
        }
    }
    Ok(rules.into_grammar(g))
}

fn remove_immediate(rules: &mut Rules, a: usize) {
    let me = Symbol::N(NonTerminal(a as u32));
    let (recursive, base): (Vec<_>, Vec<_>) = std::mem::take(&mut rules.rhs[a])
        .into_iter()
        .partition(|alt| alt.first() == Some(&me));
    let tails: Vec<Vec<Symbol>> = recursive
        .into_iter()
        .map(|alt| alt[1..].to_vec())
        .filter(|t| !t.is_empty())
        .collect();
    if tails.is_empty() {
        rules.rhs[a] = base;
        return;
    }
    if base.is_empty() {
        // No way out of the recursion: the symbol derives nothing.
        return;
    }
    let primed = NonTerminal(rules.names.len() as u32);
    let name = fresh_name(&rules.names, &format!("{}'", rules.names[a]));
    rules.names.push(name);
    let mut new_a = Vec::with_capacity(base.len() * 2);
    for b in base {
        let mut with = b.clone();
        with.push(Symbol::N(primed));
        new_a.push(b);
        new_a.push(with);
    }
    let mut new_primed = Vec::with_capacity(tails.len() * 2);
    for t in tails {
        let mut with = t.clone();
        with.push(Symbol::N(primed));
        new_primed.push(t);
        new_primed.push(with);
    }
    dedupe(&mut new_a);
    dedupe(&mut new_primed);
    rules.rhs[a] = new_a;
    rules.rhs.push(new_primed);
}

/// Substitutes every non-recursive nonterminal other than the start symbol
/// into the productions that use it.
pub fn inline_nonrecursive(g: &Grammar) -> Result<Grammar> {
    inline_nonrecursive_capped(g, NormalizeConfig::default().max_productions)
}

fn inline_nonrecursive_capped(g: &Grammar, limit: usize) -> Result<Grammar> {
    let relation = classify_symbols(g);
    let mut rules = Rules::from_grammar(g);
    for &y in relation.bottom_up() {
        if y == g.start() || relation.is_recursive(y) {
            continue;
        }
        let target = Symbol::N(y);
        let alternatives = rules.rhs[y.index()].clone();
        for x in 0..rules.rhs.len() {
            if x == y.index() || !rules.rhs[x].iter().any(|alt| alt.contains(&target)) {
                continue;
            }
            let mut expanded = Vec::new();
            for alt in std::mem::take(&mut rules.rhs[x]) {
                let mut partial: Vec<Vec<Symbol>> = vec![Vec::new()];
                for s in alt {
                    if s == target {
                        let mut next = Vec::with_capacity(partial.len() * alternatives.len());
                        for p in &partial {
                            for a in &alternatives {
                                let mut q = p.clone();
                                q.extend_from_slice(a);
                                next.push(q);
                            }
                        }
                        partial = next;
                        if partial.len() > limit {
                            return Err(Error::ProductionCap { limit });
                        }
                    } else {
                        for p in &mut partial {
                            p.push(s);
                        }
                    }
                }
                expanded.extend(partial);
            }
            dedupe(&mut expanded);
            rules.rhs[x] = expanded;
            rules.check_cap(limit)?;
        }
    }
    Ok(rules.into_grammar(g))
}

pub fn normalize(g: &Grammar) -> Result<Grammar> {
    normalize_with(g, &NormalizeConfig::default())
}

pub fn normalize_with(g: &Grammar, config: &NormalizeConfig) -> Result<Grammar> {
    let limit = config.max_productions;
    let g = eliminate_epsilon_capped(g, limit)?;
    let g = remove_useless(&g)?;
    let g = eliminate_left_recursion_capped(&g, limit)?;
    let g = remove_useless(&g)?;
    let g = inline_nonrecursive_capped(&g, limit)?;
    remove_useless(&g)
}

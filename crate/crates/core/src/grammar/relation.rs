use super::{Grammar, NonTerminal, Symbol};

/// The derivability preorder on nonterminals: `Y ⪯ X` when `X` derives a
/// sentential form containing `Y`. Equivalence classes are the strongly
/// connected components of the "occurs in a right-hand side of" graph.
#[derive(Debug, Clone)]
pub struct SymbolRelation {
    /// `reach[x][y]` is true when `y ⪯ x` (reflexive).
    reach: Vec<Vec<bool>>,
    class_of: Vec<usize>,
    classes: Vec<Vec<NonTerminal>>,
    recursive: Vec<bool>,
    /// Per class, indices of productions whose lhs is in the class and whose
    /// rhs mentions no member of the class.
    escaping: Vec<Vec<usize>>,
    /// Nonterminals listed so that `Y ≺ X` implies `Y` comes first.
    bottom_up: Vec<NonTerminal>,
}

impl SymbolRelation {
    pub fn below_or_equal(&self, y: NonTerminal, x: NonTerminal) -> bool {
        self.reach[x.index()][y.index()]
    }

    pub fn strictly_below(&self, y: NonTerminal, x: NonTerminal) -> bool {
        self.below_or_equal(y, x) && !self.below_or_equal(x, y)
    }

    pub fn equivalent(&self, x: NonTerminal, y: NonTerminal) -> bool {
        self.class_of[x.index()] == self.class_of[y.index()]
    }

    pub fn is_recursive(&self, x: NonTerminal) -> bool {
        self.recursive[x.index()]
    }

    pub fn class_of(&self, x: NonTerminal) -> usize {
        self.class_of[x.index()]
    }

    pub fn class_members(&self, class: usize) -> &[NonTerminal] {
        &self.classes[class]
    }

    pub fn class_count(&self) -> usize {
        self.classes.len()
    }

    pub fn escaping_productions(&self, class: usize) -> &[usize] {
        &self.escaping[class]
    }

    pub fn bottom_up(&self) -> &[NonTerminal] {
        &self.bottom_up
    }
}

pub fn classify_symbols(g: &Grammar) -> SymbolRelation {
    let n = g.nonterminal_count();
    let mut succ = vec![Vec::new(); n];
    for p in g.productions() {
        for s in &p.rhs {
            if let Symbol::N(y) = s {
                succ[p.lhs.index()].push(y.index());
            }
        }
    }
    let mut reach = vec![vec![false; n]; n];
    for x in 0..n {
        let mut stack = vec![x];
        reach[x][x] = true;
        while let Some(v) = stack.pop() {
            for &w in &succ[v] {
                if !reach[x][w] {
                    reach[x][w] = true;
                    stack.push(w);
                }
            }
        }
    }
    let recursive: Vec<bool> = (0..n)
        .map(|x| succ[x].iter().any(|&y| reach[y][x]))
        .collect();

    let mut class_of = vec![usize::MAX; n];
    let mut classes: Vec<Vec<NonTerminal>> = Vec::new();
    for x in 0..n {
        if class_of[x] != usize::MAX {
            continue;
        }
        let id = classes.len();
        let members: Vec<NonTerminal> = (0..n)
            .filter(|&y| reach[x][y] && reach[y][x])
            .map(|y| NonTerminal(y as u32))
            .collect();
        for m in &members {
            class_of[m.index()] = id;
        }
        classes.push(members);
    }

    let mut escaping = vec![Vec::new(); classes.len()];
    for (i, p) in g.productions().iter().enumerate() {
        let c = class_of[p.lhs.index()];
        let stays = p
            .rhs
            .iter()
            .any(|s| matches!(s, Symbol::N(y) if class_of[y.index()] == c));
        if !stays {
            escaping[c].push(i);
        }
    }

    // Fewer reachable symbols means lower in the preorder.
    let mut bottom_up: Vec<NonTerminal> = (0..n).map(|i| NonTerminal(i as u32)).collect();
    bottom_up.sort_by_key(|x| (reach[x.index()].iter().filter(|&&b| b).count(), x.0));

    SymbolRelation {
        reach,
        class_of,
        classes,
        recursive,
        escaping,
        bottom_up,
    }
}

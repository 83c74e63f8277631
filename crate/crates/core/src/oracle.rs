//! Brute-force ground truth for small word lengths: enumeration, predecessor
//! counts, and the known-answer corpus harness.

use std::collections::{BTreeSet, HashSet};
use std::path::{Path, PathBuf};
use std::time::Instant;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::grammar::{parse_grammar, Grammar, Symbol, Word};
use crate::ordertype::{compute_order_type, Budget, OrderType};

/// Hard cap on the number of words held during one enumeration.
pub const MAX_ENUMERATED_WORDS: usize = 1_000_000;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EnumerationReport {
    pub cutoff: usize,
    /// `L ∩ Σ^{≤cutoff}` in lexicographic order.
    pub words: Vec<Word>,
}

/// Exact `L(g) ∩ Σ^{≤n}`, sorted. Works on any grammar.
pub fn enumerate(g: &Grammar, n: usize) -> Result<EnumerationReport> {
    let mut sets: Vec<HashSet<Word>> = vec![HashSet::new(); g.nonterminal_count()];
    let mut total = 0usize;
    loop {
        let mut changed = false;
        for p in g.productions() {
            let mut partial: Vec<Word> = vec![Vec::new()];
            for s in &p.rhs {
                let mut next = Vec::new();
                match s {
                    Symbol::T(t) => {
                        for mut w in partial {
                            if w.len() < n {
                                w.push(*t);
                                next.push(w);
                            }
                        }
                    }
                    Symbol::N(y) => {
                        for w in &partial {
                            for v in &sets[y.index()] {
                                if w.len() + v.len() <= n {
                                    let mut wv = w.clone();
                                    wv.extend_from_slice(v);
                                    next.push(wv);
                                }
                            }
                        }
                    }
                }
                if next.len() > MAX_ENUMERATED_WORDS {
                    return Err(Error::SearchCap(MAX_ENUMERATED_WORDS));
                }
                partial = next;
            }
            for w in partial {
                if sets[p.lhs.index()].insert(w) {
                    changed = true;
                    total += 1;
                    if total > MAX_ENUMERATED_WORDS {
                        return Err(Error::SearchCap(MAX_ENUMERATED_WORDS));
                    }
                }
            }
        }
        if !changed {
            break;
        }
    }
    let mut words: BTreeSet<Word> = sets.swap_remove(g.start().index()).into_iter().collect();
    if g.epsilon_in_language() {
        words.insert(Vec::new());
    }
    Ok(EnumerationReport {
        cutoff: n,
        words: words.into_iter().collect(),
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ProbeRow {
    pub word: String,
    /// Number of smaller words at each cutoff.
    pub counts: Vec<usize>,
    /// Equal counts at the last two cutoffs.
    pub stabilized: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ProbeReport {
    pub cutoffs: Vec<usize>,
    pub rows: Vec<ProbeRow>,
}

impl ProbeReport {
    pub fn row(&self, word: &str) -> Option<&ProbeRow> {
        self.rows.iter().find(|r| r.word == word)
    }

    pub fn all_stabilized(&self) -> bool {
        self.rows.iter().all(|r| r.stabilized)
    }
}

/// Predecessor counts of the words of the smallest cutoff, at every cutoff.
/// A semi-decision aid: growing counts reveal an infinite set below a word.
pub fn predecessor_probe(g: &Grammar, cutoffs: &[usize]) -> Result<ProbeReport> {
    assert!(!cutoffs.is_empty() && cutoffs.windows(2).all(|w| w[0] < w[1]), "cutoffs must ascend");
    let layers = cutoffs
        .iter()
        .map(|&n| enumerate(g, n).map(|r| r.words))
        .collect::<Result<Vec<_>>>()?;
    let rows = layers[0]
        .iter()
        .map(|w| {
            let counts: Vec<usize> = layers.iter().map(|l| l.partition_point(|v| v < w)).collect();
            let stabilized = counts.len() < 2 || counts[counts.len() - 1] == counts[counts.len() - 2];
            ProbeRow {
                word: g.render_word(w),
                counts,
                stabilized,
            }
        })
        .collect();
    Ok(ProbeReport {
        cutoffs: cutoffs.to_vec(),
        rows,
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CorpusEntry {
    pub name: String,
    /// Grammar file, relative to the manifest.
    pub grammar: PathBuf,
    pub expected: OrderType,
    pub provenance: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CorpusManifest {
    pub entries: Vec<CorpusEntry>,
}

impl CorpusManifest {
    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
        serde_json::from_str(&text).map_err(|e| Error::Io(format!("{}: {e}", path.display())))
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct CorpusOutcome {
    pub name: String,
    pub expected: OrderType,
    pub actual: Option<OrderType>,
    pub error: Option<String>,
    pub pass: bool,
    #[serde(skip)]
    pub millis: u128,
}

#[derive(Debug, Clone, Serialize)]
pub struct CorpusReport {
    pub outcomes: Vec<CorpusOutcome>,
}

impl CorpusReport {
    pub fn passed(&self) -> usize {
        self.outcomes.iter().filter(|o| o.pass).count()
    }

    pub fn all_pass(&self) -> bool {
        self.outcomes.iter().all(|o| o.pass)
    }
}

pub fn load_grammar(path: &Path) -> Result<Grammar> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
    parse_grammar(&text)
}

fn run_entry(base: &Path, entry: &CorpusEntry, budget: Budget) -> CorpusOutcome {
    let started = Instant::now();
    let actual = load_grammar(&base.join(&entry.grammar)).and_then(|g| compute_order_type(&g, budget));
    let millis = started.elapsed().as_millis();
    let (actual, error) = match actual {
        Ok(r) => (Some(r.result), None),
        Err(e) => (None, Some(e.to_string())),
    };
    CorpusOutcome {
        name: entry.name.clone(),
        expected: entry.expected.clone(),
        pass: actual.as_ref() == Some(&entry.expected),
        actual,
        error,
        millis,
    }
}

/// Runs every manifest entry, on up to `jobs` threads. Outcomes keep the
/// manifest order.
pub fn run_corpus(manifest_path: &Path, budget: Budget, jobs: usize) -> Result<CorpusReport> {
    let manifest = CorpusManifest::load(manifest_path)?;
    let base = manifest_path.parent().unwrap_or(Path::new("."));
    let jobs = jobs.max(1);
    let mut outcomes: Vec<Option<CorpusOutcome>> = vec![None; manifest.entries.len()];
    let next = std::sync::atomic::AtomicUsize::new(0);
    let results = std::sync::Mutex::new(&mut outcomes);
    std::thread::scope(|s| {
        for _ in 0..jobs {
            s.spawn(|| loop {
                let i = next.fetch_add(1, std::sync::atomic::Ordering::Relaxed);
                let Some(entry) = manifest.entries.get(i) else { break };
                let outcome = run_entry(base, entry, budget);
                results.lock().unwrap()[i] = Some(outcome);
            });
        }
    });
    Ok(CorpusReport {
        outcomes: outcomes.into_iter().map(|o| o.expect("every entry runs")).collect(),
    })
}

use std::sync::Arc;

use super::{Alphabet, Grammar, NonTerminal, Production, Symbol};
use crate::error::{Error, Location};

struct RawProduction {
    lhs: String,
    lhs_at: Location,
    alternatives: Vec<Vec<(String, Location)>>,
}

fn strip_comment(line: &str) -> &str {
    match line.find('#') {
        Some(i) => &line[..i],
        None => line,
    }
}

/// Splits `text` on whitespace, keeping the 1-based column of each token.
fn tokens(text: &str, line: usize, offset: usize) -> Vec<(String, Location)> {
    let mut out = Vec::new();
    let mut current = String::new();
    let mut start_col = 0;
    for (col, ch) in text.chars().enumerate() {
        if ch.is_whitespace() {
            if !current.is_empty() {
                out.push((
                    std::mem::take(&mut current),
                    Location { line, column: offset + start_col + 1 },
                ));
            }
        } else {
            if current.is_empty() {
                start_col = col;
            }
            current.push(ch);
        }
    }
    if !current.is_empty() {
        out.push((current, Location { line, column: offset + start_col + 1 }));
    }
    out
}

fn is_nonterminal_name(s: &str) -> bool {
    let mut chars = s.chars();
    matches!(chars.next(), Some(c) if c.is_uppercase())
        && chars.all(|c| c.is_alphanumeric() || c == '_' || c == '\'')
}

/// Parses the grammar text format:
///
/// ```text
/// alphabet: a < b < c
/// start: S
/// S -> a S | B | eps
/// B -> b     # comment
/// ```
pub fn parse_grammar(text: &str) -> Result<Grammar, Error> {
    let mut glyphs: Option<Vec<String>> = None;
    let mut start: Option<(String, Location)> = None;
    let mut raw: Vec<RawProduction> = Vec::new();

    for (idx, full_line) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = strip_comment(full_line);
        let trimmed = line.trim_start();
        if trimmed.trim().is_empty() {
            continue;
        }
        let indent = line.len() - trimmed.len();
        let at = |column: usize| Location { line: line_no, column };

        if let Some(rest) = trimmed.strip_prefix("alphabet:") {
            if glyphs.is_some() {
                return Err(Error::Syntax {
                    location: at(indent + 1),
                    message: "second alphabet declaration".into(),
                });
            }
            let offset = indent + "alphabet:".len();
            let mut letters: Vec<String> = Vec::new();
            let toks = tokens(rest, line_no, offset);
            let mut expect_letter = true;
            for (tok, loc) in toks {
                // Accept both `a < b` and `a<b`.
                let pieces: Vec<&str> = if tok == "<" { vec!["<"] } else { split_keep_lt(&tok) };
                for piece in pieces {
                    if piece == "<" {
                        if expect_letter {
                            return Err(Error::Syntax {
                                location: loc,
                                message: "expected a letter before `<`".into(),
                            });
                        }
                        expect_letter = true;
                    } else {
                        if !expect_letter {
                            return Err(Error::Syntax {
                                location: loc,
                                message: format!("expected `<` before `{piece}`"),
                            });
                        }
                        if piece == "eps" || piece == "->" || piece == "|" || is_nonterminal_name(piece) {
                            return Err(Error::Syntax {
                                location: loc,
                                message: format!("`{piece}` cannot be used as a letter"),
                            });
                        }
                        if letters.iter().any(|l| l == piece) {
                            return Err(Error::DuplicateLetter {
                                letter: piece.to_string(),
                                location: loc,
                            });
                        }
                        letters.push(piece.to_string());
                        expect_letter = false;
                    }
                }
            }
            if letters.is_empty() || expect_letter {
                return Err(Error::Syntax {
                    location: at(offset + 1),
                    message: "alphabet needs at least one letter and no trailing `<`".into(),
                });
            }
            glyphs = Some(letters);
        } else if let Some(rest) = trimmed.strip_prefix("start:") {
            let toks = tokens(rest, line_no, indent + "start:".len());
            if toks.len() != 1 || !is_nonterminal_name(&toks[0].0) {
                return Err(Error::Syntax {
                    location: at(indent + 1),
                    message: "start line must name exactly one nonterminal".into(),
                });
            }
            start = Some(toks[0].clone());
        } else {
            let toks = tokens(line, line_no, 0);
            if toks.len() < 2 || toks[1].0 != "->" {
                return Err(Error::Syntax {
                    location: at(indent + 1),
                    message: "expected `X -> ...`".into(),
                });
            }
            let (lhs, lhs_at) = toks[0].clone();
            if !is_nonterminal_name(&lhs) {
                return Err(Error::Syntax {
                    location: lhs_at,
                    message: format!("`{lhs}` is not a nonterminal name"),
                });
            }
            let mut alternatives = vec![Vec::new()];
            for (tok, loc) in toks.into_iter().skip(2) {
                if tok == "|" {
                    alternatives.push(Vec::new());
                } else {
                    alternatives.last_mut().unwrap().push((tok, loc));
                }
            }
            raw.push(RawProduction { lhs, lhs_at, alternatives });
        }
    }

    let glyphs = glyphs.ok_or(Error::MissingAlphabet)?;
    let (start_name, start_at) = start.ok_or(Error::MissingStart)?;
    let alphabet = Arc::new(Alphabet::new(glyphs));

    let mut names: Vec<String> = Vec::new();
    let intern = |name: &str, names: &mut Vec<String>| -> NonTerminal {
        match names.iter().position(|n| n == name) {
            Some(i) => NonTerminal(i as u32),
            None => {
                names.push(name.to_string());
                NonTerminal(names.len() as u32 - 1)
            }
        }
    };
    let start_nt = intern(&start_name, &mut names);
    for r in &raw {
        if alphabet.lookup(&r.lhs).is_some() {
            return Err(Error::Syntax {
                location: r.lhs_at,
                message: format!("`{}` is both a letter and a nonterminal", r.lhs),
            });
        }
        intern(&r.lhs, &mut names);
    }
    let declared = names.clone();
    if !raw.iter().any(|r| r.lhs == start_name) {
        return Err(Error::UndeclaredSymbol {
            symbol: start_name,
            location: start_at,
        });
    }

    let mut productions = Vec::new();
    for r in &raw {
        let lhs = intern(&r.lhs, &mut names);
        for alt in &r.alternatives {
            if alt.is_empty() {
                let loc = r.lhs_at;
                return Err(Error::Syntax {
                    location: loc,
                    message: "empty alternative (write `eps` for the empty word)".into(),
                });
            }
            let mut rhs = Vec::new();
            if alt.len() == 1 && alt[0].0 == "eps" {
                productions.push(Production { lhs, rhs });
                continue;
            }
            for (tok, loc) in alt {
                if let Some(t) = alphabet.lookup(tok) {
                    rhs.push(Symbol::T(t));
                } else if is_nonterminal_name(tok) && declared.iter().any(|d| d == tok) {
                    rhs.push(Symbol::N(intern(tok, &mut names)));
                } else if tok == "eps" {
                    return Err(Error::Syntax {
                        location: *loc,
                        message: "`eps` must stand alone in an alternative".into(),
                    });
                } else {
                    return Err(Error::UndeclaredSymbol {
                        symbol: tok.clone(),
                        location: *loc,
                    });
                }
            }
            productions.push(Production { lhs, rhs });
        }
    }
    Ok(Grammar::new(alphabet, names, productions, start_nt))
}

/// Splits `a<b<c` into `a`, `<`, `b`, `<`, `c`.
fn split_keep_lt(tok: &str) -> Vec<&str> {
    let mut out = Vec::new();
    let mut rest = tok;
    while let Some(i) = rest.find('<') {
        if i > 0 {
            out.push(&rest[..i]);
        }
        out.push("<");
        rest = &rest[i + 1..];
    }
    if !rest.is_empty() {
        out.push(rest);
    }
    out
}

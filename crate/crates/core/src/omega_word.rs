//! Ultimately periodic infinite words `u v^ω`.

use std::cmp::Ordering;
use std::fmt;

use crate::grammar::{Alphabet, Terminal, Word};

/// How a finite word relates to an infinite one.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, serde::Serialize)]
#[serde(rename_all = "snake_case")]
pub enum FiniteCmp {
    /// Smaller at the first mismatch.
    LessStrict,
    /// A prefix of the infinite word.
    Prefix,
    /// Larger at the first mismatch.
    GreaterStrict,
}

/// A regular ω-word `u v^ω`, always kept in canonical form: `v` is primitive
/// and, when `u` is nonempty, `u` and `v` end in different letters.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct RegularOmegaWord {
    u: Word,
    v: Word,
}

pub fn primitive_root(v: &[Terminal]) -> &[Terminal] {
    let n = v.len();
    for d in 1..=n {
        if n % d == 0 && (d..n).all(|i| v[i] == v[i - d]) {
            return &v[..d];
        }
    }
    v
}

fn gcd(a: usize, b: usize) -> usize {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

impl RegularOmegaWord {
    /// Canonicalizes `u v^ω`. Panics if `v` is empty.
    pub fn new(u: &[Terminal], v: &[Terminal]) -> Self {
        assert!(!v.is_empty(), "period of an omega-word must be nonempty");
        let mut u = u.to_vec();
        let mut v = primitive_root(v).to_vec();
        while let (Some(&lu), Some(&lv)) = (u.last(), v.last()) {
            if lu != lv {
                break;
            }
            u.pop();
            v.rotate_right(1);
        }
        RegularOmegaWord { u, v }
    }

    /// `v^ω`.
    pub fn periodic(v: &[Terminal]) -> Self {
        Self::new(&[], v)
    }

    pub fn u(&self) -> &[Terminal] {
        &self.u
    }

    pub fn v(&self) -> &[Terminal] {
        &self.v
    }

    pub fn letter_at(&self, i: usize) -> Terminal {
        if i < self.u.len() {
            self.u[i]
        } else {
            self.v[(i - self.u.len()) % self.v.len()]
        }
    }

    pub fn prefix(&self, n: usize) -> Word {
        (0..n).map(|i| self.letter_at(i)).collect()
    }

    /// The ω-word with its first `k` letters removed.
    pub fn suffix(&self, k: usize) -> Self {
        if k <= self.u.len() {
            Self::new(&self.u[k..], &self.v)
        } else {
            let mut v = self.v.clone();
            v.rotate_left((k - self.u.len()) % self.v.len());
            Self::new(&[], &v)
        }
    }

    pub fn compare_finite(&self, w: &[Terminal]) -> FiniteCmp {
        for (i, &a) in w.iter().enumerate() {
            match a.cmp(&self.letter_at(i)) {
                Ordering::Less => return FiniteCmp::LessStrict,
                Ordering::Greater => return FiniteCmp::GreaterStrict,
                Ordering::Equal => {}
            }
        }
        FiniteCmp::Prefix
    }

    /// Length within which two different ω-words must disagree.
    fn mismatch_bound(&self, other: &Self) -> usize {
        let (a, b) = (self.v.len(), other.v.len());
        self.u.len() + other.u.len() + 2 * (a / gcd(a, b) * b)
    }

    /// `w · self`, canonicalized.
    pub fn prepend(&self, w: &[Terminal]) -> Self {
        let mut u = w.to_vec();
        u.extend_from_slice(&self.u);
        Self::new(&u, &self.v)
    }

    /// Renders as `u(v)^w`.
    pub fn render(&self, alphabet: &Alphabet) -> String {
        let v = alphabet.render(&self.v);
        if self.u.is_empty() {
            format!("({v})^w")
        } else {
            format!("{}({v})^w", alphabet.render(&self.u))
        }
    }
}

impl Ord for RegularOmegaWord {
    /// Lexicographic order on infinite words, which coincides with the
    /// strict-mismatch order since neither word is a prefix of the other.
    fn cmp(&self, other: &Self) -> Ordering {
        if self == other {
            return Ordering::Equal;
        }
        let bound = self.mismatch_bound(other);
        for i in 0..bound {
            match self.letter_at(i).cmp(&other.letter_at(i)) {
                Ordering::Equal => continue,
                o => return o,
            }
        }
        unreachable!("distinct canonical omega-words agree up to the mismatch bound")
    }
}

impl PartialOrd for RegularOmegaWord {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for RegularOmegaWord {
    /// Letter indices, for debugging without an alphabet.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let show = |w: &[Terminal]| w.iter().map(|t| t.0.to_string()).collect::<Vec<_>>().join(".");
        write!(f, "{}({})^w", show(&self.u), show(&self.v))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn w(s: &str) -> Word {
        s.bytes().map(|b| Terminal((b - b'a') as u16)).collect()
    }

    fn ow(u: &str, v: &str) -> RegularOmegaWord {
        RegularOmegaWord::new(&w(u), &w(v))
    }

    #[test]
    fn canonical_forms() {
        assert_eq!(ow("abab", "ab"), ow("", "ab"));
        assert_eq!(ow("abab", "ab").u(), &[] as &[Terminal]);
        assert_eq!(ow("a", "ba"), ow("", "ab"));
        assert_eq!(ow("", "aa").v(), w("a").as_slice());
        assert_eq!(ow("b", "ab"), ow("ba", "ba"));
        assert_ne!(ow("", "a"), ow("", "b"));
    }

    #[test]
    fn finite_comparisons() {
        assert_eq!(ow("", "a").compare_finite(&w("aa")), FiniteCmp::Prefix);
        assert_eq!(ow("", "a").compare_finite(&w("ab")), FiniteCmp::GreaterStrict);
        assert_eq!(ow("", "b").compare_finite(&w("bba")), FiniteCmp::LessStrict);
        assert_eq!(ow("", "b").compare_finite(&[]), FiniteCmp::Prefix);
    }

    #[test]
    fn infinite_comparisons() {
        assert!(ow("", "a") < ow("", "b"));
        assert_eq!(ow("", "ab").cmp(&ow("a", "ba")), Ordering::Equal);
        assert!(ow("a", "b") > ow("", "a"));
        assert!(ow("", "aab") < ow("", "ab"));
    }

    #[test]
    fn prepend_and_suffix() {
        assert_eq!(ow("", "a").prepend(&w("a")), ow("", "a"));
        let x = ow("", "a").prepend(&w("b"));
        assert_eq!((x.u(), x.v()), (w("b").as_slice(), w("a").as_slice()));
        assert_eq!(ow("", "ba").prepend(&w("a")), ow("", "ab"));
        // ab(ba)^w = abbaba... differs from (ab)^w at the third letter
        let y = ow("", "ba").prepend(&w("ab"));
        assert_eq!((y.u(), y.v()), (w("ab").as_slice(), w("ba").as_slice()));
        assert!(y > ow("", "ab"));
        assert_eq!(ow("c", "ab").suffix(2), ow("", "ba"));
        assert_eq!(ow("c", "ab").suffix(0), ow("c", "ab"));
    }

    #[test]
    fn rendering() {
        let alpha = Alphabet::new(["a", "b"]);
        assert_eq!(ow("b", "b").render(&alpha), "(b)^w");
        assert_eq!(ow("b", "a").render(&alpha), "b(a)^w");
    }
}

//! Factor sets, complexity functions and frequencies.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::symbolic::word::Word;

/// Suffix automaton of a word: the minimal DFA accepting its suffixes.
///
/// Every factor of the word corresponds to exactly one state; a state `v`
/// represents the factors of lengths `len(link(v)) + 1 ..= len(v)`, which makes
/// counting distinct factors of each length linear in the number of states.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SuffixAutomaton {
    /// Distinct symbols of the indexed word, sorted; transitions are indexed by
    /// position in this list.
    symbols: Vec<u8>,
    len: Vec<u32>,
    link: Vec<u32>,
    next: Vec<u32>,
    word_len: usize,
}

const NONE: u32 = u32::MAX;

impl SuffixAutomaton {
    pub fn build(w: &Word) -> Self {
        let mut symbols: Vec<u8> = w.iter().collect::<BTreeSet<_>>().into_iter().collect();
        if symbols.is_empty() {
            symbols.push(0);
        }
        let k = symbols.len();
        let mut map = [u8::MAX; 256];
        for (i, &s) in symbols.iter().enumerate() {
            map[s as usize] = i as u8;
        }
        let cap = 2 * w.len().max(1);
        let mut sa = Self {
            symbols,
            len: Vec::with_capacity(cap),
            link: Vec::with_capacity(cap),
            next: Vec::with_capacity(cap * k),
            word_len: w.len(),
        };
        sa.push_state(0, NONE);
        let mut last = 0u32;
        for s in w.iter() {
            let c = map[s as usize] as usize;
            let cur = sa.push_state(sa.len[last as usize] + 1, NONE);
            let mut p = last;
            while p != NONE && sa.next[p as usize * k + c] == NONE {
                sa.next[p as usize * k + c] = cur;
                p = sa.link[p as usize];
            }
            if p == NONE {
                sa.link[cur as usize] = 0;
            } else {
                let q = sa.next[p as usize * k + c];
                if sa.len[p as usize] + 1 == sa.len[q as usize] {
                    sa.link[cur as usize] = q;
                } else {
                    let clone = sa.push_state(sa.len[p as usize] + 1, sa.link[q as usize]);
                    let (src, dst) = (q as usize * k, clone as usize * k);
                    for j in 0..k {
                        sa.next[dst + j] = sa.next[src + j];
                    }
                    while p != NONE && sa.next[p as usize * k + c] == q {
                        sa.next[p as usize * k + c] = clone;
                        p = sa.link[p as usize];
                    }
                    sa.link[q as usize] = clone;
                    sa.link[cur as usize] = clone;
                }
            }
            last = cur;
        }
        sa
    }

    fn push_state(&mut self, len: u32, link: u32) -> u32 {
        let id = self.len.len() as u32;
        self.len.push(len);
        self.link.push(link);
        self.next.extend(std::iter::repeat_n(NONE, self.symbols.len()));
        id
    }

    pub fn num_states(&self) -> usize {
        self.len.len()
    }

    pub fn word_len(&self) -> usize {
        self.word_len
    }

    /// Whether `v` is a factor of the indexed word.
    pub fn contains(&self, v: &Word) -> bool {
        let k = self.symbols.len();
        let mut state = 0usize;
        for s in v.iter() {
            let Ok(c) = self.symbols.binary_search(&s) else {
                return false;
            };
            let nxt = self.next[state * k + c];
            if nxt == NONE {
                return false;
            }
            state = nxt as usize;
        }
        true
    }

    /// `p(n)` for `n = 1..=n_max`.
    pub fn complexity(&self, n_max: usize) -> Vec<usize> {
        let mut diff = vec![0i64; n_max + 2];
        for v in 1..self.len.len() {
            let lo = self.len[self.link[v] as usize] as usize + 1;
            let hi = (self.len[v] as usize).min(n_max);
            if lo <= hi {
                diff[lo] += 1;
                diff[hi + 1] -= 1;
            }
        }
        let mut out = Vec::with_capacity(n_max);
        let mut acc = 0i64;
        for d in diff.iter().take(n_max + 1).skip(1) {
            acc += d;
            out.push(acc as usize);
        }
        out
    }
}

/// The set `F_w(n)` of length-`n` factors; empty when `n > |w|`.
pub fn factor_set(w: &Word, n: usize) -> BTreeSet<Word> {
    if n > w.len() {
        return BTreeSet::new();
    }
    if n == 0 {
        return BTreeSet::from([Word::new()]);
    }
    w.as_bytes().windows(n).map(|s| Word::from_bytes(s.to_vec())).collect()
}

/// `p_w(n) = |F_w(n)|` for `n = 1..=n_max`.
///
/// The result describes the infinite word only if `w` is a long enough prefix
/// for every factor of length `≤ n_max` to have appeared; a prefix of length
/// `20·n_max` or more is a sensible default for linearly recurrent words.
pub fn complexity(w: &Word, n_max: usize) -> Vec<usize> {
    SuffixAutomaton::build(w).complexity(n_max)
}

/// Start indices (0-based) of all, possibly overlapping, occurrences of `v` in `w`.
pub fn occurrences(w: &Word, v: &Word) -> Vec<usize> {
    let (w, v) = (w.as_bytes(), v.as_bytes());
    if v.is_empty() {
        return (0..=w.len()).collect();
    }
    if v.len() > w.len() {
        return Vec::new();
    }
    // Knuth–Morris–Pratt failure function
    let mut fail = vec![0usize; v.len()];
    let mut k = 0;
    for i in 1..v.len() {
        while k > 0 && v[i] != v[k] {
            k = fail[k - 1];
        }
        if v[i] == v[k] {
            k += 1;
        }
        fail[i] = k;
    }
    let mut out = Vec::new();
    k = 0;
    for (i, &c) in w.iter().enumerate() {
        while k > 0 && c != v[k] {
            k = fail[k - 1];
        }
        if c == v[k] {
            k += 1;
        }
        if k == v.len() {
            out.push(i + 1 - k);
            k = fail[k - 1];
        }
    }
    out
}

/// `#_v(w)`, counting overlapping occurrences.
pub fn count_occurrences(w: &Word, v: &Word) -> usize {
    occurrences(w, v).len()
}

/// `#_v(w) / (|w| − |v| + 1)`; zero when `v` is longer than `w`.
pub fn frequency(w: &Word, v: &Word) -> f64 {
    if v.len() > w.len() {
        return 0.0;
    }
    count_occurrences(w, v) as f64 / (w.len() - v.len() + 1) as f64
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::symbolic::substitution::SubstitutionRule;

    fn naive_complexity(w: &Word, n_max: usize) -> Vec<usize> {
        (1..=n_max).map(|n| factor_set(w, n).len()).collect()
    }

    #[test]
    fn factor_set_examples() {
        let w = Word::from("aabaaa");
        let f: Vec<String> = factor_set(&w, 2).into_iter().map(String::from).collect();
        assert_eq!(f, ["aa", "ab", "ba"]);
        assert_eq!(factor_set(&w, 6), BTreeSet::from([w.clone()]));
        assert!(factor_set(&w, 7).is_empty());
    }

    #[test]
    fn frequency_examples() {
        let w = Word::from("aabaaa");
        assert_eq!(count_occurrences(&w, &Word::from("aa")), 3);
        assert_eq!(frequency(&w, &Word::from("aa")), 3.0 / 5.0);
        assert_eq!(frequency(&w, &w), 1.0);
        assert_eq!(frequency(&w, &Word::from("aabaaab")), 0.0);
    }

    #[test]
    fn fibonacci_complexity() {
        let w = SubstitutionRule::fibonacci().fixed_point_prefix(b'a', 1000).unwrap().prefix(1000);
        assert_eq!(factor_set(&w, 3).len(), 4);
        let p = complexity(&w, 40);
        assert!(p.iter().enumerate().all(|(i, &c)| c == i + 2));
    }

    #[test]
    fn constant_and_thue_morse() {
        let w = Word::from("a").power(100);
        assert!(complexity(&w, 50).iter().all(|&c| c == 1));
        let tm = SubstitutionRule::thue_morse().fixed_point_prefix(b'a', 10_000).unwrap();
        assert_eq!(complexity(&tm, 2)[1], 4);
    }

    #[test]
    fn automaton_matches_naive_enumeration() {
        for w in ["", "a", "abcabcab", "abaababaabaababaababa", "aabbaabbbab"] {
            let w = Word::from(w);
            assert_eq!(complexity(&w, w.len() + 2), naive_complexity(&w, w.len() + 2), "{w}");
        }
    }

    #[test]
    fn automaton_membership() {
        let w = Word::from("abaababaab");
        let sa = SuffixAutomaton::build(&w);
        assert!(sa.contains(&Word::from("baba")));
        assert!(!sa.contains(&Word::from("bb")));
        assert!(!sa.contains(&Word::from("c")));
        assert!(sa.contains(&Word::new()));
    }
}

//! Local repetitions: powers `v^k` and palindromes. Positions are 1-based, the
//! first symbol of a word sitting at position 1.

use crate::symbolic::word::{is_palindrome, Word};

/// All positions `i` with `w[i .. i + k·len) = v^k` for some `v` of length `len`,
/// overlapping occurrences included.
pub fn find_powers(w: &Word, k: usize, len: usize) -> Vec<(usize, Word)> {
    let s = w.as_bytes();
    if k == 0 || len == 0 || k * len > s.len() {
        return Vec::new();
    }
    let span = (k - 1) * len;
    if span == 0 {
        return (0..s.len()).map(|i| (i + 1, Word::from_bytes(vec![s[i]]))).collect();
    }
    // matches[j] = (s[j] == s[j + len]); v^k at i iff matches[i .. i + span) all hold
    let matches: Vec<bool> = (0..s.len() - len).map(|j| s[j] == s[j + len]).collect();
    let mut out = Vec::new();
    let mut run = matches[..span].iter().filter(|&&m| m).count();
    for i in 0..=s.len() - k * len {
        if i > 0 {
            run -= matches[i - 1] as usize;
            run += matches[i + span - 1] as usize;
        }
        if run == span {
            out.push((i + 1, Word::from_bytes(s[i..i + len].to_vec())));
        }
    }
    out
}

/// First `k`-th power in `w` with base length at most `max_len`, searching
/// shorter bases first.
pub fn first_power(w: &Word, k: usize, max_len: usize) -> Option<(usize, Word)> {
    (1..=max_len).find_map(|len| find_powers(w, k, len).into_iter().next())
}

/// Positions of the palindromic factors of length `n`.
pub fn find_palindromes(w: &Word, n: usize) -> Vec<usize> {
    if n == 0 || n > w.len() {
        return Vec::new();
    }
    w.as_bytes()
        .windows(n)
        .enumerate()
        .filter(|(_, f)| is_palindrome(f))
        .map(|(i, _)| i + 1)
        .collect()
}

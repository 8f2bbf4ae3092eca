use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// An ordered set of 2 to 8 distinct ASCII symbols.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Alphabet {
    symbols: Vec<u8>,
}

impl Alphabet {
    pub fn new(symbols: &[u8]) -> Result<Self> {
        if !(2..=8).contains(&symbols.len()) {
            return Err(Error::Alphabet(format!(
                "size {} outside 2..=8",
                symbols.len()
            )));
        }
        for (i, s) in symbols.iter().enumerate() {
            if !s.is_ascii_graphic() {
                return Err(Error::Alphabet(format!("symbol byte {s:#x} is not printable ASCII")));
            }
            if symbols[..i].contains(s) {
                return Err(Error::Alphabet(format!("duplicate symbol {:?}", *s as char)));
            }
        }
        Ok(Self { symbols: symbols.to_vec() })
    }

    /// `{0, 1}` in that order, used by circle-map and Sturmian words.
    pub fn binary() -> Self {
        Self { symbols: b"01".to_vec() }
    }

    pub fn symbols(&self) -> &[u8] {
        &self.symbols
    }

    pub fn len(&self) -> usize {
        self.symbols.len()
    }

    pub fn is_empty(&self) -> bool {
        self.symbols.is_empty()
    }

    pub fn index_of(&self, symbol: u8) -> Option<usize> {
        self.symbols.iter().position(|&s| s == symbol)
    }

    pub fn contains(&self, symbol: u8) -> bool {
        self.index_of(symbol).is_some()
    }

    /// Fails with a domain error on the first symbol of `w` outside the alphabet.
    pub fn check(&self, w: &Word) -> Result<()> {
        match w.iter().find(|&s| !self.contains(s)) {
            Some(s) => Err(Error::Domain { symbol: s as char, alphabet: self.to_string() }),
            None => Ok(()),
        }
    }
}

impl fmt::Display for Alphabet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(std::str::from_utf8(&self.symbols).unwrap_or("?"))
    }
}

/// A finite word; symbols are single ASCII bytes.
#[derive(Debug, Clone, Default, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(into = "String", try_from = "String")]
pub struct Word(Vec<u8>);

impl Word {
    pub fn new() -> Self {
        Self(Vec::new())
    }

    pub fn from_bytes(bytes: Vec<u8>) -> Self {
        Self(bytes)
    }

    pub fn as_bytes(&self) -> &[u8] {
        &self.0
    }

    pub fn into_bytes(self) -> Vec<u8> {
        self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn iter(&self) -> impl DoubleEndedIterator<Item = u8> + ExactSizeIterator + '_ {
        self.0.iter().copied()
    }

    pub fn push_word(&mut self, other: &Word) {
        self.0.extend_from_slice(&other.0);
    }

    pub fn concat(&self, other: &Word) -> Word {
        let mut out = Vec::with_capacity(self.len() + other.len());
        out.extend_from_slice(&self.0);
        out.extend_from_slice(&other.0);
        Word(out)
    }

    /// `self^k`; `k = 0` gives the empty word.
    pub fn power(&self, k: usize) -> Word {
        Word(self.0.repeat(k))
    }

    /// Factor starting at 0-based index `start` of length `len`.
    pub fn slice(&self, start: usize, len: usize) -> Word {
        Word(self.0[start..start + len].to_vec())
    }

    pub fn prefix(&self, len: usize) -> Word {
        Word(self.0[..len.min(self.len())].to_vec())
    }

    pub fn reversed(&self) -> Word {
        Word(self.0.iter().rev().copied().collect())
    }

    pub fn is_palindrome(&self) -> bool {
        is_palindrome(&self.0)
    }
}

pub(crate) fn is_palindrome(s: &[u8]) -> bool {
    s.iter().eq(s.iter().rev())
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&String::from_utf8_lossy(&self.0))
    }
}

impl From<&str> for Word {
    fn from(s: &str) -> Self {
        Word(s.as_bytes().to_vec())
    }
}

impl From<Word> for String {
    fn from(w: Word) -> Self {
        String::from_utf8_lossy(&w.0).into_owned()
    }
}

impl TryFrom<String> for Word {
    type Error = Error;

    fn try_from(s: String) -> Result<Self> {
        if !s.is_ascii() {
            return Err(Error::Alphabet("words are ASCII strings".into()));
        }
        Ok(Word(s.into_bytes()))
    }
}

impl AsRef<[u8]> for Word {
    fn as_ref(&self) -> &[u8] {
        &self.0
    }
}

impl FromIterator<u8> for Word {
    fn from_iter<I: IntoIterator<Item = u8>>(iter: I) -> Self {
        Word(iter.into_iter().collect())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn alphabet_rejects_duplicates_and_bad_sizes() {
        assert!(Alphabet::new(b"ab").is_ok());
        assert!(Alphabet::new(b"a").is_err());
        assert!(Alphabet::new(b"aba").is_err());
        assert!(Alphabet::new(b"abcdefghi").is_err());
    }

    #[test]
    fn domain_check_reports_symbol() {
        let a = Alphabet::new(b"ab").unwrap();
        let err = a.check(&Word::from("abc")).unwrap_err();
        assert!(matches!(err, Error::Domain { symbol: 'c', .. }));
    }

    #[test]
    fn powers_and_palindromes() {
        assert_eq!(Word::from("ab").power(3).to_string(), "ababab");
        assert!(Word::from("").power(4).is_empty());
        assert!(Word::from("abba").is_palindrome());
        assert!(!Word::from("ab").is_palindrome());
    }
}

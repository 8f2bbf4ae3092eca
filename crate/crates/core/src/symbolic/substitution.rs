//! Substitutions (letter-to-word morphisms) and their fixed points.

use std::fmt;

use crate::error::{Error, Result};
use crate::symbolic::word::{Alphabet, Word};

/// A substitution `S` over an alphabet, extended morphically to words.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SubstitutionRule {
    alphabet: Alphabet,
    images: Vec<Word>,
}

impl SubstitutionRule {
    /// `images[i]` is the image of the `i`-th alphabet symbol.
    pub fn new(alphabet: Alphabet, images: Vec<Word>) -> Result<Self> {
        if images.len() != alphabet.len() {
            return Err(Error::Precondition(format!(
                "{} images for an alphabet of {} symbols",
                images.len(),
                alphabet.len()
            )));
        }
        for img in &images {
            if img.is_empty() {
                return Err(Error::Precondition("substitution images must be nonempty".into()));
            }
            alphabet.check(img)?;
        }
        Ok(Self { alphabet, images })
    }

    /// Parses `a->ab,b->a`. The alphabet is the list of left-hand sides in order.
    pub fn parse(spec: &str) -> Result<Self> {
        let mut symbols = Vec::new();
        let mut images = Vec::new();
        for part in spec.split(',').map(str::trim).filter(|p| !p.is_empty()) {
            let (lhs, rhs) = part
                .split_once("->")
                .ok_or_else(|| Error::Precondition(format!("malformed rule {part:?}")))?;
            let lhs = lhs.trim().as_bytes();
            if lhs.len() != 1 {
                return Err(Error::Precondition(format!("left side {part:?} must be one symbol")));
            }
            symbols.push(lhs[0]);
            images.push(Word::from(rhs.trim()));
        }
        Self::new(Alphabet::new(&symbols)?, images)
    }

    pub fn fibonacci() -> Self {
        Self::parse("a->ab,b->a").expect("builtin")
    }

    pub fn period_doubling() -> Self {
        Self::parse("a->ab,b->aa").expect("builtin")
    }

    pub fn binary_non_pisot() -> Self {
        Self::parse("a->ab,b->aaa").expect("builtin")
    }

    pub fn thue_morse() -> Self {
        Self::parse("a->ab,b->ba").expect("builtin")
    }

    pub fn rudin_shapiro() -> Self {
        Self::parse("a->ab,b->ac,c->db,d->dc").expect("builtin")
    }

    /// Looks up one of the built-in substitutions by its CLI name.
    pub fn builtin(name: &str) -> Option<Self> {
        Some(match name {
            "fibonacci" => Self::fibonacci(),
            "period-doubling" => Self::period_doubling(),
            "binary-non-pisot" => Self::binary_non_pisot(),
            "thue-morse" => Self::thue_morse(),
            "rudin-shapiro" => Self::rudin_shapiro(),
            _ => return None,
        })
    }

    pub fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    pub fn image(&self, symbol: u8) -> Result<&Word> {
        self.alphabet
            .index_of(symbol)
            .map(|i| &self.images[i])
            .ok_or_else(|| Error::Domain { symbol: symbol as char, alphabet: self.alphabet.to_string() })
    }

    pub fn images(&self) -> &[Word] {
        &self.images
    }

    /// `S(b_1 … b_n) = S(b_1) … S(b_n)`.
    pub fn apply(&self, w: &Word) -> Result<Word> {
        let mut out = Vec::new();
        for s in w.iter() {
            out.extend_from_slice(self.image(s)?.as_bytes());
        }
        Ok(Word::from_bytes(out))
    }

    /// `S^n(w)`.
    pub fn iterate(&self, w: &Word, n: usize) -> Result<Word> {
        let mut cur = w.clone();
        for _ in 0..n {
            cur = self.apply(&cur)?;
        }
        Ok(cur)
    }

    /// Prefix of length at least `min_length` of the fixed point `lim S^n(seed)`.
    ///
    /// The seed must be self-prolongable: `S(seed)` starts with `seed` and the
    /// iterates grow. Otherwise pass a suitable power of `S`.
    pub fn fixed_point_prefix(&self, seed: u8, min_length: usize) -> Result<Word> {
        let img = self.image(seed)?;
        if img.as_bytes()[0] != seed {
            return Err(Error::Precondition(format!(
                "S({}) = {} does not start with {}; use a power of S",
                seed as char, img, seed as char
            )));
        }
        let mut cur = Word::from_bytes(vec![seed]);
        let mut stalled = 0;
        while cur.len() < min_length.max(1) {
            let next = self.apply(&cur)?;
            if next.len() == cur.len() {
                stalled += 1;
                if stalled > self.alphabet.len() {
                    return Err(Error::Precondition(format!(
                        "iterates of {} do not grow",
                        seed as char
                    )));
                }
            } else {
                stalled = 0;
            }
            cur = next;
        }
        Ok(cur)
    }

    /// Whether some power `S^k`, `k ≤ |A|²`, maps every letter onto a word
    /// containing all letters.
    pub fn is_primitive(&self) -> bool {
        let n = self.alphabet.len();
        // occurrence pattern matrix, iterated boolean-ly
        let base: Vec<Vec<bool>> = self
            .images
            .iter()
            .map(|img| self.alphabet.symbols().iter().map(|&s| img.iter().any(|c| c == s)).collect())
            .collect();
        let mut cur = base.clone();
        for _ in 0..n * n {
            if cur.iter().all(|row| row.iter().all(|&b| b)) {
                return true;
            }
            let mut next = vec![vec![false; n]; n];
            for i in 0..n {
                for j in 0..n {
                    if cur[i][j] {
                        for k in 0..n {
                            next[i][k] |= base[j][k];
                        }
                    }
                }
            }
            cur = next;
        }
        false
    }
}

impl fmt::Display for SubstitutionRule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, (s, img)) in self.alphabet.symbols().iter().zip(&self.images).enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{}->{}", *s as char, img)?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fibonacci_images() {
        let s = SubstitutionRule::fibonacci();
        assert_eq!(s.apply(&Word::from("a")).unwrap().to_string(), "ab");
        assert_eq!(s.apply(&Word::from("abaab")).unwrap().to_string(), "abaababa");
        assert!(s.apply(&Word::new()).unwrap().is_empty());
    }

    #[test]
    fn apply_rejects_foreign_symbols() {
        let err = SubstitutionRule::fibonacci().apply(&Word::from("abc")).unwrap_err();
        assert!(matches!(err, Error::Domain { symbol: 'c', .. }));
    }

    #[test]
    fn fixed_point_prefixes() {
        let fib = SubstitutionRule::fibonacci().fixed_point_prefix(b'a', 5).unwrap();
        assert_eq!(fib.prefix(5).to_string(), "abaab");
        let pd = SubstitutionRule::period_doubling().fixed_point_prefix(b'a', 4).unwrap();
        assert_eq!(pd.prefix(4).to_string(), "abaa");
        let tm = SubstitutionRule::thue_morse().fixed_point_prefix(b'a', 8).unwrap();
        assert_eq!(tm.prefix(8).to_string(), "abbabaab");
        let rs = SubstitutionRule::rudin_shapiro().fixed_point_prefix(b'a', 4).unwrap();
        assert_eq!(rs.prefix(4).to_string(), "abac");
    }

    #[test]
    fn fixed_point_prefixes_are_consistent() {
        let s = SubstitutionRule::binary_non_pisot();
        let short = s.fixed_point_prefix(b'a', 50).unwrap();
        let long = s.fixed_point_prefix(b'a', 500).unwrap();
        assert_eq!(&long.as_bytes()[..short.len()], short.as_bytes());
    }

    #[test]
    fn non_prolongable_seed_is_rejected() {
        let s = SubstitutionRule::fibonacci();
        assert!(matches!(s.fixed_point_prefix(b'b', 10), Err(Error::Precondition(_))));
        let stuck = SubstitutionRule::parse("a->a,b->ab").unwrap();
        assert!(matches!(stuck.fixed_point_prefix(b'a', 10), Err(Error::Precondition(_))));
    }

    #[test]
    fn builtins_are_primitive() {
        for name in ["fibonacci", "period-doubling", "binary-non-pisot", "thue-morse", "rudin-shapiro"] {
            assert!(SubstitutionRule::builtin(name).unwrap().is_primitive(), "{name}");
        }
        assert!(!SubstitutionRule::parse("a->a,b->ab").unwrap().is_primitive());
    }

    #[test]
    fn parse_round_trips_display() {
        let s = SubstitutionRule::rudin_shapiro();
        assert_eq!(SubstitutionRule::parse(&s.to_string()).unwrap(), s);
    }
}

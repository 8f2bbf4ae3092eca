use std::ops::RangeInclusive;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::{from_usize, Real};
use crate::symbolic::{circle_map_symbol, Alphabet, Word};

/// Map from alphabet symbols to potential values.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Coding<T> {
    table: Vec<(u8, T)>,
}

impl<T: Real> Coding<T> {
    pub fn new(table: Vec<(u8, T)>) -> Result<Self> {
        let symbols: Vec<u8> = table.iter().map(|&(s, _)| s).collect();
        Alphabet::new(&symbols)?;
        Ok(Self { table })
    }

    /// `1 ↦ λ`, `0 ↦ 0`.
    pub fn sturmian(lambda: T) -> Self {
        Self { table: vec![(b'0', T::zero()), (b'1', lambda)] }
    }

    /// The `i`-th letter of the alphabet is mapped to `i·λ`.
    pub fn graded(alphabet: &Alphabet, lambda: T) -> Self {
        let table = alphabet.symbols().iter().enumerate().map(|(i, &s)| (s, from_usize::<T>(i) * lambda)).collect();
        Self { table }
    }

    /// Parses `a=0,b=4`.
    pub fn parse(spec: &str) -> Result<Self> {
        let mut table = Vec::new();
        for item in spec.split(',').map(str::trim).filter(|s| !s.is_empty()) {
            let (sym, val) = item
                .split_once('=')
                .ok_or_else(|| Error::Precondition(format!("coding entry {item:?} is not of the form s=value")))?;
            let sym = sym.trim().as_bytes();
            if sym.len() != 1 {
                return Err(Error::Precondition(format!("coding symbol {:?} must be a single character", item)));
            }
            let val: f64 = val
                .trim()
                .parse()
                .map_err(|_| Error::Precondition(format!("coding value in {item:?} is not a number")))?;
            table.push((sym[0], T::from_f64(val).unwrap()));
        }
        Self::new(table)
    }

    pub fn value(&self, symbol: u8) -> Result<T> {
        self.table.iter().find(|&&(s, _)| s == symbol).map(|&(_, v)| v).ok_or_else(|| Error::Domain {
            symbol: symbol as char,
            alphabet: self.table.iter().map(|&(s, _)| s as char).collect(),
        })
    }

    pub fn entries(&self) -> &[(u8, T)] {
        &self.table
    }

    pub fn min(&self) -> T {
        self.table.iter().map(|&(_, v)| v).fold(T::infinity(), T::min)
    }

    pub fn max(&self) -> T {
        self.table.iter().map(|&(_, v)| v).fold(T::neg_infinity(), T::max)
    }
}

/// A potential materialized on the consecutive sites `start, start+1, …`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Potential<T> {
    start: i64,
    values: Vec<T>,
}

impl<T: Real> Potential<T> {
    pub fn new(start: i64, values: Vec<T>) -> Self {
        Self { start, values }
    }

    /// `V(first_site + i) = f(w[i])`.
    pub fn from_word(w: &Word, coding: &Coding<T>, first_site: i64) -> Result<Self> {
        let values = w.iter().map(|s| coding.value(s)).collect::<Result<_>>()?;
        Ok(Self { start: first_site, values })
    }

    /// Tiles `w` periodically over `range`, with `w[0]` at site 0.
    pub fn periodic(w: &Word, coding: &Coding<T>, range: RangeInclusive<i64>) -> Result<Self> {
        if w.is_empty() {
            return Err(Error::Precondition("empty period word".into()));
        }
        let period: Vec<T> = w.iter().map(|s| coding.value(s)).collect::<Result<_>>()?;
        let p = period.len() as i64;
        let values = range.clone().map(|n| period[n.rem_euclid(p) as usize]).collect();
        Ok(Self { start: *range.start(), values })
    }

    pub fn constant(value: T, range: RangeInclusive<i64>) -> Self {
        let len = (range.end() - range.start() + 1).max(0) as usize;
        Self { start: *range.start(), values: vec![value; len] }
    }

    /// `V(n) = λ·χ_{[1−β,1)}(nα+θ mod 1)`.
    pub fn circle_map(alpha: T, beta: T, theta: T, lambda: T, range: RangeInclusive<i64>) -> Self {
        let start = *range.start();
        let values = range
            .map(|n| if circle_map_symbol(alpha, beta, theta, n) == b'1' { lambda } else { T::zero() })
            .collect();
        Self { start, values }
    }

    pub fn start(&self) -> i64 {
        self.start
    }

    /// Last covered site (`start − 1` when empty).
    pub fn end(&self) -> i64 {
        self.start + self.values.len() as i64 - 1
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn values(&self) -> &[T] {
        &self.values
    }

    pub fn covers(&self, lo: i64, hi: i64) -> bool {
        lo > hi || (lo >= self.start && hi <= self.end())
    }

    pub fn require(&self, lo: i64, hi: i64) -> Result<()> {
        if self.covers(lo, hi) {
            Ok(())
        } else {
            Err(Error::Range(format!(
                "sites {lo}..={hi} requested but the potential covers {}..={}",
                self.start,
                self.end()
            )))
        }
    }

    pub fn get(&self, site: i64) -> Option<T> {
        let i = site.checked_sub(self.start)?;
        usize::try_from(i).ok().and_then(|i| self.values.get(i).copied())
    }

    pub fn at(&self, site: i64) -> Result<T> {
        self.get(site).ok_or_else(|| {
            Error::Range(format!("site {site} outside the potential window {}..={}", self.start, self.end()))
        })
    }

    /// The same values with site `offset` relabelled as site 0.
    pub fn rebased(&self, offset: i64) -> Self {
        Self { start: self.start - offset, values: self.values.clone() }
    }

    pub fn min(&self) -> T {
        self.values.iter().copied().fold(T::infinity(), T::min)
    }

    pub fn max(&self) -> T {
        self.values.iter().copied().fold(T::neg_infinity(), T::max)
    }

    pub fn sites(&self) -> impl Iterator<Item = (i64, T)> + '_ {
        self.values.iter().enumerate().map(move |(i, &v)| (self.start + i as i64, v))
    }
}

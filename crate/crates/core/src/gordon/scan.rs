use serde::{Deserialize, Serialize};

use super::criteria::GordonKind;
use crate::error::Result;
use crate::symbolic::{count_occurrences, frequency, n_partition, BlockKind, ContinuedFraction, Word};

/// A repetition of `s_level` found by partitioning a Sturmian word. With the
/// word's first symbol at site 1, the repetition satisfies the square (or
/// cube) condition of length `length` at `offset`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ScaleHit {
    pub level: usize,
    pub length: usize,
    pub offset: i64,
    pub kind: GordonKind,
}

/// Squares `s_n s_n` and cubes `s_n s_n s_n` of `w` for every level `1..=n_max`,
/// read off the `n`-partitions. A square starting at position `p` has offset
/// `p − 1`; a cube starting at `p` is centred, offset `p − 1 + q_n`.
pub fn scan_gordon_scales(w: &Word, cf: &ContinuedFraction, n_max: usize) -> Result<Vec<ScaleHit>> {
    let mut hits = Vec::new();
    for n in 1..=n_max {
        let part = n_partition(w, cf, n)?;
        let q = part.long_len;
        for run in part.runs.iter().filter(|r| r.kind == BlockKind::Long) {
            for i in 0..run.multiplicity.saturating_sub(1) {
                let p = (run.start + i * q) as i64;
                hits.push(ScaleHit { level: n, length: q, offset: p - 1, kind: GordonKind::TwoBlock });
            }
            for i in 0..run.multiplicity.saturating_sub(2) {
                let p = (run.start + i * q) as i64;
                hits.push(ScaleHit { level: n, length: q, offset: p - 1 + q as i64, kind: GordonKind::ThreeBlock });
            }
        }
    }
    Ok(hits)
}

/// Frequency-based lower bound `|v|·d_w(v^k)` on the measure of the set where
/// the `k`-block Gordon argument applies.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FrequencyBound {
    pub value: f64,
    /// `v^k` does not occur in `w`.
    pub absent: bool,
}

pub fn frequency_lower_bound(w: &Word, v: &Word, k: usize) -> FrequencyBound {
    let vk = v.power(k);
    if v.is_empty() || vk.len() > w.len() {
        return FrequencyBound { value: 0.0, absent: true };
    }
    let absent = count_occurrences(w, &vk) == 0;
    FrequencyBound { value: (v.len() as f64 * frequency(w, &vk)).min(1.0), absent }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gordon::criteria::{check_cube, check_square};
    use crate::operator::{Coding, Potential};
    use crate::symbolic::{characteristic_prefix, continued_fraction, AlphaSpec, SubstitutionRule};

    #[test]
    fn golden_scan_round_trips() {
        let cf = continued_fraction(&AlphaSpec::golden(), 12).unwrap();
        let w = characteristic_prefix(&cf, 4 * cf.q(8) as usize).unwrap();
        let hits = scan_gordon_scales(&w, &cf, 8).unwrap();
        let v = Potential::from_word(&w, &Coding::<f64>::sturmian(1.0), 1).unwrap();
        for n in 1..=8 {
            assert!(hits.iter().any(|h| h.level == n && h.kind == GordonKind::TwoBlock), "level {n}");
        }
        for h in &hits {
            match h.kind {
                GordonKind::TwoBlock => assert!(check_square(&v, h.length, h.offset).unwrap()),
                GordonKind::ThreeBlock => assert!(check_cube(&v, h.length, h.offset).unwrap()),
            }
        }
    }

    #[test]
    fn constant_quotients_give_cubes() {
        let cf = continued_fraction(&AlphaSpec::periodic(&[3]), 10).unwrap();
        let w = characteristic_prefix(&cf, 4 * cf.q(5) as usize).unwrap();
        let hits = scan_gordon_scales(&w, &cf, 5).unwrap();
        let v = Potential::from_word(&w, &Coding::<f64>::sturmian(1.0), 1).unwrap();
        for n in 1..=5 {
            assert!(hits.iter().any(|h| h.level == n && h.kind == GordonKind::ThreeBlock), "level {n}");
        }
        assert!(hits.iter().all(|h| h.kind != GordonKind::ThreeBlock || check_cube(&v, h.length, h.offset).unwrap()));
    }

    #[test]
    fn frequency_bounds() {
        let v = Word::from("abc");
        let w = v.power(200);
        let b = frequency_lower_bound(&w, &v, 3);
        assert!(!b.absent && (b.value - 1.0).abs() < 2e-2 && b.value <= 1.0);
        let longer = frequency_lower_bound(&w, &v.power(2), 3);
        assert!(longer.value <= b.value);
        let fib = SubstitutionRule::fibonacci().fixed_point_prefix(b'a', 10_000).unwrap();
        let b = frequency_lower_bound(&fib, &Word::from("aba"), 4);
        assert!(b.absent && b.value == 0.0);
    }
}

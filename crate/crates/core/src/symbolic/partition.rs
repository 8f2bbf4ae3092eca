//! `n`-partitions of Sturmian factors into blocks `s_n` and `s_{n−1}`.
//!
//! Every element of a Sturmian hull decomposes uniquely into `s_n` and
//! `s_{n−1}` blocks, the `s_{n−1}` blocks being isolated and the `s_n` blocks
//! occurring in runs of `a_{n+1}` or `a_{n+1} + 1`. On a finite window the
//! decomposition is recovered by backtracking from every possible anchor
//! offset below `q_n`; the run constraints prune wrong branches within a few
//! blocks.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::symbolic::contfrac::ContinuedFraction;
use crate::symbolic::sturmian::sturmian_blocks;
use crate::symbolic::word::Word;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum BlockKind {
    /// `s_n`
    Long,
    /// `s_{n−1}`
    Short,
}

/// A maximal run of equal blocks.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BlockRun {
    pub kind: BlockKind,
    /// 1-based position of the first symbol of the run.
    pub start: usize,
    pub multiplicity: usize,
    /// Bounded on both sides by blocks of the other kind (not truncated by the
    /// window edges).
    pub interior: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PartitionView {
    pub level: usize,
    pub long_len: usize,
    pub short_len: usize,
    /// Length of the partial block fragment before the first full block.
    pub head: usize,
    /// Length of the partial block fragment after the last full block.
    pub tail: usize,
    pub runs: Vec<BlockRun>,
}

impl PartitionView {
    pub fn block_count(&self) -> usize {
        self.runs.iter().map(|r| r.multiplicity).sum()
    }

    /// Iterates over full blocks as `(kind, 1-based start)`.
    pub fn blocks(&self) -> impl Iterator<Item = (BlockKind, usize)> + '_ {
        self.runs.iter().flat_map(move |r| {
            let len = match r.kind {
                BlockKind::Long => self.long_len,
                BlockKind::Short => self.short_len,
            };
            (0..r.multiplicity).map(move |i| (r.kind, r.start + i * len))
        })
    }
}

struct Frame {
    pos: usize,
    alt: u8,
}

/// Computes the `n`-partition of `w` (`n ≥ 1`, depth of `cf` at least `n + 1`).
pub fn n_partition(w: &Word, cf: &ContinuedFraction, n: usize) -> Result<PartitionView> {
    if n == 0 || n + 1 > cf.depth() {
        return Err(Error::Range(format!("partition level {n} needs 1 ≤ n and depth ≥ {}", n + 1)));
    }
    let blocks = sturmian_blocks(cf, n as i64)?;
    let long = blocks[n + 1].as_bytes();
    let short = blocks[n].as_bytes();
    let a_next = cf.a(n + 1) as usize;
    let s = w.as_bytes();
    if s.len() < long.len() + short.len() {
        return Err(Error::Precondition(format!(
            "window of length {} cannot hold two blocks of level {n}",
            s.len()
        )));
    }

    for head in 0..long.len().min(s.len()) {
        if head > 0 && !(long.ends_with(&s[..head]) || short.ends_with(&s[..head])) {
            continue;
        }
        if let Some((kinds, tail)) = tile(s, head, long, short, a_next) {
            let view = assemble(n, long.len(), short.len(), head, tail, &kinds);
            if view.block_count() >= 2 {
                return Ok(view);
            }
        }
    }
    Err(Error::Consistency(format!(
        "no tiling by s_{n} and s_{} satisfies the run constraints",
        n as i64 - 1
    )))
}

fn admissible(chosen: &[BlockKind], next: BlockKind, a_next: usize) -> bool {
    let run = chosen.iter().rev().take_while(|&&k| k == BlockKind::Long).count();
    match next {
        BlockKind::Long => run < a_next + 1,
        BlockKind::Short => {
            if chosen.last() == Some(&BlockKind::Short) {
                return false;
            }
            // a Long run enclosed by two Short blocks must be complete
            let enclosed = chosen.len() > run;
            !enclosed || run >= a_next
        }
    }
}

fn tile(
    s: &[u8],
    head: usize,
    long: &[u8],
    short: &[u8],
    a_next: usize,
) -> Option<(Vec<BlockKind>, usize)> {
    let mut frames = vec![Frame { pos: head, alt: 0 }];
    let mut chosen: Vec<BlockKind> = Vec::new();
    if head == s.len() {
        return Some((chosen, 0));
    }
    while let Some(frame) = frames.last_mut() {
        let (pos, alt) = (frame.pos, frame.alt);
        frame.alt += 1;
        match alt {
            0 | 1 => {
                let (kind, block) = if alt == 0 { (BlockKind::Long, long) } else { (BlockKind::Short, short) };
                let end = pos + block.len();
                if end <= s.len() && &s[pos..end] == block && admissible(&chosen, kind, a_next) {
                    chosen.push(kind);
                    if end == s.len() {
                        return Some((chosen, 0));
                    }
                    frames.push(Frame { pos: end, alt: 0 });
                }
            }
            2 => {
                let rest = &s[pos..];
                let fits = |b: &[u8]| rest.len() < b.len() && b.starts_with(rest);
                if fits(long) || fits(short) {
                    return Some((chosen, rest.len()));
                }
            }
            _ => {
                frames.pop();
                if !frames.is_empty() {
                    chosen.pop();
                }
            }
        }
    }
    None
}

fn assemble(level: usize, long_len: usize, short_len: usize, head: usize, tail: usize, kinds: &[BlockKind]) -> PartitionView {
    let mut runs: Vec<BlockRun> = Vec::new();
    let mut pos = head + 1;
    for &k in kinds {
        match runs.last_mut() {
            Some(r) if r.kind == k => r.multiplicity += 1,
            _ => runs.push(BlockRun { kind: k, start: pos, multiplicity: 1, interior: false }),
        }
        pos += if k == BlockKind::Long { long_len } else { short_len };
    }
    let last = runs.len().saturating_sub(1);
    for r in runs.iter_mut().take(last).skip(1) {
        r.interior = true;
    }
    PartitionView { level, long_len, short_len, head, tail, runs }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::symbolic::contfrac::{continued_fraction, AlphaSpec};
    use crate::symbolic::sturmian::{characteristic_prefix, sturmian_block};

    fn reassemble(view: &PartitionView, cf: &ContinuedFraction) -> Word {
        let long = sturmian_block(cf, view.level as i64).unwrap();
        let short = sturmian_block(cf, view.level as i64 - 1).unwrap();
        let mut out = Word::new();
        for (kind, _) in view.blocks() {
            out.push_word(if kind == BlockKind::Long { &long } else { &short });
        }
        out
    }

    #[test]
    fn s5_partitions_into_s3_s2_s3() {
        let cf = continued_fraction(&AlphaSpec::golden(), 10).unwrap();
        let s5 = sturmian_block(&cf, 5).unwrap();
        let view = n_partition(&s5, &cf, 3).unwrap();
        let kinds: Vec<_> = view.blocks().map(|(k, _)| k).collect();
        assert_eq!(kinds, [BlockKind::Long, BlockKind::Short, BlockKind::Long]);
        assert_eq!((view.head, view.tail), (0, 0));
    }

    #[test]
    fn golden_prefix_run_multiplicities() {
        let cf = continued_fraction(&AlphaSpec::golden(), 30).unwrap();
        let c = characteristic_prefix(&cf, 10_000).unwrap();
        let view = n_partition(&c, &cf, 4).unwrap();
        assert_eq!(view.head, 0);
        for r in view.runs.iter().filter(|r| r.interior) {
            match r.kind {
                BlockKind::Long => assert!((1..=2).contains(&r.multiplicity)),
                BlockKind::Short => assert_eq!(r.multiplicity, 1),
            }
        }
        let inner = c.slice(view.head, c.len() - view.head - view.tail);
        assert_eq!(reassemble(&view, &cf), inner);
    }

    #[test]
    fn shifted_windows_tile() {
        let cf = continued_fraction(&AlphaSpec::periodic(&[1, 2]), 30).unwrap();
        let c = characteristic_prefix(&cf, 6000).unwrap();
        for n in 1..=6 {
            for shift in [1, 7, 33, 250] {
                let w = c.slice(shift, 3000);
                let view = n_partition(&w, &cf, n).unwrap();
                let inner = w.slice(view.head, w.len() - view.head - view.tail);
                assert_eq!(reassemble(&view, &cf), inner, "n={n} shift={shift}");
                let a = cf.a(n + 1) as usize;
                for r in view.runs.iter().filter(|r| r.interior && r.kind == BlockKind::Long) {
                    assert!(r.multiplicity == a || r.multiplicity == a + 1);
                }
            }
        }
    }

    #[test]
    fn non_sturmian_word_is_rejected() {
        let cf = continued_fraction(&AlphaSpec::golden(), 10).unwrap();
        assert!(matches!(n_partition(&Word::from("111"), &cf, 1), Err(Error::Consistency(_))));
        assert!(matches!(n_partition(&Word::from("1"), &cf, 1), Err(Error::Precondition(_))));
    }
}

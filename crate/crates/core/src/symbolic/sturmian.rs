//! Circle-map codings and the hierarchical Sturmian blocks `s_n`.

use std::ops::RangeInclusive;

use crate::error::{Error, Result};
use crate::scalar::Real;
use crate::symbolic::contfrac::ContinuedFraction;
use crate::symbolic::word::Word;

/// Symbol at site `n`: `1` if `nα + θ mod 1 ∈ [1 − β, 1)`, else `0`.
pub fn circle_map_symbol<T: Real>(alpha: T, beta: T, theta: T, n: i64) -> u8 {
    let x = T::from_i64(n).expect("site representable") * alpha + theta;
    let frac = x - x.floor();
    if frac >= T::one() - beta && frac < T::one() {
        b'1'
    } else {
        b'0'
    }
}

/// The coding `v_{α,β,θ}(n)` over the given range of sites.
pub fn circle_map_word<T: Real>(alpha: T, beta: T, theta: T, range: RangeInclusive<i64>) -> Word {
    range.map(|n| circle_map_symbol(alpha, beta, theta, n)).collect()
}

/// `s_n` for `n ≥ −1`: `s_{−1} = 1`, `s_0 = 0`, `s_1 = s_0^{a_1 − 1} s_{−1}`,
/// `s_n = s_{n−1}^{a_n} s_{n−2}`. Its length is `q_n` for `n ≥ 0`.
pub fn sturmian_block(cf: &ContinuedFraction, n: i64) -> Result<Word> {
    let mut blocks = sturmian_blocks(cf, n)?;
    Ok(blocks.pop().expect("nonempty"))
}

/// `[s_{−1}, s_0, …, s_n]`.
pub fn sturmian_blocks(cf: &ContinuedFraction, n: i64) -> Result<Vec<Word>> {
    if n < -1 || n > cf.depth() as i64 {
        return Err(Error::Range(format!("block index {n} outside -1..={}", cf.depth())));
    }
    let mut blocks = vec![Word::from("1"), Word::from("0")];
    for k in 1..=n.max(0) as usize {
        let (prev, prev2) = (blocks[k].as_bytes(), blocks[k - 1].as_bytes());
        let a = cf.a(k) as usize - usize::from(k == 1);
        let mut next = Vec::with_capacity(a * prev.len() + prev2.len());
        for _ in 0..a {
            next.extend_from_slice(prev);
        }
        next.extend_from_slice(prev2);
        blocks.push(Word::from_bytes(next));
    }
    blocks.truncate((n + 2) as usize);
    Ok(blocks)
}

/// Checks `s_n s_{n+1} = s_{n+1} s_{n−1}^{a_n − 1} s_{n−2} s_{n−1}` by exact
/// string comparison.
pub fn check_block_identity(cf: &ContinuedFraction, n: usize) -> Result<bool> {
    if n < 2 {
        return Err(Error::Range(format!("block identity needs n ≥ 2, got {n}")));
    }
    Ok(check_block_identities(cf, n)?[n - 2])
}

/// [`check_block_identity`] for every `n` in `2..=n_max`, building the blocks once.
pub fn check_block_identities(cf: &ContinuedFraction, n_max: usize) -> Result<Vec<bool>> {
    if n_max + 1 > cf.depth() {
        return Err(Error::Range(format!("block identity at n = {n_max} needs depth {}", n_max + 1)));
    }
    let b = sturmian_blocks(cf, n_max as i64 + 1)?;
    // b[k + 1] = s_k
    let s = |k: usize| b[k + 1].as_bytes();
    Ok((2..=n_max)
        .map(|n| {
            let lhs = [s(n), s(n + 1)];
            let mut rhs = vec![s(n + 1)];
            rhs.extend(std::iter::repeat_n(s(n - 1), cf.a(n) as usize - 1));
            rhs.extend([s(n - 2), s(n - 1)]);
            segments_equal(&lhs, &rhs)
        })
        .collect())
}

/// Compares two concatenations without building them.
fn segments_equal(a: &[&[u8]], b: &[&[u8]]) -> bool {
    if a.iter().map(|x| x.len()).sum::<usize>() != b.iter().map(|x| x.len()).sum::<usize>() {
        return false;
    }
    let (mut ia, mut ib) = (a.iter().copied().filter(|x| !x.is_empty()), b.iter().copied().filter(|x| !x.is_empty()));
    let (mut x, mut y): (&[u8], &[u8]) = (&[], &[]);
    loop {
        if x.is_empty() {
            match ia.next() {
                Some(next) => x = next,
                None => return true,
            }
        }
        if y.is_empty() {
            y = ib.next().expect("equal total lengths");
        }
        let k = x.len().min(y.len());
        if x[..k] != y[..k] {
            return false;
        }
        x = &x[k..];
        y = &y[k..];
    }
}

/// Prefix of length `len` of the characteristic word `c_α = v_{α,0}(1) v_{α,0}(2) …`,
/// generated combinatorially from the blocks `s_n`.
pub fn characteristic_prefix(cf: &ContinuedFraction, len: usize) -> Result<Word> {
    let n = (0..=cf.depth())
        .find(|&n| cf.q(n) as usize >= len)
        .ok_or_else(|| Error::Range(format!("depth {} too small for length {len}", cf.depth())))?;
    Ok(sturmian_block(cf, n as i64)?.prefix(len))
}

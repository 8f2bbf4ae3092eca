//! Exact continued-fraction expansions of rotation numbers.
//!
//! Only exact inputs are accepted: quadratic irrationals `(p + q√d)/r` and
//! explicit (eventually periodic) lists of partial quotients. Rationals are
//! rejected since they do not define an aperiodic rotation, and decimals are
//! rejected because their expansion is meaningless beyond ~15 terms.

use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use crate::error::{Error, Result};

/// An exactly specified rotation number in `(0, 1)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum AlphaSpec {
    /// `(p + q√d) / r`.
    Quadratic { p: i64, q: i64, d: i64, r: i64 },
    /// `[0; prefix…, (period…)]`; an empty period means a finite list.
    Quotients { prefix: Vec<u64>, period: Vec<u64> },
    /// `num / den`; always rejected by [`continued_fraction`].
    Rational { num: i64, den: i64 },
}

impl AlphaSpec {
    /// `(√5 − 1)/2 = [0; 1, 1, 1, …]`.
    pub fn golden() -> Self {
        AlphaSpec::Quadratic { p: -1, q: 1, d: 5, r: 2 }
    }

    /// `√2 − 1 = [0; 2, 2, 2, …]`.
    pub fn silver() -> Self {
        AlphaSpec::Quadratic { p: -1, q: 1, d: 2, r: 1 }
    }

    pub fn periodic(period: &[u64]) -> Self {
        AlphaSpec::Quotients { prefix: Vec::new(), period: period.to_vec() }
    }

    pub fn quotients(list: &[u64]) -> Self {
        AlphaSpec::Quotients { prefix: list.to_vec(), period: Vec::new() }
    }

    /// Whether `a_n ≥ k` for infinitely many `n`; `None` for finite lists.
    pub fn limsup_at_least(&self, k: u64) -> Option<bool> {
        match self {
            AlphaSpec::Quotients { period, .. } if period.is_empty() => None,
            AlphaSpec::Quotients { period, .. } => Some(period.iter().any(|&a| a >= k)),
            AlphaSpec::Quadratic { .. } => {
                // quadratic irrationals are eventually periodic; a long window
                // past the pre-period shows the periodic part
                let cf = continued_fraction(self, 64).ok()?;
                Some(cf.quotients[32..].iter().any(|&a| a >= k))
            }
            AlphaSpec::Rational { .. } => None,
        }
    }
}

impl FromStr for AlphaSpec {
    type Err = Error;

    /// Grammar: `golden`, `silver`, `quad:p,q,d,r`, `cf:a1,a2,…[,(b1,…)]`, `p/q`.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let bad = || Error::InexactAlpha(s.to_string());
        match s {
            "golden" => return Ok(Self::golden()),
            "silver" => return Ok(Self::silver()),
            _ => {}
        }
        if let Some(rest) = s.strip_prefix("quad:") {
            let v: Vec<i64> = rest
                .split(',')
                .map(|t| t.trim().parse::<i64>())
                .collect::<std::result::Result<_, _>>()
                .map_err(|_| bad())?;
            if v.len() != 4 {
                return Err(bad());
            }
            return Ok(AlphaSpec::Quadratic { p: v[0], q: v[1], d: v[2], r: v[3] });
        }
        if let Some(rest) = s.strip_prefix("cf:") {
            let (head, period) = match rest.find('(') {
                Some(i) => {
                    let tail = rest[i + 1..].strip_suffix(')').ok_or_else(bad)?;
                    (&rest[..i], tail)
                }
                None => (rest, ""),
            };
            let parse_list = |t: &str| -> Result<Vec<u64>> {
                t.split(',')
                    .map(str::trim)
                    .filter(|x| !x.is_empty())
                    .map(|x| match x.parse::<u64>() {
                        Ok(a) if a >= 1 => Ok(a),
                        _ => Err(bad()),
                    })
                    .collect()
            };
            let prefix = parse_list(head)?;
            let period = parse_list(period)?;
            if prefix.is_empty() && period.is_empty() {
                return Err(bad());
            }
            return Ok(AlphaSpec::Quotients { prefix, period });
        }
        if let Some((n, d)) = s.split_once('/') {
            let num = n.trim().parse::<i64>().map_err(|_| bad())?;
            let den = d.trim().parse::<i64>().map_err(|_| bad())?;
            if den == 0 {
                return Err(bad());
            }
            return Ok(AlphaSpec::Rational { num, den });
        }
        Err(bad())
    }
}

impl fmt::Display for AlphaSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            AlphaSpec::Quadratic { p, q, d, r } => write!(f, "quad:{p},{q},{d},{r}"),
            AlphaSpec::Quotients { prefix, period } => {
                let join = |v: &[u64]| v.iter().map(u64::to_string).collect::<Vec<_>>().join(",");
                write!(f, "cf:{}", join(prefix))?;
                if !period.is_empty() {
                    if !prefix.is_empty() {
                        f.write_str(",")?;
                    }
                    write!(f, "({})", join(period))?;
                }
                Ok(())
            }
            AlphaSpec::Rational { num, den } => write!(f, "{num}/{den}"),
        }
    }
}

/// Partial quotients `a_1 … a_N` of `α = [0; a_1, a_2, …]` and the
/// convergents `p_n / q_n`, `0 ≤ n ≤ N`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ContinuedFraction {
    quotients: Vec<u64>,
    p: Vec<u64>,
    q: Vec<u64>,
    approx: f64,
}

impl ContinuedFraction {
    /// Builds convergents from `a_1 … a_N`, using `p_0 = 0, p_1 = 1` and
    /// `q_0 = 1, q_1 = a_1`.
    pub fn from_quotients(quotients: Vec<u64>, approx: Option<f64>) -> Result<Self> {
        if quotients.is_empty() || quotients.contains(&0) {
            return Err(Error::Precondition("partial quotients must be positive and nonempty".into()));
        }
        let mut p = vec![0u64, 1];
        let mut q = vec![1u64, quotients[0]];
        for (i, &a) in quotients.iter().enumerate().skip(1) {
            let n = i + 1;
            let next = |v: &[u64]| a.checked_mul(v[n - 1]).and_then(|x| x.checked_add(v[n - 2]));
            p.push(next(&p).ok_or(Error::Overflow(n))?);
            q.push(next(&q).ok_or(Error::Overflow(n))?);
        }
        let n = quotients.len();
        let approx = approx.unwrap_or(p[n] as f64 / q[n] as f64);
        Ok(Self { quotients, p, q, approx })
    }

    /// `N`, the number of partial quotients available.
    pub fn depth(&self) -> usize {
        self.quotients.len()
    }

    /// `a_n`, `1 ≤ n ≤ N`.
    pub fn a(&self, n: usize) -> u64 {
        self.quotients[n - 1]
    }

    pub fn quotients(&self) -> &[u64] {
        &self.quotients
    }

    /// `q_n`, `0 ≤ n ≤ N`.
    pub fn q(&self, n: usize) -> u64 {
        self.q[n]
    }

    /// `p_n`, `0 ≤ n ≤ N`.
    pub fn p(&self, n: usize) -> u64 {
        self.p[n]
    }

    pub fn denominators(&self) -> &[u64] {
        &self.q
    }

    pub fn numerators(&self) -> &[u64] {
        &self.p
    }

    /// Floating-point value of the represented number.
    pub fn alpha(&self) -> f64 {
        self.approx
    }

    /// Truncation to the first `depth` quotients.
    pub fn truncated(&self, depth: usize) -> Result<Self> {
        if depth == 0 || depth > self.depth() {
            return Err(Error::Range(format!("depth {depth} not in 1..={}", self.depth())));
        }
        Self::from_quotients(self.quotients[..depth].to_vec(), Some(self.approx))
    }
}

/// Expands an exact rotation number to `depth` partial quotients.
pub fn continued_fraction(spec: &AlphaSpec, depth: usize) -> Result<ContinuedFraction> {
    if depth == 0 {
        return Err(Error::Range("depth must be at least 1".into()));
    }
    match spec {
        AlphaSpec::Rational { num, den } => Err(Error::RationalAlpha { num: *num, den: *den }),
        AlphaSpec::Quotients { prefix, period } => {
            if period.is_empty() && depth > prefix.len() {
                return Err(Error::Range(format!(
                    "finite quotient list of length {} cannot supply depth {depth}",
                    prefix.len()
                )));
            }
            let digit = |i: usize| {
                if i < prefix.len() {
                    prefix[i]
                } else {
                    period[(i - prefix.len()) % period.len()]
                }
            };
            let quotients: Vec<u64> = (0..depth).map(digit).collect();
            let approx = if period.is_empty() {
                None
            } else {
                // evaluate a long truncation from the tail; 80 terms resolve f64
                let mut x = 0.0f64;
                for i in (0..depth.max(80)).rev() {
                    x = 1.0 / (digit(i) as f64 + x);
                }
                Some(x)
            };
            ContinuedFraction::from_quotients(quotients, approx)
        }
        AlphaSpec::Quadratic { p, q, d, r } => {
            let quotients = quadratic_quotients(*p, *q, *d, *r, depth)?;
            let approx = (*p as f64 + *q as f64 * (*d as f64).sqrt()) / *r as f64;
            ContinuedFraction::from_quotients(quotients, Some(approx))
        }
    }
}

fn isqrt(n: i128) -> i128 {
    if n < 2 {
        return n;
    }
    let mut x = (n as f64).sqrt() as i128;
    while x * x > n {
        x -= 1;
    }
    while (x + 1) * (x + 1) <= n {
        x += 1;
    }
    x
}

fn quadratic_quotients(p: i64, q: i64, d: i64, r: i64, depth: usize) -> Result<Vec<u64>> {
    if r == 0 || d < 0 {
        return Err(Error::InexactAlpha(format!("quad:{p},{q},{d},{r}")));
    }
    let (mut p, mut q, d, mut r) = (p as i128, q as i128, d as i128, r as i128);
    let s = isqrt(d);
    if q == 0 || s * s == d {
        // (p + q·s)/r is rational
        let num = p + q * s;
        let g = gcd(num.abs(), r.abs()).max(1);
        let sign = if r < 0 { -1 } else { 1 };
        return Err(Error::RationalAlpha {
            num: (sign * num / g) as i64,
            den: (sign * r / g) as i64,
        });
    }
    if q < 0 {
        p = -p;
        q = -q;
        r = -r;
    }
    // x = (P + √D)/Q with Q | D − P²
    let ovf = || Error::Overflow(0);
    let mut big_d = q.checked_mul(q).and_then(|x| x.checked_mul(d)).ok_or_else(ovf)?;
    let mut big_p = p;
    let mut big_q = r;
    if (big_d - big_p * big_p) % big_q != 0 {
        big_p = big_p.checked_mul(big_q.abs()).ok_or_else(ovf)?;
        big_d = big_d.checked_mul(big_q * big_q).ok_or_else(ovf)?;
        big_q = big_q.checked_mul(big_q.abs()).ok_or_else(ovf)?;
    }
    let root = isqrt(big_d);
    let floor_div = |a: i128, b: i128| a.div_euclid(b) - if b < 0 && a.rem_euclid(b) != 0 { 1 } else { 0 };
    let term = |pp: i128, qq: i128| {
        if qq > 0 {
            floor_div(pp + root, qq)
        } else {
            floor_div(pp + root + 1, qq)
        }
    };
    let a0 = term(big_p, big_q);
    if a0 != 0 {
        let value = (p as f64 + q as f64 * (d as f64).sqrt()) / r as f64;
        return Err(Error::Range(format!("rotation number {value} not in (0, 1)")));
    }
    let mut quotients = Vec::with_capacity(depth);
    let mut a = a0;
    for k in 0..depth {
        let np = a * big_q - big_p;
        let nq = (big_d - np * np) / big_q;
        big_p = np;
        big_q = nq;
        a = term(big_p, big_q);
        if a <= 0 {
            return Err(Error::Overflow(k + 1));
        }
        quotients.push(a as u64);
    }
    Ok(quotients)
}

fn gcd(mut a: i128, mut b: i128) -> i128 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn golden_mean_denominators() {
        let cf = continued_fraction(&AlphaSpec::golden(), 6).unwrap();
        assert_eq!(cf.quotients(), &[1, 1, 1, 1, 1, 1]);
        assert_eq!(&cf.denominators()[..6], &[1, 1, 2, 3, 5, 8]);
        assert_eq!(cf.q(6), 13);
        assert!((cf.alpha() - (5f64.sqrt() - 1.0) / 2.0).abs() < 1e-15);
    }

    #[test]
    fn explicit_quotients() {
        let cf = continued_fraction(&AlphaSpec::quotients(&[1, 2, 1, 2]), 4).unwrap();
        assert_eq!(&cf.denominators()[..4], &[1, 1, 3, 4]);
        assert_eq!(cf.q(4), 11);
        assert!(continued_fraction(&AlphaSpec::quotients(&[1, 2]), 3).is_err());
    }

    #[test]
    fn silver_and_sqrt_expansions() {
        let cf = continued_fraction(&AlphaSpec::silver(), 8).unwrap();
        assert!(cf.quotients().iter().all(|&a| a == 2));
        // √3 − 1 = [0; 1, 2, 1, 2, …]
        let cf = continued_fraction(&"quad:-1,1,3,1".parse().unwrap(), 8).unwrap();
        assert_eq!(cf.quotients(), &[1, 2, 1, 2, 1, 2, 1, 2]);
        // (√7 − 2)/3 against its floating-point expansion
        let cf = continued_fraction(&"quad:-2,1,7,3".parse().unwrap(), 10).unwrap();
        let mut x = (7f64.sqrt() - 2.0) / 3.0;
        for &a in cf.quotients() {
            let inv = 1.0 / x;
            assert_eq!(inv.floor() as u64, a);
            x = inv - inv.floor();
        }
    }

    #[test]
    fn rationals_are_rejected() {
        let spec: AlphaSpec = "5/8".parse().unwrap();
        assert_eq!(continued_fraction(&spec, 3), Err(Error::RationalAlpha { num: 5, den: 8 }));
        assert!(matches!(
            continued_fraction(&"quad:1,1,4,4".parse().unwrap(), 3),
            Err(Error::RationalAlpha { num: 3, den: 4 })
        ));
    }

    #[test]
    fn decimals_are_rejected() {
        assert!(matches!("0.618".parse::<AlphaSpec>(), Err(Error::InexactAlpha(_))));
        assert!(matches!("cf:".parse::<AlphaSpec>(), Err(Error::InexactAlpha(_))));
        assert!(matches!("cf:1,0".parse::<AlphaSpec>(), Err(Error::InexactAlpha(_))));
    }

    #[test]
    fn periodic_grammar() {
        let spec: AlphaSpec = "cf:3,(1,2)".parse().unwrap();
        let cf = continued_fraction(&spec, 5).unwrap();
        assert_eq!(cf.quotients(), &[3, 1, 2, 1, 2]);
        assert_eq!(spec.to_string(), "cf:3,(1,2)");
        assert_eq!(spec.limsup_at_least(2), Some(true));
        assert_eq!(spec.limsup_at_least(3), Some(false));
        assert_eq!(AlphaSpec::golden().limsup_at_least(2), Some(false));
    }

    #[test]
    fn out_of_unit_interval() {
        // (1 + √5)/2 > 1
        assert!(continued_fraction(&"quad:1,1,5,2".parse().unwrap(), 3).is_err());
    }

    #[test]
    fn convergent_invariants() {
        for spec in [AlphaSpec::golden(), AlphaSpec::silver(), AlphaSpec::periodic(&[1, 2]), AlphaSpec::periodic(&[3])] {
            let cf = continued_fraction(&spec, 20).unwrap();
            let alpha = cf.alpha();
            for n in 1..=20 {
                let (p, q) = (cf.p(n) as i128, cf.q(n) as i128);
                assert_eq!(gcd(p, q), 1);
                // p_n q_{n-1} - p_{n-1} q_n = (-1)^{n+1}
                let det = p * cf.q(n - 1) as i128 - cf.p(n - 1) as i128 * q;
                assert_eq!(det, if n % 2 == 1 { 1 } else { -1 });
                let err = p as f64 / q as f64 - alpha;
                if n < 15 {
                    // odd convergents above, even below
                    assert_eq!(err > 0.0, n % 2 == 1, "{spec} n={n}");
                }
            }
        }
    }

    #[test]
    fn overflow_is_reported() {
        assert!(matches!(continued_fraction(&AlphaSpec::golden(), 200), Err(Error::Overflow(_))));
    }
}

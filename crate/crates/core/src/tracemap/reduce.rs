use std::collections::{BTreeMap, HashMap};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::operator::Mat2;
use crate::scalar::{lit, Real};
use crate::symbolic::{SubstitutionRule, Word};

/// Traces `(tr A, tr B, tr AB)` on the enlarged alphabet `{a, b, ab}`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TraceState2<T> {
    pub t_a: T,
    pub t_b: T,
    pub t_ab: T,
}

impl<T: Real> TraceState2<T> {
    pub fn new(t_a: T, t_b: T, t_ab: T) -> Self {
        Self { t_a, t_b, t_ab }
    }

    pub fn from_matrices(a: &Mat2<T>, b: &Mat2<T>) -> Self {
        Self { t_a: a.trace(), t_b: b.trace(), t_ab: (*a * *b).trace() }
    }

    pub fn is_finite(&self) -> bool {
        self.t_a.is_finite() && self.t_b.is_finite() && self.t_ab.is_finite()
    }
}

/// Integer polynomial in `x = tr A`, `y = tr B`, `z = tr AB`.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct TracePoly {
    terms: BTreeMap<[u32; 3], i128>,
}

impl TracePoly {
    fn constant(c: i128) -> Self {
        let mut p = Self::default();
        p.add_term([0, 0, 0], c);
        p
    }

    fn var(i: usize) -> Self {
        let mut e = [0; 3];
        e[i] = 1;
        let mut p = Self::default();
        p.add_term(e, 1);
        p
    }

    fn add_term(&mut self, e: [u32; 3], c: i128) {
        let entry = self.terms.entry(e).or_insert(0);
        *entry += c;
        if *entry == 0 {
            self.terms.remove(&e);
        }
    }

    fn add(&self, o: &Self, sign: i128) -> Self {
        let mut r = self.clone();
        for (&e, &c) in &o.terms {
            r.add_term(e, sign * c);
        }
        r
    }

    fn mul(&self, o: &Self) -> Self {
        let mut r = Self::default();
        for (e1, c1) in &self.terms {
            for (e2, c2) in &o.terms {
                r.add_term([e1[0] + e2[0], e1[1] + e2[1], e1[2] + e2[2]], c1 * c2);
            }
        }
        r
    }

    pub fn eval<T: Real>(&self, x: T, y: T, z: T) -> T {
        self.terms.iter().fold(T::zero(), |acc, (e, &c)| {
            acc + T::from_i128(c).unwrap() * x.powi(e[0] as i32) * y.powi(e[1] as i32) * z.powi(e[2] as i32)
        })
    }

    pub fn degree(&self) -> u32 {
        self.terms.keys().map(|e| e.iter().sum()).max().unwrap_or(0)
    }
}

impl fmt::Display for TracePoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (e, &c) in self.terms.iter().rev() {
            let monomial: String = e
                .iter()
                .zip(["x", "y", "z"])
                .filter(|(k, _)| **k > 0)
                .map(|(&k, v)| if k == 1 { v.to_string() } else { format!("{v}^{k}") })
                .collect();
            let (sign, mag) = if c < 0 { ("-", -c) } else { ("+", c) };
            if first {
                if c < 0 {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {sign} ")?;
            }
            first = false;
            match (mag, monomial.is_empty()) {
                (_, true) => write!(f, "{mag}")?,
                (1, false) => write!(f, "{monomial}")?,
                _ => write!(f, "{mag}{monomial}")?,
            }
        }
        Ok(())
    }
}

/// Lexicographically least rotation.
fn canonical_rotation(w: &[u8]) -> Vec<u8> {
    (0..w.len().max(1))
        .map(|r| w[r.min(w.len())..].iter().chain(&w[..r.min(w.len())]).copied().collect::<Vec<u8>>())
        .min()
        .unwrap_or_default()
}

/// Reduces traces of cyclic words in letters `0, 1, …` to polynomials in
/// `tr(0), tr(1), tr(01)` using `tr(LNLO) = tr(LN)tr(LO) + tr(NO) − tr(N)tr(O)`
/// (with `N = ∅` this is the Cayley–Hamilton identity `M² = tr(M)M − I`).
struct Reducer<'a> {
    memo: HashMap<Vec<u8>, TracePoly>,
    symbols: &'a [u8],
}

impl Reducer<'_> {
    fn trace(&mut self, w: &[u8]) -> Result<TracePoly> {
        let key = canonical_rotation(w);
        if let Some(p) = self.memo.get(&key) {
            return Ok(p.clone());
        }
        let p = self.reduce(&key)?;
        self.memo.insert(key, p.clone());
        Ok(p)
    }

    fn reduce(&mut self, w: &[u8]) -> Result<TracePoly> {
        let repeated = (0..w.len()).find_map(|i| w[i + 1..].iter().position(|&c| c == w[i]).map(|j| (i, i + 1 + j)));
        let Some((i, j)) = repeated else {
            return match w {
                [] => Ok(TracePoly::constant(2)),
                [0] => Ok(TracePoly::var(0)),
                [1] => Ok(TracePoly::var(1)),
                [0, 1] | [1, 0] => Ok(TracePoly::var(2)),
                _ => Err(Error::UnsupportedSubstitution {
                    residue: format!("tr({})", w.iter().map(|&c| self.symbols[c as usize] as char).collect::<String>()),
                }),
            };
        };
        // rotate so that w = L N L O
        let rot: Vec<u8> = w[i..].iter().chain(&w[..i]).copied().collect();
        let k = j - i;
        let l = &rot[..1];
        let n = &rot[1..k];
        let o = &rot[k + 1..];
        let ln: Vec<u8> = l.iter().chain(n).copied().collect();
        let lo: Vec<u8> = l.iter().chain(o).copied().collect();
        let no: Vec<u8> = n.iter().chain(o).copied().collect();
        let t_ln = self.trace(&ln)?;
        let t_lo = self.trace(&lo)?;
        let t_no = self.trace(&no)?;
        let t_n = self.trace(n)?;
        let t_o = self.trace(o)?;
        Ok(t_ln.mul(&t_lo).add(&t_no, 1).add(&t_n.mul(&t_o), -1))
    }
}

/// The polynomial trace map of a two-letter substitution, derived once by
/// symbolic reduction.
#[derive(Debug, Clone, PartialEq)]
pub struct TraceMap {
    rule: SubstitutionRule,
    polys: [TracePoly; 3],
}

impl TraceMap {
    pub fn new(rule: &SubstitutionRule) -> Result<Self> {
        let symbols = rule.alphabet().symbols();
        let index = |w: &Word| -> Vec<u8> {
            // M_E(S(c)) multiplies the letter matrices in reverse order
            w.iter().rev().map(|s| rule.alphabet().index_of(s).unwrap() as u8).collect()
        };
        let mut reducer = Reducer { memo: HashMap::new(), symbols };
        if symbols.len() != 2 {
            let residue = (2..symbols.len()).map(|i| format!("tr({})", symbols[i] as char)).collect::<Vec<_>>();
            return Err(Error::UnsupportedSubstitution { residue: residue.join(", ") });
        }
        let ia = index(rule.image(symbols[0])?);
        let ib = index(rule.image(symbols[1])?);
        let iab: Vec<u8> = ia.iter().chain(&ib).copied().collect();
        let polys = [reducer.trace(&ia)?, reducer.trace(&ib)?, reducer.trace(&iab)?];
        Ok(Self { rule: rule.clone(), polys })
    }

    pub fn rule(&self) -> &SubstitutionRule {
        &self.rule
    }

    /// Polynomials for `(tr A', tr B', tr A'B')` in the previous-level `x, y, z`.
    pub fn polynomials(&self) -> &[TracePoly; 3] {
        &self.polys
    }

    pub fn step<T: Real>(&self, s: TraceState2<T>) -> TraceState2<T> {
        let [pa, pb, pab] = &self.polys;
        TraceState2 {
            t_a: pa.eval(s.t_a, s.t_b, s.t_ab),
            t_b: pb.eval(s.t_a, s.t_b, s.t_ab),
            t_ab: pab.eval(s.t_a, s.t_b, s.t_ab),
        }
    }
}

/// Level-`n` traces from level-`(n−1)` traces for a two-letter substitution.
pub fn trace_triple_step<T: Real>(rule: &SubstitutionRule, s: TraceState2<T>) -> Result<TraceState2<T>> {
    Ok(TraceMap::new(rule)?.step(s))
}

fn require_unimodular<T: Real>(ms: &[&Mat2<T>]) -> Result<()> {
    if ms.iter().all(|m| m.is_unimodular(lit(1e-10))) {
        Ok(())
    } else {
        Err(Error::Precondition("trace identities need determinant-one matrices".into()))
    }
}

/// `|tr(MNMO) − tr(MN)tr(MO) − tr(NO) + tr(N)tr(O)|`.
pub fn trace_identity_check<T: Real>(m: &Mat2<T>, n: &Mat2<T>, o: &Mat2<T>) -> Result<T> {
    require_unimodular(&[m, n, o])?;
    let (m, n, o) = (*m, *n, *o);
    let lhs = (m * n * m * o).trace();
    let rhs = (m * n).trace() * (m * o).trace() + (n * o).trace() - n.trace() * o.trace();
    Ok((lhs - rhs).abs())
}

/// `‖M² − tr(M)M + I‖`.
pub fn square_identity_check<T: Real>(m: &Mat2<T>) -> Result<T> {
    require_unimodular(&[m])?;
    Ok((*m * *m - m.scale(m.trace()) + Mat2::identity()).norm())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::operator::{word_matrix, Coding};

    #[test]
    fn fibonacci_map() {
        let tm = TraceMap::new(&SubstitutionRule::fibonacci()).unwrap();
        let [a, b, ab] = tm.polynomials();
        assert_eq!(a.to_string(), "z");
        assert_eq!(b.to_string(), "x");
        assert_eq!(ab.to_string(), "xz - y");
    }

    #[test]
    fn multi_letter_rejected() {
        match TraceMap::new(&SubstitutionRule::rudin_shapiro()) {
            Err(Error::UnsupportedSubstitution { residue }) => assert!(residue.contains("tr(c)")),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn matches_direct_products() {
        let rules = [
            SubstitutionRule::fibonacci(),
            SubstitutionRule::period_doubling(),
            SubstitutionRule::thue_morse(),
            SubstitutionRule::binary_non_pisot(),
        ];
        let coding = Coding::<f64>::new(vec![(b'a', 0.0), (b'b', 1.3)]).unwrap();
        for rule in &rules {
            let tm = TraceMap::new(rule).unwrap();
            for &e in &[-1.7f64, 0.2, 0.9] {
                let wa = |n| rule.iterate(&Word::from("a"), n).unwrap();
                let wb = |n| rule.iterate(&Word::from("b"), n).unwrap();
                let ma = word_matrix(e, &wa(0), &coding).unwrap();
                let mb = word_matrix(e, &wb(0), &coding).unwrap();
                let mut s = TraceState2::from_matrices(&ma, &mb);
                for n in 1..=5 {
                    s = tm.step(s);
                    let da = word_matrix(e, &wa(n), &coding).unwrap();
                    let db = word_matrix(e, &wb(n), &coding).unwrap();
                    let d = TraceState2::from_matrices(&da, &db);
                    for (x, y) in [(s.t_a, d.t_a), (s.t_b, d.t_b), (s.t_ab, d.t_ab)] {
                        assert!((x - y).abs() <= 1e-9 * y.abs().max(1.0), "{rule} n={n}: {x} vs {y}");
                    }
                }
            }
        }
    }

    #[test]
    fn identity_checks() {
        let i: Mat2<f64> = Mat2::identity();
        assert_eq!(trace_identity_check(&i, &i, &i).unwrap(), 0.0);
        let m = Mat2::new(2.0, 1.0, 3.0, 2.0);
        let o = Mat2::new(0.5, -1.0, 1.0, 0.0);
        assert!(trace_identity_check(&m, &i, &o).unwrap() < 1e-12);
        assert!(square_identity_check(&m).unwrap() < 1e-12);
        assert!(trace_identity_check(&m, &Mat2::new(2.0, 0.0, 0.0, 1.0), &o).is_err());
    }
}

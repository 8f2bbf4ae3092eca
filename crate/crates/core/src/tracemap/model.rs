use crate::error::{Error, Result};
use crate::operator::{elementary_matrix, Coding, Mat2};
use crate::scalar::{lit, Real};
use crate::symbolic::{sturmian_blocks, ContinuedFraction, SubstitutionRule, Word};

use super::orbit::{clamped_trace, sturmian_matrices, TraceOrbit, TRACE_CLAMP};
use super::reduce::{TraceMap, TraceState2};

/// A hierarchy of periodic approximants whose level-`n` period word has
/// transfer-matrix trace `x_n(E)`.
pub trait TraceModel<T: Real>: Send + Sync {
    /// Highest level available.
    fn max_level(&self) -> usize;

    /// Period word at `level`.
    fn period_word(&self, level: usize) -> &Word;

    fn coding(&self) -> &Coding<T>;

    /// Trace from the model's recursion; may be non-finite far off the spectrum.
    fn raw_trace(&self, e: T, level: usize) -> T;

    /// Coupling used to label outputs.
    fn lambda(&self) -> T;

    fn period(&self, level: usize) -> usize {
        self.period_word(level).len()
    }

    /// Potential values `V(1..=q)` of one period.
    fn period_values(&self, level: usize) -> Vec<T> {
        let c = self.coding();
        self.period_word(level).iter().map(|s| c.value(s).unwrap()).collect()
    }

    /// Sign-correct trace with magnitude clamped at [`TRACE_CLAMP`]. Falls back
    /// to a renormalized product over the period when the recursion overflows.
    fn trace(&self, e: T, level: usize) -> T {
        let clamp = lit::<T>(TRACE_CLAMP);
        let x = self.raw_trace(e, level);
        if x.is_finite() && x.abs() <= clamp {
            return x;
        }
        let c = self.coding();
        let mut m = Mat2::identity();
        let mut log_scale = T::zero();
        for (k, s) in self.period_word(level).iter().enumerate() {
            m = elementary_matrix(e, c.value(s).unwrap()) * m;
            if k % 16 == 15 {
                let r = m.max_abs();
                m = m.scale(r.recip());
                log_scale += r.ln();
            }
        }
        let t = m.trace();
        if t == T::zero() {
            return t;
        }
        let log_t = t.abs().ln() + log_scale;
        if log_t > clamp.ln() {
            clamp.copysign(t)
        } else {
            log_t.exp().copysign(t)
        }
    }
}

/// Sturmian approximants `s_n` with coding `1 ↦ λ`, `0 ↦ 0`.
#[derive(Debug, Clone)]
pub struct SturmianModel<T> {
    cf: ContinuedFraction,
    lambda: T,
    coding: Coding<T>,
    /// `s_0 … s_max`
    blocks: Vec<Word>,
}

impl<T: Real> SturmianModel<T> {
    pub fn new(cf: &ContinuedFraction, lambda: T, max_level: usize) -> Result<Self> {
        if max_level > cf.depth() {
            return Err(Error::Precondition(format!(
                "level {max_level} exceeds continued fraction depth {}",
                cf.depth()
            )));
        }
        let blocks = sturmian_blocks(cf, max_level as i64)?.split_off(1);
        Ok(Self { cf: cf.clone(), lambda, coding: Coding::sturmian(lambda), blocks })
    }

    pub fn continued_fraction(&self) -> &ContinuedFraction {
        &self.cf
    }
}

impl<T: Real> TraceModel<T> for SturmianModel<T> {
    fn max_level(&self) -> usize {
        self.blocks.len() - 1
    }

    fn period_word(&self, level: usize) -> &Word {
        &self.blocks[level]
    }

    fn coding(&self) -> &Coding<T> {
        &self.coding
    }

    fn lambda(&self) -> T {
        self.lambda
    }

    fn raw_trace(&self, e: T, level: usize) -> T {
        let mats = sturmian_matrices(e, self.lambda, &self.cf, level);
        match mats.get(level + 1) {
            Some(m) if mats.len() == level + 2 => m.trace(),
            _ => T::nan(),
        }
    }
}

/// Substitution approximants `S^n(a)`; two-letter rules use the compiled trace
/// map, larger alphabets the direct product.
#[derive(Debug, Clone)]
pub struct SubstitutionModel<T> {
    rule: SubstitutionRule,
    coding: Coding<T>,
    lambda: T,
    trace_map: Option<TraceMap>,
    /// `S^0(a) … S^max(a)`
    words: Vec<Word>,
}

impl<T: Real> SubstitutionModel<T> {
    pub fn new(rule: &SubstitutionRule, coding: Coding<T>, lambda: T, max_level: usize) -> Result<Self> {
        for &s in rule.alphabet().symbols() {
            coding.value(s)?;
        }
        let seed = Word::from_bytes(vec![rule.alphabet().symbols()[0]]);
        let mut words = vec![seed];
        for _ in 0..max_level {
            let next = rule.apply(words.last().unwrap())?;
            words.push(next);
        }
        let trace_map = TraceMap::new(rule).ok();
        Ok(Self { rule: rule.clone(), coding, lambda, trace_map, words })
    }

    pub fn rule(&self) -> &SubstitutionRule {
        &self.rule
    }

    pub fn trace_map(&self) -> Option<&TraceMap> {
        self.trace_map.as_ref()
    }

    /// Level-0 state `(tr M(a), tr M(b), tr M(a)M(b))`.
    pub fn seed_state(&self, e: T) -> Option<TraceState2<T>> {
        let s = self.rule.alphabet().symbols();
        let ma = elementary_matrix(e, self.coding.value(s[0]).ok()?);
        let mb = elementary_matrix(e, self.coding.value(*s.get(1)?).ok()?);
        Some(TraceState2::from_matrices(&ma, &mb))
    }

    /// `x_0 … x_{n_max}` with escape judged against `bound`.
    pub fn orbit(&self, e: T, n_max: usize, bound: T) -> TraceOrbit<T> {
        let clamp = lit::<T>(TRACE_CLAMP);
        let mut values = Vec::new();
        let mut saturated = false;
        if let (Some(tm), Some(mut s)) = (&self.trace_map, self.seed_state(e)) {
            values.push(s.t_a);
            for _ in 0..n_max {
                s = tm.step(s);
                if !s.is_finite() {
                    saturated = true;
                    break;
                }
                if s.t_a.abs() > clamp {
                    values.push(clamp.copysign(s.t_a));
                    saturated = true;
                    break;
                }
                values.push(s.t_a);
            }
        } else {
            for n in 0..=n_max.min(self.max_level()) {
                let mut m = Mat2::identity();
                for sym in self.words[n].iter() {
                    m = elementary_matrix(e, self.coding.value(sym).unwrap()) * m;
                }
                match clamped_trace(&m) {
                    Some((t, sat)) => {
                        values.push(t);
                        if sat {
                            saturated = true;
                            break;
                        }
                    }
                    None => {
                        saturated = true;
                        break;
                    }
                }
            }
        }
        TraceOrbit::new(0, values, bound, saturated)
    }
}

impl<T: Real> TraceModel<T> for SubstitutionModel<T> {
    fn max_level(&self) -> usize {
        self.words.len() - 1
    }

    fn period_word(&self, level: usize) -> &Word {
        &self.words[level]
    }

    fn coding(&self) -> &Coding<T> {
        &self.coding
    }

    fn lambda(&self) -> T {
        self.lambda
    }

    fn raw_trace(&self, e: T, level: usize) -> T {
        match (&self.trace_map, self.seed_state(e)) {
            (Some(tm), Some(mut s)) => {
                for _ in 0..level {
                    s = tm.step(s);
                }
                s.t_a
            }
            _ => T::nan(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::operator::word_matrix;
    use crate::symbolic::{continued_fraction, AlphaSpec};

    #[test]
    fn sturmian_model_levels() {
        let cf = continued_fraction(&AlphaSpec::golden(), 12).unwrap();
        let m = SturmianModel::<f64>::new(&cf, 2.0, 8).unwrap();
        assert_eq!(m.period(0), 1);
        assert_eq!(m.period(8), 34);
        assert_eq!(m.period_word(2).to_string(), "10");
        let direct = word_matrix(0.3, m.period_word(6), m.coding()).unwrap().trace();
        assert!((m.trace(0.3, 6) - direct).abs() < 1e-10);
    }

    #[test]
    fn fallback_keeps_sign() {
        let rule = SubstitutionRule::period_doubling();
        let m = SubstitutionModel::<f64>::new(&rule, Coding::new(vec![(b'a', 0.0), (b'b', 3.0)]).unwrap(), 3.0, 12).unwrap();
        for e in [-9.0, -5.0, 9.0] {
            let x = m.trace(e, 12);
            assert!(x.is_finite());
            // x is monic of degree 4096, so its sign at large |E| is sign(E)^4096
            assert!(x > 0.0, "E = {e}: {x}");
        }
        let small = m.trace(0.1, 3);
        let direct = word_matrix(0.1, m.period_word(3), m.coding()).unwrap().trace();
        assert!((small - direct).abs() < 1e-10);
    }

    #[test]
    fn multi_letter_uses_products() {
        let rule = SubstitutionRule::rudin_shapiro();
        let coding = Coding::graded(rule.alphabet(), 1.0);
        let m = SubstitutionModel::<f64>::new(&rule, coding, 1.0, 6).unwrap();
        assert!(m.trace_map().is_none());
        let direct = word_matrix(0.4, m.period_word(5), m.coding()).unwrap().trace();
        assert!((m.trace(0.4, 5) - direct).abs() <= 1e-9 * direct.abs().max(1.0));
        let o = m.orbit(0.4, 5, 10.0);
        assert!((o.values[5] - direct).abs() <= 1e-9 * direct.abs().max(1.0));
    }
}

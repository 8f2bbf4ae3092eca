use std::ops::RangeInclusive;

use clap::Args;
use quasispec::operator::{Coding, Potential};
use quasispec::symbolic::{
    characteristic_prefix, circle_map_word, continued_fraction, AlphaSpec, ContinuedFraction, SubstitutionRule, Word,
};
use quasispec::tracemap::{SturmianModel, SubstitutionModel, TraceModel};

use crate::error::{CliError, CliResult};

/// Largest continued-fraction depth tried; deep enough for every period that fits in memory.
const MAX_DEPTH: usize = 60;

#[derive(Debug, Clone, Args)]
pub struct ModelArgs {
    /// sturmian, circle-map, free, custom, or a built-in substitution: fibonacci,
    /// period-doubling, binary-non-pisot, thue-morse, rudin-shapiro.
    #[arg(long, default_value = "sturmian", global = true)]
    pub model: String,
    /// Rotation number: golden, silver, quad:p,q,d,r or cf:a1,a2,...[,(b1,...)].
    #[arg(long, default_value = "golden", global = true)]
    pub alpha: String,
    /// Interval length of the circle map; defaults to α.
    #[arg(long, global = true)]
    pub beta: Option<f64>,
    /// Phase of the circle map.
    #[arg(long, default_value_t = 0.0, global = true)]
    pub theta: f64,
    /// Coupling constant.
    #[arg(long, default_value_t = 1.0, global = true)]
    pub lambda: f64,
    /// Symbol values, e.g. a=0,b=4; overrides the default coding.
    #[arg(long, global = true)]
    pub coding: Option<String>,
    /// Rule for --model custom, e.g. a->ab,b->a.
    #[arg(long, global = true)]
    pub rule: Option<String>,
}

#[derive(Debug, Clone)]
pub enum Kind {
    /// Circle map with `β = α`; `θ = 0` gives the characteristic word.
    Sturmian { spec: AlphaSpec, cf: ContinuedFraction },
    CircleMap { spec: AlphaSpec, cf: ContinuedFraction, beta: f64 },
    Substitution { name: String, rule: SubstitutionRule },
    Free,
}

#[derive(Debug, Clone)]
pub struct Model {
    pub kind: Kind,
    pub lambda: f64,
    pub theta: f64,
    pub coding: Coding<f64>,
    /// The rotation number as given on the command line.
    alpha: String,
}

fn deepest_cf(spec: &AlphaSpec) -> CliResult<ContinuedFraction> {
    let mut last = None;
    for depth in (1..=MAX_DEPTH).rev() {
        match continued_fraction(spec, depth) {
            Ok(cf) => return Ok(cf),
            Err(e @ quasispec::Error::Overflow(_)) => last = Some(e),
            Err(e) => return Err(e.into()),
        }
    }
    Err(last.map(Into::into).unwrap_or_else(|| CliError::usage("empty continued fraction")))
}

impl Model {
    pub fn resolve(a: &ModelArgs) -> CliResult<Self> {
        let alpha = || -> CliResult<(AlphaSpec, ContinuedFraction)> {
            let spec: AlphaSpec = a.alpha.parse()?;
            let cf = deepest_cf(&spec)?;
            Ok((spec, cf))
        };
        let kind = match a.model.as_str() {
            "sturmian" => {
                let (spec, cf) = alpha()?;
                Kind::Sturmian { spec, cf }
            }
            "circle-map" => {
                let (spec, cf) = alpha()?;
                let beta = a.beta.unwrap_or(cf.alpha());
                if !(beta > 0.0 && beta < 1.0) {
                    return Err(CliError::usage(format!("--beta {beta} must lie in (0, 1)")));
                }
                Kind::CircleMap { spec, cf, beta }
            }
            "free" => Kind::Free,
            "custom" => {
                let rule = a.rule.as_deref().ok_or_else(|| CliError::usage("--model custom needs --rule"))?;
                Kind::Substitution { name: "custom".into(), rule: SubstitutionRule::parse(rule)? }
            }
            name => match SubstitutionRule::builtin(name) {
                Some(rule) => Kind::Substitution { name: name.into(), rule },
                None => return Err(CliError::usage(format!("unknown model {name:?}"))),
            },
        };
        let coding = match (&a.coding, &kind) {
            (Some(c), _) => Coding::parse(c)?,
            (None, Kind::Substitution { rule, .. }) => Coding::graded(rule.alphabet(), a.lambda),
            (None, Kind::Free) => Coding::sturmian(0.0),
            (None, _) => Coding::sturmian(a.lambda),
        };
        if let Kind::Substitution { rule, .. } = &kind {
            if !rule.is_primitive() {
                return Err(CliError::usage(format!("substitution {rule} is not primitive")));
            }
            for &s in rule.alphabet().symbols() {
                coding.value(s)?;
            }
        }
        let lambda = if matches!(kind, Kind::Free) { 0.0 } else { a.lambda };
        Ok(Self { kind, lambda, theta: a.theta, coding, alpha: a.alpha.trim().to_string() })
    }

    pub fn label(&self) -> String {
        match &self.kind {
            Kind::Sturmian { .. } => format!("sturmian alpha={} theta={}", self.alpha, self.theta),
            Kind::CircleMap { beta, .. } => format!("circle-map alpha={} beta={beta} theta={}", self.alpha, self.theta),
            Kind::Substitution { name, rule } => format!("{name} ({rule})"),
            Kind::Free => "free".into(),
        }
    }

    /// Symbols at sites `range`. Substitution words are read off the fixed
    /// point starting with the first letter, its first symbol placed at the
    /// first site of the range.
    pub fn word(&self, range: RangeInclusive<i64>) -> CliResult<Word> {
        let len = (range.end() - range.start() + 1).max(0) as usize;
        Ok(match &self.kind {
            Kind::Sturmian { cf, .. } if self.theta == 0.0 && *range.start() == 1 => characteristic_prefix(cf, len)?,
            Kind::Sturmian { cf, .. } => circle_map_word(cf.alpha(), cf.alpha(), self.theta, range),
            Kind::CircleMap { cf, beta, .. } => circle_map_word(cf.alpha(), *beta, self.theta, range),
            Kind::Substitution { rule, .. } => {
                rule.fixed_point_prefix(rule.alphabet().symbols()[0], len)?.prefix(len)
            }
            Kind::Free => Word::from_bytes(vec![b'0'; len]),
        })
    }

    pub fn potential(&self, range: RangeInclusive<i64>) -> CliResult<Potential<f64>> {
        let start = *range.start();
        Ok(Potential::from_word(&self.word(range)?, &self.coding, start)?)
    }

    /// Coupling of a two-valued Sturmian coding `0 ↦ 0`, `1 ↦ λ`.
    fn sturmian_coupling(&self) -> CliResult<f64> {
        let zero = self.coding.value(b'0')?;
        if zero != 0.0 {
            return Err(CliError::usage("Sturmian band and trace computations need the coding 0=0"));
        }
        Ok(self.coding.value(b'1').unwrap_or(0.0))
    }

    /// Periodic approximants up to `max_level`.
    pub fn trace_model(&self, max_level: usize) -> CliResult<Box<dyn TraceModel<f64>>> {
        Ok(match &self.kind {
            Kind::Sturmian { cf, .. } => Box::new(SturmianModel::new(cf, self.sturmian_coupling()?, max_level)?),
            Kind::CircleMap { cf, beta, .. } if (*beta - cf.alpha()).abs() < 1e-15 => {
                Box::new(SturmianModel::new(cf, self.sturmian_coupling()?, max_level)?)
            }
            Kind::CircleMap { .. } => {
                return Err(CliError::usage("periodic approximants need β = α; use --model sturmian"));
            }
            Kind::Substitution { rule, .. } => {
                Box::new(SubstitutionModel::new(rule, self.coding.clone(), self.lambda, max_level)?)
            }
            Kind::Free => {
                let cf = continued_fraction(&AlphaSpec::golden(), MAX_DEPTH)?;
                Box::new(SturmianModel::new(&cf, 0.0, max_level)?)
            }
        })
    }

    /// The coupling of the Sturmian trace recursion, when the model has one.
    pub fn sturmian(&self) -> CliResult<Option<(ContinuedFraction, f64)>> {
        Ok(match &self.kind {
            Kind::Sturmian { cf, .. } => Some((cf.clone(), self.sturmian_coupling()?)),
            Kind::CircleMap { cf, beta, .. } if (*beta - cf.alpha()).abs() < 1e-15 => {
                Some((cf.clone(), self.sturmian_coupling()?))
            }
            Kind::Free => Some((continued_fraction(&AlphaSpec::golden(), MAX_DEPTH)?, 0.0)),
            _ => None,
        })
    }
}

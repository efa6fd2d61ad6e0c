//! Conditional probability as provability.
//!
//! Outcomes become atoms valued by their mass, events become soft sums of
//! outcomes, and the odds of `B` given `A` are the provability of
//! `A ⊢ A∩B` in the resulting theory.

use std::collections::BTreeMap;

use num::{BigRational, Zero};

use crate::alethic::{AlethicError, Ext, Hardness, Value};
use crate::calculus::{CalculusError, Theory};
use crate::prover::{Prover, ProverError, ProverOptions};
use crate::syntax::{Formula, Sequent};

/// Default complexity cap, enough for four outcomes on each side.
pub const DEFAULT_CAP: usize = 8;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum BayesError {
    #[error("density has no outcomes")]
    Empty,
    #[error("masses sum to {0}, not 1")]
    NotNormalized(BigRational),
    #[error("negative mass for {0}")]
    Negative(String),
    #[error("outcome {0} appears twice")]
    Duplicate(String),
    #[error("unknown outcome {0}")]
    UnknownOutcome(String),
    #[error("events must be nonempty")]
    EmptyEvent,
    #[error("line {line}: {message}")]
    Syntax { line: usize, message: String },
    #[error(transparent)]
    Calculus(#[from] CalculusError),
    #[error(transparent)]
    Prover(#[from] ProverError),
}

impl From<AlethicError> for BayesError {
    fn from(e: AlethicError) -> Self {
        BayesError::Calculus(CalculusError::Alethic(e))
    }
}

/// A finite probability density.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Density {
    mass: BTreeMap<String, BigRational>,
}

impl Density {
    pub fn new(entries: impl IntoIterator<Item = (String, BigRational)>) -> Result<Density, BayesError> {
        let mut mass = BTreeMap::new();
        for (name, m) in entries {
            if m < BigRational::zero() {
                return Err(BayesError::Negative(name));
            }
            if mass.insert(name.clone(), m).is_some() {
                return Err(BayesError::Duplicate(name));
            }
        }
        if mass.is_empty() {
            return Err(BayesError::Empty);
        }
        let total: BigRational = mass.values().sum();
        if total != BigRational::from_integer(1.into()) {
            return Err(BayesError::NotNormalized(total));
        }
        Ok(Density { mass })
    }

    pub fn outcomes(&self) -> impl Iterator<Item = &String> {
        self.mass.keys()
    }

    pub fn mass(&self, outcome: &str) -> Option<&BigRational> {
        self.mass.get(outcome)
    }

    /// Probability of an event; unknown outcomes are an error.
    pub fn probability(&self, event: &[String]) -> Result<BigRational, BayesError> {
        let mut seen: Vec<&String> = Vec::new();
        let mut total = BigRational::zero();
        for x in event {
            let m = self.mass(x).ok_or_else(|| BayesError::UnknownOutcome(x.clone()))?;
            if !seen.contains(&x) {
                seen.push(x);
                total += m;
            }
        }
        Ok(total)
    }

    /// Parses lines `<outcome> = <rational>`; `#` starts a comment.
    pub fn parse(text: &str) -> Result<Density, BayesError> {
        let mut entries = Vec::new();
        for (i, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let bad = |message: String| BayesError::Syntax { line: i + 1, message };
            let (name, m) = line.split_once('=').ok_or_else(|| bad("expected `<outcome> = <rational>`".into()))?;
            let name = name.trim();
            if !matches!(crate::parse::parse_formula(name), Ok(Formula::Atom(_))) {
                return Err(bad(format!("{name:?} is not an outcome name")));
            }
            let m = match Ext::parse_literal(m.trim()).map_err(|e| bad(e.to_string()))? {
                Ext::Zero => BigRational::zero(),
                Ext::Pos(r) => r,
                Ext::Inf => return Err(bad("mass must be finite".into())),
            };
            entries.push((name.to_string(), m));
        }
        Density::new(entries)
    }
}

/// The theory valuing each outcome by its mass, with MIX* available.
pub fn bayes_theory(d: &Density, p: &Hardness) -> Result<Theory, BayesError> {
    let mut t = Theory::empty(p).with_mix_star(true);
    for (name, m) in &d.mass {
        t = t.with_atom(name, Value::from_real(&Ext::from_rational(m.clone()), p)?)?;
    }
    Ok(t)
}

/// Left-associated soft sum of the outcomes, sorted by name, duplicates
/// dropped.
pub fn event_formula(e: &[String]) -> Result<Formula, BayesError> {
    let mut names: Vec<&String> = e.iter().collect();
    names.sort();
    names.dedup();
    let mut it = names.into_iter().map(|n| Formula::atom(n));
    let first = it.next().ok_or(BayesError::EmptyEvent)?;
    Ok(it.fold(first, Formula::plor))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Odds {
    pub value: Value,
    /// `A∩B` was empty and encoded as `⊥`.
    pub empty_intersection: bool,
    pub sequent: Sequent,
}

/// Provability of `A ⊢ A∩B` in the density's theory.
pub fn conditional_odds(
    d: &Density,
    given: &[String],
    event: &[String],
    p: &Hardness,
    cap: Option<usize>,
) -> Result<Odds, BayesError> {
    if given.is_empty() {
        return Err(BayesError::EmptyEvent);
    }
    d.probability(given)?;
    d.probability(event)?;
    let inter: Vec<String> = event.iter().filter(|x| given.contains(x)).cloned().collect();
    let a = event_formula(given)?;
    let (c, empty_intersection) = match event_formula(&inter) {
        Ok(c) => (c, false),
        Err(BayesError::EmptyEvent) => (Formula::Bot, true),
        Err(e) => return Err(e),
    };
    let sequent = Sequent::new([a].into_iter().collect(), [c].into_iter().collect());
    let t = bayes_theory(d, p)?;
    let opts = ProverOptions { complexity_cap: Some(cap.unwrap_or(DEFAULT_CAP)), ..Default::default() };
    let value = Prover::new(p, &t, &opts)?.value(&sequent)?;
    Ok(Odds { value, empty_intersection, sequent })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    fn names(xs: &[&str]) -> Vec<String> {
        xs.iter().map(|s| s.to_string()).collect()
    }

    fn xyz() -> Density {
        Density::new(names(&["x", "y", "z"]).into_iter().zip([r(1, 2), r(1, 3), r(1, 6)])).unwrap()
    }

    #[test]
    fn density_validation() {
        assert_eq!(Density::new(Vec::new()), Err(BayesError::Empty));
        assert!(matches!(Density::new(names(&["x"]).into_iter().zip([r(1, 2)])), Err(BayesError::NotNormalized(_))));
        assert_eq!(Density::parse("x = 1/2\ny = 1/2 # fair\n").unwrap().mass("y"), Some(&r(1, 2)));
        assert!(Density::parse("x = inf").is_err());
    }

    #[test]
    fn theory_values() {
        let d = Density::parse("x = 1\ny = 0").unwrap();
        let t = bayes_theory(&d, &Hardness::one()).unwrap();
        assert!(t.mix_star);
        assert!(t.value("y").unwrap().dual().is_infinite());
    }

    #[test]
    fn events() {
        assert_eq!(event_formula(&names(&["x"])).unwrap(), Formula::atom("x"));
        assert_eq!(event_formula(&names(&["y", "x"])).unwrap().to_string(), "(x + y)");
        assert_eq!(event_formula(&[]), Err(BayesError::EmptyEvent));
    }

    #[test]
    fn odds() {
        let p = Hardness::one();
        let o = conditional_odds(&xyz(), &names(&["x", "y"]), &names(&["y", "z"]), &p, None).unwrap();
        assert_eq!(o.value, Value::parse("2/5", &p).unwrap());
        let o = conditional_odds(&xyz(), &names(&["x"]), &names(&["x"]), &p, None).unwrap();
        assert_eq!(o.value, Value::one(&p));
        let o = conditional_odds(&xyz(), &names(&["x"]), &names(&["y"]), &p, None).unwrap();
        assert!(o.empty_intersection);
        assert!(o.value.is_zero());
    }
}

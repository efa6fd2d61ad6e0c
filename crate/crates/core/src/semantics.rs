//! Softales: enriched preorders with a self-dual multiplicative structure
//! and soft joins, used as models of the calculus.

use std::collections::BTreeMap;
use std::fmt;

use crate::alethic::{AlethicError, Ext, Hardness, Value};
use crate::calculus::{Derivation, RuleNode};
use crate::syntax::{Formula, Sequent, Structure};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum SemanticsError {
    #[error("valuation has no value for atom {0}")]
    MissingAtom(String),
    #[error("line {line}: {message}")]
    Syntax { line: usize, message: String },
    #[error("soundness needs a closed proof of a single sequent")]
    NotAProof,
    #[error(transparent)]
    Alethic(#[from] AlethicError),
}

/// The primitive structure of a softale. Orders are power coordinates at
/// the softale's hardness.
pub trait Softale {
    type Elem: Clone + fmt::Debug + PartialEq;

    fn hardness(&self) -> &Hardness;
    fn order(&self, a: &Self::Elem, b: &Self::Elem) -> Ext;
    fn tensor(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn dual(&self, a: &Self::Elem) -> Self::Elem;
    fn unit(&self) -> Self::Elem;
    fn bot(&self) -> Self::Elem;
    fn pjoin(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    /// Reads an element; real magnitudes, `q@p=h` accepted per component.
    fn parse_elem(&self, text: &str) -> Result<Self::Elem, AlethicError>;
    fn show(&self, a: &Self::Elem) -> String;

    fn par(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem {
        self.dual(&self.tensor(&self.dual(a), &self.dual(b)))
    }

    fn pmeet(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem {
        self.dual(&self.pjoin(&self.dual(a), &self.dual(b)))
    }

    fn top(&self) -> Self::Elem {
        self.dual(&self.bot())
    }

    fn residual(&self, a: &Self::Elem, c: &Self::Elem) -> Self::Elem {
        self.par(&self.dual(a), c)
    }
}

/// `[0, ∞]` ordered by the residual, elements stored as power coordinates.
#[derive(Clone, Debug)]
pub struct RealSoftale {
    p: Hardness,
}

pub fn real_softale(p: &Hardness) -> RealSoftale {
    RealSoftale { p: p.clone() }
}

impl Softale for RealSoftale {
    type Elem = Ext;

    fn hardness(&self) -> &Hardness {
        &self.p
    }
    fn order(&self, a: &Ext, b: &Ext) -> Ext {
        a.residual(b)
    }
    fn tensor(&self, a: &Ext, b: &Ext) -> Ext {
        a.tensor(b)
    }
    fn dual(&self, a: &Ext) -> Ext {
        a.dual()
    }
    fn unit(&self) -> Ext {
        Ext::one()
    }
    fn bot(&self) -> Ext {
        Ext::Zero
    }
    fn pjoin(&self, a: &Ext, b: &Ext) -> Ext {
        a.padd(b, &self.p)
    }
    fn parse_elem(&self, text: &str) -> Result<Ext, AlethicError> {
        Ok(Value::parse(text.trim(), &self.p)?.power().clone())
    }
    fn show(&self, a: &Ext) -> String {
        Value::from_power(a.clone(), &self.p).exact()
    }
}

/// `n`-tuples with pointwise structure, ordered by the least componentwise
/// residual.
#[derive(Clone, Debug)]
pub struct PointwiseSoftale {
    n: usize,
    base: RealSoftale,
}

pub fn pointwise_softale(n: usize, p: &Hardness) -> PointwiseSoftale {
    assert!(n >= 1, "pointwise softale needs at least one component");
    PointwiseSoftale { n, base: real_softale(p) }
}

impl PointwiseSoftale {
    pub fn size(&self) -> usize {
        self.n
    }

    fn zip(&self, a: &[Ext], b: &[Ext], f: impl Fn(&Ext, &Ext) -> Ext) -> Vec<Ext> {
        a.iter().zip(b).map(|(x, y)| f(x, y)).collect()
    }
}

impl Softale for PointwiseSoftale {
    type Elem = Vec<Ext>;

    fn hardness(&self) -> &Hardness {
        &self.base.p
    }
    fn order(&self, a: &Vec<Ext>, b: &Vec<Ext>) -> Ext {
        a.iter().zip(b).map(|(x, y)| x.residual(y)).min().unwrap_or(Ext::Inf)
    }
    fn tensor(&self, a: &Vec<Ext>, b: &Vec<Ext>) -> Vec<Ext> {
        self.zip(a, b, Ext::tensor)
    }
    fn dual(&self, a: &Vec<Ext>) -> Vec<Ext> {
        a.iter().map(Ext::dual).collect()
    }
    fn unit(&self) -> Vec<Ext> {
        vec![Ext::one(); self.n]
    }
    fn bot(&self) -> Vec<Ext> {
        vec![Ext::Zero; self.n]
    }
    fn pjoin(&self, a: &Vec<Ext>, b: &Vec<Ext>) -> Vec<Ext> {
        self.zip(a, b, |x, y| x.padd(y, &self.base.p))
    }
    fn parse_elem(&self, text: &str) -> Result<Vec<Ext>, AlethicError> {
        let inner = text.trim().trim_start_matches('(').trim_end_matches(')');
        let parts: Vec<&str> = inner.split(',').collect();
        if parts.len() != self.n {
            return Err(AlethicError::InvalidLiteral(text.to_string()));
        }
        parts.iter().map(|s| self.base.parse_elem(s)).collect()
    }
    fn show(&self, a: &Vec<Ext>) -> String {
        let parts: Vec<String> = a.iter().map(|x| self.base.show(x)).collect();
        format!("({})", parts.join(", "))
    }
}

pub type Valuation<E> = BTreeMap<String, E>;

/// Parses lines `atom <name> = <element>`; `#` starts a comment.
pub fn parse_valuation<S: Softale>(text: &str, s: &S) -> Result<Valuation<S::Elem>, SemanticsError> {
    let mut v = Valuation::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let bad = |message: String| SemanticsError::Syntax { line: i + 1, message };
        let (lhs, rhs) = line.split_once('=').ok_or_else(|| bad("expected `atom <name> = <value>`".into()))?;
        let name = match lhs.split_whitespace().collect::<Vec<_>>().as_slice() {
            ["atom", name] => name.to_string(),
            _ => return Err(bad("expected `atom <name> = <value>`".into())),
        };
        v.insert(name, s.parse_elem(rhs).map_err(|e| bad(e.to_string()))?);
    }
    Ok(v)
}

pub fn eval_formula<S: Softale>(f: &Formula, v: &Valuation<S::Elem>, s: &S) -> Result<S::Elem, SemanticsError> {
    let atom = |a: &String| v.get(a).cloned().ok_or_else(|| SemanticsError::MissingAtom(a.clone()));
    Ok(match f {
        Formula::Atom(a) => atom(a)?,
        Formula::NegAtom(a) => s.dual(&atom(a)?),
        Formula::One => s.unit(),
        Formula::Bot => s.bot(),
        Formula::Top => s.top(),
        Formula::Tensor(a, b) => s.tensor(&eval_formula(a, v, s)?, &eval_formula(b, v, s)?),
        Formula::Par(a, b) => s.par(&eval_formula(a, v, s)?, &eval_formula(b, v, s)?),
        Formula::Plor(a, b) => s.pjoin(&eval_formula(a, v, s)?, &eval_formula(b, v, s)?),
        Formula::Pland(a, b) => s.pmeet(&eval_formula(a, v, s)?, &eval_formula(b, v, s)?),
    })
}

/// The order from the tensor of the antecedent to the par of the
/// consequent.
pub fn semantic_sequent_value<S: Softale>(
    seq: &Sequent,
    v: &Valuation<S::Elem>,
    s: &S,
) -> Result<Value, SemanticsError> {
    let mut lhs = s.unit();
    for f in seq.ante.iter() {
        lhs = s.tensor(&lhs, &eval_formula(f, v, s)?);
    }
    let mut rhs = s.unit();
    for f in seq.cons.iter() {
        rhs = s.par(&rhs, &eval_formula(f, v, s)?);
    }
    Ok(Value::from_power(s.order(&lhs, &rhs), s.hardness()))
}

/// A structure read in the model: sequents by their semantic value.
pub fn semantic_structure_value<S: Softale>(
    h: &Structure,
    v: &Valuation<S::Elem>,
    s: &S,
) -> Result<Value, SemanticsError> {
    h.eval_with(&mut |q: &Sequent| semantic_sequent_value(q, v, s))
}

/// The pair (premise, conclusion) for one rule instance; soundness says the
/// first is at most the second.
pub fn rule_gap<S: Softale>(node: &RuleNode, v: &Valuation<S::Elem>, s: &S) -> Result<(Value, Value), SemanticsError> {
    Ok((semantic_structure_value(&node.premise, v, s)?, semantic_structure_value(&node.conclusion, v, s)?))
}

/// The pair (validity of the proof, semantic value of its conclusion).
pub fn soundness_gap<S: Softale>(
    proof: &Derivation,
    v: &Valuation<S::Elem>,
    s: &S,
) -> Result<(Value, Value), SemanticsError> {
    let validity = proof.validity().map_err(|_| SemanticsError::NotAProof)?;
    let concl = proof.conclusion().map_err(|_| SemanticsError::NotAProof)?;
    Ok((validity, semantic_sequent_value(&concl, v, s)?))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AxiomViolation {
    pub axiom: &'static str,
    pub witness: String,
    pub lhs: String,
    pub rhs: String,
}

impl fmt::Display for AxiomViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} at {}: {} vs {}", self.axiom, self.witness, self.lhs, self.rhs)
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct AxiomReport {
    /// Instances evaluated per axiom, in checking order.
    pub checked: Vec<(&'static str, usize)>,
    /// Violations of the defining axioms.
    pub violations: Vec<AxiomViolation>,
    /// Violations of prelinearity, reported apart since it is optional.
    pub prelinearity: Vec<AxiomViolation>,
    /// Violations of the derived mix laws.
    pub mix: Vec<AxiomViolation>,
}

impl AxiomReport {
    pub fn passes(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn prelinear(&self) -> bool {
        self.prelinearity.is_empty()
    }

    pub fn count(&self, axiom: &str) -> usize {
        self.violations.iter().chain(&self.prelinearity).chain(&self.mix).filter(|v| v.axiom == axiom).count()
    }
}

impl fmt::Display for AxiomReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (axiom, n) in &self.checked {
            let bad = self.count(axiom);
            let verdict = if bad == 0 { "ok".to_string() } else { format!("{bad} violations") };
            writeln!(f, "{axiom}: {n} instances, {verdict}")?;
        }
        for v in self.violations.iter().chain(&self.prelinearity).chain(&self.mix).take(20) {
            writeln!(f, "violation {v}")?;
        }
        let verdict = if self.passes() { "softale axioms hold" } else { "softale axioms fail" };
        writeln!(f, "{verdict}; prelinear: {}", if self.prelinear() { "yes" } else { "no" })
    }
}

/// Evaluates every axiom instance over the sample elements.
pub fn check_softale_axioms<S: Softale>(s: &S, samples: &[S::Elem]) -> AxiomReport {
    let mut r = AxiomReport::default();
    let one = Ext::one();
    let inf = Ext::Inf;
    let p = s.hardness();
    let sh = |e: &Ext| Value::from_power(e.clone(), p).exact();
    let tup = |xs: &[&S::Elem]| xs.iter().map(|x| s.show(x)).collect::<Vec<_>>().join(", ");

    // `lhs ≤ rhs` or `lhs = rhs`, recorded under `axiom`.
    enum Want {
        Leq,
        Eq,
    }
    let record = |r: &mut AxiomReport, class: u8, axiom: &'static str, w: String, lhs: Ext, rhs: Ext, want: Want| {
        match r.checked.iter_mut().find(|(a, _)| *a == axiom) {
            Some((_, n)) => *n += 1,
            None => r.checked.push((axiom, 1)),
        }
        let ok = match want {
            Want::Leq => lhs <= rhs,
            Want::Eq => lhs == rhs,
        };
        if !ok {
            let v = AxiomViolation { axiom, witness: w, lhs: sh(&lhs), rhs: sh(&rhs) };
            match class {
                0 => r.violations.push(v),
                1 => r.prelinearity.push(v),
                _ => r.mix.push(v),
            }
        }
    };

    let u = s.unit();
    let eq_elem = |a: &S::Elem, b: &S::Elem| if a == b { one.clone() } else { Ext::Zero };
    record(&mut r, 0, "unit self-dual", s.show(&u), eq_elem(&s.dual(&u), &u), one.clone(), Want::Eq);

    for a in samples {
        let w = tup(&[a]);
        record(&mut r, 0, "reflexivity", w.clone(), one.clone(), s.order(a, a), Want::Leq);
        let au = s.tensor(a, &u);
        record(&mut r, 0, "unit", w.clone(), one.clone(), s.order(&au, a), Want::Leq);
        record(&mut r, 0, "unit", w.clone(), one.clone(), s.order(a, &au), Want::Leq);
        record(&mut r, 0, "involution", w.clone(), eq_elem(&s.dual(&s.dual(a)), a), one.clone(), Want::Eq);
        record(&mut r, 0, "soft bottom", w, s.order(&s.bot(), a), inf.clone(), Want::Eq);
    }
    for a in samples {
        for b in samples {
            let w = tup(&[a, b]);
            let ab = s.tensor(a, b);
            let ba = s.tensor(b, a);
            record(&mut r, 0, "commutativity", w.clone(), one.clone(), s.order(&ab, &ba), Want::Leq);
            record(&mut r, 0, "duality", w.clone(), s.order(a, b), s.order(&s.dual(b), &s.dual(a)), Want::Eq);
            record(&mut r, 1, "prelinearity", w.clone(), s.order(a, b).dual(), s.order(b, a), Want::Leq);
            record(&mut r, 2, "mix", w, one.clone(), s.order(&ab, &s.par(a, b)), Want::Leq);
        }
    }
    for a in samples {
        for b in samples {
            for c in samples {
                let w = tup(&[a, b, c]);
                let l = s.tensor(&s.tensor(a, b), c);
                let rr = s.tensor(a, &s.tensor(b, c));
                record(&mut r, 0, "associativity", w.clone(), one.clone(), s.order(&l, &rr), Want::Leq);
                record(&mut r, 0, "associativity", w.clone(), one.clone(), s.order(&rr, &l), Want::Leq);
                let tr = s.order(a, b).tensor(&s.order(b, c));
                record(&mut r, 0, "transitivity", w.clone(), tr, s.order(a, c), Want::Leq);
                let lhs = s.order(&s.tensor(a, b), &s.dual(c));
                let rhs = s.order(a, &s.dual(&s.tensor(b, c)));
                record(&mut r, 0, "star-autonomy", w.clone(), lhs, rhs, Want::Eq);
                let j = s.pjoin(a, b);
                let lhs = s.order(a, c).pcoadd(&s.order(b, c), p);
                record(&mut r, 0, "join minimality", w.clone(), lhs, s.order(&j, c), Want::Leq);
                let lhs = s.order(c, a).padd(&s.order(c, b), p);
                record(&mut r, 0, "join upper bound", w.clone(), lhs, s.order(c, &j), Want::Leq);
                let l = s.tensor(a, &s.par(b, c));
                let rr = s.par(&s.tensor(a, b), c);
                record(&mut r, 2, "linear distribution", w, one.clone(), s.order(&l, &rr), Want::Leq);
            }
        }
    }
    for a in samples {
        for b in samples {
            for c in samples {
                for d in samples {
                    let lhs = s.order(a, b).tensor(&s.order(c, d));
                    let rhs = s.order(&s.tensor(a, c), &s.tensor(b, d));
                    record(&mut r, 0, "interchange", tup(&[a, b, c, d]), lhs, rhs, Want::Leq);
                }
            }
        }
    }
    r
}

/// All `n`-tuples over a grid of component values.
pub fn tuple_grid(grid: &[Ext], n: usize) -> Vec<Vec<Ext>> {
    let mut out = vec![Vec::new()];
    for _ in 0..n {
        out = out
            .into_iter()
            .flat_map(|t| {
                grid.iter().map(move |g| {
                    let mut t = t.clone();
                    t.push(g.clone());
                    t
                })
            })
            .collect();
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p1() -> Hardness {
        Hardness::one()
    }

    fn e(s: &str) -> Ext {
        Ext::parse_literal(s).unwrap()
    }

    fn grid() -> Vec<Ext> {
        ["0", "1/2", "1", "2", "inf"].iter().map(|s| e(s)).collect()
    }

    #[test]
    fn real_examples() {
        let s = real_softale(&p1());
        assert_eq!(s.order(&e("2"), &e("6")), e("3"));
        assert_eq!(s.pjoin(&e("1"), &e("1")), e("2"));
        let v = Valuation::from([("a".to_string(), e("2")), ("b".to_string(), e("3"))]);
        assert_eq!(eval_formula(&Formula::parse("a * b").unwrap(), &v, &s).unwrap(), e("6"));
        let v2 = Valuation::from([("a".to_string(), e("2")), ("b".to_string(), e("6"))]);
        let seq = Sequent::parse("a |- b").unwrap();
        assert_eq!(semantic_sequent_value(&seq, &v2, &s).unwrap(), Value::parse("3", &p1()).unwrap());
        let seq = Sequent::parse("|- bot").unwrap();
        assert!(semantic_sequent_value(&seq, &v, &s).unwrap().is_zero());
        assert!(eval_formula(&Formula::atom("c"), &v, &s).is_err());
    }

    #[test]
    fn real_grid_passes() {
        for p in [p1(), Hardness::Infinite] {
            let r = check_softale_axioms(&real_softale(&p), &grid());
            assert!(r.passes(), "{r}");
            assert!(r.prelinear());
            assert!(r.mix.is_empty());
        }
    }

    #[test]
    fn pointwise_is_not_prelinear() {
        let s = pointwise_softale(2, &p1());
        assert_eq!(s.order(&vec![e("1"), e("4")], &vec![e("2"), e("2")]), e("1/2"));
        let g = tuple_grid(&[e("0"), e("1"), e("2"), e("inf")], 2);
        let r = check_softale_axioms(&s, &g);
        assert!(r.passes(), "{r}");
        assert!(!r.prelinear());
    }

    #[test]
    fn valuation_files() {
        let s = real_softale(&p1());
        let v = parse_valuation("atom a = 1/2 # half\natom b = inf\n", &s).unwrap();
        assert_eq!(v["b"], Ext::Inf);
        let s2 = pointwise_softale(2, &p1());
        let v = parse_valuation("atom a = (1, 2)", &s2).unwrap();
        assert_eq!(v["a"], vec![e("1"), e("2")]);
        assert!(parse_valuation("a = 1", &s).is_err());
    }
}

//! Provability: the maximum validity over reduced proofs of a sequent.
//!
//! Search runs on the one-sided form `⊢ Γ^⊥, Δ`. Every candidate rule is
//! tried and the best is kept, so the result is exact. Results are memoized
//! per canonical cedent. The witness is rebuilt afterwards from the memo and
//! translated back to the two-sided sequent with duality steps.

use std::collections::HashMap;

use crate::alethic::{Ext, Hardness, Value};
use crate::calculus::{Bindings, CalculusError, Derivation, ProofTree, RuleName, Theory};
use crate::proof_file::encode;
use crate::syntax::{Cedent, Formula, RedOp, Sequent, Structure};

#[derive(Clone, Debug, Default)]
pub struct ProverOptions {
    /// At `p = ∞`, use the unary soft-disjunction rules and drop EFQ.
    pub unary_additives_at_infinity: bool,
    /// Reject sequents whose complexity exceeds this bound.
    pub complexity_cap: Option<usize>,
    /// Record one line per explored cedent.
    pub trace: bool,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Stats {
    /// Distinct cedents evaluated.
    pub cedents: usize,
    /// Rule alternatives evaluated.
    pub alternatives: usize,
    /// Lookups answered by the memo table.
    pub memo_hits: usize,
}

#[derive(Clone, Debug)]
pub struct ProvabilityResult {
    pub value: Value,
    pub witness: Derivation,
    pub explored: Stats,
    pub trace: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ProverError {
    #[error("complexity {complexity} exceeds the cap {cap}")]
    CapExceeded { complexity: usize, cap: usize },
    #[error("theory is stated at p={theory}, search requested at p={search}")]
    HardnessMismatch { theory: String, search: String },
    #[error(transparent)]
    Calculus(#[from] CalculusError),
}

/// Values the search can aggregate: exact power coordinates, or just the
/// sign pattern zero / positive finite / infinite.
pub trait Domain: Clone + Ord + std::fmt::Debug {
    fn zero() -> Self;
    fn one() -> Self;
    fn inf() -> Self;
    fn from_value(v: &Value) -> Self;
    fn combine(&self, op: RedOp, other: &Self, p: &Hardness) -> Self;
}

impl Domain for Ext {
    fn zero() -> Self {
        Ext::Zero
    }
    fn one() -> Self {
        Ext::one()
    }
    fn inf() -> Self {
        Ext::Inf
    }
    fn from_value(v: &Value) -> Self {
        v.power().clone()
    }
    fn combine(&self, op: RedOp, other: &Self, p: &Hardness) -> Self {
        op.apply(self, other, p)
    }
}

/// Sign pattern of a value; exact for deciding positivity.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Sign {
    Zero,
    Finite,
    Infinite,
}

impl Domain for Sign {
    fn zero() -> Self {
        Sign::Zero
    }
    fn one() -> Self {
        Sign::Finite
    }
    fn inf() -> Self {
        Sign::Infinite
    }
    fn from_value(v: &Value) -> Self {
        match v.power() {
            Ext::Zero => Sign::Zero,
            Ext::Pos(_) => Sign::Finite,
            Ext::Inf => Sign::Infinite,
        }
    }
    fn combine(&self, op: RedOp, other: &Self, _p: &Hardness) -> Self {
        use Sign::*;
        match op {
            RedOp::Tensor if *self == Zero || *other == Zero => Zero,
            RedOp::Cotensor if *self == Infinite || *other == Infinite => Infinite,
            RedOp::Tensor | RedOp::Cotensor => (*self).max(*other),
            RedOp::Padd => (*self).max(*other),
            RedOp::Pcoadd => (*self).min(*other),
        }
    }
}

/// One way of concluding a one-sided cedent.
#[derive(Clone, Debug)]
enum Alt {
    Efq,
    Emp,
    OneR,
    TopR,
    /// `⊢ A^⊥, A` from the axiom on `A`.
    Ax(Formula),
    AtomR(String),
    /// `⊢ a^⊥` from the theory axiom `a ⊢`.
    AtomL(String),
    ParR(Formula),
    TensorR(Formula, Cedent, Cedent),
    PlorR(Formula),
    PlorR1(Formula),
    PlorR2(Formula),
    PlandR(Formula),
    Mix(RedOp, Cedent, Cedent),
}

impl Alt {
    fn is_leaf(&self) -> bool {
        matches!(self, Alt::Efq | Alt::Emp | Alt::OneR | Alt::TopR | Alt::Ax(_) | Alt::AtomR(_) | Alt::AtomL(_))
    }
}

/// A proof-search engine for one hardness and theory. The memo table is
/// reused across calls.
pub struct Search<D: Domain> {
    p: Hardness,
    theory: Theory,
    unary: bool,
    memo: HashMap<Cedent, Option<D>>,
    stats: Stats,
    trace: Option<Vec<String>>,
}

impl<D: Domain> Search<D> {
    pub fn new(p: &Hardness, theory: &Theory, opts: &ProverOptions) -> Result<Self, ProverError> {
        if theory.hardness() != p {
            return Err(ProverError::HardnessMismatch { theory: theory.hardness().to_string(), search: p.to_string() });
        }
        Ok(Search {
            p: p.clone(),
            theory: theory.clone(),
            unary: opts.unary_additives_at_infinity && p.is_infinite(),
            memo: HashMap::new(),
            stats: Stats::default(),
            trace: opts.trace.then(Vec::new),
        })
    }

    pub fn stats(&self) -> &Stats {
        &self.stats
    }

    fn alternatives(&self, c: &Cedent) -> Vec<Alt> {
        let items = c.as_slice();
        let mut out = Vec::new();
        if !self.unary {
            out.push(Alt::Efq);
        }
        if items.is_empty() {
            out.push(Alt::Emp);
            return out;
        }
        if items.contains(&Formula::Top) {
            out.push(Alt::TopR);
            return out;
        }
        match items {
            [Formula::One] => out.push(Alt::OneR),
            [Formula::Atom(a)] if self.theory.value(a).is_some() => out.push(Alt::AtomR(a.clone())),
            [Formula::NegAtom(a)] if self.theory.value(a).is_some() => out.push(Alt::AtomL(a.clone())),
            [x, y] if y.negate() == *x => out.push(Alt::Ax(x.clone())),
            _ => {}
        }
        for (i, f) in items.iter().enumerate() {
            if i > 0 && items[i - 1] == *f {
                continue;
            }
            match f {
                Formula::Par(..) => out.push(Alt::ParR(f.clone())),
                Formula::Tensor(..) => {
                    let rest = c.without(f).expect("formula is present");
                    for (l, r) in rest.splits() {
                        out.push(Alt::TensorR(f.clone(), l, r));
                    }
                }
                Formula::Plor(..) if self.unary => {
                    out.push(Alt::PlorR1(f.clone()));
                    out.push(Alt::PlorR2(f.clone()));
                }
                Formula::Plor(..) => out.push(Alt::PlorR(f.clone())),
                Formula::Pland(..) => out.push(Alt::PlandR(f.clone())),
                _ => {}
            }
        }
        if items.len() >= 2 {
            for (l, r) in c.splits() {
                if l.is_empty() || r.is_empty() || l > r {
                    continue;
                }
                out.push(Alt::Mix(RedOp::Tensor, l.clone(), r.clone()));
                if self.theory.mix_star {
                    out.push(Alt::Mix(RedOp::Cotensor, l, r));
                }
            }
        }
        out
    }

    /// Premise cedents of an alternative and the red connective joining them.
    fn premises(c: &Cedent, alt: &Alt) -> (Vec<Cedent>, Option<RedOp>) {
        let rest = |f: &Formula| c.without(f).expect("principal formula is present");
        let kids = |f: &Formula| f.children().map(|(a, b)| (a.clone(), b.clone())).expect("binary formula");
        match alt {
            Alt::ParR(f) => {
                let (a, b) = kids(f);
                (vec![rest(f).with(a).with(b)], None)
            }
            Alt::TensorR(f, l, r) => {
                let (a, b) = kids(f);
                (vec![l.with(a), r.with(b)], Some(RedOp::Tensor))
            }
            Alt::PlorR(f) | Alt::PlandR(f) => {
                let (a, b) = kids(f);
                let op = if matches!(alt, Alt::PlorR(_)) { RedOp::Padd } else { RedOp::Pcoadd };
                (vec![rest(f).with(a), rest(f).with(b)], Some(op))
            }
            Alt::PlorR1(f) => (vec![rest(f).with(kids(f).0)], None),
            Alt::PlorR2(f) => (vec![rest(f).with(kids(f).1)], None),
            Alt::Mix(op, l, r) => (vec![l.clone(), r.clone()], Some(*op)),
            _ => (Vec::new(), None),
        }
    }

    fn leaf_value(&self, alt: &Alt) -> D {
        match alt {
            Alt::Efq => D::zero(),
            Alt::Emp | Alt::OneR | Alt::Ax(_) => D::one(),
            Alt::TopR => D::inf(),
            Alt::AtomR(a) => D::from_value(self.theory.value(a).expect("atom in theory")),
            Alt::AtomL(a) => D::from_value(&self.theory.value(a).expect("atom in theory").dual()),
            _ => unreachable!("not a leaf"),
        }
    }

    fn alt_value(&mut self, c: &Cedent, alt: &Alt) -> Option<D> {
        self.stats.alternatives += 1;
        if alt.is_leaf() {
            return Some(self.leaf_value(alt));
        }
        let (prem, op) = Self::premises(c, alt);
        let size = cedent_size(c);
        let mut vals = Vec::with_capacity(2);
        for q in &prem {
            assert!(cedent_size(q) < size, "search measure must decrease: {q} from {c}");
            vals.push(self.value(q)?);
        }
        Some(match (op, vals.as_slice()) {
            (None, [v]) => v.clone(),
            (Some(op), [x, y]) => x.combine(op, y, &self.p),
            _ => unreachable!("rules have one or two premises"),
        })
    }

    /// Best value for the one-sided cedent, `None` if it has no proof (only
    /// possible when EFQ is disabled).
    pub fn value(&mut self, c: &Cedent) -> Option<D> {
        if let Some(v) = self.memo.get(c) {
            self.stats.memo_hits += 1;
            return v.clone();
        }
        let mut best: Option<D> = None;
        for alt in self.alternatives(c) {
            if let Some(v) = self.alt_value(c, &alt) {
                if best.as_ref().is_none_or(|b| v > *b) {
                    best = Some(v);
                }
            }
        }
        self.stats.cedents += 1;
        if let Some(tr) = self.trace.as_mut() {
            tr.push(format!("cedent |- {c} value {best:?}"));
        }
        self.memo.insert(c.clone(), best.clone());
        best
    }
}

fn cedent_size(c: &Cedent) -> usize {
    c.len() + 2 * c.connectives()
}

/// Exact proof search with witnesses.
pub struct Prover {
    search: Search<Ext>,
    witnesses: HashMap<Cedent, (String, ProofTree)>,
    cap: Option<usize>,
}

impl Prover {
    pub fn new(p: &Hardness, theory: &Theory, opts: &ProverOptions) -> Result<Prover, ProverError> {
        Ok(Prover { search: Search::new(p, theory, opts)?, witnesses: HashMap::new(), cap: opts.complexity_cap })
    }

    pub fn hardness(&self) -> &Hardness {
        &self.search.p
    }

    fn check_cap(&self, s: &Sequent) -> Result<(), ProverError> {
        match self.cap {
            Some(cap) if s.complexity() > cap => Err(ProverError::CapExceeded { complexity: s.complexity(), cap }),
            _ => Ok(()),
        }
    }

    /// The provability value alone.
    pub fn value(&mut self, s: &Sequent) -> Result<Value, ProverError> {
        self.check_cap(s)?;
        let v = self.search.value(&s.one_sided()).unwrap_or(Ext::Zero);
        Ok(Value::from_power(v, &self.search.p))
    }

    /// Provability with a witness proof of `s` whose validity is the value.
    pub fn prove(&mut self, s: &Sequent) -> Result<ProvabilityResult, ProverError> {
        self.check_cap(s)?;
        let c = s.one_sided();
        let p = self.search.p.clone();
        let t = self.search.theory.clone();
        let (value, witness) = match self.search.value(&c) {
            Some(v) => {
                let tree = self.witness(&c)?;
                (v, two_sided(tree, s, &p, &t)?)
            }
            None => {
                let b = Bindings::ctx(s.ante.clone(), s.cons.clone());
                (Ext::Zero, ProofTree::leaf(RuleName::Efq, b, &p, &t)?)
            }
        };
        Ok(ProvabilityResult {
            value: Value::from_power(value, &p),
            witness: witness.to_derivation(),
            explored: self.search.stats.clone(),
            trace: self.search.trace.clone().unwrap_or_default(),
        })
    }

    /// Lexicographically least encoding among the optimal proofs of `c`.
    fn witness(&mut self, c: &Cedent) -> Result<ProofTree, ProverError> {
        if let Some((_, t)) = self.witnesses.get(c) {
            return Ok(t.clone());
        }
        let best = self.search.value(c).expect("witness requested for a provable cedent");
        let alts = self.search.alternatives(c);
        let mut chosen: Option<(String, ProofTree)> = None;
        // Leaves encode as `(rule ...`, which sorts before any `(vert ...`,
        // so composite candidates are only needed when no leaf is optimal.
        for pass_leaves in [true, false] {
            for alt in alts.iter().filter(|a| a.is_leaf() == pass_leaves) {
                if self.search.alt_value(c, alt).as_ref() != Some(&best) {
                    continue;
                }
                let tree = self.build(c, alt)?;
                let enc = encode(&tree.to_derivation());
                if chosen.as_ref().is_none_or(|(e, _)| enc < *e) {
                    chosen = Some((enc, tree));
                }
            }
            if chosen.is_some() {
                break;
            }
        }
        let (enc, tree) = chosen.expect("an optimal alternative exists");
        self.witnesses.insert(c.clone(), (enc, tree.clone()));
        Ok(tree)
    }

    fn build(&mut self, c: &Cedent, alt: &Alt) -> Result<ProofTree, ProverError> {
        let p = self.search.p.clone();
        let t = self.search.theory.clone();
        let right = |d: Cedent| Bindings::ctx(Cedent::empty(), d);
        let leaf = |r: RuleName, b: Bindings| ProofTree::leaf(r, b, &p, &t);
        let tree = match alt {
            Alt::Efq => leaf(RuleName::Efq, right(c.clone()))?,
            Alt::Emp => leaf(RuleName::Emp, Bindings::default())?,
            Alt::OneR => leaf(RuleName::OneR, Bindings::default())?,
            Alt::TopR => leaf(RuleName::TopR, right(c.without(&Formula::Top).expect("top present")))?,
            Alt::AtomR(a) => leaf(RuleName::AtomR(a.clone()), Bindings::default())?,
            Alt::Ax(x) => {
                let ax = leaf(RuleName::Ax, Bindings::formula(x.clone()))?;
                let b = right(Cedent::single(x.clone())).with_a(x.clone());
                ProofTree::new(RuleName::DualR, b, vec![ax], &p, &t)?
            }
            Alt::AtomL(a) => {
                let ax = leaf(RuleName::AtomL(a.clone()), Bindings::default())?;
                let b = Bindings::formula(Formula::atom(a));
                ProofTree::new(RuleName::DualR, b, vec![ax], &p, &t)?
            }
            _ => {
                let (prem, _) = Search::<Ext>::premises(c, alt);
                let mut kids = Vec::new();
                for q in &prem {
                    kids.push(self.witness(q)?);
                }
                let (rule, b) = match alt {
                    Alt::ParR(f) | Alt::PlorR(f) | Alt::PlandR(f) | Alt::PlorR1(f) | Alt::PlorR2(f) => {
                        let (a, bb) = f.children().expect("binary");
                        let rule = match alt {
                            Alt::ParR(_) => RuleName::ParR,
                            Alt::PlorR(_) => RuleName::PlorR,
                            Alt::PlandR(_) => RuleName::PlandR,
                            Alt::PlorR1(_) => RuleName::PlorR1,
                            _ => RuleName::PlorR2,
                        };
                        (rule, right(c.without(f).expect("present")).with_a(a.clone()).with_b(bb.clone()))
                    }
                    Alt::TensorR(f, l, r) => {
                        let (a, bb) = f.children().expect("binary");
                        let b = right(l.clone())
                            .with_second(Cedent::empty(), r.clone())
                            .with_a(a.clone())
                            .with_b(bb.clone());
                        (RuleName::TensorR, b)
                    }
                    Alt::Mix(op, l, r) => {
                        let rule = if *op == RedOp::Tensor { RuleName::Mix } else { RuleName::MixStar };
                        (rule, right(l.clone()).with_second(Cedent::empty(), r.clone()))
                    }
                    _ => unreachable!("leaves handled above"),
                };
                ProofTree::new(rule, b, kids, &p, &t)?
            }
        };
        Ok(tree)
    }
}

/// Turns a proof of `⊢ Γ^⊥, Δ` into a proof of `Γ ⊢ Δ` by moving each
/// antecedent formula back across the turnstile.
fn two_sided(tree: ProofTree, s: &Sequent, p: &Hardness, t: &Theory) -> Result<ProofTree, CalculusError> {
    let mut cur = tree;
    let mut done = Cedent::empty();
    for g in s.ante.iter() {
        let moved = g.negate();
        let rest = cur.conclusion.cons.without(&moved).expect("negated antecedent present");
        let b = Bindings::ctx(done.clone(), rest).with_a(moved);
        cur = ProofTree::new(RuleName::DualL, b, vec![cur], p, t)?;
        done = done.with(g.clone());
    }
    Ok(cur)
}

pub fn provability(s: &Sequent, p: &Hardness, t: &Theory, o: &ProverOptions) -> Result<ProvabilityResult, ProverError> {
    Prover::new(p, t, o)?.prove(s)
}

/// Provability extended to structures: leaves by search, then the red
/// connectives.
pub fn structure_provability(h: &Structure, p: &Hardness, t: &Theory, o: &ProverOptions) -> Result<Value, ProverError> {
    let mut prover = Prover::new(p, t, o)?;
    h.eval_with(&mut |s: &Sequent| prover.value(s))
}

impl From<crate::alethic::AlethicError> for ProverError {
    fn from(e: crate::alethic::AlethicError) -> Self {
        ProverError::Calculus(CalculusError::Alethic(e))
    }
}

/// Whether the sequent has a proof of positive validity (at any finite p).
pub fn qualitative_provable(s: &Sequent, t: &Theory) -> bool {
    let mut search =
        Search::<Sign>::new(t.hardness(), t, &ProverOptions::default()).expect("theory hardness is its own");
    search.value(&s.one_sided()).is_some_and(|v| v > Sign::Zero)
}

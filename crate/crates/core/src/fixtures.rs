//! Reference proofs used as test data and golden files.

use std::collections::BTreeMap;

use crate::alethic::Hardness;
use crate::bayes::{event_formula, BayesError};
use crate::calculus::{Bindings, CalculusError, Derivation, ProofTree, RuleName, Theory};
use crate::syntax::{Cedent, Formula};

fn node(rule: RuleName, bind: Bindings, kids: Vec<ProofTree>, p: &Hardness, t: &Theory) -> ProofTree {
    ProofTree::new(rule, bind, kids, p, t).expect("fixture proofs are well formed")
}

fn atom(a: &str) -> Formula {
    Formula::atom(a)
}

fn one(f: Formula) -> Cedent {
    Cedent::single(f)
}

/// `a ⊢ a` as an axiom.
fn ax(f: Formula, p: &Hardness, t: &Theory) -> ProofTree {
    node(RuleName::Ax, Bindings::formula(f), vec![], p, t)
}

fn efq(g: Cedent, d: Cedent, p: &Hardness, t: &Theory) -> ProofTree {
    node(RuleName::Efq, Bindings::ctx(g, d), vec![], p, t)
}

/// `a ⊕ a ⊢ a` by a soft-conjunctive case split over two axioms.
pub fn soft_idempotency(p: &Hardness) -> ProofTree {
    let t = Theory::empty(p);
    let b = Bindings::ctx(Cedent::empty(), one(atom("a"))).with_a(atom("a")).with_b(atom("a"));
    node(RuleName::PlorL, b, vec![ax(atom("a"), p, &t), ax(atom("a"), p, &t)], p, &t)
}

/// `a ⊢ a ⊕ b`, the missing branch closed by EFQ.
pub fn injection(p: &Hardness) -> ProofTree {
    let t = Theory::empty(p);
    let b = Bindings::ctx(one(atom("a")), Cedent::empty()).with_a(atom("a")).with_b(atom("b"));
    let kids = vec![ax(atom("a"), p, &t), efq(one(atom("a")), one(atom("b")), p, &t)];
    node(RuleName::PlorR, b, kids, p, &t)
}

/// The eta-expanded proof of `a ⊓ b ⊢ a ⊓ b`.
pub fn eta(p: &Hardness) -> ProofTree {
    let t = Theory::empty(p);
    let ab = Formula::pland(atom("a"), atom("b"));
    let elim = |goal: &str, kids: Vec<ProofTree>| {
        let b = Bindings::ctx(Cedent::empty(), one(atom(goal))).with_a(atom("a")).with_b(atom("b"));
        node(RuleName::PlandL, b, kids, p, &t)
    };
    let left = elim("a", vec![ax(atom("a"), p, &t), efq(one(atom("b")), one(atom("a")), p, &t)]);
    let right = elim("b", vec![efq(one(atom("a")), one(atom("b")), p, &t), ax(atom("b"), p, &t)]);
    let b = Bindings::ctx(one(ab), Cedent::empty()).with_a(atom("a")).with_b(atom("b"));
    node(RuleName::PlandR, b, vec![left, right], p, &t)
}

/// A cut between `⊢ 1` and `1 ⊢`, concluding the empty sequent.
pub fn unit_cut(p: &Hardness) -> ProofTree {
    let t = Theory::empty(p);
    let one_r = node(RuleName::OneR, Bindings::default(), vec![], p, &t);
    let one_l = node(RuleName::OneL, Bindings::default(), vec![], p, &t);
    node(RuleName::Cut, Bindings::formula(Formula::One), vec![one_r, one_l], p, &t)
}

/// The named reference proofs of the pure calculus.
pub fn reference_proofs(p: &Hardness) -> BTreeMap<&'static str, Derivation> {
    BTreeMap::from([
        ("soft-idempotency", soft_idempotency(p).to_derivation()),
        ("inj", injection(p).to_derivation()),
        ("eta", eta(p).to_derivation()),
        ("unit-cut", unit_cut(p).to_derivation()),
    ])
}

/// The conditional-odds proof of `A ⊢ A∩B` in a theory valuing the
/// outcomes: split the consequent sum with PlorR, the antecedent sum with
/// PlorL, and close each `a ⊢ b` by MIX over `a ⊢` and `⊢ b`.
pub fn bayes_proof(t: &Theory, given: &[String], event: &[String]) -> Result<ProofTree, BayesError> {
    let p = t.hardness().clone();
    let inter: Vec<String> = event.iter().filter(|x| given.contains(x)).cloned().collect();
    let a = event_formula(given)?;
    let c = event_formula(&inter)?;
    for x in given {
        if t.value(x).is_none() {
            return Err(BayesError::UnknownOutcome(x.clone()));
        }
    }
    Ok(right_split(&a, &c, &p, t)?)
}

fn right_split(a: &Formula, c: &Formula, p: &Hardness, t: &Theory) -> Result<ProofTree, CalculusError> {
    match c {
        Formula::Plor(l, r) => {
            let kids = vec![right_split(a, l, p, t)?, right_split(a, r, p, t)?];
            let b = Bindings::ctx(one(a.clone()), Cedent::empty()).with_a((**l).clone()).with_b((**r).clone());
            ProofTree::new(RuleName::PlorR, b, kids, p, t)
        }
        _ => left_split(a, c, p, t),
    }
}

fn left_split(a: &Formula, c: &Formula, p: &Hardness, t: &Theory) -> Result<ProofTree, CalculusError> {
    match a {
        Formula::Plor(l, r) => {
            let kids = vec![left_split(l, c, p, t)?, left_split(r, c, p, t)?];
            let b = Bindings::ctx(Cedent::empty(), one(c.clone())).with_a((**l).clone()).with_b((**r).clone());
            ProofTree::new(RuleName::PlorL, b, kids, p, t)
        }
        Formula::Atom(x) => {
            let Formula::Atom(y) = c else { unreachable!("events are sums of atoms") };
            let l = ProofTree::leaf(RuleName::AtomL(x.clone()), Bindings::default(), p, t)?;
            let r = ProofTree::leaf(RuleName::AtomR(y.clone()), Bindings::default(), p, t)?;
            let b = Bindings::ctx(one(a.clone()), Cedent::empty()).with_second(Cedent::empty(), one(c.clone()));
            ProofTree::new(RuleName::Mix, b, vec![l, r], p, t)
        }
        _ => unreachable!("events are sums of atoms"),
    }
}

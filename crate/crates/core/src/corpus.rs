//! Deterministic generators: test sequents and proofs containing cuts.

use std::collections::BTreeSet;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::alethic::Hardness;
use crate::calculus::{Bindings, ProofTree, RuleName, Theory};
use crate::prover::{Prover, ProverError, ProverOptions};
use crate::syntax::{Cedent, Formula, Sequent};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// A formula with exactly `connectives` binary connectives.
pub fn random_formula(rng: &mut impl Rng, atoms: &[&str], connectives: usize) -> Formula {
    if connectives == 0 {
        let a = atoms.choose(rng).expect("at least one atom");
        return match rng.gen_range(0..20) {
            0..=12 => Formula::atom(a),
            13..=17 => Formula::neg_atom(a),
            18 => Formula::One,
            _ => [Formula::Bot, Formula::Top].choose(rng).expect("nonempty").clone(),
        };
    }
    let left = rng.gen_range(0..connectives);
    let a = random_formula(rng, atoms, left);
    let b = random_formula(rng, atoms, connectives - 1 - left);
    match rng.gen_range(0..4) {
        0 => Formula::tensor(a, b),
        1 => Formula::par(a, b),
        2 => Formula::plor(a, b),
        _ => Formula::pland(a, b),
    }
}

/// A sequent of complexity at most `max_complexity` with 1 to 3 formulas.
pub fn random_sequent(rng: &mut impl Rng, atoms: &[&str], max_complexity: usize) -> Sequent {
    let nf = rng.gen_range(1..=3.min(max_complexity));
    let mut budget = rng.gen_range(0..=max_complexity - nf);
    let mut ante = Vec::new();
    let mut cons = Vec::new();
    for i in 0..nf {
        let k = if i + 1 == nf { budget } else { rng.gen_range(0..=budget) };
        budget -= k;
        let f = random_formula(rng, atoms, k);
        if rng.gen_bool(0.4) {
            ante.push(f);
        } else {
            cons.push(f);
        }
    }
    Sequent::new(Cedent::new(ante), Cedent::new(cons))
}

/// `count` distinct sequents over atoms `a`, `b`.
pub fn sequent_corpus(count: usize, max_complexity: usize, seed: u64) -> Vec<Sequent> {
    let mut r = rng(seed);
    let mut seen = BTreeSet::new();
    let mut out = Vec::new();
    while out.len() < count {
        let s = random_sequent(&mut r, &["a", "b"], max_complexity);
        if seen.insert(s.clone()) {
            out.push(s);
        }
    }
    out
}

/// Builds random proofs with cuts over a fixed hardness and theory.
pub struct CutProofs<'a> {
    p: &'a Hardness,
    t: &'a Theory,
    prover: Prover,
    atoms: Vec<String>,
}

impl<'a> CutProofs<'a> {
    pub fn new(p: &'a Hardness, t: &'a Theory) -> Result<Self, ProverError> {
        let mut atoms: Vec<String> = t.atoms().map(|(a, _)| a.clone()).collect();
        for extra in ["a", "b"] {
            if !atoms.iter().any(|a| a == extra) {
                atoms.push(extra.to_string());
            }
        }
        Ok(CutProofs { p, t, prover: Prover::new(p, t, &ProverOptions::default())?, atoms })
    }

    fn node(&self, rule: RuleName, bind: Bindings, kids: Vec<ProofTree>) -> ProofTree {
        ProofTree::new(rule, bind, kids, self.p, self.t).expect("generated rule instances are well formed")
    }

    fn witness(&mut self, s: Sequent) -> ProofTree {
        let d = self.prover.prove(&s).expect("generated sequents are small").witness;
        ProofTree::from_derivation(&d).expect("witnesses are proofs")
    }

    fn small_formula(&self, rng: &mut impl Rng, max: usize) -> Formula {
        let atoms: Vec<&str> = self.atoms.iter().map(String::as_str).collect();
        let k = rng.gen_range(0..=max);
        random_formula(rng, &atoms, k)
    }

    fn small_cedent(&self, rng: &mut impl Rng) -> Cedent {
        let atoms: Vec<&str> = self.atoms.iter().map(String::as_str).collect();
        match rng.gen_range(0..3) {
            0 => Cedent::single(random_formula(rng, &atoms, 0)),
            _ => Cedent::empty(),
        }
    }

    /// A proof of `Γ ⊢ Δ, a`, often ending with the right rule for `a`.
    fn intro_right(&mut self, rng: &mut impl Rng, a: &Formula, g: Cedent, d: Cedent) -> ProofTree {
        let Some((x, y)) = a.children().filter(|_| rng.gen_bool(0.7)) else {
            return self.witness(Sequent::new(g, d.with(a.clone())));
        };
        let (x, y) = (x.clone(), y.clone());
        let bind = Bindings::ctx(g.clone(), d.clone()).with_a(x.clone()).with_b(y.clone());
        match a {
            Formula::Tensor(..) => {
                let l = self.witness(Sequent::new(g.clone(), d.with(x.clone())));
                let r = self.witness(Sequent::right(Cedent::single(y.clone())));
                let bind = bind.with_second(Cedent::empty(), Cedent::empty());
                self.node(RuleName::TensorR, bind, vec![l, r])
            }
            Formula::Par(..) => {
                let k = self.witness(Sequent::new(g, d.with(x).with(y)));
                self.node(RuleName::ParR, bind, vec![k])
            }
            _ => {
                let l = self.witness(Sequent::new(g.clone(), d.with(x)));
                let r = self.witness(Sequent::new(g, d.with(y)));
                let rule = if matches!(a, Formula::Plor(..)) { RuleName::PlorR } else { RuleName::PlandR };
                self.node(rule, bind, vec![l, r])
            }
        }
    }

    /// A proof of `Γ, a ⊢ Δ`, often ending with the left rule for `a`.
    fn intro_left(&mut self, rng: &mut impl Rng, a: &Formula, g: Cedent, d: Cedent) -> ProofTree {
        let Some((x, y)) = a.children().filter(|_| rng.gen_bool(0.7)) else {
            return self.witness(Sequent::new(g.with(a.clone()), d));
        };
        let (x, y) = (x.clone(), y.clone());
        let bind = Bindings::ctx(g.clone(), d.clone()).with_a(x.clone()).with_b(y.clone());
        match a {
            Formula::Tensor(..) => {
                let k = self.witness(Sequent::new(g.with(x).with(y), d));
                self.node(RuleName::TensorL, bind, vec![k])
            }
            Formula::Par(..) => {
                let l = self.witness(Sequent::new(g.with(x), d));
                let r = self.witness(Sequent::new(Cedent::single(y), Cedent::empty()));
                let bind = bind.with_second(Cedent::empty(), Cedent::empty());
                self.node(RuleName::ParL, bind, vec![l, r])
            }
            _ => {
                let l = self.witness(Sequent::new(g.with(x), d.clone()));
                let r = self.witness(Sequent::new(g.with(y), d));
                let rule = if matches!(a, Formula::Plor(..)) { RuleName::PlorL } else { RuleName::PlandL };
                self.node(rule, bind, vec![l, r])
            }
        }
    }

    fn cut(&self, l: ProofTree, r: ProofTree, a: &Formula) -> ProofTree {
        let d = l.conclusion.cons.without(a).expect("cut formula present");
        let g2 = r.conclusion.ante.without(a).expect("cut formula present");
        let b =
            Bindings::ctx(l.conclusion.ante.clone(), d).with_second(g2, r.conclusion.cons.clone()).with_a(a.clone());
        self.node(RuleName::Cut, b, vec![l, r])
    }

    /// Applies a rule that leaves existing formulas in its context.
    fn wrap(&mut self, rng: &mut impl Rng, pr: ProofTree) -> ProofTree {
        let s = pr.conclusion.clone();
        match rng.gen_range(0..4) {
            0 if !s.cons.is_empty() => {
                let f = s.cons.as_slice()[rng.gen_range(0..s.cons.len())].clone();
                let b = Bindings::ctx(s.ante.clone(), s.cons.without(&f).expect("present")).with_a(f);
                self.node(RuleName::DualL, b, vec![pr])
            }
            1 if s.cons.len() >= 2 => {
                let (x, y) = (s.cons.as_slice()[0].clone(), s.cons.as_slice()[1].clone());
                let d = s.cons.without(&x).and_then(|c| c.without(&y)).expect("present");
                let b = Bindings::ctx(s.ante.clone(), d).with_a(x).with_b(y);
                self.node(RuleName::ParR, b, vec![pr])
            }
            2 if s.ante.len() >= 2 => {
                let (x, y) = (s.ante.as_slice()[0].clone(), s.ante.as_slice()[1].clone());
                let g = s.ante.without(&x).and_then(|c| c.without(&y)).expect("present");
                let b = Bindings::ctx(g, s.cons.clone()).with_a(x).with_b(y);
                self.node(RuleName::TensorL, b, vec![pr])
            }
            _ => match s.cons.as_slice().first().cloned() {
                Some(m) if rng.gen_bool(0.5) => {
                    // Δ, m ⊕ x from the proof of m and EFQ for x.
                    let other = self.small_formula(rng, 0);
                    let rest = s.cons.without(&m).expect("present");
                    let e =
                        self.node(RuleName::Efq, Bindings::ctx(s.ante.clone(), rest.with(other.clone())), Vec::new());
                    let b = Bindings::ctx(s.ante.clone(), rest).with_a(m).with_b(other);
                    self.node(RuleName::PlorR, b, vec![pr, e])
                }
                _ => {
                    let b = Bindings::ctx(s.ante.clone(), s.cons.clone()).with_second(Cedent::empty(), Cedent::empty());
                    let emp = self.node(RuleName::Emp, Bindings::default(), Vec::new());
                    self.node(RuleName::Mix, b, vec![pr, emp])
                }
            },
        }
    }

    /// One cut between principal-looking proofs of a random formula.
    fn base(&mut self, rng: &mut impl Rng) -> ProofTree {
        let a = self.small_formula(rng, 2);
        let (g1, d1) = (self.small_cedent(rng), self.small_cedent(rng));
        let (g2, d2) = (self.small_cedent(rng), self.small_cedent(rng));
        let l = self.intro_right(rng, &a, g1, d1);
        let r = self.intro_left(rng, &a, g2, d2);
        self.cut(l, r, &a)
    }

    /// A proof with between 1 and `max_cuts` cuts.
    pub fn proof(&mut self, rng: &mut impl Rng, max_cuts: usize) -> ProofTree {
        let cuts = rng.gen_range(1..=max_cuts.max(1));
        let mut pr = self.base(rng);
        for _ in 1..cuts {
            if rng.gen_bool(0.5) {
                pr = self.wrap(rng, pr);
            }
            let s = pr.conclusion.clone();
            let on_right = !s.cons.is_empty() && (s.ante.is_empty() || rng.gen_bool(0.5));
            pr = if on_right {
                let f = s.cons.as_slice()[rng.gen_range(0..s.cons.len())].clone();
                let d = self.small_cedent(rng);
                let r = self.intro_left(rng, &f, Cedent::empty(), d);
                self.cut(pr, r, &f)
            } else if !s.ante.is_empty() {
                let f = s.ante.as_slice()[rng.gen_range(0..s.ante.len())].clone();
                let g = self.small_cedent(rng);
                let l = self.intro_right(rng, &f, g, Cedent::empty());
                self.cut(l, pr, &f)
            } else {
                // Empty conclusion: cut inside a MIX with a fresh cut.
                let other = self.base(rng);
                let (ga, da) = (pr.conclusion.ante.clone(), pr.conclusion.cons.clone());
                let b = Bindings::ctx(ga, da).with_second(other.conclusion.ante.clone(), other.conclusion.cons.clone());
                self.node(RuleName::Mix, b, vec![pr, other])
            };
        }
        if rng.gen_bool(0.3) {
            pr = self.wrap(rng, pr);
        }
        pr
    }
}

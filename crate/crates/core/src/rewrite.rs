//! Cut elimination as a rewrite on proof trees, and the structural schema
//! transformation.
//!
//! Each step rewrites the deepest cut (leftmost among equals). Both of its
//! sub-proofs are then cut-free. The cases, tried in order:
//!
//! * an axiom on either side: keep the other proof;
//! * EFQ on either side: a single EFQ;
//! * the cut formula sits in the context of the left (then right) proof's
//!   last rule: push the cut into the premises carrying it;
//! * the left proof ends in DualR on the cut formula: move the formula across
//!   the turnstile in the right proof and cut on its negation (dually for
//!   DualL on the right);
//! * both last rules introduce the cut formula: the principal reductions.

use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::alethic::{Ext, Hardness, Value};
use crate::calculus::{instantiate, Bindings, CalculusError, Derivation, ProofTree, RuleName, Theory};
use crate::syntax::{Cedent, Formula, RedOp, Sequent, Structure};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum RewriteError {
    #[error(transparent)]
    Calculus(#[from] CalculusError),
    #[error("no rewrite applies to the cut on {formula} between {left} and {right}")]
    Stuck { formula: Formula, left: RuleName, right: RuleName },
    #[error("rewrite did not finish within {0} steps")]
    StepLimit(usize),
    #[error("schema inequality fails at {valuation}: {lhs} > {rhs}")]
    SchemaViolation { valuation: String, lhs: String, rhs: String },
    #[error("schema input: {0}")]
    SchemaInput(String),
}

/// Lexicographic termination measure: highest cut rank, number of cuts of
/// that rank, number of cuts, summed sizes of the cut subtrees.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct CutMetric {
    pub r_m: usize,
    pub n_m: usize,
    pub n: usize,
    pub d: usize,
}

impl fmt::Display for CutMetric {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "<{},{},{},{}>", self.r_m, self.n_m, self.n, self.d)
    }
}

/// Rank of a cut formula: its number of connectives plus one.
pub fn rank(a: &Formula) -> usize {
    a.connectives() + 1
}

pub fn cut_metric(tree: &ProofTree) -> CutMetric {
    fn walk(t: &ProofTree, out: &mut Vec<(usize, usize)>) {
        if t.rule == RuleName::Cut {
            out.push((rank(t.bind.a.as_ref().expect("cut formula")), t.size()));
        }
        for c in &t.children {
            walk(c, out);
        }
    }
    let mut cuts = Vec::new();
    walk(tree, &mut cuts);
    let r_m = cuts.iter().map(|c| c.0).max().unwrap_or(0);
    CutMetric { r_m, n_m: cuts.iter().filter(|c| c.0 == r_m).count(), n: cuts.len(), d: cuts.iter().map(|c| c.1).sum() }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Step {
    pub case: &'static str,
    pub before: CutMetric,
    pub after: CutMetric,
    pub validity_before: Value,
    pub validity_after: Value,
}

impl fmt::Display for Step {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "step {} metric {} -> {} validity {} -> {}",
            self.case,
            self.before,
            self.after,
            self.validity_before.exact(),
            self.validity_after.exact()
        )
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct RewriteTrace {
    pub steps: Vec<Step>,
}

impl RewriteTrace {
    pub fn metric_decreases(&self) -> bool {
        self.steps.iter().all(|s| s.after < s.before)
    }

    pub fn validity_monotone(&self) -> bool {
        self.steps.iter().all(|s| s.validity_before.power() <= s.validity_after.power())
    }
}

impl fmt::Display for RewriteTrace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for s in &self.steps {
            writeln!(f, "{s}")?;
        }
        Ok(())
    }
}

/// Upper bound on rewrite steps before giving up.
pub const STEP_LIMIT: usize = 100_000;

struct Ctx<'a> {
    p: &'a Hardness,
    t: &'a Theory,
}

impl Ctx<'_> {
    fn node(&self, rule: RuleName, bind: Bindings, kids: Vec<ProofTree>) -> Result<ProofTree, RewriteError> {
        Ok(ProofTree::new(rule, bind, kids, self.p, self.t)?)
    }

    fn leaf(&self, rule: RuleName, bind: Bindings) -> Result<ProofTree, RewriteError> {
        self.node(rule, bind, Vec::new())
    }

    /// `Cut` on `a` between proofs of `Γ ⊢ Δ, a` and `Γ', a ⊢ Δ'`.
    fn cut(&self, l: ProofTree, r: ProofTree, a: &Formula) -> Result<ProofTree, RewriteError> {
        let d = l.conclusion.cons.without(a).expect("cut formula on the right of the left proof");
        let g2 = r.conclusion.ante.without(a).expect("cut formula on the left of the right proof");
        let b =
            Bindings::ctx(l.conclusion.ante.clone(), d).with_second(g2, r.conclusion.cons.clone()).with_a(a.clone());
        self.node(RuleName::Cut, b, vec![l, r])
    }

    fn efq(&self, s: &Sequent) -> Result<ProofTree, RewriteError> {
        self.leaf(RuleName::Efq, Bindings::ctx(s.ante.clone(), s.cons.clone()))
    }

    /// Rebuilds `node` with one context slot pair changed. Children whose
    /// premise sequent changes are rebuilt by `fix`, which must prove the new
    /// premise.
    fn recontext(
        &self,
        node: &ProofTree,
        second: bool,
        gamma: impl Fn(&Cedent) -> Cedent,
        delta: impl Fn(&Cedent) -> Cedent,
        mut fix: impl FnMut(&ProofTree) -> Result<ProofTree, RewriteError>,
    ) -> Result<ProofTree, RewriteError> {
        let mut b = node.bind.clone();
        if second {
            b.gamma2 = gamma(&b.gamma2);
            b.delta2 = delta(&b.delta2);
        } else {
            b.gamma = gamma(&b.gamma);
            b.delta = delta(&b.delta);
        }
        let (premise, _) = instantiate(&node.rule, &b, self.p, self.t)
            .map_err(|message| CalculusError::Malformed { path: node.rule.name().into(), message })?;
        let mut kids = Vec::new();
        for (leaf, c) in premise.leaves().into_iter().zip(&node.children) {
            kids.push(if *leaf == c.conclusion { c.clone() } else { fix(c)? });
        }
        self.node(node.rule.clone(), b, kids)
    }

    /// From a proof of `Γ, a ⊢ Δ`, a proof of `Γ ⊢ Δ, a^⊥` of equal validity.
    fn flip_left(&self, r: &ProofTree, a: &Formula) -> Result<ProofTree, RewriteError> {
        let na = a.negate();
        let b = &r.bind;
        let s = &r.conclusion;
        let moved = Sequent::new(s.ante.without(a).expect("formula on the left"), s.cons.with(na.clone()));
        let two = |x: &Formula, y: &Formula| (x.negate(), y.negate());
        let out = match &r.rule {
            RuleName::Ax => self.node(
                RuleName::DualR,
                Bindings::ctx(Cedent::empty(), Cedent::single(a.clone())).with_a(a.clone()),
                vec![r.clone()],
            )?,
            RuleName::Efq => self.efq(&moved)?,
            RuleName::DualL if b.a.as_ref().map(Formula::negate).as_ref() == Some(a) => r.children[0].clone(),
            _ if b.gamma.contains(a) => self.recontext(
                r,
                false,
                |g| g.without(a).expect("present"),
                |d| d.with(na.clone()),
                |c| self.flip_left(c, a),
            )?,
            _ if b.gamma2.contains(a) => self.recontext(
                r,
                true,
                |g| g.without(a).expect("present"),
                |d| d.with(na.clone()),
                |c| self.flip_left(c, a),
            )?,
            RuleName::TensorL => {
                let (x, y) = a.children().expect("tensor");
                let inner = self.flip_left(&self.flip_left(&r.children[0], x)?, y)?;
                let (nx, ny) = two(x, y);
                self.node(
                    RuleName::ParR,
                    Bindings::ctx(b.gamma.clone(), b.delta.clone()).with_a(nx).with_b(ny),
                    vec![inner],
                )?
            }
            RuleName::ParL => {
                let (x, y) = a.children().expect("par");
                let l = self.flip_left(&r.children[0], x)?;
                let rr = self.flip_left(&r.children[1], y)?;
                let (nx, ny) = two(x, y);
                let bb = Bindings::ctx(b.gamma.clone(), b.delta.clone())
                    .with_second(b.gamma2.clone(), b.delta2.clone())
                    .with_a(nx)
                    .with_b(ny);
                self.node(RuleName::TensorR, bb, vec![l, rr])?
            }
            RuleName::PlorL | RuleName::PlandL => {
                let (x, y) = a.children().expect("additive");
                let l = self.flip_left(&r.children[0], x)?;
                let rr = self.flip_left(&r.children[1], y)?;
                let (nx, ny) = two(x, y);
                let rule = if r.rule == RuleName::PlorL { RuleName::PlandR } else { RuleName::PlorR };
                self.node(rule, Bindings::ctx(b.gamma.clone(), b.delta.clone()).with_a(nx).with_b(ny), vec![l, rr])?
            }
            RuleName::PlandL1 | RuleName::PlandL2 => {
                let (x, y) = a.children().expect("additive");
                let kept = if r.rule == RuleName::PlandL1 { x } else { y };
                let k = self.flip_left(&r.children[0], kept)?;
                let (nx, ny) = two(x, y);
                let rule = if r.rule == RuleName::PlandL1 { RuleName::PlorR1 } else { RuleName::PlorR2 };
                self.node(rule, Bindings::ctx(b.gamma.clone(), b.delta.clone()).with_a(nx).with_b(ny), vec![k])?
            }
            RuleName::OneL => self.leaf(RuleName::OneR, Bindings::default())?,
            RuleName::BotL => self.leaf(RuleName::TopR, Bindings::ctx(b.gamma.clone(), b.delta.clone()))?,
            RuleName::AtomL(x) => self.node(RuleName::DualR, Bindings::formula(Formula::atom(x)), vec![r.clone()])?,
            other => return Err(RewriteError::Stuck { formula: a.clone(), left: other.clone(), right: other.clone() }),
        };
        debug_assert_eq!(out.conclusion, moved);
        Ok(out)
    }

    /// From a proof of `Γ ⊢ Δ, a`, a proof of `Γ, a^⊥ ⊢ Δ` of equal validity.
    fn flip_right(&self, l: &ProofTree, a: &Formula) -> Result<ProofTree, RewriteError> {
        let na = a.negate();
        let b = &l.bind;
        let s = &l.conclusion;
        let moved = Sequent::new(s.ante.with(na.clone()), s.cons.without(a).expect("formula on the right"));
        let two = |x: &Formula, y: &Formula| (x.negate(), y.negate());
        let out = match &l.rule {
            RuleName::Ax => self.node(
                RuleName::DualL,
                Bindings::ctx(Cedent::single(a.clone()), Cedent::empty()).with_a(a.clone()),
                vec![l.clone()],
            )?,
            RuleName::Efq => self.efq(&moved)?,
            RuleName::DualR if b.a.as_ref().map(Formula::negate).as_ref() == Some(a) => l.children[0].clone(),
            _ if b.delta.contains(a) => self.recontext(
                l,
                false,
                |g| g.with(na.clone()),
                |d| d.without(a).expect("present"),
                |c| self.flip_right(c, a),
            )?,
            _ if b.delta2.contains(a) => self.recontext(
                l,
                true,
                |g| g.with(na.clone()),
                |d| d.without(a).expect("present"),
                |c| self.flip_right(c, a),
            )?,
            RuleName::ParR => {
                let (x, y) = a.children().expect("par");
                let inner = self.flip_right(&self.flip_right(&l.children[0], x)?, y)?;
                let (nx, ny) = two(x, y);
                self.node(
                    RuleName::TensorL,
                    Bindings::ctx(b.gamma.clone(), b.delta.clone()).with_a(nx).with_b(ny),
                    vec![inner],
                )?
            }
            RuleName::TensorR => {
                let (x, y) = a.children().expect("tensor");
                let ll = self.flip_right(&l.children[0], x)?;
                let r = self.flip_right(&l.children[1], y)?;
                let (nx, ny) = two(x, y);
                let bb = Bindings::ctx(b.gamma.clone(), b.delta.clone())
                    .with_second(b.gamma2.clone(), b.delta2.clone())
                    .with_a(nx)
                    .with_b(ny);
                self.node(RuleName::ParL, bb, vec![ll, r])?
            }
            RuleName::PlorR | RuleName::PlandR => {
                let (x, y) = a.children().expect("additive");
                let ll = self.flip_right(&l.children[0], x)?;
                let r = self.flip_right(&l.children[1], y)?;
                let (nx, ny) = two(x, y);
                let rule = if l.rule == RuleName::PlorR { RuleName::PlandL } else { RuleName::PlorL };
                self.node(rule, Bindings::ctx(b.gamma.clone(), b.delta.clone()).with_a(nx).with_b(ny), vec![ll, r])?
            }
            RuleName::PlorR1 | RuleName::PlorR2 => {
                let (x, y) = a.children().expect("additive");
                let kept = if l.rule == RuleName::PlorR1 { x } else { y };
                let k = self.flip_right(&l.children[0], kept)?;
                let (nx, ny) = two(x, y);
                let rule = if l.rule == RuleName::PlorR1 { RuleName::PlandL1 } else { RuleName::PlandL2 };
                self.node(rule, Bindings::ctx(b.gamma.clone(), b.delta.clone()).with_a(nx).with_b(ny), vec![k])?
            }
            RuleName::OneR => self.leaf(RuleName::OneL, Bindings::default())?,
            RuleName::TopR => self.leaf(RuleName::BotL, Bindings::ctx(b.gamma.clone(), b.delta.clone()))?,
            RuleName::AtomR(x) => self.node(
                RuleName::DualL,
                Bindings::ctx(Cedent::empty(), Cedent::empty()).with_a(Formula::atom(x)),
                vec![l.clone()],
            )?,
            other => return Err(RewriteError::Stuck { formula: a.clone(), left: other.clone(), right: other.clone() }),
        };
        debug_assert_eq!(out.conclusion, moved);
        Ok(out)
    }

    /// Rewrites a cut whose two sub-proofs are cut-free.
    fn reduce(&self, cut: &ProofTree) -> Result<(ProofTree, &'static str), RewriteError> {
        let a = cut.bind.a.clone().expect("cut formula");
        let (l, r) = (&cut.children[0], &cut.children[1]);
        let concl = &cut.conclusion;
        if l.rule == RuleName::Ax {
            return Ok((r.clone(), "axiom-left"));
        }
        if r.rule == RuleName::Ax {
            return Ok((l.clone(), "axiom-right"));
        }
        if l.rule == RuleName::Efq || r.rule == RuleName::Efq {
            return Ok((self.efq(concl)?, "efq"));
        }
        let (g2, d2) = (r.conclusion.ante.without(&a).expect("cut formula"), r.conclusion.cons.clone());
        let (g1, d1) = (l.conclusion.ante.clone(), l.conclusion.cons.without(&a).expect("cut formula"));
        for second in [false, true] {
            let ctx = if second { &l.bind.delta2 } else { &l.bind.delta };
            if ctx.contains(&a) {
                let out = self.recontext(
                    l,
                    second,
                    |g| g.union(&g2),
                    |d| d.without(&a).expect("present").union(&d2),
                    |c| self.cut(c.clone(), r.clone(), &a),
                )?;
                return Ok((out, commute_label(&l.rule, "left")));
            }
        }
        for second in [false, true] {
            let ctx = if second { &r.bind.gamma2 } else { &r.bind.gamma };
            if ctx.contains(&a) {
                let out = self.recontext(
                    r,
                    second,
                    |g| g.without(&a).expect("present").union(&g1),
                    |d| d.union(&d1),
                    |c| self.cut(l.clone(), c.clone(), &a),
                )?;
                return Ok((out, commute_label(&r.rule, "right")));
            }
        }
        // Either side of a duality cut can be translated; the other side is
        // used only when that yields a strictly smaller cut.
        let smaller = |default: ProofTree, other: ProofTree| {
            if other.size() < default.size() && other.size() < cut.size() {
                other
            } else {
                default
            }
        };
        if l.rule == RuleName::DualR {
            let x = a.negate();
            let default = self.cut(self.flip_left(r, &a)?, l.children[0].clone(), &x)?;
            let other = self.cut(self.flip_left(&l.children[0], &x)?, r.clone(), &a)?;
            return Ok((smaller(default, other), "duality-left"));
        }
        if r.rule == RuleName::DualL {
            let x = a.negate();
            let default = self.cut(r.children[0].clone(), self.flip_right(l, &a)?, &x)?;
            let other = self.cut(l.clone(), self.flip_right(&r.children[0], &x)?, &a)?;
            return Ok((smaller(default, other), "duality-right"));
        }
        let stuck = || RewriteError::Stuck { formula: a.clone(), left: l.rule.clone(), right: r.rule.clone() };
        let out = match (&l.rule, &r.rule) {
            (RuleName::TensorR, RuleName::TensorL) => {
                let (x, y) = a.children().ok_or_else(stuck)?;
                let inner = self.cut(l.children[0].clone(), r.children[0].clone(), x)?;
                (self.cut(l.children[1].clone(), inner, y)?, "principal-tensor")
            }
            (RuleName::ParR, RuleName::ParL) => {
                let (x, y) = a.children().ok_or_else(stuck)?;
                let inner = self.cut(l.children[0].clone(), r.children[0].clone(), x)?;
                (self.cut(inner, r.children[1].clone(), y)?, "principal-par")
            }
            (RuleName::PlorR, RuleName::PlorL) | (RuleName::PlandR, RuleName::PlandL) => {
                let (x, y) = a.children().ok_or_else(stuck)?;
                let first = self.cut(l.children[0].clone(), r.children[0].clone(), x)?;
                let second = self.cut(l.children[1].clone(), r.children[1].clone(), y)?;
                let keep_first = first.power(self.p) >= second.power(self.p);
                let label = if l.rule == RuleName::PlorR { "principal-soft-or" } else { "principal-soft-and" };
                (if keep_first { first } else { second }, label)
            }
            (RuleName::PlorR1 | RuleName::PlorR2, RuleName::PlorL) => {
                let (x, y) = a.children().ok_or_else(stuck)?;
                let (f, i) = if l.rule == RuleName::PlorR1 { (x, 0) } else { (y, 1) };
                (self.cut(l.children[0].clone(), r.children[i].clone(), f)?, "principal-soft-or")
            }
            (RuleName::PlandR, RuleName::PlandL1 | RuleName::PlandL2) => {
                let (x, y) = a.children().ok_or_else(stuck)?;
                let (f, i) = if r.rule == RuleName::PlandL1 { (x, 0) } else { (y, 1) };
                (self.cut(l.children[i].clone(), r.children[0].clone(), f)?, "principal-soft-and")
            }
            (RuleName::OneR, RuleName::OneL) => (self.leaf(RuleName::Emp, Bindings::default())?, "principal-unit"),
            (RuleName::AtomR(_), RuleName::AtomL(_)) => {
                (self.leaf(RuleName::Emp, Bindings::default())?, "principal-atom")
            }
            _ => return Err(stuck()),
        };
        Ok(out)
    }
}

fn commute_label(rule: &RuleName, side: &str) -> &'static str {
    let additive = matches!(rule, RuleName::PlorL | RuleName::PlandL | RuleName::PlorR | RuleName::PlandR);
    match (side, additive) {
        ("left", false) => "commute-left",
        ("left", true) => "commute-left-additive",
        (_, false) => "commute-right",
        (_, true) => "commute-right-additive",
    }
}

/// Path (child indices) to the deepest cut, leftmost among equals.
fn deepest_cut(t: &ProofTree) -> Option<Vec<usize>> {
    fn walk(t: &ProofTree, path: &mut Vec<usize>, best: &mut Option<Vec<usize>>) {
        if t.rule == RuleName::Cut && best.as_ref().is_none_or(|b| path.len() > b.len()) {
            *best = Some(path.clone());
        }
        for (i, c) in t.children.iter().enumerate() {
            path.push(i);
            walk(c, path, best);
            path.pop();
        }
    }
    let mut best = None;
    walk(t, &mut Vec::new(), &mut best);
    best
}

fn replace_at(t: &ProofTree, path: &[usize], new: ProofTree) -> ProofTree {
    match path.split_first() {
        None => new,
        Some((&i, rest)) => {
            let mut out = t.clone();
            out.children[i] = replace_at(&t.children[i], rest, new);
            out
        }
    }
}

fn subtree<'a>(t: &'a ProofTree, path: &[usize]) -> &'a ProofTree {
    path.iter().fold(t, |n, &i| &n.children[i])
}

/// One rewrite of the deepest cut; `None` when the tree is cut-free.
pub fn cut_step_tree(tree: &ProofTree, p: &Hardness, t: &Theory) -> Result<Option<(ProofTree, Step)>, RewriteError> {
    let Some(path) = deepest_cut(tree) else { return Ok(None) };
    let ctx = Ctx { p, t };
    let (replacement, case) = ctx.reduce(subtree(tree, &path))?;
    let out = replace_at(tree, &path, replacement);
    let step = Step {
        case,
        before: cut_metric(tree),
        after: cut_metric(&out),
        validity_before: Value::from_power(tree.power(p), p),
        validity_after: Value::from_power(out.power(p), p),
    };
    Ok(Some((out, step)))
}

fn checked_tree(d: &Derivation, p: &Hardness, t: &Theory) -> Result<ProofTree, RewriteError> {
    d.check(p, t).map_err(CalculusError::Invalid)?;
    Ok(ProofTree::from_derivation(d)?)
}

pub fn cut_step(d: &Derivation, p: &Hardness, t: &Theory) -> Result<Option<(Derivation, Step)>, RewriteError> {
    let tree = checked_tree(d, p, t)?;
    Ok(cut_step_tree(&tree, p, t)?.map(|(out, s)| (out.to_derivation(), s)))
}

pub fn cut_eliminate_tree(
    tree: &ProofTree,
    p: &Hardness,
    t: &Theory,
) -> Result<(ProofTree, RewriteTrace), RewriteError> {
    let mut cur = tree.clone();
    let mut trace = RewriteTrace::default();
    while let Some((next, step)) = cut_step_tree(&cur, p, t)? {
        trace.steps.push(step);
        if trace.steps.len() > STEP_LIMIT {
            return Err(RewriteError::StepLimit(STEP_LIMIT));
        }
        cur = next;
    }
    Ok((cur, trace))
}

pub fn cut_eliminate(d: &Derivation, p: &Hardness, t: &Theory) -> Result<(Derivation, RewriteTrace), RewriteError> {
    let tree = checked_tree(d, p, t)?;
    let (out, trace) = cut_eliminate_tree(&tree, p, t)?;
    let out = out.to_derivation();
    out.check(p, t).map_err(CalculusError::Invalid)?;
    Ok((out, trace))
}

/// A term over structure variables `x0, x1, ...` and red connectives.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SchemaTerm {
    Var(usize),
    Op(RedOp, Box<SchemaTerm>, Box<SchemaTerm>),
}

impl SchemaTerm {
    pub fn var(i: usize) -> SchemaTerm {
        SchemaTerm::Var(i)
    }

    pub fn op(op: RedOp, a: SchemaTerm, b: SchemaTerm) -> SchemaTerm {
        SchemaTerm::Op(op, Box::new(a), Box::new(b))
    }

    /// Variables in left-to-right order of occurrence.
    pub fn occurrences(&self) -> Vec<usize> {
        match self {
            SchemaTerm::Var(i) => vec![*i],
            SchemaTerm::Op(_, a, b) => {
                let mut v = a.occurrences();
                v.extend(b.occurrences());
                v
            }
        }
    }

    pub fn eval(&self, xs: &[Ext], p: &Hardness) -> Ext {
        match self {
            SchemaTerm::Var(i) => xs[*i].clone(),
            SchemaTerm::Op(op, a, b) => op.apply(&a.eval(xs, p), &b.eval(xs, p), p),
        }
    }
}

impl fmt::Display for SchemaTerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SchemaTerm::Var(i) => write!(f, "x{i}"),
            SchemaTerm::Op(op, a, b) => write!(f, "({op} {a} {b})"),
        }
    }
}

/// Number of random valuations tried before accepting a schema.
pub const SCHEMA_SAMPLES: usize = 1000;

/// Checks `t ≤ s` on the corners `{0, 1, ∞}^n` and on random valuations.
pub fn check_schema(ts: &SchemaTerm, ss: &SchemaTerm, n: usize, p: &Hardness) -> Result<(), RewriteError> {
    let check = |xs: &[Ext]| {
        let (lhs, rhs) = (ts.eval(xs, p), ss.eval(xs, p));
        if lhs <= rhs {
            Ok(())
        } else {
            let shown: Vec<String> = xs.iter().enumerate().map(|(i, x)| format!("x{i}={x}")).collect();
            Err(RewriteError::SchemaViolation {
                valuation: shown.join(","),
                lhs: lhs.to_string(),
                rhs: rhs.to_string(),
            })
        }
    };
    let corners = [Ext::Zero, Ext::one(), Ext::Inf];
    let mut idx = vec![0usize; n];
    loop {
        check(&idx.iter().map(|&i| corners[i].clone()).collect::<Vec<_>>())?;
        let Some(pos) = idx.iter().position(|&i| i < 2) else { break };
        idx[..pos].fill(0);
        idx[pos] += 1;
    }
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    for _ in 0..SCHEMA_SAMPLES {
        let xs: Vec<Ext> = (0..n)
            .map(|_| match rng.gen_range(0..10) {
                0 => Ext::Zero,
                1 => Ext::Inf,
                _ => Ext::from_ratio(rng.gen_range(1..=40), rng.gen_range(1..=40)),
            })
            .collect();
        check(&xs)?;
    }
    Ok(())
}

/// Turns proofs arranged as `t(π…)` into a derivation of `s(H…)`.
///
/// `sequents[i]` is the sequent of variable `i`; `proofs` follow the
/// occurrences of variables in `t`. Each variable of `s` gets the best proof
/// among its occurrences in `t` (the first on ties), or EFQ if it has none.
pub fn apply_structural_schema(
    ts: &SchemaTerm,
    ss: &SchemaTerm,
    sequents: &[Sequent],
    proofs: &[ProofTree],
    p: &Hardness,
    t: &Theory,
) -> Result<Derivation, RewriteError> {
    let occ = ts.occurrences();
    if occ.len() != proofs.len() {
        return Err(RewriteError::SchemaInput(format!("{} proofs for {} occurrences", proofs.len(), occ.len())));
    }
    let n = sequents.len();
    if let Some(&bad) = occ.iter().chain(&ss.occurrences()).find(|&&i| i >= n) {
        return Err(RewriteError::SchemaInput(format!("variable x{bad} has no sequent")));
    }
    let mut best: Vec<Option<&ProofTree>> = vec![None; n];
    for (&i, pr) in occ.iter().zip(proofs) {
        if pr.conclusion != sequents[i] {
            return Err(RewriteError::SchemaInput(format!(
                "proof of {} given for x{i} = {}",
                pr.conclusion, sequents[i]
            )));
        }
        if best[i].is_none_or(|b| pr.power(p) > b.power(p)) {
            best[i] = Some(pr);
        }
    }
    check_schema(ts, ss, n, p)?;
    fn build(
        s: &SchemaTerm,
        best: &[Option<&ProofTree>],
        sequents: &[Sequent],
        p: &Hardness,
        t: &Theory,
    ) -> Result<Derivation, RewriteError> {
        Ok(match s {
            SchemaTerm::Var(i) => match best[*i] {
                Some(pr) => pr.to_derivation(),
                None => {
                    let q = &sequents[*i];
                    Derivation::rule(RuleName::Efq, Bindings::ctx(q.ante.clone(), q.cons.clone()), p, t)?
                }
            },
            SchemaTerm::Op(op, a, b) => {
                Derivation::horiz(*op, build(a, best, sequents, p, t)?, build(b, best, sequents, p, t)?)
            }
        })
    }
    let d = build(ss, &best, sequents, p, t)?;
    d.check(p, t).map_err(CalculusError::Invalid)?;
    Ok(d)
}

/// The structure `s(H…)` a schema derivation concludes.
pub fn schema_structure(ss: &SchemaTerm, sequents: &[Sequent]) -> Structure {
    match ss {
        SchemaTerm::Var(i) => Structure::leaf(sequents[*i].clone()),
        SchemaTerm::Op(op, a, b) => Structure::op(*op, schema_structure(a, sequents), schema_structure(b, sequents)),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    fn ctx_one() -> (Hardness, Theory) {
        let p = Hardness::one();
        let t = Theory::empty(&p);
        (p, t)
    }

    #[test]
    fn unit_cut_becomes_emp() {
        let (p, t) = ctx_one();
        let (out, trace) = cut_eliminate_tree(&fixtures::unit_cut(&p), &p, &t).unwrap();
        assert_eq!(out.rule, RuleName::Emp);
        assert_eq!(trace.steps.len(), 1);
        assert_eq!(trace.steps[0].validity_after, Value::one(&p));
        assert_eq!(cut_metric(&out), CutMetric::default());
    }

    #[test]
    fn cut_free_is_identity() {
        let (p, t) = ctx_one();
        for (_, d) in fixtures::reference_proofs(&p).into_iter().filter(|(k, _)| *k != "unit-cut") {
            let (out, trace) = cut_eliminate(&d, &p, &t).unwrap();
            assert_eq!(out, d);
            assert!(trace.steps.is_empty());
        }
    }

    #[test]
    fn axiom_cut_keeps_hypothesis() {
        let (p, t) = ctx_one();
        let ctx = Ctx { p: &p, t: &t };
        let a = Formula::atom("a");
        let ab = Formula::plor(a.clone(), Formula::atom("b"));
        let inj = fixtures::injection(&p);
        let ax = ctx.leaf(RuleName::Ax, Bindings::formula(a.clone())).unwrap();
        let cut = ctx.cut(ax, inj.clone(), &a).unwrap();
        let (out, step) = cut_step_tree(&cut, &p, &t).unwrap().unwrap();
        assert_eq!(out, inj);
        assert_eq!(step.case, "axiom-left");
        let efq = ctx.efq(&Sequent::new(Cedent::empty(), Cedent::single(a.clone()))).unwrap();
        let cut = ctx.cut(efq, fixtures::injection(&p), &a).unwrap();
        let (out, _) = cut_step_tree(&cut, &p, &t).unwrap().unwrap();
        assert_eq!(out.rule, RuleName::Efq);
        assert_eq!(out.conclusion, Sequent::new(Cedent::empty(), Cedent::single(ab)));
    }

    #[test]
    fn soft_or_keeps_better_branch() {
        // Left: ⊢ a ⊕ b from ⊢ a (value 1) and ⊢ b (value 0);
        // right: a ⊕ b ⊢ a ⊕ b split on the left with values 1 and 1.
        let p = Hardness::one();
        let t = Theory::empty(&p).with_atom("a", Value::one(&p)).unwrap();
        let ctx = Ctx { p: &p, t: &t };
        let (a, b) = (Formula::atom("a"), Formula::atom("b"));
        let ab = Formula::plor(a.clone(), b.clone());
        let ra = ctx.leaf(RuleName::AtomR("a".into()), Bindings::default()).unwrap();
        let rb = ctx.efq(&Sequent::new(Cedent::empty(), Cedent::single(b.clone()))).unwrap();
        let l =
            ctx.node(RuleName::PlorR, Bindings::default().with_a(a.clone()).with_b(b.clone()), vec![ra, rb]).unwrap();
        let inj = |x: &Formula, first: bool| {
            let ax = ctx.leaf(RuleName::Ax, Bindings::formula(x.clone())).unwrap();
            let other = if first { b.clone() } else { a.clone() };
            let e = ctx.efq(&Sequent::new(Cedent::single(x.clone()), Cedent::single(other))).unwrap();
            let kids = if first { vec![ax, e] } else { vec![e, ax] };
            let bind = Bindings::ctx(Cedent::single(x.clone()), Cedent::empty()).with_a(a.clone()).with_b(b.clone());
            ctx.node(RuleName::PlorR, bind, kids).unwrap()
        };
        let bind = Bindings::ctx(Cedent::empty(), Cedent::single(ab.clone())).with_a(a.clone()).with_b(b.clone());
        let r = ctx.node(RuleName::PlorL, bind, vec![inj(&a, true), inj(&b, false)]).unwrap();
        let cut = ctx.cut(l, r, &ab).unwrap();
        assert_eq!(Value::from_power(cut.power(&p), &p), Value::parse("1/2", &p).unwrap());
        let (out, step) = cut_step_tree(&cut, &p, &t).unwrap().unwrap();
        assert_eq!(step.case, "principal-soft-or");
        assert_eq!(out.children[0].rule, RuleName::AtomR("a".into()));
        let (done, _) = cut_eliminate_tree(&out, &p, &t).unwrap();
        assert_eq!(Value::from_power(done.power(&p), &p), Value::one(&p));
    }

    #[test]
    fn schemas() {
        let (p, t) = ctx_one();
        let h0 = Sequent::parse("a + a |- a").unwrap();
        let h1 = Sequent::parse("|- bot").unwrap();
        let pi = fixtures::soft_idempotency(&p);
        let ew = apply_structural_schema(
            &SchemaTerm::var(0),
            &SchemaTerm::op(RedOp::Padd, SchemaTerm::var(0), SchemaTerm::var(1)),
            &[h0.clone(), h1.clone()],
            std::slice::from_ref(&pi),
            &p,
            &t,
        )
        .unwrap();
        assert_eq!(ew.validity().unwrap(), pi.validity());
        assert!(ew.uses(&RuleName::Efq));
        let bad = apply_structural_schema(
            &SchemaTerm::op(RedOp::Padd, SchemaTerm::var(0), SchemaTerm::var(1)),
            &SchemaTerm::var(0),
            &[h0.clone(), h1],
            &[pi.clone(), ctx_efq(&p, &t)],
            &p,
            &t,
        );
        assert!(matches!(bad, Err(RewriteError::SchemaViolation { .. })));
        let ecow = apply_structural_schema(
            &SchemaTerm::op(RedOp::Pcoadd, SchemaTerm::var(0), SchemaTerm::var(1)),
            &SchemaTerm::var(0),
            &[h0.clone(), h0],
            &[pi.clone(), pi.clone()],
            &p,
            &t,
        )
        .unwrap();
        assert_eq!(ecow.validity().unwrap(), pi.validity());
    }

    fn ctx_efq(p: &Hardness, t: &Theory) -> ProofTree {
        Ctx { p, t }.efq(&Sequent::parse("|- bot").unwrap()).unwrap()
    }
}

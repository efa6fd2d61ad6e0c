//! The rule set, theories, derivations and their checker.
//!
//! A derivation is built from rule instances, the identity on a structure,
//! vertical composition (stacking) and horizontal composition with a red
//! connective. Its validity is the value of its top structure once closed.
//! [`ProofTree`] is the equivalent tree view of a proof used by rewriting and
//! proof search.

use std::collections::BTreeMap;
use std::fmt;

use crate::alethic::{AlethicError, Ext, Hardness, Value};
use crate::syntax::{Cedent, Formula, RedOp, Sequent, Structure, StructureError};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum CalculusError {
    #[error("derivation is not closed: its top contains {0}")]
    NotClosed(Sequent),
    #[error("not a proof: the bottom structure must be a single sequent")]
    NotAProof,
    #[error("ill-formed rule instance at {path}: {message}")]
    Malformed { path: String, message: String },
    #[error("derivation does not check: {}", .0.iter().map(|v| v.to_string()).collect::<Vec<_>>().join("; "))]
    Invalid(Vec<Violation>),
    #[error(transparent)]
    Alethic(#[from] AlethicError),
    #[error(transparent)]
    Parse(#[from] crate::parse::ParseError),
}

impl From<StructureError> for CalculusError {
    fn from(e: StructureError) -> Self {
        match e {
            StructureError::NotClosed(s) => CalculusError::NotClosed(s),
            StructureError::Alethic(a) => CalculusError::Alethic(a),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum RuleName {
    Ax,
    Emp,
    Efq,
    Cut,
    Mix,
    TensorL,
    TensorR,
    ParL,
    ParR,
    DualL,
    DualR,
    OneL,
    OneR,
    PlorL,
    PlorR,
    PlandL,
    PlandR,
    BotL,
    TopR,
    MixStar,
    AtomL(String),
    AtomR(String),
    /// Unary soft disjunction introduction keeping the left disjunct; only
    /// admissible at `p = ∞`.
    PlorR1,
    PlorR2,
    /// Unary soft conjunction elimination on the left; only at `p = ∞`.
    PlandL1,
    PlandL2,
}

impl RuleName {
    pub fn name(&self) -> &'static str {
        match self {
            RuleName::Ax => "AX",
            RuleName::Emp => "EMP",
            RuleName::Efq => "EFQ",
            RuleName::Cut => "CUT",
            RuleName::Mix => "MIX",
            RuleName::TensorL => "TensorL",
            RuleName::TensorR => "TensorR",
            RuleName::ParL => "ParL",
            RuleName::ParR => "ParR",
            RuleName::DualL => "DualL",
            RuleName::DualR => "DualR",
            RuleName::OneL => "OneL",
            RuleName::OneR => "OneR",
            RuleName::PlorL => "PlorL",
            RuleName::PlorR => "PlorR",
            RuleName::PlandL => "PlandL",
            RuleName::PlandR => "PlandR",
            RuleName::BotL => "BotL",
            RuleName::TopR => "TopR",
            RuleName::MixStar => "MixStar",
            RuleName::AtomL(_) => "AtomL",
            RuleName::AtomR(_) => "AtomR",
            RuleName::PlorR1 => "PlorR1",
            RuleName::PlorR2 => "PlorR2",
            RuleName::PlandL1 => "PlandL1",
            RuleName::PlandL2 => "PlandL2",
        }
    }

    /// Parses a rule name; atom rules take their atom separately.
    pub fn from_name(s: &str, atom: Option<String>) -> Option<RuleName> {
        Some(match (s, atom) {
            ("AX", None) => RuleName::Ax,
            ("EMP", None) => RuleName::Emp,
            ("EFQ", None) => RuleName::Efq,
            ("CUT", None) => RuleName::Cut,
            ("MIX", None) => RuleName::Mix,
            ("TensorL", None) => RuleName::TensorL,
            ("TensorR", None) => RuleName::TensorR,
            ("ParL", None) => RuleName::ParL,
            ("ParR", None) => RuleName::ParR,
            ("DualL", None) => RuleName::DualL,
            ("DualR", None) => RuleName::DualR,
            ("OneL", None) => RuleName::OneL,
            ("OneR", None) => RuleName::OneR,
            ("PlorL", None) => RuleName::PlorL,
            ("PlorR", None) => RuleName::PlorR,
            ("PlandL", None) => RuleName::PlandL,
            ("PlandR", None) => RuleName::PlandR,
            ("BotL", None) => RuleName::BotL,
            ("TopR", None) => RuleName::TopR,
            ("MixStar", None) => RuleName::MixStar,
            ("AtomL", Some(a)) => RuleName::AtomL(a),
            ("AtomR", Some(a)) => RuleName::AtomR(a),
            ("PlorR1", None) => RuleName::PlorR1,
            ("PlorR2", None) => RuleName::PlorR2,
            ("PlandL1", None) => RuleName::PlandL1,
            ("PlandL2", None) => RuleName::PlandL2,
            _ => return None,
        })
    }

    pub fn takes_atom(s: &str) -> bool {
        matches!(s, "AtomL" | "AtomR")
    }

    /// The binding slots the rule reads, in file order.
    pub fn slots(&self) -> &'static [Slot] {
        use Slot::*;
        match self {
            RuleName::Ax => &[A],
            RuleName::Emp | RuleName::OneL | RuleName::OneR => &[],
            RuleName::AtomL(_) | RuleName::AtomR(_) => &[],
            RuleName::Efq | RuleName::BotL | RuleName::TopR => &[G, D],
            RuleName::Cut => &[G, D, G2, D2, A],
            RuleName::Mix | RuleName::MixStar => &[G, D, G2, D2],
            RuleName::TensorR | RuleName::ParL => &[G, D, G2, D2, A, B],
            RuleName::DualL | RuleName::DualR => &[G, D, A],
            RuleName::TensorL
            | RuleName::ParR
            | RuleName::PlorL
            | RuleName::PlorR
            | RuleName::PlandL
            | RuleName::PlandR
            | RuleName::PlorR1
            | RuleName::PlorR2
            | RuleName::PlandL1
            | RuleName::PlandL2 => &[G, D, A, B],
        }
    }
}

impl fmt::Display for RuleName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RuleName::AtomL(a) | RuleName::AtomR(a) => write!(f, "{} {a}", self.name()),
            _ => f.write_str(self.name()),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Slot {
    G,
    D,
    G2,
    D2,
    A,
    B,
}

impl Slot {
    pub fn key(self) -> &'static str {
        match self {
            Slot::G => "G",
            Slot::D => "D",
            Slot::G2 => "G2",
            Slot::D2 => "D2",
            Slot::A => "A",
            Slot::B => "B",
        }
    }
}

/// Principal formulas and context cedents of a rule instance. `gamma`/`delta`
/// are the context of the (first) premise, `gamma2`/`delta2` that of the
/// second premise of a multiplicative rule.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Bindings {
    pub gamma: Cedent,
    pub delta: Cedent,
    pub gamma2: Cedent,
    pub delta2: Cedent,
    pub a: Option<Formula>,
    pub b: Option<Formula>,
}

impl Bindings {
    pub fn ctx(gamma: Cedent, delta: Cedent) -> Bindings {
        Bindings { gamma, delta, ..Default::default() }
    }

    pub fn formula(a: Formula) -> Bindings {
        Bindings { a: Some(a), ..Default::default() }
    }

    pub fn with_a(mut self, a: Formula) -> Bindings {
        self.a = Some(a);
        self
    }

    pub fn with_b(mut self, b: Formula) -> Bindings {
        self.b = Some(b);
        self
    }

    pub fn with_second(mut self, gamma2: Cedent, delta2: Cedent) -> Bindings {
        self.gamma2 = gamma2;
        self.delta2 = delta2;
        self
    }
}

/// Atom valuation plus the optional MIX* rule.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Theory {
    p: Hardness,
    atoms: BTreeMap<String, Value>,
    pub mix_star: bool,
}

impl Theory {
    pub fn empty(p: &Hardness) -> Theory {
        Theory { p: p.clone(), atoms: BTreeMap::new(), mix_star: false }
    }

    pub fn hardness(&self) -> &Hardness {
        &self.p
    }

    pub fn with_atom(mut self, name: &str, v: Value) -> Result<Theory, AlethicError> {
        if v.hardness() != &self.p {
            return Err(AlethicError::HardnessMismatch(v.hardness().to_string(), self.p.to_string()));
        }
        self.atoms.insert(name.to_string(), v);
        Ok(self)
    }

    pub fn with_mix_star(mut self, on: bool) -> Theory {
        self.mix_star = on;
        self
    }

    pub fn value(&self, atom: &str) -> Option<&Value> {
        self.atoms.get(atom)
    }

    pub fn atoms(&self) -> impl Iterator<Item = (&String, &Value)> {
        self.atoms.iter()
    }

    pub fn is_pure(&self) -> bool {
        self.atoms.is_empty() && !self.mix_star
    }

    /// Parses lines `atom <name> = <literal>` and `mix_star = true|false`;
    /// `#` starts a comment.
    pub fn parse(text: &str, p: &Hardness) -> Result<Theory, CalculusError> {
        let mut t = Theory::empty(p);
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let bad =
                |m: &str| CalculusError::Malformed { path: format!("line {}", lineno + 1), message: m.to_string() };
            let (lhs, rhs) = line.split_once('=').ok_or_else(|| bad("expected '='"))?;
            let lhs: Vec<&str> = lhs.split_whitespace().collect();
            let rhs = rhs.trim();
            match lhs.as_slice() {
                ["mix_star"] => {
                    t.mix_star = match rhs {
                        "true" => true,
                        "false" => false,
                        _ => return Err(bad("mix_star must be true or false")),
                    }
                }
                ["atom", name] => {
                    let f = crate::parse::parse_formula(name)?;
                    if !matches!(f, Formula::Atom(_)) {
                        return Err(bad("expected an atom name"));
                    }
                    let v = Value::parse(rhs, p).map_err(|e| bad(&e.to_string()))?;
                    t.atoms.insert(name.to_string(), v);
                }
                _ => return Err(bad("expected `atom <name> = <value>` or `mix_star = <bool>`")),
            }
        }
        Ok(t)
    }
}

impl fmt::Display for Theory {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (a, v) in &self.atoms {
            writeln!(f, "atom {a} = {}", v.exact())?;
        }
        writeln!(f, "mix_star = {}", self.mix_star)
    }
}

fn seq(ante: Cedent, cons: Cedent) -> Structure {
    Structure::Leaf(Sequent::new(ante, cons))
}

fn konst(v: Value) -> Structure {
    Structure::Const(v)
}

/// Instantiates a rule schema, returning the premise structure and the
/// conclusion sequent.
pub fn instantiate(rule: &RuleName, b: &Bindings, p: &Hardness, t: &Theory) -> Result<(Structure, Sequent), String> {
    let need =
        |x: &Option<Formula>, slot: &str| x.clone().ok_or_else(|| format!("{} needs binding {slot}", rule.name()));
    let (g, d, g2, d2) = (&b.gamma, &b.delta, &b.gamma2, &b.delta2);
    let op = |o: RedOp, l: Structure, r: Structure| Structure::op(o, l, r);
    let res = match rule {
        RuleName::Ax => {
            let a = need(&b.a, "A")?;
            (konst(Value::one(p)), Sequent::new(Cedent::single(a.clone()), Cedent::single(a)))
        }
        RuleName::Emp => (konst(Value::one(p)), Sequent::default()),
        RuleName::Efq => (konst(Value::zero(p)), Sequent::new(g.clone(), d.clone())),
        RuleName::Cut => {
            let a = need(&b.a, "A")?;
            (
                op(RedOp::Tensor, seq(g.clone(), d.with(a.clone())), seq(g2.with(a), d2.clone())),
                Sequent::new(g.union(g2), d.union(d2)),
            )
        }
        RuleName::Mix | RuleName::MixStar => {
            if *rule == RuleName::MixStar && !t.mix_star {
                return Err("MixStar is not enabled by the theory".into());
            }
            let o = if *rule == RuleName::Mix { RedOp::Tensor } else { RedOp::Cotensor };
            (op(o, seq(g.clone(), d.clone()), seq(g2.clone(), d2.clone())), Sequent::new(g.union(g2), d.union(d2)))
        }
        RuleName::TensorL => {
            let (a, bb) = (need(&b.a, "A")?, need(&b.b, "B")?);
            (
                seq(g.with(a.clone()).with(bb.clone()), d.clone()),
                Sequent::new(g.with(Formula::tensor(a, bb)), d.clone()),
            )
        }
        RuleName::ParR => {
            let (a, bb) = (need(&b.a, "A")?, need(&b.b, "B")?);
            (seq(g.clone(), d.with(a.clone()).with(bb.clone())), Sequent::new(g.clone(), d.with(Formula::par(a, bb))))
        }
        RuleName::ParL => {
            let (a, bb) = (need(&b.a, "A")?, need(&b.b, "B")?);
            (
                op(RedOp::Tensor, seq(g.with(a.clone()), d.clone()), seq(g2.with(bb.clone()), d2.clone())),
                Sequent::new(g.union(g2).with(Formula::par(a, bb)), d.union(d2)),
            )
        }
        RuleName::TensorR => {
            let (a, bb) = (need(&b.a, "A")?, need(&b.b, "B")?);
            (
                op(RedOp::Tensor, seq(g.clone(), d.with(a.clone())), seq(g2.clone(), d2.with(bb.clone()))),
                Sequent::new(g.union(g2), d.union(d2).with(Formula::tensor(a, bb))),
            )
        }
        RuleName::DualL => {
            let a = need(&b.a, "A")?;
            (seq(g.clone(), d.with(a.clone())), Sequent::new(g.with(a.negate()), d.clone()))
        }
        RuleName::DualR => {
            let a = need(&b.a, "A")?;
            (seq(g.with(a.clone()), d.clone()), Sequent::new(g.clone(), d.with(a.negate())))
        }
        RuleName::OneL => (konst(Value::one(p)), Sequent::new(Cedent::single(Formula::One), Cedent::empty())),
        RuleName::OneR => (konst(Value::one(p)), Sequent::new(Cedent::empty(), Cedent::single(Formula::One))),
        RuleName::PlorL | RuleName::PlandL => {
            let (a, bb) = (need(&b.a, "A")?, need(&b.b, "B")?);
            let (o, main) = if *rule == RuleName::PlorL {
                (RedOp::Pcoadd, Formula::plor(a.clone(), bb.clone()))
            } else {
                (RedOp::Padd, Formula::pland(a.clone(), bb.clone()))
            };
            (op(o, seq(g.with(a), d.clone()), seq(g.with(bb), d.clone())), Sequent::new(g.with(main), d.clone()))
        }
        RuleName::PlandR | RuleName::PlorR => {
            let (a, bb) = (need(&b.a, "A")?, need(&b.b, "B")?);
            let (o, main) = if *rule == RuleName::PlandR {
                (RedOp::Pcoadd, Formula::pland(a.clone(), bb.clone()))
            } else {
                (RedOp::Padd, Formula::plor(a.clone(), bb.clone()))
            };
            (op(o, seq(g.clone(), d.with(a)), seq(g.clone(), d.with(bb))), Sequent::new(g.clone(), d.with(main)))
        }
        RuleName::PlorR1 | RuleName::PlorR2 => {
            if !p.is_infinite() {
                return Err(format!("{} is only admissible at p=inf", rule.name()));
            }
            let (a, bb) = (need(&b.a, "A")?, need(&b.b, "B")?);
            let kept = if *rule == RuleName::PlorR1 { a.clone() } else { bb.clone() };
            (seq(g.clone(), d.with(kept)), Sequent::new(g.clone(), d.with(Formula::plor(a, bb))))
        }
        RuleName::PlandL1 | RuleName::PlandL2 => {
            if !p.is_infinite() {
                return Err(format!("{} is only admissible at p=inf", rule.name()));
            }
            let (a, bb) = (need(&b.a, "A")?, need(&b.b, "B")?);
            let kept = if *rule == RuleName::PlandL1 { a.clone() } else { bb.clone() };
            (seq(g.with(kept), d.clone()), Sequent::new(g.with(Formula::pland(a, bb)), d.clone()))
        }
        RuleName::BotL => (konst(Value::infinity(p)), Sequent::new(g.with(Formula::Bot), d.clone())),
        RuleName::TopR => (konst(Value::infinity(p)), Sequent::new(g.clone(), d.with(Formula::Top))),
        RuleName::AtomR(x) | RuleName::AtomL(x) => {
            let v = t.value(x).ok_or_else(|| format!("atom {x} has no value in the theory"))?.clone();
            if v.hardness() != p {
                return Err(format!("theory value of {x} is not at p={p}"));
            }
            let one = Cedent::single(Formula::Atom(x.clone()));
            if matches!(rule, RuleName::AtomR(_)) {
                (konst(v), Sequent::new(Cedent::empty(), one))
            } else {
                (konst(v.dual()), Sequent::new(one, Cedent::empty()))
            }
        }
    };
    Ok(res)
}

/// One rule application inside a derivation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RuleNode {
    pub rule: RuleName,
    pub bind: Bindings,
    pub premise: Structure,
    pub conclusion: Structure,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Derivation {
    Id(Structure),
    Rule(Box<RuleNode>),
    Vert(Box<Derivation>, Box<Derivation>),
    Horiz(RedOp, Box<Derivation>, Box<Derivation>),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Violation {
    pub path: String,
    pub message: String,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", self.path, self.message)
    }
}

impl Derivation {
    /// A rule instance whose conclusion is computed from the bindings.
    pub fn rule(rule: RuleName, bind: Bindings, p: &Hardness, t: &Theory) -> Result<Derivation, CalculusError> {
        let (premise, concl) = instantiate(&rule, &bind, p, t)
            .map_err(|message| CalculusError::Malformed { path: "rule".into(), message })?;
        Ok(Derivation::Rule(Box::new(RuleNode { rule, bind, premise, conclusion: Structure::Leaf(concl) })))
    }

    pub fn vert(upper: Derivation, lower: Derivation) -> Derivation {
        Derivation::Vert(Box::new(upper), Box::new(lower))
    }

    pub fn horiz(op: RedOp, l: Derivation, r: Derivation) -> Derivation {
        Derivation::Horiz(op, Box::new(l), Box::new(r))
    }

    pub fn top(&self) -> Structure {
        match self {
            Derivation::Id(h) => h.clone(),
            Derivation::Rule(n) => n.premise.clone(),
            Derivation::Vert(u, _) => u.top(),
            Derivation::Horiz(op, l, r) => Structure::op(*op, l.top(), r.top()),
        }
    }

    pub fn bottom(&self) -> Structure {
        match self {
            Derivation::Id(h) => h.clone(),
            Derivation::Rule(n) => n.conclusion.clone(),
            Derivation::Vert(_, l) => l.bottom(),
            Derivation::Horiz(op, l, r) => Structure::op(*op, l.bottom(), r.bottom()),
        }
    }

    pub fn is_closed(&self) -> bool {
        self.top().is_closed()
    }

    /// The concluding sequent of a proof.
    pub fn conclusion(&self) -> Result<Sequent, CalculusError> {
        match self.bottom() {
            Structure::Leaf(s) => Ok(s),
            _ => Err(CalculusError::NotAProof),
        }
    }

    /// Value of the top structure of a closed derivation.
    pub fn validity(&self) -> Result<Value, CalculusError> {
        Ok(self.top().eval()?)
    }

    /// Every rule node, in left-to-right order.
    pub fn rules(&self) -> Vec<&RuleNode> {
        let mut out = Vec::new();
        self.collect_rules(&mut out);
        out
    }

    fn collect_rules<'a>(&'a self, out: &mut Vec<&'a RuleNode>) {
        match self {
            Derivation::Id(_) => {}
            Derivation::Rule(n) => out.push(n),
            Derivation::Vert(u, l) => {
                u.collect_rules(out);
                l.collect_rules(out);
            }
            Derivation::Horiz(_, l, r) => {
                l.collect_rules(out);
                r.collect_rules(out);
            }
        }
    }

    pub fn uses(&self, rule: &RuleName) -> bool {
        self.rules().iter().any(|n| &n.rule == rule)
    }

    pub fn is_cut_free(&self) -> bool {
        !self.uses(&RuleName::Cut)
    }

    /// Checks every rule node against its schema and every composition for
    /// structural compatibility.
    pub fn check(&self, p: &Hardness, t: &Theory) -> Result<(), Vec<Violation>> {
        let mut out = Vec::new();
        self.check_at("root", p, t, &mut out);
        if out.is_empty() {
            Ok(())
        } else {
            Err(out)
        }
    }

    fn check_at(&self, path: &str, p: &Hardness, t: &Theory, out: &mut Vec<Violation>) {
        let mut push = |message: String| out.push(Violation { path: path.to_string(), message });
        match self {
            Derivation::Id(h) => {
                if let Some(m) = foreign_constant(h, p) {
                    push(m);
                }
            }
            Derivation::Rule(n) => match instantiate(&n.rule, &n.bind, p, t) {
                Err(m) => push(format!("{}: {m}", n.rule.name())),
                Ok((premise, concl)) => {
                    if let Some(m) = structure_diff(&premise, &n.premise) {
                        push(format!("{} premise: {m}", n.rule.name()));
                    }
                    if n.conclusion != Structure::Leaf(concl.clone()) {
                        push(format!("{} conclusion: expected (seq {concl}), found {}", n.rule.name(), n.conclusion));
                    }
                }
            },
            Derivation::Vert(u, l) => {
                let (ub, lt) = (u.bottom(), l.top());
                if ub != lt {
                    push(format!("vertical composition mismatch: upper ends in {ub}, lower starts at {lt}"));
                }
                u.check_at(&format!("{path}/upper"), p, t, out);
                l.check_at(&format!("{path}/lower"), p, t, out);
            }
            Derivation::Horiz(_, l, r) => {
                l.check_at(&format!("{path}/left"), p, t, out);
                r.check_at(&format!("{path}/right"), p, t, out);
            }
        }
    }

    pub fn parse(text: &str, p: &Hardness, t: &Theory) -> Result<Derivation, CalculusError> {
        crate::proof_file::parse_derivation(text, p, t)
    }

    /// Proof-file text.
    pub fn to_file(&self) -> String {
        crate::proof_file::print_derivation(self)
    }
}

fn foreign_constant(h: &Structure, p: &Hardness) -> Option<String> {
    match h {
        Structure::Const(v) if v.hardness() != p => Some(format!("constant {v} is not at p={p}")),
        Structure::Op(_, a, b) => foreign_constant(a, p).or_else(|| foreign_constant(b, p)),
        _ => None,
    }
}

/// First difference between an expected and an actual premise structure.
fn structure_diff(expected: &Structure, found: &Structure) -> Option<String> {
    match (expected, found) {
        (Structure::Op(o1, a1, b1), Structure::Op(o2, a2, b2)) => {
            if o1 != o2 {
                Some(format!("wrong red connective: expected {o1}, found {o2}"))
            } else {
                structure_diff(a1, a2).or_else(|| structure_diff(b1, b2))
            }
        }
        (Structure::Const(x), Structure::Const(y)) => {
            (x != y).then(|| format!("wrong constant: expected {x}, found {y}"))
        }
        (Structure::Leaf(x), Structure::Leaf(y)) => (x != y).then(|| format!("expected sequent {x}, found {y}")),
        _ => Some(format!("expected {expected}, found {found}")),
    }
}

/// Tree view of a proof: a rule instance with one sub-proof per sequent in
/// its premise.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ProofTree {
    pub rule: RuleName,
    pub bind: Bindings,
    pub premise: Structure,
    pub conclusion: Sequent,
    pub children: Vec<ProofTree>,
}

impl ProofTree {
    /// Builds a node, checking that the children prove the premise sequents.
    pub fn new(
        rule: RuleName,
        bind: Bindings,
        children: Vec<ProofTree>,
        p: &Hardness,
        t: &Theory,
    ) -> Result<ProofTree, CalculusError> {
        let malformed = |message: String| CalculusError::Malformed { path: rule.name().into(), message };
        let (premise, conclusion) = instantiate(&rule, &bind, p, t).map_err(malformed)?;
        let leaves = premise.leaves();
        if leaves.len() != children.len() {
            return Err(malformed(format!("expected {} sub-proofs, got {}", leaves.len(), children.len())));
        }
        for (l, c) in leaves.iter().zip(&children) {
            if **l != c.conclusion {
                return Err(malformed(format!("premise {l} is proved as {}", c.conclusion)));
            }
        }
        Ok(ProofTree { rule, bind, premise, conclusion, children })
    }

    pub fn leaf(rule: RuleName, bind: Bindings, p: &Hardness, t: &Theory) -> Result<ProofTree, CalculusError> {
        ProofTree::new(rule, bind, Vec::new(), p, t)
    }

    pub fn validity(&self) -> Value {
        let mut i = 0;
        let r: Result<Value, AlethicError> = self.premise.eval_with(&mut |_| {
            let v = self.children[i].validity();
            i += 1;
            Ok(v)
        });
        r.expect("proof tree values share one hardness")
    }

    /// Validity as a power coordinate, without cloning hardness tags.
    pub fn power(&self, p: &Hardness) -> Ext {
        fn go(h: &Structure, kids: &[ProofTree], i: &mut usize, p: &Hardness) -> Ext {
            match h {
                Structure::Leaf(_) => {
                    let v = kids[*i].power(p);
                    *i += 1;
                    v
                }
                Structure::Const(v) => v.power().clone(),
                Structure::Op(op, a, b) => {
                    let x = go(a, kids, i, p);
                    let y = go(b, kids, i, p);
                    op.apply(&x, &y, p)
                }
            }
        }
        go(&self.premise, &self.children, &mut 0, p)
    }

    pub fn size(&self) -> usize {
        1 + self.children.iter().map(ProofTree::size).sum::<usize>()
    }

    pub fn height(&self) -> usize {
        1 + self.children.iter().map(ProofTree::height).max().unwrap_or(0)
    }

    pub fn count(&self, rule: &RuleName) -> usize {
        usize::from(&self.rule == rule) + self.children.iter().map(|c| c.count(rule)).sum::<usize>()
    }

    pub fn to_derivation(&self) -> Derivation {
        let node = Derivation::Rule(Box::new(RuleNode {
            rule: self.rule.clone(),
            bind: self.bind.clone(),
            premise: self.premise.clone(),
            conclusion: Structure::Leaf(self.conclusion.clone()),
        }));
        if self.children.is_empty() {
            return node;
        }
        fn upper(h: &Structure, kids: &mut std::slice::Iter<'_, ProofTree>) -> Derivation {
            match h {
                Structure::Leaf(_) => kids.next().expect("one child per leaf").to_derivation(),
                Structure::Const(_) => Derivation::Id(h.clone()),
                Structure::Op(op, a, b) => {
                    let l = upper(a, kids);
                    let r = upper(b, kids);
                    Derivation::horiz(*op, l, r)
                }
            }
        }
        Derivation::vert(upper(&self.premise, &mut self.children.iter()), node)
    }

    /// Reads a closed derivation with a single concluding sequent as a tree.
    pub fn from_derivation(d: &Derivation) -> Result<ProofTree, CalculusError> {
        let top = d.top();
        if let Some(s) = top.leaves().first() {
            return Err(CalculusError::NotClosed((*s).clone()));
        }
        match plug(d, forest_of(&top), "root")? {
            Forest::Tree(t) => Ok(*t),
            _ => Err(CalculusError::NotAProof),
        }
    }
}

enum Forest {
    Tree(Box<ProofTree>),
    Open,
    Const,
    Op(Box<Forest>, Box<Forest>),
}

fn forest_of(h: &Structure) -> Forest {
    match h {
        Structure::Leaf(_) => Forest::Open,
        Structure::Const(_) => Forest::Const,
        Structure::Op(_, a, b) => Forest::Op(Box::new(forest_of(a)), Box::new(forest_of(b))),
    }
}

fn plug(d: &Derivation, input: Forest, path: &str) -> Result<Forest, CalculusError> {
    let bad = |m: &str| CalculusError::Malformed { path: path.into(), message: m.into() };
    match d {
        Derivation::Id(_) => Ok(input),
        Derivation::Vert(u, l) => {
            let mid = plug(u, input, &format!("{path}/upper"))?;
            plug(l, mid, &format!("{path}/lower"))
        }
        Derivation::Horiz(_, l, r) => match input {
            Forest::Op(a, b) => Ok(Forest::Op(
                Box::new(plug(l, *a, &format!("{path}/left"))?),
                Box::new(plug(r, *b, &format!("{path}/right"))?),
            )),
            _ => Err(bad("horizontal composition over a non-composite structure")),
        },
        Derivation::Rule(n) => {
            let mut kids = Vec::new();
            collect_trees(&n.premise, input, &mut kids).map_err(|m| bad(&m))?;
            let concl = match &n.conclusion {
                Structure::Leaf(s) => s.clone(),
                _ => return Err(bad("rule conclusion must be a sequent")),
            };
            Ok(Forest::Tree(Box::new(ProofTree {
                rule: n.rule.clone(),
                bind: n.bind.clone(),
                premise: n.premise.clone(),
                conclusion: concl,
                children: kids,
            })))
        }
    }
}

fn collect_trees(shape: &Structure, f: Forest, out: &mut Vec<ProofTree>) -> Result<(), String> {
    match (shape, f) {
        (Structure::Leaf(_), Forest::Tree(t)) => {
            out.push(*t);
            Ok(())
        }
        (Structure::Leaf(s), Forest::Open) => Err(format!("premise {s} is not proved")),
        (Structure::Const(_), Forest::Const) => Ok(()),
        (Structure::Op(_, a, b), Forest::Op(x, y)) => {
            collect_trees(a, *x, out)?;
            collect_trees(b, *y, out)
        }
        _ => Err("structure shape mismatch".into()),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    #[test]
    fn fixtures_check_and_evaluate() {
        let p = Hardness::one();
        let t = Theory::empty(&p);
        let proofs = fixtures::reference_proofs(&p);
        for (name, d) in &proofs {
            assert_eq!(d.check(&p, &t), Ok(()), "{name}");
        }
        assert_eq!(proofs["soft-idempotency"].validity().unwrap(), Value::parse("1/2", &p).unwrap());
        assert_eq!(proofs["inj"].validity().unwrap(), Value::one(&p));
        assert_eq!(proofs["eta"].validity().unwrap(), Value::parse("1/2", &p).unwrap());
    }

    #[test]
    fn wrong_red_connective_is_reported() {
        let p = Hardness::one();
        let t = Theory::empty(&p);
        let d = fixtures::reference_proofs(&p)["soft-idempotency"].clone();
        let Derivation::Vert(u, l) = d else { panic!() };
        let Derivation::Rule(mut n) = *l else { panic!() };
        let Structure::Op(_, a, b) = n.premise.clone() else { panic!() };
        n.premise = Structure::Op(RedOp::Padd, a, b);
        let Derivation::Horiz(_, x, y) = *u else { panic!() };
        let bad = Derivation::vert(Derivation::Horiz(RedOp::Padd, x, y), Derivation::Rule(n));
        let errs = bad.check(&p, &t).unwrap_err();
        assert!(errs.iter().any(|v| v.message.contains("wrong red connective")), "{errs:?}");
    }

    #[test]
    fn vertical_mismatch_is_reported() {
        let p = Hardness::one();
        let t = Theory::empty(&p);
        let ax = Derivation::rule(RuleName::Ax, Bindings::formula(Formula::atom("a")), &p, &t).unwrap();
        let dual = Derivation::rule(
            RuleName::DualR,
            Bindings::ctx(Cedent::empty(), Cedent::single(Formula::atom("b"))).with_a(Formula::atom("b")),
            &p,
            &t,
        )
        .unwrap();
        let errs = Derivation::vert(ax, dual).check(&p, &t).unwrap_err();
        assert!(errs[0].message.contains("vertical composition mismatch"));
    }

    #[test]
    fn theory_rules_need_the_theory() {
        let p = Hardness::one();
        let t = Theory::empty(&p);
        let r = Derivation::rule(RuleName::AtomR("a".into()), Bindings::default(), &p, &t);
        assert!(r.is_err());
        let t = t.with_atom("a", Value::parse("2", &p).unwrap()).unwrap();
        let d = Derivation::rule(RuleName::AtomL("a".into()), Bindings::default(), &p, &t).unwrap();
        assert_eq!(d.validity().unwrap(), Value::parse("1/2", &p).unwrap());
        let m = Derivation::rule(RuleName::MixStar, Bindings::default(), &p, &t);
        assert!(m.is_err());
    }

    #[test]
    fn unary_additives_only_at_infinity() {
        let b = Bindings::ctx(Cedent::single(Formula::atom("a")), Cedent::empty())
            .with_a(Formula::atom("a"))
            .with_b(Formula::atom("b"));
        let one = Hardness::one();
        assert!(instantiate(&RuleName::PlorR1, &b, &one, &Theory::empty(&one)).is_err());
        let inf = Hardness::Infinite;
        assert!(instantiate(&RuleName::PlorR1, &b, &inf, &Theory::empty(&inf)).is_ok());
    }

    #[test]
    fn tree_round_trip() {
        let p = Hardness::integer(2);
        let t = Theory::empty(&p);
        for (name, d) in fixtures::reference_proofs(&p) {
            let tree = ProofTree::from_derivation(&d).unwrap();
            assert_eq!(tree.validity(), d.validity().unwrap(), "{name}");
            let back = tree.to_derivation();
            assert_eq!(back.check(&p, &t), Ok(()));
            assert_eq!(back.bottom(), d.bottom());
            assert_eq!(ProofTree::from_derivation(&back).unwrap(), tree);
        }
    }

    #[test]
    fn theory_file() {
        let p = Hardness::one();
        let t = Theory::parse("# demo\natom a = 2\natom b = inf\nmix_star = true\n", &p).unwrap();
        assert!(t.mix_star);
        assert!(t.value("b").unwrap().is_infinite());
        assert_eq!(Theory::parse(&t.to_string(), &p).unwrap(), t);
        assert!(Theory::parse("atom A = 2", &p).is_err());
        assert!(Theory::parse("mix_star = maybe", &p).is_err());
    }
}

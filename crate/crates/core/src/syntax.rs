//! Formulas in negation normal form, multiset cedents, sequents and
//! structures of sequents joined by the four red connectives.

use std::fmt;

use crate::alethic::{AlethicError, Ext, Hardness, Value};

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Formula {
    Atom(String),
    NegAtom(String),
    One,
    Bot,
    Top,
    Tensor(Box<Formula>, Box<Formula>),
    Par(Box<Formula>, Box<Formula>),
    /// Soft disjunction `⊕`, written `+`.
    Plor(Box<Formula>, Box<Formula>),
    /// Soft conjunction `⊓`, written `&`.
    Pland(Box<Formula>, Box<Formula>),
}

impl Formula {
    pub fn atom(name: &str) -> Formula {
        Formula::Atom(name.to_string())
    }

    pub fn neg_atom(name: &str) -> Formula {
        Formula::NegAtom(name.to_string())
    }

    pub fn tensor(a: Formula, b: Formula) -> Formula {
        Formula::Tensor(Box::new(a), Box::new(b))
    }

    pub fn par(a: Formula, b: Formula) -> Formula {
        Formula::Par(Box::new(a), Box::new(b))
    }

    pub fn plor(a: Formula, b: Formula) -> Formula {
        Formula::Plor(Box::new(a), Box::new(b))
    }

    pub fn pland(a: Formula, b: Formula) -> Formula {
        Formula::Pland(Box::new(a), Box::new(b))
    }

    /// Linear negation, pushed to the atoms.
    pub fn negate(&self) -> Formula {
        match self {
            Formula::Atom(a) => Formula::NegAtom(a.clone()),
            Formula::NegAtom(a) => Formula::Atom(a.clone()),
            Formula::One => Formula::One,
            Formula::Bot => Formula::Top,
            Formula::Top => Formula::Bot,
            Formula::Tensor(a, b) => Formula::par(a.negate(), b.negate()),
            Formula::Par(a, b) => Formula::tensor(a.negate(), b.negate()),
            Formula::Plor(a, b) => Formula::pland(a.negate(), b.negate()),
            Formula::Pland(a, b) => Formula::plor(a.negate(), b.negate()),
        }
    }

    /// Number of binary connectives.
    pub fn connectives(&self) -> usize {
        match self.children() {
            Some((a, b)) => 1 + a.connectives() + b.connectives(),
            None => 0,
        }
    }

    pub fn children(&self) -> Option<(&Formula, &Formula)> {
        match self {
            Formula::Tensor(a, b) | Formula::Par(a, b) | Formula::Plor(a, b) | Formula::Pland(a, b) => Some((a, b)),
            _ => None,
        }
    }

    /// Atom names occurring in the formula, with repetitions.
    pub fn atoms(&self, out: &mut Vec<String>) {
        match self {
            Formula::Atom(a) | Formula::NegAtom(a) => out.push(a.clone()),
            _ => {
                if let Some((a, b)) = self.children() {
                    a.atoms(out);
                    b.atoms(out);
                }
            }
        }
    }

    pub fn parse(text: &str) -> Result<Formula, crate::parse::ParseError> {
        crate::parse::parse_formula(text)
    }
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Formula::Atom(a) => write!(f, "{a}"),
            Formula::NegAtom(a) => write!(f, "~{a}"),
            Formula::One => write!(f, "1"),
            Formula::Bot => write!(f, "bot"),
            Formula::Top => write!(f, "top"),
            Formula::Tensor(a, b) => write!(f, "({a} * {b})"),
            Formula::Par(a, b) => write!(f, "({a} | {b})"),
            Formula::Plor(a, b) => write!(f, "({a} + {b})"),
            Formula::Pland(a, b) => write!(f, "({a} & {b})"),
        }
    }
}

/// A finite multiset of formulas, kept sorted so that equality, hashing and
/// printing are canonical.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Cedent(Vec<Formula>);

impl Cedent {
    pub fn new(mut items: Vec<Formula>) -> Cedent {
        items.sort();
        Cedent(items)
    }

    pub fn empty() -> Cedent {
        Cedent(Vec::new())
    }

    pub fn single(f: Formula) -> Cedent {
        Cedent(vec![f])
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn iter(&self) -> std::slice::Iter<'_, Formula> {
        self.0.iter()
    }

    pub fn as_slice(&self) -> &[Formula] {
        &self.0
    }

    pub fn contains(&self, f: &Formula) -> bool {
        self.0.binary_search(f).is_ok()
    }

    pub fn with(&self, f: Formula) -> Cedent {
        let mut items = self.0.clone();
        let at = items.binary_search(&f).unwrap_or_else(|i| i);
        items.insert(at, f);
        Cedent(items)
    }

    /// Removes one occurrence of `f`, if present.
    pub fn without(&self, f: &Formula) -> Option<Cedent> {
        let at = self.0.binary_search(f).ok()?;
        let mut items = self.0.clone();
        items.remove(at);
        Some(Cedent(items))
    }

    /// Multiset difference; `None` unless `other` is a sub-multiset.
    pub fn minus(&self, other: &Cedent) -> Option<Cedent> {
        let mut acc = self.clone();
        for f in other.iter() {
            acc = acc.without(f)?;
        }
        Some(acc)
    }

    pub fn union(&self, other: &Cedent) -> Cedent {
        Cedent::new(self.0.iter().chain(other.0.iter()).cloned().collect())
    }

    pub fn negated(&self) -> Cedent {
        Cedent::new(self.0.iter().map(Formula::negate).collect())
    }

    pub fn connectives(&self) -> usize {
        self.0.iter().map(Formula::connectives).sum()
    }

    /// All ways of splitting the multiset in two, each split listed once
    /// (splits differing only in which copy of a repeated formula goes where
    /// are identified).
    pub fn splits(&self) -> Vec<(Cedent, Cedent)> {
        let mut groups: Vec<(&Formula, usize)> = Vec::new();
        for f in &self.0 {
            match groups.last_mut() {
                Some((g, n)) if *g == f => *n += 1,
                _ => groups.push((f, 1)),
            }
        }
        let mut out = vec![(Vec::new(), Vec::new())];
        for (f, n) in groups {
            let mut next = Vec::with_capacity(out.len() * (n + 1));
            for (l, r) in &out {
                for k in 0..=n {
                    let mut l2: Vec<Formula> = l.clone();
                    let mut r2: Vec<Formula> = r.clone();
                    l2.extend(std::iter::repeat_n(f, k).cloned());
                    r2.extend(std::iter::repeat_n(f, n - k).cloned());
                    next.push((l2, r2));
                }
            }
            out = next;
        }
        out.into_iter().map(|(l, r)| (Cedent(l), Cedent(r))).collect()
    }
}

impl FromIterator<Formula> for Cedent {
    fn from_iter<T: IntoIterator<Item = Formula>>(iter: T) -> Self {
        Cedent::new(iter.into_iter().collect())
    }
}

impl fmt::Display for Cedent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, x) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{x}")?;
        }
        Ok(())
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Sequent {
    pub ante: Cedent,
    pub cons: Cedent,
}

impl Sequent {
    pub fn new(ante: Cedent, cons: Cedent) -> Sequent {
        Sequent { ante, cons }
    }

    pub fn right(cons: Cedent) -> Sequent {
        Sequent { ante: Cedent::empty(), cons }
    }

    pub fn parse(text: &str) -> Result<Sequent, crate::parse::ParseError> {
        crate::parse::parse_sequent(text)
    }

    /// Number of formula occurrences plus number of connectives.
    pub fn complexity(&self) -> usize {
        self.ante.len() + self.cons.len() + self.ante.connectives() + self.cons.connectives()
    }

    /// Number of syntax-tree nodes over all formulas; strictly decreases from
    /// conclusion to every premise of the reduced proof-search rules.
    pub fn size(&self) -> usize {
        self.ante.len() + self.cons.len() + 2 * (self.ante.connectives() + self.cons.connectives())
    }

    /// The consequent-only form `⊢ Γ^⊥, Δ`.
    pub fn one_sided(&self) -> Cedent {
        self.ante.negated().union(&self.cons)
    }

    pub fn atoms(&self) -> Vec<String> {
        let mut out = Vec::new();
        for f in self.ante.iter().chain(self.cons.iter()) {
            f.atoms(&mut out);
        }
        out.sort();
        out.dedup();
        out
    }
}

impl fmt::Display for Sequent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (self.ante.is_empty(), self.cons.is_empty()) {
            (true, true) => write!(f, "|-"),
            (true, false) => write!(f, "|- {}", self.cons),
            (false, true) => write!(f, "{} |-", self.ante),
            (false, false) => write!(f, "{} |- {}", self.ante, self.cons),
        }
    }
}

/// The four red connectives combining validities.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum RedOp {
    Tensor,
    Cotensor,
    Padd,
    Pcoadd,
}

impl RedOp {
    pub fn keyword(self) -> &'static str {
        match self {
            RedOp::Tensor => "ten",
            RedOp::Cotensor => "cot",
            RedOp::Padd => "padd",
            RedOp::Pcoadd => "pcoadd",
        }
    }

    pub fn from_keyword(s: &str) -> Option<RedOp> {
        Some(match s {
            "ten" => RedOp::Tensor,
            "cot" => RedOp::Cotensor,
            "padd" => RedOp::Padd,
            "pcoadd" => RedOp::Pcoadd,
            _ => return None,
        })
    }

    pub fn apply(self, a: &Ext, b: &Ext, p: &Hardness) -> Ext {
        match self {
            RedOp::Tensor => a.tensor(b),
            RedOp::Cotensor => a.cotensor(b),
            RedOp::Padd => a.padd(b, p),
            RedOp::Pcoadd => a.pcoadd(b, p),
        }
    }

    pub fn apply_values(self, a: &Value, b: &Value) -> Result<Value, AlethicError> {
        match self {
            RedOp::Tensor => a.tensor(b),
            RedOp::Cotensor => a.cotensor(b),
            RedOp::Padd => a.padd(b),
            RedOp::Pcoadd => a.pcoadd(b),
        }
    }
}

impl fmt::Display for RedOp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.keyword())
    }
}

/// A tree of sequents and constants joined by red connectives.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Structure {
    Leaf(Sequent),
    Const(Value),
    Op(RedOp, Box<Structure>, Box<Structure>),
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum StructureError {
    #[error("structure is not closed: it contains the sequent {0}")]
    NotClosed(Sequent),
    #[error(transparent)]
    Alethic(#[from] AlethicError),
}

impl Structure {
    pub fn leaf(s: Sequent) -> Structure {
        Structure::Leaf(s)
    }

    pub fn op(op: RedOp, a: Structure, b: Structure) -> Structure {
        Structure::Op(op, Box::new(a), Box::new(b))
    }

    pub fn parse(text: &str, p: &Hardness) -> Result<Structure, crate::parse::ParseError> {
        crate::parse::parse_structure(text, p)
    }

    pub fn leaves(&self) -> Vec<&Sequent> {
        let mut out = Vec::new();
        self.collect_leaves(&mut out);
        out
    }

    fn collect_leaves<'a>(&'a self, out: &mut Vec<&'a Sequent>) {
        match self {
            Structure::Leaf(s) => out.push(s),
            Structure::Const(_) => {}
            Structure::Op(_, a, b) => {
                a.collect_leaves(out);
                b.collect_leaves(out);
            }
        }
    }

    pub fn is_closed(&self) -> bool {
        self.leaves().is_empty()
    }

    pub fn is_unary(&self) -> bool {
        self.leaves().len() == 1
    }

    /// Evaluates a closed structure.
    pub fn eval(&self) -> Result<Value, StructureError> {
        match self {
            Structure::Leaf(s) => Err(StructureError::NotClosed(s.clone())),
            Structure::Const(v) => Ok(v.clone()),
            Structure::Op(op, a, b) => Ok(op.apply_values(&a.eval()?, &b.eval()?)?),
        }
    }

    /// Evaluates by mapping every leaf through `leaf`.
    pub fn eval_with<E>(&self, leaf: &mut impl FnMut(&Sequent) -> Result<Value, E>) -> Result<Value, E>
    where
        E: From<AlethicError>,
    {
        match self {
            Structure::Leaf(s) => leaf(s),
            Structure::Const(v) => Ok(v.clone()),
            Structure::Op(op, a, b) => {
                let x = a.eval_with(leaf)?;
                let y = b.eval_with(leaf)?;
                Ok(op.apply_values(&x, &y)?)
            }
        }
    }
}

impl fmt::Display for Structure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Structure::Leaf(s) => write!(f, "(seq {s})"),
            Structure::Const(v) => write!(f, "(const {})", v.exact()),
            Structure::Op(op, a, b) => write!(f, "({op} {a} {b})"),
        }
    }
}

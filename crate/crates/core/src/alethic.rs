//! Exact arithmetic on the extended half-line `[0, ∞]` under a hardness `p`.
//!
//! For finite `p` a value `v` is stored by its power coordinate `v^p`; for
//! `p = ∞` it is stored as itself. In power coordinates the soft sum is a plain
//! sum, the soft co-sum is a harmonic sum and products and inverses are
//! unchanged, so everything stays rational.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use num::{BigInt, BigRational, One, Signed, ToPrimitive, Zero};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AlethicError {
    #[error("hardness mismatch: {0} vs {1}")]
    HardnessMismatch(String, String),
    #[error("invalid literal {0:?}")]
    InvalidLiteral(String),
    #[error("hardness must be a positive rational or inf, got {0:?}")]
    InvalidHardness(String),
    #[error("{value} has no exact power coordinate at p={p}")]
    NotRepresentable { value: String, p: Hardness },
}

/// The hardness parameter: a positive rational or infinity.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Hardness {
    Finite(BigRational),
    Infinite,
}

impl Hardness {
    pub fn finite(r: BigRational) -> Result<Self, AlethicError> {
        if r.is_positive() {
            Ok(Hardness::Finite(r))
        } else {
            Err(AlethicError::InvalidHardness(r.to_string()))
        }
    }

    pub fn integer(n: u32) -> Self {
        assert!(n > 0, "hardness must be positive");
        Hardness::Finite(BigRational::from_integer(BigInt::from(n)))
    }

    pub fn one() -> Self {
        Hardness::integer(1)
    }

    pub fn is_infinite(&self) -> bool {
        matches!(self, Hardness::Infinite)
    }

    pub fn is_one(&self) -> bool {
        matches!(self, Hardness::Finite(r) if r.is_one())
    }

    pub fn to_f64(&self) -> f64 {
        match self {
            Hardness::Finite(r) => r.to_f64().unwrap_or(f64::INFINITY),
            Hardness::Infinite => f64::INFINITY,
        }
    }

    pub fn parse(text: &str) -> Result<Self, AlethicError> {
        match Ext::parse_literal(text) {
            Ok(Ext::Inf) => Ok(Hardness::Infinite),
            Ok(Ext::Pos(r)) => Ok(Hardness::Finite(r)),
            _ => Err(AlethicError::InvalidHardness(text.to_string())),
        }
    }
}

impl fmt::Display for Hardness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Hardness::Finite(r) => write!(f, "{r}"),
            Hardness::Infinite => write!(f, "inf"),
        }
    }
}

impl FromStr for Hardness {
    type Err = AlethicError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Hardness::parse(s)
    }
}

/// An extended nonnegative rational. Zero and infinity are explicit states,
/// `Pos` always holds a strictly positive rational.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Ext {
    Zero,
    Pos(BigRational),
    Inf,
}

impl Ext {
    pub fn one() -> Self {
        Ext::Pos(BigRational::one())
    }

    /// Panics on negative input.
    pub fn from_rational(r: BigRational) -> Self {
        assert!(!r.is_negative(), "negative value {r}");
        if r.is_zero() {
            Ext::Zero
        } else {
            Ext::Pos(r)
        }
    }

    pub fn from_ratio(n: i64, d: i64) -> Self {
        Ext::from_rational(BigRational::new(n.into(), d.into()))
    }

    pub fn is_zero(&self) -> bool {
        matches!(self, Ext::Zero)
    }

    pub fn is_inf(&self) -> bool {
        matches!(self, Ext::Inf)
    }

    pub fn is_one(&self) -> bool {
        matches!(self, Ext::Pos(r) if r.is_one())
    }

    /// The finite value as a rational, `None` for infinity.
    pub fn to_rational(&self) -> Option<BigRational> {
        match self {
            Ext::Zero => Some(BigRational::zero()),
            Ext::Pos(r) => Some(r.clone()),
            Ext::Inf => None,
        }
    }

    /// Parses `n`, `n/m` or `inf` (digits only, `m > 0`).
    pub fn parse_literal(text: &str) -> Result<Self, AlethicError> {
        let bad = || AlethicError::InvalidLiteral(text.to_string());
        let t = text.trim();
        if t == "inf" {
            return Ok(Ext::Inf);
        }
        let digits = |s: &str| !s.is_empty() && s.bytes().all(|b| b.is_ascii_digit());
        let (n, d) = match t.split_once('/') {
            Some((n, d)) => (n, d),
            None => (t, "1"),
        };
        if !digits(n) || !digits(d) {
            return Err(bad());
        }
        let n: BigInt = n.parse().map_err(|_| bad())?;
        let d: BigInt = d.parse().map_err(|_| bad())?;
        if d.is_zero() {
            return Err(bad());
        }
        Ok(Ext::from_rational(BigRational::new(n, d)))
    }

    /// Conjunctive product: zero absorbs everything, including infinity.
    pub fn tensor(&self, other: &Ext) -> Ext {
        match (self, other) {
            (Ext::Zero, _) | (_, Ext::Zero) => Ext::Zero,
            (Ext::Inf, _) | (_, Ext::Inf) => Ext::Inf,
            (Ext::Pos(a), Ext::Pos(b)) => Ext::Pos(a * b),
        }
    }

    /// Disjunctive product: infinity absorbs everything, including zero.
    pub fn cotensor(&self, other: &Ext) -> Ext {
        match (self, other) {
            (Ext::Inf, _) | (_, Ext::Inf) => Ext::Inf,
            (Ext::Zero, _) | (_, Ext::Zero) => Ext::Zero,
            (Ext::Pos(a), Ext::Pos(b)) => Ext::Pos(a * b),
        }
    }

    pub fn dual(&self) -> Ext {
        match self {
            Ext::Zero => Ext::Inf,
            Ext::Inf => Ext::Zero,
            Ext::Pos(a) => Ext::Pos(a.recip()),
        }
    }

    /// `self ⊸ other`, i.e. `self* ⊗* other`.
    pub fn residual(&self, other: &Ext) -> Ext {
        self.dual().cotensor(other)
    }

    pub fn sum(&self, other: &Ext) -> Ext {
        match (self, other) {
            (Ext::Inf, _) | (_, Ext::Inf) => Ext::Inf,
            (Ext::Zero, x) | (x, Ext::Zero) => x.clone(),
            (Ext::Pos(a), Ext::Pos(b)) => Ext::Pos(a + b),
        }
    }

    pub fn harmonic(&self, other: &Ext) -> Ext {
        match (self, other) {
            (Ext::Zero, _) | (_, Ext::Zero) => Ext::Zero,
            (Ext::Inf, x) | (x, Ext::Inf) => x.clone(),
            (Ext::Pos(a), Ext::Pos(b)) => Ext::Pos(a * b / (a + b)),
        }
    }

    /// Soft sum in power coordinates of hardness `p`.
    pub fn padd(&self, other: &Ext, p: &Hardness) -> Ext {
        match p {
            Hardness::Finite(_) => self.sum(other),
            Hardness::Infinite => self.larger(other).clone(),
        }
    }

    /// Soft co-sum in power coordinates of hardness `p`.
    pub fn pcoadd(&self, other: &Ext, p: &Hardness) -> Ext {
        match p {
            Hardness::Finite(_) => self.harmonic(other),
            Hardness::Infinite => self.smaller(other).clone(),
        }
    }

    /// Exact `self^e` for a positive rational exponent, if it is rational.
    pub fn pow_exact(&self, e: &BigRational) -> Option<Ext> {
        match self {
            Ext::Zero | Ext::Inf => Some(self.clone()),
            Ext::Pos(r) => rational_pow(r, e).map(Ext::Pos),
        }
    }

    /// The real number with power coordinate `self` at hardness `p`.
    pub fn root_f64(&self, p: &Hardness) -> f64 {
        match self {
            Ext::Zero => 0.0,
            Ext::Inf => f64::INFINITY,
            Ext::Pos(q) => match p {
                Hardness::Infinite => rational_to_f64(q),
                Hardness::Finite(pr) => {
                    let e = pr.recip().to_f64().expect("hardness fits in f64");
                    let direct = q.to_f64().unwrap_or(f64::NAN);
                    if direct.is_normal() && direct.abs() < 1e300 && direct.abs() > 1e-300 {
                        direct.powf(e)
                    } else {
                        (ln_rational(q) * e).exp()
                    }
                }
            },
        }
    }

    fn larger<'a>(&'a self, other: &'a Ext) -> &'a Ext {
        if self >= other {
            self
        } else {
            other
        }
    }

    fn smaller<'a>(&'a self, other: &'a Ext) -> &'a Ext {
        if self <= other {
            self
        } else {
            other
        }
    }
}

impl Ord for Ext {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self, other) {
            (Ext::Zero, Ext::Zero) | (Ext::Inf, Ext::Inf) => Ordering::Equal,
            (Ext::Zero, _) | (_, Ext::Inf) => Ordering::Less,
            (_, Ext::Zero) | (Ext::Inf, _) => Ordering::Greater,
            (Ext::Pos(a), Ext::Pos(b)) => a.cmp(b),
        }
    }
}

impl PartialOrd for Ext {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Ext {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Ext::Zero => write!(f, "0"),
            Ext::Inf => write!(f, "inf"),
            Ext::Pos(r) => write!(f, "{r}"),
        }
    }
}

fn rational_to_f64(q: &BigRational) -> f64 {
    match q.to_f64() {
        Some(x) if x.is_finite() && (x != 0.0 || q.is_zero()) => x,
        _ => ln_rational(q).exp(),
    }
}

fn ln_bigint(x: &BigInt) -> f64 {
    let bits = x.bits();
    if bits < 1000 {
        x.to_f64().expect("small integer converts").ln()
    } else {
        let shift = bits - 64;
        let top: BigInt = x >> shift;
        top.to_f64().expect("64-bit prefix converts").ln() + shift as f64 * std::f64::consts::LN_2
    }
}

fn ln_rational(q: &BigRational) -> f64 {
    ln_bigint(q.numer()) - ln_bigint(q.denom())
}

/// Exact integer `k`-th root, if `x` is a perfect `k`-th power.
fn exact_root(x: &BigInt, k: u32) -> Option<BigInt> {
    let r = x.nth_root(k);
    if num::pow::pow(r.clone(), k as usize) == *x {
        Some(r)
    } else {
        None
    }
}

/// Exact `r^e` for positive rationals, when the result is rational.
pub fn rational_pow(r: &BigRational, e: &BigRational) -> Option<BigRational> {
    let n = e.numer().to_u32()?;
    let m = e.denom().to_u32()?;
    let num = num::pow::pow(r.numer().clone(), n as usize);
    let den = num::pow::pow(r.denom().clone(), n as usize);
    Some(BigRational::new(exact_root(&num, m)?, exact_root(&den, m)?))
}

/// An element of `[0, ∞]` under a fixed hardness.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Value {
    p: Hardness,
    q: Ext,
}

impl Value {
    /// A value given by its power coordinate.
    pub fn from_power(q: Ext, p: &Hardness) -> Self {
        Value { p: p.clone(), q }
    }

    /// A value given by its real magnitude; fails when `r^p` is irrational.
    pub fn from_real(r: &Ext, p: &Hardness) -> Result<Self, AlethicError> {
        let q = match p {
            Hardness::Infinite => Some(r.clone()),
            Hardness::Finite(e) => r.pow_exact(e),
        };
        q.map(|q| Value::from_power(q, p))
            .ok_or_else(|| AlethicError::NotRepresentable { value: r.to_string(), p: p.clone() })
    }

    pub fn zero(p: &Hardness) -> Self {
        Value::from_power(Ext::Zero, p)
    }

    pub fn one(p: &Hardness) -> Self {
        Value::from_power(Ext::one(), p)
    }

    pub fn infinity(p: &Hardness) -> Self {
        Value::from_power(Ext::Inf, p)
    }

    pub fn hardness(&self) -> &Hardness {
        &self.p
    }

    /// The stored coordinate: `v^p` for finite `p`, `v` itself at `p = ∞`.
    pub fn power(&self) -> &Ext {
        &self.q
    }

    /// Parses a literal as a real magnitude, or `q@p=h` as a power
    /// coordinate `q` that must be stated at the active hardness.
    pub fn parse(text: &str, p: &Hardness) -> Result<Self, AlethicError> {
        match text.split_once('@') {
            Some((q, tag)) => {
                let h = tag.trim().strip_prefix("p=").ok_or_else(|| AlethicError::InvalidLiteral(text.to_string()))?;
                let h = Hardness::parse(h)?;
                if &h != p {
                    return Err(AlethicError::HardnessMismatch(h.to_string(), p.to_string()));
                }
                Ok(Value::from_power(Ext::parse_literal(q)?, p))
            }
            None => Value::from_real(&Ext::parse_literal(text)?, p),
        }
    }

    fn same(&self, other: &Value) -> Result<(), AlethicError> {
        if self.p == other.p {
            Ok(())
        } else {
            Err(AlethicError::HardnessMismatch(self.p.to_string(), other.p.to_string()))
        }
    }

    fn with(&self, q: Ext) -> Value {
        Value { p: self.p.clone(), q }
    }

    pub fn tensor(&self, other: &Value) -> Result<Value, AlethicError> {
        self.same(other)?;
        Ok(self.with(self.q.tensor(&other.q)))
    }

    pub fn cotensor(&self, other: &Value) -> Result<Value, AlethicError> {
        self.same(other)?;
        Ok(self.with(self.q.cotensor(&other.q)))
    }

    pub fn dual(&self) -> Value {
        self.with(self.q.dual())
    }

    pub fn padd(&self, other: &Value) -> Result<Value, AlethicError> {
        self.same(other)?;
        Ok(self.with(self.q.padd(&other.q, &self.p)))
    }

    pub fn pcoadd(&self, other: &Value) -> Result<Value, AlethicError> {
        self.same(other)?;
        Ok(self.with(self.q.pcoadd(&other.q, &self.p)))
    }

    pub fn residual(&self, other: &Value) -> Result<Value, AlethicError> {
        self.same(other)?;
        Ok(self.with(self.q.residual(&other.q)))
    }

    pub fn leq(&self, other: &Value) -> Result<bool, AlethicError> {
        self.same(other)?;
        Ok(self.q <= other.q)
    }

    pub fn to_float(&self) -> f64 {
        self.q.root_f64(&self.p)
    }

    pub fn qualitative_additive(&self) -> bool {
        !self.q.is_zero()
    }

    pub fn qualitative_multiplicative(&self) -> bool {
        self.q >= Ext::one()
    }

    pub fn is_zero(&self) -> bool {
        self.q.is_zero()
    }

    pub fn is_infinite(&self) -> bool {
        self.q.is_inf()
    }

    /// Exact text: the power coordinate, tagged with the hardness unless the
    /// coordinate is hardness independent (`0`, `1`, `inf`, or `p = 1`).
    pub fn exact(&self) -> String {
        if self.p.is_one() || self.q.is_zero() || self.q.is_inf() || self.q.is_one() {
            self.q.to_string()
        } else {
            format!("{}@p={}", self.q, self.p)
        }
    }

    /// Exact text followed by a decimal approximation in parentheses.
    pub fn describe(&self) -> String {
        let (exact, decimal) = (self.exact(), format_decimal(self.to_float()));
        if self.q.is_zero() || self.q.is_inf() || exact == decimal {
            exact
        } else {
            format!("{exact} ({decimal})")
        }
    }
}

impl PartialOrd for Value {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        if self.p == other.p {
            Some(self.q.cmp(&other.q))
        } else {
            None
        }
    }
}

impl fmt::Display for Value {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.exact())
    }
}

/// Decimal display with at most ten fractional digits; infinity is `inf`.
pub fn format_decimal(x: f64) -> String {
    if x.is_infinite() {
        return "inf".to_string();
    }
    let s = format!("{x:.10}");
    let s = s.trim_end_matches('0').trim_end_matches('.');
    if s == "-0" {
        "0".to_string()
    } else {
        s.to_string()
    }
}

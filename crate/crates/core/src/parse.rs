//! Lexer and recursive-descent parser for formulas, sequents, structures and
//! the s-expression file formats built on them.

use std::fmt;

use crate::alethic::{Hardness, Value};
use crate::syntax::{Cedent, Formula, RedOp, Sequent, Structure};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub struct ParseError {
    pub offset: usize,
    pub message: String,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "syntax error at byte {}: {}", self.offset, self.message)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub(crate) enum Tok {
    LParen,
    RParen,
    Comma,
    Turnstile,
    Star,
    Bar,
    Plus,
    Amp,
    Tilde,
    At,
    Eq,
    Ident(String),
    Number(String),
    Eof,
}

impl fmt::Display for Tok {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Tok::LParen => write!(f, "'('"),
            Tok::RParen => write!(f, "')'"),
            Tok::Comma => write!(f, "','"),
            Tok::Turnstile => write!(f, "'|-'"),
            Tok::Star => write!(f, "'*'"),
            Tok::Bar => write!(f, "'|'"),
            Tok::Plus => write!(f, "'+'"),
            Tok::Amp => write!(f, "'&'"),
            Tok::Tilde => write!(f, "'~'"),
            Tok::At => write!(f, "'@'"),
            Tok::Eq => write!(f, "'='"),
            Tok::Ident(s) => write!(f, "{s:?}"),
            Tok::Number(s) => write!(f, "{s}"),
            Tok::Eof => write!(f, "end of input"),
        }
    }
}

fn lex(text: &str) -> Result<Vec<(usize, Tok)>, ParseError> {
    let bytes = text.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i];
        let start = i;
        let single = match c {
            b'(' => Some(Tok::LParen),
            b')' => Some(Tok::RParen),
            b',' => Some(Tok::Comma),
            b'*' => Some(Tok::Star),
            b'+' => Some(Tok::Plus),
            b'&' => Some(Tok::Amp),
            b'~' => Some(Tok::Tilde),
            b'@' => Some(Tok::At),
            b'=' => Some(Tok::Eq),
            _ => None,
        };
        if let Some(t) = single {
            out.push((start, t));
            i += 1;
        } else if c == b'|' {
            if bytes.get(i + 1) == Some(&b'-') {
                out.push((start, Tok::Turnstile));
                i += 2;
            } else {
                out.push((start, Tok::Bar));
                i += 1;
            }
        } else if c == b'#' {
            while i < bytes.len() && bytes[i] != b'\n' {
                i += 1;
            }
        } else if c.is_ascii_whitespace() {
            i += 1;
        } else if c.is_ascii_digit() {
            while i < bytes.len() && bytes[i].is_ascii_digit() {
                i += 1;
            }
            if i < bytes.len() && bytes[i] == b'/' {
                i += 1;
                let d = i;
                while i < bytes.len() && bytes[i].is_ascii_digit() {
                    i += 1;
                }
                if d == i {
                    return Err(ParseError { offset: d, message: "expected denominator".into() });
                }
            }
            out.push((start, Tok::Number(text[start..i].to_string())));
        } else if c.is_ascii_alphabetic() || c == b'_' {
            while i < bytes.len() && (bytes[i].is_ascii_alphanumeric() || bytes[i] == b'_') {
                i += 1;
            }
            out.push((start, Tok::Ident(text[start..i].to_string())));
        } else {
            let ch = text[i..].chars().next().unwrap_or('?');
            return Err(ParseError { offset: i, message: format!("unexpected character {ch:?}") });
        }
    }
    out.push((text.len(), Tok::Eof));
    Ok(out)
}

fn is_atom_name(s: &str) -> bool {
    let mut b = s.bytes();
    matches!(b.next(), Some(c) if c.is_ascii_lowercase())
        && b.all(|c| c.is_ascii_lowercase() || c.is_ascii_digit() || c == b'_')
        && !matches!(s, "bot" | "top" | "neg")
}

pub(crate) struct Parser {
    toks: Vec<(usize, Tok)>,
    pos: usize,
}

impl Parser {
    pub(crate) fn new(text: &str) -> Result<Parser, ParseError> {
        Ok(Parser { toks: lex(text)?, pos: 0 })
    }

    pub(crate) fn peek(&self) -> &Tok {
        &self.toks[self.pos].1
    }

    pub(crate) fn peek_at(&self, k: usize) -> &Tok {
        &self.toks[(self.pos + k).min(self.toks.len() - 1)].1
    }

    pub(crate) fn offset(&self) -> usize {
        self.toks[self.pos].0
    }

    pub(crate) fn bump(&mut self) -> Tok {
        let t = self.toks[self.pos].1.clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    pub(crate) fn error<T>(&self, message: impl Into<String>) -> Result<T, ParseError> {
        Err(ParseError { offset: self.offset(), message: message.into() })
    }

    pub(crate) fn expect(&mut self, t: Tok) -> Result<(), ParseError> {
        if *self.peek() == t {
            self.bump();
            Ok(())
        } else {
            self.error(format!("expected {t}, found {}", self.peek()))
        }
    }

    pub(crate) fn ident(&mut self) -> Result<String, ParseError> {
        match self.peek().clone() {
            Tok::Ident(s) => {
                self.bump();
                Ok(s)
            }
            t => self.error(format!("expected a name, found {t}")),
        }
    }

    pub(crate) fn keyword(&mut self, kw: &str) -> Result<(), ParseError> {
        match self.peek() {
            Tok::Ident(s) if s == kw => {
                self.bump();
                Ok(())
            }
            t => self.error(format!("expected {kw:?}, found {t}")),
        }
    }

    pub(crate) fn atom_name(&mut self) -> Result<String, ParseError> {
        let at = self.offset();
        let s = self.ident()?;
        if is_atom_name(&s) {
            Ok(s)
        } else {
            Err(ParseError { offset: at, message: format!("{s:?} is not an atom name") })
        }
    }

    pub(crate) fn finish(&mut self) -> Result<(), ParseError> {
        match self.peek() {
            Tok::Eof => Ok(()),
            t => self.error(format!("unexpected {t} after end")),
        }
    }

    /// A formula: a primary, optionally joined to one more primary by a
    /// binary connective. Longer chains must be parenthesized.
    pub(crate) fn formula(&mut self) -> Result<Formula, ParseError> {
        let left = self.primary()?;
        let Some(make) = self.binop() else {
            return Ok(left);
        };
        self.bump();
        let right = self.primary()?;
        if self.binop().is_some() {
            return self.error("ambiguous connective chain; add parentheses");
        }
        Ok(make(left, right))
    }

    fn binop(&self) -> Option<fn(Formula, Formula) -> Formula> {
        match self.peek() {
            Tok::Star => Some(Formula::tensor),
            Tok::Bar => Some(Formula::par),
            Tok::Plus => Some(Formula::plor),
            Tok::Amp => Some(Formula::pland),
            _ => None,
        }
    }

    fn primary(&mut self) -> Result<Formula, ParseError> {
        match self.peek().clone() {
            Tok::LParen => {
                self.bump();
                let f = self.formula()?;
                self.expect(Tok::RParen)?;
                Ok(f)
            }
            Tok::Tilde => {
                self.bump();
                Ok(Formula::NegAtom(self.atom_name()?))
            }
            Tok::Number(n) if n == "1" => {
                self.bump();
                Ok(Formula::One)
            }
            Tok::Ident(s) if s == "bot" => {
                self.bump();
                Ok(Formula::Bot)
            }
            Tok::Ident(s) if s == "top" => {
                self.bump();
                Ok(Formula::Top)
            }
            Tok::Ident(s) if s == "neg" && *self.peek_at(1) == Tok::LParen => {
                self.bump();
                self.bump();
                let f = self.formula()?;
                self.expect(Tok::RParen)?;
                Ok(f.negate())
            }
            Tok::Ident(_) => Ok(Formula::Atom(self.atom_name()?)),
            t => self.error(format!("expected a formula, found {t}")),
        }
    }

    /// A comma-separated, possibly empty list of formulas, ending before
    /// `|-`, `)` or the end of input.
    pub(crate) fn cedent(&mut self) -> Result<Cedent, ParseError> {
        let mut items = Vec::new();
        if matches!(self.peek(), Tok::Turnstile | Tok::RParen | Tok::Eof) {
            return Ok(Cedent::empty());
        }
        loop {
            items.push(self.formula()?);
            if *self.peek() == Tok::Comma {
                self.bump();
            } else {
                break;
            }
        }
        Ok(Cedent::new(items))
    }

    pub(crate) fn sequent(&mut self) -> Result<Sequent, ParseError> {
        let ante = self.cedent()?;
        self.expect(Tok::Turnstile)?;
        let cons = self.cedent()?;
        Ok(Sequent::new(ante, cons))
    }

    /// A literal `n`, `n/m`, `inf`, or a power coordinate `q@p=h`.
    pub(crate) fn literal(&mut self, p: &Hardness) -> Result<Value, ParseError> {
        let at = self.offset();
        let mut text = match self.bump() {
            Tok::Number(n) => n,
            Tok::Ident(s) if s == "inf" => s,
            t => return Err(ParseError { offset: at, message: format!("expected a number, found {t}") }),
        };
        if *self.peek() == Tok::At {
            self.bump();
            self.keyword("p")?;
            self.expect(Tok::Eq)?;
            match self.bump() {
                Tok::Number(n) => text = format!("{text}@p={n}"),
                Tok::Ident(s) if s == "inf" => text = format!("{text}@p=inf"),
                t => return self.error(format!("expected a hardness, found {t}")),
            }
        }
        Value::parse(&text, p).map_err(|e| ParseError { offset: at, message: e.to_string() })
    }

    pub(crate) fn structure(&mut self, p: &Hardness) -> Result<Structure, ParseError> {
        self.expect(Tok::LParen)?;
        let at = self.offset();
        let head = self.ident()?;
        let s = match head.as_str() {
            "seq" => Structure::Leaf(self.sequent()?),
            "const" => Structure::Const(self.literal(p)?),
            other => match RedOp::from_keyword(other) {
                Some(op) => {
                    let a = self.structure(p)?;
                    let b = self.structure(p)?;
                    Structure::op(op, a, b)
                }
                None => return Err(ParseError { offset: at, message: format!("unknown structure form {other:?}") }),
            },
        };
        self.expect(Tok::RParen)?;
        Ok(s)
    }
}

pub fn parse_formula(text: &str) -> Result<Formula, ParseError> {
    let mut p = Parser::new(text)?;
    let f = p.formula()?;
    p.finish()?;
    Ok(f)
}

pub fn parse_cedent(text: &str) -> Result<Cedent, ParseError> {
    let mut p = Parser::new(text)?;
    let c = p.cedent()?;
    p.finish()?;
    Ok(c)
}

pub fn parse_sequent(text: &str) -> Result<Sequent, ParseError> {
    let mut p = Parser::new(text)?;
    let s = p.sequent()?;
    p.finish()?;
    Ok(s)
}

pub fn parse_structure(text: &str, h: &Hardness) -> Result<Structure, ParseError> {
    let mut p = Parser::new(text)?;
    let s = p.structure(h)?;
    p.finish()?;
    Ok(s)
}

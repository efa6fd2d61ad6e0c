//! Proof files: s-expressions over rule instances and compositions.
//!
//! ```text
//! d ::= (rule NAME [atom] (bind SLOT*) STRUCTURE)   premise structure last
//!     | (vert d d)                                 upper, then lower
//!     | (horiz OP d d)                             OP in ten cot padd pcoadd
//!     | (id STRUCTURE)
//! SLOT ::= (G cedent) | (D cedent) | (G2 cedent) | (D2 cedent) | (A formula) | (B formula)
//! ```
//!
//! The conclusion of a rule is not written; it follows from the bindings.

use crate::alethic::Hardness;
use crate::calculus::{instantiate, Bindings, CalculusError, Derivation, RuleName, RuleNode, Slot, Theory};
use crate::parse::{ParseError, Parser, Tok};
use crate::syntax::{RedOp, Structure};

pub fn print_derivation(d: &Derivation) -> String {
    let mut out = String::new();
    print(d, 0, &mut out);
    out.push('\n');
    out
}

/// Single-line form, used as the canonical encoding for tie-breaking.
pub fn encode(d: &Derivation) -> String {
    let mut out = String::new();
    print(d, usize::MAX, &mut out);
    out
}

fn newline(indent: usize, out: &mut String) {
    if indent == usize::MAX {
        out.push(' ');
    } else {
        out.push('\n');
        out.extend(std::iter::repeat_n(' ', indent));
    }
}

fn deeper(indent: usize) -> usize {
    if indent == usize::MAX {
        indent
    } else {
        indent + 2
    }
}

fn print(d: &Derivation, indent: usize, out: &mut String) {
    match d {
        Derivation::Id(h) => out.push_str(&format!("(id {h})")),
        Derivation::Rule(n) => {
            out.push_str(&format!("(rule {} ", n.rule));
            print_bindings(&n.rule, &n.bind, out);
            out.push_str(&format!(" {})", n.premise));
        }
        Derivation::Vert(u, l) => {
            out.push_str("(vert");
            newline(deeper(indent), out);
            print(u, deeper(indent), out);
            newline(deeper(indent), out);
            print(l, deeper(indent), out);
            out.push(')');
        }
        Derivation::Horiz(op, l, r) => {
            out.push_str(&format!("(horiz {op}"));
            newline(deeper(indent), out);
            print(l, deeper(indent), out);
            newline(deeper(indent), out);
            print(r, deeper(indent), out);
            out.push(')');
        }
    }
}

fn print_bindings(rule: &RuleName, b: &Bindings, out: &mut String) {
    out.push_str("(bind");
    for slot in rule.slots() {
        let body = match slot {
            Slot::G => cedent_body(&b.gamma),
            Slot::D => cedent_body(&b.delta),
            Slot::G2 => cedent_body(&b.gamma2),
            Slot::D2 => cedent_body(&b.delta2),
            Slot::A => b.a.as_ref().map(|f| format!(" {f}")).unwrap_or_default(),
            Slot::B => b.b.as_ref().map(|f| format!(" {f}")).unwrap_or_default(),
        };
        out.push_str(&format!(" ({}{body})", slot.key()));
    }
    out.push(')');
}

fn cedent_body(c: &crate::syntax::Cedent) -> String {
    if c.is_empty() {
        String::new()
    } else {
        format!(" {c}")
    }
}

pub fn parse_derivation(text: &str, p: &Hardness, t: &Theory) -> Result<Derivation, CalculusError> {
    let mut ps = Parser::new(text)?;
    let d = derivation(&mut ps, p, t)?;
    ps.finish()?;
    Ok(d)
}

fn derivation(ps: &mut Parser, p: &Hardness, t: &Theory) -> Result<Derivation, CalculusError> {
    ps.expect(Tok::LParen)?;
    let at = ps.offset();
    let head = ps.ident()?;
    let d = match head.as_str() {
        "id" => Derivation::Id(ps.structure(p)?),
        "vert" => {
            let u = derivation(ps, p, t)?;
            let l = derivation(ps, p, t)?;
            Derivation::vert(u, l)
        }
        "horiz" => {
            let at = ps.offset();
            let kw = ps.ident()?;
            let op = RedOp::from_keyword(&kw)
                .ok_or_else(|| ParseError { offset: at, message: format!("unknown red connective {kw:?}") })?;
            let l = derivation(ps, p, t)?;
            let r = derivation(ps, p, t)?;
            Derivation::horiz(op, l, r)
        }
        "rule" => {
            let at = ps.offset();
            let name = ps.ident()?;
            let atom = if RuleName::takes_atom(&name) { Some(ps.atom_name()?) } else { None };
            let rule = RuleName::from_name(&name, atom)
                .ok_or_else(|| ParseError { offset: at, message: format!("unknown rule {name:?}") })?;
            let bind = bindings(ps)?;
            let premise = ps.structure(p)?;
            let (_, concl) = instantiate(&rule, &bind, p, t)
                .map_err(|message| CalculusError::Malformed { path: format!("byte {at}"), message })?;
            Derivation::Rule(Box::new(RuleNode { rule, bind, premise, conclusion: Structure::Leaf(concl) }))
        }
        other => return Err(ParseError { offset: at, message: format!("unknown derivation form {other:?}") }.into()),
    };
    ps.expect(Tok::RParen)?;
    Ok(d)
}

fn bindings(ps: &mut Parser) -> Result<Bindings, ParseError> {
    ps.expect(Tok::LParen)?;
    ps.keyword("bind")?;
    let mut b = Bindings::default();
    while *ps.peek() == Tok::LParen {
        ps.bump();
        let at = ps.offset();
        let key = ps.ident()?;
        match key.as_str() {
            "G" => b.gamma = ps.cedent()?,
            "D" => b.delta = ps.cedent()?,
            "G2" => b.gamma2 = ps.cedent()?,
            "D2" => b.delta2 = ps.cedent()?,
            "A" => b.a = Some(ps.formula()?),
            "B" => b.b = Some(ps.formula()?),
            _ => return Err(ParseError { offset: at, message: format!("unknown binding slot {key:?}") }),
        }
        ps.expect(Tok::RParen)?;
    }
    ps.expect(Tok::RParen)?;
    Ok(b)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    #[test]
    fn fixtures_round_trip() {
        for p in [Hardness::one(), Hardness::integer(2), Hardness::Infinite] {
            let t = Theory::empty(&p);
            for (name, d) in fixtures::reference_proofs(&p) {
                let text = print_derivation(&d);
                let back = parse_derivation(&text, &p, &t).unwrap();
                assert_eq!(back, d, "{name}");
                assert_eq!(parse_derivation(&encode(&d), &p, &t).unwrap(), d);
            }
        }
    }

    #[test]
    fn unknown_forms_are_rejected() {
        let p = Hardness::one();
        let t = Theory::empty(&p);
        assert!(parse_derivation("(rule FOO (bind) (const 1))", &p, &t).is_err());
        assert!(parse_derivation("(rule AX (bind) (const 1))", &p, &t).is_err());
        assert!(parse_derivation("(twist (id (const 1)))", &p, &t).is_err());
        let e = parse_derivation("(horiz plus (id (const 1)) (id (const 1)))", &p, &t).unwrap_err();
        assert!(e.to_string().contains("plus"));
    }
}

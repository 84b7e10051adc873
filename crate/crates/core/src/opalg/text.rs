//! Canonical text rendering of expressions and a parser for the same syntax.
//!
//! Grammar accepted by [`parse`]:
//!
//! ```text
//! expr   := ['+'|'-'] term (('+'|'-') term)*
//! term   := factor (('*'|'/') factor)*
//! factor := atom ['^' ['-'] int]
//! atom   := int | 'i' | param | symbol | 'Lx' | 'Ly' | 'Lz' | '(' expr ')'
//! ```
//!
//! Juxtaposition is not a product; `*` is required. Division is only allowed
//! by single-term scalars.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::coeff::{number_negative, CRational, Coeff, Param, ParamPowers};
use super::expr::{ops, CanonicalSymbol, OperatorExpr};
use crate::error::Error;

fn rational_text(r: &BigRational) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Renders a number whose leading part is non-negative.
fn number_text(c: &CRational) -> String {
    match (c.re.is_zero(), c.im.is_zero()) {
        (_, true) => rational_text(&c.re),
        (true, false) => {
            if c.im.is_one() {
                "i".to_string()
            } else if (-c.im.clone()).is_one() {
                "-i".to_string()
            } else {
                format!("{}*i", rational_text(&c.im))
            }
        }
        (false, false) => {
            let sign = if c.im.is_negative() { "-" } else { "+" };
            let im = c.im.abs();
            let imt = if im.is_one() { "i".to_string() } else { format!("{}*i", rational_text(&im)) };
            format!("({}{}{})", rational_text(&c.re), sign, imt)
        }
    }
}

fn powers_text(k: &ParamPowers) -> Vec<String> {
    Param::ALL
        .iter()
        .filter_map(|&p| match k.get(p) {
            0 => None,
            1 => Some(p.name().to_string()),
            e => Some(format!("{}^{}", p.name(), e)),
        })
        .collect()
}

fn coeff_term_text(k: &ParamPowers, c: &CRational) -> String {
    let params = powers_text(k);
    let one = CRational::new(BigRational::one(), BigRational::zero());
    let mut parts = Vec::new();
    if *c != one || params.is_empty() {
        parts.push(number_text(c));
    }
    parts.extend(params);
    parts.join("*")
}

/// Text of a coefficient, including a leading minus when appropriate.
pub fn coeff_to_text(c: &Coeff) -> String {
    if c.is_zero() {
        return "0".to_string();
    }
    let mut out = String::new();
    for (idx, (k, v)) in c.terms().enumerate() {
        let neg = number_negative(v);
        let body = coeff_term_text(k, &if neg { -v.clone() } else { v.clone() });
        match (idx, neg) {
            (0, false) => {}
            (0, true) => out.push('-'),
            (_, false) => out.push_str(" + "),
            (_, true) => out.push_str(" - "),
        }
        out.push_str(&body);
    }
    out
}

/// Deterministic rendering. Terms are ordered by descending degree, then by
/// word in canonical symbol order.
pub fn to_text(e: &OperatorExpr) -> String {
    if e.is_zero() {
        return "0".to_string();
    }
    let mut terms: Vec<_> = e.terms().collect();
    terms.sort_by(|(wa, _), (wb, _)| wb.len().cmp(&wa.len()).then_with(|| wa.cmp(wb)));
    let mut out = String::new();
    for (idx, (w, c)) in terms.into_iter().enumerate() {
        let neg = c.leading_negative();
        let c = if neg { -c } else { c.clone() };
        let word: Vec<&str> = w.iter().map(|s| s.name()).collect();
        let body = if c.is_one() {
            if word.is_empty() {
                "1".to_string()
            } else {
                word.join("*")
            }
        } else if word.is_empty() {
            format!("({})", coeff_to_text(&c))
        } else {
            format!("({})*{}", coeff_to_text(&c), word.join("*"))
        };
        match (idx, neg) {
            (0, false) => {}
            (0, true) => out.push('-'),
            (_, false) => out.push_str(" + "),
            (_, true) => out.push_str(" - "),
        }
        out.push_str(&body);
    }
    out
}

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Int(BigInt),
    Ident(String),
    Op(char),
}

fn tokenize(s: &str) -> Result<Vec<Tok>, Error> {
    let mut out = Vec::new();
    let chars: Vec<char> = s.chars().collect();
    let mut i = 0;
    while i < chars.len() {
        let ch = chars[i];
        if ch.is_whitespace() {
            i += 1;
        } else if ch.is_ascii_digit() {
            let start = i;
            while i < chars.len() && chars[i].is_ascii_digit() {
                i += 1;
            }
            let digits: String = chars[start..i].iter().collect();
            out.push(Tok::Int(digits.parse().expect("digits")));
        } else if ch.is_ascii_alphabetic() || ch == '_' {
            let start = i;
            while i < chars.len() && (chars[i].is_ascii_alphanumeric() || chars[i] == '_') {
                i += 1;
            }
            out.push(Tok::Ident(chars[start..i].iter().collect()));
        } else if "+-*/^()".contains(ch) {
            out.push(Tok::Op(ch));
            i += 1;
        } else {
            return Err(Error::Parse(format!("unexpected character '{ch}' in \"{s}\"")));
        }
    }
    Ok(out)
}

struct Parser {
    toks: Vec<Tok>,
    pos: usize,
}

impl Parser {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos)
    }

    fn eat_op(&mut self, c: char) -> bool {
        if self.peek() == Some(&Tok::Op(c)) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expr(&mut self) -> Result<OperatorExpr, Error> {
        let mut negate = false;
        if self.eat_op('-') {
            negate = true;
        } else {
            self.eat_op('+');
        }
        let first = self.term()?;
        let mut acc = if negate { -&first } else { first };
        loop {
            if self.eat_op('+') {
                acc = &acc + &self.term()?;
            } else if self.eat_op('-') {
                acc = &acc - &self.term()?;
            } else {
                return Ok(acc);
            }
        }
    }

    fn term(&mut self) -> Result<OperatorExpr, Error> {
        let mut acc = self.factor()?;
        loop {
            if self.eat_op('*') {
                acc = &acc * &self.factor()?;
            } else if self.eat_op('/') {
                let d = self.factor()?;
                let inv = d
                    .as_scalar()
                    .and_then(|c| c.inverse())
                    .ok_or_else(|| Error::Parse("division by a non-monomial or operator".into()))?;
                acc = acc.scale(&inv);
            } else {
                return Ok(acc);
            }
        }
    }

    fn factor(&mut self) -> Result<OperatorExpr, Error> {
        let base = self.atom()?;
        if !self.eat_op('^') {
            return Ok(base);
        }
        let neg = self.eat_op('-');
        let n = match self.toks.get(self.pos) {
            Some(Tok::Int(n)) => {
                self.pos += 1;
                i32::try_from(n.clone()).map_err(|_| Error::Parse("exponent too large".into()))?
            }
            _ => return Err(Error::Parse("expected integer exponent".into())),
        };
        if neg {
            let inv = base
                .as_scalar()
                .and_then(|c| c.pow(-n))
                .ok_or_else(|| Error::Parse("negative power of a non-monomial".into()))?;
            Ok(OperatorExpr::scalar(inv))
        } else {
            Ok(base.pow(n as u32))
        }
    }

    fn atom(&mut self) -> Result<OperatorExpr, Error> {
        let tok = self
            .toks
            .get(self.pos)
            .cloned()
            .ok_or_else(|| Error::Parse("unexpected end of expression".into()))?;
        self.pos += 1;
        match tok {
            Tok::Int(n) => Ok(OperatorExpr::scalar(Coeff::from_crational(CRational::new(
                BigRational::from_integer(n),
                BigRational::zero(),
            )))),
            Tok::Op('(') => {
                let e = self.expr()?;
                if !self.eat_op(')') {
                    return Err(Error::Parse("missing ')'".into()));
                }
                Ok(e)
            }
            Tok::Op(c) => Err(Error::Parse(format!("unexpected '{c}'"))),
            Tok::Ident(name) => {
                if name == "i" {
                    return Ok(OperatorExpr::scalar(Coeff::i()));
                }
                if let Some(p) = Param::from_name(&name) {
                    return Ok(OperatorExpr::scalar(Coeff::param(p)));
                }
                if let Some(s) = CanonicalSymbol::from_name(&name) {
                    return Ok(OperatorExpr::symbol(s));
                }
                match name.as_str() {
                    "Lx" => Ok(ops::lx()),
                    "Ly" => Ok(ops::ly()),
                    "Lz" => Ok(ops::lz()),
                    _ => Err(Error::UnknownSymbol(name)),
                }
            }
        }
    }
}

/// Parse an expression. The result is not normalized.
pub fn parse(s: &str) -> Result<OperatorExpr, Error> {
    let toks = tokenize(s)?;
    if toks.is_empty() {
        return Err(Error::Parse("empty expression".into()));
    }
    let mut p = Parser { toks, pos: 0 };
    let e = p.expr()?;
    if p.pos != p.toks.len() {
        return Err(Error::Parse(format!("trailing input in \"{s}\"")));
    }
    Ok(e)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::opalg::expr::ops::*;

    fn i_hbar() -> Coeff {
        &Coeff::i() * &Coeff::param(Param::Hbar)
    }

    #[test]
    fn renders_i_hbar() {
        assert_eq!(to_text(&c(i_hbar())), "(i*hbar)");
    }

    #[test]
    fn renders_normal_ordered_commutator_result() {
        let e = (&px() * &x()).normalize();
        assert_eq!(to_text(&e), "x*px - (i*hbar)");
    }

    #[test]
    fn renders_fractions_and_powers() {
        let k = &Coeff::rational(-1, 2) * &Coeff::param_pow(Param::Mass, -1);
        assert_eq!(to_text(&lz().scale(&k)), "-(1/2*m^-1)*x*py + (1/2*m^-1)*y*px");
        assert_eq!(to_text(&OperatorExpr::zero()), "0");
        assert_eq!(to_text(&OperatorExpr::one()), "1");
    }

    #[test]
    fn parse_round_trip() {
        let src = "theta/(2*alpha*hbar)*py - alpha*x + (omega_c*eta)^2*z*z - i*hbar";
        let e = parse(src).unwrap().normalize();
        let again = parse(&to_text(&e)).unwrap().normalize();
        assert_eq!(e, again);
    }

    #[test]
    fn parse_angular_momentum_shorthand() {
        assert_eq!(parse("Lz").unwrap(), lz());
        assert_eq!(parse("-(Lx)").unwrap(), -&lx());
    }

    #[test]
    fn parse_errors() {
        assert!(matches!(parse("w*x"), Err(Error::UnknownSymbol(_))));
        assert!(parse("x/px").is_err());
        assert!(parse("(x + y").is_err());
        assert!(parse("").is_err());
        assert!(parse("x y").is_err());
    }
}

//! Recursive-descent parser for the coordinate expression language.
//!
//! ```text
//! expr  := term (('+' | '-') term)*
//! term  := unary (('*' | '/') unary)*
//! unary := '-' unary | power
//! power := atom ('^' uint)?
//! atom  := uint | 'sqrt2' | 'sqrt3' | 'sqrt6' | variable | '(' expr ')'
//! ```
//!
//! Exponentiation binds tighter than unary minus, so `-x1^2` is `-(x1^2)`.

use crate::alg::AlgScalar;
use crate::error::ExactError;
use crate::poly::{DEFAULT_NAMES, NVARS};
use crate::rat::Rat;
use crate::ratfn::RatFn;

/// Variable names of the ODE chart (x, y, p, q, z) = (x1, …, x5).
pub const JET_NAMES: [&str; NVARS] = ["x", "y", "p", "q", "z"];

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Num(num_bigint::BigInt),
    Ident(String),
    Op(char),
}

fn lex(text: &str) -> Result<Vec<(usize, Tok)>, ExactError> {
    let chars: Vec<(usize, char)> = text.char_indices().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let (pos, ch) = chars[i];
        if ch.is_whitespace() {
            i += 1;
        } else if ch.is_ascii_digit() {
            let start = i;
            while i < chars.len() && chars[i].1.is_ascii_digit() {
                i += 1;
            }
            let s: String = chars[start..i].iter().map(|c| c.1).collect();
            out.push((pos, Tok::Num(s.parse().expect("digits"))));
        } else if ch.is_ascii_alphabetic() || ch == '_' {
            let start = i;
            while i < chars.len() && (chars[i].1.is_ascii_alphanumeric() || chars[i].1 == '_') {
                i += 1;
            }
            let s: String = chars[start..i].iter().map(|c| c.1).collect();
            out.push((pos, Tok::Ident(s)));
        } else if "+-*/^()".contains(ch) {
            out.push((pos, Tok::Op(ch)));
            i += 1;
        } else {
            return Err(ExactError::Syntax { pos, msg: format!("unexpected character `{ch}`") });
        }
    }
    Ok(out)
}

struct Parser<'a> {
    toks: Vec<(usize, Tok)>,
    at: usize,
    end: usize,
    names: &'a [&'a str],
}

impl Parser<'_> {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.at).map(|t| &t.1)
    }

    fn pos(&self) -> usize {
        self.toks.get(self.at).map_or(self.end, |t| t.0)
    }

    fn err<T>(&self, msg: impl Into<String>) -> Result<T, ExactError> {
        Err(ExactError::Syntax { pos: self.pos(), msg: msg.into() })
    }

    fn eat(&mut self, op: char) -> bool {
        if self.peek() == Some(&Tok::Op(op)) {
            self.at += 1;
            true
        } else {
            false
        }
    }

    fn expr(&mut self) -> Result<RatFn, ExactError> {
        let mut acc = self.term()?;
        loop {
            if self.eat('+') {
                acc = acc.add(&self.term()?);
            } else if self.eat('-') {
                acc = acc.sub(&self.term()?);
            } else {
                return Ok(acc);
            }
        }
    }

    fn term(&mut self) -> Result<RatFn, ExactError> {
        let mut acc = self.unary()?;
        loop {
            if self.eat('*') {
                acc = acc.mul(&self.unary()?);
            } else if self.peek() == Some(&Tok::Op('/')) {
                self.at += 1;
                let pos = self.pos();
                let d = self.unary()?;
                if d.is_zero() {
                    return Err(ExactError::Syntax { pos, msg: "division by zero".into() });
                }
                acc = acc.div(&d)?;
            } else {
                return Ok(acc);
            }
        }
    }

    fn unary(&mut self) -> Result<RatFn, ExactError> {
        if self.eat('-') {
            return Ok(self.unary()?.neg());
        }
        self.power()
    }

    fn power(&mut self) -> Result<RatFn, ExactError> {
        let base = self.atom()?;
        if self.eat('^') {
            match self.peek().cloned() {
                Some(Tok::Num(n)) => {
                    self.at += 1;
                    let e: u32 = n
                        .try_into()
                        .ok()
                        .filter(|e| *e <= 255)
                        .ok_or_else(|| ExactError::Syntax { pos: self.pos(), msg: "exponent too large".into() })?;
                    Ok(base.pow(e))
                }
                _ => self.err("expected unsigned integer exponent"),
            }
        } else {
            Ok(base)
        }
    }

    fn atom(&mut self) -> Result<RatFn, ExactError> {
        match self.peek().cloned() {
            Some(Tok::Num(n)) => {
                self.at += 1;
                Ok(RatFn::from_rat(Rat::from(n)))
            }
            Some(Tok::Ident(id)) => {
                let v = match id.as_str() {
                    "sqrt2" => RatFn::constant(AlgScalar::sqrt2()),
                    "sqrt3" => RatFn::constant(AlgScalar::sqrt3()),
                    "sqrt6" => RatFn::constant(AlgScalar::sqrt6()),
                    _ => match self.names.iter().position(|n| *n == id) {
                        Some(i) => RatFn::var(i),
                        None => return self.err(format!("unknown identifier `{id}`")),
                    },
                };
                self.at += 1;
                Ok(v)
            }
            Some(Tok::Op('(')) => {
                self.at += 1;
                let e = self.expr()?;
                if !self.eat(')') {
                    return self.err("expected `)`");
                }
                Ok(e)
            }
            Some(Tok::Op(c)) => self.err(format!("unexpected `{c}`")),
            None => self.err("unexpected end of input"),
        }
    }
}

/// Parses an expression in the variables x1..x5.
pub fn parse_expr(text: &str) -> Result<RatFn, ExactError> {
    parse_expr_with(text, &DEFAULT_NAMES)
}

/// Parses an expression where `names[i]` denotes the coordinate x_{i+1}.
pub fn parse_expr_with(text: &str, names: &[&str]) -> Result<RatFn, ExactError> {
    let toks = lex(text)?;
    let mut p = Parser { toks, at: 0, end: text.len(), names };
    if p.peek().is_none() {
        return p.err("empty expression");
    }
    let e = p.expr()?;
    if p.peek().is_some() {
        return p.err("trailing input");
    }
    Ok(e)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::Poly;

    #[test]
    fn polynomial_input() {
        let f = parse_expr("x1^2 + 2*x2").unwrap();
        let x1 = Poly::var(0);
        let expected = x1.mul(&x1).add(&Poly::var(1).scale(&AlgScalar::from_int(2)));
        assert_eq!(f, RatFn::from_poly(expected));
    }

    #[test]
    fn surd_constant() {
        let f = parse_expr("1/sqrt6").unwrap();
        assert_eq!(f.constant_value().unwrap(), AlgScalar::new(Rat::ZERO, Rat::ZERO, Rat::ZERO, Rat::new(1, 6)));
    }

    #[test]
    fn fraction_is_normalized() {
        let f = parse_expr("(x1+x2)/(x1-x2)").unwrap();
        assert!(!f.den().is_zero());
        assert_eq!(f.den().leading().unwrap().1, AlgScalar::one());
    }

    #[test]
    fn unary_minus_binds_looser_than_power() {
        assert_eq!(parse_expr("-x1^2").unwrap(), parse_expr("-(x1^2)").unwrap());
    }

    #[test]
    fn errors_carry_positions() {
        match parse_expr("x1 + * 2") {
            Err(ExactError::Syntax { pos, .. }) => assert_eq!(pos, 5),
            other => panic!("unexpected {other:?}"),
        }
        assert!(parse_expr("1/(x1-x1)").is_err());
        assert!(parse_expr("x6").is_err());
    }

    #[test]
    fn jet_names() {
        let f = parse_expr_with("q^2", &JET_NAMES).unwrap();
        assert_eq!(f, parse_expr("x4^2").unwrap());
    }
}

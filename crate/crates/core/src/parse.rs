//! Expression grammar shared by the library and the CLI.
//!
//! ```text
//! expr     := ['-'] term (('+'|'-') term)*
//! term     := factor (('*'|'/') factor)*
//! factor   := rational ['x' ['^' int]]
//!           | 'x' ['^' int] | 'D' ['^' int]
//!           | '(' expr ')' | '[' expr ',' expr ']'
//!           | 'O' '(' 'x' ['^' int] ')'
//! rational := int ['/' posint]
//! ```
//!
//! `O(x^k)` is the truncated zero series, so a trailing `+ O(x^k)` marks a
//! precision through the ordinary min-precision rule of addition; its
//! absence leaves a value exact. Expressions evaluate to a series or, once
//! `D` is involved, to an operator with exact coefficients.

use std::fmt;

use num_bigint::BigInt;
use num_traits::{ToPrimitive, Zero};

use crate::graded::GradedElement;
use crate::scalar::Scalar;
use crate::series::LaurentSeries;
use crate::weyl::WeylElement;
use crate::witt::WittElement;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ParseError {
    pub pos: usize,
    pub msg: String,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "parse error at byte {}: {}", self.pos, self.msg)
    }
}

impl std::error::Error for ParseError {}

fn err<T>(pos: usize, msg: impl Into<String>) -> Result<T, ParseError> {
    Err(ParseError { pos, msg: msg.into() })
}

#[derive(Clone, Debug, PartialEq, Eq)]
enum Tok {
    Int(BigInt),
    X,
    D,
    O,
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LPar,
    RPar,
    LBrack,
    RBrack,
    LBrace,
    RBrace,
    Comma,
    Colon,
}

fn lex(input: &str) -> Result<Vec<(usize, Tok)>, ParseError> {
    let mut out = Vec::new();
    let bytes = input.as_bytes();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i] as char;
        match c {
            ' ' | '\t' | '\n' | '\r' => i += 1,
            '0'..='9' => {
                let start = i;
                while i < bytes.len() && bytes[i].is_ascii_digit() {
                    i += 1;
                }
                let n: BigInt = input[start..i].parse().unwrap();
                out.push((start, Tok::Int(n)));
            }
            'x' => {
                out.push((i, Tok::X));
                i += 1;
            }
            'D' => {
                out.push((i, Tok::D));
                i += 1;
            }
            'O' => {
                out.push((i, Tok::O));
                i += 1;
            }
            '+' => {
                out.push((i, Tok::Plus));
                i += 1;
            }
            '-' => {
                out.push((i, Tok::Minus));
                i += 1;
            }
            '*' => {
                out.push((i, Tok::Star));
                i += 1;
            }
            '/' => {
                out.push((i, Tok::Slash));
                i += 1;
            }
            '^' => {
                out.push((i, Tok::Caret));
                i += 1;
            }
            '(' => {
                out.push((i, Tok::LPar));
                i += 1;
            }
            ')' => {
                out.push((i, Tok::RPar));
                i += 1;
            }
            '[' => {
                out.push((i, Tok::LBrack));
                i += 1;
            }
            ']' => {
                out.push((i, Tok::RBrack));
                i += 1;
            }
            '{' => {
                out.push((i, Tok::LBrace));
                i += 1;
            }
            '}' => {
                out.push((i, Tok::RBrace));
                i += 1;
            }
            ',' => {
                out.push((i, Tok::Comma));
                i += 1;
            }
            ':' => {
                out.push((i, Tok::Colon));
                i += 1;
            }
            other => return err(i, format!("unexpected character '{}'", other)),
        }
    }
    Ok(out)
}

/// An evaluated expression: a series, or an operator once `D` appears.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Value {
    Series(LaurentSeries),
    Op(WeylElement),
}

impl Value {
    pub fn into_series(self, pos: usize) -> Result<LaurentSeries, ParseError> {
        match self {
            Value::Series(s) => Ok(s),
            Value::Op(op) => {
                if op.coeffs().len() <= 1 {
                    Ok(op.coeff(0))
                } else {
                    err(pos, "expected a series, found an operator of positive order")
                }
            }
        }
    }

    pub fn into_op(self, pos: usize) -> Result<WeylElement, ParseError> {
        match self {
            Value::Op(op) => Ok(op),
            Value::Series(s) => WeylElement::from_parts(vec![s])
                .map_err(|e| ParseError { pos, msg: e.to_string() }),
        }
    }
}

struct Parser {
    toks: Vec<(usize, Tok)>,
    i: usize,
    end: usize,
}

impl Parser {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.i).map(|(_, t)| t)
    }

    fn peek2(&self) -> Option<&Tok> {
        self.toks.get(self.i + 1).map(|(_, t)| t)
    }

    fn pos(&self) -> usize {
        self.toks.get(self.i).map(|(p, _)| *p).unwrap_or(self.end)
    }

    fn bump(&mut self) -> Option<Tok> {
        let t = self.toks.get(self.i).map(|(_, t)| t.clone());
        if t.is_some() {
            self.i += 1;
        }
        t
    }

    fn eat(&mut self, t: &Tok) -> bool {
        if self.peek() == Some(t) {
            self.i += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, t: Tok, what: &str) -> Result<(), ParseError> {
        if self.eat(&t) {
            Ok(())
        } else {
            err(self.pos(), format!("expected {}", what))
        }
    }

    fn parse_signed_int(&mut self) -> Result<BigInt, ParseError> {
        let neg = self.eat(&Tok::Minus);
        match self.bump() {
            Some(Tok::Int(n)) => Ok(if neg { -n } else { n }),
            _ => err(self.pos(), "expected an integer"),
        }
    }

    fn parse_exponent(&mut self) -> Result<i64, ParseError> {
        let pos = self.pos();
        let n = self.parse_signed_int()?;
        n.to_i64().ok_or(ParseError { pos, msg: "exponent too large".into() })
    }

    fn opt_caret_exponent(&mut self, default: i64) -> Result<i64, ParseError> {
        if self.eat(&Tok::Caret) {
            self.parse_exponent()
        } else {
            Ok(default)
        }
    }

    /// rational := int ['/' posint]; the slash is folded in only when an
    /// integer follows directly, so `3/x` stays a division.
    fn parse_rational(&mut self) -> Result<Scalar, ParseError> {
        let pos = self.pos();
        let n = match self.bump() {
            Some(Tok::Int(n)) => n,
            _ => return err(pos, "expected a number"),
        };
        if self.peek() == Some(&Tok::Slash) {
            if let Some(Tok::Int(_)) = self.peek2() {
                self.bump(); // slash
                let dpos = self.pos();
                let d = match self.bump() {
                    Some(Tok::Int(d)) => d,
                    _ => unreachable!(),
                };
                if d.is_zero() {
                    return err(dpos, "zero denominator");
                }
                return Ok(Scalar::new(n, d));
            }
        }
        Ok(Scalar::from_integer(n))
    }

    fn parse_expr(&mut self) -> Result<Value, ParseError> {
        let pos = self.pos();
        let neg = self.eat(&Tok::Minus);
        let mut v = self.parse_term()?;
        if neg {
            v = v_neg(v);
        }
        loop {
            if self.eat(&Tok::Plus) {
                let rhs = self.parse_term()?;
                v = v_add(v, rhs, pos)?;
            } else if self.eat(&Tok::Minus) {
                let rhs = self.parse_term()?;
                v = v_add(v, v_neg(rhs), pos)?;
            } else {
                break;
            }
        }
        Ok(v)
    }

    fn parse_term(&mut self) -> Result<Value, ParseError> {
        let mut v = self.parse_factor()?;
        loop {
            let pos = self.pos();
            if self.eat(&Tok::Star) {
                let rhs = self.parse_factor()?;
                v = v_mul(v, rhs, pos)?;
            } else if self.eat(&Tok::Slash) {
                let rhs = self.parse_factor()?;
                v = v_div(v, rhs, pos)?;
            } else {
                break;
            }
        }
        Ok(v)
    }

    fn parse_factor(&mut self) -> Result<Value, ParseError> {
        let pos = self.pos();
        match self.peek() {
            Some(Tok::Int(_)) => {
                let r = self.parse_rational()?;
                if self.eat(&Tok::X) {
                    let e = self.opt_caret_exponent(1)?;
                    Ok(Value::Series(LaurentSeries::monomial(r, e)))
                } else {
                    Ok(Value::Series(LaurentSeries::constant(r)))
                }
            }
            Some(Tok::X) => {
                self.bump();
                let e = self.opt_caret_exponent(1)?;
                Ok(Value::Series(LaurentSeries::monomial(Scalar::from_integer(1.into()), e)))
            }
            Some(Tok::D) => {
                self.bump();
                let e = self.opt_caret_exponent(1)?;
                if e < 0 {
                    return err(pos, "negative power of D");
                }
                let mut parts = vec![LaurentSeries::zero(); e as usize];
                parts.push(LaurentSeries::one());
                Ok(Value::Op(WeylElement::from_parts(parts).unwrap()))
            }
            Some(Tok::O) => {
                self.bump();
                self.expect(Tok::LPar, "'(' after O")?;
                self.expect(Tok::X, "x inside O(...)")?;
                let e = self.opt_caret_exponent(1)?;
                self.expect(Tok::RPar, "')'")?;
                Ok(Value::Series(LaurentSeries::zero_trunc(e)))
            }
            Some(Tok::LPar) => {
                self.bump();
                let v = self.parse_expr()?;
                self.expect(Tok::RPar, "')'")?;
                Ok(v)
            }
            Some(Tok::LBrack) => {
                self.bump();
                let a = self.parse_expr()?;
                self.expect(Tok::Comma, "',' in bracket")?;
                let b = self.parse_expr()?;
                self.expect(Tok::RBrack, "']'")?;
                let a = a.into_op(pos)?;
                let b = b.into_op(pos)?;
                Ok(Value::Op(a.bracket(&b)))
            }
            _ => err(pos, "expected a factor"),
        }
    }
}

fn v_neg(v: Value) -> Value {
    match v {
        Value::Series(s) => Value::Series(s.neg()),
        Value::Op(o) => Value::Op(o.neg()),
    }
}

fn v_add(a: Value, b: Value, pos: usize) -> Result<Value, ParseError> {
    match (a, b) {
        (Value::Series(x), Value::Series(y)) => Ok(Value::Series(x.add(&y))),
        (a, b) => {
            let a = a.into_op(pos)?;
            let b = b.into_op(pos)?;
            Ok(Value::Op(a.add(&b)))
        }
    }
}

fn v_mul(a: Value, b: Value, pos: usize) -> Result<Value, ParseError> {
    match (a, b) {
        (Value::Series(x), Value::Series(y)) => Ok(Value::Series(x.mul(&y))),
        (a, b) => {
            let a = a.into_op(pos)?;
            let b = b.into_op(pos)?;
            Ok(Value::Op(a.mul(&b)))
        }
    }
}

fn v_div(a: Value, b: Value, pos: usize) -> Result<Value, ParseError> {
    let denom = b.into_series(pos)?;
    let inv = denom
        .inverse()
        .map_err(|e| ParseError { pos, msg: e.to_string() })?;
    v_mul(a, Value::Series(inv), pos)
}

fn parser_for(input: &str) -> Result<Parser, ParseError> {
    Ok(Parser { toks: lex(input)?, i: 0, end: input.len() })
}

/// Parses and evaluates a full expression.
pub fn parse_expression(input: &str) -> Result<Value, ParseError> {
    let mut p = parser_for(input)?;
    let v = p.parse_expr()?;
    if p.peek().is_some() {
        return err(p.pos(), "trailing input");
    }
    Ok(v)
}

pub fn parse_series(input: &str) -> Result<LaurentSeries, ParseError> {
    parse_expression(input)?.into_series(0)
}

pub fn parse_operator(input: &str) -> Result<WeylElement, ParseError> {
    parse_expression(input)?.into_op(0)
}

/// Parses `f` or `f*D`-shaped input as an element `f∂` is built from.
pub fn parse_witt(input: &str) -> Result<WittElement, ParseError> {
    let v = parse_expression(input)?;
    match v {
        Value::Series(s) => Ok(WittElement::new(s)),
        Value::Op(op) => WittElement::from_weyl(&op)
            .ok_or_else(|| ParseError { pos: 0, msg: "expected an order-1 operator f*D".into() }),
    }
}

/// Parses a signed rational literal.
pub fn parse_scalar(input: &str) -> Result<Scalar, ParseError> {
    let mut p = parser_for(input)?;
    let neg = p.eat(&Tok::Minus);
    let r = p.parse_rational()?;
    if p.peek().is_some() {
        return err(p.pos(), "trailing input");
    }
    Ok(if neg { -r } else { r })
}

/// Parses a graded-element literal `{g1: c1, g2: c2}`.
pub fn parse_graded(input: &str) -> Result<GradedElement, ParseError> {
    let mut p = parser_for(input)?;
    p.expect(Tok::LBrace, "'{'")?;
    let mut terms: Vec<(Scalar, Scalar)> = Vec::new();
    if !p.eat(&Tok::RBrace) {
        loop {
            let gneg = p.eat(&Tok::Minus);
            let mut g = p.parse_rational()?;
            if gneg {
                g = -g;
            }
            p.expect(Tok::Colon, "':'")?;
            let cneg = p.eat(&Tok::Minus);
            let mut c = p.parse_rational()?;
            if cneg {
                c = -c;
            }
            terms.push((g, c));
            if p.eat(&Tok::RBrace) {
                break;
            }
            p.expect(Tok::Comma, "',' or '}'")?;
        }
    }
    if p.peek().is_some() {
        return err(p.pos(), "trailing input");
    }
    Ok(GradedElement::from_terms(terms))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{int, rat};
    use crate::series::Precision;

    #[test]
    fn series_literals() {
        let s = parse_series("x^-1 + 2 + 3/2x^3").unwrap();
        assert_eq!(s.coeff(-1).unwrap(), int(1));
        assert_eq!(s.coeff(0).unwrap(), int(2));
        assert_eq!(s.coeff(3).unwrap(), rat(3, 2));
        assert!(s.is_exact());

        let t = parse_series("1 + x + O(x^2)").unwrap();
        assert_eq!(t.prec(), Precision::Trunc(2));
        assert_eq!(t, LaurentSeries::from_terms_trunc([(0, int(1)), (1, int(1))], 2));

        assert_eq!(parse_series("O(x^5)").unwrap(), LaurentSeries::zero_trunc(5));
        assert_eq!(parse_series("0").unwrap(), LaurentSeries::zero());
        assert_eq!(parse_series("-x").unwrap(), LaurentSeries::monomial(int(-1), 1));
        assert_eq!(parse_series("3/x").unwrap(), LaurentSeries::monomial(int(3), -1));
        assert_eq!(parse_series("(1-x)*(1+x)").unwrap(), parse_series("1 - x^2").unwrap());
    }

    #[test]
    fn operator_literals_and_brackets() {
        let xd = parse_operator("x*D").unwrap();
        assert_eq!(xd.coeff(1), LaurentSeries::x());
        let b = parse_operator("[x*D, x^2*D]").unwrap();
        assert_eq!(b, parse_operator("x^2*D").unwrap());
        // D does not commute past x
        let p = parse_operator("D*x").unwrap();
        assert_eq!(p, parse_operator("x*D + 1").unwrap());
        assert!(parse_operator("(1 + O(x^2))*D").is_err());
        assert!(parse_series("x*D").is_err());
        assert!(parse_expression("x + ").is_err());
        assert!(parse_expression("x $ y").is_err());
    }

    #[test]
    fn witt_literals() {
        let v = parse_witt("(x^-1 + x)*D").unwrap();
        assert_eq!(v.coeff, parse_series("x^-1 + x").unwrap());
        assert!(parse_witt("x*D^2").is_err());
    }

    #[test]
    fn graded_literals() {
        let x = parse_graded("{-1: 3, 2: 1/2}").unwrap();
        assert_eq!(x.coeff(&int(-1)), int(3));
        assert_eq!(x.coeff(&int(2)), rat(1, 2));
        assert_eq!(parse_graded("{}").unwrap(), GradedElement::zero());
        assert!(parse_graded("{1: }").is_err());
    }

    #[test]
    fn print_parse_round_trips() {
        for src in [
            "x^-1 + 2 + 3/2*x^3",
            "1 + x + O(x^2)",
            "O(x^-3)",
            "0",
            "-2*x^-2 + 1/3",
        ] {
            let v = parse_series(src).unwrap();
            assert_eq!(parse_series(&v.to_string()).unwrap(), v, "series {}", src);
        }
        for src in ["x^2*D^3 + x", "D", "0", "-1*D^2 + (x^-1 + x)*D + 5"] {
            let v = parse_operator(src).unwrap();
            assert_eq!(parse_operator(&v.to_string()).unwrap(), v, "op {}", src);
        }
        for src in ["{-1: 3, 2: 1/2}", "{}", "{0: -1}", "{1/2: 2/3}"] {
            let v = parse_graded(src).unwrap();
            assert_eq!(parse_graded(&v.to_string()).unwrap(), v, "graded {}", src);
        }
    }

    #[test]
    fn scalar_literals() {
        assert_eq!(parse_scalar("-3/4").unwrap(), rat(-3, 4));
        assert_eq!(parse_scalar("17").unwrap(), int(17));
        assert!(parse_scalar("1/0").is_err());
        assert!(parse_scalar("x").is_err());
    }
}

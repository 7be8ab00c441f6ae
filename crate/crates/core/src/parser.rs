//! Parsing and printing of Laurent polynomial expressions.
//!
//! The grammar (the contract for all textual math input):
//!
//! ```text
//! expr     := ["-"] term (("+" | "-") term)*
//! term     := factor (("*" | "/") factor)*
//! factor   := base ("^" int)?
//! base     := integer | symbol | "x" | "(" expr ")"
//! int      := ["-"] digits
//! ```
//!
//! There is no implicit multiplication. Division (and negative powers) must
//! stay inside the Laurent ring: the divisor has to be a nonzero rational, a
//! power of `x`, or a monomial in parameters declared invertible.

use std::fmt;

use num_bigint::BigInt;
use num_traits::Zero;

use crate::laurent::LaurentPolynomial;
use crate::params::{ParamRing, Symbol};
use crate::rational::Rational;

/// A textual expression together with its declared parameter symbols.
#[derive(Clone, Debug)]
pub struct ExprSource {
    pub text: String,
    pub ring: ParamRing,
}

impl ExprSource {
    pub fn new(text: impl Into<String>, ring: ParamRing) -> Self {
        ExprSource { text: text.into(), ring }
    }

    /// Declarations as `(name, invertible)` pairs.
    pub fn with_params(
        text: impl Into<String>,
        params: &[(&str, bool)],
    ) -> Result<Self, crate::params::ParamError> {
        let ring = ParamRing::new(
            params
                .iter()
                .map(|(n, inv)| {
                    if *inv {
                        Symbol::invertible(*n)
                    } else {
                        Symbol::new(*n)
                    }
                })
                .collect(),
        )?;
        Ok(ExprSource::new(text, ring))
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ParseError {
    Syntax { pos: usize, expected: String },
    UndeclaredSymbol { pos: usize, name: String },
    NonIntegerExponent { pos: usize },
    InvalidDivision { pos: usize, detail: String },
}

impl ParseError {
    pub fn position(&self) -> usize {
        match self {
            ParseError::Syntax { pos, .. }
            | ParseError::UndeclaredSymbol { pos, .. }
            | ParseError::NonIntegerExponent { pos }
            | ParseError::InvalidDivision { pos, .. } => *pos,
        }
    }
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ParseError::Syntax { pos, expected } => {
                write!(f, "syntax error at position {pos}: expected {expected}")
            }
            ParseError::UndeclaredSymbol { pos, name } => {
                write!(f, "undeclared symbol `{name}` at position {pos}")
            }
            ParseError::NonIntegerExponent { pos } => {
                write!(f, "exponent at position {pos} must be an integer literal")
            }
            ParseError::InvalidDivision { pos, detail } => {
                write!(f, "invalid division at position {pos}: {detail}")
            }
        }
    }
}

impl std::error::Error for ParseError {}

#[derive(Clone, Debug, PartialEq, Eq)]
enum Tok {
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LParen,
    RParen,
    Int(BigInt),
    Ident(String),
}

impl fmt::Display for Tok {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Tok::Plus => write!(f, "`+`"),
            Tok::Minus => write!(f, "`-`"),
            Tok::Star => write!(f, "`*`"),
            Tok::Slash => write!(f, "`/`"),
            Tok::Caret => write!(f, "`^`"),
            Tok::LParen => write!(f, "`(`"),
            Tok::RParen => write!(f, "`)`"),
            Tok::Int(n) => write!(f, "integer `{n}`"),
            Tok::Ident(s) => write!(f, "identifier `{s}`"),
        }
    }
}

fn lex(text: &str) -> Result<Vec<(usize, Tok)>, ParseError> {
    let bytes = text.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let b = bytes[i];
        match b {
            b' ' | b'\t' | b'\n' | b'\r' => i += 1,
            b'+' => { out.push((i, Tok::Plus)); i += 1 }
            b'-' => { out.push((i, Tok::Minus)); i += 1 }
            b'*' => { out.push((i, Tok::Star)); i += 1 }
            b'/' => { out.push((i, Tok::Slash)); i += 1 }
            b'^' => { out.push((i, Tok::Caret)); i += 1 }
            b'(' => { out.push((i, Tok::LParen)); i += 1 }
            b')' => { out.push((i, Tok::RParen)); i += 1 }
            b'0'..=b'9' => {
                let start = i;
                while i < bytes.len() && bytes[i].is_ascii_digit() {
                    i += 1;
                }
                let n: BigInt = text[start..i].parse().expect("digits");
                out.push((start, Tok::Int(n)));
            }
            b'a'..=b'z' | b'A'..=b'Z' | b'_' => {
                let start = i;
                while i < bytes.len()
                    && (bytes[i].is_ascii_alphanumeric() || bytes[i] == b'_')
                {
                    i += 1;
                }
                out.push((start, Tok::Ident(text[start..i].to_string())));
            }
            _ => {
                return Err(ParseError::Syntax {
                    pos: i,
                    expected: format!("a token, found `{}`", &text[i..i + 1]),
                })
            }
        }
    }
    Ok(out)
}

struct Parser<'a> {
    tokens: Vec<(usize, Tok)>,
    pos: usize,
    ring: &'a ParamRing,
    end: usize,
}

impl<'a> Parser<'a> {
    fn peek(&self) -> Option<&(usize, Tok)> {
        self.tokens.get(self.pos)
    }

    fn next_pos(&self) -> usize {
        self.peek().map_or(self.end, |(p, _)| *p)
    }

    fn bump(&mut self) -> Option<(usize, Tok)> {
        let t = self.tokens.get(self.pos).cloned();
        if t.is_some() {
            self.pos += 1;
        }
        t
    }

    fn expect(&mut self, tok: &Tok) -> Result<(), ParseError> {
        match self.bump() {
            Some((_, t)) if &t == tok => Ok(()),
            Some((p, t)) => Err(ParseError::Syntax { pos: p, expected: format!("{tok}, found {t}") }),
            None => Err(ParseError::Syntax { pos: self.end, expected: format!("{tok}, found end of input") }),
        }
    }

    fn expr(&mut self) -> Result<LaurentPolynomial, ParseError> {
        let negate = matches!(self.peek(), Some((_, Tok::Minus)));
        if negate {
            self.bump();
        }
        let mut acc = self.term()?;
        if negate {
            acc = -&acc;
        }
        loop {
            match self.peek() {
                Some((_, Tok::Plus)) => {
                    self.bump();
                    acc = &acc + &self.term()?;
                }
                Some((_, Tok::Minus)) => {
                    self.bump();
                    acc = &acc - &self.term()?;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> Result<LaurentPolynomial, ParseError> {
        let mut acc = self.factor()?;
        loop {
            match self.peek() {
                Some((_, Tok::Star)) => {
                    self.bump();
                    acc = &acc * &self.factor()?;
                }
                Some(&(p, Tok::Slash)) => {
                    self.bump();
                    let divisor = self.factor()?;
                    acc = &acc * &invert(&divisor, p)?;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn factor(&mut self) -> Result<LaurentPolynomial, ParseError> {
        let base = self.base()?;
        if matches!(self.peek(), Some((_, Tok::Caret))) {
            self.bump();
            let (epos, exp) = self.integer_exponent()?;
            return power(&base, &exp, epos);
        }
        Ok(base)
    }

    fn integer_exponent(&mut self) -> Result<(usize, BigInt), ParseError> {
        let pos = self.next_pos();
        let negate = matches!(self.peek(), Some((_, Tok::Minus)));
        if negate {
            self.bump();
        }
        match self.bump() {
            Some((p, Tok::Int(n))) => Ok((p, if negate { -n } else { n })),
            _ => Err(ParseError::NonIntegerExponent { pos }),
        }
    }

    fn base(&mut self) -> Result<LaurentPolynomial, ParseError> {
        match self.bump() {
            Some((_, Tok::Int(n))) => {
                Ok(LaurentPolynomial::constant_rational(self.ring, Rational::from_integer(n)))
            }
            Some((_, Tok::Ident(name))) if name == "x" => {
                Ok(LaurentPolynomial::x_power(self.ring, 1))
            }
            Some((p, Tok::Ident(name))) => match self.ring.index_of(&name) {
                Some(i) => Ok(LaurentPolynomial::constant(self.ring.var(i))),
                None => Err(ParseError::UndeclaredSymbol { pos: p, name }),
            },
            Some((_, Tok::LParen)) => {
                let inner = self.expr()?;
                self.expect(&Tok::RParen)?;
                Ok(inner)
            }
            Some((p, t)) => Err(ParseError::Syntax {
                pos: p,
                expected: format!("a number, symbol, `x` or `(`, found {t}"),
            }),
            None => Err(ParseError::Syntax {
                pos: self.end,
                expected: "a number, symbol, `x` or `(`, found end of input".into(),
            }),
        }
    }
}

/// Multiplicative inverse of a one-term Laurent polynomial whose coefficient
/// is invertible in the parameter ring.
fn invert(p: &LaurentPolynomial, pos: usize) -> Result<LaurentPolynomial, ParseError> {
    if p.is_zero() {
        return Err(ParseError::InvalidDivision { pos, detail: "division by zero".into() });
    }
    let (order, degree) = p.span().unwrap();
    if order != degree {
        return Err(ParseError::InvalidDivision {
            pos,
            detail: format!("divisor `{p}` is not a single term"),
        });
    }
    let c = p.coeff(order);
    let inv = p.ring().one().try_div(&c).map_err(|e| ParseError::InvalidDivision {
        pos,
        detail: e.to_string(),
    })?;
    Ok(LaurentPolynomial::monomial(inv, -order))
}

fn power(base: &LaurentPolynomial, exp: &BigInt, pos: usize) -> Result<LaurentPolynomial, ParseError> {
    let mag = u32::try_from(exp.magnitude()).map_err(|_| ParseError::Syntax {
        pos,
        expected: "a smaller exponent".into(),
    })?;
    if exp.is_zero() {
        return Ok(LaurentPolynomial::one(base.ring()));
    }
    if *exp < BigInt::zero() {
        return Ok(invert(base, pos)?.pow(mag));
    }
    Ok(base.pow(mag))
}

/// Parse an expression source into a normalized Laurent polynomial.
pub fn parse(src: &ExprSource) -> Result<LaurentPolynomial, ParseError> {
    let tokens = lex(&src.text)?;
    let end = src.text.len();
    let mut p = Parser { tokens, pos: 0, ring: &src.ring, end };
    let value = p.expr()?;
    if let Some((pos, t)) = p.peek() {
        return Err(ParseError::Syntax {
            pos: *pos,
            expected: format!("`+`, `-`, `*`, `/` or end of input, found {t}"),
        });
    }
    Ok(value)
}

/// Deterministic rendering; `parse(format(p))` reproduces `p` under the same
/// declarations.
pub fn format(p: &LaurentPolynomial) -> String {
    p.to_string()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, rat};
    use proptest::prelude::*;

    fn q(text: &str) -> Result<LaurentPolynomial, ParseError> {
        parse(&ExprSource::new(text, ParamRing::rationals()))
    }

    fn lp(ring: &ParamRing, terms: &[(i64, Rational)]) -> LaurentPolynomial {
        LaurentPolynomial::from_terms(ring, terms.iter().map(|(k, c)| (*k, ring.constant(c.clone()))))
    }

    #[test]
    fn parse_examples() {
        let r = ParamRing::rationals();
        assert_eq!(q("x^2 + 3/x").unwrap(), lp(&r, &[(2, int(1)), (-1, int(3))]));
        assert_eq!(
            q("x^2 + 5 + 2*x^-2").unwrap(),
            lp(&r, &[(2, int(1)), (0, int(5)), (-2, int(2))])
        );
        let src = ExprSource::with_params("x^2 + beta/x", &[("beta", false)]).unwrap();
        let p = parse(&src).unwrap();
        assert_eq!(p.coeff(-1), src.ring.var(0));
        assert_eq!(p.coeff_rational(2), Some(int(1)));
    }

    #[test]
    fn undeclared_symbol() {
        match q("x^2 + y") {
            Err(ParseError::UndeclaredSymbol { name, pos }) => {
                assert_eq!(name, "y");
                assert_eq!(pos, 6);
            }
            other => panic!("expected UndeclaredSymbol, got {other:?}"),
        }
    }

    #[test]
    fn non_integer_exponent() {
        assert!(matches!(q("x^(1/2)"), Err(ParseError::NonIntegerExponent { .. })));
        assert!(matches!(q("x^x"), Err(ParseError::NonIntegerExponent { .. })));
    }

    #[test]
    fn no_implicit_multiplication() {
        assert!(matches!(q("2x"), Err(ParseError::Syntax { .. })));
    }

    #[test]
    fn division_rules() {
        // by rationals and x-powers: fine
        assert_eq!(q("(x+1)/2").unwrap(), lp(&ParamRing::rationals(), &[(1, rat(1, 2)), (0, rat(1, 2))]));
        assert_eq!(q("(x^2+x)/x").unwrap(), lp(&ParamRing::rationals(), &[(1, int(1)), (0, int(1))]));
        // by sums: rejected with a position
        match q("1/(x+1)") {
            Err(ParseError::InvalidDivision { pos, .. }) => assert_eq!(pos, 1),
            other => panic!("expected InvalidDivision, got {other:?}"),
        }
        // by a non-invertible parameter: rejected
        let src = ExprSource::with_params("1/beta", &[("beta", false)]).unwrap();
        assert!(matches!(parse(&src), Err(ParseError::InvalidDivision { .. })));
        // by an invertible one: allowed
        let src = ExprSource::with_params("1/r + r^-2", &[("r", true)]).unwrap();
        let p = parse(&src).unwrap();
        assert!(!p.is_zero());
        assert!(matches!(q("1/0"), Err(ParseError::InvalidDivision { .. })));
    }

    #[test]
    fn unary_minus_and_precedence() {
        let r = ParamRing::rationals();
        assert_eq!(q("-x^2 + 1").unwrap(), lp(&r, &[(2, int(-1)), (0, int(1))]));
        // x^1/2 parses as (x^1)/2
        assert_eq!(q("x^1/2").unwrap(), lp(&r, &[(1, rat(1, 2))]));
        assert_eq!(q("(x + 1)^2").unwrap(), lp(&r, &[(2, int(1)), (1, int(2)), (0, int(1))]));
    }

    #[test]
    fn format_examples() {
        let r = ParamRing::rationals();
        assert_eq!(format(&lp(&r, &[(2, int(1)), (-1, int(3))])), "x^2 + 3*x^-1");
        assert_eq!(format(&LaurentPolynomial::zero(&r)), "0");
        assert_eq!(format(&lp(&r, &[(0, rat(-1, 2))])), "-1/2");
    }

    #[test]
    fn rejections_carry_positions() {
        for text in ["", "x +", "x ^", "(x", "x )", "1 + $"] {
            let err = q(text).unwrap_err();
            assert!(err.position() <= text.len(), "{text}: {err}");
        }
    }

    prop_compose! {
        fn arb_poly()(terms in prop::collection::vec(((-6i64..7), (-9i64..10), (1i64..5), 0usize..3), 0..7))
            -> (LaurentPolynomial, ParamRing)
        {
            let ring = ParamRing::new(vec![
                Symbol::new("beta"),
                Symbol::invertible("r1"),
            ]).unwrap();
            let mut p = LaurentPolynomial::zero(&ring);
            for (k, n, d, which) in terms {
                let coeff = match which {
                    0 => ring.constant(rat(n, d)),
                    1 => ring.var(0).scale(&rat(n, d)),
                    _ => ring.monomial_term(rat(n, d), vec![0, -1]),
                };
                p = &p + &LaurentPolynomial::monomial(coeff, k);
            }
            (p, ring)
        }
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(500))]
        #[test]
        fn round_trip((p, ring) in arb_poly()) {
            let text = format(&p);
            let back = parse(&ExprSource::new(text.clone(), ring)).unwrap();
            prop_assert_eq!(back, p, "text was {}", text);
        }
    }
}

//! Sparse Laurent polynomials in one variable `x` with `ParamElement`
//! coefficients.
//!
//! These carry everything the engine manipulates: the equation coefficient
//! `L`, candidate parts `A`, `R`, `B`, `omega`, auxiliary-equation
//! coefficients, and evaluated obstruction polynomials.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::Zero;

use crate::params::{ParamElement, ParamError, ParamRing};
use crate::rational::Rational;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LaurentPolynomial {
    ring: ParamRing,
    terms: BTreeMap<i64, ParamElement>,
}

impl LaurentPolynomial {
    pub fn zero(ring: &ParamRing) -> Self {
        LaurentPolynomial { ring: ring.clone(), terms: BTreeMap::new() }
    }

    pub fn one(ring: &ParamRing) -> Self {
        Self::constant(ring.one())
    }

    pub fn constant(c: ParamElement) -> Self {
        Self::monomial(c, 0)
    }

    pub fn constant_rational(ring: &ParamRing, c: Rational) -> Self {
        Self::monomial(ring.constant(c), 0)
    }

    /// `c * x^k`
    pub fn monomial(c: ParamElement, k: i64) -> Self {
        let ring = c.ring().clone();
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(k, c);
        }
        LaurentPolynomial { ring, terms }
    }

    /// `x^k`
    pub fn x_power(ring: &ParamRing, k: i64) -> Self {
        Self::monomial(ring.one(), k)
    }

    pub fn from_terms(ring: &ParamRing, terms: impl IntoIterator<Item = (i64, ParamElement)>) -> Self {
        let mut p = Self::zero(ring);
        for (k, c) in terms {
            p.add_term(k, c);
        }
        p
    }

    pub fn ring(&self) -> &ParamRing {
        &self.ring
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Lowest exponent with nonzero coefficient.
    pub fn order(&self) -> Option<i64> {
        self.terms.keys().next().copied()
    }

    /// Highest exponent with nonzero coefficient.
    pub fn degree(&self) -> Option<i64> {
        self.terms.keys().next_back().copied()
    }

    pub fn coeff(&self, k: i64) -> ParamElement {
        self.terms.get(&k).cloned().unwrap_or_else(|| self.ring.zero())
    }

    pub fn coeff_rational(&self, k: i64) -> Option<Rational> {
        match self.terms.get(&k) {
            None => Some(Rational::zero()),
            Some(c) => c.as_rational(),
        }
    }

    pub fn leading_coeff(&self) -> Option<&ParamElement> {
        self.terms.values().next_back()
    }

    pub fn iter(&self) -> impl DoubleEndedIterator<Item = (i64, &ParamElement)> {
        self.terms.iter().map(|(k, c)| (*k, c))
    }

    /// True iff no negative exponent occurs (includes the zero polynomial).
    pub fn is_polynomial(&self) -> bool {
        self.order().map_or(true, |o| o >= 0)
    }

    /// True iff every coefficient is a rational constant.
    pub fn is_concrete(&self) -> bool {
        self.terms.values().all(|c| c.as_rational().is_some())
    }

    fn add_term(&mut self, k: i64, c: ParamElement) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(k) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                let sum = &*o.get() + &c;
                if sum.is_zero() {
                    o.remove();
                } else {
                    *o.get_mut() = sum;
                }
            }
        }
    }

    pub fn scale(&self, c: &ParamElement) -> Self {
        let mut out = Self::zero(&self.ring);
        for (k, v) in &self.terms {
            out.add_term(*k, v * c);
        }
        out
    }

    pub fn scale_rational(&self, c: &Rational) -> Self {
        self.scale(&self.ring.constant(c.clone()))
    }

    /// Multiply by `x^k`.
    pub fn shift(&self, k: i64) -> Self {
        let terms = self.terms.iter().map(|(e, c)| (e + k, c.clone())).collect();
        LaurentPolynomial { ring: self.ring.clone(), terms }
    }

    /// Formal derivative: `c x^k -> k c x^(k-1)`.
    pub fn derive(&self) -> Self {
        let mut out = Self::zero(&self.ring);
        for (k, c) in &self.terms {
            if *k != 0 {
                out.add_term(k - 1, c.scale(&Rational::from_integer((*k).into())));
            }
        }
        out
    }

    /// Exact antiderivative with zero constant term. Fails when an `x^-1`
    /// term is present.
    pub fn antiderivative(&self) -> Result<Self, ParamError> {
        let mut out = Self::zero(&self.ring);
        for (k, c) in &self.terms {
            if *k == -1 {
                return Err(ParamError::NotDivisible(
                    "antiderivative of x^-1 is not a Laurent polynomial".into(),
                ));
            }
            out.add_term(k + 1, c.scale(&Rational::new(1.into(), (k + 1).into())));
        }
        Ok(out)
    }

    pub fn pow(&self, n: u32) -> Self {
        let mut acc = Self::one(&self.ring);
        for _ in 0..n {
            acc = &acc * self;
        }
        acc
    }

    /// `L(x) -> L(x^2)`: every exponent doubled.
    pub fn compose_x_squared(&self) -> Self {
        let terms = self.terms.iter().map(|(k, c)| (2 * k, c.clone())).collect();
        LaurentPolynomial { ring: self.ring.clone(), terms }
    }

    /// Specialize all parameters to rational values, producing a polynomial
    /// over the plain rational ring.
    pub fn specialize(&self, values: &[Rational]) -> Result<Self, ParamError> {
        let target = ParamRing::rationals();
        let mut out = Self::zero(&target);
        for (k, c) in &self.terms {
            out.add_term(*k, target.constant(c.evaluate(values)?));
        }
        Ok(out)
    }

    /// Largest exponent range as `(order, degree)`, or `None` when zero.
    pub fn span(&self) -> Option<(i64, i64)> {
        Some((self.order()?, self.degree()?))
    }
}

impl Add for &LaurentPolynomial {
    type Output = LaurentPolynomial;
    fn add(self, rhs: &LaurentPolynomial) -> LaurentPolynomial {
        let mut out = self.clone();
        for (k, c) in &rhs.terms {
            out.add_term(*k, c.clone());
        }
        out
    }
}

impl Sub for &LaurentPolynomial {
    type Output = LaurentPolynomial;
    fn sub(self, rhs: &LaurentPolynomial) -> LaurentPolynomial {
        let mut out = self.clone();
        for (k, c) in &rhs.terms {
            out.add_term(*k, -c);
        }
        out
    }
}

impl Mul for &LaurentPolynomial {
    type Output = LaurentPolynomial;
    fn mul(self, rhs: &LaurentPolynomial) -> LaurentPolynomial {
        let mut out = LaurentPolynomial::zero(&self.ring);
        for (ka, ca) in &self.terms {
            for (kb, cb) in &rhs.terms {
                out.add_term(ka + kb, ca * cb);
            }
        }
        out
    }
}

impl Neg for &LaurentPolynomial {
    type Output = LaurentPolynomial;
    fn neg(self) -> LaurentPolynomial {
        let terms = self.terms.iter().map(|(k, c)| (*k, -c)).collect();
        LaurentPolynomial { ring: self.ring.clone(), terms }
    }
}

impl fmt::Display for LaurentPolynomial {
    /// Deterministic descending-exponent rendering that re-parses to the
    /// same polynomial under the expression grammar.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        for (i, (k, c)) in self.terms.iter().rev().enumerate() {
            let (negative, body) = render_coeff(c);
            let piece = match (*k, body.as_str()) {
                (0, _) => body,
                (1, "1") => "x".to_string(),
                (1, _) => format!("{body}*x"),
                (_, "1") => format!("x^{k}"),
                (_, _) => format!("{body}*x^{k}"),
            };
            if i == 0 {
                if negative {
                    write!(f, "-{piece}")?;
                } else {
                    write!(f, "{piece}")?;
                }
            } else if negative {
                write!(f, " - {piece}")?;
            } else {
                write!(f, " + {piece}")?;
            }
        }
        Ok(())
    }
}

/// Split a coefficient into a sign and a positive body string. Multi-term
/// coefficients are parenthesized and treated as positive.
fn render_coeff(c: &ParamElement) -> (bool, String) {
    if c.term_count() > 1 {
        return (false, format!("({c})"));
    }
    let s = c.to_string();
    match s.strip_prefix('-') {
        Some(rest) => (true, rest.to_string()),
        None => (false, s),
    }
}

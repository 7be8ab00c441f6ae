//! Multivariate parameter polynomials over the rationals.
//!
//! `ParamElement` is a sparse polynomial in the declared parameter symbols of
//! a `ParamRing`. Symbols flagged invertible may carry negative exponents,
//! which is how inverses of leading coefficients (the `r`-type symbols of
//! cover-space inputs) are modelled without a full fraction field.
//!
//! The ring with no symbols plays the role of plain `Q`; a `ParamElement`
//! there is just a rational constant ("concrete mode").

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::rational::{rational_sqrt, Rational};

/// A declared parameter symbol.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Symbol {
    pub name: String,
    pub invertible: bool,
}

impl Symbol {
    pub fn new(name: impl Into<String>) -> Self {
        Symbol { name: name.into(), invertible: false }
    }

    pub fn invertible(name: impl Into<String>) -> Self {
        Symbol { name: name.into(), invertible: true }
    }
}

#[derive(Debug, PartialEq, Eq)]
struct RingData {
    symbols: Vec<Symbol>,
}

/// Shared handle to a set of declared parameter symbols.
#[derive(Clone, Debug)]
pub struct ParamRing {
    data: Arc<RingData>,
}

/// Errors from parameter-ring construction and arithmetic.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ParamError {
    DuplicateSymbol(String),
    ReservedSymbol(String),
    /// Division that would leave the polynomial ring (divisor not an
    /// invertible monomial, or exponents of a non-invertible symbol would
    /// turn negative).
    NotDivisible(String),
    /// Evaluation hit a negative power of a parameter specialized to zero.
    ZeroToNegativePower(String),
}

impl fmt::Display for ParamError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ParamError::DuplicateSymbol(s) => write!(f, "duplicate parameter symbol `{s}`"),
            ParamError::ReservedSymbol(s) => write!(f, "`{s}` cannot be used as a parameter name"),
            ParamError::NotDivisible(s) => write!(f, "division not representable: {s}"),
            ParamError::ZeroToNegativePower(s) => {
                write!(f, "parameter `{s}` is zero but occurs with a negative exponent")
            }
        }
    }
}

impl std::error::Error for ParamError {}

impl PartialEq for ParamRing {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.data, &other.data) || self.data == other.data
    }
}
impl Eq for ParamRing {}

impl ParamRing {
    /// The ring with no parameter symbols: plain rational constants.
    pub fn rationals() -> Self {
        ParamRing { data: Arc::new(RingData { symbols: Vec::new() }) }
    }

    pub fn new(symbols: Vec<Symbol>) -> Result<Self, ParamError> {
        for (i, s) in symbols.iter().enumerate() {
            if s.name == "x" {
                return Err(ParamError::ReservedSymbol(s.name.clone()));
            }
            if symbols[..i].iter().any(|t| t.name == s.name) {
                return Err(ParamError::DuplicateSymbol(s.name.clone()));
            }
        }
        Ok(ParamRing { data: Arc::new(RingData { symbols }) })
    }

    pub fn arity(&self) -> usize {
        self.data.symbols.len()
    }

    pub fn symbols(&self) -> &[Symbol] {
        &self.data.symbols
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.data.symbols.iter().position(|s| s.name == name)
    }

    pub fn zero(&self) -> ParamElement {
        ParamElement { ring: self.clone(), terms: BTreeMap::new() }
    }

    pub fn one(&self) -> ParamElement {
        self.constant(Rational::one())
    }

    pub fn constant(&self, c: Rational) -> ParamElement {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(vec![0; self.arity()], c);
        }
        ParamElement { ring: self.clone(), terms }
    }

    pub fn var(&self, index: usize) -> ParamElement {
        self.monomial_term(Rational::one(), {
            let mut e = vec![0; self.arity()];
            e[index] = 1;
            e
        })
    }

    pub fn monomial_term(&self, coeff: Rational, exps: Vec<i64>) -> ParamElement {
        assert_eq!(exps.len(), self.arity(), "exponent vector arity mismatch");
        self.check_exponents(&exps);
        let mut terms = BTreeMap::new();
        if !coeff.is_zero() {
            terms.insert(exps, coeff);
        }
        ParamElement { ring: self.clone(), terms }
    }

    fn check_exponents(&self, exps: &[i64]) {
        for (e, s) in exps.iter().zip(self.symbols()) {
            assert!(
                *e >= 0 || s.invertible,
                "negative exponent on non-invertible symbol `{}`",
                s.name
            );
        }
    }
}

/// Sparse multivariate polynomial (Laurent in the invertible symbols).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ParamElement {
    ring: ParamRing,
    terms: BTreeMap<Vec<i64>, Rational>,
}

impl ParamElement {
    pub fn ring(&self) -> &ParamRing {
        &self.ring
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.as_rational().is_some_and(|r| r.is_one())
    }

    pub fn terms(&self) -> impl Iterator<Item = (&[i64], &Rational)> {
        self.terms.iter().map(|(e, c)| (e.as_slice(), c))
    }

    pub fn term_count(&self) -> usize {
        self.terms.len()
    }

    /// The value as a rational constant, if no symbol occurs.
    pub fn as_rational(&self) -> Option<Rational> {
        match self.terms.len() {
            0 => Some(Rational::zero()),
            1 => {
                let (e, c) = self.terms.iter().next().unwrap();
                e.iter().all(|&k| k == 0).then(|| c.clone())
            }
            _ => None,
        }
    }

    /// The single (coefficient, exponents) pair of a monomial, if it is one.
    pub fn as_monomial(&self) -> Option<(&Rational, &[i64])> {
        (self.terms.len() == 1).then(|| {
            let (e, c) = self.terms.iter().next().unwrap();
            (c, e.as_slice())
        })
    }

    fn assert_compatible(&self, other: &ParamElement) {
        assert!(self.ring == other.ring, "parameter ring mismatch");
    }

    fn insert_term(terms: &mut BTreeMap<Vec<i64>, Rational>, exps: Vec<i64>, c: Rational) {
        if c.is_zero() {
            return;
        }
        match terms.entry(exps) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                let sum = o.get() + &c;
                if sum.is_zero() {
                    o.remove();
                } else {
                    *o.get_mut() = sum;
                }
            }
        }
    }

    pub fn scale(&self, c: &Rational) -> ParamElement {
        if c.is_zero() {
            return self.ring.zero();
        }
        let terms = self.terms.iter().map(|(e, v)| (e.clone(), v * c)).collect();
        ParamElement { ring: self.ring.clone(), terms }
    }

    pub fn pow(&self, n: u32) -> ParamElement {
        let mut acc = self.ring.one();
        for _ in 0..n {
            acc = &acc * self;
        }
        acc
    }

    /// Exact division. Succeeds when `divisor` is a nonzero monomial whose
    /// inverse stays inside the ring (exponents may only go negative on
    /// invertible symbols).
    pub fn try_div(&self, divisor: &ParamElement) -> Result<ParamElement, ParamError> {
        self.assert_compatible(divisor);
        if self.is_zero() {
            return Ok(self.ring.zero());
        }
        let Some((dc, de)) = divisor.as_monomial() else {
            return Err(ParamError::NotDivisible(if divisor.is_zero() {
                "division by zero".into()
            } else {
                format!("divisor `{divisor}` is not a monomial")
            }));
        };
        let mut terms = BTreeMap::new();
        for (e, c) in &self.terms {
            let new_exps: Vec<i64> = e.iter().zip(de).map(|(a, b)| a - b).collect();
            for (k, s) in new_exps.iter().zip(self.ring.symbols()) {
                if *k < 0 && !s.invertible {
                    return Err(ParamError::NotDivisible(format!(
                        "symbol `{}` is not invertible",
                        s.name
                    )));
                }
            }
            terms.insert(new_exps, c / dc);
        }
        Ok(ParamElement { ring: self.ring.clone(), terms })
    }

    /// Square root of a monomial with even exponents and square coefficient.
    pub fn try_sqrt(&self) -> Option<ParamElement> {
        if self.is_zero() {
            return Some(self.ring.zero());
        }
        let (c, e) = self.as_monomial()?;
        let root = rational_sqrt(c)?;
        if e.iter().any(|&k| k % 2 != 0) {
            return None;
        }
        let half: Vec<i64> = e.iter().map(|&k| k / 2).collect();
        Some(self.ring.monomial_term(root, half))
    }

    /// Multiply by the smallest invertible-symbol monomial making every
    /// exponent nonnegative.
    pub fn clear_denominators(&self) -> ParamElement {
        if self.is_zero() {
            return self.clone();
        }
        let arity = self.ring.arity();
        let mut shift = vec![0i64; arity];
        for e in self.terms.keys() {
            for (s, k) in shift.iter_mut().zip(e) {
                *s = (*s).max(-k);
            }
        }
        if shift.iter().all(|&s| s == 0) {
            return self.clone();
        }
        let terms = self
            .terms
            .iter()
            .map(|(e, c)| (e.iter().zip(&shift).map(|(k, s)| k + s).collect(), c.clone()))
            .collect();
        ParamElement { ring: self.ring.clone(), terms }
    }

    /// Canonical representative up to a nonzero rational factor: denominators
    /// cleared, integer coefficients made coprime, leading coefficient (in
    /// the monomial order) positive.
    pub fn normalized_primitive(&self) -> ParamElement {
        if self.is_zero() {
            return self.clone();
        }
        let p = self.clear_denominators();
        let mut den_lcm = BigInt::one();
        for c in p.terms.values() {
            den_lcm = den_lcm.lcm(c.denom());
        }
        let mut num_gcd = BigInt::zero();
        for c in p.terms.values() {
            num_gcd = num_gcd.gcd(&(c.numer() * &den_lcm / c.denom()));
        }
        let mut factor = Rational::new(den_lcm, num_gcd);
        if p.terms.iter().next_back().unwrap().1.is_negative() {
            factor = -factor;
        }
        p.scale(&factor)
    }

    /// Specialize all parameters to rational values.
    pub fn evaluate(&self, values: &[Rational]) -> Result<Rational, ParamError> {
        assert_eq!(values.len(), self.ring.arity(), "value vector arity mismatch");
        let mut acc = Rational::zero();
        for (e, c) in &self.terms {
            let mut term = c.clone();
            for ((k, v), s) in e.iter().zip(values).zip(self.ring.symbols()) {
                if *k == 0 {
                    continue;
                }
                if v.is_zero() {
                    if *k < 0 {
                        return Err(ParamError::ZeroToNegativePower(s.name.clone()));
                    }
                    term = Rational::zero();
                    break;
                }
                let p = pow_rational(v, *k);
                term *= p;
            }
            acc += term;
        }
        Ok(acc)
    }

    /// Replace symbol `index` by `replacement` (which must not need negative
    /// powers: every exponent of that symbol must be nonnegative).
    pub fn substitute(&self, index: usize, replacement: &ParamElement) -> Result<ParamElement, ParamError> {
        self.assert_compatible(replacement);
        let mut acc = self.ring.zero();
        for (e, c) in &self.terms {
            let k = e[index];
            if k < 0 {
                return Err(ParamError::NotDivisible(format!(
                    "cannot substitute into negative power of `{}`",
                    self.ring.symbols()[index].name
                )));
            }
            let mut base = e.clone();
            base[index] = 0;
            let mono = self.ring.monomial_term(c.clone(), base);
            acc = &acc + &(&mono * &replacement.pow(k as u32));
        }
        Ok(acc)
    }
}

fn pow_rational(v: &Rational, k: i64) -> Rational {
    let e: i32 = k.unsigned_abs().try_into().expect("exponent magnitude fits i32");
    let p = v.pow(e);
    if k < 0 {
        p.recip()
    } else {
        p
    }
}

impl Add for &ParamElement {
    type Output = ParamElement;
    fn add(self, rhs: &ParamElement) -> ParamElement {
        self.assert_compatible(rhs);
        let mut terms = self.terms.clone();
        for (e, c) in &rhs.terms {
            ParamElement::insert_term(&mut terms, e.clone(), c.clone());
        }
        ParamElement { ring: self.ring.clone(), terms }
    }
}

impl Sub for &ParamElement {
    type Output = ParamElement;
    fn sub(self, rhs: &ParamElement) -> ParamElement {
        self.assert_compatible(rhs);
        let mut terms = self.terms.clone();
        for (e, c) in &rhs.terms {
            ParamElement::insert_term(&mut terms, e.clone(), -c.clone());
        }
        ParamElement { ring: self.ring.clone(), terms }
    }
}

impl Mul for &ParamElement {
    type Output = ParamElement;
    fn mul(self, rhs: &ParamElement) -> ParamElement {
        self.assert_compatible(rhs);
        let mut terms = BTreeMap::new();
        for (ea, ca) in &self.terms {
            for (eb, cb) in &rhs.terms {
                let exps: Vec<i64> = ea.iter().zip(eb).map(|(a, b)| a + b).collect();
                ParamElement::insert_term(&mut terms, exps, ca * cb);
            }
        }
        ParamElement { ring: self.ring.clone(), terms }
    }
}

impl Neg for &ParamElement {
    type Output = ParamElement;
    fn neg(self) -> ParamElement {
        let terms = self.terms.iter().map(|(e, c)| (e.clone(), -c.clone())).collect();
        ParamElement { ring: self.ring.clone(), terms }
    }
}

fn monomial_to_string(symbols: &[Symbol], coeff: &Rational, exps: &[i64]) -> String {
    let mut factors: Vec<String> = Vec::new();
    let c = coeff.abs();
    let has_vars = exps.iter().any(|&k| k != 0);
    if !c.is_one() || !has_vars {
        factors.push(c.to_string());
    }
    for (s, &k) in symbols.iter().zip(exps) {
        match k {
            0 => {}
            1 => factors.push(s.name.clone()),
            _ => factors.push(format!("{}^{}", s.name, k)),
        }
    }
    factors.join("*")
}

impl fmt::Display for ParamElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        // highest monomial first
        for (i, (e, c)) in self.terms.iter().rev().enumerate() {
            let body = monomial_to_string(self.ring.symbols(), c, e);
            if i == 0 {
                if c.is_negative() {
                    write!(f, "-{body}")?;
                } else {
                    write!(f, "{body}")?;
                }
            } else if c.is_negative() {
                write!(f, " - {body}")?;
            } else {
                write!(f, " + {body}")?;
            }
        }
        Ok(())
    }
}

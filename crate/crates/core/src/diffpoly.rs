//! The ring of differential polynomials in two indeterminates.
//!
//! Elements are polynomials over `Q` in the formal derivatives
//! `alpha, alpha', alpha'', ...` and `beta, beta', ...` together with the
//! derivation that shifts each indeterminate one order up and obeys the
//! Leibniz rule. The universal obstruction polynomials live here.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Signed, Zero};

use crate::laurent::LaurentPolynomial;
use crate::rational::Rational;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum IndetKind {
    Alpha,
    Beta,
}

/// One formal indeterminate `alpha^(order)` or `beta^(order)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct Indet {
    pub kind: IndetKind,
    pub order: u32,
}

impl Indet {
    pub fn alpha(order: u32) -> Self {
        Indet { kind: IndetKind::Alpha, order }
    }

    pub fn beta(order: u32) -> Self {
        Indet { kind: IndetKind::Beta, order }
    }
}

impl fmt::Display for Indet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let name = match self.kind {
            IndetKind::Alpha => "alpha",
            IndetKind::Beta => "beta",
        };
        match self.order {
            0 => write!(f, "{name}"),
            1 => write!(f, "{name}'"),
            2 => write!(f, "{name}''"),
            3 => write!(f, "{name}'''"),
            n => write!(f, "{name}^({n})"),
        }
    }
}

/// A monomial: sorted (indeterminate, power) pairs with positive powers.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Default)]
pub struct DiffMonomial(Vec<(Indet, u32)>);

impl DiffMonomial {
    pub fn one() -> Self {
        DiffMonomial(Vec::new())
    }

    pub fn var(v: Indet) -> Self {
        DiffMonomial(vec![(v, 1)])
    }

    pub fn mul(&self, other: &DiffMonomial) -> DiffMonomial {
        let mut out = self.0.clone();
        for &(v, p) in &other.0 {
            match out.binary_search_by(|(w, _)| w.cmp(&v)) {
                Ok(i) => out[i].1 += p,
                Err(i) => out.insert(i, (v, p)),
            }
        }
        DiffMonomial(out)
    }

    pub fn factors(&self) -> &[(Indet, u32)] {
        &self.0
    }
}

impl fmt::Display for DiffMonomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return write!(f, "1");
        }
        let parts: Vec<String> = self
            .0
            .iter()
            .map(|(v, p)| if *p == 1 { v.to_string() } else { format!("{v}^{p}") })
            .collect();
        write!(f, "{}", parts.join("*"))
    }
}

/// Sparse differential polynomial over `Q`.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct DifferentialPolynomial {
    terms: BTreeMap<DiffMonomial, Rational>,
}

impl DifferentialPolynomial {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn constant(c: Rational) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(DiffMonomial::one(), c);
        }
        DifferentialPolynomial { terms }
    }

    pub fn one() -> Self {
        Self::constant(Rational::one())
    }

    pub fn var(v: Indet) -> Self {
        Self::term(Rational::one(), DiffMonomial::var(v))
    }

    pub fn term(c: Rational, m: DiffMonomial) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(m, c);
        }
        DifferentialPolynomial { terms }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn term_count(&self) -> usize {
        self.terms.len()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&DiffMonomial, &Rational)> {
        self.terms.iter()
    }

    fn insert(terms: &mut BTreeMap<DiffMonomial, Rational>, m: DiffMonomial, c: Rational) {
        if c.is_zero() {
            return;
        }
        match terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                let s = o.get() + &c;
                if s.is_zero() {
                    o.remove();
                } else {
                    *o.get_mut() = s;
                }
            }
        }
    }

    /// Formal derivation: index shift on indeterminates plus Leibniz rule.
    pub fn derive(&self) -> Self {
        let mut out = BTreeMap::new();
        for (m, c) in &self.terms {
            for (i, &(v, p)) in m.factors().iter().enumerate() {
                // d(v^p) = p v^(p-1) v'
                let mut fs: Vec<(Indet, u32)> = m.factors().to_vec();
                if p == 1 {
                    fs.remove(i);
                } else {
                    fs[i].1 -= 1;
                }
                let reduced = DiffMonomial(fs);
                let shifted = DiffMonomial::var(Indet { kind: v.kind, order: v.order + 1 });
                Self::insert(
                    &mut out,
                    reduced.mul(&shifted),
                    c * Rational::from_integer(p.into()),
                );
            }
        }
        DifferentialPolynomial { terms: out }
    }

    /// Substitute `alpha^(i) -> f^(i)`, `beta^(i) -> g^(i)` and expand in the
    /// Laurent ring. This is a differential ring homomorphism.
    pub fn evaluate(&self, f: &LaurentPolynomial, g: &LaurentPolynomial) -> LaurentPolynomial {
        let ring = f.ring().clone();
        let mut df = vec![f.clone()];
        let mut dg = vec![g.clone()];
        let need = |kind: IndetKind, order: u32, df: &mut Vec<LaurentPolynomial>, dg: &mut Vec<LaurentPolynomial>| {
            let v = match kind {
                IndetKind::Alpha => df,
                IndetKind::Beta => dg,
            };
            while v.len() <= order as usize {
                v.push(v.last().unwrap().derive());
            }
            v[order as usize].clone()
        };
        let mut acc = LaurentPolynomial::zero(&ring);
        for (m, c) in &self.terms {
            let mut t = LaurentPolynomial::constant_rational(&ring, c.clone());
            for &(v, p) in m.factors() {
                let base = need(v.kind, v.order, &mut df, &mut dg);
                t = &t * &base.pow(p);
            }
            acc = &acc + &t;
        }
        acc
    }
}

impl Add for &DifferentialPolynomial {
    type Output = DifferentialPolynomial;
    fn add(self, rhs: &DifferentialPolynomial) -> DifferentialPolynomial {
        let mut terms = self.terms.clone();
        for (m, c) in &rhs.terms {
            DifferentialPolynomial::insert(&mut terms, m.clone(), c.clone());
        }
        DifferentialPolynomial { terms }
    }
}

impl Sub for &DifferentialPolynomial {
    type Output = DifferentialPolynomial;
    fn sub(self, rhs: &DifferentialPolynomial) -> DifferentialPolynomial {
        let mut terms = self.terms.clone();
        for (m, c) in &rhs.terms {
            DifferentialPolynomial::insert(&mut terms, m.clone(), -c.clone());
        }
        DifferentialPolynomial { terms }
    }
}

impl Mul for &DifferentialPolynomial {
    type Output = DifferentialPolynomial;
    fn mul(self, rhs: &DifferentialPolynomial) -> DifferentialPolynomial {
        let mut terms = BTreeMap::new();
        for (ma, ca) in &self.terms {
            for (mb, cb) in &rhs.terms {
                DifferentialPolynomial::insert(&mut terms, ma.mul(mb), ca * cb);
            }
        }
        DifferentialPolynomial { terms }
    }
}

impl Neg for &DifferentialPolynomial {
    type Output = DifferentialPolynomial;
    fn neg(self) -> DifferentialPolynomial {
        let terms = self.terms.iter().map(|(m, c)| (m.clone(), -c.clone())).collect();
        DifferentialPolynomial { terms }
    }
}

impl fmt::Display for DifferentialPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        for (i, (m, c)) in self.terms.iter().enumerate() {
            let mag = c.abs();
            let body = if m.factors().is_empty() {
                mag.to_string()
            } else if mag.is_one() {
                m.to_string()
            } else {
                format!("{mag}*{m}")
            };
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

#[cfg(test)]
mod tests {
    use super::*;
    use crate::params::ParamRing;
    use crate::rational::{int, rat};
    use proptest::prelude::*;

    fn a(o: u32) -> DifferentialPolynomial {
        DifferentialPolynomial::var(Indet::alpha(o))
    }

    fn b(o: u32) -> DifferentialPolynomial {
        DifferentialPolynomial::var(Indet::beta(o))
    }

    #[test]
    fn derivation_basics() {
        assert_eq!(a(0).derive(), a(1));
        // Leibniz on a product
        let p = &a(0) * &b(0);
        assert_eq!(p.derive(), &(&a(1) * &b(0)) + &(&a(0) * &b(1)));
        assert!(DifferentialPolynomial::constant(int(5)).derive().is_zero());
    }

    #[test]
    fn derivation_powers() {
        // d(beta^2) = 2 beta beta'
        let p = &b(0) * &b(0);
        let expected = &DifferentialPolynomial::constant(int(2)) * &(&b(0) * &b(1));
        assert_eq!(p.derive(), expected);
    }

    #[test]
    fn evaluation_of_delta1_shape() {
        // alpha*beta' - alpha'*beta - beta^2 at (f, g) equals f g' - f' g - g^2
        let d1 = &(&(&a(0) * &b(1)) - &(&a(1) * &b(0))) - &(&b(0) * &b(0));
        let ring = ParamRing::rationals();
        let f = LaurentPolynomial::from_terms(
            &ring,
            [(2, ring.constant(int(1))), (-1, ring.constant(rat(1, 2)))],
        );
        let g = LaurentPolynomial::from_terms(
            &ring,
            [(1, ring.constant(int(3))), (0, ring.constant(int(-1)))],
        );
        let direct = &(&(&f * &g.derive()) - &(&f.derive() * &g)) - &(&g * &g);
        assert_eq!(d1.evaluate(&f, &g), direct);
    }

    #[test]
    fn beta_monomials_die_at_g_zero() {
        let p = &(&a(0) * &b(2)) + &(&b(0) * &b(1));
        let ring = ParamRing::rationals();
        let f = LaurentPolynomial::x_power(&ring, 2);
        let g = LaurentPolynomial::zero(&ring);
        assert!(p.evaluate(&f, &g).is_zero());
    }

    #[test]
    fn display_matches_expected_rendering() {
        let d1 = &(&(&a(0) * &b(1)) - &(&a(1) * &b(0))) - &(&b(0) * &b(0));
        assert_eq!(d1.to_string(), "alpha*beta' - alpha'*beta - beta^2");
        assert_eq!((&DifferentialPolynomial::zero() - &b(0)).to_string(), "-beta");
    }

    prop_compose! {
        fn arb_dp()(terms in prop::collection::vec(
            (prop::collection::vec((0u32..3, 0u32..3, 1u32..3), 0..3), -3i64..4),
            0..4,
        )) -> DifferentialPolynomial {
            let mut acc = DifferentialPolynomial::zero();
            for (factors, c) in terms {
                let mut m = DiffMonomial::one();
                for (kind, order, pow) in factors {
                    let v = if kind % 2 == 0 { Indet::alpha(order) } else { Indet::beta(order) };
                    for _ in 0..pow {
                        m = m.mul(&DiffMonomial::var(v));
                    }
                }
                acc = &acc + &DifferentialPolynomial::term(int(c), m);
            }
            acc
        }
    }

    prop_compose! {
        fn arb_lp()(terms in prop::collection::vec(((-2i64..3), (-3i64..4), (1i64..3)), 0..4))
            -> LaurentPolynomial
        {
            let r = ParamRing::rationals();
            LaurentPolynomial::from_terms(&r, terms.into_iter().map(|(k, n, d)| (k, r.constant(rat(n, d)))))
        }
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(128))]
        #[test]
        fn evaluation_commutes_with_derivation(p in arb_dp(), f in arb_lp(), g in arb_lp()) {
            let lhs = p.derive().evaluate(&f, &g);
            let rhs = p.evaluate(&f, &g).derive();
            prop_assert_eq!(lhs, rhs);
        }
    }
}

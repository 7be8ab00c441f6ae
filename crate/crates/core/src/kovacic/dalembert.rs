//! The substitution `x = w^2`, `y = sqrt(w) * ytilde` for pole-order-2
//! equations.
//!
//! It sends `y'' = L(x) y` with `ord(L) = -2` to
//! `ytilde'' = (3/(4 w^2) + 4 w^2 L(w^2)) ytilde`, an equation of type
//! `(2, 2m+2)` with leading coefficient 4. Solutions pull back via
//! `y(x) = x^(1/4) * ytilde(sqrt(x))`.

use std::fmt;

use crate::laurent::LaurentPolynomial;
use crate::rational::Rational;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WrongPoleOrder {
    pub found: Option<i64>,
}

impl fmt::Display for WrongPoleOrder {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.found {
            Some(o) => write!(f, "transform needs a pole of order exactly 2, got order {o}"),
            None => write!(f, "transform needs a pole of order exactly 2, got the zero polynomial"),
        }
    }
}

impl std::error::Error for WrongPoleOrder {}

/// Transform a pole-order-2 coefficient into the cover variable `w`.
pub fn dalembert(l: &LaurentPolynomial) -> Result<LaurentPolynomial, WrongPoleOrder> {
    if l.order() != Some(-2) {
        return Err(WrongPoleOrder { found: l.order() });
    }
    let ring = l.ring();
    // 4 w^2 L(w^2) + 3/4 w^-2
    let scaled = l
        .compose_x_squared()
        .shift(2)
        .scale_rational(&Rational::from_integer(4.into()));
    Ok(&scaled + &LaurentPolynomial::constant_rational(ring, Rational::new(3.into(), 4.into())).shift(-2))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::params::ParamRing;
    use crate::parser::{parse, ExprSource};
    use crate::rational::{int, rat};

    fn q(text: &str) -> LaurentPolynomial {
        parse(&ExprSource::new(text, ParamRing::rationals())).unwrap()
    }

    #[test]
    fn transform_examples() {
        assert_eq!(dalembert(&q("x^-2 + x")).unwrap(), q("4*x^4 + 19/4*x^-2"));
        assert_eq!(dalembert(&q("5/16*x^-2 + x")).unwrap(), q("4*x^4 + 2*x^-2"));
        assert!(matches!(dalembert(&q("x + 1/x")), Err(WrongPoleOrder { found: Some(-1) })));
    }

    #[test]
    fn coefficient_pattern() {
        // every x^k term lands on w^(2k+2); odd slots stay empty; the w^-2
        // slot picks up the extra 3/4
        let l = q("x^2 - 3*x + 7 + 2/x - 5/x^2");
        let t = dalembert(&l).unwrap();
        assert_eq!(t.degree(), Some(6));
        assert_eq!(t.order(), Some(-2));
        assert_eq!(t.coeff_rational(6), Some(int(4)));
        assert_eq!(t.coeff_rational(4), Some(int(-12)));
        assert_eq!(t.coeff_rational(2), Some(int(28)));
        assert_eq!(t.coeff_rational(0), Some(int(8)));
        assert_eq!(t.coeff_rational(-2), Some(rat(-77, 4)));
        for k in [-1, 1, 3, 5] {
            assert!(t.coeff(k).is_zero());
        }
    }

    #[test]
    fn type_and_leading_invariants() {
        use rand::rngs::StdRng;
        use rand::{Rng, SeedableRng};
        let ring = ParamRing::rationals();
        let mut rng = StdRng::seed_from_u64(3);
        for _ in 0..30 {
            let m: i64 = rng.gen_range(1..=4);
            let mut l = LaurentPolynomial::x_power(&ring, m);
            l = &l + &LaurentPolynomial::monomial(ring.constant(int(rng.gen_range(1..5))), -2);
            for k in -1..m {
                l = &l + &LaurentPolynomial::monomial(ring.constant(int(rng.gen_range(-3..4))), k);
            }
            let t = dalembert(&l).unwrap();
            assert_eq!(t.order(), Some(-2));
            assert_eq!(t.degree(), Some(2 * m + 2));
            assert_eq!(t.coeff_rational(2 * m + 2), Some(int(4)));
            assert!(t.iter().all(|(k, _)| k % 2 == 0));
        }
    }
}

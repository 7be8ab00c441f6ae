//! Quadratic-residue decompositions at infinity and at the origin.

use std::fmt;

use crate::laurent::LaurentPolynomial;
use crate::params::ParamError;
use crate::rational::{rational_sqrt, Rational};

use super::{Classification, Decomposition, DecompositionKind, EquationInput};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum DecomposeError {
    /// Leading coefficient is not the square of a rational.
    NonSquareLeading(String),
    /// `l_{-2q}` is not a square in the parameter ring; the sheet cannot be
    /// chosen over the rationals.
    NonSquareAtZero(String),
    /// The class admits no decomposition (C4), or the degree is odd so the
    /// pole-order-2 transform must be applied first.
    WrongShape(String),
    /// Symbolic division failed (non-invertible parameter in a leading
    /// coefficient).
    Division(ParamError),
}

impl fmt::Display for DecomposeError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            DecomposeError::NonSquareLeading(s) => {
                write!(f, "leading coefficient {s} is not a rational square")
            }
            DecomposeError::NonSquareAtZero(s) => write!(
                f,
                "coefficient {s} of the deepest pole term is not a square; \
                 deciding this equation needs a field extension (or supply a cover input R;B;A)"
            ),
            DecomposeError::WrongShape(s) => write!(f, "{s}"),
            DecomposeError::Division(e) => write!(f, "{e}"),
        }
    }
}

impl std::error::Error for DecomposeError {}

impl From<ParamError> for DecomposeError {
    fn from(e: ParamError) -> Self {
        DecomposeError::Division(e)
    }
}

/// Split off the square-root part at infinity: returns the polynomial `A` of
/// degree `p` with `deg(L - A^2) <= p - 1`, together with the remainder.
///
/// Coefficients of `A` are found by matching orders `2p-1 .. p` top-down;
/// each step divides by `2c` where `c^2` is the leading coefficient of `L`.
pub fn decompose_inf(
    l: &LaurentPolynomial,
    p: i64,
) -> Result<(LaurentPolynomial, LaurentPolynomial), DecomposeError> {
    assert!(p >= 0);
    assert_eq!(l.degree(), Some(2 * p), "decompose_inf requires degree(L) = 2p");
    let lead = l.coeff(2 * p);
    let c = lead
        .as_rational()
        .and_then(|v| rational_sqrt(&v))
        .ok_or_else(|| DecomposeError::NonSquareLeading(lead.to_string()))?;
    let ring = l.ring();
    let inv_2c = (Rational::from_integer(2.into()) * &c).recip();
    let mut a = LaurentPolynomial::monomial(ring.constant(c.clone()), p);
    for k in (0..p).rev() {
        let residual = l - &a.pow(2);
        let coeff = residual.coeff(p + k).scale(&inv_2c);
        a = &a + &LaurentPolynomial::monomial(coeff, k);
    }
    let remainder = l - &a.pow(2);
    debug_assert!(remainder.degree().map_or(true, |d| d <= p - 1));
    Ok((a, remainder))
}

/// Split off the square-root part at the origin: returns `R` supported on
/// `x^-q .. x^-2` with `ord(L - R^2) >= -(q+1)`, and the remainder.
///
/// The sign convention takes the square root of `l_{-2q}` with positive
/// (leading rational) coefficient; the opposite sheet is reached through the
/// `s0` sign of a candidate.
pub fn decompose_zero(
    l: &LaurentPolynomial,
    q: i64,
) -> Result<(LaurentPolynomial, LaurentPolynomial), DecomposeError> {
    assert!(q >= 2);
    assert_eq!(l.order(), Some(-2 * q), "decompose_zero requires order(L) = -2q");
    let deep = l.coeff(-2 * q);
    let r_lead = deep
        .try_sqrt()
        .ok_or_else(|| DecomposeError::NonSquareAtZero(deep.to_string()))?;
    let two_r = r_lead.scale(&Rational::from_integer(2.into()));
    let mut r = LaurentPolynomial::monomial(r_lead, -q);
    for k in (2..q).rev() {
        let residual = l - &r.pow(2);
        let coeff = residual.coeff(-(q + k)).try_div(&two_r)?;
        r = &r + &LaurentPolynomial::monomial(coeff, -k);
    }
    let remainder = l - &r.pow(2);
    debug_assert!(remainder.order().map_or(true, |o| o >= -(q + 1)));
    Ok((r, remainder))
}

/// Full decomposition of an equation input into its case form.
///
/// Direct inputs must have even degree (odd-degree pole-order-2 inputs go
/// through the square-root-cover transform first) and must not be of class
/// C4. Cover inputs are already decomposed.
pub fn decompose(eq: &EquationInput) -> Result<Decomposition, DecomposeError> {
    match eq {
        EquationInput::Cover { sqrt_zero, residue, sqrt_inf } => {
            let p = sqrt_inf.degree().expect("validated");
            let q = -sqrt_zero.order().expect("validated");
            let c = sqrt_inf
                .leading_coeff()
                .and_then(|v| v.as_rational())
                .expect("validated: rational leading coefficient");
            let dec = Decomposition {
                kind: DecompositionKind::Case3 { sqrt_zero: sqrt_zero.clone() },
                sqrt_inf: sqrt_inf.clone(),
                residue: residue.clone(),
                p,
                q,
                c,
                l: eq.coefficient(),
            };
            debug_assert_eq!(dec.reconstruct(), dec.l);
            Ok(dec)
        }
        EquationInput::Direct { l } => {
            let r = eq.pole_order();
            let m = eq.degree();
            match eq.classification() {
                Classification::C4 => Err(DecomposeError::WrongShape(format!(
                    "type ({r},{m}) is of class C4; no decomposition exists"
                ))),
                Classification::C2 => Err(DecomposeError::WrongShape(format!(
                    "type ({r},{m}) has odd degree; apply the pole-order-2 transform first"
                ))),
                Classification::C1 | Classification::C3 => {
                    let p = m / 2;
                    let (a_poly, rem) = decompose_inf(l, p)?;
                    let c = a_poly
                        .leading_coeff()
                        .and_then(|v| v.as_rational())
                        .expect("constructed rational");
                    let dec = if r == 1 {
                        let pole1 = rem.coeff(-1);
                        let residue = &rem - &LaurentPolynomial::monomial(pole1.clone(), -1);
                        Decomposition {
                            kind: DecompositionKind::Case1 { pole1 },
                            sqrt_inf: a_poly,
                            residue,
                            p,
                            q: 0,
                            c,
                            l: l.clone(),
                        }
                    } else if r == 2 {
                        let pole2 = rem.coeff(-2);
                        let pole1 = rem.coeff(-1);
                        let residue = &(&rem
                            - &LaurentPolynomial::monomial(pole2.clone(), -2))
                            - &LaurentPolynomial::monomial(pole1.clone(), -1);
                        Decomposition {
                            kind: DecompositionKind::Case2 { pole2, pole1 },
                            sqrt_inf: a_poly,
                            residue,
                            p,
                            q: 0,
                            c,
                            l: l.clone(),
                        }
                    } else {
                        let q = r / 2;
                        let (r_poly, _) = decompose_zero(l, q)?;
                        let residue = &rem - &r_poly.pow(2);
                        debug_assert!(residue.order().map_or(true, |o| o >= -(q + 1)));
                        Decomposition {
                            kind: DecompositionKind::Case3 { sqrt_zero: r_poly },
                            sqrt_inf: a_poly,
                            residue,
                            p,
                            q,
                            c,
                            l: l.clone(),
                        }
                    };
                    debug_assert_eq!(dec.reconstruct(), dec.l);
                    Ok(dec)
                }
            }
        }
    }
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
    fn inf_examples() {
        // x^2+2x+4+2/x, p=1 -> A = x+1, remainder 3 + 2/x
        let (a, rem) = decompose_inf(&q("x^2 + 2*x + 4 + 2/x"), 1).unwrap();
        assert_eq!(a, q("x + 1"));
        assert_eq!(rem, q("3 + 2/x"));

        // x^2+5+2/x^2, p=1 -> A = x, remainder 5 + 2/x^2
        let (a, rem) = decompose_inf(&q("x^2 + 5 + 2*x^-2"), 1).unwrap();
        assert_eq!(a, q("x"));
        assert_eq!(rem, q("5 + 2*x^-2"));

        // 4x^4+2/x^2, p=2 -> A = 2x^2, remainder 2/x^2
        let (a, rem) = decompose_inf(&q("4*x^4 + 2*x^-2"), 2).unwrap();
        assert_eq!(a, q("2*x^2"));
        assert_eq!(rem, q("2*x^-2"));

        assert!(matches!(
            decompose_inf(&q("2*x^2 + 1/x"), 1),
            Err(DecomposeError::NonSquareLeading(_))
        ));
    }

    #[test]
    fn zero_examples() {
        // x^2+3+2/x+1/x^4, q=2 -> R = 1/x^2, remainder x^2+3+2/x
        let (r, rem) = decompose_zero(&q("x^2 + 3 + 2/x + x^-4"), 2).unwrap();
        assert_eq!(r, q("x^-2"));
        assert_eq!(rem, q("x^2 + 3 + 2/x"));

        // l_{-4} = 4 -> r_{-2} = 2
        let (r, _) = decompose_zero(&q("x^2 + 4*x^-4"), 2).unwrap();
        assert_eq!(r.coeff_rational(-2), Some(int(2)));

        // l_{-4} = 2 -> not a square
        assert!(matches!(
            decompose_zero(&q("x^2 + 2*x^-4"), 2),
            Err(DecomposeError::NonSquareAtZero(_))
        ));
    }

    #[test]
    fn full_decomposition_examples() {
        let eq = EquationInput::direct(q("x^2 + 2*x + 4 + 2/x")).unwrap();
        let dec = decompose(&eq).unwrap();
        assert_eq!(dec.case_number(), 1);
        assert_eq!(dec.sqrt_inf, q("x + 1"));
        assert_eq!(dec.residue, q("3"));
        match &dec.kind {
            DecompositionKind::Case1 { pole1 } => assert_eq!(pole1.as_rational(), Some(int(2))),
            _ => panic!("expected case 1"),
        }
        assert_eq!(dec.reconstruct(), dec.l);

        let eq = EquationInput::direct(q("x^2 + 5 + 2*x^-2")).unwrap();
        let dec = decompose(&eq).unwrap();
        assert_eq!(dec.case_number(), 2);
        assert_eq!(dec.sqrt_inf, q("x"));
        assert_eq!(dec.residue, q("5"));
        match &dec.kind {
            DecompositionKind::Case2 { pole2, pole1 } => {
                assert_eq!(pole2.as_rational(), Some(int(2)));
                assert_eq!(pole1.as_rational(), Some(int(0)));
            }
            _ => panic!("expected case 2"),
        }

        let eq = EquationInput::direct(q("x^2 + 3 + 2/x + x^-4")).unwrap();
        let dec = decompose(&eq).unwrap();
        assert_eq!(dec.case_number(), 3);
        assert_eq!(dec.sqrt_inf, q("x"));
        assert_eq!(dec.residue, q("3 + 2/x"));
        match &dec.kind {
            DecompositionKind::Case3 { sqrt_zero } => assert_eq!(sqrt_zero, &q("x^-2")),
            _ => panic!("expected case 3"),
        }
        assert_eq!(dec.reconstruct(), dec.l);
    }

    #[test]
    fn c4_and_odd_degree_rejected() {
        let eq = EquationInput::direct(q("x^2 + x^-3")).unwrap();
        assert!(matches!(decompose(&eq), Err(DecomposeError::WrongShape(_))));
        let eq = EquationInput::direct(q("x^3 + x^-2")).unwrap();
        assert!(matches!(decompose(&eq), Err(DecomposeError::WrongShape(_))));
    }

    #[test]
    fn symbolic_case3_with_invertible_leading() {
        // family with r_{-3} = s^3 needs s invertible to pull out lower R terms
        let src = ExprSource::with_params("x^2 + s^6*x^-6 + s*x^-5 + 1 + x^-4", &[("s", true)])
            .unwrap();
        let l = parse(&src).unwrap();
        let (r, rem) = decompose_zero(&l, 3).unwrap();
        // R = s^3/x^3 + (1/(2 s^2))/x^2
        assert_eq!(r.coeff(-3), src.ring.monomial_term(int(1), vec![3]));
        assert_eq!(r.coeff(-2), src.ring.monomial_term(rat(1, 2), vec![-2]));
        assert!(rem.order().unwrap() >= -4);
    }

    #[test]
    fn reconstruction_on_random_inputs() {
        use rand::rngs::StdRng;
        use rand::{Rng, SeedableRng};
        let mut rng = StdRng::seed_from_u64(42);
        let ring = ParamRing::rationals();
        for _ in 0..40 {
            // random A, B, a (case 1): L = a/x + B + A^2
            let p: i64 = rng.gen_range(1..=3);
            let mut a_poly = LaurentPolynomial::x_power(&ring, p);
            for k in 0..p {
                a_poly = &a_poly
                    + &LaurentPolynomial::monomial(
                        ring.constant(rat(rng.gen_range(-4..5), rng.gen_range(1..3))),
                        k,
                    );
            }
            let mut b_poly = LaurentPolynomial::zero(&ring);
            for k in 0..p {
                b_poly = &b_poly
                    + &LaurentPolynomial::monomial(ring.constant(int(rng.gen_range(-4..5))), k);
            }
            let a_res = ring.constant(int(rng.gen_range(-4..5).max(1)));
            let l = &(&a_poly.pow(2) + &b_poly) + &LaurentPolynomial::monomial(a_res, -1);
            let eq = EquationInput::direct(l.clone()).unwrap();
            let dec = decompose(&eq).unwrap();
            assert_eq!(dec.reconstruct(), l);
            assert_eq!(dec.sqrt_inf, a_poly);
        }
    }
}

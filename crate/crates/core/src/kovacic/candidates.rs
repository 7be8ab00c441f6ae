//! Candidate enumeration and auxiliary equations.
//!
//! A candidate fixes a sign pattern, the exponent `lambda` of the `x^lambda`
//! prefactor, the Laurent part `omega` of the logarithmic derivative, and the
//! degree `d` that a monic polynomial factor must have. The attached
//! auxiliary equation `P'' = f P' + g P` certifies the candidate when it has
//! a monic polynomial solution of that degree.

use std::fmt;

use crate::laurent::LaurentPolynomial;
use crate::params::ParamElement;
use crate::rational::{as_usize, Rational};

use super::{AuxiliaryEquation, Decomposition, DecompositionKind, Sign, Signs};

/// One potential Liouvillian solution shape.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Candidate {
    pub signs: Signs,
    pub d: usize,
    pub lambda: Rational,
    /// Laurent part of the log-derivative; never has an `x^-1` term.
    pub omega: LaurentPolynomial,
}

/// Why a sign pattern produces no candidate.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Inadmissibility {
    /// The degree formula evaluated to something other than a nonnegative
    /// integer.
    DegreeNotAdmissible(Rational),
    /// Admissible degree, but beyond the requested search bound.
    BeyondBound(Rational),
    /// `1 + 4b` is not the square of a rational; an integer degree would
    /// need a quadratic field extension.
    RequiresQuadraticExtension,
}

impl fmt::Display for Inadmissibility {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Inadmissibility::DegreeNotAdmissible(d) => {
                write!(f, "d = {d} is not a nonnegative integer")
            }
            Inadmissibility::BeyondBound(d) => write!(f, "d = {d} exceeds the search bound"),
            Inadmissibility::RequiresQuadraticExtension => {
                write!(f, "requires quadratic extension")
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CandidateError {
    /// Candidate arithmetic needs all parameters specialized to rationals.
    SymbolicInput(String),
}

impl fmt::Display for CandidateError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CandidateError::SymbolicInput(what) => {
                write!(f, "candidate enumeration needs concrete rational input; `{what}` is symbolic")
            }
        }
    }
}

impl std::error::Error for CandidateError {}

/// Outcome of examining one sign pattern.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SurveyEntry {
    pub signs: Signs,
    pub outcome: Result<Candidate, Inadmissibility>,
}

fn concrete(v: &ParamElement, what: &str) -> Result<Rational, CandidateError> {
    v.as_rational()
        .ok_or_else(|| CandidateError::SymbolicInput(format!("{what} = {v}")))
}

/// Examine every sign pattern of the decomposition's case and report the
/// candidate or the reason there is none. Entries come out sorted by signs.
pub fn sign_survey(dec: &Decomposition, d_max: usize) -> Result<Vec<SurveyEntry>, CandidateError> {
    let b_top = concrete(&dec.residue_boundary_inf(), "b_{p-1}")?;
    let p = Rational::from_integer(dec.p.into());
    let mut entries = Vec::new();
    let admit = |dval: Rational, signs: Signs, lambda: Rational, omega: LaurentPolynomial| {
        let outcome = match as_usize(&dval) {
            Some(d) if d <= d_max => Ok(Candidate { signs, d, lambda, omega }),
            Some(_) => Err(Inadmissibility::BeyondBound(dval)),
            None => Err(Inadmissibility::DegreeNotAdmissible(dval)),
        };
        SurveyEntry { signs, outcome }
    };
    match &dec.kind {
        DecompositionKind::Case1 { .. } => {
            for s_inf in Sign::BOTH {
                // d = (s_inf b_{p-1}/c - p - 2) / 2, lambda = 1
                let dval = (s_inf.rational() * &b_top / &dec.c - &p - Rational::from_integer(2.into()))
                    / Rational::from_integer(2.into());
                entries.push(admit(
                    dval,
                    Signs::inf_only(s_inf),
                    Rational::from_integer(1.into()),
                    s_inf.apply(&dec.sqrt_inf),
                ));
            }
        }
        DecompositionKind::Case2 { pole2, .. } => {
            let b = concrete(pole2, "b")?;
            let disc = Rational::from_integer(1.into()) + Rational::from_integer(4.into()) * &b;
            let sq = crate::rational::rational_sqrt(&disc);
            for s_inf in Sign::BOTH {
                for s0 in Sign::BOTH {
                    let signs = Signs::both(s_inf, s0);
                    match &sq {
                        None => entries.push(SurveyEntry {
                            signs,
                            outcome: Err(Inadmissibility::RequiresQuadraticExtension),
                        }),
                        Some(sq) => {
                            // lambda = (1 + s0 sqrt(1+4b)) / 2
                            // d = (s_inf b_{p-1}/c - s0 sqrt(1+4b) - p - 1) / 2
                            let half = Rational::new(1.into(), 2.into());
                            let lambda =
                                (Rational::from_integer(1.into()) + s0.rational() * sq) * &half;
                            let dval = (s_inf.rational() * &b_top / &dec.c
                                - s0.rational() * sq
                                - &p
                                - Rational::from_integer(1.into()))
                                * &half;
                            entries.push(admit(dval, signs, lambda, s_inf.apply(&dec.sqrt_inf)));
                        }
                    }
                }
            }
        }
        DecompositionKind::Case3 { sqrt_zero } => {
            let r_top = concrete(&sqrt_zero.coeff(-dec.q), "r_{-q}")?;
            let b_deep = concrete(&dec.residue.coeff(-(dec.q + 1)), "b_{-(q+1)}")?;
            let q = Rational::from_integer(dec.q.into());
            let half = Rational::new(1.into(), 2.into());
            // ratio = b_{-(q+1)} / (2 r_{-q})
            let ratio = &b_deep / (Rational::from_integer(2.into()) * &r_top);
            for s_inf in Sign::BOTH {
                for s0 in Sign::BOTH {
                    let signs = Signs::both(s_inf, s0);
                    // lambda = s0 ratio + q/2
                    // d = (s_inf b_{p-1}/c - p - q)/2 - s0 ratio
                    let lambda = s0.rational() * &ratio + &q * &half;
                    let dval =
                        (s_inf.rational() * &b_top / &dec.c - &p - &q) * &half - s0.rational() * &ratio;
                    let omega = &s_inf.apply(&dec.sqrt_inf) + &s0.apply(sqrt_zero);
                    entries.push(admit(dval, signs, lambda, omega));
                }
            }
        }
    }
    entries.sort_by(|a, b| a.signs.cmp(&b.signs));
    Ok(entries)
}

/// The admissible candidates with `d <= d_max`, sorted by `(signs, d)`.
pub fn candidates(dec: &Decomposition, d_max: usize) -> Result<Vec<Candidate>, CandidateError> {
    let mut out: Vec<Candidate> = sign_survey(dec, d_max)?
        .into_iter()
        .filter_map(|e| e.outcome.ok())
        .collect();
    out.sort_by(|a, b| (a.signs, a.d).cmp(&(b.signs, b.d)));
    Ok(out)
}

/// The auxiliary equation written from the decomposition parts (the case
/// template), with `phi = omega + lambda/x`:
///
/// * case 1: `g = -(s_inf A' - B + (2 s_inf A - a)/x)` and `lambda = 1`;
/// * case 2: `g = -(s_inf A' - B + (2 lambda s_inf A - a)/x)`;
/// * case 3: `g = -(omega' - B + 2 s_inf s0 A R + 2 lambda omega / x
///   + lambda(lambda-1)/x^2)`.
///
/// In every case `f = -2 phi`. For cases 1 and 3 this equals the generic
/// construction identically; for case 2 equality holds exactly when
/// `lambda(lambda - 1) = b`, which is how candidate lambdas are defined.
pub fn aux_template(
    dec: &Decomposition,
    s_inf: Sign,
    s0: Option<Sign>,
    lambda: &ParamElement,
) -> AuxiliaryEquation {
    let lam_lp = LaurentPolynomial::constant(lambda.clone());
    let a_signed = s_inf.apply(&dec.sqrt_inf);
    let (omega, g_inner) = match &dec.kind {
        DecompositionKind::Case1 { pole1 } => {
            let num = &a_signed.scale_rational(&Rational::from_integer(2.into()))
                - &LaurentPolynomial::constant(pole1.clone());
            let inner = &(&a_signed.derive() - &dec.residue) + &num.shift(-1);
            (a_signed.clone(), inner)
        }
        DecompositionKind::Case2 { pole1, .. } => {
            let num = &(&a_signed.scale_rational(&Rational::from_integer(2.into())) * &lam_lp)
                - &LaurentPolynomial::constant(pole1.clone());
            let inner = &(&a_signed.derive() - &dec.residue) + &num.shift(-1);
            (a_signed.clone(), inner)
        }
        DecompositionKind::Case3 { sqrt_zero } => {
            let s0 = s0.expect("case 3 requires an s0 sign");
            let r_signed = s0.apply(sqrt_zero);
            let omega = &a_signed + &r_signed;
            let cross = (&a_signed * &r_signed).scale_rational(&Rational::from_integer(2.into()));
            let lam2 = &lam_lp * &lam_lp;
            let inner = &(&(&omega.derive() - &dec.residue) + &cross)
                + &(&(&omega * &lam_lp).scale_rational(&Rational::from_integer(2.into())).shift(-1)
                    + &(&lam2 - &lam_lp).shift(-2));
            (omega, inner)
        }
    };
    let phi = &omega + &lam_lp.shift(-1);
    AuxiliaryEquation { f: phi.scale_rational(&Rational::from_integer((-2).into())), g: -&g_inner }
}

/// The generic auxiliary equation for a log-derivative part
/// `phi = omega + lambda/x`: `f = -2 phi`, `g = -(phi' + phi^2 - L)`.
pub fn aux_generic(
    l: &LaurentPolynomial,
    omega: &LaurentPolynomial,
    lambda: &ParamElement,
) -> AuxiliaryEquation {
    let phi = &omega.clone() + &LaurentPolynomial::constant(lambda.clone()).shift(-1);
    let g_inner = &(&phi.derive() + &phi.pow(2)) - l;
    AuxiliaryEquation { f: phi.scale_rational(&Rational::from_integer((-2).into())), g: -&g_inner }
}

/// Auxiliary equation of a concrete candidate, computed through both the
/// case template and the generic construction; the two must agree exactly.
pub fn aux_equation(dec: &Decomposition, cand: &Candidate) -> AuxiliaryEquation {
    let ring = dec.l.ring();
    let lambda = ring.constant(cand.lambda.clone());
    let templ = aux_template(dec, cand.signs.s_inf, cand.signs.s0, &lambda);
    let generic = aux_generic(&dec.l, &cand.omega, &lambda);
    assert_eq!(
        templ, generic,
        "template and generic auxiliary equations disagree for {}",
        cand.signs
    );
    templ
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kovacic::decompose;
    use crate::kovacic::EquationInput;
    use crate::params::ParamRing;
    use crate::parser::{parse, ExprSource};
    use crate::rational::{int, rat};

    fn q(text: &str) -> LaurentPolynomial {
        parse(&ExprSource::new(text, ParamRing::rationals())).unwrap()
    }

    fn dec_of(text: &str) -> Decomposition {
        decompose(&EquationInput::direct(q(text)).unwrap()).unwrap()
    }

    #[test]
    fn case1_candidates() {
        let dec = dec_of("x^2 + 2*x + 4 + 2/x");
        let cands = candidates(&dec, 25).unwrap();
        assert_eq!(cands.len(), 1);
        let c = &cands[0];
        assert_eq!(c.signs, Signs::inf_only(Sign::Plus));
        assert_eq!(c.d, 0);
        assert_eq!(c.lambda, int(1));
        assert_eq!(c.omega, q("x + 1"));
        // s_inf = -1 has d = -3: rejected
        let survey = sign_survey(&dec, 25).unwrap();
        let rejected = survey
            .iter()
            .find(|e| e.signs == Signs::inf_only(Sign::Minus))
            .unwrap();
        assert_eq!(
            rejected.outcome,
            Err(Inadmissibility::DegreeNotAdmissible(int(-3)))
        );
    }

    #[test]
    fn case2_candidates() {
        let dec = dec_of("x^2 + 5 + 2*x^-2");
        let cands = candidates(&dec, 25).unwrap();
        // (+,+) -> d=0, lambda=2 ; (+,-) -> d=3, lambda=-1
        assert_eq!(cands.len(), 2);
        assert_eq!(cands[0].signs, Signs::both(Sign::Plus, Sign::Plus));
        assert_eq!(cands[0].d, 0);
        assert_eq!(cands[0].lambda, int(2));
        assert_eq!(cands[0].omega, q("x"));
        assert_eq!(cands[1].signs, Signs::both(Sign::Plus, Sign::Minus));
        assert_eq!(cands[1].d, 3);
        assert_eq!(cands[1].lambda, int(-1));
    }

    #[test]
    fn case2_quadratic_extension() {
        // b = 1: 1+4b = 5 is not a rational square
        let dec = dec_of("x^2 + 5 + x^-2");
        let survey = sign_survey(&dec, 25).unwrap();
        assert_eq!(survey.len(), 4);
        for e in survey {
            assert_eq!(e.outcome, Err(Inadmissibility::RequiresQuadraticExtension));
        }
    }

    #[test]
    fn case3_candidates() {
        let dec = dec_of("x^2 + 3 + 2/x + x^-4");
        let cands = candidates(&dec, 25).unwrap();
        // b_{-3} = 0, q = 2: (+,+) and (+,-) both give d=0, lambda=1
        assert_eq!(cands.len(), 2);
        for c in &cands {
            assert_eq!(c.d, 0);
            assert_eq!(c.lambda, int(1));
        }
        assert_eq!(cands[0].omega, q("x + x^-2"));
        assert_eq!(cands[1].omega, q("x - x^-2"));
    }

    #[test]
    fn family_with_no_candidates() {
        // x^2 + beta/x at any rational beta: b_{p-1} = 0 gives d = -3/2
        let dec = dec_of("x^2 + 7/x");
        let survey = sign_survey(&dec, 25).unwrap();
        for e in survey {
            assert_eq!(
                e.outcome,
                Err(Inadmissibility::DegreeNotAdmissible(rat(-3, 2)))
            );
        }
    }

    #[test]
    fn candidate_consistency_relations() {
        // case 2: lambda == (s_inf b_{p-1}/c - p - 2d)/2
        let dec = dec_of("x^2 + 5 + 2*x^-2");
        for c in candidates(&dec, 25).unwrap() {
            let b_top = dec.residue_boundary_inf().as_rational().unwrap();
            let lhs = c.lambda.clone();
            let rhs = (c.signs.s_inf.rational() * b_top / &dec.c
                - int(dec.p)
                - int(2) * int(c.d as i64))
                / int(2);
            assert_eq!(lhs, rhs);
        }
        // case 3: lambda == (s_inf b_{p-1}/c - p)/2 - d
        let dec = dec_of("x^2 + 3 + 2/x + x^-4");
        for c in candidates(&dec, 25).unwrap() {
            let b_top = dec.residue_boundary_inf().as_rational().unwrap();
            let rhs = (c.signs.s_inf.rational() * b_top / &dec.c - int(dec.p)) / int(2)
                - int(c.d as i64);
            assert_eq!(c.lambda, rhs);
        }
    }

    #[test]
    fn omega_never_has_inverse_x_term(){
        for text in ["x^2 + 2*x + 4 + 2/x", "x^2 + 5 + 2*x^-2", "x^2 + 3 + 2/x + x^-4"] {
            let dec = dec_of(text);
            for c in candidates(&dec, 25).unwrap() {
                assert!(c.omega.coeff(-1).is_zero(), "{text}: omega has an x^-1 term");
            }
        }
    }

    #[test]
    fn aux_equation_examples() {
        // case 1, d=0: g = 0, f = -2(x+1) - 2/x
        let dec = dec_of("x^2 + 2*x + 4 + 2/x");
        let c = &candidates(&dec, 25).unwrap()[0];
        let aux = aux_equation(&dec, c);
        assert!(aux.g.is_zero());
        assert_eq!(aux.f, q("-2*x - 2 - 2/x"));

        // case 2, d=0, lambda=2: g = 0
        let dec = dec_of("x^2 + 5 + 2*x^-2");
        let c = &candidates(&dec, 25).unwrap()[0];
        let aux = aux_equation(&dec, c);
        assert!(aux.g.is_zero());

        // case 3, d=0, lambda=1, omega = x + 1/x^2: g = 0
        let dec = dec_of("x^2 + 3 + 2/x + x^-4");
        let c = &candidates(&dec, 25).unwrap()[0];
        let aux = aux_equation(&dec, c);
        assert!(aux.g.is_zero());
        assert_eq!(aux.f, q("-2*x - 2/x - 2*x^-2"));
    }

    #[test]
    fn template_generic_agreement_randomized() {
        use rand::rngs::StdRng;
        use rand::{Rng, SeedableRng};
        let mut rng = StdRng::seed_from_u64(7);
        let ring = ParamRing::rationals();
        for _ in 0..30 {
            // random case-3 cover data, then every sign pattern with its
            // candidate lambda
            let p: i64 = rng.gen_range(0..=2);
            let q: i64 = rng.gen_range(2..=3);
            let mut a_poly = LaurentPolynomial::monomial(ring.constant(int(rng.gen_range(1..4))), p);
            for k in 0..p {
                a_poly = &a_poly + &LaurentPolynomial::monomial(ring.constant(int(rng.gen_range(-3..4))), k);
            }
            let mut r_poly =
                LaurentPolynomial::monomial(ring.constant(int(rng.gen_range(1..4))), -q);
            for k in 2..q {
                r_poly = &r_poly + &LaurentPolynomial::monomial(ring.constant(int(rng.gen_range(-3..4))), -k);
            }
            let mut b_poly = LaurentPolynomial::zero(&ring);
            for k in -(q + 1)..=(p - 1) {
                b_poly = &b_poly + &LaurentPolynomial::monomial(ring.constant(int(rng.gen_range(-3..4))), k);
            }
            let eq = EquationInput::cover(r_poly, b_poly, a_poly).unwrap();
            let dec = decompose(&eq).unwrap();
            for e in sign_survey(&dec, 1000).unwrap() {
                if let Ok(c) = e.outcome {
                    // aux_equation asserts agreement internally
                    let _ = aux_equation(&dec, &c);
                }
            }
        }
    }
}

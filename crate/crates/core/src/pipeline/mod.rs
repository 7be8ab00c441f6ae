//! Top-level solvability decisions and solution assembly.
//!
//! `solve` routes an equation through its class: direct decomposition for
//! class C1, the square-root-cover transform for class C2, and both for
//! class C3. Every candidate up to the degree bound is examined with the
//! polynomial-solution oracle, and every returned solution is re-verified
//! against the exact residual identity.

mod variety;

pub use variety::{variety_equations, SpectralSystem, VarietyError};

use std::fmt;

use crate::aim::poly_solution_monic;
use crate::kovacic::{
    aux_equation, dalembert, decompose, sign_survey, Candidate, CandidateError, Classification,
    Decomposition, DecomposeError, EquationInput, Inadmissibility, Signs,
};
use crate::laurent::LaurentPolynomial;
use crate::rational::Rational;

/// Which variable a solution lives in: the original `x`, or the cover
/// variable `w = sqrt(x)` after the pole-order-2 transform.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum SolutionVariable {
    X,
    W,
}

impl fmt::Display for SolutionVariable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SolutionVariable::X => write!(f, "x"),
            SolutionVariable::W => write!(f, "w"),
        }
    }
}

/// A verified Liouvillian solution `v^lambda P(v) exp(int omega dv)` in the
/// variable `v` given by `variable`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LiouvillianSolution {
    pub variable: SolutionVariable,
    pub signs: Signs,
    pub d: usize,
    pub lambda: Rational,
    /// Monic polynomial factor of degree `d`.
    pub p: LaurentPolynomial,
    pub omega: LaurentPolynomial,
    /// Exact antiderivative of `omega` (no `x^-1` term ever occurs).
    pub antiderivative: LaurentPolynomial,
}

impl LiouvillianSolution {
    /// For cover-variable solutions, how to read them in `x`.
    pub fn pullback_note(&self) -> Option<&'static str> {
        match self.variable {
            SolutionVariable::X => None,
            SolutionVariable::W => Some("y(x) = x^(1/4) * ytilde(sqrt(x))"),
        }
    }
}

/// What happened to one examined sign pattern.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CandidateDetail {
    Solved { d: usize, lambda: Rational, omega: LaurentPolynomial, p: LaurentPolynomial },
    NoPolynomialSolution { d: usize, lambda: Rational, omega: LaurentPolynomial },
    Inadmissible(Inadmissibility),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CandidateReport {
    pub variable: SolutionVariable,
    pub signs: Signs,
    pub detail: CandidateDetail,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum VerdictStatus {
    Integrable(Vec<LiouvillianSolution>),
    NotIntegrableUpTo(usize),
    /// Class C4: the spectral set is empty.
    EmptyClass,
    /// Deciding over the rationals is impossible without a field extension.
    NeedsExtension(String),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Verdict {
    pub status: VerdictStatus,
    pub candidates_examined: Vec<CandidateReport>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SolveError {
    /// Concrete-mode operation received symbolic input.
    Symbolic(String),
    /// Shape errors that routing should have prevented.
    Internal(String),
}

impl fmt::Display for SolveError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SolveError::Symbolic(s) => write!(f, "{s}"),
            SolveError::Internal(s) => write!(f, "internal routing error: {s}"),
        }
    }
}

impl std::error::Error for SolveError {}

impl From<CandidateError> for SolveError {
    fn from(e: CandidateError) -> Self {
        SolveError::Symbolic(e.to_string())
    }
}

/// Decomposition attempt for a route: `Ok(None)` means the route is blocked
/// by a genuine field-extension obstruction.
fn try_decompose(eq: &EquationInput) -> Result<Result<Decomposition, String>, SolveError> {
    match decompose(eq) {
        Ok(dec) => Ok(Ok(dec)),
        Err(
            e @ (DecomposeError::NonSquareAtZero(_)
            | DecomposeError::NonSquareLeading(_)
            | DecomposeError::Division(_)),
        ) => Ok(Err(e.to_string())),
        Err(e @ DecomposeError::WrongShape(_)) => {
            Err(SolveError::Internal(format!("unexpected decomposition failure: {e}")))
        }
    }
}

/// Examine every candidate of a decomposition with the monic oracle.
fn run_decomposition(
    dec: &Decomposition,
    variable: SolutionVariable,
    d_max: usize,
) -> Result<(Vec<CandidateReport>, Vec<LiouvillianSolution>), SolveError> {
    let mut reports = Vec::new();
    let mut solutions = Vec::new();
    for entry in sign_survey(dec, d_max)? {
        let detail = match entry.outcome {
            Err(reason) => CandidateDetail::Inadmissible(reason),
            Ok(cand) => {
                let aux = aux_equation(dec, &cand);
                match poly_solution_monic(&aux.f, &aux.g, cand.d) {
                    None => CandidateDetail::NoPolynomialSolution {
                        d: cand.d,
                        lambda: cand.lambda.clone(),
                        omega: cand.omega.clone(),
                    },
                    Some(p) => {
                        let sol = assemble_solution(&dec.l, variable, &cand, p);
                        let detail = CandidateDetail::Solved {
                            d: cand.d,
                            lambda: cand.lambda.clone(),
                            omega: cand.omega.clone(),
                            p: sol.p.clone(),
                        };
                        solutions.push(sol);
                        detail
                    }
                }
            }
        };
        reports.push(CandidateReport { variable, signs: entry.signs, detail });
    }
    Ok((reports, solutions))
}

fn assemble_solution(
    l: &LaurentPolynomial,
    variable: SolutionVariable,
    cand: &Candidate,
    p: LaurentPolynomial,
) -> LiouvillianSolution {
    let antiderivative = cand
        .omega
        .antiderivative()
        .expect("omega never has an x^-1 term");
    let sol = LiouvillianSolution {
        variable,
        signs: cand.signs,
        d: cand.d,
        lambda: cand.lambda.clone(),
        p,
        omega: cand.omega.clone(),
        antiderivative,
    };
    assert!(
        residual_is_zero(l, &sol),
        "oracle produced a polynomial that fails the residual identity"
    );
    sol
}

/// Decide solvability of `y'' = L y` searching candidate degrees up to
/// `d_max`. The truncation is explicit in the negative verdict: the true
/// spectral set is a union over all degrees `d >= 0`.
pub fn solve(eq: &EquationInput, d_max: usize) -> Result<Verdict, SolveError> {
    let needs_extension = |reason: String| Verdict {
        status: VerdictStatus::NeedsExtension(reason),
        candidates_examined: vec![],
    };
    let mut reports = Vec::new();
    let mut solutions = Vec::new();
    match eq.classification() {
        Classification::C4 => {
            return Ok(Verdict { status: VerdictStatus::EmptyClass, candidates_examined: vec![] })
        }
        Classification::C1 => match try_decompose(eq)? {
            Err(reason) => return Ok(needs_extension(reason)),
            Ok(dec) => {
                let (r, s) = run_decomposition(&dec, SolutionVariable::X, d_max)?;
                reports = r;
                solutions = s;
            }
        },
        Classification::C2 | Classification::C3 => {
            if eq.classification() == Classification::C3 {
                match try_decompose(eq)? {
                    Err(reason) => return Ok(needs_extension(reason)),
                    Ok(dec) => {
                        let (r, s) = run_decomposition(&dec, SolutionVariable::X, d_max)?;
                        reports.extend(r);
                        solutions.extend(s);
                    }
                }
            }
            let lt = dalembert(&eq.coefficient())
                .map_err(|e| SolveError::Internal(format!("pole order changed: {e}")))?;
            let eq_w = EquationInput::direct(lt)
                .map_err(|e| SolveError::Internal(format!("transformed input invalid: {e}")))?;
            match try_decompose(&eq_w)? {
                Err(reason) => return Ok(needs_extension(reason)),
                Ok(dec) => {
                    let (r, s) = run_decomposition(&dec, SolutionVariable::W, d_max)?;
                    reports.extend(r);
                    solutions.extend(s);
                }
            }
        }
    }
    Ok(finish(reports, solutions, d_max))
}

fn finish(
    mut reports: Vec<CandidateReport>,
    mut solutions: Vec<LiouvillianSolution>,
    d_max: usize,
) -> Verdict {
    reports.sort_by(|a, b| (a.variable, a.signs).cmp(&(b.variable, b.signs)));
    solutions.sort_by(|a, b| (a.variable, a.signs, a.d).cmp(&(b.variable, b.signs, b.d)));
    let status = if solutions.is_empty() {
        VerdictStatus::NotIntegrableUpTo(d_max)
    } else {
        VerdictStatus::Integrable(solutions)
    };
    Verdict { status, candidates_examined: reports }
}

/// Exact residual of a claimed solution against a coefficient in the same
/// variable: `P'' + 2 phi P' + (phi' + phi^2 - L) P` with
/// `phi = omega + lambda/x`.
fn residual_is_zero(l: &LaurentPolynomial, sol: &LiouvillianSolution) -> bool {
    let ring = l.ring();
    let phi = &sol.omega
        + &LaurentPolynomial::constant_rational(ring, sol.lambda.clone()).shift(-1);
    let coeff = &(&phi.derive() + &phi.pow(2)) - l;
    let resid = &(&sol.p.derive().derive()
        + &(&phi.scale_rational(&Rational::from_integer(2.into())) * &sol.p.derive()))
        + &(&coeff * &sol.p);
    resid.is_zero()
}

/// Ground-truth verification of a solution against the original equation,
/// independent of the search path. For cover-variable solutions the check
/// runs against the transformed coefficient in `w`.
pub fn verify_solution(eq: &EquationInput, sol: &LiouvillianSolution) -> bool {
    let l = eq.coefficient();
    let l_eff = match sol.variable {
        SolutionVariable::X => l,
        SolutionVariable::W => match dalembert(&l) {
            Ok(lt) => lt,
            Err(_) => return false,
        },
    };
    residual_is_zero(&l_eff, sol)
}

/// For a cover-variable solution, check that the pulled-back log-derivative
/// `u(x) = d/dx log(x^(1/4) ytilde(sqrt x))` satisfies `u' + u^2 = L`
/// exactly, as a cleared polynomial identity in `w = sqrt(x)`:
///
/// with `S = (1 + 2 lambda)/(4 w^2) + omega/(2w)` and
/// `T = S_w/(2w) + S^2 - L(w^2)`, the identity is
/// `4 w^3 T P + w P'' - P' + 4 w^2 S P' = 0`.
pub fn pullback_residual_is_zero(l_x: &LaurentPolynomial, sol: &LiouvillianSolution) -> bool {
    if sol.variable != SolutionVariable::W {
        return false;
    }
    let ring = l_x.ring();
    let one_plus_2l =
        Rational::from_integer(1.into()) + Rational::from_integer(2.into()) * &sol.lambda;
    let s = &LaurentPolynomial::constant_rational(ring, one_plus_2l / Rational::from_integer(4.into()))
        .shift(-2)
        + &sol.omega.scale_rational(&Rational::new(1.into(), 2.into())).shift(-1);
    let t = &(&s.derive().shift(-1).scale_rational(&Rational::new(1.into(), 2.into())) + &s.pow(2))
        - &l_x.compose_x_squared();
    let p = &sol.p;
    let lhs = &(&(&t * p).shift(3).scale_rational(&Rational::from_integer(4.into()))
        + &p.derive().derive().shift(1))
        + &(&(&s * &p.derive()).shift(2).scale_rational(&Rational::from_integer(4.into()))
            - &p.derive());
    lhs.is_zero()
}

/// For each sign pattern of the (direct) decomposition: does the degree
/// relation hold with exactly this `d`, and does the monic oracle find a
/// polynomial of that degree? Class C2 inputs are reported through their
/// transformed problem.
pub fn stratum_membership(
    eq: &EquationInput,
    d: usize,
) -> Result<Vec<(Signs, bool)>, SolveError> {
    let (dec, _variable) = match eq.classification() {
        Classification::C4 => return Ok(vec![]),
        Classification::C2 => {
            let lt = dalembert(&eq.coefficient())
                .map_err(|e| SolveError::Internal(e.to_string()))?;
            let eq_w = EquationInput::direct(lt)
                .map_err(|e| SolveError::Internal(e.to_string()))?;
            let dec = decompose(&eq_w).map_err(|e| SolveError::Symbolic(e.to_string()))?;
            (dec, SolutionVariable::W)
        }
        _ => {
            let dec = decompose(eq).map_err(|e| SolveError::Symbolic(e.to_string()))?;
            (dec, SolutionVariable::X)
        }
    };
    let mut out = Vec::new();
    for entry in sign_survey(&dec, d)? {
        let ok = match entry.outcome {
            Ok(cand) if cand.d == d => {
                let aux = aux_equation(&dec, &cand);
                poly_solution_monic(&aux.f, &aux.g, d).is_some()
            }
            _ => false,
        };
        out.push((entry.signs, ok));
    }
    Ok(out)
}

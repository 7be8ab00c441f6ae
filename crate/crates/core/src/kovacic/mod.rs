//! Case analysis for `y'' = L(x) y`: classification of pole/degree types,
//! quadratic-residue decompositions at `0` and `infinity`, enumeration of
//! solution candidates, auxiliary equations, and the pole-order-2 transform
//! onto the square-root cover.

mod candidates;
mod dalembert;
mod decompose;

pub use candidates::{aux_equation, aux_generic, aux_template, candidates, sign_survey, Candidate,
                     CandidateError, Inadmissibility, SurveyEntry};
pub use dalembert::{dalembert, WrongPoleOrder};
pub use decompose::{decompose, decompose_inf, decompose_zero, DecomposeError};

use std::fmt;

use num_traits::Zero;

use crate::laurent::LaurentPolynomial;
use crate::params::ParamElement;
use crate::rational::{rational_sqrt, Rational};

/// A sign choice, `+1` or `-1`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    pub const BOTH: [Sign; 2] = [Sign::Plus, Sign::Minus];

    pub fn rational(self) -> Rational {
        match self {
            Sign::Plus => Rational::from_integer(1.into()),
            Sign::Minus => Rational::from_integer((-1).into()),
        }
    }

    pub fn apply(self, p: &LaurentPolynomial) -> LaurentPolynomial {
        match self {
            Sign::Plus => p.clone(),
            Sign::Minus => -p,
        }
    }

    pub fn apply_param(self, p: &ParamElement) -> ParamElement {
        match self {
            Sign::Plus => p.clone(),
            Sign::Minus => -p,
        }
    }

    pub fn flip(self) -> Sign {
        match self {
            Sign::Plus => Sign::Minus,
            Sign::Minus => Sign::Plus,
        }
    }
}

impl fmt::Display for Sign {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Sign::Plus => write!(f, "+1"),
            Sign::Minus => write!(f, "-1"),
        }
    }
}

/// The sign pattern of a candidate: `s_inf` always, `s0` only in the cases
/// that have a square-root part or indicial choice at the origin.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Signs {
    pub s_inf: Sign,
    pub s0: Option<Sign>,
}

impl Signs {
    pub fn inf_only(s_inf: Sign) -> Self {
        Signs { s_inf, s0: None }
    }

    pub fn both(s_inf: Sign, s0: Sign) -> Self {
        Signs { s_inf, s0: Some(s0) }
    }
}

impl fmt::Display for Signs {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.s0 {
            Some(s0) => write!(f, "s_inf={} s0={}", self.s_inf, s0),
            None => write!(f, "s_inf={}", self.s_inf),
        }
    }
}

/// The four classes of pole-order/degree pairs `(r, m)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Classification {
    C1,
    C2,
    C3,
    C4,
}

impl fmt::Display for Classification {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Classification::C1 => write!(f, "C1"),
            Classification::C2 => write!(f, "C2"),
            Classification::C3 => write!(f, "C3"),
            Classification::C4 => write!(f, "C4"),
        }
    }
}

/// Partition of the `(r, m)` quadrant. `C4` admits no Liouvillian solutions.
pub fn classify(r: i64, m: i64) -> Classification {
    assert!(r >= 1 && m >= 0, "classify requires r >= 1, m >= 0");
    let m_even = m % 2 == 0;
    if (r == 1 || (r >= 4 && r % 2 == 0)) && m_even {
        Classification::C1
    } else if r == 2 && !m_even {
        Classification::C2
    } else if r == 2 && m_even {
        Classification::C3
    } else {
        Classification::C4
    }
}

/// Errors raised while validating an equation input.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum InputError {
    ZeroCoefficient,
    NoPole,
    NoPolynomialPart,
    /// Direct input must have degree >= 1; constant-degree equations go
    /// through the cover form.
    ConstantLeading,
    LeadingNotSquare(String),
    CoverShape(String),
    RingMismatch,
}

impl fmt::Display for InputError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            InputError::ZeroCoefficient => write!(f, "coefficient polynomial is zero"),
            InputError::NoPole => write!(f, "coefficient has no pole at x = 0 (order must be <= -1)"),
            InputError::NoPolynomialPart => {
                write!(f, "coefficient has negative degree; no polynomial part at infinity")
            }
            InputError::ConstantLeading => {
                write!(f, "degree 0 input is only supported through cover (R;B;A) form")
            }
            InputError::LeadingNotSquare(s) => {
                write!(f, "leading coefficient {s} is not the square of a rational")
            }
            InputError::CoverShape(s) => write!(f, "invalid cover input: {s}"),
            InputError::RingMismatch => write!(f, "cover parts use different parameter rings"),
        }
    }
}

impl std::error::Error for InputError {}

/// An equation `y'' = L(x) y`, either by its coefficient directly or as a
/// point `(R, B, A)` of the two-sheet cover space with
/// `L = R^2 + B + A^2`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum EquationInput {
    Direct {
        l: LaurentPolynomial,
    },
    Cover {
        sqrt_zero: LaurentPolynomial,
        residue: LaurentPolynomial,
        sqrt_inf: LaurentPolynomial,
    },
}

impl EquationInput {
    /// Validate a direct coefficient: a pole at the origin, a polynomial
    /// part of degree >= 1, and a square-rational leading coefficient.
    pub fn direct(l: LaurentPolynomial) -> Result<Self, InputError> {
        let Some((order, degree)) = l.span() else {
            return Err(InputError::ZeroCoefficient);
        };
        if order >= 0 {
            return Err(InputError::NoPole);
        }
        if degree < 0 {
            return Err(InputError::NoPolynomialPart);
        }
        if degree == 0 {
            return Err(InputError::ConstantLeading);
        }
        let lead = l.leading_coeff().expect("nonzero");
        let ok = lead
            .as_rational()
            .and_then(|c| rational_sqrt(&c))
            .is_some();
        if !ok {
            return Err(InputError::LeadingNotSquare(lead.to_string()));
        }
        Ok(EquationInput::Direct { l })
    }

    /// Validate a cover-space triple: `R` supported on `-q..=-2` with
    /// `r_{-q} != 0` and `q >= 2`, `A` a polynomial with a nonzero rational
    /// leading coefficient, `B` supported on `-(q+1)..=(p-1)`.
    pub fn cover(
        sqrt_zero: LaurentPolynomial,
        residue: LaurentPolynomial,
        sqrt_inf: LaurentPolynomial,
    ) -> Result<Self, InputError> {
        if sqrt_zero.ring() != residue.ring() || residue.ring() != sqrt_inf.ring() {
            return Err(InputError::RingMismatch);
        }
        let Some((r_order, r_degree)) = sqrt_zero.span() else {
            return Err(InputError::CoverShape("R must be nonzero".into()));
        };
        if r_order > -2 || r_degree > -2 {
            return Err(InputError::CoverShape(format!(
                "R must be supported on x^-q..x^-2, got span {r_order}..{r_degree}"
            )));
        }
        let q = -r_order;
        let Some((a_order, p)) = sqrt_inf.span() else {
            return Err(InputError::CoverShape("A must be nonzero".into()));
        };
        if a_order < 0 {
            return Err(InputError::CoverShape("A must be a polynomial".into()));
        }
        let lead_ok = sqrt_inf
            .leading_coeff()
            .and_then(ParamElement::as_rational)
            .is_some_and(|c| !c.is_zero());
        if !lead_ok {
            return Err(InputError::CoverShape(
                "leading coefficient of A must be a nonzero rational".into(),
            ));
        }
        if let Some((b_order, b_degree)) = residue.span() {
            if b_order < -(q + 1) || b_degree > p - 1 {
                return Err(InputError::CoverShape(format!(
                    "B must be supported on x^-{}..x^{}, got span {b_order}..{b_degree}",
                    q + 1,
                    p - 1
                )));
            }
        }
        Ok(EquationInput::Cover { sqrt_zero, residue, sqrt_inf })
    }

    /// Pole order `r` at the origin.
    pub fn pole_order(&self) -> i64 {
        match self {
            EquationInput::Direct { l } => -l.order().expect("validated"),
            EquationInput::Cover { sqrt_zero, .. } => -2 * sqrt_zero.order().expect("validated"),
        }
    }

    /// Degree `m` at infinity.
    pub fn degree(&self) -> i64 {
        match self {
            EquationInput::Direct { l } => l.degree().expect("validated"),
            EquationInput::Cover { sqrt_inf, .. } => 2 * sqrt_inf.degree().expect("validated"),
        }
    }

    pub fn classification(&self) -> Classification {
        classify(self.pole_order(), self.degree())
    }

    /// The coefficient `L` (reconstructed for cover inputs).
    pub fn coefficient(&self) -> LaurentPolynomial {
        match self {
            EquationInput::Direct { l } => l.clone(),
            EquationInput::Cover { sqrt_zero, residue, sqrt_inf } => {
                &(&sqrt_zero.pow(2) + residue) + &sqrt_inf.pow(2)
            }
        }
    }
}

/// A quadratic-residue decomposition of `L`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum DecompositionKind {
    /// `L = a/x + B + A^2`
    Case1 { pole1: ParamElement },
    /// `L = b/x^2 + a/x + B + A^2`
    Case2 { pole2: ParamElement, pole1: ParamElement },
    /// `L = R^2 + B + A^2`
    Case3 { sqrt_zero: LaurentPolynomial },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Decomposition {
    pub kind: DecompositionKind,
    /// `A`: the square-root part at infinity, degree `p`, leading coeff `c`.
    pub sqrt_inf: LaurentPolynomial,
    /// `B`: the quadratic residue.
    pub residue: LaurentPolynomial,
    pub p: i64,
    /// Half pole order for case 3; 0 otherwise.
    pub q: i64,
    /// Leading coefficient of `A`; `c^2` is the leading coefficient of `L`.
    pub c: Rational,
    /// The full coefficient, kept for reconstruction and residual checks.
    pub l: LaurentPolynomial,
}

impl Decomposition {
    pub fn case_number(&self) -> u8 {
        match self.kind {
            DecompositionKind::Case1 { .. } => 1,
            DecompositionKind::Case2 { .. } => 2,
            DecompositionKind::Case3 { .. } => 3,
        }
    }

    /// `b_{p-1}`: the boundary coefficient of `B` read at `x^(p-1)`.
    pub fn residue_boundary_inf(&self) -> ParamElement {
        self.residue.coeff(self.p - 1)
    }

    /// Reassemble `L` from the parts; used by the reconstruction invariant.
    pub fn reconstruct(&self) -> LaurentPolynomial {
        let base = &self.sqrt_inf.pow(2) + &self.residue;
        match &self.kind {
            DecompositionKind::Case1 { pole1 } => {
                &base + &LaurentPolynomial::monomial(pole1.clone(), -1)
            }
            DecompositionKind::Case2 { pole2, pole1 } => {
                &(&base + &LaurentPolynomial::monomial(pole1.clone(), -1))
                    + &LaurentPolynomial::monomial(pole2.clone(), -2)
            }
            DecompositionKind::Case3 { sqrt_zero } => &base + &sqrt_zero.pow(2),
        }
    }
}

/// The auxiliary equation `P'' = f P' + g P` attached to a candidate.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AuxiliaryEquation {
    pub f: LaurentPolynomial,
    pub g: LaurentPolynomial,
}

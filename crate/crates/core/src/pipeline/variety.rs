//! Symbolic emission of spectral-variety equations for parametric families.
//!
//! For a family with declared parameter symbols, a degree `d`, and a sign
//! pattern, the emitted system consists of the arithmetic degree relation
//! (condition a, cleared of denominators) together with the coefficients of
//! the evaluated obstruction polynomial of the auxiliary equation. A
//! rational parameter point lies on the stratum exactly when every equation
//! vanishes.

use std::fmt;

use crate::aim::delta;
use crate::kovacic::{
    aux_template, decompose, DecompositionKind, DecomposeError, EquationInput, Signs,
};
use crate::params::{ParamElement, ParamError};
use crate::rational::Rational;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SpectralSystem {
    pub signs: Signs,
    pub d: usize,
    pub case: u8,
    /// The exponent of the `x^lambda` prefactor as a function of the
    /// parameters (for case 2 without `s0`: the rationally eliminated one).
    pub lambda: ParamElement,
    /// Arithmetic degree-relation equations, normalized to coprime integer
    /// coefficients with positive leading coefficient.
    pub condition_a: Vec<ParamElement>,
    /// Coefficients of the obstruction polynomial, by ascending exponent,
    /// denominators in invertible parameters cleared, normalized as above.
    pub delta_coeffs: Vec<ParamElement>,
}

impl SpectralSystem {
    pub fn equations(&self) -> impl Iterator<Item = &ParamElement> {
        self.condition_a.iter().chain(self.delta_coeffs.iter())
    }

    /// True iff every equation vanishes at the given parameter values.
    pub fn satisfied_at(&self, values: &[Rational]) -> Result<bool, ParamError> {
        use num_traits::Zero;
        for eq in self.equations() {
            if !eq.evaluate(values)?.is_zero() {
                return Ok(false);
            }
        }
        Ok(true)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum VarietyError {
    Decompose(DecomposeError),
    /// The sign pattern does not fit the case (e.g. an `s0` for case 1).
    InvalidSigns(String),
    /// `1 + 4b` has no square root in the parameter ring; per-sheet
    /// emission is impossible, the radical-free system must be used.
    RequiresExtension(String),
    /// Clearing denominators failed; the offending parameter is not
    /// declared invertible.
    NonPolynomialObstruction(String),
}

impl fmt::Display for VarietyError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            VarietyError::Decompose(e) => write!(f, "{e}"),
            VarietyError::InvalidSigns(s) => write!(f, "{s}"),
            VarietyError::RequiresExtension(s) => write!(f, "{s}"),
            VarietyError::NonPolynomialObstruction(s) => write!(f, "{s}"),
        }
    }
}

impl std::error::Error for VarietyError {}

impl From<DecomposeError> for VarietyError {
    fn from(e: DecomposeError) -> Self {
        VarietyError::Decompose(e)
    }
}

fn int_const(n: i64) -> Rational {
    Rational::from_integer(n.into())
}

/// Emit the spectral-variety system of a parametric family for degree `d`
/// and the given signs.
///
/// Sign conventions per case:
/// * case 1: only `s_inf` (pass `s0 = None`);
/// * case 2 with `s0 = None`: the radical-free system — `lambda` is
///   eliminated rationally and the consistency equation
///   `(2 lambda - 1)^2 = 1 + 4b` joins condition (a); this merges the two
///   `s0` sheets;
/// * case 2 with `s0` given: requires `1 + 4b` to be a perfect square in
///   the parameter ring, yielding per-sheet polynomial systems;
/// * case 3: both signs required.
pub fn variety_equations(
    family: &EquationInput,
    d: usize,
    signs: Signs,
) -> Result<SpectralSystem, VarietyError> {
    let dec = decompose(family)?;
    let ring = dec.l.ring().clone();
    let s_inf = signs.s_inf;
    let b_top = dec.residue_boundary_inf();
    let two = int_const(2);
    let (lambda, condition_a, aux) = match &dec.kind {
        DecompositionKind::Case1 { .. } => {
            if signs.s0.is_some() {
                return Err(VarietyError::InvalidSigns(
                    "case 1 has no s0 sign; omit it".into(),
                ));
            }
            // s_inf b_{p-1} = (2d + p + 2) c
            let rhs = &dec.c * int_const(2 * d as i64 + dec.p + 2);
            let cond = &s_inf.apply_param(&b_top) - &ring.constant(rhs);
            let lambda = ring.one();
            let aux = aux_template(&dec, s_inf, None, &lambda);
            (lambda, vec![cond], aux)
        }
        DecompositionKind::Case2 { pole2, .. } => {
            let disc = &ring.one() + &pole2.scale(&int_const(4));
            match signs.s0 {
                Some(s0) => {
                    let sq = disc.try_sqrt().ok_or_else(|| {
                        VarietyError::RequiresExtension(format!(
                            "1 + 4b = {disc} is not a square in the parameter ring; \
                             omit s0 to emit the radical-free system"
                        ))
                    })?;
                    // lambda = (1 + s0 sqrt(1+4b)) / 2
                    let lambda =
                        (&ring.one() + &s0.apply_param(&sq)).scale(&int_const(2).recip());
                    // s_inf b_{p-1} = (2d + p + 1) c + c s0 sqrt(1+4b)
                    let cond = &(&s_inf.apply_param(&b_top)
                        - &ring.constant(&dec.c * int_const(2 * d as i64 + dec.p + 1)))
                        - &s0.apply_param(&sq).scale(&dec.c);
                    let aux = aux_template(&dec, s_inf, None, &lambda);
                    (lambda, vec![cond], aux)
                }
                None => {
                    // lambda = (s_inf b_{p-1}/c - p - 2d) / 2, radical-free;
                    // append (2 lambda - 1)^2 = 1 + 4b
                    let lambda = &s_inf
                        .apply_param(&b_top)
                        .scale(&(&two * &dec.c).recip())
                        - &ring.constant(int_const(dec.p + 2 * d as i64) / &two);
                    let two_lam_m1 =
                        &lambda.scale(&two) - &ring.one();
                    let cond = &(&two_lam_m1 * &two_lam_m1) - &disc;
                    let aux = aux_template(&dec, s_inf, None, &lambda);
                    (lambda, vec![cond], aux)
                }
            }
        }
        DecompositionKind::Case3 { sqrt_zero } => {
            let Some(s0) = signs.s0 else {
                return Err(VarietyError::InvalidSigns(
                    "case 3 requires both signs (s_inf and s0)".into(),
                ));
            };
            let r_top = sqrt_zero.coeff(-dec.q);
            let b_deep = dec.residue.coeff(-(dec.q + 1));
            let ratio = b_deep.try_div(&r_top.scale(&two)).map_err(|e| {
                VarietyError::NonPolynomialObstruction(format!(
                    "cannot form b_-(q+1) / (2 r_-q): {e}"
                ))
            })?;
            // lambda = s0 b_-(q+1)/(2 r_-q) + q/2
            let lambda = &s0.apply_param(&ratio) + &ring.constant(int_const(dec.q) / &two);
            // cleared degree relation:
            // r_-q (s_inf b_{p-1} - c (p + q + 2d)) - c s0 b_-(q+1) = 0
            let cond = &(&(&r_top * &s_inf.apply_param(&b_top))
                - &r_top.scale(&(&dec.c * int_const(dec.p + dec.q + 2 * d as i64))))
                - &s0.apply_param(&b_deep).scale(&dec.c);
            let aux = aux_template(&dec, s_inf, Some(s0), &lambda);
            (lambda, vec![cond], aux)
        }
    };
    let obstruction = delta(&aux.f, &aux.g, d);
    let delta_coeffs = obstruction
        .iter()
        .map(|(_, coeff)| coeff.normalized_primitive())
        .collect();
    Ok(SpectralSystem {
        signs,
        d,
        case: dec.case_number(),
        lambda,
        condition_a: condition_a.iter().map(ParamElement::normalized_primitive).collect(),
        delta_coeffs,
    })
}

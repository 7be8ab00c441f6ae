//! Exact-arithmetic engine for the trace-free second order equation
//! `y'' = L(x) y` with a Laurent polynomial coefficient `L`.
//!
//! The crate decides whether such an equation admits Liouvillian solutions,
//! constructs them in the closed form `y = x^lambda P(x) exp(int omega)`,
//! and, for parametric families, emits the polynomial equations of the
//! spectral varieties on which solvability occurs.
//!
//! Everything is computed over the rationals extended by declared parameter
//! symbols; no floating point is used anywhere.

pub mod aim;
pub mod diffpoly;
pub mod kovacic;
pub mod laurent;
pub mod linalg;
pub mod params;
pub mod parser;
pub mod pipeline;
pub mod rational;

pub use diffpoly::DifferentialPolynomial;
pub use kovacic::{
    classify, AuxiliaryEquation, Candidate, Classification, Decomposition, EquationInput, Sign,
    Signs,
};
pub use laurent::LaurentPolynomial;
pub use params::{ParamElement, ParamRing, Symbol};
pub use parser::ExprSource;
pub use pipeline::{LiouvillianSolution, SolutionVariable, SpectralSystem, Verdict, VerdictStatus};
pub use rational::Rational;

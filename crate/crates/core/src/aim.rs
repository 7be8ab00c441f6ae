//! The asymptotic iteration method.
//!
//! For `y'' = f y' + g y` the derived equations
//! `y^(j+2) = lambda_j y' + s_j y` define sequences by
//! `lambda_{j+1} = lambda_j' + s_j + f lambda_j`, `s_{j+1} = s_j' + g lambda_j`
//! with `lambda_0 = f`, `s_0 = g`. The obstruction
//! `Delta_n = s_n lambda_{n-1} - lambda_n s_{n-1}` (and `Delta_0 = -g` by
//! convention) vanishes exactly when the equation has a polynomial solution
//! of degree at most `n`. The same recurrence run in the ring of universal
//! differential polynomials yields the `Delta_n` as polynomials in
//! `alpha, beta` and their formal derivatives.

use std::fmt;


use crate::diffpoly::{DifferentialPolynomial, Indet};
use crate::laurent::LaurentPolynomial;
use crate::linalg::{self, LinearOutcome, Matrix};
use crate::rational::Rational;

/// Default bound on the universal obstruction index; the term count grows
/// combinatorially with `n`.
pub const UNIVERSAL_CAP_DEFAULT: usize = 6;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum AimError {
    CapExceeded { requested: usize, cap: usize },
}

impl fmt::Display for AimError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            AimError::CapExceeded { requested, cap } => write!(
                f,
                "universal obstruction index {requested} exceeds the cap {cap}; \
                 raise the cap or use evaluated mode"
            ),
        }
    }
}

impl std::error::Error for AimError {}

/// The sequences `lambda_0..lambda_n`, `s_0..s_n`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AimSequences {
    pub lambdas: Vec<LaurentPolynomial>,
    pub esses: Vec<LaurentPolynomial>,
}

/// Run the recurrence in the Laurent ring. Entries stay Laurent because the
/// ring is closed under derivative and product; no division occurs.
pub fn aim_sequences(f: &LaurentPolynomial, g: &LaurentPolynomial, n: usize) -> AimSequences {
    let mut lambdas = Vec::with_capacity(n + 1);
    let mut esses = Vec::with_capacity(n + 1);
    lambdas.push(f.clone());
    esses.push(g.clone());
    for j in 0..n {
        let lam = lambdas[j].clone();
        let s = esses[j].clone();
        lambdas.push(&(&lam.derive() + &s) + &(f * &lam));
        esses.push(&s.derive() + &(g * &lam));
    }
    AimSequences { lambdas, esses }
}

/// Evaluated obstruction `Delta_n(f, g)`.
pub fn delta(f: &LaurentPolynomial, g: &LaurentPolynomial, n: usize) -> LaurentPolynomial {
    if n == 0 {
        return -g;
    }
    let seq = aim_sequences(f, g, n);
    &(&seq.esses[n] * &seq.lambdas[n - 1]) - &(&seq.lambdas[n] * &seq.esses[n - 1])
}

fn universal_sequences(n: usize) -> (Vec<DifferentialPolynomial>, Vec<DifferentialPolynomial>) {
    let alpha = DifferentialPolynomial::var(Indet::alpha(0));
    let beta = DifferentialPolynomial::var(Indet::beta(0));
    let mut lambdas = vec![alpha.clone()];
    let mut esses = vec![beta.clone()];
    for j in 0..n {
        let lam = lambdas[j].clone();
        let s = esses[j].clone();
        lambdas.push(&(&lam.derive() + &s) + &(&alpha * &lam));
        esses.push(&s.derive() + &(&beta * &lam));
    }
    (lambdas, esses)
}

/// Universal obstruction polynomial in `Q{alpha, beta}` with the default cap.
pub fn delta_universal(n: usize) -> Result<DifferentialPolynomial, AimError> {
    delta_universal_with_cap(n, UNIVERSAL_CAP_DEFAULT)
}

pub fn delta_universal_with_cap(n: usize, cap: usize) -> Result<DifferentialPolynomial, AimError> {
    if n > cap {
        return Err(AimError::CapExceeded { requested: n, cap });
    }
    if n == 0 {
        return Ok(-&DifferentialPolynomial::var(Indet::beta(0)));
    }
    let (lambdas, esses) = universal_sequences(n);
    Ok(&(&esses[n] * &lambdas[n - 1]) - &(&lambdas[n] * &esses[n - 1]))
}

/// `det((d/dx + M)^n M)` for `M = [[alpha, 1], [beta, 0]]`; cross-check
/// target for the recurrence form (equal to `Delta_n` up to sign).
pub fn delta_determinant_form(n: usize) -> DifferentialPolynomial {
    let alpha = DifferentialPolynomial::var(Indet::alpha(0));
    let beta = DifferentialPolynomial::var(Indet::beta(0));
    let one = DifferentialPolynomial::one();
    let zero = DifferentialPolynomial::zero();
    let m = [[alpha.clone(), one], [beta.clone(), zero]];
    let mut cur = m.clone();
    // (d/dx + M) mat = mat' + M * mat, applied n times
    for _ in 0..n {
        let mut next = cur.clone();
        for i in 0..2 {
            for j in 0..2 {
                let prod = &(&m[i][0] * &cur[0][j]) + &(&m[i][1] * &cur[1][j]);
                next[i][j] = &cur[i][j].derive() + &prod;
            }
        }
        cur = next;
    }
    &(&cur[0][0] * &cur[1][1]) - &(&cur[0][1] * &cur[1][0])
}

/// The operator `E(P) = P'' - f P' - g P` applied to the basis monomial
/// `x^k`.
fn basis_image(f: &LaurentPolynomial, g: &LaurentPolynomial, k: i64) -> LaurentPolynomial {
    let ring = f.ring();
    let xk = LaurentPolynomial::x_power(ring, k);
    let second = xk.derive().derive();
    &(&second - &(f * &xk.derive())) - &(g * &xk)
}

/// Monic polynomial solution `P = x^d + c_{d-1} x^{d-1} + ... + c_0` of
/// `P'' = f P' + g P`, if one exists. Expanding `E(P)` makes every Laurent
/// coefficient affine in the unknown `c`s; the system is solved exactly.
pub fn poly_solution_monic(
    f: &LaurentPolynomial,
    g: &LaurentPolynomial,
    d: usize,
) -> Option<LaurentPolynomial> {
    assert!(
        f.is_concrete() && g.is_concrete(),
        "polynomial-solution search needs concrete rational coefficients"
    );
    let ring = f.ring();
    let images: Vec<LaurentPolynomial> = (0..=d as i64).map(|k| basis_image(f, g, k)).collect();
    let mut support = std::collections::BTreeSet::new();
    for im in &images {
        support.extend(im.iter().map(|(k, _)| k));
    }
    let rows: Vec<Vec<Rational>> = support
        .iter()
        .map(|&e| (0..d as i64).map(|k| images[k as usize].coeff_rational(e).unwrap()).collect())
        .collect();
    let rhs: Vec<Rational> = support
        .iter()
        .map(|&e| -images[d].coeff_rational(e).unwrap())
        .collect();
    let m = if d == 0 {
        Matrix::new(support.len(), 0)
    } else {
        Matrix::from_rows(rows)
    };
    match linalg::solve(&m, &rhs).expect("dimensions consistent") {
        LinearOutcome::Inconsistent => None,
        LinearOutcome::Solution(cs) => {
            let mut p = LaurentPolynomial::x_power(ring, d as i64);
            for (k, c) in cs.into_iter().enumerate() {
                p = &p + &LaurentPolynomial::constant_rational(ring, c).shift(k as i64);
            }
            debug_assert!({
                let resid = &(&p.derive().derive() - &(f * &p.derive())) - &(g * &p);
                resid.is_zero()
            });
            Some(p)
        }
    }
}

/// True iff `P'' = f P' + g P` has a nonzero (not necessarily monic)
/// polynomial solution of degree at most `n`: the homogeneous system on the
/// `n+1` coefficients has a nontrivial kernel.
pub fn has_poly_solution_leq(f: &LaurentPolynomial, g: &LaurentPolynomial, n: usize) -> bool {
    assert!(
        f.is_concrete() && g.is_concrete(),
        "polynomial-solution search needs concrete rational coefficients"
    );
    let images: Vec<LaurentPolynomial> = (0..=n as i64).map(|k| basis_image(f, g, k)).collect();
    let mut support = std::collections::BTreeSet::new();
    for im in &images {
        support.extend(im.iter().map(|(k, _)| k));
    }
    let rows: Vec<Vec<Rational>> = support
        .iter()
        .map(|&e| (0..=n as i64).map(|k| images[k as usize].coeff_rational(e).unwrap()).collect())
        .collect();
    if rows.is_empty() {
        // E annihilates every basis monomial
        return true;
    }
    linalg::rank(&Matrix::from_rows(rows)) < n + 1
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::params::ParamRing;
    use crate::parser::{parse, ExprSource};
    use crate::rational::int;

    fn q(text: &str) -> LaurentPolynomial {
        parse(&ExprSource::new(text, ParamRing::rationals())).unwrap()
    }

    fn qb(text: &str) -> LaurentPolynomial {
        parse(&ExprSource::with_params(text, &[("beta", false)]).unwrap()).unwrap()
    }

    #[test]
    fn first_recurrence_step() {
        let f = q("x^2 - 1");
        let g = q("3/x");
        let seq = aim_sequences(&f, &g, 1);
        // lambda_1 = f' + g + f^2 ; s_1 = g' + f g
        let lam1 = &(&f.derive() + &g) + &(&f * &f);
        let s1 = &g.derive() + &(&f * &g);
        assert_eq!(seq.lambdas[1], lam1);
        assert_eq!(seq.esses[1], s1);
    }

    #[test]
    fn zero_input_stays_zero() {
        let z = LaurentPolynomial::zero(&ParamRing::rationals());
        let seq = aim_sequences(&z, &z, 5);
        for j in 1..=5 {
            assert!(seq.lambdas[j].is_zero());
            assert!(seq.esses[j].is_zero());
        }
    }

    #[test]
    fn symbolic_s1_example() {
        // f = -(2x + 2/x), g = -3 + beta/x
        let f = qb("-(2*x + 2/x)");
        let g = qb("-3 + beta/x");
        let seq = aim_sequences(&f, &g, 1);
        let expected = qb("-beta*x^-2 + (2*x + 2/x)*(3 - beta/x)");
        assert_eq!(seq.esses[1], expected);
    }

    #[test]
    fn universal_low_orders() {
        assert_eq!(delta_universal(0).unwrap().to_string(), "-beta");
        let d1 = delta_universal(1).unwrap();
        assert_eq!(d1.to_string(), "alpha*beta' - alpha'*beta - beta^2");
        assert_eq!(d1.term_count(), 3);
        assert_eq!(delta_universal(2).unwrap().term_count(), 11);
        assert_eq!(delta_universal(3).unwrap().term_count(), 34);
    }

    #[test]
    fn universal_cap() {
        assert!(matches!(
            delta_universal_with_cap(4, 3),
            Err(AimError::CapExceeded { requested: 4, cap: 3 })
        ));
        assert!(delta_universal_with_cap(4, 4).is_ok());
    }

    #[test]
    fn delta_zero_g() {
        let f = q("-2*x - 2 - 2/x");
        let g = LaurentPolynomial::zero(f.ring());
        for n in 0..=6 {
            assert!(delta(&f, &g, n).is_zero(), "n = {n}");
        }
    }

    #[test]
    fn delta_symbolic_example() {
        // independent expansion of f g' - f' g - g^2 fixes the value
        let f = qb("-(2*x + 2/x)");
        let g = qb("-3 + beta/x");
        let direct = &(&(&f * &g.derive()) - &(&f.derive() * &g)) - &(&g * &g);
        let d1 = delta(&f, &g, 1);
        assert_eq!(d1, direct);
        assert_eq!(d1, qb("-15 + 10*beta/x + (6 - beta*beta)/x^2"));
    }

    #[test]
    fn delta_vanishes_for_planted_solutions() {
        use rand::rngs::StdRng;
        use rand::{Rng, SeedableRng};
        let ring = ParamRing::rationals();
        let mut rng = StdRng::seed_from_u64(17);
        for _ in 0..20 {
            // plant P = x^d: g = d(d-1)/x^2 - d f / x
            let d: usize = rng.gen_range(0..4);
            let mut f = LaurentPolynomial::zero(&ring);
            for k in -1..=2 {
                f = &f + &LaurentPolynomial::monomial(ring.constant(int(rng.gen_range(-3..4))), k);
            }
            let dd = int(d as i64);
            let g = &LaurentPolynomial::constant_rational(&ring, &dd * (&dd - int(1))).shift(-2)
                - &f.scale_rational(&dd).shift(-1);
            assert!(delta(&f, &g, d).is_zero(), "d = {d}");
            assert!(poly_solution_monic(&f, &g, d).is_some());
        }
    }

    #[test]
    fn universal_matches_evaluated() {
        use rand::rngs::StdRng;
        use rand::{Rng, SeedableRng};
        let ring = ParamRing::rationals();
        let mut rng = StdRng::seed_from_u64(23);
        let universals: Vec<_> = (0..=4).map(|n| delta_universal(n).unwrap()).collect();
        for _ in 0..110 {
            let mut f = LaurentPolynomial::zero(&ring);
            let mut g = LaurentPolynomial::zero(&ring);
            for k in -2..=3 {
                if rng.gen_bool(0.6) {
                    f = &f + &LaurentPolynomial::monomial(ring.constant(int(rng.gen_range(-3..4))), k);
                }
                if rng.gen_bool(0.6) {
                    g = &g + &LaurentPolynomial::monomial(ring.constant(int(rng.gen_range(-3..4))), k);
                }
            }
            for (n, u) in universals.iter().enumerate() {
                assert_eq!(delta(&f, &g, n), u.evaluate(&f, &g), "n = {n}");
            }
        }
    }

    #[test]
    fn determinant_form_sign() {
        // det((d/dx + M)^n M) realizes +Delta_0 at n = 0 and -Delta_n after
        assert_eq!(delta_determinant_form(0), delta_universal(0).unwrap());
        for n in 1..=3 {
            let det = delta_determinant_form(n);
            let dn = delta_universal(n).unwrap();
            assert_eq!(det, -&dn, "n = {n}: determinant form is -Delta_n");
        }
        println!("determinant-form signs: n=0 -> +, n>=1 -> -");
    }

    #[test]
    fn monic_solutions() {
        let f = q("-2*x - 2 - 2/x");
        let g = LaurentPolynomial::zero(f.ring());
        assert_eq!(poly_solution_monic(&f, &g, 0), Some(q("1")));

        // y'' = -x y' + y has P = x
        let f = q("-x");
        let g = q("1");
        assert_eq!(poly_solution_monic(&f, &g, 1), Some(q("x")));

        // the other sheet of x^2+5+2/x^2 carries the same solution line:
        // omega = x, lambda = -1, d = 3 yields P = x^3
        let l = q("x^2 + 5 + 2*x^-2");
        let phi = q("x - 1/x");
        let fap = phi.scale_rational(&int(-2));
        let gap = -&(&(&phi.derive() + &phi.pow(2)) - &l);
        assert_eq!(poly_solution_monic(&fap, &gap, 3), Some(q("x^3")));
        // and no monic solutions at the degrees in between
        assert_eq!(poly_solution_monic(&fap, &gap, 1), None);
        assert_eq!(poly_solution_monic(&fap, &gap, 2), None);
    }

    #[test]
    fn kernel_solutions() {
        let ring = ParamRing::rationals();
        let g0 = LaurentPolynomial::zero(&ring);
        for n in 0..4 {
            assert!(has_poly_solution_leq(&q("x^3 - 2/x"), &g0, n));
        }
        assert!(has_poly_solution_leq(&q("-x"), &q("1"), 1));
        for n in 0..5 {
            assert!(!has_poly_solution_leq(&LaurentPolynomial::zero(&ring), &q("-1"), n));
        }
    }

    #[test]
    fn theorem_equivalence_smoke() {
        use rand::rngs::StdRng;
        use rand::{Rng, SeedableRng};
        let ring = ParamRing::rationals();
        let mut rng = StdRng::seed_from_u64(31);
        for trial in 0..60 {
            let (f, g) = if trial % 2 == 0 {
                let d: usize = rng.gen_range(0..4);
                let mut f = LaurentPolynomial::zero(&ring);
                for k in -1..=2 {
                    f = &f + &LaurentPolynomial::monomial(ring.constant(int(rng.gen_range(-2..3))), k);
                }
                let dd = int(d as i64);
                let g = &LaurentPolynomial::constant_rational(&ring, &dd * (&dd - int(1)))
                    .shift(-2)
                    - &f.scale_rational(&dd).shift(-1);
                (f, g)
            } else {
                let mut f = LaurentPolynomial::zero(&ring);
                let mut g = LaurentPolynomial::zero(&ring);
                for k in -2..=3 {
                    if rng.gen_bool(0.5) {
                        f = &f + &LaurentPolynomial::monomial(ring.constant(int(rng.gen_range(-3..4))), k);
                    }
                    if rng.gen_bool(0.5) {
                        g = &g + &LaurentPolynomial::monomial(ring.constant(int(rng.gen_range(-3..4))), k);
                    }
                }
                (f, g)
            };
            for n in 0..=4 {
                assert_eq!(
                    delta(&f, &g, n).is_zero(),
                    has_poly_solution_leq(&f, &g, n),
                    "disagreement at n = {n} for f = {f}, g = {g}"
                );
            }
        }
    }
}

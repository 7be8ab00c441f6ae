//! Exact linear algebra over the rationals.
//!
//! Rows are cleared to integers and reduced by single-step fraction-free
//! (Bareiss) elimination, so every intermediate value stays an integer;
//! solutions are recovered by exact rational back-substitution.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use crate::rational::Rational;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<Rational>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum LinAlgError {
    DimensionMismatch { expected: usize, got: usize },
}

impl std::fmt::Display for LinAlgError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            LinAlgError::DimensionMismatch { expected, got } => {
                write!(f, "dimension mismatch: expected {expected} entries, got {got}")
            }
        }
    }
}

impl std::error::Error for LinAlgError {}

/// Outcome of solving `M x = rhs`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum LinearOutcome {
    /// A particular solution (free variables set to zero).
    Solution(Vec<Rational>),
    Inconsistent,
}

impl Matrix {
    pub fn new(rows: usize, cols: usize) -> Self {
        Matrix { rows, cols, data: vec![Rational::zero(); rows * cols] }
    }

    pub fn from_rows(rows: Vec<Vec<Rational>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |row| row.len());
        assert!(rows.iter().all(|row| row.len() == c), "ragged matrix");
        Matrix { rows: r, cols: c, data: rows.into_iter().flatten().collect() }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Matrix::new(n, n);
        for i in 0..n {
            m[(i, i)] = Rational::one();
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    /// `M x` for a column vector `x`.
    pub fn apply(&self, x: &[Rational]) -> Result<Vec<Rational>, LinAlgError> {
        if x.len() != self.cols {
            return Err(LinAlgError::DimensionMismatch { expected: self.cols, got: x.len() });
        }
        Ok((0..self.rows)
            .map(|i| (0..self.cols).map(|j| &self[(i, j)] * &x[j]).sum())
            .collect())
    }
}

impl std::ops::Index<(usize, usize)> for Matrix {
    type Output = Rational;
    fn index(&self, (i, j): (usize, usize)) -> &Rational {
        &self.data[i * self.cols + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for Matrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Rational {
        &mut self.data[i * self.cols + j]
    }
}

/// Integer row-echelon form produced by fraction-free elimination.
struct Echelon {
    data: Vec<Vec<BigInt>>,
    /// pivot column of each used row, in order
    pivots: Vec<usize>,
    cols: usize,
}

fn to_integer_rows(m: &Matrix, rhs: Option<&[Rational]>) -> Vec<Vec<BigInt>> {
    let extra = usize::from(rhs.is_some());
    (0..m.rows)
        .map(|i| {
            let mut lcm = BigInt::one();
            for j in 0..m.cols {
                lcm = lcm.lcm(m[(i, j)].denom());
            }
            if let Some(r) = rhs {
                lcm = lcm.lcm(r[i].denom());
            }
            let mut row = Vec::with_capacity(m.cols + extra);
            for j in 0..m.cols {
                row.push(m[(i, j)].numer() * &lcm / m[(i, j)].denom());
            }
            if let Some(r) = rhs {
                row.push(r[i].numer() * &lcm / r[i].denom());
            }
            row
        })
        .collect()
}

/// Single-step fraction-free Gaussian elimination (Bareiss).
fn eliminate(mut rows: Vec<Vec<BigInt>>, cols: usize) -> Echelon {
    let nrows = rows.len();
    let mut pivots = Vec::new();
    let mut prev_pivot = BigInt::one();
    let mut rank = 0usize;
    for col in 0..cols {
        // smallest nonzero pivot keeps the integers small
        let Some(best) = (rank..nrows)
            .filter(|&i| !rows[i][col].is_zero())
            .min_by_key(|&i| rows[i][col].magnitude().clone())
        else {
            continue;
        };
        rows.swap(rank, best);
        for i in rank + 1..nrows {
            let (head, tail) = rows.split_at_mut(i);
            let prow = &head[rank];
            let irow = &mut tail[0];
            let a = prow[col].clone();
            let b = irow[col].clone();
            for j in 0..irow.len() {
                let v = &irow[j] * &a - &prow[j] * &b;
                debug_assert!((&v % &prev_pivot).is_zero());
                irow[j] = v / &prev_pivot;
            }
        }
        prev_pivot = rows[rank][col].clone();
        pivots.push(col);
        rank += 1;
        if rank == nrows {
            break;
        }
    }
    Echelon { data: rows, pivots, cols }
}

impl Echelon {
    /// Back-substitute with the given values for free columns.
    /// `cols` counts only the variable columns; an optional augmented column
    /// holds the right-hand side.
    fn back_substitute(&self, free_values: &[Rational], augmented: bool) -> Option<Vec<Rational>> {
        let nvars = if augmented { self.cols - 1 } else { self.cols };
        let mut x: Vec<Option<Rational>> = vec![None; nvars];
        let mut free_iter = free_values.iter();
        for j in 0..nvars {
            if !self.pivots.contains(&j) {
                x[j] = Some(free_iter.next().cloned().unwrap_or_else(Rational::zero));
            }
        }
        for (row, &pc) in self.pivots.iter().enumerate().rev() {
            let r = &self.data[row];
            let mut acc = if augmented {
                Rational::from_integer(r[self.cols - 1].clone())
            } else {
                Rational::zero()
            };
            for j in pc + 1..nvars {
                let c = &r[j];
                if !c.is_zero() {
                    acc -= Rational::from_integer(c.clone()) * x[j].clone().unwrap();
                }
            }
            x[pc] = Some(acc / Rational::from_integer(r[pc].clone()));
        }
        // consistency of zero rows
        if augmented {
            for (i, r) in self.data.iter().enumerate() {
                if i < self.pivots.len() {
                    continue;
                }
                if r[..self.cols - 1].iter().all(|c| c.is_zero()) && !r[self.cols - 1].is_zero() {
                    return None;
                }
            }
        }
        Some(x.into_iter().map(Option::unwrap).collect())
    }
}

/// Solve `M x = rhs` exactly. Underdetermined systems yield the particular
/// solution with all free variables zero.
pub fn solve(m: &Matrix, rhs: &[Rational]) -> Result<LinearOutcome, LinAlgError> {
    if rhs.len() != m.rows {
        return Err(LinAlgError::DimensionMismatch { expected: m.rows, got: rhs.len() });
    }
    let ech = eliminate(to_integer_rows(m, Some(rhs)), m.cols + 1);
    // a pivot in the augmented column means inconsistency
    if ech.pivots.contains(&m.cols) {
        return Ok(LinearOutcome::Inconsistent);
    }
    match ech.back_substitute(&[], true) {
        Some(x) => {
            debug_assert_eq!(m.apply(&x).unwrap(), rhs);
            Ok(LinearOutcome::Solution(x))
        }
        None => Ok(LinearOutcome::Inconsistent),
    }
}

/// A basis of the kernel of `M`, each vector normalized so that its first
/// nonzero coordinate is `1`.
pub fn kernel(m: &Matrix) -> Vec<Vec<Rational>> {
    let ech = eliminate(to_integer_rows(m, None), m.cols);
    let free_cols: Vec<usize> = (0..m.cols).filter(|j| !ech.pivots.contains(j)).collect();
    let mut basis = Vec::with_capacity(free_cols.len());
    for (fi, _) in free_cols.iter().enumerate() {
        let mut free_values = vec![Rational::zero(); free_cols.len()];
        free_values[fi] = Rational::one();
        let v = ech.back_substitute(&free_values, false).expect("homogeneous system");
        let lead = v.iter().find(|c| !c.is_zero()).cloned().unwrap_or_else(Rational::one);
        let v: Vec<Rational> = v.into_iter().map(|c| c / &lead).collect();
        debug_assert!(m.apply(&v).unwrap().iter().all(|c| c.is_zero()));
        basis.push(v);
    }
    basis
}

/// Rank of `M` (exact).
pub fn rank(m: &Matrix) -> usize {
    eliminate(to_integer_rows(m, None), m.cols).pivots.len()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, rat};

    fn m(rows: &[&[i64]]) -> Matrix {
        Matrix::from_rows(rows.iter().map(|r| r.iter().map(|&v| int(v)).collect()).collect())
    }

    #[test]
    fn identity_solves_to_rhs() {
        let id = Matrix::identity(3);
        let rhs = vec![int(1), int(0), int(0)];
        assert_eq!(solve(&id, &rhs).unwrap(), LinearOutcome::Solution(rhs));
    }

    #[test]
    fn scalar_division() {
        let a = m(&[&[2]]);
        assert_eq!(
            solve(&a, &[int(1)]).unwrap(),
            LinearOutcome::Solution(vec![rat(1, 2)])
        );
    }

    #[test]
    fn kernel_of_rank_deficient() {
        let a = m(&[&[1, 1], &[2, 2]]);
        assert_eq!(kernel(&a), vec![vec![int(1), int(-1)]]);
    }

    #[test]
    fn inconsistent_system() {
        let a = m(&[&[1, 1], &[1, 1]]);
        assert_eq!(solve(&a, &[int(1), int(2)]).unwrap(), LinearOutcome::Inconsistent);
    }

    #[test]
    fn underdetermined_particular_solution() {
        let a = m(&[&[1, 2, -1]]);
        match solve(&a, &[int(4)]).unwrap() {
            LinearOutcome::Solution(x) => {
                assert_eq!(a.apply(&x).unwrap(), vec![int(4)]);
            }
            LinearOutcome::Inconsistent => panic!("should be solvable"),
        }
    }

    #[test]
    fn solution_substitutes_back_exactly() {
        let a = Matrix::from_rows(vec![
            vec![rat(1, 2), rat(2, 3), int(1)],
            vec![int(3), rat(-1, 5), int(0)],
            vec![int(1), int(1), int(7)],
        ]);
        let rhs = vec![rat(1, 6), int(2), rat(-3, 4)];
        match solve(&a, &rhs).unwrap() {
            LinearOutcome::Solution(x) => assert_eq!(a.apply(&x).unwrap(), rhs),
            LinearOutcome::Inconsistent => panic!("should be solvable"),
        }
    }

    #[test]
    fn kernel_vectors_annihilate() {
        let a = m(&[&[1, 2, 3, 4], &[2, 4, 6, 8], &[1, 0, 1, 0]]);
        let basis = kernel(&a);
        assert_eq!(basis.len(), 2);
        for v in &basis {
            assert!(a.apply(v).unwrap().iter().all(|c| c.is_zero()));
            assert_eq!(v.iter().find(|c| !c.is_zero()).unwrap(), &int(1));
        }
        assert_eq!(rank(&a), 2);
    }

    #[test]
    fn dimension_mismatch_reported() {
        let a = m(&[&[1, 2]]);
        assert!(matches!(
            solve(&a, &[int(1), int(2)]),
            Err(LinAlgError::DimensionMismatch { .. })
        ));
    }
}

use std::fmt;
use std::ops::{Index, IndexMut};

use num_bigint::BigInt;
use num_traits::{One, Zero};

use super::{clear_denominators, int_rat, Rational};
use crate::error::{Error, Result};

/// Dense row-major matrix of rationals.
#[derive(Clone, PartialEq, Eq)]
pub struct ExactMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Rational>,
}

impl fmt::Debug for ExactMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "ExactMatrix {}x{} [", self.rows, self.cols)?;
        for r in 0..self.rows {
            let row: Vec<String> = self.row(r).iter().map(|x| x.to_string()).collect();
            writeln!(f, "  [{}]", row.join(", "))?;
        }
        write!(f, "]")
    }
}

impl Index<(usize, usize)> for ExactMatrix {
    type Output = Rational;
    fn index(&self, (r, c): (usize, usize)) -> &Rational {
        &self.data[r * self.cols + c]
    }
}

impl IndexMut<(usize, usize)> for ExactMatrix {
    fn index_mut(&mut self, (r, c): (usize, usize)) -> &mut Rational {
        &mut self.data[r * self.cols + c]
    }
}

impl ExactMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        ExactMatrix { rows, cols, data: vec![Rational::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = Rational::one();
        }
        m
    }

    pub fn from_rows(rows: &[Vec<Rational>]) -> Result<Self> {
        let cols = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|r| r.len() != cols) {
            return Err(Error::DimensionMismatch("ragged rows".into()));
        }
        Ok(ExactMatrix { rows: rows.len(), cols, data: rows.concat() })
    }

    pub fn from_i64(rows: &[&[i64]]) -> Self {
        let rs: Vec<Vec<Rational>> =
            rows.iter().map(|r| r.iter().map(|&x| super::rat(x)).collect()).collect();
        Self::from_rows(&rs).expect("rectangular literal")
    }

    /// Column vector from a slice.
    pub fn column(v: &[Rational]) -> Self {
        ExactMatrix { rows: v.len(), cols: 1, data: v.to_vec() }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn row(&self, r: usize) -> &[Rational] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn col(&self, c: usize) -> Vec<Rational> {
        (0..self.rows).map(|r| self[(r, c)].clone()).collect()
    }

    pub fn to_rows(&self) -> Vec<Vec<Rational>> {
        (0..self.rows).map(|r| self.row(r).to_vec()).collect()
    }

    pub fn entries(&self) -> &[Rational] {
        &self.data
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                t[(c, r)] = self[(r, c)].clone();
            }
        }
        t
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Zero::is_zero)
    }

    pub fn mul(&self, other: &ExactMatrix) -> Result<ExactMatrix> {
        if self.cols != other.rows {
            return Err(Error::DimensionMismatch(format!(
                "{}x{} times {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = &other[(k, j)];
                    if !b.is_zero() {
                        out[(i, j)] += a * b;
                    }
                }
            }
        }
        Ok(out)
    }

    pub fn mul_vec(&self, v: &[Rational]) -> Vec<Rational> {
        assert_eq!(v.len(), self.cols);
        (0..self.rows)
            .map(|r| {
                self.row(r)
                    .iter()
                    .zip(v)
                    .filter(|(a, b)| !a.is_zero() && !b.is_zero())
                    .fold(Rational::zero(), |acc, (a, b)| acc + a * b)
            })
            .collect()
    }

    pub fn add(&self, other: &ExactMatrix) -> ExactMatrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        let data = self.data.iter().zip(&other.data).map(|(a, b)| a + b).collect();
        ExactMatrix { rows: self.rows, cols: self.cols, data }
    }

    pub fn sub(&self, other: &ExactMatrix) -> ExactMatrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        let data = self.data.iter().zip(&other.data).map(|(a, b)| a - b).collect();
        ExactMatrix { rows: self.rows, cols: self.cols, data }
    }

    pub fn scale(&self, s: &Rational) -> ExactMatrix {
        let data = self.data.iter().map(|a| a * s).collect();
        ExactMatrix { rows: self.rows, cols: self.cols, data }
    }

    pub fn trace(&self) -> Rational {
        (0..self.rows.min(self.cols)).fold(Rational::zero(), |acc, i| acc + &self[(i, i)])
    }

    pub fn rank(&self) -> usize {
        let (ints, _) = self.integer_rows();
        bareiss_rank(&ints)
    }

    pub fn det(&self) -> Result<Rational> {
        if !self.is_square() {
            return Err(Error::NotSquare { rows: self.rows, cols: self.cols });
        }
        let (ints, scales) = self.integer_rows();
        let d = bareiss_det(&ints);
        let s = scales.iter().fold(BigInt::one(), |acc, x| acc * x);
        Ok(Rational::new(d, s))
    }

    pub fn inverse(&self) -> Result<Option<ExactMatrix>> {
        if !self.is_square() {
            return Err(Error::NotSquare { rows: self.rows, cols: self.cols });
        }
        let sol = solve_and_kernel(self, Some(&ExactMatrix::identity(self.rows)))?;
        if !sol.kernel.is_empty() {
            return Ok(None);
        }
        Ok(sol.particular)
    }

    /// Rows scaled to integers, together with the per-row scale factors.
    fn integer_rows(&self) -> (Vec<Vec<BigInt>>, Vec<BigInt>) {
        (0..self.rows).map(|r| clear_denominators(self.row(r))).unzip()
    }
}

/// Fraction-free forward elimination. Returns the echelon form and the pivot
/// columns; `pivot_limit` restricts which columns may hold pivots.
fn bareiss_echelon(
    mut a: Vec<Vec<BigInt>>,
    pivot_limit: usize,
) -> (Vec<Vec<BigInt>>, Vec<usize>, bool) {
    let rows = a.len();
    let cols = a.first().map_or(0, Vec::len);
    let mut prev = BigInt::one();
    let mut pivots = Vec::new();
    let mut negated = false;
    let mut r = 0;
    for c in 0..pivot_limit.min(cols) {
        if r == rows {
            break;
        }
        let Some(p) = (r..rows).find(|&i| !a[i][c].is_zero()) else {
            continue;
        };
        if p != r {
            a.swap(p, r);
            negated = !negated;
        }
        let (top, rest) = a.split_at_mut(r + 1);
        let pivot_row = &top[r];
        for row in rest.iter_mut() {
            if row[c].is_zero() {
                for j in c + 1..cols {
                    row[j] = &row[j] * &pivot_row[c] / &prev;
                }
                continue;
            }
            for j in c + 1..cols {
                row[j] = (&pivot_row[c] * &row[j] - &row[c] * &pivot_row[j]) / &prev;
            }
            row[c] = BigInt::zero();
        }
        prev = a[r][c].clone();
        pivots.push(c);
        r += 1;
    }
    (a, pivots, negated)
}

/// Rank of an integer matrix by fraction-free elimination.
pub fn bareiss_rank(rows: &[Vec<BigInt>]) -> usize {
    let cols = rows.first().map_or(0, Vec::len);
    bareiss_echelon(rows.to_vec(), cols).1.len()
}

/// Determinant of a square integer matrix by fraction-free elimination.
pub fn bareiss_det(rows: &[Vec<BigInt>]) -> BigInt {
    let n = rows.len();
    if n == 0 {
        return BigInt::one();
    }
    let (ech, pivots, negated) = bareiss_echelon(rows.to_vec(), n);
    if pivots.len() < n {
        return BigInt::zero();
    }
    let d = ech[n - 1][n - 1].clone();
    if negated {
        -d
    } else {
        d
    }
}

/// Solution set of `M x = rhs`: one particular solution (if consistent) and a
/// basis of the null space of `M`.
#[derive(Debug, Clone)]
pub struct SolveResult {
    /// `cols(M) x cols(rhs)` matrix whose columns solve each right-hand side;
    /// `None` when some column is inconsistent or no rhs was given.
    pub particular: Option<ExactMatrix>,
    pub kernel: Vec<Vec<Rational>>,
}

/// Solves `M x = rhs` exactly and returns a kernel basis of `M`.
pub fn solve_and_kernel(m: &ExactMatrix, rhs: Option<&ExactMatrix>) -> Result<SolveResult> {
    let nvars = m.cols;
    let nrhs = match rhs {
        Some(b) if b.rows != m.rows => {
            return Err(Error::DimensionMismatch(format!(
                "matrix has {} rows, right-hand side has {}",
                m.rows, b.rows
            )))
        }
        Some(b) => b.cols,
        None => 0,
    };
    let aug: Vec<Vec<BigInt>> = (0..m.rows)
        .map(|r| {
            let mut row = m.row(r).to_vec();
            if let Some(b) = rhs {
                row.extend_from_slice(b.row(r));
            }
            clear_denominators(&row).0
        })
        .collect();
    let (ech, pivots, _) = bareiss_echelon(aug, nvars);
    let rank = pivots.len();

    // Back substitution for the pivot variables given values of everything else.
    let back_substitute = |x: &mut Vec<Rational>, rhs_col: Option<usize>| {
        for i in (0..rank).rev() {
            let pc = pivots[i];
            let mut acc = match rhs_col {
                Some(c) => int_rat(&ech[i][nvars + c]),
                None => Rational::zero(),
            };
            for j in pc + 1..nvars {
                if !ech[i][j].is_zero() && !x[j].is_zero() {
                    acc -= int_rat(&ech[i][j]) * &x[j];
                }
            }
            x[pc] = acc / int_rat(&ech[i][pc]);
        }
    };

    let particular = if nrhs > 0 {
        let consistent = (rank..ech.len()).all(|i| (0..nrhs).all(|c| ech[i][nvars + c].is_zero()));
        if consistent {
            let mut sol = ExactMatrix::zeros(nvars, nrhs);
            for c in 0..nrhs {
                let mut x = vec![Rational::zero(); nvars];
                back_substitute(&mut x, Some(c));
                for (r, v) in x.into_iter().enumerate() {
                    sol[(r, c)] = v;
                }
            }
            Some(sol)
        } else {
            None
        }
    } else {
        None
    };

    let mut kernel = Vec::new();
    let mut is_pivot = vec![false; nvars];
    for &p in &pivots {
        is_pivot[p] = true;
    }
    for f in (0..nvars).filter(|&j| !is_pivot[j]) {
        let mut x = vec![Rational::zero(); nvars];
        x[f] = Rational::one();
        back_substitute(&mut x, None);
        kernel.push(x);
    }
    Ok(SolveResult { particular, kernel })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::{rat, ratio};

    #[test]
    fn kernel_of_rank_one_matrix() {
        let m = ExactMatrix::from_i64(&[&[1, 1], &[1, 1]]);
        let s = solve_and_kernel(&m, None).unwrap();
        assert_eq!(s.kernel, vec![vec![rat(-1), rat(1)]]);
    }

    #[test]
    fn solve_one_by_one() {
        let m = ExactMatrix::from_i64(&[&[2]]);
        let b = ExactMatrix::from_i64(&[&[3]]);
        let s = solve_and_kernel(&m, Some(&b)).unwrap();
        assert_eq!(s.particular.unwrap()[(0, 0)], ratio(3, 2));
        assert!(s.kernel.is_empty());
    }

    #[test]
    fn identity_has_empty_kernel() {
        let s = solve_and_kernel(&ExactMatrix::identity(2), None).unwrap();
        assert!(s.kernel.is_empty());
    }

    #[test]
    fn inconsistent_system_has_no_particular_solution() {
        let m = ExactMatrix::from_i64(&[&[1, 1], &[1, 1]]);
        let b = ExactMatrix::from_i64(&[&[1], &[2]]);
        let s = solve_and_kernel(&m, Some(&b)).unwrap();
        assert!(s.particular.is_none());
    }

    #[test]
    fn rhs_row_mismatch_is_an_error() {
        let m = ExactMatrix::identity(2);
        let b = ExactMatrix::zeros(3, 1);
        assert!(matches!(solve_and_kernel(&m, Some(&b)), Err(Error::DimensionMismatch(_))));
    }

    #[test]
    fn determinant_and_inverse() {
        let m = ExactMatrix::from_i64(&[&[0, 2, 1], &[1, 0, 0], &[3, 1, 4]]);
        assert_eq!(m.det().unwrap(), rat(-7));
        let inv = m.inverse().unwrap().unwrap();
        assert_eq!(m.mul(&inv).unwrap(), ExactMatrix::identity(3));
        let singular = ExactMatrix::from_i64(&[&[1, 2], &[2, 4]]);
        assert_eq!(singular.det().unwrap(), rat(0));
        assert!(singular.inverse().unwrap().is_none());
        assert_eq!(singular.rank(), 1);
    }

    #[test]
    fn rational_determinant() {
        let m = ExactMatrix::from_rows(&[vec![ratio(1, 2), rat(1)], vec![rat(3), ratio(2, 3)]]).unwrap();
        assert_eq!(m.det().unwrap(), ratio(1, 3) - rat(3));
    }
}

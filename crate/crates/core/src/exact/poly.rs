use std::fmt;

use num_traits::{One, Zero};

use super::{ExactMatrix, Rational};
use crate::error::{Error, Result};

/// Univariate polynomial with rational coefficients, lowest degree first.
#[derive(Clone, PartialEq, Eq)]
pub struct Poly {
    coeffs: Vec<Rational>,
}

impl fmt::Debug for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let terms: Vec<String> = self
            .coeffs
            .iter()
            .enumerate()
            .rev()
            .filter(|(_, c)| !c.is_zero())
            .map(|(i, c)| match i {
                0 => format!("{c}"),
                1 => format!("({c})x"),
                _ => format!("({c})x^{i}"),
            })
            .collect();
        if terms.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", terms.join(" + "))
        }
    }
}

impl Poly {
    pub fn new(mut coeffs: Vec<Rational>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        Poly { coeffs }
    }

    pub fn from_i64(cs: &[i64]) -> Self {
        Self::new(cs.iter().map(|&c| super::rat(c)).collect())
    }

    pub fn zero() -> Self {
        Poly { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        Poly { coeffs: vec![Rational::one()] }
    }

    /// `x - a`
    pub fn linear(a: &Rational) -> Self {
        Poly { coeffs: vec![-a.clone(), Rational::one()] }
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree; the zero polynomial reports `None`.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading(&self) -> Option<&Rational> {
        self.coeffs.last()
    }

    pub fn is_monic(&self) -> bool {
        self.leading().is_some_and(One::is_one)
    }

    pub fn add(&self, other: &Poly) -> Poly {
        let n = self.coeffs.len().max(other.coeffs.len());
        let z = Rational::zero();
        Poly::new(
            (0..n)
                .map(|i| self.coeffs.get(i).unwrap_or(&z) + other.coeffs.get(i).unwrap_or(&z))
                .collect(),
        )
    }

    pub fn sub(&self, other: &Poly) -> Poly {
        self.add(&other.scale(&-Rational::one()))
    }

    pub fn scale(&self, s: &Rational) -> Poly {
        Poly::new(self.coeffs.iter().map(|c| c * s).collect())
    }

    pub fn mul(&self, other: &Poly) -> Poly {
        if self.is_zero() || other.is_zero() {
            return Poly::zero();
        }
        let mut out = vec![Rational::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in other.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Poly::new(out)
    }

    /// Quotient and remainder by a nonzero divisor.
    pub fn div_rem(&self, d: &Poly) -> (Poly, Poly) {
        let dd = d.degree().expect("division by zero polynomial");
        let lead = d.leading().unwrap().clone();
        let mut rem = self.coeffs.clone();
        let mut quot = vec![Rational::zero(); self.coeffs.len().saturating_sub(dd)];
        while rem.len() > dd && !rem.is_empty() {
            let k = rem.len() - 1 - dd;
            let c = rem.last().unwrap() / &lead;
            for (i, dc) in d.coeffs.iter().enumerate() {
                rem[k + i] -= &c * dc;
            }
            quot[k] = c;
            rem.pop();
            while rem.last().is_some_and(Zero::is_zero) {
                rem.pop();
            }
        }
        (Poly::new(quot), Poly::new(rem))
    }

    pub fn derivative(&self) -> Poly {
        Poly::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| c * super::rat(i as i64))
                .collect(),
        )
    }

    pub fn gcd(&self, other: &Poly) -> Poly {
        let (mut a, mut b) = (self.clone(), other.clone());
        while !b.is_zero() {
            let r = a.div_rem(&b).1;
            a = b;
            b = r;
        }
        a.monic()
    }

    pub fn monic(&self) -> Poly {
        match self.leading() {
            Some(l) => self.scale(&l.recip()),
            None => Poly::zero(),
        }
    }

    pub fn eval(&self, x: &Rational) -> Rational {
        self.coeffs.iter().rev().fold(Rational::zero(), |acc, c| acc * x + c)
    }

    /// Evaluates the polynomial at a square matrix (Horner's scheme).
    pub fn eval_matrix(&self, m: &ExactMatrix) -> Result<ExactMatrix> {
        if !m.is_square() {
            return Err(Error::NotSquare { rows: m.rows(), cols: m.cols() });
        }
        let n = m.rows();
        let mut acc = ExactMatrix::zeros(n, n);
        for c in self.coeffs.iter().rev() {
            acc = acc.mul(m)?.add(&ExactMatrix::identity(n).scale(c));
        }
        Ok(acc)
    }

    /// Squarefree test via `gcd(f, f')`.
    pub fn is_squarefree(&self) -> bool {
        self.gcd(&self.derivative()).degree() == Some(0)
    }
}

/// Minimal and characteristic polynomials of a square rational matrix.
pub fn min_char_poly(m: &ExactMatrix) -> Result<(Poly, Poly)> {
    if !m.is_square() {
        return Err(Error::NotSquare { rows: m.rows(), cols: m.cols() });
    }
    Ok((minimal_poly(m), char_poly(m)))
}

/// Characteristic polynomial via reduction to upper Hessenberg form followed
/// by the standard three-term expansion along the subdiagonal.
fn char_poly(m: &ExactMatrix) -> Poly {
    let n = m.rows();
    let mut h = m.clone();
    for col in 0..n.saturating_sub(2) {
        let Some(piv) = (col + 1..n).find(|&r| !h[(r, col)].is_zero()) else {
            continue;
        };
        let sub = col + 1;
        if piv != sub {
            for j in 0..n {
                let t = h[(piv, j)].clone();
                h[(piv, j)] = h[(sub, j)].clone();
                h[(sub, j)] = t;
            }
            for i in 0..n {
                let t = h[(i, piv)].clone();
                h[(i, piv)] = h[(i, sub)].clone();
                h[(i, sub)] = t;
            }
        }
        let p = h[(sub, col)].clone();
        for r in sub + 1..n {
            if h[(r, col)].is_zero() {
                continue;
            }
            let f = &h[(r, col)] / &p;
            // row_r -= f row_sub; then col_sub += f col_r (similarity)
            for j in 0..n {
                let t = &f * &h[(sub, j)];
                h[(r, j)] -= t;
            }
            for i in 0..n {
                let t = &f * &h[(i, r)];
                h[(i, sub)] += t;
            }
        }
    }
    // p_0 = 1, p_k = (x - h_kk) p_{k-1} - sum_{i<k} h_{ik} prod_{j=i+1}^{k} h_{j,j-1} p_{i-1}
    let mut ps: Vec<Poly> = vec![Poly::one()];
    for k in 0..n {
        let mut pk = Poly::linear(&h[(k, k)]).mul(&ps[k]);
        let mut prod = Rational::one();
        for i in (0..k).rev() {
            prod *= &h[(i + 1, i)];
            if prod.is_zero() {
                break;
            }
            let coeff = &h[(i, k)] * &prod;
            if !coeff.is_zero() {
                pk = pk.sub(&ps[i].scale(&coeff));
            }
        }
        ps.push(pk);
    }
    ps.pop().unwrap()
}

/// Minimal polynomial from the first linear dependency among `I, M, M^2, ...`.
fn minimal_poly(m: &ExactMatrix) -> Poly {
    let n = m.rows();
    let mut powers: Vec<Vec<Rational>> = vec![ExactMatrix::identity(n).entries().to_vec()];
    let mut current = ExactMatrix::identity(n);
    for k in 1..=n {
        current = current.mul(m).expect("square");
        let cols: Vec<Vec<Rational>> = powers.clone();
        // Solve sum_i c_i vec(M^i) = vec(M^k).
        let a = ExactMatrix::from_rows(&cols).unwrap().transpose();
        let b = ExactMatrix::column(current.entries());
        let sol = super::solve_and_kernel(&a, Some(&b)).expect("shapes agree");
        if let Some(x) = sol.particular {
            let mut coeffs: Vec<Rational> = (0..k).map(|i| -x[(i, 0)].clone()).collect();
            coeffs.push(Rational::one());
            return Poly::new(coeffs);
        }
        powers.push(current.entries().to_vec());
    }
    unreachable!("Cayley-Hamilton bounds the degree by n")
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn companion_matrix() {
        let m = ExactMatrix::from_i64(&[&[0, 2], &[1, 0]]);
        let (min, ch) = min_char_poly(&m).unwrap();
        assert_eq!(min, Poly::from_i64(&[-2, 0, 1]));
        assert_eq!(ch, Poly::from_i64(&[-2, 0, 1]));
    }

    #[test]
    fn identity_polys() {
        let (min, ch) = min_char_poly(&ExactMatrix::identity(2)).unwrap();
        assert_eq!(min, Poly::from_i64(&[-1, 1]));
        assert_eq!(ch, Poly::from_i64(&[1, -2, 1]));
    }

    #[test]
    fn nilpotent_block() {
        let (min, ch) = min_char_poly(&ExactMatrix::from_i64(&[&[0, 1], &[0, 0]])).unwrap();
        assert_eq!(min, Poly::from_i64(&[0, 0, 1]));
        assert_eq!(ch, Poly::from_i64(&[0, 0, 1]));
    }

    #[test]
    fn non_square_rejected() {
        assert!(matches!(min_char_poly(&ExactMatrix::zeros(2, 3)), Err(Error::NotSquare { .. })));
    }

    #[test]
    fn division_and_gcd() {
        let f = Poly::from_i64(&[-1, 0, 1]);
        let g = Poly::from_i64(&[1, 1]);
        let (q, r) = f.div_rem(&g);
        assert_eq!(q, Poly::from_i64(&[-1, 1]));
        assert!(r.is_zero());
        assert_eq!(f.gcd(&Poly::from_i64(&[-1, 1])), Poly::from_i64(&[-1, 1]));
        assert!(f.is_squarefree());
        assert!(!Poly::from_i64(&[1, 2, 1]).is_squarefree());
    }

    proptest! {
        #[test]
        fn polys_annihilate_and_divide(entries in proptest::collection::vec(-3i64..=3, 9)) {
            let rows: Vec<&[i64]> = entries.chunks(3).collect();
            let m = ExactMatrix::from_i64(&rows);
            let (min, ch) = min_char_poly(&m).unwrap();
            prop_assert!(min.eval_matrix(&m).unwrap().is_zero());
            prop_assert!(ch.eval_matrix(&m).unwrap().is_zero());
            prop_assert!(min.is_monic() && ch.is_monic());
            prop_assert_eq!(ch.degree(), Some(3));
            prop_assert!(ch.div_rem(&min).1.is_zero());
            prop_assert_eq!(&ch.coeffs()[0] * crate::exact::rat(-1), m.det().unwrap());
        }
    }
}

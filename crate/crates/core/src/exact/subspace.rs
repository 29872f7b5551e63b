use num_traits::{One, Zero};

use super::Rational;

/// Incrementally built subspace of `Q^dim`, kept in reduced echelon form.
///
/// Each echelon row remembers how it combines the accepted generators, so
/// membership tests also yield coordinates in terms of those generators.
#[derive(Debug, Clone)]
pub struct Subspace {
    dim: usize,
    rows: Vec<Vec<Rational>>,
    combs: Vec<Vec<Rational>>,
    pivots: Vec<usize>,
    generators: Vec<Vec<Rational>>,
}

impl Subspace {
    pub fn new(dim: usize) -> Self {
        Subspace { dim, rows: Vec::new(), combs: Vec::new(), pivots: Vec::new(), generators: Vec::new() }
    }

    pub fn spanned_by<'a>(dim: usize, vectors: impl IntoIterator<Item = &'a Vec<Rational>>) -> Self {
        let mut s = Self::new(dim);
        for v in vectors {
            s.insert(v);
        }
        s
    }

    pub fn ambient_dim(&self) -> usize {
        self.dim
    }

    pub fn dim(&self) -> usize {
        self.rows.len()
    }

    /// The accepted (linearly independent) generators, in insertion order.
    pub fn generators(&self) -> &[Vec<Rational>] {
        &self.generators
    }

    /// Residual of `v` after elimination, and the combination of generators removed.
    fn reduce(&self, v: &[Rational]) -> (Vec<Rational>, Vec<Rational>) {
        let mut r = v.to_vec();
        let mut comb = vec![Rational::zero(); self.generators.len()];
        for ((row, c), &p) in self.rows.iter().zip(&self.combs).zip(&self.pivots) {
            let f = r[p].clone();
            if f.is_zero() {
                continue;
            }
            for (x, y) in r.iter_mut().zip(row) {
                if !y.is_zero() {
                    *x -= &f * y;
                }
            }
            for (x, y) in comb.iter_mut().zip(c) {
                if !y.is_zero() {
                    *x += &f * y;
                }
            }
        }
        (r, comb)
    }

    /// Adds `v` if it is independent; returns whether it was added.
    pub fn insert(&mut self, v: &[Rational]) -> bool {
        assert_eq!(v.len(), self.dim);
        let (mut r, comb) = self.reduce(v);
        let Some(p) = r.iter().position(|x| !x.is_zero()) else {
            return false;
        };
        let g = self.generators.len();
        self.generators.push(v.to_vec());
        for c in &mut self.combs {
            c.push(Rational::zero());
        }
        let mut new_comb: Vec<Rational> = comb.into_iter().map(|x| -x).collect();
        new_comb.push(Rational::one());
        let inv = r[p].recip();
        for x in r.iter_mut() {
            *x *= &inv;
        }
        for x in new_comb.iter_mut() {
            *x *= &inv;
        }
        debug_assert_eq!(new_comb.len(), g + 1);
        for (row, c) in self.rows.iter_mut().zip(self.combs.iter_mut()) {
            let f = row[p].clone();
            if f.is_zero() {
                continue;
            }
            for (x, y) in row.iter_mut().zip(&r) {
                if !y.is_zero() {
                    *x -= &f * y;
                }
            }
            for (x, y) in c.iter_mut().zip(&new_comb) {
                if !y.is_zero() {
                    *x -= &f * y;
                }
            }
        }
        self.rows.push(r);
        self.combs.push(new_comb);
        self.pivots.push(p);
        true
    }

    pub fn contains(&self, v: &[Rational]) -> bool {
        self.reduce(v).0.iter().all(Zero::is_zero)
    }

    /// Coordinates of `v` over the accepted generators, if `v` lies in the span.
    pub fn coords(&self, v: &[Rational]) -> Option<Vec<Rational>> {
        let (r, comb) = self.reduce(v);
        r.iter().all(Zero::is_zero).then_some(comb)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::rat;

    fn v(xs: &[i64]) -> Vec<Rational> {
        xs.iter().map(|&x| rat(x)).collect()
    }

    #[test]
    fn insert_and_coordinates() {
        let mut s = Subspace::new(3);
        assert!(s.insert(&v(&[1, 1, 0])));
        assert!(s.insert(&v(&[0, 2, 1])));
        assert!(!s.insert(&v(&[2, 4, 1])));
        assert_eq!(s.dim(), 2);
        assert_eq!(s.coords(&v(&[3, 5, 1])), Some(v(&[3, 1])));
        assert!(s.coords(&v(&[0, 0, 1])).is_none());
        assert!(s.contains(&v(&[0, 0, 0])));
    }
}

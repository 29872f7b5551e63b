use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

/// Row-style Hermite normal form of an integer lattice.
///
/// Rows are in echelon form with strictly increasing pivot columns, pivots are
/// positive, and every entry above a pivot lies in `[0, pivot)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Hnf {
    pub rows: Vec<Vec<BigInt>>,
    pub pivots: Vec<usize>,
}

impl Hnf {
    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    /// Product of pivots; the covolume when the lattice has full rank.
    pub fn det(&self) -> Option<BigInt> {
        let cols = self.rows.first().map_or(0, Vec::len);
        (self.rank() == cols).then(|| self.rows.iter().enumerate().map(|(i, r)| r[i].clone()).product())
    }

    /// Integer coordinates of `v` in this basis, if `v` is in the lattice.
    pub fn coordinates(&self, v: &[BigInt]) -> Option<Vec<BigInt>> {
        let mut rem = v.to_vec();
        let mut coords = Vec::with_capacity(self.rows.len());
        let mut col = 0;
        for (row, &p) in self.rows.iter().zip(&self.pivots) {
            if rem[col..p].iter().any(|x| !x.is_zero()) {
                return None;
            }
            let (q, r) = rem[p].div_rem(&row[p]);
            if !r.is_zero() {
                return None;
            }
            if !q.is_zero() {
                for (x, y) in rem.iter_mut().zip(row) {
                    *x -= &q * y;
                }
            }
            coords.push(q);
            col = p + 1;
        }
        rem.iter().all(Zero::is_zero).then_some(coords)
    }

    pub fn contains(&self, v: &[BigInt]) -> bool {
        self.coordinates(v).is_some()
    }
}

/// Hermite normal form and determinant of the lattice spanned by `rows`.
///
/// The determinant is the product of the pivots and is only reported when the
/// rows span a lattice of full rank.
pub fn hnf_and_det(rows: &[Vec<BigInt>]) -> (Hnf, Option<BigInt>) {
    let h = hnf(rows);
    let d = h.det();
    (h, d)
}

pub(crate) fn hnf(rows: &[Vec<BigInt>]) -> Hnf {
    let cols = rows.first().map_or(0, Vec::len);
    let mut by_pivot: Vec<Option<Vec<BigInt>>> = vec![None; cols];
    for (inserted, v) in rows.iter().enumerate() {
        insert(&mut by_pivot, v.clone());
        if inserted % 32 == 31 {
            reduce(&mut by_pivot);
        }
    }
    reduce(&mut by_pivot);
    let mut out = Hnf { rows: Vec::new(), pivots: Vec::new() };
    for (c, r) in by_pivot.into_iter().enumerate() {
        if let Some(r) = r {
            out.rows.push(r);
            out.pivots.push(c);
        }
    }
    out
}

fn insert(by_pivot: &mut [Option<Vec<BigInt>>], mut v: Vec<BigInt>) {
    let cols = v.len();
    for c in 0..cols {
        if v[c].is_zero() {
            continue;
        }
        match &mut by_pivot[c] {
            slot @ None => {
                if v[c].is_negative() {
                    v.iter_mut().for_each(|x| *x = -&*x);
                }
                *slot = Some(v);
                return;
            }
            Some(row) => {
                let ext = row[c].extended_gcd(&v[c]);
                let (g, a, b) = (ext.gcd, ext.x, ext.y);
                let rc = &row[c] / &g;
                let vc = &v[c] / &g;
                let new_row: Vec<BigInt> = row.iter().zip(&v).map(|(r, x)| &a * r + &b * x).collect();
                let new_v: Vec<BigInt> = row.iter().zip(&v).map(|(r, x)| &vc * r - &rc * x).collect();
                *row = new_row;
                if row[c].is_negative() {
                    row.iter_mut().for_each(|x| *x = -&*x);
                }
                v = new_v;
                debug_assert!(v[c].is_zero());
            }
        }
    }
}

fn reduce(by_pivot: &mut [Option<Vec<BigInt>>]) {
    let cols = by_pivot.len();
    for c in 0..cols {
        let Some(pivot_row) = by_pivot[c].clone() else { continue };
        let p = &pivot_row[c];
        for r in by_pivot[..c].iter_mut().flatten() {
            let q = r[c].div_floor(p);
            if !q.is_zero() {
                for (x, y) in r.iter_mut().zip(&pivot_row) {
                    *x -= &q * y;
                }
            }
        }
    }
    debug_assert!(by_pivot
        .iter()
        .enumerate()
        .all(|(c, r)| r.as_ref().is_none_or(|r| r[c].is_positive() || r[c].is_one())));
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(xs: &[i64]) -> Vec<BigInt> {
        xs.iter().map(|&x| BigInt::from(x)).collect()
    }

    /// Brute-force membership: vectors with coordinates in [-2, 2] that are
    /// integer combinations (coefficients in [-4, 4]) of the generators.
    fn members(gens: &[Vec<BigInt>]) -> Vec<Vec<i64>> {
        let mut out = Vec::new();
        let k = gens.len();
        let mut coeff = vec![-4i64; k];
        loop {
            let mut x = vec![0i64; 2];
            for (c, g) in coeff.iter().zip(gens) {
                for (xi, gi) in x.iter_mut().zip(g) {
                    *xi += c * i64::try_from(gi).unwrap();
                }
            }
            if x.iter().all(|t| t.abs() <= 2) && !out.contains(&x) {
                out.push(x);
            }
            let mut i = 0;
            while i < k {
                coeff[i] += 1;
                if coeff[i] <= 4 {
                    break;
                }
                coeff[i] = -4;
                i += 1;
            }
            if i == k {
                break;
            }
        }
        out.sort();
        out
    }

    #[test]
    fn hnf_of_even_sum_lattice() {
        let gens = vec![v(&[2, 0]), v(&[0, 2]), v(&[1, 1])];
        let (h, det) = hnf_and_det(&gens);
        assert_eq!(h.rows, vec![v(&[1, 1]), v(&[0, 2])]);
        assert_eq!(det, Some(BigInt::from(2)));
        assert_eq!(members(&gens), members(&h.rows));
    }

    #[test]
    fn hnf_identity_and_deficient() {
        let (h, det) = hnf_and_det(&[v(&[1, 0]), v(&[0, 1])]);
        assert_eq!(h.rows, vec![v(&[1, 0]), v(&[0, 1])]);
        assert_eq!(det, Some(BigInt::one()));
        let (h, det) = hnf_and_det(&[v(&[2, 0])]);
        assert_eq!(h.rows, vec![v(&[2, 0])]);
        assert_eq!(h.rank(), 1);
        assert_eq!(det, None);
    }

    #[test]
    fn coordinates_and_membership() {
        let (h, _) = hnf_and_det(&[v(&[2, 0]), v(&[0, 2]), v(&[1, 1])]);
        assert!(h.contains(&v(&[3, 1])));
        assert!(!h.contains(&v(&[1, 0])));
        let c = h.coordinates(&v(&[3, -1])).unwrap();
        assert_eq!(c, v(&[3, -2]));
    }
}

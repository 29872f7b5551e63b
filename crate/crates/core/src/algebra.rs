//! Finite-dimensional associative algebras over `K` given by structure constants.
//!
//! Internally every algebra is also viewed over `Q` by restriction of scalars:
//! with integral basis `omega_0..omega_{d-1}` of `K` and `K`-basis
//! `a_0..a_{m-1}` of `A`, the `Q`-basis element `omega_l * a_j` sits at index
//! `j * d + l`. Vectors in this flattened layout are called *q-vectors*.

use num_bigint::BigInt;
use num_integer::Roots;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::exact::{solve_and_kernel, ExactMatrix, Rational, Subspace};
use crate::numfield::{FieldElement, NumberField};

/// Element of `A` as `K`-coordinates over the basis.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct AlgebraElement {
    pub coords: Vec<FieldElement>,
}

impl AlgebraElement {
    pub fn new(coords: Vec<FieldElement>) -> Self {
        AlgebraElement { coords }
    }

    pub fn dim(&self) -> usize {
        self.coords.len()
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(FieldElement::is_zero)
    }
}

/// Rectangular matrix over `K`, row-major.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct KMatrix {
    pub rows: usize,
    pub cols: usize,
    pub entries: Vec<FieldElement>,
}

impl KMatrix {
    pub fn zeros(field: &NumberField, rows: usize, cols: usize) -> Self {
        KMatrix { rows, cols, entries: vec![field.zero(); rows * cols] }
    }

    pub fn identity(field: &NumberField, n: usize) -> Self {
        let mut m = Self::zeros(field, n, n);
        for i in 0..n {
            m.entries[i * n + i] = field.one();
        }
        m
    }

    /// Matrix with rational entries embedded in `K`.
    pub fn from_rationals(field: &NumberField, rows: usize, cols: usize, xs: &[Rational]) -> Self {
        assert_eq!(xs.len(), rows * cols);
        KMatrix { rows, cols, entries: xs.iter().map(|x| field.from_rational(x)).collect() }
    }

    pub fn get(&self, i: usize, j: usize) -> &FieldElement {
        &self.entries[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: FieldElement) {
        self.entries[i * self.cols + j] = v;
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(FieldElement::is_zero)
    }

    pub fn mul(&self, field: &NumberField, other: &KMatrix) -> KMatrix {
        assert_eq!(self.cols, other.rows);
        let mut out = Self::zeros(field, self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = other.get(k, j);
                    if !b.is_zero() {
                        let idx = i * other.cols + j;
                        out.entries[idx] = field.add(&out.entries[idx], &field.mul(a, b));
                    }
                }
            }
        }
        out
    }

    pub fn add(&self, field: &NumberField, other: &KMatrix) -> KMatrix {
        let entries = self.entries.iter().zip(&other.entries).map(|(a, b)| field.add(a, b)).collect();
        KMatrix { rows: self.rows, cols: self.cols, entries }
    }

    pub fn sub(&self, field: &NumberField, other: &KMatrix) -> KMatrix {
        let entries = self.entries.iter().zip(&other.entries).map(|(a, b)| field.sub(a, b)).collect();
        KMatrix { rows: self.rows, cols: self.cols, entries }
    }

    pub fn scale(&self, field: &NumberField, c: &FieldElement) -> KMatrix {
        KMatrix { rows: self.rows, cols: self.cols, entries: self.entries.iter().map(|a| field.mul(a, c)).collect() }
    }

    /// Entries flattened into the q-vector layout (entry-major, `d` rationals each).
    pub fn to_q(&self) -> Vec<Rational> {
        self.entries.iter().flat_map(|e| e.coords.iter().cloned()).collect()
    }

    pub fn from_q(rows: usize, cols: usize, d: usize, q: &[Rational]) -> KMatrix {
        KMatrix { rows, cols, entries: q.chunks(d).map(|c| FieldElement::new(c.to_vec())).collect() }
    }

    /// Rank over `K`, computed over `Q` after restriction of scalars.
    pub fn rank(&self, field: &NumberField) -> usize {
        let d = field.degree();
        let mut s = Subspace::new(self.cols * d);
        for i in 0..self.rows {
            for l in 0..d {
                let w = omega(field, l);
                let row: Vec<Rational> =
                    (0..self.cols).flat_map(|j| field.mul(&w, self.get(i, j)).coords).collect();
                s.insert(&row);
            }
        }
        s.dim() / d
    }
}

fn omega(field: &NumberField, l: usize) -> FieldElement {
    let mut c = vec![Rational::zero(); field.degree()];
    c[l] = Rational::one();
    FieldElement::new(c)
}

/// Multiplies every `d`-block of a q-vector by the scalar `c`.
pub fn k_scale_q(field: &NumberField, c: &FieldElement, x: &[Rational]) -> Vec<Rational> {
    let d = field.degree();
    if d == 1 {
        return x.iter().map(|v| v * &c.coords[0]).collect();
    }
    x.chunks(d).flat_map(|blk| field.mul(c, &FieldElement::new(blk.to_vec())).coords).collect()
}

/// `K`-subspace of a q-vector space, stored as the `Q`-span of `omega_l * v`.
#[derive(Debug, Clone)]
pub struct KSubspace {
    field: NumberField,
    inner: Subspace,
    basis: Vec<Vec<Rational>>,
}

impl KSubspace {
    pub fn new(field: &NumberField, qdim: usize) -> Self {
        KSubspace { field: field.clone(), inner: Subspace::new(qdim), basis: Vec::new() }
    }

    /// Adds `v` when it is `K`-independent of the current span.
    pub fn insert(&mut self, v: &[Rational]) -> bool {
        if self.inner.contains(v) {
            return false;
        }
        for l in 0..self.field.degree() {
            let w = k_scale_q(&self.field, &omega(&self.field, l), v);
            let added = self.inner.insert(&w);
            debug_assert!(added);
        }
        self.basis.push(v.to_vec());
        true
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[Vec<Rational>] {
        &self.basis
    }

    pub fn contains(&self, v: &[Rational]) -> bool {
        self.inner.contains(v)
    }

    /// `K`-coordinates of `v` over the accepted basis.
    pub fn coords(&self, v: &[Rational]) -> Option<Vec<FieldElement>> {
        let d = self.field.degree();
        let q = self.inner.coords(v)?;
        Some(q.chunks(d).map(|c| FieldElement::new(c.to_vec())).collect())
    }
}

/// A structure-constant algebra over `K`.
#[derive(Debug, Clone)]
pub struct StructureAlgebra {
    field: NumberField,
    m: usize,
    table: Vec<Vec<Vec<FieldElement>>>,
    qdim: usize,
    /// Sparse products of q-basis elements: `qmul[I * qdim + J]` lists `(K, c)`.
    qmul: Vec<Vec<(usize, Rational)>>,
    identity: Vec<Rational>,
    n: Option<usize>,
}

impl StructureAlgebra {
    /// Validates the table (shape, associativity, identity) and builds the algebra.
    pub fn new(field: &NumberField, table: Vec<Vec<Vec<FieldElement>>>) -> Result<Self> {
        Self::with_options(field, table, true)
    }

    /// As [`StructureAlgebra::new`]; `check_associativity = false` skips the
    /// `O(m^3)` associativity scan for trusted inputs.
    pub fn with_options(
        field: &NumberField,
        table: Vec<Vec<Vec<FieldElement>>>,
        check_associativity: bool,
    ) -> Result<Self> {
        let m = table.len();
        let d = field.degree();
        if m == 0 {
            return Err(Error::DimensionMismatch("algebra of dimension 0".into()));
        }
        for row in &table {
            if row.len() != m || row.iter().any(|v| v.len() != m || v.iter().any(|c| c.degree() != d)) {
                return Err(Error::DimensionMismatch(format!(
                    "structure constants must be {m}x{m}x{m} field elements of degree {d}"
                )));
            }
        }
        let qdim = m * d;
        let mut qmul = vec![Vec::new(); qdim * qdim];
        for i in 0..m {
            for j in 0..m {
                for l in 0..d {
                    for k in 0..d {
                        let w = field.mul(&omega(field, l), &omega(field, k));
                        let entry = &mut qmul[(i * d + l) * qdim + (j * d + k)];
                        for t in 0..m {
                            let g = &table[i][j][t];
                            if g.is_zero() {
                                continue;
                            }
                            for (q, c) in field.mul(&w, g).coords.into_iter().enumerate() {
                                if !c.is_zero() {
                                    entry.push((t * d + q, c));
                                }
                            }
                        }
                    }
                }
            }
        }
        let r = m.sqrt();
        let mut alg = StructureAlgebra {
            field: field.clone(),
            m,
            table,
            qdim,
            qmul,
            identity: Vec::new(),
            n: (r * r == m).then_some(r),
        };
        if check_associativity {
            for i in 0..m {
                let ai = alg.basis_q(i);
                for j in 0..m {
                    let aij = alg.mul_q(&ai, &alg.basis_q(j));
                    for k in 0..m {
                        let ak = alg.basis_q(k);
                        let lhs = alg.mul_q(&aij, &ak);
                        let rhs = alg.mul_q(&ai, &alg.mul_q(&alg.basis_q(j), &ak));
                        if lhs != rhs {
                            return Err(Error::NotAssociative(i, j, k));
                        }
                    }
                }
            }
        }
        alg.identity = alg.solve_identity()?;
        Ok(alg)
    }

    fn solve_identity(&self) -> Result<Vec<Rational>> {
        let n = self.qdim;
        let mut rows = Vec::with_capacity(2 * n * n);
        let mut rhs = Vec::with_capacity(2 * n * n);
        for j in 0..n {
            let mut left = vec![vec![Rational::zero(); n]; n];
            let mut right = vec![vec![Rational::zero(); n]; n];
            for i in 0..n {
                for (k, c) in &self.qmul[i * n + j] {
                    left[*k][i] += c;
                }
                for (k, c) in &self.qmul[j * n + i] {
                    right[*k][i] += c;
                }
            }
            for k in 0..n {
                let target = if k == j { Rational::one() } else { Rational::zero() };
                rows.push(std::mem::take(&mut left[k]));
                rhs.push(vec![target.clone()]);
                rows.push(std::mem::take(&mut right[k]));
                rhs.push(vec![target]);
            }
        }
        let sol = solve_and_kernel(&ExactMatrix::from_rows(&rows)?, Some(&ExactMatrix::from_rows(&rhs)?))?;
        sol.particular.map(|p| p.col(0)).ok_or(Error::NoIdentity)
    }

    /// The full matrix algebra `M_n(K)` on the basis `E_ij` at index `i*n + j`.
    pub fn matrix_algebra(field: &NumberField, n: usize) -> Self {
        let m = n * n;
        let mut table = vec![vec![vec![field.zero(); m]; m]; m];
        for i in 0..n {
            for j in 0..n {
                for l in 0..n {
                    table[i * n + j][j * n + l][i * n + l] = field.one();
                }
            }
        }
        Self::with_options(field, table, false).expect("matrix algebra is valid")
    }

    /// Quaternion algebra `(a, b)_K` on `{1, i, j, ij}` with `i^2 = a`, `j^2 = b`, `ji = -ij`.
    pub fn quaternion(field: &NumberField, a: &FieldElement, b: &FieldElement) -> Result<Self> {
        let z = field.zero();
        let one = field.one();
        let ab = field.mul(a, b);
        let neg = |x: &FieldElement| field.neg(x);
        let e = |k: usize, c: FieldElement| {
            let mut v = vec![z.clone(); 4];
            v[k] = c;
            v
        };
        let table = vec![
            vec![e(0, one.clone()), e(1, one.clone()), e(2, one.clone()), e(3, one.clone())],
            vec![e(1, one.clone()), e(0, a.clone()), e(3, one.clone()), e(2, a.clone())],
            vec![e(2, one.clone()), e(3, neg(&one)), e(0, b.clone()), e(1, neg(b))],
            vec![e(3, one.clone()), e(2, neg(a)), e(1, b.clone()), e(0, neg(&ab))],
        ];
        Self::new(field, table)
    }

    /// Algebra of the `K`-span of the given `n x n` matrices (which must be
    /// `K`-independent and closed under multiplication), on that basis.
    pub fn from_matrices(field: &NumberField, mats: &[KMatrix]) -> Result<Self> {
        let m = mats.len();
        let qlen = mats.first().map_or(0, |x| x.entries.len()) * field.degree();
        let mut span = KSubspace::new(field, qlen);
        for x in mats {
            if !span.insert(&x.to_q()) {
                return Err(Error::Structural("matrices are linearly dependent".into()));
            }
        }
        let mut table = vec![vec![Vec::new(); m]; m];
        for i in 0..m {
            for j in 0..m {
                let p = mats[i].mul(field, &mats[j]);
                table[i][j] = span
                    .coords(&p.to_q())
                    .ok_or_else(|| Error::Structural("matrix span is not closed under multiplication".into()))?;
            }
        }
        Self::with_options(field, table, false)
    }

    pub fn field(&self) -> &NumberField {
        &self.field
    }

    /// Dimension over `K`.
    pub fn dim(&self) -> usize {
        self.m
    }

    /// Dimension over `Q`.
    pub fn qdim(&self) -> usize {
        self.qdim
    }

    /// `sqrt(dim)` when the dimension is a perfect square.
    pub fn n(&self) -> Option<usize> {
        self.n
    }

    pub fn require_n(&self) -> Result<usize> {
        self.n.ok_or(Error::NotPerfectSquare(self.m))
    }

    pub fn table(&self) -> &[Vec<Vec<FieldElement>>] {
        &self.table
    }

    pub fn to_q(&self, x: &AlgebraElement) -> Vec<Rational> {
        x.coords.iter().flat_map(|c| c.coords.iter().cloned()).collect()
    }

    pub fn from_q(&self, q: &[Rational]) -> AlgebraElement {
        AlgebraElement::new(q.chunks(self.field.degree()).map(|c| FieldElement::new(c.to_vec())).collect())
    }

    pub fn zero(&self) -> AlgebraElement {
        AlgebraElement::new(vec![self.field.zero(); self.m])
    }

    pub fn identity(&self) -> AlgebraElement {
        self.from_q(&self.identity)
    }

    pub fn identity_q(&self) -> &[Rational] {
        &self.identity
    }

    pub fn basis_element(&self, i: usize) -> AlgebraElement {
        let mut x = self.zero();
        x.coords[i] = self.field.one();
        x
    }

    /// q-vector of the `K`-basis element `a_i` (that is, `1 * a_i`).
    pub fn basis_q(&self, i: usize) -> Vec<Rational> {
        let d = self.field.degree();
        let mut v = vec![Rational::zero(); self.qdim];
        v[i * d..(i + 1) * d].clone_from_slice(self.field.one_coords());
        v
    }

    /// Unit q-vector `e_I`, the `Q`-basis element `omega_l * a_j` for `I = j*d + l`.
    pub fn unit_q(&self, idx: usize) -> Vec<Rational> {
        let mut v = vec![Rational::zero(); self.qdim];
        v[idx] = Rational::one();
        v
    }

    pub fn mul_q(&self, x: &[Rational], y: &[Rational]) -> Vec<Rational> {
        let n = self.qdim;
        let mut out = vec![Rational::zero(); n];
        for (i, xi) in x.iter().enumerate() {
            if xi.is_zero() {
                continue;
            }
            for (j, yj) in y.iter().enumerate() {
                if yj.is_zero() {
                    continue;
                }
                let entry = &self.qmul[i * n + j];
                if entry.is_empty() {
                    continue;
                }
                let xy = xi * yj;
                for (k, c) in entry {
                    out[*k] += &xy * c;
                }
            }
        }
        out
    }

    pub fn mul(&self, x: &AlgebraElement, y: &AlgebraElement) -> AlgebraElement {
        self.from_q(&self.mul_q(&self.to_q(x), &self.to_q(y)))
    }

    pub fn add(&self, x: &AlgebraElement, y: &AlgebraElement) -> AlgebraElement {
        AlgebraElement::new(x.coords.iter().zip(&y.coords).map(|(a, b)| self.field.add(a, b)).collect())
    }

    pub fn sub(&self, x: &AlgebraElement, y: &AlgebraElement) -> AlgebraElement {
        AlgebraElement::new(x.coords.iter().zip(&y.coords).map(|(a, b)| self.field.sub(a, b)).collect())
    }

    pub fn scale(&self, c: &FieldElement, x: &AlgebraElement) -> AlgebraElement {
        AlgebraElement::new(x.coords.iter().map(|a| self.field.mul(c, a)).collect())
    }

    /// Integer structure constants of the q-basis products, as `(K, c)` lists.
    pub fn q_products(&self, i: usize, j: usize) -> &[(usize, Rational)] {
        &self.qmul[i * self.qdim + j]
    }

    /// `Q`-matrix of `z -> x*z` (column convention: `L(x) * z = x*z`).
    pub fn left_regular_q(&self, x: &[Rational]) -> ExactMatrix {
        let n = self.qdim;
        let mut m = ExactMatrix::zeros(n, n);
        for (i, xi) in x.iter().enumerate() {
            if xi.is_zero() {
                continue;
            }
            for j in 0..n {
                for (k, c) in &self.qmul[i * n + j] {
                    m[(*k, j)] += xi * c;
                }
            }
        }
        m
    }

    /// `Q`-matrix of `z -> z*y` (column convention).
    pub fn right_regular_q(&self, y: &[Rational]) -> ExactMatrix {
        let n = self.qdim;
        let mut m = ExactMatrix::zeros(n, n);
        for (j, yj) in y.iter().enumerate() {
            if yj.is_zero() {
                continue;
            }
            for i in 0..n {
                for (k, c) in &self.qmul[i * n + j] {
                    m[(*k, i)] += yj * c;
                }
            }
        }
        m
    }

    /// Matrix over `K` of `a -> y*a` in the basis (column `j` holds `y*a_j`).
    pub fn left_regular_matrix(&self, y: &AlgebraElement) -> KMatrix {
        let yq = self.to_q(y);
        let mut out = KMatrix::zeros(&self.field, self.m, self.m);
        for j in 0..self.m {
            let p = self.from_q(&self.mul_q(&yq, &self.basis_q(j)));
            for (i, c) in p.coords.into_iter().enumerate() {
                out.set(i, j, c);
            }
        }
        out
    }

    /// `dim_K(A*y)`.
    pub fn left_ideal_dim_q(&self, y: &[Rational]) -> usize {
        self.right_regular_q(y).rank() / self.field.degree()
    }

    /// Matrix rank of `y` under any isomorphism `A -> M_n(K)`.
    pub fn rank_of_element(&self, y: &AlgebraElement) -> Result<usize> {
        self.rank_of_q(&self.to_q(y))
    }

    pub fn rank_of_q(&self, y: &[Rational]) -> Result<usize> {
        let n = self.require_n()?;
        let dim = self.left_ideal_dim_q(y);
        if !dim.is_multiple_of(n) {
            return Err(Error::Structural(format!(
                "left ideal of dimension {dim} is not a multiple of {n}; the algebra is not a full matrix algebra"
            )));
        }
        Ok(dim / n)
    }

    /// Exact zero-divisor test: the regular representation is singular.
    pub fn is_zero_divisor_q(&self, y: &[Rational]) -> bool {
        self.left_regular_q(y).rank() < self.qdim
    }

    pub fn is_zero_divisor(&self, y: &AlgebraElement) -> bool {
        self.is_zero_divisor_q(&self.to_q(y))
    }

    /// `Q`-basis of the left ideal `A*y`.
    pub fn left_ideal_basis_q(&self, y: &[Rational]) -> Vec<Vec<Rational>> {
        let mut s = Subspace::new(self.qdim);
        for i in 0..self.qdim {
            s.insert(&self.mul_q(&self.unit_q(i), y));
        }
        s.generators().to_vec()
    }

    /// The idempotent `e` in `A*y` with `z*e = z` for every `z` in `A*y`.
    pub fn right_identity_of_left_ideal(&self, y: &AlgebraElement) -> Result<AlgebraElement> {
        Ok(self.from_q(&self.right_identity_q(&self.to_q(y))?))
    }

    pub fn right_identity_q(&self, y: &[Rational]) -> Result<Vec<Rational>> {
        let w = self.left_ideal_basis_q(y);
        if w.is_empty() {
            return Err(Error::Structural("left ideal of zero has no identity".into()));
        }
        let dim = w.len();
        let n = self.qdim;
        let mut rows = Vec::with_capacity(dim * n);
        let mut rhs = Vec::with_capacity(dim * n);
        for wj in &w {
            let prods: Vec<Vec<Rational>> = w.iter().map(|wk| self.mul_q(wj, wk)).collect();
            for t in 0..n {
                rows.push(prods.iter().map(|p| p[t].clone()).collect::<Vec<_>>());
                rhs.push(vec![wj[t].clone()]);
            }
        }
        let sol = solve_and_kernel(&ExactMatrix::from_rows(&rows)?, Some(&ExactMatrix::from_rows(&rhs)?))?;
        let c = sol
            .particular
            .ok_or_else(|| Error::Structural("left ideal has no right identity".into()))?
            .col(0);
        let mut e = vec![Rational::zero(); n];
        for (ck, wk) in c.iter().zip(&w) {
            for (x, y) in e.iter_mut().zip(wk) {
                *x += ck * y;
            }
        }
        Ok(e)
    }

    /// The corner algebra `eAe` for an idempotent `e`.
    pub fn corner_algebra(&self, e: &AlgebraElement) -> Result<Corner> {
        let eq = self.to_q(e);
        if e.is_zero() || self.mul_q(&eq, &eq) != eq {
            return Err(Error::Structural("corner algebra needs a nonzero idempotent".into()));
        }
        let mut span = KSubspace::new(&self.field, self.qdim);
        for i in 0..self.m {
            let v = self.mul_q(&self.mul_q(&eq, &self.basis_q(i)), &eq);
            span.insert(&v);
        }
        let basis = span.basis().to_vec();
        let k = basis.len();
        let mut table = vec![vec![Vec::new(); k]; k];
        for i in 0..k {
            for j in 0..k {
                table[i][j] = span
                    .coords(&self.mul_q(&basis[i], &basis[j]))
                    .ok_or_else(|| Error::Structural("corner is not closed under multiplication".into()))?;
            }
        }
        let algebra = StructureAlgebra::with_options(&self.field, table, false)?;
        Ok(Corner { algebra, basis, span })
    }
}

/// `eAe` as an algebra in its own right, with maps to and from `A`.
#[derive(Debug, Clone)]
pub struct Corner {
    pub algebra: StructureAlgebra,
    /// q-vectors in `A` of the corner's `K`-basis.
    pub basis: Vec<Vec<Rational>>,
    span: KSubspace,
}

impl Corner {
    /// Inclusion `eAe -> A` on q-vectors.
    pub fn include_q(&self, x: &[Rational]) -> Vec<Rational> {
        let field = self.algebra.field();
        let d = field.degree();
        let mut out = vec![Rational::zero(); self.basis.first().map_or(0, Vec::len)];
        for (blk, b) in x.chunks(d).zip(&self.basis) {
            let c = FieldElement::new(blk.to_vec());
            if c.is_zero() {
                continue;
            }
            for (o, v) in out.iter_mut().zip(k_scale_q(field, &c, b)) {
                *o += v;
            }
        }
        out
    }

    pub fn include(&self, outer: &StructureAlgebra, x: &AlgebraElement) -> AlgebraElement {
        outer.from_q(&self.include_q(&self.algebra.to_q(x)))
    }

    /// Coordinates in `eAe` of an element of `A` lying in the corner.
    pub fn section_q(&self, x: &[Rational]) -> Option<Vec<Rational>> {
        Some(self.span.coords(x)?.into_iter().flat_map(|c| c.coords).collect())
    }
}

/// Rows of a rational matrix, each scaled by its own denominator lcm.
pub fn integral_rows(m: &ExactMatrix) -> Vec<Vec<BigInt>> {
    (0..m.rows()).map(|r| crate::exact::clear_denominators(m.row(r)).0).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::rat;

    fn q() -> NumberField {
        NumberField::rationals()
    }

    fn elem(a: &StructureAlgebra, xs: &[i64]) -> AlgebraElement {
        AlgebraElement::new(xs.iter().map(|&x| a.field().from_rational(&rat(x))).collect())
    }

    #[test]
    fn matrix_algebra_identity_and_ranks() {
        let a = StructureAlgebra::matrix_algebra(&q(), 2);
        assert_eq!(a.identity(), elem(&a, &[1, 0, 0, 1]));
        assert_eq!(a.n(), Some(2));
        assert_eq!(a.rank_of_element(&elem(&a, &[1, 0, 0, 0])).unwrap(), 1);
        assert_eq!(a.rank_of_element(&a.identity()).unwrap(), 2);
        assert_eq!(a.rank_of_element(&a.zero()).unwrap(), 0);
        assert!(a.is_zero_divisor(&elem(&a, &[0, 1, 0, 0])));
        assert!(!a.is_zero_divisor(&elem(&a, &[1, 1, 0, 1])));
    }

    #[test]
    fn regular_matrices() {
        let a = StructureAlgebra::matrix_algebra(&q(), 2);
        let f = a.field().clone();
        assert_eq!(a.left_regular_matrix(&a.identity()), KMatrix::identity(&f, 4));
        assert!(a.left_regular_matrix(&a.zero()).is_zero());
        let l = a.left_regular_matrix(&elem(&a, &[1, 0, 0, 0]));
        assert_eq!(l.rank(&f), 2);
        assert_eq!(l.mul(&f, &l), l);
    }

    #[test]
    fn associativity_violation_reported() {
        let a = StructureAlgebra::matrix_algebra(&q(), 2);
        let mut table = a.table().to_vec();
        // Perturb E12 * E21 = E11 to E12 * E21 = E11 + E22.
        table[1][2][3] = a.field().one();
        assert!(matches!(StructureAlgebra::new(a.field(), table), Err(Error::NotAssociative(..))));
    }

    #[test]
    fn commutative_non_square_dimension() {
        let f = q();
        let e = |i: usize| {
            let mut v = vec![f.zero(); 3];
            v[i] = f.one();
            v
        };
        let z = vec![f.zero(); 3];
        let table = (0..3).map(|i| (0..3).map(|j| if i == j { e(i) } else { z.clone() }).collect()).collect();
        let a = StructureAlgebra::new(&f, table).unwrap();
        assert_eq!(a.n(), None);
        assert_eq!(a.identity(), elem(&a, &[1, 1, 1]));
        assert!(matches!(a.rank_of_element(&a.identity()), Err(Error::NotPerfectSquare(3))));
    }

    #[test]
    fn no_identity_rejected() {
        let f = q();
        let table = vec![vec![vec![f.zero()]]];
        assert!(matches!(StructureAlgebra::new(&f, table), Err(Error::NoIdentity)));
    }

    #[test]
    fn right_identities() {
        let a = StructureAlgebra::matrix_algebra(&q(), 2);
        let e11 = elem(&a, &[1, 0, 0, 0]);
        assert_eq!(a.right_identity_of_left_ideal(&e11).unwrap(), e11);
        assert_eq!(a.right_identity_of_left_ideal(&a.identity()).unwrap(), a.identity());
        let e = a.right_identity_of_left_ideal(&elem(&a, &[0, 1, 0, 0])).unwrap();
        assert_eq!(a.mul(&e, &e), e);
        assert_eq!(a.rank_of_element(&e).unwrap(), 1);
    }

    #[test]
    fn corners() {
        let a = StructureAlgebra::matrix_algebra(&q(), 2);
        let c = a.corner_algebra(&a.identity()).unwrap();
        assert_eq!(c.algebra.dim(), 4);
        let c = a.corner_algebra(&elem(&a, &[1, 0, 0, 0])).unwrap();
        assert_eq!(c.algebra.dim(), 1);
        assert_eq!(c.include(&a, &c.algebra.identity()), elem(&a, &[1, 0, 0, 0]));
        assert!(a.corner_algebra(&elem(&a, &[2, 0, 0, 0])).is_err());

        let a3 = StructureAlgebra::matrix_algebra(&q(), 3);
        let e = elem(&a3, &[1, 0, 0, 0, 1, 0, 0, 0, 0]);
        let c = a3.corner_algebra(&e).unwrap();
        assert_eq!(c.algebra.dim(), 4);
        assert_eq!(c.algebra.n(), Some(2));
        let f = a3.sub(&a3.identity(), &e);
        assert_eq!(a3.rank_of_element(&e).unwrap() + a3.rank_of_element(&f).unwrap(), 3);
    }

    #[test]
    fn quaternions_are_division() {
        let f = q();
        let h = StructureAlgebra::quaternion(&f, &f.from_rational(&rat(-1)), &f.from_rational(&rat(-1))).unwrap();
        assert_eq!(h.identity(), elem(&h, &[1, 0, 0, 0]));
        for x in [[1, 1, 0, 0], [0, 1, 2, 3], [1, -1, 1, -1]] {
            assert!(!h.is_zero_divisor(&elem(&h, &x)));
        }
        let split = StructureAlgebra::quaternion(&f, &f.from_rational(&rat(1)), &f.from_rational(&rat(-1))).unwrap();
        assert!(split.is_zero_divisor(&elem(&split, &[1, 1, 0, 0])));
    }

    #[test]
    fn algebra_over_quadratic_field() {
        let k = NumberField::quadratic(5).unwrap();
        let a = StructureAlgebra::matrix_algebra(&k, 2);
        assert_eq!(a.qdim(), 8);
        let sqrt5 = k.from_power_basis(&[rat(0), rat(1)]);
        let x = a.scale(&sqrt5, &a.basis_element(0));
        assert_eq!(a.rank_of_element(&x).unwrap(), 1);
        assert_eq!(a.rank_of_element(&a.add(&x, &a.basis_element(3))).unwrap(), 2);
        let e = a.right_identity_of_left_ideal(&x).unwrap();
        assert_eq!(e, a.basis_element(0));
    }
}

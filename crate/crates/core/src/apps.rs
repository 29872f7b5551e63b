//! Applications of splitting: isomorphisms between two central simple
//! algebras, small zero divisors and quadratic norm equations.

use num_bigint::BigInt;
use num_traits::{Signed, Zero};

use crate::algebra::{AlgebraElement, KMatrix, KSubspace, StructureAlgebra};
use crate::error::{Error, Result};
use crate::exact::Rational;
use crate::numfield::{FieldElement, NumberField};
use crate::splitter::{search_zero_divisor, split, SplitConfig, SplitReport, ZeroDivisorReport};

/// `A (x) B^op` on the basis `a_i (x) b_j` at index `i*m + j`.
pub fn tensor_with_opposite(a: &StructureAlgebra, b: &StructureAlgebra) -> Result<StructureAlgebra> {
    let field = a.field();
    let m = a.dim();
    let mb = b.dim();
    let mut table = vec![vec![vec![field.zero(); m * mb]; m * mb]; m * mb];
    for i in 0..m {
        for j in 0..mb {
            for k in 0..m {
                for l in 0..mb {
                    let row = &mut table[i * mb + j][k * mb + l];
                    for (p, ca) in a.table()[i][k].iter().enumerate() {
                        if ca.is_zero() {
                            continue;
                        }
                        for (q, cb) in b.table()[l][j].iter().enumerate() {
                            if !cb.is_zero() {
                                row[p * mb + q] = field.add(&row[p * mb + q], &field.mul(ca, cb));
                            }
                        }
                    }
                }
            }
        }
    }
    StructureAlgebra::with_options(field, table, false)
}

fn kmat_vec(field: &NumberField, m: &KMatrix, v: &[FieldElement]) -> Vec<FieldElement> {
    (0..m.rows)
        .map(|i| {
            (0..m.cols).fold(field.zero(), |acc, j| {
                let a = m.get(i, j);
                if a.is_zero() || v[j].is_zero() {
                    acc
                } else {
                    field.add(&acc, &field.mul(a, &v[j]))
                }
            })
        })
        .collect()
}

fn flat(v: &[FieldElement]) -> Vec<Rational> {
    v.iter().flat_map(|x| x.coords.iter().cloned()).collect()
}

fn combine_matrices(field: &NumberField, coeffs: &[FieldElement], mats: &[KMatrix]) -> KMatrix {
    let size = mats[0].rows;
    let mut out = KMatrix::zeros(field, size, size);
    for (c, m) in coeffs.iter().zip(mats) {
        if !c.is_zero() {
            out = out.add(field, &m.scale(field, c));
        }
    }
    out
}

/// `V = (A (x) B^op) C`, a left `A`-module and right `B`-module of dimension `n^2`.
#[derive(Debug, Clone)]
pub struct ModuleOverPair {
    field: NumberField,
    /// Matrices of `x -> a_i x`.
    pub left: Vec<KMatrix>,
    /// Matrices of `x -> x b_j`.
    pub right: Vec<KMatrix>,
    pub v: Vec<FieldElement>,
    pub left_rank: usize,
    pub right_rank: usize,
}

impl ModuleOverPair {
    pub fn new(field: &NumberField, left: Vec<KMatrix>, right: Vec<KMatrix>) -> Result<Self> {
        let dim = left.first().map_or(0, |x| x.rows);
        let mut v = vec![field.zero(); dim];
        if dim > 0 {
            v[0] = field.one();
        }
        let mut me = ModuleOverPair { field: field.clone(), left, right, v, left_rank: 0, right_rank: 0 };
        for l in &me.left {
            for r in &me.right {
                if l.mul(field, r) != r.mul(field, l) {
                    return Err(Error::Structural("left and right actions do not commute".into()));
                }
            }
        }
        me.left_rank = me.rank_of(&me.v, true);
        me.right_rank = me.rank_of(&me.v, false);
        Ok(me)
    }

    pub fn dim(&self) -> usize {
        self.v.len()
    }

    fn rank_of(&self, v: &[FieldElement], left: bool) -> usize {
        let mats = if left { &self.left } else { &self.right };
        let mut span = KSubspace::new(&self.field, v.len() * self.field.degree());
        for m in mats {
            span.insert(&flat(&kmat_vec(&self.field, m, v)));
        }
        span.dim()
    }

    /// Exact check of `(a x) b = a (x b)` on the current candidate for all basis pairs.
    pub fn commuting_on_candidate(&self) -> bool {
        let f = &self.field;
        self.left.iter().all(|l| {
            let lv = kmat_vec(f, l, &self.v);
            self.right.iter().all(|r| kmat_vec(f, r, &lv) == kmat_vec(f, l, &kmat_vec(f, r, &self.v)))
        })
    }

    fn candidates(&self, omega: usize) -> Vec<Vec<FieldElement>> {
        let f = &self.field;
        let mut out = Vec::new();
        for k in 0..self.dim() {
            for w in 1..=omega as i64 {
                let mut v = self.v.clone();
                v[k] = f.add(&v[k], &f.from_rational(&Rational::from_integer(BigInt::from(w))));
                out.push(v);
            }
        }
        out
    }
}

/// Result of [`algebra_isomorphism`].
#[derive(Debug, Clone)]
pub struct AlgebraIsomorphism {
    /// `sigma(a_i)` in `B` for every basis element of `A`.
    pub images: Vec<AlgebraElement>,
    pub split: SplitReport,
    pub left_steps: usize,
    pub right_steps: usize,
    /// Whether the scalar set had to be enlarged to `2 n^2 + 1` values.
    pub omega_extended: bool,
    pub invariant_checks: usize,
}

/// Constructs an isomorphism `A -> B` of central simple algebras of the same dimension.
pub fn algebra_isomorphism(a: &StructureAlgebra, b: &StructureAlgebra, cfg: &SplitConfig) -> Result<AlgebraIsomorphism> {
    if a.field().descriptor() != b.field().descriptor() {
        return Err(Error::DimensionMismatch("algebras are over different fields".into()));
    }
    let m = a.dim();
    if b.dim() != m {
        return Err(Error::DimensionMismatch(format!("dimensions {m} and {}", b.dim())));
    }
    let n = a.require_n()?;
    let field = a.field();
    let t = tensor_with_opposite(a, b)?;
    let report = split(&t, cfg)?;
    let iso = &report.isomorphism;
    let left: Vec<KMatrix> = (0..m)
        .map(|i| {
            let coeffs: Vec<FieldElement> = (0..m * m)
                .map(|idx| if idx / m == i { b.identity().coords[idx % m].clone() } else { field.zero() })
                .collect();
            combine_matrices(field, &coeffs, &iso.images)
        })
        .collect();
    let right: Vec<KMatrix> = (0..m)
        .map(|j| {
            let coeffs: Vec<FieldElement> = (0..m * m)
                .map(|idx| if idx % m == j { a.identity().coords[idx / m].clone() } else { field.zero() })
                .collect();
            combine_matrices(field, &coeffs, &iso.images)
        })
        .collect();
    let mut module = ModuleOverPair::new(field, left, right)?;
    let full = n * n;
    let base_omega = full + 1;
    let mut omega_extended = false;
    let mut invariant_checks = 1;
    let mut left_steps = 0;
    while module.left_rank < full {
        let mut improved = false;
        for omega in [base_omega, 2 * full + 1] {
            for v in module.candidates(omega) {
                let r = module.rank_of(&v, true);
                if r > module.left_rank {
                    module.v = v;
                    module.left_rank = r;
                    improved = true;
                    break;
                }
            }
            if improved {
                omega_extended |= omega > base_omega;
                break;
            }
        }
        if !improved {
            return Err(Error::Structural("left rank stalled".into()));
        }
        left_steps += 1;
        invariant_checks += 1;
        if !module.commuting_on_candidate() {
            return Err(Error::Structural("actions stopped commuting".into()));
        }
    }
    module.right_rank = module.rank_of(&module.v, false);
    let mut right_steps = 0;
    while module.right_rank < full {
        let mut improved = false;
        for omega in [base_omega, 2 * full + 1] {
            for v in module.candidates(omega) {
                let r = module.rank_of(&v, false);
                if r > module.right_rank && module.rank_of(&v, true) == full {
                    module.v = v;
                    module.right_rank = r;
                    improved = true;
                    break;
                }
            }
            if improved {
                omega_extended |= omega > base_omega;
                break;
            }
        }
        if !improved {
            return Err(Error::Structural("right rank stalled".into()));
        }
        right_steps += 1;
        invariant_checks += 1;
        let lr = module.rank_of(&module.v, true);
        if lr < module.left_rank || !module.commuting_on_candidate() {
            return Err(Error::Structural("left generation lost during right improvement".into()));
        }
    }
    // sigma(a_i) solves v * sigma(a_i) = a_i * v.
    let mut span = KSubspace::new(field, module.dim() * field.degree());
    for r in &module.right {
        span.insert(&flat(&kmat_vec(field, r, &module.v)));
    }
    let images = module
        .left
        .iter()
        .map(|l| {
            span.coords(&flat(&kmat_vec(field, l, &module.v)))
                .map(AlgebraElement::new)
                .ok_or_else(|| Error::Structural("a_i v is not in v B".into()))
        })
        .collect::<Result<Vec<_>>>()?;
    verify_algebra_map(a, b, &images)?;
    Ok(AlgebraIsomorphism { images, split: report, left_steps, right_steps, omega_extended, invariant_checks })
}

/// Exact checks that `a_i -> images[i]` is a unital, multiplicative, bijective map `A -> B`.
pub fn verify_algebra_map(a: &StructureAlgebra, b: &StructureAlgebra, images: &[AlgebraElement]) -> Result<()> {
    let field = a.field();
    let m = a.dim();
    if images.len() != m || images.iter().any(|x| x.dim() != b.dim()) {
        return Err(Error::Verification("wrong number or size of images".into()));
    }
    let apply = |coeffs: &[FieldElement]| -> AlgebraElement {
        let mut out = b.zero();
        for (c, img) in coeffs.iter().zip(images) {
            if !c.is_zero() {
                out = b.add(&out, &b.scale(c, img));
            }
        }
        out
    };
    if apply(&a.identity().coords) != b.identity() {
        return Err(Error::Verification("unitality: sigma(1) is not 1".into()));
    }
    for i in 0..m {
        for j in 0..m {
            if b.mul(&images[i], &images[j]) != apply(&a.table()[i][j]) {
                return Err(Error::Verification(format!("multiplicativity fails for basis pair ({i}, {j})")));
            }
        }
    }
    let mut span = KSubspace::new(field, b.qdim());
    for x in images {
        span.insert(&b.to_q(x));
    }
    if span.dim() != b.dim() {
        return Err(Error::Verification("bijectivity: images are dependent".into()));
    }
    Ok(())
}

/// Finds a zero divisor with small coordinates.
pub fn find_zero_divisor(a: &StructureAlgebra, cfg: &SplitConfig) -> Result<ZeroDivisorReport> {
    search_zero_divisor(a, cfg)
}

/// Largest bit size of a numerator or denominator among the coordinates.
pub fn coordinate_bits(x: &AlgebraElement) -> u64 {
    x.coords
        .iter()
        .flat_map(|c| c.coords.iter())
        .map(|q| q.numer().bits().max(q.denom().bits()))
        .max()
        .unwrap_or(0)
}

/// Outcome of a norm equation `N(x) = a` in `Q(sqrt D)`.
#[derive(Debug, Clone, PartialEq)]
pub enum NormSolution {
    /// `x = x0 + x1 sqrt(D)`.
    Solution { x0: Rational, x1: Rational },
    /// The quaternion algebra `(D, a)` is a division algebra.
    Unsolvable,
}

fn rational_sqrt(a: &Rational) -> Option<Rational> {
    if a.is_negative() {
        return None;
    }
    let (n, d) = (a.numer(), a.denom());
    let (rn, rd) = (n.sqrt(), d.sqrt());
    (&rn * &rn == *n && &rd * &rd == *d).then(|| Rational::new(rn, rd))
}

/// Solves `x0^2 - D x1^2 = a` through a zero divisor of the quaternion algebra `(D, a)`.
pub fn solve_norm_equation(d: i64, a: &Rational, cfg: &SplitConfig) -> Result<NormSolution> {
    let k = NumberField::quadratic(d)?;
    if a.is_zero() {
        return Err(Error::Parse("the norm target must be nonzero".into()));
    }
    if let Some(r) = rational_sqrt(a) {
        return Ok(NormSolution::Solution { x0: r, x1: Rational::zero() });
    }
    let q = NumberField::rationals();
    let alg = StructureAlgebra::quaternion(&q, &q.from_rational(&Rational::from_integer(d.into())), &q.from_rational(a))?;
    let zd = match find_zero_divisor(&alg, cfg) {
        Ok(z) => z,
        Err(Error::NonSplit(_)) => return Ok(NormSolution::Unsolvable),
        Err(e) => return Err(e),
    };
    let c: Vec<Rational> = zd.element.coords.iter().map(|x| x.coords[0].clone()).collect();
    // z = alpha + beta v with alpha = c0 + c1 u, beta = c2 + c3 u.
    let dq = Rational::from_integer(d.into());
    let nb = &c[2] * &c[2] - &dq * &c[3] * &c[3];
    if nb.is_zero() {
        return Err(Error::Verification("zero divisor has vanishing v-part".into()));
    }
    // alpha / beta = alpha * conj(beta) / N(beta).
    let x0 = (&c[0] * &c[2] - &dq * &c[1] * &c[3]) / &nb;
    let x1 = (&c[1] * &c[2] - &c[0] * &c[3]) / &nb;
    let x = k.from_power_basis(&[x0.clone(), x1.clone()]);
    if &k.norm(&x) != a {
        return Err(Error::Verification("extracted element has the wrong norm".into()));
    }
    Ok(NormSolution::Solution { x0, x1 })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::rat;

    #[test]
    fn tensor_dimension_and_identity() {
        let k = NumberField::rationals();
        let a = StructureAlgebra::matrix_algebra(&k, 2);
        let t = tensor_with_opposite(&a, &a).unwrap();
        assert_eq!(t.dim(), 16);
        assert_eq!(t.n(), Some(4));
    }

    #[test]
    fn identity_isomorphism_of_m2() {
        let k = NumberField::rationals();
        let a = StructureAlgebra::matrix_algebra(&k, 2);
        let iso = algebra_isomorphism(&a, &a, &SplitConfig::default()).unwrap();
        verify_algebra_map(&a, &a, &iso.images).unwrap();
    }

    #[test]
    fn norm_equations() {
        let cfg = SplitConfig::default();
        match solve_norm_equation(5, &rat(4), &cfg).unwrap() {
            NormSolution::Solution { x0, x1 } => assert_eq!(&x0 * &x0 - rat(5) * &x1 * &x1, rat(4)),
            NormSolution::Unsolvable => panic!("4 is a norm"),
        }
        match solve_norm_equation(5, &rat(-1), &cfg).unwrap() {
            NormSolution::Solution { x0, x1 } => assert_eq!(&x0 * &x0 - rat(5) * &x1 * &x1, rat(-1)),
            NormSolution::Unsolvable => panic!("-1 = N((1 + sqrt 5)/2)"),
        }
        assert_eq!(solve_norm_equation(5, &rat(2), &cfg).unwrap(), NormSolution::Unsolvable);
        assert_eq!(
            solve_norm_equation(3, &rat(1), &cfg).unwrap(),
            NormSolution::Solution { x0: rat(1), x1: rat(0) }
        );
        assert_eq!(solve_norm_equation(-1, &rat(-1), &cfg).unwrap(), NormSolution::Unsolvable);
    }

    #[test]
    fn zero_divisor_of_m2() {
        let k = NumberField::rationals();
        let a = StructureAlgebra::matrix_algebra(&k, 2);
        let z = find_zero_divisor(&a, &SplitConfig::default()).unwrap();
        assert!(a.is_zero_divisor(&z.element));
        assert!(!z.element.is_zero());
    }
}

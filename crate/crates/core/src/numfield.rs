//! The base field `K`: an integral basis, its multiplication table,
//! discriminant, signature, and certified archimedean embeddings.

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::exact::{int_rat, modp, rat, ExactMatrix, Poly, Rational};
use crate::numeric::{complex_roots, count_real_roots, real_root_intervals, CFixed, Fixed};

/// How the caller describes the field.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum FieldDescriptor {
    Rationals,
    /// `Q(sqrt(d))` for squarefree `d` other than 0 and 1.
    Quadratic { d: i64 },
    /// `Q(alpha)` with the monic integer minimal polynomial of `alpha` (lowest
    /// degree first), an integral basis over the power basis, and the signed
    /// discriminant of that basis.
    General { min_poly: Vec<BigInt>, integral_basis: Vec<Vec<Rational>>, discriminant: BigInt },
}

/// Element of `K` as rational coordinates over the integral basis.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct FieldElement {
    pub coords: Vec<Rational>,
}

impl FieldElement {
    pub fn new(coords: Vec<Rational>) -> Self {
        FieldElement { coords }
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(Zero::is_zero)
    }

    pub fn degree(&self) -> usize {
        self.coords.len()
    }
}

/// Numerical value of an embedding with a certified enclosure radius.
#[derive(Debug, Clone)]
pub struct EmbeddingValue {
    pub value: CFixed,
    pub radius: f64,
}

/// One archimedean place, given by the images of the integral basis.
#[derive(Debug, Clone)]
pub struct Embedding {
    pub real: bool,
    pub alpha: EmbeddingValue,
    pub basis_images: Vec<EmbeddingValue>,
}

impl Embedding {
    pub fn bits(&self) -> u32 {
        self.alpha.value.bits()
    }

    /// `sigma(x)` with an enclosure radius.
    pub fn eval(&self, x: &FieldElement) -> EmbeddingValue {
        let bits = self.bits();
        let mut v = CFixed::zero(bits);
        let mut radius = 0.0;
        for (c, w) in x.coords.iter().zip(&self.basis_images) {
            if c.is_zero() {
                continue;
            }
            v = v.add(&w.value.mul_rational(c));
            let cf = c.abs().to_f64().unwrap_or(f64::INFINITY);
            radius += cf * w.radius + 2f64.powi(-(bits as i32) + 1);
        }
        if self.real {
            v.im = Fixed::zero(bits);
        }
        EmbeddingValue { value: v, radius: radius * (1.0 + 1e-12) }
    }

    /// `sigma` of a rational-coefficient vector over the integral basis, as `CFixed` only.
    pub fn eval_value(&self, coords: &[Rational]) -> CFixed {
        self.eval(&FieldElement::new(coords.to_vec())).value
    }
}

#[derive(Debug, Clone)]
pub struct NumberField {
    descriptor: FieldDescriptor,
    min_poly: Poly,
    /// Row `l` holds `omega_l` in power-basis coordinates.
    basis: ExactMatrix,
    basis_inv: ExactMatrix,
    /// `omega_i * omega_j = sum_k table[i][j][k] * omega_k`, integral.
    table: Vec<Vec<Vec<BigInt>>>,
    one: Vec<Rational>,
    discriminant: BigInt,
    r: usize,
    s: usize,
}

fn power_mul_mod(a: &[Rational], b: &[Rational], f: &Poly) -> Vec<Rational> {
    let d = f.degree().unwrap();
    let prod = Poly::new(a.to_vec()).mul(&Poly::new(b.to_vec()));
    let rem = prod.div_rem(f).1;
    let mut out = rem.coeffs().to_vec();
    out.resize(d, Rational::zero());
    out
}

impl NumberField {
    pub fn rationals() -> Self {
        Self::new(FieldDescriptor::Rationals).expect("Q is valid")
    }

    pub fn quadratic(d: i64) -> Result<Self> {
        Self::new(FieldDescriptor::Quadratic { d })
    }

    pub fn new(descriptor: FieldDescriptor) -> Result<Self> {
        let (min_poly, basis_rows, disc) = match &descriptor {
            FieldDescriptor::Rationals => (Poly::from_i64(&[0, 1]), vec![vec![rat(1)]], BigInt::one()),
            FieldDescriptor::Quadratic { d } => {
                let d = *d;
                if d == 0 || d == 1 || !is_squarefree(d) {
                    return Err(Error::InvalidField(format!("{d} is not a squarefree integer other than 0, 1")));
                }
                let f = Poly::from_i64(&[-d, 0, 1]);
                if d.rem_euclid(4) == 1 {
                    (f, vec![vec![rat(1), rat(0)], vec![crate::exact::ratio(1, 2), crate::exact::ratio(1, 2)]], BigInt::from(d))
                } else {
                    (f, vec![vec![rat(1), rat(0)], vec![rat(0), rat(1)]], BigInt::from(4 * d))
                }
            }
            FieldDescriptor::General { min_poly, integral_basis, discriminant } => {
                let f = Poly::new(min_poly.iter().map(int_rat).collect());
                if !f.is_monic() || f.degree().unwrap_or(0) == 0 {
                    return Err(Error::InvalidField("minimal polynomial must be monic of positive degree".into()));
                }
                if !is_irreducible(min_poly) {
                    return Err(Error::InvalidField("minimal polynomial is not certifiably irreducible".into()));
                }
                (f, integral_basis.clone(), discriminant.clone())
            }
        };
        let d = min_poly.degree().unwrap();
        if basis_rows.len() != d || basis_rows.iter().any(|r| r.len() != d) {
            return Err(Error::InvalidField(format!("integral basis must be {d} vectors of length {d}")));
        }
        let basis = ExactMatrix::from_rows(&basis_rows)?;
        let basis_inv = basis
            .inverse()?
            .ok_or_else(|| Error::InvalidField("integral basis is linearly dependent".into()))?;
        let mut table = vec![vec![Vec::new(); d]; d];
        for i in 0..d {
            for j in 0..d {
                let p = power_mul_mod(basis.row(i), basis.row(j), &min_poly);
                let coords = ExactMatrix::from_rows(&[p])?.mul(&basis_inv)?.row(0).to_vec();
                let mut ints = Vec::with_capacity(d);
                for c in coords {
                    if !c.is_integer() {
                        return Err(Error::InvalidField("integral basis is not closed under multiplication".into()));
                    }
                    ints.push(c.to_integer());
                }
                table[i][j] = ints;
            }
        }
        let mut unit = vec![Rational::zero(); d];
        unit[0] = Rational::one();
        let one = ExactMatrix::from_rows(&[unit])?.mul(&basis_inv)?.row(0).to_vec();
        if one.iter().any(|c| !c.is_integer()) {
            return Err(Error::InvalidField("1 is not an integral combination of the basis".into()));
        }
        let r = if d == 1 { 1 } else { count_real_roots(&min_poly) };
        let mut field = NumberField {
            descriptor,
            min_poly,
            basis,
            basis_inv,
            table,
            one,
            discriminant: disc,
            r,
            s: (d - r) / 2,
        };
        let gram: Vec<Vec<Rational>> = (0..d)
            .map(|i| {
                (0..d)
                    .map(|j| {
                        let mut e = vec![Rational::zero(); d];
                        for k in 0..d {
                            e[k] = int_rat(&field.table[i][j][k]);
                        }
                        field.trace(&FieldElement::new(e))
                    })
                    .collect()
            })
            .collect();
        let computed = ExactMatrix::from_rows(&gram)?.det()?.to_integer();
        if computed != field.discriminant {
            return Err(Error::InvalidField(format!(
                "supplied discriminant {} differs from the basis discriminant {computed}",
                field.discriminant
            )));
        }
        field.discriminant = computed;
        Ok(field)
    }

    pub fn descriptor(&self) -> &FieldDescriptor {
        &self.descriptor
    }

    pub fn degree(&self) -> usize {
        self.one.len()
    }

    pub fn is_rationals(&self) -> bool {
        self.degree() == 1
    }

    pub fn discriminant(&self) -> &BigInt {
        &self.discriminant
    }

    pub fn signature(&self) -> (usize, usize) {
        (self.r, self.s)
    }

    pub fn min_poly(&self) -> &Poly {
        &self.min_poly
    }

    pub fn table(&self) -> &[Vec<Vec<BigInt>>] {
        &self.table
    }

    /// Power-basis coordinates of the integral basis elements.
    pub fn basis_matrix(&self) -> &ExactMatrix {
        &self.basis
    }

    pub fn zero(&self) -> FieldElement {
        FieldElement::new(vec![Rational::zero(); self.degree()])
    }

    pub fn one(&self) -> FieldElement {
        FieldElement::new(self.one.clone())
    }

    pub fn one_coords(&self) -> &[Rational] {
        &self.one
    }

    pub fn from_rational(&self, q: &Rational) -> FieldElement {
        FieldElement::new(self.one.iter().map(|c| c * q).collect())
    }

    /// The element with power-basis coordinates `p`.
    pub fn from_power_basis(&self, p: &[Rational]) -> FieldElement {
        let mut v = p.to_vec();
        v.resize(self.degree(), Rational::zero());
        FieldElement::new(ExactMatrix::from_rows(&[v]).unwrap().mul(&self.basis_inv).unwrap().row(0).to_vec())
    }

    pub fn to_power_basis(&self, x: &FieldElement) -> Vec<Rational> {
        ExactMatrix::from_rows(std::slice::from_ref(&x.coords)).unwrap().mul(&self.basis).unwrap().row(0).to_vec()
    }

    /// If `x` is rational, returns it.
    pub fn as_rational(&self, x: &FieldElement) -> Option<Rational> {
        let p = self.to_power_basis(x);
        p[1..].iter().all(Zero::is_zero).then(|| p[0].clone())
    }

    pub fn add(&self, a: &FieldElement, b: &FieldElement) -> FieldElement {
        FieldElement::new(a.coords.iter().zip(&b.coords).map(|(x, y)| x + y).collect())
    }

    pub fn sub(&self, a: &FieldElement, b: &FieldElement) -> FieldElement {
        FieldElement::new(a.coords.iter().zip(&b.coords).map(|(x, y)| x - y).collect())
    }

    pub fn neg(&self, a: &FieldElement) -> FieldElement {
        FieldElement::new(a.coords.iter().map(|x| -x).collect())
    }

    pub fn scale(&self, a: &FieldElement, q: &Rational) -> FieldElement {
        FieldElement::new(a.coords.iter().map(|x| x * q).collect())
    }

    pub fn mul(&self, a: &FieldElement, b: &FieldElement) -> FieldElement {
        let d = self.degree();
        let mut out = vec![Rational::zero(); d];
        for (i, x) in a.coords.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (j, y) in b.coords.iter().enumerate() {
                if y.is_zero() {
                    continue;
                }
                let xy = x * y;
                for (k, c) in self.table[i][j].iter().enumerate() {
                    if !c.is_zero() {
                        out[k] += &xy * int_rat(c);
                    }
                }
            }
        }
        FieldElement::new(out)
    }

    /// Matrix of `y -> x*y` acting on coordinate rows: `row(y) * M = row(x*y)`.
    pub fn mul_matrix(&self, x: &FieldElement) -> ExactMatrix {
        let d = self.degree();
        let rows: Vec<Vec<Rational>> = (0..d)
            .map(|j| {
                let mut e = vec![Rational::zero(); d];
                e[j] = Rational::one();
                self.mul(x, &FieldElement::new(e)).coords
            })
            .collect();
        ExactMatrix::from_rows(&rows).unwrap()
    }

    pub fn inv(&self, x: &FieldElement) -> Result<FieldElement> {
        if x.is_zero() {
            return Err(Error::Structural("inverse of zero field element".into()));
        }
        let m = self.mul_matrix(x).transpose();
        let sol = crate::exact::solve_and_kernel(&m, Some(&ExactMatrix::column(&self.one)))?;
        let p = sol.particular.ok_or_else(|| Error::Structural("field element not invertible".into()))?;
        Ok(FieldElement::new(p.col(0)))
    }

    pub fn norm(&self, x: &FieldElement) -> Rational {
        self.mul_matrix(x).det().expect("square")
    }

    pub fn trace(&self, x: &FieldElement) -> Rational {
        self.mul_matrix(x).trace()
    }

    pub fn norm_trace(&self, x: &FieldElement) -> (Rational, Rational) {
        (self.norm(x), self.trace(x))
    }

    /// The `r` real embeddings (descending by the image of the generator)
    /// followed by one representative per conjugate pair (positive imaginary part).
    pub fn archimedean_embeddings(&self, precision_bits: u32) -> Vec<Embedding> {
        let bits = precision_bits.max(16);
        let d = self.degree();
        let mut alphas: Vec<(bool, EmbeddingValue)> = Vec::with_capacity(self.r + self.s);
        if d == 1 {
            alphas.push((true, EmbeddingValue { value: CFixed::zero(bits), radius: 0.0 }));
        } else {
            let mut reals: Vec<EmbeddingValue> = real_root_intervals(&self.min_poly, bits + 4)
                .into_iter()
                .map(|(lo, hi)| {
                    let mid = (&lo + &hi) / rat(2);
                    let v = Fixed::from_rational(&mid, bits);
                    let half = ((&hi - &lo) / rat(2)).to_f64().unwrap_or(0.0);
                    EmbeddingValue { value: CFixed::real(v), radius: half + 2f64.powi(-(bits as i32)) }
                })
                .collect();
            reals.reverse();
            alphas.extend(reals.into_iter().map(|e| (true, e)));
            if self.s > 0 {
                let mut work = bits + 8;
                let complex = loop {
                    let coeffs: Vec<CFixed> =
                        self.min_poly.coeffs().iter().map(|c| CFixed::from_rational(c, work)).collect();
                    if let Some(roots) = complex_roots(&coeffs, true) {
                        let upper: Vec<_> = roots.into_iter().filter(|z| !z.real && !z.value.im.is_negative()).collect();
                        if upper.len() == self.s {
                            break upper;
                        }
                    }
                    work *= 2;
                    assert!(work < 1 << 16, "root isolation failed for a squarefree polynomial");
                };
                let mut complex: Vec<EmbeddingValue> = complex
                    .into_iter()
                    .map(|z| EmbeddingValue { value: z.value.with_bits(bits), radius: z.radius + 2f64.powi(-(bits as i32)) })
                    .collect();
                complex.sort_by(|a, b| {
                    b.value.im.cmp(&a.value.im).then_with(|| b.value.re.cmp(&a.value.re))
                });
                alphas.extend(complex.into_iter().map(|e| (false, e)));
            }
        }
        alphas
            .into_iter()
            .map(|(real, alpha)| {
                let basis_images = (0..d).map(|l| self.eval_power(self.basis.row(l), &alpha, bits, real)).collect();
                Embedding { real, alpha, basis_images }
            })
            .collect()
    }

    fn eval_power(&self, p: &[Rational], alpha: &EmbeddingValue, bits: u32, real: bool) -> EmbeddingValue {
        let mut v = CFixed::zero(bits);
        let mut pow = CFixed::one(bits);
        let a = alpha.value.to_c64().norm();
        let mut radius = 0.0;
        for (k, c) in p.iter().enumerate() {
            if !c.is_zero() {
                v = v.add(&pow.mul_rational(c));
                let cf = c.abs().to_f64().unwrap_or(f64::INFINITY);
                radius += cf * ((a + alpha.radius).powi(k as i32) - a.powi(k as i32));
                radius += cf * (k as f64 + 1.0) * (1.0 + a).powi(k as i32) * 2f64.powi(-(bits as i32) + 2);
            }
            pow = pow.mul(&alpha.value);
        }
        if real {
            v.im = Fixed::zero(bits);
        }
        EmbeddingValue { value: v, radius: radius * (1.0 + 1e-9) + 2f64.powi(-(bits as i32)) }
    }
}

fn is_squarefree(d: i64) -> bool {
    let n = d.unsigned_abs();
    let mut p = 2u64;
    while p * p <= n {
        if n.is_multiple_of(p * p) {
            return false;
        }
        p += 1;
    }
    true
}

/// Irreducibility certificate over `Q` from factorization degree patterns
/// modulo small primes: if no proper subset sum of factor degrees is common to
/// all tested primes, no factorization over `Q` is possible.
pub fn is_irreducible(coeffs: &[BigInt]) -> bool {
    let d = coeffs.len() - 1;
    if d <= 1 {
        return true;
    }
    let f = Poly::new(coeffs.iter().map(int_rat).collect());
    if !f.is_squarefree() {
        return false;
    }
    let mut possible: Vec<bool> = (0..=d).map(|k| k > 0 && k < d).collect();
    let mut p = 2u64;
    let mut tested = 0;
    while tested < 60 && p < 2000 {
        if is_small_prime(p) {
            let fp: Vec<u64> = coeffs.iter().map(|c| modp::reduce(c, p)).collect();
            if let Some(pattern) = distinct_degree_pattern(&fp, p) {
                tested += 1;
                let mut sums = vec![false; d + 1];
                sums[0] = true;
                for deg in pattern {
                    for k in (deg..=d).rev() {
                        if sums[k - deg] {
                            sums[k] = true;
                        }
                    }
                }
                for k in 0..=d {
                    possible[k] &= sums[k];
                }
                if possible.iter().all(|&b| !b) {
                    return true;
                }
            }
        }
        p += 1;
    }
    false
}

fn is_small_prime(p: u64) -> bool {
    p >= 2 && (2..).take_while(|q| q * q <= p).all(|q| !p.is_multiple_of(q))
}

/// Degrees of the irreducible factors of a squarefree monic polynomial mod `p`
/// (with multiplicity), or `None` when `p` divides the discriminant.
fn distinct_degree_pattern(f: &[u64], p: u64) -> Option<Vec<usize>> {
    let f = modp::trim(f.to_vec());
    let n = f.len() - 1;
    let df: Vec<u64> = f.iter().enumerate().skip(1).map(|(i, c)| modp::mul(*c, i as u64 % p, p)).collect();
    if modp::poly_gcd(&f, &df, p).len() != 1 {
        return None;
    }
    let mut pattern = Vec::new();
    let mut g = f.clone();
    let x = vec![0, 1];
    let mut h = x.clone();
    let mut k = 0;
    while g.len() > 1 {
        k += 1;
        if 2 * k > g.len() - 1 {
            pattern.push(g.len() - 1);
            break;
        }
        // h = x^(p^k) mod g
        let mut e = p;
        let mut base = h.clone();
        let mut acc = vec![1u64];
        while e > 0 {
            if e & 1 == 1 {
                acc = modp::poly_mulmod(&acc, &base, &g, p);
            }
            base = modp::poly_mulmod(&base, &base, &g, p);
            e >>= 1;
        }
        h = acc;
        let mut diff = h.clone();
        diff.resize(diff.len().max(2), 0);
        diff[1] = modp::sub(diff[1], 1, p);
        let gk = modp::poly_gcd(&g, &modp::trim(diff), p);
        let dk = gk.len() - 1;
        if dk > 0 {
            for _ in 0..dk / k {
                pattern.push(k);
            }
            g = modp::poly_div_exact(&g, &gk, p);
            h = modp::poly_rem(&h, &g, p);
        }
    }
    debug_assert_eq!(pattern.iter().sum::<usize>(), n);
    Some(pattern)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::ratio;

    #[test]
    fn rationals() {
        let q = NumberField::rationals();
        assert_eq!(q.degree(), 1);
        assert_eq!(q.discriminant(), &BigInt::one());
        assert_eq!(q.signature(), (1, 0));
        let e = q.archimedean_embeddings(64);
        assert_eq!(e.len(), 1);
        assert!(e[0].real);
        let v = e[0].eval(&q.from_rational(&ratio(7, 3)));
        assert!((v.value.re.to_f64() - 7.0 / 3.0).abs() <= v.radius + 1e-15);
    }

    #[test]
    fn quadratic_discriminants() {
        let k5 = NumberField::quadratic(5).unwrap();
        assert_eq!(k5.discriminant(), &BigInt::from(5));
        assert_eq!(k5.signature(), (2, 0));
        assert_eq!(k5.basis_matrix().row(1), &[ratio(1, 2), ratio(1, 2)]);
        let ki = NumberField::quadratic(-1).unwrap();
        assert_eq!(ki.discriminant(), &BigInt::from(-4));
        assert_eq!(ki.signature(), (0, 1));
        let k3 = NumberField::quadratic(3).unwrap();
        assert_eq!(k3.discriminant(), &BigInt::from(12));
        assert!(NumberField::quadratic(4).is_err());
        assert!(NumberField::quadratic(12).is_err());
        assert!(NumberField::quadratic(1).is_err());
    }

    #[test]
    fn embeddings_of_sqrt5_and_i() {
        let k5 = NumberField::quadratic(5).unwrap();
        let sqrt5 = k5.from_power_basis(&[rat(0), rat(1)]);
        let e = k5.archimedean_embeddings(80);
        assert_eq!(e.len(), 2);
        let v1 = e[0].eval(&sqrt5);
        let v2 = e[1].eval(&sqrt5);
        // Oracle: bisection on x^2 - 5 in f64 agrees to double precision.
        let (mut lo, mut hi) = (2.0f64, 3.0f64);
        for _ in 0..60 {
            let mid = (lo + hi) / 2.0;
            if mid * mid > 5.0 {
                hi = mid
            } else {
                lo = mid
            }
        }
        assert!((v1.value.re.to_f64() - lo).abs() < 1e-14);
        assert!((v2.value.re.to_f64() + lo).abs() < 1e-14);
        assert!(v1.radius < 1e-20);

        let ki = NumberField::quadratic(-1).unwrap();
        let i = ki.from_power_basis(&[rat(0), rat(1)]);
        let e = ki.archimedean_embeddings(64);
        assert_eq!(e.len(), 1);
        assert!(!e[0].real);
        let v = e[0].eval(&i);
        assert!(v.value.re.to_f64().abs() < 1e-15 && (v.value.im.to_f64() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn norms_and_traces() {
        let k5 = NumberField::quadratic(5).unwrap();
        let x = k5.from_power_basis(&[rat(3), rat(1)]);
        assert_eq!(k5.norm(&x), rat(4));
        let sqrt5 = k5.from_power_basis(&[rat(0), rat(1)]);
        assert_eq!(k5.trace(&sqrt5), rat(0));
        assert_eq!(k5.norm(&k5.one()), rat(1));
        let xi = k5.inv(&x).unwrap();
        assert_eq!(k5.mul(&x, &xi), k5.one());
    }

    #[test]
    fn embedding_product_matches_norm() {
        let ki = NumberField::quadratic(-7).unwrap();
        let x = ki.from_power_basis(&[rat(2), rat(3)]);
        let n = ki.norm(&x).to_f64().unwrap();
        let e = ki.archimedean_embeddings(64);
        let v = e[0].eval(&x).value.to_c64().norm_sqr();
        assert!((v - n).abs() < 1e-10);
    }

    #[test]
    fn general_field_validation() {
        // Q(cbrt 2): power basis is integral, discriminant -108.
        let desc = FieldDescriptor::General {
            min_poly: vec![BigInt::from(-2), BigInt::zero(), BigInt::zero(), BigInt::one()],
            integral_basis: vec![
                vec![rat(1), rat(0), rat(0)],
                vec![rat(0), rat(1), rat(0)],
                vec![rat(0), rat(0), rat(1)],
            ],
            discriminant: BigInt::from(-108),
        };
        let k = NumberField::new(desc).unwrap();
        assert_eq!(k.signature(), (1, 1));
        assert_eq!(k.archimedean_embeddings(64).len(), 2);

        let reducible = FieldDescriptor::General {
            min_poly: vec![BigInt::from(-1), BigInt::zero(), BigInt::one()],
            integral_basis: vec![vec![rat(1), rat(0)], vec![rat(0), rat(1)]],
            discriminant: BigInt::from(4),
        };
        assert!(NumberField::new(reducible).is_err());

        let not_closed = FieldDescriptor::General {
            min_poly: vec![BigInt::from(-3), BigInt::zero(), BigInt::one()],
            integral_basis: vec![vec![rat(1), rat(0)], vec![ratio(1, 2), ratio(1, 2)]],
            discriminant: BigInt::from(3),
        };
        assert!(NumberField::new(not_closed).is_err());
    }

    #[test]
    fn irreducibility_patterns() {
        let b = |xs: &[i64]| xs.iter().map(|&x| BigInt::from(x)).collect::<Vec<_>>();
        assert!(is_irreducible(&b(&[-2, 0, 0, 1])));
        assert!(is_irreducible(&b(&[1, 1, 1])));
        assert!(!is_irreducible(&b(&[2, -3, 1])));
        // (x^2+1)(x^2+2) has no linear factor but is reducible.
        assert!(!is_irreducible(&b(&[2, 0, 3, 0, 1])));
    }
}

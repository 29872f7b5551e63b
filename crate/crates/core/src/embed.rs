//! Numerical representations `phi_i : A -> M_n(R or C)`, one per archimedean
//! place, and the interleaved real embedding `Phi` of an order.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::algebra::{KSubspace, StructureAlgebra};
use crate::error::{Error, Result};
use crate::exact::Rational;
use crate::numeric::{complex_roots, CFixed, Fixed, RootEnclosure};
use crate::numfield::{Embedding, FieldElement};
use crate::order::Order;

/// Extra bits carried beyond the requested precision.
pub const GUARD_BITS: u32 = 64;

/// An element with `n` distinct roots at every place.
#[derive(Debug, Clone)]
pub struct SplittingElement {
    /// q-vector of the element.
    pub element: Vec<Rational>,
    /// Monic minimal polynomial over `K`, lowest degree first.
    pub min_poly: Vec<FieldElement>,
    /// Number of samples drawn until acceptance.
    pub samples: usize,
}

/// Monic minimal polynomial over `K` of a q-vector.
pub fn k_minimal_polynomial(alg: &StructureAlgebra, x: &[Rational]) -> Vec<FieldElement> {
    let field = alg.field();
    let mut span = KSubspace::new(field, alg.qdim());
    let mut power = alg.identity_q().to_vec();
    loop {
        if let Some(c) = span.coords(&power) {
            let mut poly: Vec<FieldElement> = c.iter().map(|x| field.neg(x)).collect();
            poly.push(field.one());
            return poly;
        }
        span.insert(&power);
        power = alg.mul_q(&power, x);
    }
}

/// Roots of `sigma(f)` with disjoint enclosures, if they exist at the given precision.
pub fn place_roots(f: &[FieldElement], emb: &Embedding) -> Option<Vec<RootEnclosure>> {
    let coeffs: Vec<CFixed> = f.iter().map(|c| emb.eval(c).value).collect();
    complex_roots(&coeffs, emb.real)
}

fn acceptable(f: &[FieldElement], n: usize, embeddings: &[Embedding]) -> bool {
    if f.len() != n + 1 {
        return false;
    }
    embeddings.iter().all(|emb| match place_roots(f, emb) {
        Some(roots) => !emb.real || roots.iter().any(|r| r.real),
        None => false,
    })
}

/// Samples small-integer combinations of the basis until one has a minimal
/// polynomial of degree `n` with distinct roots at every place (and a real
/// root at every real place).
pub fn splitting_element(
    alg: &StructureAlgebra,
    embeddings: &[Embedding],
    seed: u64,
    max_samples: usize,
) -> Result<SplittingElement> {
    let n = alg.require_n()?;
    let field = alg.field();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for samples in 1..=max_samples {
        let coords: Vec<FieldElement> =
            (0..alg.dim()).map(|_| field.from_rational(&Rational::from_integer(rng.gen_range(-3i64..=3).into()))).collect();
        let x = alg.to_q(&crate::algebra::AlgebraElement::new(coords));
        let f = k_minimal_polynomial(alg, &x);
        if acceptable(&f, n, embeddings) {
            return Ok(SplittingElement { element: x, min_poly: f, samples });
        }
    }
    Err(Error::SplittingElement(max_samples))
}

/// Checks a caller-supplied element for use as a splitting element.
pub fn check_splitting_element(alg: &StructureAlgebra, embeddings: &[Embedding], x: &[Rational]) -> Result<SplittingElement> {
    let n = alg.require_n()?;
    let f = k_minimal_polynomial(alg, x);
    if acceptable(&f, n, embeddings) {
        Ok(SplittingElement { element: x.to_vec(), min_poly: f, samples: 1 })
    } else {
        Err(Error::SplittingElement(1))
    }
}

/// Numerical representation at one place.
#[derive(Debug, Clone)]
pub struct ArchRepresentation {
    pub place: usize,
    pub real: bool,
    pub n: usize,
    /// Working precision of the stored values.
    pub bits: u32,
    /// `phi(a_j)` for every `K`-basis element, `n x n` row-major.
    pub images: Vec<Vec<CFixed>>,
    /// `phi(omega_l * a_j)` at q-index `j*d + l`.
    pub unit_images: Vec<Vec<CFixed>>,
    /// Largest unitality or multiplicativity defect over basis pairs.
    pub residual: f64,
    /// The chosen root of the minimal polynomial of the splitting element.
    pub root: CFixed,
}

impl ArchRepresentation {
    /// `phi(x)` for a q-vector `x`.
    pub fn eval_q(&self, x: &[Rational]) -> Vec<CFixed> {
        let mut out = vec![CFixed::zero(self.bits); self.n * self.n];
        for (c, img) in x.iter().zip(&self.unit_images) {
            if num_traits::Zero::is_zero(c) {
                continue;
            }
            for (o, v) in out.iter_mut().zip(img) {
                *o = o.add(&v.mul_rational(c));
            }
        }
        out
    }
}

fn cdot(a: &[CFixed], b: &[CFixed], bits: u32) -> CFixed {
    // conj(a) . b
    a.iter().zip(b).fold(CFixed::zero(bits), |acc, (x, y)| acc.add(&x.conj().mul(y)))
}

fn cnorm(a: &[CFixed], bits: u32) -> Fixed {
    a.iter().fold(Fixed::zero(bits), |acc, x| acc.add(&x.norm_sqr())).sqrt()
}

fn cmat_mul(a: &[CFixed], b: &[CFixed], n: usize, bits: u32) -> Vec<CFixed> {
    let mut out = vec![CFixed::zero(bits); n * n];
    for i in 0..n {
        for k in 0..n {
            let x = &a[i * n + k];
            if x.is_zero() {
                continue;
            }
            for j in 0..n {
                out[i * n + j] = out[i * n + j].add(&x.mul(&b[k * n + j]));
            }
        }
    }
    out
}

/// Builds `phi` at one place from the Lagrange idempotent of the splitting element.
pub fn build_representation(
    alg: &StructureAlgebra,
    emb: &Embedding,
    place: usize,
    se: &SplittingElement,
    precision_bits: u32,
) -> Result<ArchRepresentation> {
    let n = alg.require_n()?;
    let m = alg.dim();
    let d = alg.field().degree();
    let bits = emb.bits();
    let zero = CFixed::zero(bits);
    // Structure constants under sigma, sparse.
    let sg: Vec<Vec<Vec<(usize, CFixed)>>> = alg
        .table()
        .iter()
        .map(|row| {
            row.iter()
                .map(|v| {
                    v.iter()
                        .enumerate()
                        .filter(|(_, c)| !c.is_zero())
                        .map(|(k, c)| (k, emb.eval(c).value))
                        .collect()
                })
                .collect()
        })
        .collect();
    let mul = |x: &[CFixed], y: &[CFixed]| -> Vec<CFixed> {
        let mut out = vec![zero.clone(); m];
        for (i, xi) in x.iter().enumerate() {
            if xi.is_zero() {
                continue;
            }
            for (j, yj) in y.iter().enumerate() {
                if yj.is_zero() || sg[i][j].is_empty() {
                    continue;
                }
                let xy = xi.mul(yj);
                for (k, c) in &sg[i][j] {
                    out[*k] = out[*k].add(&xy.mul(c));
                }
            }
        }
        out
    };
    let sigma_vec = |q: &[Rational]| -> Vec<CFixed> { q.chunks(d).map(|c| emb.eval_value(c)).collect() };

    let roots = place_roots(&se.min_poly, emb).ok_or_else(|| Error::IllConditioned("root enclosures overlap".into()))?;
    let chosen = if emb.real {
        roots
            .iter()
            .enumerate()
            .filter(|(_, r)| r.real)
            .max_by(|a, b| a.1.value.re.cmp(&b.1.value.re))
            .map(|(i, _)| i)
            .ok_or_else(|| Error::IllConditioned("no real root at a real place".into()))?
    } else {
        (0..roots.len())
            .max_by(|&a, &b| {
                let (x, y) = (&roots[a].value, &roots[b].value);
                x.im.cmp(&y.im).then_with(|| x.re.cmp(&y.re))
            })
            .unwrap()
    };
    let theta = roots[chosen].value.clone();
    let a_s = sigma_vec(&se.element);
    let one_s = sigma_vec(alg.identity_q());
    let mut e = one_s.clone();
    for (j, r) in roots.iter().enumerate() {
        if j == chosen {
            continue;
        }
        let shifted: Vec<CFixed> = a_s.iter().zip(&one_s).map(|(a, o)| a.sub(&o.mul(&r.value))).collect();
        let denom = theta.sub(&r.value);
        e = mul(&e, &shifted).iter().map(|x| x.div(&denom)).collect();
    }
    if emb.real {
        for x in &mut e {
            x.im = Fixed::zero(bits);
        }
    }
    // Orthonormal basis of the left ideal A e by Gram-Schmidt with pivoting.
    let basis_s: Vec<Vec<CFixed>> = (0..m)
        .map(|j| {
            let mut u = vec![zero.clone(); m];
            u[j] = CFixed::one(bits);
            u
        })
        .collect();
    let mut resid: Vec<Vec<CFixed>> = basis_s.iter().map(|u| mul(u, &e)).collect();
    let scale = resid.iter().map(|v| cnorm(v, bits).to_f64()).fold(0.0, f64::max);
    let threshold = scale * 2f64.powi(-((precision_bits / 4) as i32));
    let mut q: Vec<Vec<CFixed>> = Vec::with_capacity(n);
    let mut used = vec![false; m];
    for _ in 0..n {
        let (best, norm) = (0..m)
            .filter(|&j| !used[j])
            .map(|j| (j, cnorm(&resid[j], bits)))
            .max_by(|a, b| a.1.cmp(&b.1).then(b.0.cmp(&a.0)))
            .ok_or_else(|| Error::IllConditioned("left ideal basis exhausted".into()))?;
        if norm.to_f64() <= threshold {
            return Err(Error::IllConditioned("left ideal pivot below threshold".into()));
        }
        used[best] = true;
        let nc = CFixed::real(norm);
        let qv: Vec<CFixed> = resid[best].iter().map(|x| x.div(&nc)).collect();
        for (j, r) in resid.iter_mut().enumerate() {
            if used[j] {
                continue;
            }
            let c = cdot(&qv, r, bits);
            for (x, y) in r.iter_mut().zip(&qv) {
                *x = x.sub(&c.mul(y));
            }
        }
        q.push(qv);
    }
    let images: Vec<Vec<CFixed>> = basis_s
        .iter()
        .map(|ai| {
            let mut img = vec![zero.clone(); n * n];
            for (k, qk) in q.iter().enumerate() {
                let v = mul(ai, qk);
                for (t, qt) in q.iter().enumerate() {
                    let mut c = cdot(qt, &v, bits);
                    if emb.real {
                        c.im = Fixed::zero(bits);
                    }
                    img[t * n + k] = c;
                }
            }
            img
        })
        .collect();
    // Residuals.
    let tol = 2f64.powi(-((precision_bits / 2) as i32));
    let combine = |coeffs: &[CFixed]| -> Vec<CFixed> {
        let mut out = vec![zero.clone(); n * n];
        for (c, img) in coeffs.iter().zip(&images) {
            if c.is_zero() {
                continue;
            }
            for (o, v) in out.iter_mut().zip(img) {
                *o = o.add(&c.mul(v));
            }
        }
        out
    };
    let max_diff = |a: &[CFixed], b: &[CFixed]| a.iter().zip(b).map(|(x, y)| x.sub(y).to_c64().norm()).fold(0.0, f64::max);
    let mut ident = vec![zero.clone(); n * n];
    for i in 0..n {
        ident[i * n + i] = CFixed::one(bits);
    }
    let mut residual = max_diff(&combine(&one_s), &ident);
    for i in 0..m {
        for j in 0..m {
            let mut coeffs = vec![zero.clone(); m];
            for (k, c) in &sg[i][j] {
                coeffs[*k] = c.clone();
            }
            let lhs = combine(&coeffs);
            let rhs = cmat_mul(&images[i], &images[j], n, bits);
            residual = residual.max(max_diff(&lhs, &rhs));
        }
    }
    if !(residual < tol) {
        return Err(Error::IllConditioned(format!("representation residual {residual:e} above {tol:e}")));
    }
    let unit_images: Vec<Vec<CFixed>> = (0..m * d)
        .map(|idx| {
            let (j, l) = (idx / d, idx % d);
            let w = emb.basis_images[l].value.clone();
            images[j].iter().map(|x| x.mul(&w)).collect()
        })
        .collect();
    Ok(ArchRepresentation { place, real: emb.real, n, bits, images, unit_images, residual, root: theta })
}

/// The real lattice `Phi(Lambda)`.
#[derive(Debug, Clone)]
pub struct LatticeEmbedding {
    pub reps: Vec<ArchRepresentation>,
    pub n: usize,
    /// Dimension `n^2 d` of the ambient real space.
    pub dim: usize,
    pub bits: u32,
    /// `Phi` of the q-basis unit vectors.
    pub unit_images: Vec<Vec<Fixed>>,
    /// `Phi(lambda_i)` for the order basis.
    pub basis_images: Vec<Vec<Fixed>>,
    /// Estimated absolute error of each coordinate of `Phi(lambda_i)`.
    pub entry_error: f64,
}

fn flatten(reps: &[ArchRepresentation], mats: &[&[CFixed]]) -> Vec<Fixed> {
    let mut out = Vec::new();
    for (rep, m) in reps.iter().zip(mats) {
        out.extend(m.iter().map(|x| x.re.clone()));
        if !rep.real {
            out.extend(m.iter().map(|x| x.im.clone()));
        }
    }
    out
}

impl LatticeEmbedding {
    /// `Phi(x)` for a q-vector.
    pub fn phi_q(&self, x: &[Rational]) -> Vec<Fixed> {
        let mut out = vec![Fixed::zero(self.bits); self.dim];
        for (c, img) in x.iter().zip(&self.unit_images) {
            if num_traits::Zero::is_zero(c) {
                continue;
            }
            for (o, v) in out.iter_mut().zip(img) {
                *o = o.add(&v.mul_rational(c));
            }
        }
        out
    }

    /// `Phi` of the element with integer order coordinates `c`.
    pub fn phi_coords(&self, c: &[i64]) -> Vec<Fixed> {
        let mut out = vec![Fixed::zero(self.bits); self.dim];
        for (ci, img) in c.iter().zip(&self.basis_images) {
            if *ci == 0 {
                continue;
            }
            let cb = num_bigint::BigInt::from(*ci);
            for (o, v) in out.iter_mut().zip(img) {
                *o = o.add(&v.mul_int(&cb));
            }
        }
        out
    }

    /// Frobenius norms `||phi_i(y)||` per place from a `Phi` vector.
    pub fn place_norms(&self, phi: &[f64]) -> Vec<f64> {
        let nn = self.n * self.n;
        let mut out = Vec::with_capacity(self.reps.len());
        let mut pos = 0;
        for rep in &self.reps {
            let len = if rep.real { nn } else { 2 * nn };
            out.push(phi[pos..pos + len].iter().map(|x| x * x).sum::<f64>().sqrt());
            pos += len;
        }
        out
    }

    /// Per-place matrices `phi_i(y)` from a `Phi` vector, as complex f64.
    pub fn place_matrices(&self, phi: &[f64]) -> Vec<Vec<num_complex::Complex64>> {
        let nn = self.n * self.n;
        let mut out = Vec::with_capacity(self.reps.len());
        let mut pos = 0;
        for rep in &self.reps {
            if rep.real {
                out.push(phi[pos..pos + nn].iter().map(|&x| num_complex::Complex64::new(x, 0.0)).collect());
                pos += nn;
            } else {
                out.push((0..nn).map(|k| num_complex::Complex64::new(phi[pos + k], phi[pos + nn + k])).collect());
                pos += 2 * nn;
            }
        }
        out
    }

    pub fn basis_f64(&self) -> Vec<Vec<f64>> {
        self.basis_images.iter().map(|r| r.iter().map(Fixed::to_f64).collect()).collect()
    }
}

/// Interleaves the per-place representations into `Phi` and applies it to the order basis.
pub fn phi_interleave(order: &Order, reps: Vec<ArchRepresentation>) -> Result<LatticeEmbedding> {
    let first = reps.first().ok_or_else(|| Error::Structural("no archimedean places".into()))?;
    let n = first.n;
    let bits = first.bits;
    let qdim = first.unit_images.len();
    let dim: usize = reps.iter().map(|r| if r.real { n * n } else { 2 * n * n }).sum();
    if dim != qdim {
        return Err(Error::DimensionMismatch(format!("Phi has {dim} coordinates for a lattice of rank {qdim}")));
    }
    let unit_images: Vec<Vec<Fixed>> = (0..qdim)
        .map(|idx| {
            let mats: Vec<&[CFixed]> = reps.iter().map(|r| r.unit_images[idx].as_slice()).collect();
            flatten(&reps, &mats)
        })
        .collect();
    let residual = reps.iter().map(|r| r.residual).fold(0.0, f64::max);
    let mut emb = LatticeEmbedding { reps, n, dim, bits, unit_images, basis_images: Vec::new(), entry_error: 0.0 };
    emb.basis_images = order.basis().iter().map(|b| emb.phi_q(b)).collect();
    let max_entry = emb.basis_images.iter().flatten().map(|x| x.to_f64().abs()).fold(0.0, f64::max);
    emb.entry_error = (residual.max(2f64.powi(-(bits as i32) + 16))) * (1.0 + max_entry) * dim as f64;
    Ok(emb)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::AlgebraElement;
    use crate::exact::rat;
    use crate::numfield::NumberField;
    use crate::order::initial_order;

    fn elem(a: &StructureAlgebra, xs: &[i64]) -> Vec<Rational> {
        a.to_q(&AlgebraElement::new(xs.iter().map(|&x| a.field().from_rational(&rat(x))).collect()))
    }

    #[test]
    fn minimal_polynomials() {
        let a = StructureAlgebra::matrix_algebra(&NumberField::rationals(), 2);
        let f = k_minimal_polynomial(&a, &elem(&a, &[1, 0, 0, 2]));
        let c: Vec<Rational> = f.iter().map(|x| x.coords[0].clone()).collect();
        assert_eq!(c, vec![rat(2), rat(-3), rat(1)]);
        let f1 = k_minimal_polynomial(&a, a.identity_q());
        assert_eq!(f1.len(), 2);
    }

    #[test]
    fn splitting_element_checks() {
        let k = NumberField::rationals();
        let a = StructureAlgebra::matrix_algebra(&k, 2);
        let embs = k.archimedean_embeddings(96);
        assert!(check_splitting_element(&a, &embs, &elem(&a, &[1, 0, 0, 2])).is_ok());
        assert!(check_splitting_element(&a, &embs, a.identity_q()).is_err());
        // x^2 + 1 has no real root.
        assert!(check_splitting_element(&a, &embs, &elem(&a, &[0, -1, 1, 0])).is_err());
        let se = splitting_element(&a, &embs, 7, 64).unwrap();
        assert_eq!(se.min_poly.len(), 3);
    }

    #[test]
    fn standard_representation_is_unital() {
        let k = NumberField::rationals();
        let a = StructureAlgebra::matrix_algebra(&k, 2);
        let embs = k.archimedean_embeddings(128 + GUARD_BITS);
        let se = check_splitting_element(&a, &embs, &elem(&a, &[1, 0, 0, 2])).unwrap();
        let rep = build_representation(&a, &embs[0], 0, &se, 128).unwrap();
        assert!(rep.residual < 2f64.powi(-64));
        let one = rep.eval_q(a.identity_q());
        let norm: f64 = one.iter().map(|x| x.to_c64().norm_sqr()).sum::<f64>().sqrt();
        assert!((norm - 2f64.sqrt()).abs() < 1e-30_f64.max(1e-15));
        let order = initial_order(&a).unwrap();
        let lat = phi_interleave(&order, vec![rep]).unwrap();
        assert_eq!(lat.dim, 4);
        let phi1: Vec<f64> = lat.phi_q(a.identity_q()).iter().map(Fixed::to_f64).collect();
        assert!((lat.place_norms(&phi1)[0].powi(2) - 2.0).abs() < 1e-12);
    }

    #[test]
    fn complex_place_representation() {
        let k = NumberField::quadratic(-1).unwrap();
        let a = StructureAlgebra::matrix_algebra(&k, 2);
        let embs = k.archimedean_embeddings(128 + GUARD_BITS);
        let se = splitting_element(&a, &embs, 3, 64).unwrap();
        let rep = build_representation(&a, &embs[0], 0, &se, 128).unwrap();
        assert!(!rep.real);
        // phi(i * 1) = sigma(i) I = i I.
        let i = k.from_power_basis(&[rat(0), rat(1)]);
        let x = crate::algebra::k_scale_q(&k, &i, a.identity_q());
        let img = rep.eval_q(&x);
        assert!((img[0].to_c64() - num_complex::Complex64::new(0.0, 1.0)).norm() < 1e-20);
        assert!(img[1].to_c64().norm() < 1e-20);
        let order = initial_order(&a).unwrap();
        let lat = phi_interleave(&order, vec![rep]).unwrap();
        assert_eq!(lat.dim, 8);
        let phi1: Vec<f64> = lat.phi_q(a.identity_q()).iter().map(Fixed::to_f64).collect();
        // (r + s) n = 2.
        assert!((phi1.iter().map(|x| x * x).sum::<f64>() - 2.0).abs() < 1e-12);
    }
}

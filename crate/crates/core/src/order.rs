//! Orders in an algebra: full-rank unital lattices closed under
//! multiplication, their discriminants, and local enlargement to a maximal order.
//!
//! All lattices live in the q-vector space of the algebra (restriction of
//! scalars to `Q`), so an order over the ring of integers of `K` is simply a
//! `Z`-order that contains the integral basis of `K` times the identity.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::algebra::{k_scale_q, StructureAlgebra};
use crate::error::{Error, Result};
use crate::exact::{bareiss_det, denominator_lcm, hnf_and_det, int_rat, modp, Hnf, Rational};
use crate::factor::{is_probable_prime, square_divisors, FactorBudget};
use crate::numfield::FieldElement;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Order {
    /// Basis as q-vectors: the HNF rows divided by `denom`.
    basis: Vec<Vec<Rational>>,
    denom: BigInt,
    hnf: Hnf,
    /// `lambda_i * lambda_j = sum_k consts[i][j][k] * lambda_k`.
    consts: Vec<Vec<Vec<BigInt>>>,
    one: Vec<BigInt>,
    traces: Vec<BigInt>,
    discriminant: BigInt,
}

impl Order {
    /// The lattice spanned by `gens`, verified to be an order.
    pub fn from_generators(alg: &StructureAlgebra, gens: &[Vec<Rational>]) -> Result<Order> {
        let n = alg.qdim();
        let mut denom = denominator_lcm(gens.iter().flatten());
        let ints: Vec<Vec<BigInt>> =
            gens.iter().map(|g| g.iter().map(|x| (x * int_rat(&denom)).to_integer()).collect()).collect();
        let (mut hnf, _) = hnf_and_det(&ints);
        if hnf.rank() != n {
            return Err(Error::Structural(format!("lattice has rank {} < {n}", hnf.rank())));
        }
        let g = hnf.rows.iter().flatten().fold(denom.clone(), |acc, x| acc.gcd(x));
        if !g.is_one() {
            for x in hnf.rows.iter_mut().flatten() {
                *x /= &g;
            }
            denom /= &g;
        }
        let dq = int_rat(&denom);
        let basis: Vec<Vec<Rational>> =
            hnf.rows.iter().map(|r| r.iter().map(|x| int_rat(x) / &dq).collect()).collect();
        let coords = |v: &[Rational]| -> Option<Vec<BigInt>> {
            let scaled: Vec<Rational> = v.iter().map(|x| x * &dq).collect();
            if scaled.iter().any(|x| !x.is_integer()) {
                return None;
            }
            hnf.coordinates(&scaled.iter().map(|x| x.to_integer()).collect::<Vec<_>>())
        };
        let one = coords(alg.identity_q()).ok_or_else(|| Error::Structural("lattice does not contain 1".into()))?;
        let mut consts = vec![vec![Vec::new(); n]; n];
        for i in 0..n {
            for j in 0..n {
                consts[i][j] = coords(&alg.mul_q(&basis[i], &basis[j]))
                    .ok_or_else(|| Error::Structural("lattice is not closed under multiplication".into()))?;
            }
        }
        let traces: Vec<BigInt> = (0..n).map(|k| (0..n).map(|i| consts[k][i][i].clone()).sum()).collect();
        let gram: Vec<Vec<BigInt>> = (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| consts[i][j].iter().zip(&traces).map(|(c, t)| c * t).sum())
                    .collect()
            })
            .collect();
        let discriminant = bareiss_det(&gram);
        Ok(Order { basis, denom, hnf, consts, one, traces, discriminant })
    }

    pub fn rank(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[Vec<Rational>] {
        &self.basis
    }

    pub fn discriminant(&self) -> &BigInt {
        &self.discriminant
    }

    pub fn structure_constants(&self) -> &[Vec<Vec<BigInt>>] {
        &self.consts
    }

    pub fn identity_coords(&self) -> &[BigInt] {
        &self.one
    }

    /// `Tr(lambda_k)` for the regular trace over `Q`.
    pub fn traces(&self) -> &[BigInt] {
        &self.traces
    }

    /// Integer coordinates of a q-vector in this order, if it belongs to it.
    pub fn coords_of(&self, v: &[Rational]) -> Option<Vec<BigInt>> {
        let dq = int_rat(&self.denom);
        let scaled: Vec<Rational> = v.iter().map(|x| x * &dq).collect();
        if scaled.iter().any(|x| !x.is_integer()) {
            return None;
        }
        self.hnf.coordinates(&scaled.iter().map(|x| x.to_integer()).collect::<Vec<_>>())
    }

    pub fn contains_q(&self, v: &[Rational]) -> bool {
        self.coords_of(v).is_some()
    }

    pub fn contains(&self, other: &Order) -> bool {
        other.basis.iter().all(|b| self.contains_q(b))
    }

    /// q-vector of the element with the given integer coordinates.
    pub fn element_q(&self, c: &[BigInt]) -> Vec<Rational> {
        let n = self.basis.len();
        let mut out = vec![Rational::zero(); self.basis.first().map_or(0, Vec::len)];
        for (ci, b) in c.iter().zip(&self.basis).take(n) {
            if ci.is_zero() {
                continue;
            }
            let cq = int_rat(ci);
            for (o, x) in out.iter_mut().zip(b) {
                if !x.is_zero() {
                    *o += &cq * x;
                }
            }
        }
        out
    }

    pub fn mul_coords(&self, a: &[BigInt], b: &[BigInt]) -> Vec<BigInt> {
        let n = self.rank();
        let mut out = vec![BigInt::zero(); n];
        for (i, ai) in a.iter().enumerate() {
            if ai.is_zero() {
                continue;
            }
            for (j, bj) in b.iter().enumerate() {
                if bj.is_zero() {
                    continue;
                }
                let ab = ai * bj;
                for (o, c) in out.iter_mut().zip(&self.consts[i][j]) {
                    if !c.is_zero() {
                        *o += &ab * c;
                    }
                }
            }
        }
        out
    }

    /// Integer matrix of `z -> x*z` on order coordinates (column convention).
    pub fn left_regular_int(&self, x: &[BigInt]) -> Vec<Vec<BigInt>> {
        let n = self.rank();
        let mut m = vec![vec![BigInt::zero(); n]; n];
        for (i, xi) in x.iter().enumerate() {
            if xi.is_zero() {
                continue;
            }
            for j in 0..n {
                for (k, c) in self.consts[i][j].iter().enumerate() {
                    if !c.is_zero() {
                        m[k][j] += xi * c;
                    }
                }
            }
        }
        m
    }

    /// Integer matrix of `z -> z*y` on order coordinates (column convention).
    pub fn right_regular_int(&self, y: &[BigInt]) -> Vec<Vec<BigInt>> {
        let n = self.rank();
        let mut m = vec![vec![BigInt::zero(); n]; n];
        for (j, yj) in y.iter().enumerate() {
            if yj.is_zero() {
                continue;
            }
            for i in 0..n {
                for (k, c) in self.consts[i][j].iter().enumerate() {
                    if !c.is_zero() {
                        m[k][i] += yj * c;
                    }
                }
            }
        }
        m
    }

    fn consts_mod(&self, q: u128) -> Vec<u128> {
        let n = self.rank();
        let qb = BigInt::from(q);
        let mut out = Vec::with_capacity(n * n * n);
        for i in 0..n {
            for j in 0..n {
                for c in &self.consts[i][j] {
                    out.push(c.mod_floor(&qb).to_u128().unwrap());
                }
            }
        }
        out
    }
}

/// Standard starting order: `Z`-span of `omega_l * 1` and `c * e_I`, where `c`
/// clears every denominator of the `Q`-structure constants.
pub fn initial_order(alg: &StructureAlgebra) -> Result<Order> {
    let n = alg.qdim();
    let mut c = BigInt::one();
    for i in 0..n {
        for j in 0..n {
            c = alg.q_products(i, j).iter().fold(c, |acc, (_, x)| acc.lcm(x.denom()));
        }
    }
    let field = alg.field();
    let mut gens: Vec<Vec<Rational>> = (0..field.degree())
        .map(|l| {
            let mut w = vec![Rational::zero(); field.degree()];
            w[l] = Rational::one();
            k_scale_q(field, &FieldElement::new(w), alg.identity_q())
        })
        .collect();
    let cq = int_rat(&c);
    for i in 0..n {
        let mut v = vec![Rational::zero(); n];
        v[i] = cq.clone();
        gens.push(v);
    }
    Order::from_generators(alg, &gens)
}

pub fn order_discriminant(order: &Order) -> BigInt {
    order.discriminant.clone()
}

fn matmul_mod(a: &[u128], b: &[u128], n: usize, q: u128) -> Vec<u128> {
    let mut out = vec![0u128; n * n];
    for i in 0..n {
        for k in 0..n {
            let x = a[i * n + k];
            if x == 0 {
                continue;
            }
            for j in 0..n {
                out[i * n + j] = (out[i * n + j] + x * b[k * n + j] % q) % q;
            }
        }
    }
    out
}

fn mulmod(a: u128, b: u128, q: u128) -> u128 {
    if q <= u64::MAX as u128 {
        a * b % q
    } else {
        ((BigInt::from(a) * BigInt::from(b)) % BigInt::from(q)).to_u128().unwrap()
    }
}

/// Local data for one prime: structure constants reduced mod `p`.
struct Local<'a> {
    order: &'a Order,
    p: u64,
    n: usize,
    cp: Vec<u64>,
}

impl<'a> Local<'a> {
    fn new(order: &'a Order, p: u64) -> Self {
        let cp = order.consts_mod(p as u128).into_iter().map(|x| x as u64).collect();
        Local { order, p, n: order.rank(), cp }
    }

    fn mul(&self, a: &[u64], b: &[u64]) -> Vec<u64> {
        let (n, p) = (self.n, self.p);
        let mut out = vec![0u64; n];
        for (i, &ai) in a.iter().enumerate() {
            if ai == 0 {
                continue;
            }
            for (j, &bj) in b.iter().enumerate() {
                if bj == 0 {
                    continue;
                }
                let ab = modp::mul(ai, bj, p);
                let row = &self.cp[(i * n + j) * n..(i * n + j + 1) * n];
                for (o, &c) in out.iter_mut().zip(row) {
                    if c != 0 {
                        *o = modp::add(*o, modp::mul(ab, c, p), p);
                    }
                }
            }
        }
        out
    }

    fn unit(&self, i: usize) -> Vec<u64> {
        let mut v = vec![0u64; self.n];
        v[i] = 1;
        v
    }

    /// Radical of `Lambda / p Lambda` via iterated trace forms
    /// `g_i(x) = Tr(L_x^(p^i)) / p^i mod p`.
    fn radical(&self) -> Vec<Vec<u64>> {
        let (n, p) = (self.n, self.p);
        let mut levels = 0u32;
        while (p as u128).pow(levels + 1) <= n as u128 {
            levels += 1;
        }
        let mut current: Vec<Vec<u64>> = (0..n).map(|i| self.unit(i)).collect();
        for i in 0..=levels {
            if current.is_empty() {
                break;
            }
            let pi = (p as u128).pow(i);
            let q = pi * p as u128;
            let cq = self.order.consts_mod(q);
            let g = |x: &[u64]| -> u64 {
                // Left-regular matrix of the lift of x, modulo q.
                let mut l = vec![0u128; n * n];
                for (a, &xa) in x.iter().enumerate() {
                    if xa == 0 {
                        continue;
                    }
                    for j in 0..n {
                        for k in 0..n {
                            let c = cq[(a * n + j) * n + k];
                            if c != 0 {
                                l[k * n + j] = (l[k * n + j] + mulmod(xa as u128, c, q)) % q;
                            }
                        }
                    }
                }
                let mut acc: Option<Vec<u128>> = None;
                let mut base = l;
                let mut e = pi;
                while e > 0 {
                    if e & 1 == 1 {
                        acc = Some(match acc {
                            None => base.clone(),
                            Some(a) => mul_mat(&a, &base, n, q),
                        });
                    }
                    e >>= 1;
                    if e > 0 {
                        base = mul_mat(&base, &base, n, q);
                    }
                }
                let m = acc.unwrap();
                let tr = (0..n).fold(0u128, |s, k| (s + m[k * n + k]) % q);
                debug_assert_eq!(tr % pi, 0, "iterated trace not divisible by p^i");
                ((tr / pi) % p as u128) as u64
            };
            let k = current.len();
            let rows: Vec<Vec<u64>> = (0..n)
                .map(|j| (0..k).map(|t| g(&self.mul(&current[t], &self.unit(j)))).collect())
                .collect();
            let ker = modp::kernel(&rows, k, p);
            let next: Vec<Vec<u64>> = ker
                .iter()
                .map(|a| {
                    let mut v = vec![0u64; n];
                    for (at, u) in a.iter().zip(&current) {
                        if *at != 0 {
                            for (x, y) in v.iter_mut().zip(u) {
                                *x = modp::add(*x, modp::mul(*at, *y, p), p);
                            }
                        }
                    }
                    v
                })
                .collect();
            current = modp::span(&next, p).0;
        }
        current
    }

    /// The order `{x : x I ⊆ I}` (or `I x ⊆ I` when `left` is false) for the
    /// ideal `I = p Lambda + lift(gens)`.
    fn multiplier_order(&self, alg: &StructureAlgebra, gens: &[Vec<u64>], left: bool) -> Result<Order> {
        let (n, p) = (self.n, self.p);
        let pb = BigInt::from(p);
        let mut rows: Vec<Vec<BigInt>> = (0..n)
            .map(|i| {
                let mut v = vec![BigInt::zero(); n];
                v[i] = pb.clone();
                v
            })
            .collect();
        rows.extend(gens.iter().map(|g| g.iter().map(|&x| BigInt::from(x)).collect()));
        let (ideal, _) = hnf_and_det(&rows);
        let mut m: Vec<Vec<u64>> = vec![Vec::with_capacity(n); n * n];
        for k in 0..n {
            let mut lk = vec![BigInt::zero(); n];
            lk[k] = BigInt::one();
            for (j, v) in ideal.rows.iter().enumerate() {
                let w = if left { self.order.mul_coords(&lk, v) } else { self.order.mul_coords(v, &lk) };
                let c = ideal
                    .coordinates(&w)
                    .ok_or_else(|| Error::Structural("lifted ideal is not a two-sided ideal".into()))?;
                for (t, ct) in c.iter().enumerate() {
                    m[j * n + t].push(modp::reduce(ct, p));
                }
            }
        }
        let ker = modp::kernel(&m, n, p);
        if ker.is_empty() {
            return Ok(self.order.clone());
        }
        let pinv = Rational::new(BigInt::one(), pb);
        let mut gens_q = self.order.basis.clone();
        for y in ker {
            let c: Vec<BigInt> = y.iter().map(|&x| BigInt::from(x)).collect();
            gens_q.push(self.order.element_q(&c).into_iter().map(|x| x * &pinv).collect());
        }
        Order::from_generators(alg, &gens_q)
    }

    /// Maximal two-sided ideals of `Lambda / p Lambda` containing the radical,
    /// one per simple component of the semisimple quotient.
    fn maximal_ideals(&self, radical: &[Vec<u64>]) -> Vec<Vec<Vec<u64>>> {
        let (n, p) = (self.n, self.p);
        let (rad, pivots) = modp::span(radical, p);
        let free: Vec<usize> = (0..n).filter(|c| !pivots.contains(c)).collect();
        let s = free.len();
        if s == 0 {
            return Vec::new();
        }
        // Arithmetic in S = Lambda / J on coordinates over the non-pivot columns.
        let lift = |z: &[u64]| {
            let mut v = vec![0u64; n];
            for (x, &c) in z.iter().zip(&free) {
                v[c] = *x;
            }
            v
        };
        let project = |v: &[u64]| {
            let mut w = v.to_vec();
            modp::reduce_mod_span(&mut w, &rad, &pivots, p);
            free.iter().map(|&c| w[c]).collect::<Vec<u64>>()
        };
        let smul = |a: &[u64], b: &[u64]| project(&self.mul(&lift(a), &lift(b)));
        let sunit = |i: usize| {
            let mut v = vec![0u64; s];
            v[i] = 1;
            v
        };
        let one_full: Vec<u64> = self.order.one.iter().map(|x| modp::reduce(x, p)).collect();
        let one = project(&one_full);
        // Center of S.
        let mut crow: Vec<Vec<u64>> = Vec::new();
        let prods: Vec<Vec<(Vec<u64>, Vec<u64>)>> = (0..s)
            .map(|a| (0..s).map(|b| (smul(&sunit(a), &sunit(b)), smul(&sunit(b), &sunit(a)))).collect())
            .collect();
        for b in 0..s {
            for c in 0..s {
                crow.push((0..s).map(|a| modp::sub(prods[a][b].0[c], prods[a][b].1[c], p)).collect());
            }
        }
        let center = modp::kernel(&crow, s, p);
        // Frobenius-fixed part {z : z^p = z} of the center.
        let pow = |z: &[u64], mut e: u64| {
            let mut acc = one.clone();
            let mut b = z.to_vec();
            while e > 0 {
                if e & 1 == 1 {
                    acc = smul(&acc, &b);
                }
                b = smul(&b, &b);
                e >>= 1;
            }
            acc
        };
        let (cb, cpiv) = modp::span(&center, p);
        let k = cb.len();
        let coords_in_center = |v: &[u64]| -> Vec<u64> { cpiv.iter().map(|&c| v[c]).collect() };
        let mut frob_rows = vec![vec![0u64; k]; k];
        for (i, z) in cb.iter().enumerate() {
            let zp = coords_in_center(&pow(z, p));
            for r in 0..k {
                frob_rows[r][i] = modp::sub(zp[r], if r == i { 1 } else { 0 }, p);
            }
        }
        let fixed: Vec<Vec<u64>> = modp::kernel(&frob_rows, k, p)
            .into_iter()
            .map(|a| {
                let mut v = vec![0u64; s];
                for (ai, z) in a.iter().zip(&cb) {
                    for (x, y) in v.iter_mut().zip(z) {
                        *x = modp::add(*x, modp::mul(*ai, *y, p), p);
                    }
                }
                v
            })
            .collect();
        if fixed.len() <= 1 {
            return Vec::new();
        }
        // Refine {1} into primitive idempotents using each element of the fixed part.
        let mut idems = vec![one.clone()];
        for b in &fixed {
            let mut next = Vec::new();
            for e in idems {
                let be = smul(b, &e);
                // Minimal polynomial of be inside eS.
                let mut powers = vec![e.clone()];
                let mut span_rows: Vec<Vec<u64>> = vec![e.clone()];
                let minpoly = loop {
                    let nextp = smul(powers.last().unwrap(), &be);
                    let (basis, piv) = modp::span(&span_rows, p);
                    if modp::in_span(&nextp, &basis, &piv, p) {
                        // Solve nextp = sum c_i powers[i].
                        let deg = powers.len();
                        let mut sys: Vec<Vec<u64>> = (0..s)
                            .map(|r| {
                                let mut row: Vec<u64> = powers.iter().map(|v| v[r]).collect();
                                row.push(nextp[r]);
                                row
                            })
                            .collect();
                        let piv = modp::rref(&mut sys, p);
                        let mut c = vec![0u64; deg];
                        for (row, &pc) in sys.iter().zip(&piv) {
                            if pc < deg {
                                c[pc] = row[deg];
                            }
                        }
                        let mut f: Vec<u64> = c.iter().map(|&x| modp::sub(0, x, p)).collect();
                        f.push(1);
                        break f;
                    }
                    span_rows.push(nextp.clone());
                    powers.push(nextp);
                };
                let roots = modp::roots(&minpoly, p);
                if roots.len() <= 1 || roots.len() != minpoly.len() - 1 {
                    next.push(e);
                    continue;
                }
                for &c in &roots {
                    let mut ec = e.clone();
                    for &c2 in &roots {
                        if c2 == c {
                            continue;
                        }
                        let scale = modp::inv(modp::sub(c, c2, p), p);
                        let factor: Vec<u64> = be
                            .iter()
                            .zip(&e)
                            .map(|(x, y)| modp::mul(modp::sub(*x, modp::mul(c2, *y, p), p), scale, p))
                            .collect();
                        ec = smul(&ec, &factor);
                    }
                    next.push(ec);
                }
            }
            idems = next;
        }
        if idems.len() <= 1 {
            return Vec::new();
        }
        idems
            .iter()
            .map(|eps| {
                let comp: Vec<u64> = one.iter().zip(eps).map(|(a, b)| modp::sub(*a, *b, p)).collect();
                let mut gens = rad.clone();
                for a in 0..s {
                    gens.push(lift(&smul(&sunit(a), &comp)));
                }
                modp::span(&gens, p).0
            })
            .collect()
    }
}

fn mul_mat(a: &[u128], b: &[u128], n: usize, q: u128) -> Vec<u128> {
    if q <= u64::MAX as u128 {
        matmul_mod(a, b, n, q)
    } else {
        let mut out = vec![0u128; n * n];
        for i in 0..n {
            for k in 0..n {
                for j in 0..n {
                    out[i * n + j] = (out[i * n + j] + mulmod(a[i * n + k], b[k * n + j], q)) % q;
                }
            }
        }
        out
    }
}

/// Radical of `Lambda / p Lambda` as an `F_p`-basis in order coordinates.
pub fn radical_mod_p(order: &Order, p: u64) -> Vec<Vec<u64>> {
    Local::new(order, p).radical()
}

/// One enlargement step at `p`: the left or right order of the radical
/// ideal, or failing that of a maximal ideal. Returns the input when none is larger.
pub fn p_enlarge(alg: &StructureAlgebra, order: &Order, p: u64) -> Result<Order> {
    if !is_probable_prime(&BigInt::from(p)) {
        return Err(Error::NotPrime(p.to_string()));
    }
    let local = Local::new(order, p);
    let rad = local.radical();
    let d0 = order.discriminant.abs();
    for left in [true, false] {
        let o = local.multiplier_order(alg, &rad, left)?;
        if o.discriminant.abs() < d0 {
            return Ok(o);
        }
    }
    for ideal in local.maximal_ideals(&rad) {
        for left in [true, false] {
            let o = local.multiplier_order(alg, &ideal, left)?;
            if o.discriminant.abs() < d0 {
                return Ok(o);
            }
        }
    }
    Ok(order.clone())
}

/// Repeats [`p_enlarge`] until the order is stable at `p`.
pub fn p_maximize(alg: &StructureAlgebra, order: &Order, p: u64) -> Result<Order> {
    let mut current = order.clone();
    loop {
        let next = p_enlarge(alg, &current, p)?;
        if next.discriminant.abs() == current.discriminant.abs() {
            return Ok(current);
        }
        current = next;
    }
}

/// A maximal order together with the discriminants seen along the way.
pub fn maximal_order_with_history(alg: &StructureAlgebra, budget: FactorBudget) -> Result<(Order, Vec<BigInt>)> {
    let mut order = initial_order(alg)?;
    let mut history = vec![order.discriminant.clone()];
    for p in square_divisors(&order.discriminant, budget)? {
        order = p_maximize(alg, &order, p)?;
        history.push(order.discriminant.clone());
    }
    Ok((order, history))
}

pub fn maximal_order(alg: &StructureAlgebra, budget: FactorBudget) -> Result<Order> {
    Ok(maximal_order_with_history(alg, budget)?.0)
}

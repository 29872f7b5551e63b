//! Fixed-precision binary arithmetic and polynomial root enclosures.
//!
//! A [`Fixed`] is a dyadic rational `mant / 2^bits`; every operation rounds to
//! the nearest representable value at the same scale, so a chain of `k`
//! operations on moderately sized values loses roughly `log2(k)` bits.
//! Certified quantities carry an explicit radius next to the value.

use std::cmp::Ordering;
use std::fmt;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_integer::{Integer, Roots};
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::exact::{Poly, Rational};

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Fixed {
    mant: BigInt,
    bits: u32,
}

impl fmt::Debug for Fixed {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:.17e}", self.to_f64())
    }
}

fn round_shift(x: BigInt, s: u32) -> BigInt {
    if s == 0 {
        return x;
    }
    (x + (BigInt::one() << (s - 1))) >> s
}

fn round_div(num: &BigInt, den: &BigInt) -> BigInt {
    let (n, d) = if den.is_negative() { (-num, -den) } else { (num.clone(), den.clone()) };
    let num2: BigInt = n * 2u32 + &d;
    num2.div_floor(&(d * 2u32))
}

impl Fixed {
    pub fn zero(bits: u32) -> Self {
        Fixed { mant: BigInt::zero(), bits }
    }

    pub fn one(bits: u32) -> Self {
        Fixed { mant: BigInt::one() << bits, bits }
    }

    pub fn from_int(n: &BigInt, bits: u32) -> Self {
        Fixed { mant: n << bits, bits }
    }

    pub fn from_i64(n: i64, bits: u32) -> Self {
        Self::from_int(&BigInt::from(n), bits)
    }

    pub fn from_rational(q: &Rational, bits: u32) -> Self {
        Fixed { mant: round_div(&(q.numer() << bits), q.denom()), bits }
    }

    pub fn from_f64(x: f64, bits: u32) -> Self {
        let q = BigRational::from_float(x).unwrap_or_else(Rational::zero);
        Self::from_rational(&q, bits)
    }

    pub fn bits(&self) -> u32 {
        self.bits
    }

    pub fn mantissa(&self) -> &BigInt {
        &self.mant
    }

    /// Exact value as a rational.
    pub fn to_rational(&self) -> Rational {
        Rational::new(self.mant.clone(), BigInt::one() << self.bits)
    }

    pub fn to_f64(&self) -> f64 {
        let top = self.mant.bits();
        if top <= 1000 {
            return self.to_rational().to_f64().unwrap_or(f64::NAN);
        }
        let shift = top - 60;
        let m = (&self.mant >> shift).to_f64().unwrap_or(f64::NAN);
        m * 2f64.powi(shift as i32 - self.bits as i32)
    }

    /// Value rounded to the nearest integer multiple of `2^-q` and scaled by `2^q`.
    pub fn scaled_integer(&self, q: u32) -> BigInt {
        if q >= self.bits {
            &self.mant << (q - self.bits)
        } else {
            round_shift(self.mant.clone(), self.bits - q)
        }
    }

    pub fn with_bits(&self, bits: u32) -> Fixed {
        Fixed { mant: self.scaled_integer(bits), bits }
    }

    pub fn ulp(&self) -> f64 {
        2f64.powi(-(self.bits as i32))
    }

    pub fn is_zero(&self) -> bool {
        self.mant.is_zero()
    }

    pub fn is_negative(&self) -> bool {
        self.mant.is_negative()
    }

    pub fn abs(&self) -> Fixed {
        Fixed { mant: self.mant.abs(), bits: self.bits }
    }

    pub fn neg(&self) -> Fixed {
        Fixed { mant: -&self.mant, bits: self.bits }
    }

    pub fn add(&self, o: &Fixed) -> Fixed {
        debug_assert_eq!(self.bits, o.bits);
        Fixed { mant: &self.mant + &o.mant, bits: self.bits }
    }

    pub fn sub(&self, o: &Fixed) -> Fixed {
        debug_assert_eq!(self.bits, o.bits);
        Fixed { mant: &self.mant - &o.mant, bits: self.bits }
    }

    pub fn mul(&self, o: &Fixed) -> Fixed {
        debug_assert_eq!(self.bits, o.bits);
        Fixed { mant: round_shift(&self.mant * &o.mant, self.bits), bits: self.bits }
    }

    pub fn mul_rational(&self, q: &Rational) -> Fixed {
        Fixed { mant: round_div(&(&self.mant * q.numer()), q.denom()), bits: self.bits }
    }

    pub fn mul_int(&self, n: &BigInt) -> Fixed {
        Fixed { mant: &self.mant * n, bits: self.bits }
    }

    pub fn div(&self, o: &Fixed) -> Fixed {
        debug_assert_eq!(self.bits, o.bits);
        assert!(!o.is_zero(), "fixed-point division by zero");
        Fixed { mant: round_div(&(&self.mant << self.bits), &o.mant), bits: self.bits }
    }

    /// Square root of a nonnegative value (floor at the working scale).
    pub fn sqrt(&self) -> Fixed {
        assert!(!self.is_negative(), "sqrt of negative fixed-point value");
        Fixed { mant: Roots::sqrt(&(&self.mant << self.bits)), bits: self.bits }
    }

    pub fn max(&self, o: &Fixed) -> Fixed {
        if self >= o {
            self.clone()
        } else {
            o.clone()
        }
    }
}

impl PartialOrd for Fixed {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Fixed {
    fn cmp(&self, other: &Self) -> Ordering {
        debug_assert_eq!(self.bits, other.bits);
        self.mant.cmp(&other.mant)
    }
}

/// Complex number with [`Fixed`] parts.
#[derive(Clone, PartialEq, Eq)]
pub struct CFixed {
    pub re: Fixed,
    pub im: Fixed,
}

impl fmt::Debug for CFixed {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({:?} + {:?}i)", self.re, self.im)
    }
}

impl CFixed {
    pub fn new(re: Fixed, im: Fixed) -> Self {
        CFixed { re, im }
    }

    pub fn zero(bits: u32) -> Self {
        CFixed { re: Fixed::zero(bits), im: Fixed::zero(bits) }
    }

    pub fn one(bits: u32) -> Self {
        CFixed { re: Fixed::one(bits), im: Fixed::zero(bits) }
    }

    pub fn real(re: Fixed) -> Self {
        let bits = re.bits;
        CFixed { re, im: Fixed::zero(bits) }
    }

    pub fn from_rational(q: &Rational, bits: u32) -> Self {
        Self::real(Fixed::from_rational(q, bits))
    }

    pub fn from_c64(z: Complex64, bits: u32) -> Self {
        CFixed { re: Fixed::from_f64(z.re, bits), im: Fixed::from_f64(z.im, bits) }
    }

    pub fn to_c64(&self) -> Complex64 {
        Complex64::new(self.re.to_f64(), self.im.to_f64())
    }

    pub fn bits(&self) -> u32 {
        self.re.bits
    }

    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    pub fn with_bits(&self, bits: u32) -> CFixed {
        CFixed { re: self.re.with_bits(bits), im: self.im.with_bits(bits) }
    }

    pub fn add(&self, o: &CFixed) -> CFixed {
        CFixed { re: self.re.add(&o.re), im: self.im.add(&o.im) }
    }

    pub fn sub(&self, o: &CFixed) -> CFixed {
        CFixed { re: self.re.sub(&o.re), im: self.im.sub(&o.im) }
    }

    pub fn neg(&self) -> CFixed {
        CFixed { re: self.re.neg(), im: self.im.neg() }
    }

    pub fn conj(&self) -> CFixed {
        CFixed { re: self.re.clone(), im: self.im.neg() }
    }

    pub fn mul(&self, o: &CFixed) -> CFixed {
        if self.im.is_zero() && o.im.is_zero() {
            return CFixed::real(self.re.mul(&o.re));
        }
        CFixed {
            re: self.re.mul(&o.re).sub(&self.im.mul(&o.im)),
            im: self.re.mul(&o.im).add(&self.im.mul(&o.re)),
        }
    }

    pub fn mul_rational(&self, q: &Rational) -> CFixed {
        CFixed { re: self.re.mul_rational(q), im: self.im.mul_rational(q) }
    }

    pub fn mul_int(&self, n: &BigInt) -> CFixed {
        CFixed { re: self.re.mul_int(n), im: self.im.mul_int(n) }
    }

    pub fn norm_sqr(&self) -> Fixed {
        self.re.mul(&self.re).add(&self.im.mul(&self.im))
    }

    pub fn abs(&self) -> Fixed {
        self.norm_sqr().sqrt()
    }

    pub fn div(&self, o: &CFixed) -> CFixed {
        if o.im.is_zero() {
            return CFixed { re: self.re.div(&o.re), im: self.im.div(&o.re) };
        }
        let d = o.norm_sqr();
        let num = self.mul(&o.conj());
        CFixed { re: num.re.div(&d), im: num.im.div(&d) }
    }
}

/// A root of a polynomial with a certified inclusion radius.
#[derive(Clone, Debug)]
pub struct RootEnclosure {
    pub value: CFixed,
    pub radius: f64,
    /// Set when the enclosure proves the root is real (real polynomials only).
    pub real: bool,
}

fn horner(coeffs: &[CFixed], z: &CFixed) -> (CFixed, CFixed) {
    let bits = z.bits();
    let mut f = CFixed::zero(bits);
    let mut df = CFixed::zero(bits);
    for c in coeffs.iter().rev() {
        df = df.mul(z).add(&f);
        f = f.mul(z).add(c);
    }
    (f, df)
}

fn aberth_f64(coeffs: &[Complex64]) -> Vec<Complex64> {
    let n = coeffs.len() - 1;
    let lead = coeffs[n];
    let monic: Vec<Complex64> = coeffs.iter().map(|c| c / lead).collect();
    let bound = 1.0 + monic[..n].iter().map(|c| c.norm()).fold(0.0, f64::max);
    let mut z: Vec<Complex64> = (0..n)
        .map(|k| {
            let ang = 2.0 * std::f64::consts::PI * (k as f64 + 0.25) / n as f64 + 0.4;
            Complex64::from_polar(bound * 0.5 + 0.1, ang)
        })
        .collect();
    let eval = |x: Complex64| {
        let mut f = Complex64::new(0.0, 0.0);
        let mut df = Complex64::new(0.0, 0.0);
        for c in monic.iter().rev() {
            df = df * x + f;
            f = f * x + c;
        }
        (f, df)
    };
    for _ in 0..500 {
        let mut moved = 0.0f64;
        for i in 0..n {
            let (f, df) = eval(z[i]);
            if f.norm() == 0.0 {
                continue;
            }
            let ratio = f / df;
            let s: Complex64 = (0..n).filter(|&j| j != i).map(|j| 1.0 / (z[i] - z[j])).sum();
            let w = ratio / (1.0 - ratio * s);
            if w.is_finite() {
                z[i] -= w;
                moved = moved.max(w.norm() / (1.0 + z[i].norm()));
            }
        }
        if moved < 1e-15 {
            break;
        }
    }
    z
}

/// All complex roots of a polynomial (lowest degree first), refined by Newton
/// at the working precision of the coefficients. Each root comes with an
/// inclusion radius `deg * |f(z)| / |f'(z)|` inflated for rounding. Returns
/// `None` when the enclosures are not pairwise disjoint (clustered roots).
pub fn complex_roots(coeffs: &[CFixed], real_coefficients: bool) -> Option<Vec<RootEnclosure>> {
    let deg = coeffs.len().checked_sub(1)?;
    if deg == 0 {
        return Some(Vec::new());
    }
    let bits = coeffs[0].bits();
    let approx: Vec<Complex64> = coeffs.iter().map(CFixed::to_c64).collect();
    let starts = aberth_f64(&approx);
    let mut out = Vec::with_capacity(deg);
    let tol = 2f64.powi(-(bits as i32) + 8);
    for s in starts {
        let mut z = CFixed::from_c64(s, bits);
        for _ in 0..(8 + 2 * (bits as usize).ilog2() as usize + 8) {
            let (f, df) = horner(coeffs, &z);
            if df.is_zero() {
                return None;
            }
            let step = f.div(&df);
            z = z.sub(&step);
            if step.to_c64().norm() <= tol * (1.0 + z.to_c64().norm()) {
                break;
            }
        }
        let (f, df) = horner(coeffs, &z);
        let dfa = df.to_c64().norm();
        if dfa == 0.0 {
            return None;
        }
        // Rounding in Horner adds a few ulps per step relative to the coefficient scale.
        let scale: f64 = coeffs.iter().map(|c| c.to_c64().norm()).sum::<f64>()
            * (1.0 + z.to_c64().norm()).powi(deg as i32);
        let fa = f.to_c64().norm() + 4.0 * (deg as f64 + 1.0) * scale * 2f64.powi(-(bits as i32));
        let radius = (deg as f64 * fa / dfa) * (1.0 + 1e-9) + 2f64.powi(-(bits as i32) + 2);
        out.push(RootEnclosure { value: z, radius, real: false });
    }
    for i in 0..deg {
        for j in i + 1..deg {
            let d = out[i].value.sub(&out[j].value).to_c64().norm();
            if d <= out[i].radius + out[j].radius {
                return None;
            }
        }
    }
    if real_coefficients {
        // An isolated disc that meets the real axis contains a real root, since
        // non-real roots come in conjugate pairs and the pair would share the disc.
        for r in &mut out {
            if r.value.im.to_f64().abs() <= r.radius {
                r.real = true;
                r.value.im = Fixed::zero(bits);
            }
        }
    }
    Some(out)
}

/// Sturm sequence of a squarefree rational polynomial.
pub fn sturm_sequence(f: &Poly) -> Vec<Poly> {
    let mut seq = vec![f.clone(), f.derivative()];
    loop {
        let n = seq.len();
        let r = seq[n - 2].div_rem(&seq[n - 1]).1;
        if r.is_zero() {
            break;
        }
        seq.push(r.scale(&-Rational::one()));
    }
    seq
}

fn sign_changes(seq: &[Poly], x: &Rational) -> usize {
    let signs: Vec<i8> = seq
        .iter()
        .map(|p| {
            let v = p.eval(x);
            if v.is_positive() {
                1
            } else if v.is_negative() {
                -1
            } else {
                0
            }
        })
        .filter(|&s| s != 0)
        .collect();
    signs.windows(2).filter(|w| w[0] != w[1]).count()
}

/// Cauchy bound: every root has absolute value below this.
pub fn root_bound(f: &Poly) -> Rational {
    let lead = f.leading().expect("nonzero").abs();
    let max = f.coeffs()[..f.coeffs().len() - 1].iter().map(|c| c.abs()).max().unwrap_or_default();
    Rational::one() + max / lead
}

/// Number of real roots of a squarefree polynomial (Sturm).
pub fn count_real_roots(f: &Poly) -> usize {
    let seq = sturm_sequence(f);
    let b = root_bound(f);
    sign_changes(&seq, &-b.clone()) - sign_changes(&seq, &b)
}

/// Isolating intervals for the real roots of a squarefree polynomial, refined
/// by bisection until each has width below `2^-bits`; ascending order.
pub fn real_root_intervals(f: &Poly, bits: u32) -> Vec<(Rational, Rational)> {
    let seq = sturm_sequence(f);
    let b = root_bound(f);
    let mut stack = vec![(-b.clone(), b)];
    let mut isolated = Vec::new();
    while let Some((lo, hi)) = stack.pop() {
        let count = sign_changes(&seq, &lo) - sign_changes(&seq, &hi);
        match count {
            0 => {}
            1 => isolated.push((lo, hi)),
            _ => {
                let mid = (&lo + &hi) / Rational::from_integer(2.into());
                stack.push((lo, mid.clone()));
                stack.push((mid, hi));
            }
        }
    }
    let eps = Rational::new(BigInt::one(), BigInt::one() << bits);
    let mut out: Vec<(Rational, Rational)> = isolated
        .into_iter()
        .map(|(mut lo, mut hi)| {
            // Roots sit in (lo, hi]; bisect on sign of f.
            if f.eval(&hi).is_zero() {
                return (hi.clone(), hi);
            }
            let s_hi = f.eval(&hi).is_positive();
            while &hi - &lo > eps {
                let mid = (&lo + &hi) / Rational::from_integer(2.into());
                let v = f.eval(&mid);
                if v.is_zero() {
                    return (mid.clone(), mid);
                }
                if v.is_positive() == s_hi {
                    hi = mid;
                } else {
                    lo = mid;
                }
            }
            (lo, hi)
        })
        .collect();
    out.sort_by(|a, b| a.0.cmp(&b.0));
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::{rat, ratio};

    const B: u32 = 96;

    #[test]
    fn fixed_arithmetic() {
        let a = Fixed::from_rational(&ratio(1, 3), B);
        let b = Fixed::from_i64(3, B);
        let p = a.mul(&b);
        assert!((p.to_f64() - 1.0).abs() < 1e-25);
        let s = Fixed::from_i64(2, B).sqrt();
        assert!((s.to_f64() - std::f64::consts::SQRT_2).abs() < 1e-15);
        let q = Fixed::from_i64(1, B).div(&Fixed::from_i64(-7, B));
        assert!((q.to_f64() + 1.0 / 7.0).abs() < 1e-16);
        assert_eq!(Fixed::from_i64(5, B).scaled_integer(0), BigInt::from(5));
    }

    #[test]
    fn complex_division() {
        let i = CFixed::new(Fixed::zero(B), Fixed::one(B));
        let z = CFixed::one(B).div(&i);
        assert!((z.to_c64() - Complex64::new(0.0, -1.0)).norm() < 1e-20);
    }

    #[test]
    fn roots_of_x2_plus_1() {
        let coeffs: Vec<CFixed> = [1, 0, 1].iter().map(|&c| CFixed::from_rational(&rat(c), B)).collect();
        let roots = complex_roots(&coeffs, true).unwrap();
        assert_eq!(roots.len(), 2);
        assert!(roots.iter().all(|r| !r.real));
        let mut ims: Vec<f64> = roots.iter().map(|r| r.value.im.to_f64()).collect();
        ims.sort_by(f64::total_cmp);
        assert!((ims[0] + 1.0).abs() < 1e-20 && (ims[1] - 1.0).abs() < 1e-20);
    }

    #[test]
    fn real_roots_certified() {
        let coeffs: Vec<CFixed> = [-5, 0, 1].iter().map(|&c| CFixed::from_rational(&rat(c), B)).collect();
        let roots = complex_roots(&coeffs, true).unwrap();
        assert!(roots.iter().all(|r| r.real && r.radius < 1e-20));
        let f = Poly::from_i64(&[-5, 0, 1]);
        assert_eq!(count_real_roots(&f), 2);
        let iv = real_root_intervals(&f, 60);
        assert_eq!(iv.len(), 2);
        let hi = iv[1].1.to_f64().unwrap();
        assert!((hi - 5f64.sqrt()).abs() < 1e-15);
        assert_eq!(count_real_roots(&Poly::from_i64(&[1, 0, 1])), 0);
    }

    #[test]
    fn clustered_roots_rejected() {
        // (x - 1)^2 has a double root; no disjoint enclosures exist.
        let coeffs: Vec<CFixed> = [1, -2, 1].iter().map(|&c| CFixed::from_rational(&rat(c), B)).collect();
        assert!(complex_roots(&coeffs, true).is_none());
    }
}

//! Exact rational arithmetic and linear algebra.
//!
//! Every decision that affects the output of the splitting pipeline (ranks,
//! zero divisors, idempotents, order membership) is made here, over `Q` or
//! `Z`, never with floating point.

mod hnf;
mod matrix;
pub mod modp;
mod poly;
mod subspace;

pub use hnf::{hnf_and_det, Hnf};
pub use matrix::{bareiss_det, bareiss_rank, solve_and_kernel, ExactMatrix, SolveResult};
pub use poly::{min_char_poly, Poly};
pub use subspace::Subspace;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

/// Arbitrary-precision rational; always stored reduced with positive denominator.
pub type Rational = BigRational;

pub fn rat(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

pub fn ratio(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

pub fn int_rat(n: &BigInt) -> Rational {
    Rational::from_integer(n.clone())
}

/// Formats a rational in the canonical `p` / `p/q` form used by the file formats.
pub fn format_rational(q: &Rational) -> String {
    if q.denom().is_one() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

/// Parses a canonical rational string: `p` or `p/q` with `q > 1` and `gcd(p, q) = 1`.
pub fn parse_rational(s: &str) -> Result<Rational> {
    let bad = || Error::Parse(format!("not a canonical rational: {s:?}"));
    let parse_int = |t: &str| -> Result<BigInt> {
        if t.is_empty() || t.starts_with('+') || (t.len() > 1 && t.starts_with('0')) || t.starts_with("-0") {
            return Err(bad());
        }
        t.parse::<BigInt>().map_err(|_| bad())
    };
    match s.split_once('/') {
        None => Ok(Rational::from_integer(parse_int(s)?)),
        Some((p, q)) => {
            let p = parse_int(p)?;
            let q = parse_int(q)?;
            if !q.is_positive() || q.is_one() || !p.gcd(&q).is_one() {
                return Err(bad());
            }
            Ok(Rational::new_raw(p, q))
        }
    }
}

/// Least common multiple of the denominators of a sequence of rationals.
pub fn denominator_lcm<'a>(xs: impl IntoIterator<Item = &'a Rational>) -> BigInt {
    xs.into_iter().fold(BigInt::one(), |acc, x| acc.lcm(x.denom()))
}

/// Scales a rational vector to a primitive-free integer vector by the lcm of denominators.
pub fn clear_denominators(xs: &[Rational]) -> (Vec<BigInt>, BigInt) {
    let l = denominator_lcm(xs);
    let v = xs.iter().map(|x| (x * int_rat(&l)).to_integer()).collect();
    (v, l)
}

pub fn is_zero_vec(v: &[Rational]) -> bool {
    v.iter().all(Zero::is_zero)
}

pub fn dot(a: &[Rational], b: &[Rational]) -> Rational {
    a.iter().zip(b).fold(Rational::zero(), |acc, (x, y)| acc + x * y)
}

/// Rounds to the nearest integer, ties away from zero.
pub fn round_rational(q: &Rational) -> BigInt {
    q.round().to_integer()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn canonical_rationals_round_trip() {
        for s in ["0", "-3", "7/2", "-1/12", "123456789012345678901234567890"] {
            assert_eq!(format_rational(&parse_rational(s).unwrap()), s);
        }
    }

    #[test]
    fn non_canonical_rationals_rejected() {
        for s in ["2/4", "3/1", "1/-2", "+1", "01", "-0", "", "1/0", "a"] {
            assert!(parse_rational(s).is_err(), "{s}");
        }
    }
}

//! Integer factorization by trial division followed by Pollard–Brent rho.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

pub const TRIAL_LIMIT: u64 = 1_000_000;

/// Iteration budget for rho, summed over all cofactors.
#[derive(Debug, Clone, Copy)]
pub struct FactorBudget {
    pub rho_iterations: u64,
}

impl Default for FactorBudget {
    fn default() -> Self {
        FactorBudget { rho_iterations: 5_000_000 }
    }
}

/// Miller–Rabin with the first twelve prime bases (deterministic below `3.3 * 10^24`).
pub fn is_probable_prime(n: &BigInt) -> bool {
    let two = BigInt::from(2);
    if n < &two {
        return false;
    }
    const BASES: [u32; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];
    for b in BASES {
        let b = BigInt::from(b);
        if *n == b {
            return true;
        }
        if n.is_multiple_of(&b) {
            return false;
        }
    }
    let nm1 = n - 1u32;
    let s = nm1.trailing_zeros().unwrap_or(0);
    let d = &nm1 >> s;
    'outer: for b in BASES {
        let mut x = BigInt::from(b).modpow(&d, n);
        if x.is_one() || x == nm1 {
            continue;
        }
        for _ in 1..s {
            x = (&x * &x) % n;
            if x == nm1 {
                continue 'outer;
            }
        }
        return false;
    }
    true
}

/// Prime factorization of `|n|` as `(p, e)` pairs sorted by `p`.
pub fn factorize(n: &BigInt, budget: FactorBudget) -> Result<Vec<(BigInt, u32)>> {
    let mut n = n.abs();
    if n.is_zero() {
        return Err(Error::Structural("cannot factor zero".into()));
    }
    let mut out: Vec<(BigInt, u32)> = Vec::new();
    let push = |p: BigInt, out: &mut Vec<(BigInt, u32)>| match out.iter_mut().find(|(q, _)| *q == p) {
        Some((_, e)) => *e += 1,
        None => out.push((p, 1)),
    };
    let mut p = 2u64;
    while p <= TRIAL_LIMIT {
        let bp = BigInt::from(p);
        if &bp * &bp > n {
            break;
        }
        while n.is_multiple_of(&bp) {
            n /= &bp;
            push(bp.clone(), &mut out);
        }
        p += if p == 2 { 1 } else { 2 };
    }
    let mut remaining = budget.rho_iterations;
    let mut stack = vec![n];
    while let Some(m) = stack.pop() {
        if m.is_one() {
            continue;
        }
        let bound = BigInt::from(TRIAL_LIMIT);
        if m <= &bound * &bound || is_probable_prime(&m) {
            push(m, &mut out);
            continue;
        }
        if let Some(r) = perfect_power_root(&m) {
            let e = perfect_power_exponent(&m, &r);
            for _ in 0..e {
                stack.push(r.clone());
            }
            continue;
        }
        match rho(&m, &mut remaining) {
            Some(f) => {
                let g = &m / &f;
                stack.push(f);
                stack.push(g);
            }
            None => return Err(Error::FactoringBudget(m.to_string())),
        }
    }
    out.sort();
    Ok(out)
}

fn perfect_power_root(m: &BigInt) -> Option<BigInt> {
    let bits = m.bits() as u32;
    for k in (2..=bits).rev() {
        let r = m.nth_root(k);
        if r > BigInt::one() && num_traits::pow(r.clone(), k as usize) == *m {
            return Some(r);
        }
    }
    None
}

fn perfect_power_exponent(m: &BigInt, r: &BigInt) -> u32 {
    let mut e = 0;
    let mut x = m.clone();
    while x.is_multiple_of(r) && !x.is_one() {
        x /= r;
        e += 1;
    }
    e
}

/// Brent's variant of Pollard rho; a nontrivial factor or `None` if the budget runs out.
fn rho(n: &BigInt, remaining: &mut u64) -> Option<BigInt> {
    let mut c = BigInt::one();
    while *remaining > 0 {
        let f = |x: &BigInt| (x * x + &c) % n;
        let mut y = BigInt::from(2);
        let mut r = 1u64;
        let mut q = BigInt::one();
        let mut g = BigInt::one();
        let mut x = y.clone();
        let mut ys = y.clone();
        const M: u64 = 128;
        while g.is_one() {
            x = y.clone();
            for _ in 0..r {
                y = f(&y);
            }
            let mut k = 0;
            while k < r && g.is_one() {
                ys = y.clone();
                for _ in 0..M.min(r - k) {
                    y = f(&y);
                    q = (q * (&x - &y).abs()) % n;
                }
                g = q.gcd(n);
                k += M;
                *remaining = remaining.saturating_sub(M.min(r));
                if *remaining == 0 && g.is_one() {
                    return None;
                }
            }
            r *= 2;
        }
        if &g == n {
            loop {
                ys = f(&ys);
                g = (&x - &ys).abs().gcd(n);
                if !g.is_one() {
                    break;
                }
            }
        }
        if &g != n {
            return Some(g);
        }
        c += 1u32;
    }
    None
}

/// Primes `p` with `p^2` dividing `n`.
pub fn square_divisors(n: &BigInt, budget: FactorBudget) -> Result<Vec<u64>> {
    factorize(n, budget)?
        .into_iter()
        .filter(|(_, e)| *e >= 2)
        .map(|(p, _)| p.to_u64().ok_or_else(|| Error::FactoringBudget(format!("prime {p} too large for local computations"))))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn b(x: u128) -> BigInt {
        BigInt::from(x)
    }

    #[test]
    fn small_factorizations() {
        let f = factorize(&b(19683), FactorBudget::default()).unwrap();
        assert_eq!(f, vec![(b(3), 9)]);
        let f = factorize(&b(1024 * 9 * 7), FactorBudget::default()).unwrap();
        assert_eq!(f, vec![(b(2), 10), (b(3), 2), (b(7), 1)]);
        assert_eq!(factorize(&b(1), FactorBudget::default()).unwrap(), vec![]);
        assert_eq!(factorize(&BigInt::from(-16), FactorBudget::default()).unwrap(), vec![(b(2), 4)]);
    }

    #[test]
    fn large_semiprime_via_rho() {
        let p = 1_000_003u128;
        let q = 1_000_033u128;
        let f = factorize(&b(p * p * q), FactorBudget::default()).unwrap();
        assert_eq!(f, vec![(b(p), 2), (b(q), 1)]);
        assert_eq!(square_divisors(&b(p * p * q), FactorBudget::default()).unwrap(), vec![p as u64]);
    }

    #[test]
    fn budget_exhaustion_reports_cofactor() {
        let p = 1_000_000_007u128;
        let q = 998_244_353u128;
        let err = factorize(&b(p * q * 4), FactorBudget { rho_iterations: 1 }).unwrap_err();
        assert_eq!(err, Error::FactoringBudget((p * q).to_string()));
    }

    #[test]
    fn primality() {
        assert!(is_probable_prime(&b(1_000_000_007)));
        assert!(!is_probable_prime(&b(561)));
        assert!(!is_probable_prime(&b(1_000_003 * 1_000_033)));
    }
}

//! Linear algebra over the prime field `F_p`, `p < 2^63`.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::ToPrimitive;

#[inline]
pub fn mul(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 * b as u128) % p as u128) as u64
}

#[inline]
pub fn add(a: u64, b: u64, p: u64) -> u64 {
    let s = a as u128 + b as u128;
    (s % p as u128) as u64
}

#[inline]
pub fn sub(a: u64, b: u64, p: u64) -> u64 {
    if a >= b {
        a - b
    } else {
        p - (b - a)
    }
}

pub fn pow(mut a: u64, mut e: u64, p: u64) -> u64 {
    let mut r = 1 % p;
    a %= p;
    while e > 0 {
        if e & 1 == 1 {
            r = mul(r, a, p);
        }
        a = mul(a, a, p);
        e >>= 1;
    }
    r
}

pub fn inv(a: u64, p: u64) -> u64 {
    debug_assert!(!a.is_multiple_of(p));
    pow(a, p - 2, p)
}

/// Reduces a big integer into `[0, p)`.
pub fn reduce(x: &BigInt, p: u64) -> u64 {
    x.mod_floor(&BigInt::from(p)).to_u64().expect("residue fits")
}

/// In-place reduced row echelon form; returns pivot columns.
pub fn rref(rows: &mut Vec<Vec<u64>>, p: u64) -> Vec<usize> {
    let ncols = rows.first().map_or(0, Vec::len);
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..ncols {
        if r == rows.len() {
            break;
        }
        let Some(piv) = (r..rows.len()).find(|&i| rows[i][c] != 0) else { continue };
        rows.swap(piv, r);
        let iv = inv(rows[r][c], p);
        for x in rows[r].iter_mut() {
            *x = mul(*x, iv, p);
        }
        let prow = rows[r].clone();
        for (i, row) in rows.iter_mut().enumerate() {
            if i == r || row[c] == 0 {
                continue;
            }
            let f = row[c];
            for (x, y) in row.iter_mut().zip(&prow) {
                *x = sub(*x, mul(f, *y, p), p);
            }
        }
        pivots.push(c);
        r += 1;
    }
    rows.truncate(r);
    pivots
}

/// Basis of `{x : M x = 0}` for `M` given by rows with `ncols` columns.
pub fn kernel(rows: &[Vec<u64>], ncols: usize, p: u64) -> Vec<Vec<u64>> {
    let mut m = rows.to_vec();
    let pivots = rref(&mut m, p);
    let mut is_pivot = vec![false; ncols];
    for &c in &pivots {
        is_pivot[c] = true;
    }
    (0..ncols)
        .filter(|&f| !is_pivot[f])
        .map(|f| {
            let mut x = vec![0u64; ncols];
            x[f] = 1;
            for (row, &pc) in m.iter().zip(&pivots) {
                x[pc] = sub(0, row[f], p);
            }
            x
        })
        .collect()
}

/// Basis (in RREF) of the span of the given vectors.
pub fn span(vectors: &[Vec<u64>], p: u64) -> (Vec<Vec<u64>>, Vec<usize>) {
    let mut m = vectors.to_vec();
    let piv = rref(&mut m, p);
    (m, piv)
}

/// Reduces `v` modulo a subspace given in RREF with its pivots.
pub fn reduce_mod_span(v: &mut [u64], basis: &[Vec<u64>], pivots: &[usize], p: u64) {
    for (row, &pc) in basis.iter().zip(pivots) {
        let f = v[pc];
        if f != 0 {
            for (x, y) in v.iter_mut().zip(row) {
                *x = sub(*x, mul(f, *y, p), p);
            }
        }
    }
}

pub fn in_span(v: &[u64], basis: &[Vec<u64>], pivots: &[usize], p: u64) -> bool {
    let mut w = v.to_vec();
    reduce_mod_span(&mut w, basis, pivots, p);
    w.iter().all(|&x| x == 0)
}

pub fn trim(mut a: Vec<u64>) -> Vec<u64> {
    while a.last() == Some(&0) {
        a.pop();
    }
    a
}

pub fn poly_rem(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
    let mut r = trim(a.to_vec());
    let db = b.len() - 1;
    let inv = inv(b[db], p);
    while r.len() > db {
        let k = r.len() - 1 - db;
        let c = mul(*r.last().unwrap(), inv, p);
        for (i, bc) in b.iter().enumerate() {
            r[k + i] = sub(r[k + i], mul(c, *bc, p), p);
        }
        r = trim(r);
    }
    r
}

pub fn poly_mulmod(a: &[u64], b: &[u64], m: &[u64], p: u64) -> Vec<u64> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![0u64; a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i + j] = add(out[i + j], mul(*x, *y, p), p);
        }
    }
    poly_rem(&out, m, p)
}

pub fn poly_gcd(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
    let (mut a, mut b) = (trim(a.to_vec()), trim(b.to_vec()));
    while !b.is_empty() {
        let r = poly_rem(&a, &b, p);
        a = b;
        b = r;
    }
    a
}

pub fn poly_div_exact(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
    let mut r = trim(a.to_vec());
    let db = b.len() - 1;
    let inv = inv(b[db], p);
    let mut q = vec![0u64; r.len().saturating_sub(db)];
    while r.len() > db {
        let k = r.len() - 1 - db;
        let c = mul(*r.last().unwrap(), inv, p);
        q[k] = c;
        for (i, bc) in b.iter().enumerate() {
            r[k + i] = sub(r[k + i], mul(c, *bc, p), p);
        }
        r.pop();
    }
    q
}


/// `base^e mod (m, p)`.
pub fn poly_powmod(base: &[u64], mut e: u64, m: &[u64], p: u64) -> Vec<u64> {
    let mut acc = vec![1u64 % p];
    let mut b = poly_rem(base, m, p);
    while e > 0 {
        if e & 1 == 1 {
            acc = poly_mulmod(&acc, &b, m, p);
        }
        b = poly_mulmod(&b, &b, m, p);
        e >>= 1;
    }
    poly_rem(&acc, m, p)
}

pub fn poly_eval(f: &[u64], x: u64, p: u64) -> u64 {
    f.iter().rev().fold(0, |acc, c| add(mul(acc, x, p), *c, p))
}

/// Distinct roots in `F_p` of a nonzero polynomial (lowest degree first), ascending.
pub fn roots(f: &[u64], p: u64) -> Vec<u64> {
    let f = trim(f.to_vec());
    if f.len() <= 1 {
        return Vec::new();
    }
    if p < 4096 {
        return (0..p).filter(|&x| poly_eval(&f, x, p) == 0).collect();
    }
    // Split off the product of the linear factors: gcd(f, x^p - x).
    let mut xp = poly_powmod(&[0, 1], p, &f, p);
    xp.resize(xp.len().max(2), 0);
    xp[1] = sub(xp[1], 1, p);
    let g = poly_gcd(&f, &trim(xp), p);
    let mut out = Vec::new();
    let mut stack = vec![g];
    let mut shift = 1u64;
    while let Some(h) = stack.pop() {
        let deg = h.len() - 1;
        if deg == 0 {
            continue;
        }
        if deg == 1 {
            let inv = inv(h[1], p);
            out.push(sub(0, mul(h[0], inv, p), p));
            continue;
        }
        // Equal-degree splitting with (x + shift)^((p-1)/2) - 1.
        loop {
            let mut t = poly_powmod(&[shift % p, 1], (p - 1) / 2, &h, p);
            shift += 1;
            if t.is_empty() {
                continue;
            }
            t[0] = sub(t[0], 1, p);
            let d = poly_gcd(&h, &trim(t), p);
            if d.len() > 1 && d.len() < h.len() {
                let q = poly_div_exact(&h, &d, p);
                stack.push(d);
                stack.push(q);
                break;
            }
        }
    }
    out.sort_unstable();
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn kernel_mod_3() {
        let rows = vec![vec![1, 2, 0], vec![2, 1, 0]];
        // second row = 2 * first mod 3
        let k = kernel(&rows, 3, 3);
        assert_eq!(k.len(), 2);
        for x in &k {
            for r in &rows {
                let s = r.iter().zip(x).fold(0, |acc, (a, b)| add(acc, mul(*a, *b, 3), 3));
                assert_eq!(s, 0);
            }
        }
    }

    #[test]
    fn inverse_and_reduction() {
        assert_eq!(mul(inv(3, 7), 3, 7), 1);
        assert_eq!(reduce(&BigInt::from(-1), 5), 4);
        let (b, piv) = span(&[vec![1, 1], vec![2, 2]], 5);
        assert_eq!(b.len(), 1);
        assert!(in_span(&[3, 3], &b, &piv, 5));
        assert!(!in_span(&[1, 0], &b, &piv, 5));
    }

    #[test]
    fn polynomial_roots() {
        // (x - 3)(x - 5)(x^2 + 1) over F_7 and over a large prime.
        for p in [7u64, 1_000_003] {
            let lin = poly_mulmod(&[sub(0, 3, p), 1], &[sub(0, 5, p), 1], &[0, 0, 0, 0, 0, 1], p);
            let f = poly_mulmod(&lin, &[1, 0, 1], &[0, 0, 0, 0, 0, 0, 1], p);
            // x^2 + 1 has no roots since both primes are 3 mod 4.
            assert_eq!(roots(&f, p), vec![3, 5]);
        }
    }
}

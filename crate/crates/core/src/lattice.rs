//! Exact integral LLL reduction, the reducedness certificate, and the
//! coefficient-box, shell and ball enumerations used by the splitter.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::numeric::Fixed;

/// Result of [`lll_integral`]: `reduced = transform * basis`.
#[derive(Debug, Clone, PartialEq)]
pub struct LllOutput {
    pub reduced: Vec<Vec<BigInt>>,
    pub transform: Vec<Vec<BigInt>>,
}

fn idot(a: &[BigInt], b: &[BigInt]) -> BigInt {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn axpy(dst: &mut [BigInt], q: &BigInt, src: &[BigInt]) {
    for (d, s) in dst.iter_mut().zip(src) {
        *d -= q * s;
    }
}

/// All-integer LLL with parameter `delta = num/den`, tracking the unimodular transform.
///
/// Fails if the rows are linearly dependent.
pub fn lll_integral(basis: &[Vec<BigInt>], delta: (i64, i64)) -> Result<LllOutput> {
    let n = basis.len();
    let mut b = basis.to_vec();
    let mut h: Vec<Vec<BigInt>> = (0..n)
        .map(|i| (0..n).map(|j| if i == j { BigInt::one() } else { BigInt::zero() }).collect())
        .collect();
    if n == 0 {
        return Ok(LllOutput { reduced: b, transform: h });
    }
    let (dp, dn) = (BigInt::from(delta.0), BigInt::from(delta.1));
    // 1-based bookkeeping: d[0] = 1, lam[k][j] for j < k.
    let mut d = vec![BigInt::zero(); n + 1];
    let mut lam = vec![vec![BigInt::zero(); n + 1]; n + 1];
    d[0] = BigInt::one();
    d[1] = idot(&b[0], &b[0]);
    if d[1].is_zero() {
        return Err(Error::Structural("LLL input is degenerate".into()));
    }
    let mut k = 2;
    let mut kmax = 1;
    while k <= n {
        if k > kmax {
            kmax = k;
            for j in 1..=k {
                let mut u = idot(&b[k - 1], &b[j - 1]);
                for i in 1..j {
                    u = (&d[i] * &u - &lam[k][i] * &lam[j][i]) / &d[i - 1];
                }
                if j < k {
                    lam[k][j] = u;
                } else {
                    if u.is_zero() {
                        return Err(Error::Structural("LLL input is degenerate".into()));
                    }
                    d[k] = u;
                }
            }
        }
        loop {
            red(k, k - 1, &mut b, &mut h, &d, &mut lam);
            let lhs = &dn * &d[k] * &d[k - 2];
            let rhs = &dp * &d[k - 1] * &d[k - 1] - &dn * &lam[k][k - 1] * &lam[k][k - 1];
            if lhs < rhs {
                swap(k, kmax, &mut b, &mut h, &mut d, &mut lam);
                k = (k - 1).max(2);
                continue;
            }
            for l in (1..k - 1).rev() {
                red(k, l, &mut b, &mut h, &d, &mut lam);
            }
            k += 1;
            break;
        }
    }
    Ok(LllOutput { reduced: b, transform: h })
}

fn red(k: usize, l: usize, b: &mut [Vec<BigInt>], h: &mut [Vec<BigInt>], d: &[BigInt], lam: &mut [Vec<BigInt>]) {
    let two_lam: BigInt = &lam[k][l] * 2u32;
    if two_lam.abs() <= d[l] {
        return;
    }
    let q = (two_lam + &d[l]).div_floor(&(&d[l] * 2u32));
    let (bl, hl) = (b[l - 1].clone(), h[l - 1].clone());
    axpy(&mut b[k - 1], &q, &bl);
    axpy(&mut h[k - 1], &q, &hl);
    lam[k][l] -= &q * &d[l];
    for i in 1..l {
        let t = &q * &lam[l][i];
        lam[k][i] -= t;
    }
}

fn swap(k: usize, kmax: usize, b: &mut [Vec<BigInt>], h: &mut [Vec<BigInt>], d: &mut [BigInt], lam: &mut [Vec<BigInt>]) {
    b.swap(k - 1, k - 2);
    h.swap(k - 1, k - 2);
    for j in 1..k - 1 {
        let t = lam[k][j].clone();
        lam[k][j] = std::mem::replace(&mut lam[k - 1][j], t);
    }
    let l = lam[k][k - 1].clone();
    let big_b = (&d[k - 2] * &d[k] + &l * &l) / &d[k - 1];
    for i in k + 1..=kmax {
        let t = lam[i][k].clone();
        lam[i][k] = (&d[k] * &lam[i][k - 1] - &l * &t) / &d[k - 1];
        lam[i][k - 1] = (&big_b * &t + &l * &lam[i][k]) / &d[k];
    }
    d[k - 1] = big_b;
}

/// `log2` of `gamma_m^{m/2}` for the Hermite constant, exact values for `m <= 8`
/// and the crude bound `m^{m/2}` beyond.
fn log2_hermite_power(m: usize) -> f64 {
    let v: f64 = match m {
        0 | 1 => 1.0,
        2 => 4.0 / 3.0,
        3 => 2f64.sqrt(),
        4 => 2.0,
        5 => 2.0 * 2f64.sqrt(),
        6 => 8.0 / 3f64.sqrt(),
        7 => 8.0,
        8 => 16.0,
        _ => return (m as f64 / 2.0) * (m as f64).log2(),
    };
    v.log2()
}

/// `log2 c_m` with `c_m = gamma_m^{m/2} (3/2)^m 2^{m(m-1)/2}`.
pub fn log2_reducedness_constant(m: usize) -> f64 {
    let mf = m as f64;
    log2_hermite_power(m) + mf * 1.5f64.log2() + mf * (mf - 1.0) / 2.0
}

pub fn reducedness_constant(m: usize) -> f64 {
    log2_reducedness_constant(m).exp2()
}

/// Gram–Schmidt data of a basis, in floating point.
#[derive(Debug, Clone)]
pub struct GramSchmidt {
    pub mu: Vec<Vec<f64>>,
    pub bstar_sq: Vec<f64>,
}

impl GramSchmidt {
    /// Computes the decomposition at the precision of the given vectors.
    pub fn of(vectors: &[Vec<Fixed>]) -> GramSchmidt {
        let m = vectors.len();
        let bits = vectors.first().and_then(|v| v.first()).map_or(64, Fixed::bits);
        let dot = |a: &[Fixed], b: &[Fixed]| a.iter().zip(b).fold(Fixed::zero(bits), |acc, (x, y)| acc.add(&x.mul(y)));
        let mut stars: Vec<Vec<Fixed>> = Vec::with_capacity(m);
        let mut norms: Vec<Fixed> = Vec::with_capacity(m);
        let mut mu = vec![vec![0.0; m]; m];
        for i in 0..m {
            let mut v = vectors[i].clone();
            for j in 0..i {
                let c = if norms[j].is_zero() { Fixed::zero(bits) } else { dot(&vectors[i], &stars[j]).div(&norms[j]) };
                mu[i][j] = c.to_f64();
                for (x, y) in v.iter_mut().zip(&stars[j]) {
                    *x = x.sub(&c.mul(y));
                }
            }
            norms.push(dot(&v, &v));
            stars.push(v);
        }
        GramSchmidt { mu, bstar_sq: norms.iter().map(Fixed::to_f64).collect() }
    }

    pub fn log2_det(&self) -> f64 {
        self.bstar_sq.iter().map(|x| 0.5 * x.log2()).sum()
    }
}

/// A reduced basis of `Phi(Lambda)` together with its certificate data.
#[derive(Debug, Clone)]
pub struct ReducedBasis {
    /// Rows are order coordinates of the reduced vectors (unimodular).
    pub transform: Vec<Vec<BigInt>>,
    /// `Phi` of the reduced vectors.
    pub vectors: Vec<Vec<Fixed>>,
    pub lengths: Vec<f64>,
    /// Error radius of each entry of `lengths`.
    pub length_errors: Vec<f64>,
    pub gram_schmidt: GramSchmidt,
    /// `log2` of an upper bound for `prod |b_i| / |det|`.
    pub log2_ratio: f64,
    /// `log2 c_m`.
    pub log2_bound: f64,
    /// Scaling exponent `q` of the accepted attempt.
    pub scale_bits: u32,
    pub attempts: usize,
}

impl ReducedBasis {
    pub fn rank(&self) -> usize {
        self.vectors.len()
    }

    /// Order coordinates of `sum_i c_i b_i`.
    pub fn combine(&self, c: &[i64]) -> Vec<BigInt> {
        let m = self.transform.first().map_or(0, Vec::len);
        let mut out = vec![BigInt::zero(); m];
        for (ci, row) in c.iter().zip(&self.transform) {
            if *ci == 0 {
                continue;
            }
            let cb = BigInt::from(*ci);
            for (o, x) in out.iter_mut().zip(row) {
                *o += &cb * x;
            }
        }
        out
    }

    /// `Phi(sum_i c_i b_i)` in floating point.
    pub fn phi_f64(&self, c: &[i64], basis_f64: &[Vec<f64>]) -> Vec<f64> {
        let dim = basis_f64.first().map_or(0, Vec::len);
        let mut out = vec![0.0; dim];
        for (ci, row) in c.iter().zip(basis_f64) {
            if *ci == 0 {
                continue;
            }
            let cf = *ci as f64;
            for (o, x) in out.iter_mut().zip(row) {
                *o += cf * x;
            }
        }
        out
    }

    pub fn vectors_f64(&self) -> Vec<Vec<f64>> {
        self.vectors.iter().map(|v| v.iter().map(Fixed::to_f64).collect()).collect()
    }
}

fn fixed_norm(v: &[Fixed]) -> f64 {
    let bits = v.first().map_or(64, Fixed::bits);
    v.iter().fold(Fixed::zero(bits), |acc, x| acc.add(&x.mul(x))).sqrt().to_f64()
}

/// Reduces the lattice spanned by `rows` (the images `Phi(lambda_i)`), doubling the
/// integer scaling until the reduced basis passes the `c_m` certificate.
pub fn reduce_lattice(rows: &[Vec<Fixed>], entry_error: f64, start_bits: u32, delta: (i64, i64)) -> Result<ReducedBasis> {
    let m = rows.len();
    let max_bits = rows.first().and_then(|r| r.first()).map_or(64, Fixed::bits);
    let log2_bound = log2_reducedness_constant(m);
    let dim = rows.first().map_or(0, Vec::len);
    let mut q = start_bits.min(max_bits);
    let mut attempts = 0;
    loop {
        attempts += 1;
        let scaled: Vec<Vec<BigInt>> = rows.iter().map(|r| r.iter().map(|x| x.scaled_integer(q)).collect()).collect();
        if let Ok(out) = lll_integral(&scaled, delta) {
            let vectors: Vec<Vec<Fixed>> = out
                .transform
                .iter()
                .map(|u| {
                    let mut v = vec![Fixed::zero(max_bits); dim];
                    for (c, r) in u.iter().zip(rows) {
                        if c.is_zero() {
                            continue;
                        }
                        for (o, x) in v.iter_mut().zip(r) {
                            *o = o.add(&x.mul_int(c));
                        }
                    }
                    v
                })
                .collect();
            let lengths: Vec<f64> = vectors.iter().map(|v| fixed_norm(v)).collect();
            let length_errors: Vec<f64> = out
                .transform
                .iter()
                .map(|u| {
                    let l1: f64 = u.iter().map(|c| c.abs().to_f64().unwrap_or(f64::INFINITY)).sum();
                    entry_error * (dim as f64).sqrt() * l1.max(1.0)
                })
                .collect();
            let gs = GramSchmidt::of(&vectors);
            let smallest = gs.bstar_sq.iter().cloned().fold(f64::INFINITY, f64::min).sqrt();
            let max_err = length_errors.iter().cloned().fold(0.0, f64::max);
            if smallest.is_finite() && smallest > 16.0 * max_err {
                let upper: f64 = lengths.iter().zip(&length_errors).map(|(l, r)| (l + r).log2()).sum();
                let det_slack = (m as f64) * (max_err / smallest) * 2.0 + 1e-12;
                let log2_ratio = upper - gs.log2_det() + det_slack;
                if log2_ratio <= log2_bound {
                    return Ok(ReducedBasis {
                        transform: out.transform,
                        vectors,
                        lengths,
                        length_errors,
                        gram_schmidt: gs,
                        log2_ratio,
                        log2_bound,
                        scale_bits: q,
                        attempts,
                    });
                }
            }
        }
        if q >= max_bits {
            return Err(Error::PrecisionCeiling(max_bits));
        }
        q = (q * 2).min(max_bits);
    }
}

/// `beta_i = floor(c_m L / (|b_i| - r_i))`, saturating.
pub fn coefficient_box(rb: &ReducedBasis, bound: f64) -> Vec<u64> {
    let c = rb.log2_bound.exp2();
    rb.lengths
        .iter()
        .zip(&rb.length_errors)
        .map(|(l, r)| {
            let v = (c * bound / (l - r).max(f64::MIN_POSITIVE)).floor();
            if v.is_finite() && v < (u64::MAX >> 2) as f64 {
                v as u64
            } else {
                u64::MAX >> 2
            }
        })
        .collect()
}

/// Whether an enumeration callback wants to continue.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Visit {
    Continue,
    Stop,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct ShellOutcome {
    /// The callback asked to stop.
    pub stopped: bool,
    pub visited: u64,
    /// Last shell fully or partially enumerated.
    pub last_shell: u64,
    /// Every point of the box was visited.
    pub box_exhausted: bool,
}

/// Length pruning for [`enumerate_shells`]: subtrees whose partial projection
/// already exceeds `radius` are skipped.
#[derive(Debug, Clone)]
pub struct Pruning {
    /// Gram–Schmidt data of the basis in reversed order.
    gs: GramSchmidt,
    r2: f64,
}

impl Pruning {
    pub fn new(vectors: &[Vec<Fixed>], radius: f64) -> Pruning {
        let rev: Vec<Vec<Fixed>> = vectors.iter().rev().cloned().collect();
        Pruning { gs: GramSchmidt::of(&rev), r2: radius * radius * (1.0 + 1e-9) + 1e-12 }
    }
}

/// Visits the nonzero sign-canonical points of the box `|gamma_i| <= bounds[i]`
/// in shells of increasing max-norm `1, 2, ..., cap`, lexicographically within a
/// shell. A point is sign-canonical when its first nonzero coordinate is positive.
/// With `prune`, only points inside the pruning ball are visited (same order).
pub fn enumerate_shells(
    bounds: &[u64],
    cap: u64,
    prune: Option<&Pruning>,
    mut visit: impl FnMut(&[i64]) -> Visit,
) -> ShellOutcome {
    let m = bounds.len();
    let top = bounds.iter().copied().max().unwrap_or(0);
    let mut suffix_max = vec![0u64; m + 1];
    for i in (0..m).rev() {
        suffix_max[i] = suffix_max[i + 1].max(bounds[i]);
    }
    let mut out = ShellOutcome::default();
    let mut st = ShellState { bounds, suffix_max, prune, x: vec![0i64; m], visited: 0 };
    for s in 1..=top.min(cap) {
        out.last_shell = s;
        if st.rec(0, s, false, false, 0.0, &mut visit) {
            out.stopped = true;
            out.visited = st.visited;
            return out;
        }
    }
    out.visited = st.visited;
    out.box_exhausted = cap >= top;
    out
}

struct ShellState<'a> {
    bounds: &'a [u64],
    suffix_max: Vec<u64>,
    prune: Option<&'a Pruning>,
    x: Vec<i64>,
    visited: u64,
}

impl ShellState<'_> {
    fn rec(&mut self, i: usize, s: u64, nonzero: bool, hit: bool, partial: f64, visit: &mut impl FnMut(&[i64]) -> Visit) -> bool {
        let m = self.x.len();
        if i == m {
            if hit {
                self.visited += 1;
                return visit(&self.x) == Visit::Stop;
            }
            return false;
        }
        if !hit && self.suffix_max[i] < s {
            return false;
        }
        let b = self.bounds[i].min(s) as i64;
        let mut lo = if nonzero { -b } else { 0 };
        let mut hi = b;
        let mut center = 0.0;
        let mut bsq = 0.0;
        if let Some(p) = self.prune {
            // Coordinate i is index m-1-i of the reversed basis.
            let k = m - 1 - i;
            center = -(0..i).map(|t| self.x[t] as f64 * p.gs.mu[m - 1 - t][k]).sum::<f64>();
            bsq = p.gs.bstar_sq[k];
            let rem = p.r2 - partial;
            if rem < 0.0 {
                return false;
            }
            let half = (rem / bsq).sqrt();
            lo = lo.max((center - half).ceil() as i64);
            hi = hi.min((center + half).floor() as i64);
        }
        for v in lo..=hi {
            let np = if self.prune.is_some() {
                let t = v as f64 - center;
                let np = partial + t * t * bsq;
                if np > self.prune.unwrap().r2 {
                    continue;
                }
                np
            } else {
                0.0
            };
            self.x[i] = v;
            if self.rec(i + 1, s, nonzero || v != 0, hit || v.unsigned_abs() == s, np, visit) {
                self.x[i] = 0;
                return true;
            }
        }
        self.x[i] = 0;
        false
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct BallOutcome {
    /// The whole ball was searched.
    pub completed: bool,
    pub stopped: bool,
    pub nodes: u64,
    pub visited: u64,
}

/// Visits every nonzero integer vector `x` (up to sign) with `|sum x_i b_i| <= radius`,
/// by depth-first search over the Gram–Schmidt decomposition. A tiny relative
/// slack is added to the radius so that boundary points are never lost to rounding.
pub fn enumerate_ball(
    gs: &GramSchmidt,
    radius: f64,
    max_nodes: u64,
    mut visit: impl FnMut(&[i64]) -> Visit,
) -> BallOutcome {
    let m = gs.bstar_sq.len();
    let r2 = radius * radius * (1.0 + 1e-9) + 1e-12;
    let mut out = BallOutcome::default();
    let mut x = vec![0i64; m];
    if m == 0 {
        out.completed = true;
        return out;
    }
    let finished = ball_rec(m - 1, 0.0, true, r2, gs, &mut x, &mut visit, &mut out, max_nodes);
    out.completed = finished && !out.stopped;
    out
}

#[allow(clippy::too_many_arguments)]
fn ball_rec(
    k: usize,
    partial: f64,
    top: bool,
    r2: f64,
    gs: &GramSchmidt,
    x: &mut [i64],
    visit: &mut impl FnMut(&[i64]) -> Visit,
    out: &mut BallOutcome,
    max_nodes: u64,
) -> bool {
    out.nodes += 1;
    if out.nodes > max_nodes {
        return false;
    }
    let m = x.len();
    let c: f64 = -(k + 1..m).map(|j| x[j] as f64 * gs.mu[j][k]).sum::<f64>();
    let rem = r2 - partial;
    if rem < 0.0 {
        return true;
    }
    let half = (rem / gs.bstar_sq[k]).sqrt();
    let mut lo = (c - half).ceil() as i64;
    let hi = (c + half).floor() as i64;
    if top {
        lo = lo.max(0);
    }
    for v in lo..=hi {
        let t = v as f64 - c;
        let p = partial + t * t * gs.bstar_sq[k];
        if p > r2 {
            continue;
        }
        x[k] = v;
        let still_top = top && v == 0;
        if k == 0 {
            if !still_top {
                out.visited += 1;
                if visit(x) == Visit::Stop {
                    out.stopped = true;
                    x[k] = 0;
                    return false;
                }
            }
        } else if !ball_rec(k - 1, p, still_top, r2, gs, x, visit, out, max_nodes) {
            x[k] = 0;
            return false;
        }
    }
    x[k] = 0;
    true
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::bareiss_det;

    fn bi(rows: &[&[i64]]) -> Vec<Vec<BigInt>> {
        rows.iter().map(|r| r.iter().map(|&x| BigInt::from(x)).collect()).collect()
    }

    #[test]
    fn lll_small_example() {
        let basis = bi(&[&[1, 1, 1], &[-1, 0, 2], &[3, 5, 6]]);
        let out = lll_integral(&basis, (3, 4)).unwrap();
        // Reduced = U * basis, U unimodular.
        for (r, u) in out.reduced.iter().zip(&out.transform) {
            let mut v = vec![BigInt::zero(); 3];
            for (c, b) in u.iter().zip(&basis) {
                for (o, x) in v.iter_mut().zip(b) {
                    *o += c * x;
                }
            }
            assert_eq!(&v, r);
        }
        assert_eq!(bareiss_det(&out.transform).abs(), BigInt::one());
        assert_eq!(out.reduced, bi(&[&[0, 1, 0], &[1, 0, 1], &[-1, 0, 2]]));
    }

    #[test]
    fn lll_rejects_dependent_rows() {
        assert!(lll_integral(&bi(&[&[1, 2], &[2, 4]]), (99, 100)).is_err());
    }

    #[test]
    fn reducedness_constants() {
        assert!((reducedness_constant(1) - 1.5).abs() < 1e-12);
        assert!((reducedness_constant(4) - 648.0).abs() < 1e-9);
        for m in 1..20 {
            assert!(log2_reducedness_constant(m + 1) > log2_reducedness_constant(m));
        }
    }

    #[test]
    fn box_for_rank_one_lattice() {
        let rows = vec![vec![Fixed::from_i64(2, 64)]];
        let rb = reduce_lattice(&rows, 0.0, 32, (99, 100)).unwrap();
        assert_eq!(coefficient_box(&rb, 3.0), vec![2]);
    }

    #[test]
    fn shell_order() {
        let mut seen = Vec::new();
        let out = enumerate_shells(&[1, 1], 8, None, |x| {
            seen.push(x.to_vec());
            Visit::Continue
        });
        assert_eq!(seen, vec![vec![0, 1], vec![1, -1], vec![1, 0], vec![1, 1]]);
        assert!(out.box_exhausted);
        assert_eq!(out.visited, 4);
        let mut count = 0;
        let out = enumerate_shells(&[3, 1, 2], 2, None, |_| {
            count += 1;
            Visit::Continue
        });
        // Canonical nonzero points of [-2,2]x[-1,1]x[-2,2] are (75 - 1) / 2.
        assert_eq!(count, 37);
        assert!(!out.box_exhausted);
    }

    #[test]
    fn ball_matches_brute_force() {
        let rows: Vec<Vec<Fixed>> = [[3.0, 1.0], [1.0, 2.0]]
            .iter()
            .map(|r| r.iter().map(|&x| Fixed::from_f64(x, 80)).collect())
            .collect();
        let gs = GramSchmidt::of(&rows);
        let mut found = Vec::new();
        let out = enumerate_ball(&gs, 4.0, 1_000_000, |x| {
            found.push(x.to_vec());
            Visit::Continue
        });
        assert!(out.completed);
        let mut brute = 0;
        for a in -10i64..=10 {
            for b in -10i64..=10 {
                let v = [3.0 * a as f64 + b as f64, a as f64 + 2.0 * b as f64];
                if (a, b) != (0, 0) && v[0] * v[0] + v[1] * v[1] <= 16.0 {
                    brute += 1;
                }
            }
        }
        assert_eq!(found.len() * 2, brute);
        // Pruned shells visit the same points.
        let prune = Pruning::new(&rows, 4.0);
        let mut shells = 0;
        enumerate_shells(&[10, 10], 10, Some(&prune), |_| {
            shells += 1;
            Visit::Continue
        });
        assert_eq!(shells, found.len());
    }
}

//! The splitting pipeline: maximal order, archimedean representations, lattice
//! reduction and the search for a rank-one element, with corner recursion when
//! a zero divisor of intermediate rank turns up first.

use std::time::{Duration, Instant};

use num_bigint::BigInt;
use num_complex::Complex64;
use num_traits::{Signed, ToPrimitive, Zero};

use crate::algebra::{AlgebraElement, Corner, KMatrix, KSubspace, StructureAlgebra};
use crate::embed::{build_representation, phi_interleave, splitting_element, LatticeEmbedding, GUARD_BITS};
use crate::error::{Error, Result};
use crate::exact::{bareiss_rank, min_char_poly, ExactMatrix, Rational};
use crate::factor::FactorBudget;
use crate::lattice::{coefficient_box, enumerate_ball, enumerate_shells, reduce_lattice, Pruning, ReducedBasis, Visit};
use crate::numeric::Fixed;
use crate::numfield::{FieldElement, NumberField};
use crate::order::{maximal_order, Order};

/// The constant `b = (2/pi)^{2s/d} |Delta|^{1/d}` with an error radius.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BBound {
    pub value: f64,
    pub radius: f64,
}

impl BBound {
    pub fn contains(&self, x: f64) -> bool {
        (x - self.value).abs() <= self.radius
    }
}

pub fn b_bound(field: &NumberField) -> BBound {
    let d = field.degree() as f64;
    let (_, s) = field.signature();
    let disc = field.discriminant().abs().to_f64().unwrap_or(f64::INFINITY);
    if field.is_rationals() {
        return BBound { value: 1.0, radius: 0.0 };
    }
    let value = (2.0 / std::f64::consts::PI).powf(2.0 * s as f64 / d) * disc.powf(1.0 / d);
    BBound { value, radius: value * 1e-13 }
}

/// Target length `L = b n sqrt(r + s)` of the rank-one search.
pub fn target_length(field: &NumberField, n: usize) -> f64 {
    let (r, s) = field.signature();
    let b = b_bound(field);
    (b.value + b.radius) * n as f64 * ((r + s) as f64).sqrt()
}

/// Tunables of the pipeline.
#[derive(Debug, Clone)]
pub struct SplitConfig {
    pub seed: u64,
    pub precision_bits: u32,
    /// LLL parameter as a reduced fraction.
    pub delta: (i64, i64),
    pub shell_cap: u64,
    pub deterministic: bool,
    pub budget: Option<Duration>,
    pub factor_budget: FactorBudget,
    pub max_splitting_samples: usize,
    /// Also test exactly that elements with all per-place norms below 1 are nilpotent.
    pub nilpotent_check: bool,
    pub ball_node_limit: u64,
}

impl Default for SplitConfig {
    fn default() -> Self {
        SplitConfig {
            seed: 0,
            precision_bits: 128,
            delta: (99, 100),
            shell_cap: 8,
            deterministic: false,
            budget: None,
            factor_budget: FactorBudget::default(),
            max_splitting_samples: 64,
            nilpotent_check: false,
            ball_node_limit: 50_000_000,
        }
    }
}

impl SplitConfig {
    /// Sets `delta` from a decimal value, rounded to four places.
    pub fn with_delta(mut self, delta: f64) -> Result<Self> {
        if !(delta > 0.25 && delta < 1.0) {
            return Err(Error::Parse(format!("delta must lie in (1/4, 1), got {delta}")));
        }
        let num = (delta * 10_000.0).round() as i64;
        let g = num_integer::gcd(num, 10_000);
        self.delta = (num / g, 10_000 / g);
        Ok(self)
    }
}

/// The rank-one element found by [`split`].
#[derive(Debug, Clone)]
pub struct RankOneWitness {
    pub element: AlgebraElement,
    /// Idempotents used for corner recursion, each in the algebra of its level.
    pub trace: Vec<AlgebraElement>,
    /// `||phi_i(C)||` per place at discovery, in the algebra of the last level.
    pub norms: Vec<f64>,
    /// Error radius of each entry of `norms`.
    pub norm_error: f64,
    /// Pipeline step that produced the witness (5 or 6).
    pub step: u8,
}

/// An explicit isomorphism `A -> M_n(K)`.
#[derive(Debug, Clone, PartialEq)]
pub struct IsoMap {
    pub n: usize,
    /// `phi(a_i)` for every basis element.
    pub images: Vec<KMatrix>,
    /// q-vectors of the chosen basis of `A*C`.
    pub ideal_basis: Vec<Vec<Rational>>,
    /// Preimages of the matrix units `E_st` at index `s*n + t`.
    pub inverse: Vec<AlgebraElement>,
}

impl IsoMap {
    pub fn apply(&self, field: &NumberField, x: &AlgebraElement) -> KMatrix {
        let mut out = KMatrix::zeros(field, self.n, self.n);
        for (c, img) in x.coords.iter().zip(&self.images) {
            if !c.is_zero() {
                out = out.add(field, &img.scale(field, c));
            }
        }
        out
    }

    pub fn preimage(&self, alg: &StructureAlgebra, x: &KMatrix) -> AlgebraElement {
        let mut out = alg.zero();
        for (e, u) in x.entries.iter().zip(&self.inverse) {
            if !e.is_zero() {
                out = alg.add(&out, &alg.scale(e, u));
            }
        }
        out
    }

    /// Exact unitality, multiplicativity and bijectivity checks.
    pub fn verify(&self, alg: &StructureAlgebra) -> Result<()> {
        verify_images(alg, self.n, &self.images)
    }
}

/// Checks that the given matrices define an isomorphism `A -> M_n(K)`.
pub fn verify_images(alg: &StructureAlgebra, n: usize, images: &[KMatrix]) -> Result<()> {
    let field = alg.field();
    let m = alg.dim();
    if images.len() != m || images.iter().any(|x| x.rows != n || x.cols != n) {
        return Err(Error::Verification(format!("expected {m} images of size {n}x{n}")));
    }
    let combine = |coeffs: &[FieldElement]| -> KMatrix {
        let mut out = KMatrix::zeros(field, n, n);
        for (c, img) in coeffs.iter().zip(images) {
            if !c.is_zero() {
                out = out.add(field, &img.scale(field, c));
            }
        }
        out
    };
    if combine(&alg.identity().coords) != KMatrix::identity(field, n) {
        return Err(Error::Verification("unitality: image of the identity is not I".into()));
    }
    for i in 0..m {
        for j in 0..m {
            let lhs = images[i].mul(field, &images[j]);
            let rhs = combine(&alg.table()[i][j]);
            if lhs != rhs {
                return Err(Error::Verification(format!("multiplicativity fails for basis pair ({i}, {j})")));
            }
        }
    }
    let mut span = KSubspace::new(field, n * n * field.degree());
    for img in images {
        span.insert(&img.to_q());
    }
    if span.dim() != m || m != n * n {
        return Err(Error::Verification(format!("bijectivity: images span dimension {} of {}", span.dim(), n * n)));
    }
    Ok(())
}

/// The isomorphism given by the left action of `A` on `A*C`.
pub fn isomorphism_from_rank_one(alg: &StructureAlgebra, c: &AlgebraElement) -> Result<IsoMap> {
    let n = alg.require_n()?;
    let field = alg.field();
    let cq = alg.to_q(c);
    let mut span = KSubspace::new(field, alg.qdim());
    for i in 0..alg.dim() {
        span.insert(&alg.mul_q(&alg.basis_q(i), &cq));
    }
    if span.dim() != n {
        return Err(Error::Structural(format!("A*C has dimension {} over K, expected {n}", span.dim())));
    }
    let w = span.basis().to_vec();
    let mut images = Vec::with_capacity(alg.dim());
    for i in 0..alg.dim() {
        let ai = alg.basis_q(i);
        let mut img = KMatrix::zeros(field, n, n);
        for (k, wk) in w.iter().enumerate() {
            let coords = span
                .coords(&alg.mul_q(&ai, wk))
                .ok_or_else(|| Error::Structural("A*C is not a left ideal".into()))?;
            for (t, x) in coords.into_iter().enumerate() {
                img.set(t, k, x);
            }
        }
        images.push(img);
    }
    let inverse = inverse_data(alg, n, &images)?;
    Ok(IsoMap { n, images, ideal_basis: w, inverse })
}

fn inverse_data(alg: &StructureAlgebra, n: usize, images: &[KMatrix]) -> Result<Vec<AlgebraElement>> {
    let field = alg.field();
    let d = field.degree();
    let mut span = KSubspace::new(field, n * n * d);
    let mut used = Vec::new();
    for (i, img) in images.iter().enumerate() {
        if span.insert(&img.to_q()) {
            used.push(i);
        }
    }
    if used.len() != n * n {
        return Err(Error::Structural("images do not span M_n(K)".into()));
    }
    let mut out = Vec::with_capacity(n * n);
    for s in 0..n {
        for t in 0..n {
            let mut e = KMatrix::zeros(field, n, n);
            e.set(s, t, field.one());
            let c = span.coords(&e.to_q()).ok_or_else(|| Error::Structural("matrix unit outside the span".into()))?;
            let mut coords = vec![field.zero(); alg.dim()];
            for (ci, &i) in c.into_iter().zip(&used) {
                coords[i] = ci;
            }
            out.push(AlgebraElement::new(coords));
        }
    }
    Ok(out)
}

/// Whether the regular trace form proves that `A` does not split at some real place.
///
/// Over `R` the trace form of `M_n(R)` has positive index `n(n+1)/2` and that of
/// `M_n(C)` (as a real algebra) has `n^2`; any real place where `A` is a matrix
/// algebra over the quaternions lowers the total.
pub fn real_place_obstruction(alg: &StructureAlgebra) -> Result<bool> {
    let n = alg.require_n()?;
    let (r, s) = alg.field().signature();
    if r == 0 {
        return Ok(false);
    }
    let q = alg.qdim();
    let traces: Vec<Rational> = (0..q)
        .map(|k| {
            (0..q)
                .map(|j| alg.q_products(k, j).iter().filter(|(idx, _)| *idx == j).map(|(_, c)| c.clone()).sum::<Rational>())
                .sum()
        })
        .collect();
    let gram: Vec<Vec<Rational>> = (0..q)
        .map(|i| (0..q).map(|j| alg.q_products(i, j).iter().map(|(k, c)| c * &traces[*k]).sum()).collect())
        .collect();
    let (_, chi) = min_char_poly(&ExactMatrix::from_rows(&gram)?)?;
    // All roots are real, so Descartes' rule counts the positive ones exactly.
    let signs: Vec<bool> = chi.coeffs().iter().filter(|c| !c.is_zero()).map(|c| c.is_positive()).collect();
    let positive = signs.windows(2).filter(|w| w[0] != w[1]).count();
    Ok(positive < r * n * (n + 1) / 2 + s * n * n)
}

/// Statistics of one pipeline level.
#[derive(Debug, Clone, PartialEq)]
pub struct LevelStats {
    pub dim: usize,
    pub n: usize,
    pub discriminant: BigInt,
    pub splitting_samples: usize,
    pub lll_scale_bits: u32,
    pub lll_attempts: usize,
    pub log2_ratio: f64,
    pub log2_bound: f64,
    pub target_length: f64,
    pub step: u8,
    pub shell_points: u64,
    pub last_shell: u64,
    pub ball_nodes: u64,
    pub exact_tests: u64,
}

/// Counts behind the short-vector soundness checks.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct SoundnessStats {
    pub short_checked: u64,
    pub short_violations: u64,
    pub nilpotent_checked: u64,
    pub nilpotent_violations: u64,
}

#[derive(Debug, Clone)]
pub struct SplitReport {
    pub witness: RankOneWitness,
    pub isomorphism: IsoMap,
    /// Maximal-order discriminants per recursion level.
    pub discriminants: Vec<BigInt>,
    pub levels: Vec<LevelStats>,
    pub soundness: SoundnessStats,
    pub elapsed: Duration,
}

/// Result of the zero-divisor search.
#[derive(Debug, Clone)]
pub struct ZeroDivisorReport {
    pub element: AlgebraElement,
    pub rank: usize,
    pub level: LevelStats,
    pub soundness: SoundnessStats,
    pub elapsed: Duration,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Mode {
    RankOne,
    ZeroDivisor,
}

#[derive(Debug, Clone)]
struct Hit {
    q: Vec<Rational>,
    rank: usize,
    norms: Vec<f64>,
    norm_error: f64,
}

struct Level {
    stats: LevelStats,
    hit: Hit,
    lattice: LatticeEmbedding,
}

fn complex_det(m: &[Complex64], n: usize) -> Complex64 {
    let mut a = m.to_vec();
    let mut det = Complex64::new(1.0, 0.0);
    for c in 0..n {
        let p = (c..n).max_by(|&x, &y| a[x * n + c].norm().total_cmp(&a[y * n + c].norm())).unwrap();
        if a[p * n + c].norm() == 0.0 {
            return Complex64::new(0.0, 0.0);
        }
        if p != c {
            for j in 0..n {
                a.swap(p * n + j, c * n + j);
            }
            det = -det;
        }
        let piv = a[c * n + c];
        det *= piv;
        for r in c + 1..n {
            let f = a[r * n + c] / piv;
            for j in c..n {
                let v = a[c * n + j];
                a[r * n + j] -= f * v;
            }
        }
    }
    det
}

fn looks_rank_one(m: &[Complex64], n: usize) -> bool {
    let scale: f64 = m.iter().map(|x| x.norm_sqr()).sum();
    if scale == 0.0 {
        return false;
    }
    for i in 0..n {
        for j in i + 1..n {
            for k in 0..n {
                for l in k + 1..n {
                    let minor = m[i * n + k] * m[j * n + l] - m[i * n + l] * m[j * n + k];
                    if minor.norm() > 1e-6 * scale {
                        return false;
                    }
                }
            }
        }
    }
    true
}

fn looks_singular(m: &[Complex64], n: usize) -> bool {
    let scale: f64 = m.iter().map(|x| x.norm_sqr()).sum::<f64>().sqrt();
    complex_det(m, n).norm() <= 1e-6 * scale.powi(n as i32).max(1e-300)
}

struct Searcher {
    order: Order,
    lat: LatticeEmbedding,
    rb: ReducedBasis,
    rb_f64: Vec<Vec<f64>>,
    n: usize,
    d: usize,
    mode: Mode,
    nilpotent: bool,
    target: f64,
    soundness: SoundnessStats,
    exact_tests: u64,
    /// First zero divisor of intermediate rank (rank-one mode) for corner recursion.
    corner: Option<Hit>,
    /// First rank-one element longer than the target.
    long_rank_one: Option<Hit>,
}

impl Searcher {
    fn exact_rank(&mut self, c: &[BigInt]) -> usize {
        self.exact_tests += 1;
        bareiss_rank(&self.order.right_regular_int(c)) / (self.n * self.d)
    }

    /// Per-place norms of `Phi(y)` at full precision with an error radius.
    fn certified_norms(&self, c: &[BigInt]) -> (Vec<f64>, f64) {
        let bits = self.lat.bits;
        let mut phi = vec![Fixed::zero(bits); self.lat.dim];
        for (ci, img) in c.iter().zip(&self.lat.basis_images) {
            if ci.is_zero() {
                continue;
            }
            for (o, v) in phi.iter_mut().zip(img) {
                *o = o.add(&v.mul_int(ci));
            }
        }
        let l1: f64 = c.iter().map(|x| x.abs().to_f64().unwrap_or(f64::INFINITY)).sum();
        let err = self.lat.entry_error * (self.lat.dim as f64).sqrt() * l1.max(1.0);
        let phi_f: Vec<f64> = phi.iter().map(Fixed::to_f64).collect();
        (self.lat.place_norms(&phi_f), err)
    }

    fn is_nilpotent(&self, c: &[BigInt]) -> bool {
        let mut p = c.to_vec();
        for _ in 1..self.n {
            p = self.order.mul_coords(&p, c);
        }
        p.iter().all(Zero::is_zero)
    }

    /// Examines one order element; returns a hit for the current mode.
    fn examine(&mut self, c: &[BigInt], phi: &[f64]) -> Option<Hit> {
        let norms = self.lat.place_norms(phi);
        let sqrt_n = (self.n as f64).sqrt();
        let mut known_rank = None;
        if norms.iter().all(|x| *x < sqrt_n * (1.0 - 1e-9)) {
            self.soundness.short_checked += 1;
            let rank = self.exact_rank(c);
            known_rank = Some(rank);
            if rank == self.n {
                let (cn, err) = self.certified_norms(c);
                if cn.iter().all(|x| x + err < sqrt_n) {
                    self.soundness.short_violations += 1;
                }
            }
            if self.nilpotent && norms.iter().all(|x| *x < 1.0 - 1e-9) {
                self.soundness.nilpotent_checked += 1;
                if !self.is_nilpotent(c) {
                    let (cn, err) = self.certified_norms(c);
                    if cn.iter().all(|x| x + err < 1.0) {
                        self.soundness.nilpotent_violations += 1;
                    }
                }
            }
        }
        let mats = self.lat.place_matrices(phi);
        let first = &mats[0];
        let candidate = match self.mode {
            Mode::RankOne => looks_rank_one(first, self.n) || (self.corner.is_none() && self.n > 2 && looks_singular(first, self.n)),
            Mode::ZeroDivisor => looks_singular(first, self.n),
        };
        if !candidate {
            return None;
        }
        let rank = match known_rank {
            Some(r) => r,
            None => self.exact_rank(c),
        };
        if rank == 0 || rank == self.n {
            return None;
        }
        let (norms, norm_error) = self.certified_norms(c);
        let length = norms.iter().map(|x| x * x).sum::<f64>().sqrt();
        let hit = Hit { q: self.order.element_q(c), rank, norms, norm_error };
        match self.mode {
            Mode::ZeroDivisor => Some(hit),
            Mode::RankOne if rank == 1 => {
                if length + norm_error * (self.lat.reps.len() as f64).sqrt() < self.target {
                    Some(hit)
                } else {
                    if self.long_rank_one.is_none() {
                        self.long_rank_one = Some(hit);
                    }
                    None
                }
            }
            Mode::RankOne => {
                if self.corner.as_ref().is_none_or(|h| rank < h.rank) {
                    self.corner = Some(hit);
                }
                None
            }
        }
    }
}

fn deadline_passed(deadline: Option<Instant>) -> bool {
    deadline.is_some_and(|d| Instant::now() >= d)
}

fn search_level(
    alg: &StructureAlgebra,
    cfg: &SplitConfig,
    level: usize,
    mode: Mode,
    soundness: &mut SoundnessStats,
    deadline: Option<Instant>,
) -> Result<Level> {
    let n = alg.require_n()?;
    let field = alg.field();
    let order = maximal_order(alg, cfg.factor_budget)?;
    let bits = cfg.precision_bits + GUARD_BITS;
    let embs = field.archimedean_embeddings(bits);
    let se = match splitting_element(alg, &embs, cfg.seed.wrapping_add(level as u64), cfg.max_splitting_samples) {
        Ok(s) => s,
        Err(Error::SplittingElement(k)) => {
            if real_place_obstruction(alg)? {
                return Err(Error::NonSplit("the trace form shows a real place where the algebra is not a matrix algebra".into()));
            }
            return Err(Error::SplittingElement(k));
        }
        Err(e) => return Err(e),
    };
    let reps = embs
        .iter()
        .enumerate()
        .map(|(i, e)| build_representation(alg, e, i, &se, cfg.precision_bits))
        .collect::<Result<Vec<_>>>()?;
    let lat = phi_interleave(&order, reps)?;
    let rb = reduce_lattice(&lat.basis_images, lat.entry_error, 64, cfg.delta)?;
    let target = target_length(field, n);
    let mut stats = LevelStats {
        dim: alg.dim(),
        n,
        discriminant: order.discriminant().clone(),
        splitting_samples: se.samples,
        lll_scale_bits: rb.scale_bits,
        lll_attempts: rb.attempts,
        log2_ratio: rb.log2_ratio,
        log2_bound: rb.log2_bound,
        target_length: target,
        step: 5,
        shell_points: 0,
        last_shell: 0,
        ball_nodes: 0,
        exact_tests: 0,
    };
    let rb_f64 = rb.vectors_f64();
    let mut s = Searcher {
        order,
        lat,
        rb,
        rb_f64,
        n,
        d: field.degree(),
        mode,
        nilpotent: cfg.nilpotent_check,
        target,
        soundness: SoundnessStats::default(),
        exact_tests: 0,
        corner: None,
        long_rank_one: None,
    };
    let finish = |s: Searcher, mut stats: LevelStats, hit: Hit, soundness: &mut SoundnessStats| {
        stats.exact_tests = s.exact_tests;
        soundness.short_checked += s.soundness.short_checked;
        soundness.short_violations += s.soundness.short_violations;
        soundness.nilpotent_checked += s.soundness.nilpotent_checked;
        soundness.nilpotent_violations += s.soundness.nilpotent_violations;
        Level { stats, hit, lattice: s.lat }
    };

    // Step 5: the reduced basis itself.
    for i in 0..s.rb.rank() {
        let c = s.rb.transform[i].clone();
        let phi = s.rb_f64[i].clone();
        if let Some(hit) = s.examine(&c, &phi) {
            return Ok(finish(s, stats, hit, soundness));
        }
    }
    if mode == Mode::RankOne {
        if let Some(hit) = s.corner.take() {
            return Ok(finish(s, stats, hit, soundness));
        }
    }

    // Step 6: shells inside the coefficient box, then the rest of the ball.
    stats.step = 6;
    let bounds = coefficient_box(&s.rb, target);
    let prune = Pruning::new(&s.rb.vectors, target);
    let mut found: Option<Hit> = None;
    let mut timed_out = false;
    let mut counter = 0u64;
    let shells = enumerate_shells(&bounds, cfg.shell_cap, Some(&prune), |g| {
        counter += 1;
        if counter.is_multiple_of(1024) && deadline_passed(deadline) {
            timed_out = true;
            return Visit::Stop;
        }
        let c = s.rb.combine(g);
        let phi = s.rb.phi_f64(g, &s.rb_f64);
        match s.examine(&c, &phi) {
            Some(h) => {
                found = Some(h);
                Visit::Stop
            }
            None => Visit::Continue,
        }
    });
    stats.shell_points = shells.visited;
    stats.last_shell = shells.last_shell;
    if timed_out {
        return Err(Error::BudgetExhausted(format!("time budget reached in shell {}", shells.last_shell)));
    }
    if found.is_none() && !shells.box_exhausted {
        let cap = cfg.shell_cap as i64;
        let gs = s.rb.gram_schmidt.clone();
        let ball = enumerate_ball(&gs, target, cfg.ball_node_limit, |g| {
            let covered = g.iter().zip(&bounds).all(|(x, b)| x.unsigned_abs() <= *b) && g.iter().all(|x| x.abs() <= cap);
            if covered {
                return Visit::Continue;
            }
            counter += 1;
            if counter.is_multiple_of(1024) && deadline_passed(deadline) {
                timed_out = true;
                return Visit::Stop;
            }
            let c = s.rb.combine(g);
            let phi = s.rb.phi_f64(g, &s.rb_f64);
            match s.examine(&c, &phi) {
                Some(h) => {
                    found = Some(h);
                    Visit::Stop
                }
                None => Visit::Continue,
            }
        });
        stats.ball_nodes = ball.nodes;
        if timed_out {
            return Err(Error::BudgetExhausted("time budget reached in the ball search".into()));
        }
        if found.is_none() && !ball.completed {
            return Err(Error::BudgetExhausted(format!("ball search stopped after {} nodes", ball.nodes)));
        }
    }
    if let Some(hit) = found {
        return Ok(finish(s, stats, hit, soundness));
    }
    if let Some(hit) = s.corner.take().or_else(|| s.long_rank_one.take()) {
        return Ok(finish(s, stats, hit, soundness));
    }
    Err(Error::NonSplit(format!(
        "a maximal order has no {} of length at most {target:.6}",
        if mode == Mode::RankOne { "rank-one element" } else { "zero divisor" }
    )))
}

/// Finds an explicit isomorphism `A -> M_n(K)`.
pub fn split(alg: &StructureAlgebra, cfg: &SplitConfig) -> Result<SplitReport> {
    let start = Instant::now();
    let deadline = cfg.budget.map(|b| start + b);
    alg.require_n()?;
    let mut soundness = SoundnessStats::default();
    let mut levels = Vec::new();
    let mut corners: Vec<Corner> = Vec::new();
    let mut trace = Vec::new();
    let mut current = alg.clone();
    let mut norms = Vec::new();
    let mut norm_error = 0.0;
    let mut step = 5;
    let witness_q = loop {
        let n = current.require_n()?;
        if n == 1 {
            break current.identity_q().to_vec();
        }
        let level = search_level(&current, cfg, levels.len(), Mode::RankOne, &mut soundness, deadline)?;
        step = level.stats.step;
        levels.push(level.stats);
        let hit = level.hit;
        if hit.rank == 1 {
            norms = hit.norms;
            norm_error = hit.norm_error;
            break hit.q;
        }
        let e = current.right_identity_q(&hit.q)?;
        let f: Vec<Rational> = current.identity_q().iter().zip(&e).map(|(a, b)| a - b).collect();
        let (idem, k) = if hit.rank <= n - hit.rank { (e, hit.rank) } else { (f, n - hit.rank) };
        trace.push(current.from_q(&idem));
        if k == 1 {
            let phi: Vec<f64> = level.lattice.phi_q(&idem).iter().map(Fixed::to_f64).collect();
            norms = level.lattice.place_norms(&phi);
            norm_error = level.lattice.entry_error * (level.lattice.dim as f64).sqrt();
            break idem;
        }
        let corner = current.corner_algebra(&current.from_q(&idem))?;
        current = corner.algebra.clone();
        corners.push(corner);
    };
    let mut c = witness_q;
    for corner in corners.iter().rev() {
        c = corner.include_q(&c);
    }
    let element = alg.from_q(&c);
    if alg.rank_of_q(&c)? != 1 {
        return Err(Error::Verification("lifted witness does not have rank one".into()));
    }
    let isomorphism = isomorphism_from_rank_one(alg, &element)?;
    isomorphism.verify(alg)?;
    Ok(SplitReport {
        witness: RankOneWitness { element, trace, norms, norm_error, step },
        isomorphism,
        discriminants: levels.iter().map(|l| l.discriminant.clone()).collect(),
        levels,
        soundness,
        elapsed: start.elapsed(),
    })
}

/// Stops at the first zero divisor (of any rank) found by the same pipeline.
pub fn search_zero_divisor(alg: &StructureAlgebra, cfg: &SplitConfig) -> Result<ZeroDivisorReport> {
    let start = Instant::now();
    let n = alg.require_n()?;
    if n == 1 {
        return Err(Error::NonSplit("a field has no zero divisors".into()));
    }
    let mut soundness = SoundnessStats::default();
    let level = search_level(alg, cfg, 0, Mode::ZeroDivisor, &mut soundness, cfg.budget.map(|b| start + b))?;
    let element = alg.from_q(&level.hit.q);
    if !alg.is_zero_divisor_q(&level.hit.q) {
        return Err(Error::Verification("search returned a unit".into()));
    }
    Ok(ZeroDivisorReport { element, rank: level.hit.rank, level: level.stats, soundness, elapsed: start.elapsed() })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::rat;

    #[test]
    fn b_bounds() {
        assert_eq!(b_bound(&NumberField::rationals()).value, 1.0);
        let b3 = b_bound(&NumberField::quadratic(3).unwrap());
        assert!(b3.contains(2.0 * 3f64.sqrt()));
        let b5 = b_bound(&NumberField::quadratic(5).unwrap());
        assert!(b5.contains(5f64.sqrt()));
        let bi = b_bound(&NumberField::quadratic(-1).unwrap());
        assert!(bi.contains(4.0 / std::f64::consts::PI));
    }

    #[test]
    fn standard_m2_splits_in_step_five() {
        let a = StructureAlgebra::matrix_algebra(&NumberField::rationals(), 2);
        let rep = split(&a, &SplitConfig::default()).unwrap();
        assert_eq!(rep.levels[0].step, 5);
        assert_eq!(rep.discriminants, vec![BigInt::from(-16)]);
        assert!(rep.witness.norms[0] < 2.0);
        assert_eq!(a.rank_of_element(&rep.witness.element).unwrap(), 1);
    }

    #[test]
    fn hamilton_quaternions_do_not_split() {
        let k = NumberField::rationals();
        let h = StructureAlgebra::quaternion(&k, &k.from_rational(&rat(-1)), &k.from_rational(&rat(-1))).unwrap();
        assert!(real_place_obstruction(&h).unwrap());
        assert!(matches!(split(&h, &SplitConfig::default()), Err(Error::NonSplit(_))));
        let m2 = StructureAlgebra::matrix_algebra(&k, 2);
        assert!(!real_place_obstruction(&m2).unwrap());
    }

    #[test]
    fn isomorphism_from_matrix_unit() {
        let k = NumberField::rationals();
        let a = StructureAlgebra::matrix_algebra(&k, 2);
        let e11 = a.basis_element(0);
        let iso = isomorphism_from_rank_one(&a, &e11).unwrap();
        iso.verify(&a).unwrap();
        assert_eq!(iso.apply(&k, &a.identity()), KMatrix::identity(&k, 2));
        for i in 0..4 {
            assert_eq!(iso.preimage(&a, &iso.images[i]), a.basis_element(i));
        }
        assert!(isomorphism_from_rank_one(&a, &a.identity()).is_err());
    }

    #[test]
    fn m3_splits() {
        let a = StructureAlgebra::matrix_algebra(&NumberField::rationals(), 3);
        let rep = split(&a, &SplitConfig::default()).unwrap();
        assert_eq!(rep.discriminants[0].abs(), BigInt::from(19683));
        assert_eq!(rep.soundness.short_violations, 0);
    }

    #[test]
    fn delta_parsing() {
        assert_eq!(SplitConfig::default().with_delta(0.75).unwrap().delta, (3, 4));
        assert!(SplitConfig::default().with_delta(0.2).is_err());
    }
}

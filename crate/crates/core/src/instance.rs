//! JSON instance and witness files, the random instance generator and the
//! exact witness verifier.
//!
//! Rationals are written as canonical strings: `p` for integers and `p/q`
//! with `q > 1` and `gcd(p, q) = 1` otherwise. Field elements are arrays of
//! `d` such strings (coordinates over the integral basis).

use num_bigint::BigInt;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::algebra::{AlgebraElement, KMatrix, KSubspace, StructureAlgebra};
use crate::error::{Error, Result};
use crate::exact::{format_rational, parse_rational, Rational};
use crate::numfield::{FieldDescriptor, FieldElement, NumberField};
use crate::splitter::{verify_images, SplitReport};

pub const INSTANCE_FORMAT: &str = "splitalg-instance/1";
pub const WITNESS_FORMAT: &str = "splitalg-witness/1";

/// Field description as stored in files.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "lowercase", deny_unknown_fields)]
pub enum FieldSpec {
    Rationals,
    Quadratic { d: i64 },
    General { min_poly: Vec<String>, integral_basis: Vec<Vec<String>>, discriminant: String },
}

impl FieldSpec {
    pub fn from_descriptor(desc: &FieldDescriptor) -> Self {
        match desc {
            FieldDescriptor::Rationals => FieldSpec::Rationals,
            FieldDescriptor::Quadratic { d } => FieldSpec::Quadratic { d: *d },
            FieldDescriptor::General { min_poly, integral_basis, discriminant } => FieldSpec::General {
                min_poly: min_poly.iter().map(ToString::to_string).collect(),
                integral_basis: integral_basis.iter().map(|r| r.iter().map(format_rational).collect()).collect(),
                discriminant: discriminant.to_string(),
            },
        }
    }

    pub fn to_field(&self) -> Result<NumberField> {
        let desc = match self {
            FieldSpec::Rationals => FieldDescriptor::Rationals,
            FieldSpec::Quadratic { d } => FieldDescriptor::Quadratic { d: *d },
            FieldSpec::General { min_poly, integral_basis, discriminant } => {
                let int = |s: &str| -> Result<BigInt> {
                    let q = parse_rational(s)?;
                    if !q.is_integer() {
                        return Err(Error::Parse(format!("expected an integer, got {s:?}")));
                    }
                    Ok(q.to_integer())
                };
                FieldDescriptor::General {
                    min_poly: min_poly.iter().map(|s| int(s)).collect::<Result<_>>()?,
                    integral_basis: integral_basis
                        .iter()
                        .map(|r| r.iter().map(|s| parse_rational(s)).collect::<Result<_>>())
                        .collect::<Result<_>>()?,
                    discriminant: int(discriminant)?,
                }
            }
        };
        NumberField::new(desc)
    }
}

type ElemStr = Vec<String>;

fn elem_to_strings(x: &FieldElement) -> ElemStr {
    x.coords.iter().map(format_rational).collect()
}

fn elem_from_strings(field: &NumberField, s: &[String]) -> Result<FieldElement> {
    if s.len() != field.degree() {
        return Err(Error::Parse(format!("field element has {} coordinates, expected {}", s.len(), field.degree())));
    }
    Ok(FieldElement::new(s.iter().map(|x| parse_rational(x)).collect::<Result<_>>()?))
}

fn matrix_to_strings(m: &KMatrix) -> Vec<Vec<ElemStr>> {
    (0..m.rows).map(|i| (0..m.cols).map(|j| elem_to_strings(m.get(i, j))).collect()).collect()
}

fn matrix_from_strings(field: &NumberField, rows: &[Vec<ElemStr>]) -> Result<KMatrix> {
    let r = rows.len();
    let c = rows.first().map_or(0, Vec::len);
    if rows.iter().any(|row| row.len() != c) {
        return Err(Error::Parse("ragged matrix".into()));
    }
    let entries = rows.iter().flatten().map(|e| elem_from_strings(field, e)).collect::<Result<_>>()?;
    Ok(KMatrix { rows: r, cols: c, entries })
}

/// Data behind a generated instance: `a_t = P * sum_s T[t][s] E_s`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct HiddenWitness {
    pub conjugator: Vec<Vec<ElemStr>>,
    pub basis_transform: Vec<Vec<String>>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InstanceFile {
    pub format: String,
    pub field: FieldSpec,
    pub dimension: usize,
    pub structure_constants: Vec<Vec<Vec<ElemStr>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub hidden_witness: Option<HiddenWitness>,
}

impl InstanceFile {
    pub fn from_algebra(alg: &StructureAlgebra) -> Self {
        InstanceFile {
            format: INSTANCE_FORMAT.into(),
            field: FieldSpec::from_descriptor(alg.field().descriptor()),
            dimension: alg.dim(),
            structure_constants: alg
                .table()
                .iter()
                .map(|row| row.iter().map(|v| v.iter().map(elem_to_strings).collect()).collect())
                .collect(),
            hidden_witness: None,
        }
    }

    pub fn field(&self) -> Result<NumberField> {
        self.field.to_field()
    }

    /// Parses and validates the algebra.
    pub fn to_algebra(&self) -> Result<StructureAlgebra> {
        if self.format != INSTANCE_FORMAT {
            return Err(Error::Parse(format!("unknown instance format {:?}", self.format)));
        }
        let field = self.field()?;
        let m = self.dimension;
        let sc = &self.structure_constants;
        if sc.len() != m || sc.iter().any(|r| r.len() != m || r.iter().any(|v| v.len() != m)) {
            return Err(Error::Parse(format!("structure constants must be a {m}x{m}x{m} array")));
        }
        let table = sc
            .iter()
            .map(|row| {
                row.iter()
                    .map(|v| v.iter().map(|e| elem_from_strings(&field, e)).collect::<Result<Vec<_>>>())
                    .collect::<Result<Vec<_>>>()
            })
            .collect::<Result<Vec<_>>>()?;
        StructureAlgebra::new(&field, table)
    }

    /// The isomorphism `a_t -> P Y_t` recorded by the generator.
    pub fn hidden_images(&self) -> Result<Option<Vec<KMatrix>>> {
        let Some(h) = &self.hidden_witness else { return Ok(None) };
        let field = self.field()?;
        let p = matrix_from_strings(&field, &h.conjugator)?;
        let t: Vec<Vec<Rational>> = h
            .basis_transform
            .iter()
            .map(|r| r.iter().map(|s| parse_rational(s)).collect::<Result<_>>())
            .collect::<Result<_>>()?;
        Ok(Some(basis_matrices(&field, p.rows, &t).iter().map(|y| p.mul(&field, y)).collect()))
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("serializable");
        s.push('\n');
        s
    }

    pub fn from_json(s: &str) -> Result<Self> {
        serde_json::from_str(s).map_err(|e| Error::Parse(e.to_string()))
    }
}

/// `Y_t = sum_s T[t][s] E_s` with `E_s` the matrix units in row-major order.
fn basis_matrices(field: &NumberField, n: usize, t: &[Vec<Rational>]) -> Vec<KMatrix> {
    t.iter().map(|row| KMatrix::from_rationals(field, n, n, row)).collect()
}

fn random_rational(rng: &mut ChaCha8Rng, bound: i64) -> Rational {
    let p = rng.gen_range(-bound..=bound);
    let q = rng.gen_range(1..=bound);
    Rational::new(p.into(), q.into())
}

/// Structure constants of `M_n(K)` on the basis `a_t = P Y_t`.
pub fn instance_from_data(field: &NumberField, p: &KMatrix, t: &[Vec<Rational>]) -> Result<InstanceFile> {
    let n = p.rows;
    let m = n * n;
    if t.len() != m || t.iter().any(|r| r.len() != m) {
        return Err(Error::DimensionMismatch(format!("basis transform must be {m}x{m}")));
    }
    let ys = basis_matrices(field, n, t);
    let mut span = KSubspace::new(field, m * field.degree());
    for y in &ys {
        if !span.insert(&y.to_q()) {
            return Err(Error::Structural("basis transform is singular".into()));
        }
    }
    if p.rank(field) != n {
        return Err(Error::Structural("conjugator is singular".into()));
    }
    let mut table = vec![vec![Vec::new(); m]; m];
    for (s, ys_) in ys.iter().enumerate() {
        let left = ys_.mul(field, p);
        for (u, yu) in ys.iter().enumerate() {
            table[s][u] = span.coords(&left.mul(field, yu).to_q()).expect("Y basis spans M_n(K)");
        }
    }
    let alg = StructureAlgebra::new(field, table)?;
    let mut inst = InstanceFile::from_algebra(&alg);
    inst.hidden_witness = Some(HiddenWitness {
        conjugator: matrix_to_strings(p),
        basis_transform: t.iter().map(|r| r.iter().map(format_rational).collect()).collect(),
    });
    Ok(inst)
}

/// A random presentation of `M_n(K)`, reproducible from `seed`.
pub fn gen_instance(n: usize, field: &NumberField, seed: u64, entry_bound: i64) -> Result<InstanceFile> {
    if n == 0 || entry_bound < 1 {
        return Err(Error::Parse("need n >= 1 and entry_bound >= 1".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let d = field.degree();
    let p = loop {
        let entries: Vec<FieldElement> = (0..n * n)
            .map(|_| FieldElement::new((0..d).map(|_| random_rational(&mut rng, entry_bound)).collect()))
            .collect();
        let p = KMatrix { rows: n, cols: n, entries };
        if p.rank(field) == n {
            break p;
        }
    };
    let m = n * n;
    let t = loop {
        let t: Vec<Vec<Rational>> =
            (0..m).map(|_| (0..m).map(|_| Rational::from_integer(rng.gen_range(-1i64..=1).into())).collect()).collect();
        let mut s = crate::exact::Subspace::new(m);
        if t.iter().all(|r| s.insert(r)) {
            break t;
        }
    };
    instance_from_data(field, &p, &t)
}

/// Per-level statistics in the witness file.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LevelRecord {
    pub dimension: usize,
    pub n: usize,
    pub discriminant: String,
    pub splitting_samples: usize,
    pub lll_scale_bits: u32,
    pub lll_attempts: usize,
    pub log2_length_ratio: f64,
    pub log2_reducedness_bound: f64,
    pub target_length: f64,
    pub step: u8,
    pub shell_points: u64,
    pub last_shell: u64,
    pub ball_nodes: u64,
    pub exact_tests: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Statistics {
    pub step: u8,
    pub recursion_depth: usize,
    pub witness_norms: Vec<f64>,
    pub witness_norm_error: f64,
    pub short_elements_checked: u64,
    pub short_element_violations: u64,
    pub nilpotent_checked: u64,
    pub nilpotent_violations: u64,
    pub levels: Vec<LevelRecord>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct WitnessFile {
    pub format: String,
    pub n: usize,
    pub rank_one_element: Vec<ElemStr>,
    pub images: Vec<Vec<Vec<ElemStr>>>,
    pub discriminants: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub statistics: Option<Statistics>,
}

impl WitnessFile {
    pub fn from_report(report: &SplitReport) -> Self {
        let w = &report.witness;
        WitnessFile {
            format: WITNESS_FORMAT.into(),
            n: report.isomorphism.n,
            rank_one_element: w.element.coords.iter().map(elem_to_strings).collect(),
            images: report.isomorphism.images.iter().map(matrix_to_strings).collect(),
            discriminants: report.discriminants.iter().map(ToString::to_string).collect(),
            statistics: Some(Statistics {
                step: w.step,
                recursion_depth: w.trace.len(),
                witness_norms: w.norms.clone(),
                witness_norm_error: w.norm_error,
                short_elements_checked: report.soundness.short_checked,
                short_element_violations: report.soundness.short_violations,
                nilpotent_checked: report.soundness.nilpotent_checked,
                nilpotent_violations: report.soundness.nilpotent_violations,
                levels: report
                    .levels
                    .iter()
                    .map(|l| LevelRecord {
                        dimension: l.dim,
                        n: l.n,
                        discriminant: l.discriminant.to_string(),
                        splitting_samples: l.splitting_samples,
                        lll_scale_bits: l.lll_scale_bits,
                        lll_attempts: l.lll_attempts,
                        log2_length_ratio: l.log2_ratio,
                        log2_reducedness_bound: l.log2_bound,
                        target_length: l.target_length,
                        step: l.step,
                        shell_points: l.shell_points,
                        last_shell: l.last_shell,
                        ball_nodes: l.ball_nodes,
                        exact_tests: l.exact_tests,
                    })
                    .collect(),
            }),
        }
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("serializable");
        s.push('\n');
        s
    }

    pub fn from_json(s: &str) -> Result<Self> {
        serde_json::from_str(s).map_err(|e| Error::Parse(e.to_string()))
    }

    pub fn element(&self, field: &NumberField) -> Result<AlgebraElement> {
        Ok(AlgebraElement::new(self.rank_one_element.iter().map(|e| elem_from_strings(field, e)).collect::<Result<_>>()?))
    }

    pub fn image_matrices(&self, field: &NumberField) -> Result<Vec<KMatrix>> {
        self.images.iter().map(|m| matrix_from_strings(field, m)).collect()
    }
}

/// Exact verification in order: rank one, unitality, multiplicativity, bijectivity.
pub fn verify(instance: &InstanceFile, witness: &WitnessFile) -> Result<()> {
    if witness.format != WITNESS_FORMAT {
        return Err(Error::Parse(format!("unknown witness format {:?}", witness.format)));
    }
    let alg = instance.to_algebra()?;
    let field = alg.field();
    let n = alg.require_n()?;
    if witness.n != n {
        return Err(Error::Verification(format!("witness is for n = {}, algebra has n = {n}", witness.n)));
    }
    let c = witness.element(field)?;
    if c.dim() != alg.dim() {
        return Err(Error::Parse("rank-one element has the wrong dimension".into()));
    }
    let rank = alg.rank_of_element(&c)?;
    if rank != 1 {
        return Err(Error::Verification(format!("rank-one check: element has rank {rank}")));
    }
    let images = witness.image_matrices(field)?;
    verify_images(&alg, n, &images)
}

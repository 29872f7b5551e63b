//! End-to-end acceptance suite. Runs the `splitalg` binary on generated
//! instances and prints one PASS/FAIL line per criterion.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, ExitCode, Output};
use std::time::{Duration, Instant};

use serde_json::Value;

use splitalg::apps::{algebra_isomorphism, verify_algebra_map};
use splitalg::splitter::b_bound;
use splitalg::{gen_instance, InstanceFile, NumberField, Rational, SplitConfig, StructureAlgebra};

const BIN: &str = env!("CARGO_BIN_EXE_splitalg");

fn run(args: &[&str]) -> Output {
    Command::new(BIN).args(args).output().expect("spawn splitalg")
}

#[derive(Clone, Copy)]
enum Field {
    Rationals,
    Quadratic(i64),
}

impl Field {
    fn name(self) -> String {
        match self {
            Field::Rationals => "Q".into(),
            Field::Quadratic(d) => format!("Q(sqrt {d})"),
        }
    }

    /// Degree over Q and a Gram matrix of the trace form on an integral basis.
    fn trace_form(self) -> Vec<Vec<i128>> {
        match self {
            Field::Rationals => vec![vec![1]],
            Field::Quadratic(d) if d.rem_euclid(4) == 1 => {
                // Basis 1, w with w^2 = w + (d - 1) / 4.
                let c = (d as i128 - 1) / 4;
                vec![vec![2, 1], vec![1, 1 + 2 * c]]
            }
            Field::Quadratic(d) => vec![vec![2, 0], vec![0, 2 * d as i128]],
        }
    }
}

struct Run {
    label: String,
    n: usize,
    field: Field,
    seed: u64,
    split_ok: bool,
    verify_ok: bool,
    elapsed: Duration,
    witness: Option<Vec<u8>>,
}

impl Run {
    fn json(&self) -> Option<Value> {
        self.witness.as_ref().and_then(|w| serde_json::from_slice(w).ok())
    }
}

fn generate(dir: &Path, n: usize, field: Field, seed: u64) -> PathBuf {
    let path = dir.join(format!("inst-{}-{}-{seed}.json", n, field.name().replace(|c: char| !c.is_alphanumeric(), "")));
    let mut args = vec!["gen".to_string(), "--n".into(), n.to_string(), "--seed".into(), seed.to_string(), "--entry-bound".into(), "10".into()];
    if let Field::Quadratic(d) = field {
        args.push(format!("--quadratic={d}"));
    }
    args.push("--output".into());
    args.push(path.display().to_string());
    let out = Command::new(BIN).args(&args).output().expect("spawn splitalg");
    assert!(out.status.success(), "gen failed: {}", String::from_utf8_lossy(&out.stderr));
    path
}

fn split_once(inst: &Path, out: &Path, seed: u64) -> (bool, Duration) {
    let start = Instant::now();
    let o = run(&["split", &inst.display().to_string(), "--deterministic", "--seed", &seed.to_string(), "--output", &out.display().to_string()]);
    let elapsed = start.elapsed();
    if !o.status.success() {
        eprintln!("  split {} failed: {}", inst.display(), String::from_utf8_lossy(&o.stderr).trim());
    }
    (o.status.success(), elapsed)
}

fn suite_run(dir: &Path, label: &str, n: usize, field: Field, seed: u64) -> Run {
    let inst = generate(dir, n, field, seed);
    let wpath = inst.with_extension("witness.json");
    let (split_ok, elapsed) = split_once(&inst, &wpath, seed);
    let verify_ok = split_ok && {
        let o = run(&["verify", &inst.display().to_string(), &wpath.display().to_string()]);
        if !o.status.success() {
            eprintln!("  verify {} failed: {}", inst.display(), String::from_utf8_lossy(&o.stderr).trim());
        }
        o.status.success()
    };
    Run { label: label.into(), n, field, seed, split_ok, verify_ok, elapsed, witness: fs::read(&wpath).ok() }
}

/// Determinant by fraction-free elimination over i128.
fn det_i128(mut a: Vec<Vec<i128>>) -> i128 {
    let m = a.len();
    let mut sign = 1;
    let mut prev = 1i128;
    for k in 0..m {
        if a[k][k] == 0 {
            match (k + 1..m).find(|&r| a[r][k] != 0) {
                Some(r) => {
                    a.swap(k, r);
                    sign = -sign;
                }
                None => return 0,
            }
        }
        for i in k + 1..m {
            for j in k + 1..m {
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) / prev;
            }
        }
        prev = a[k][k];
    }
    sign * a[m - 1][m - 1]
}

/// Discriminant of `M_n(O_K)` as a Z-order: Gram determinant of the basis
/// `E_ij w_a` under `(x, y) -> Tr_{K/Q}(Tr_reg(x y))`, where `Tr_reg = n tr`.
fn standard_order_discriminant(n: usize, field: Field) -> i128 {
    let tf = field.trace_form();
    let d = tf.len();
    let m = n * n * d;
    let mut g = vec![vec![0i128; m]; m];
    for i in 0..n {
        for j in 0..n {
            for k in 0..n {
                for l in 0..n {
                    // tr(E_ij E_kl) = [j == k][i == l]
                    if j == k && i == l {
                        for a in 0..d {
                            for b in 0..d {
                                g[(i * n + j) * d + a][(k * n + l) * d + b] = n as i128 * tf[a][b];
                            }
                        }
                    }
                }
            }
        }
    }
    det_i128(g)
}

/// `log2 c_m` from Hermite constants: exact `gamma_m^m` up to 8, and
/// `gamma_m <= 1 + m/4` beyond.
fn log2_c(m: usize) -> f64 {
    let gamma_pow_m: [f64; 9] = [1.0, 1.0, 4.0 / 3.0, 2.0, 4.0, 8.0, 64.0 / 3.0, 64.0, 256.0];
    let mf = m as f64;
    let hermite = if m <= 8 { gamma_pow_m[m].log2() / 2.0 } else { mf / 2.0 * (1.0 + mf / 4.0).log2() };
    hermite + mf * 1.5f64.log2() + mf * (mf - 1.0) / 2.0
}

struct Report {
    failures: usize,
}

impl Report {
    fn line(&mut self, k: usize, ok: bool, detail: String) {
        if !ok {
            self.failures += 1;
        }
        println!("criterion {k}: {} - {detail}", if ok { "PASS" } else { "FAIL" });
    }
}

fn suite_line(rep: &mut Report, k: usize, runs: &[&Run], limit: Duration) {
    let ok_runs = runs.iter().filter(|r| r.split_ok && r.verify_ok).count();
    let slow: Vec<_> = runs.iter().filter(|r| r.elapsed > limit).map(|r| format!("{} seed {}", r.label, r.seed)).collect();
    let max = runs.iter().map(|r| r.elapsed).max().unwrap_or_default();
    rep.line(
        k,
        ok_runs == runs.len() && slow.is_empty() && !runs.is_empty(),
        format!("{ok_runs}/{} split and verified, slowest {:.2} s (limit {} s){}", runs.len(), max.as_secs_f64(), limit.as_secs(), if slow.is_empty() { String::new() } else { format!(", too slow: {slow:?}") }),
    );
}

fn main() -> ExitCode {
    let tmp = tempfile::tempdir().expect("tempdir");
    let dir = tmp.path();
    let mut rep = Report { failures: 0 };

    let mut runs = Vec::new();
    for seed in 1..=50 {
        runs.push(suite_run(dir, "n=2/Q", 2, Field::Rationals, seed));
    }
    for seed in 1..=20 {
        runs.push(suite_run(dir, "n=3/Q", 3, Field::Rationals, seed));
    }
    for seed in 1..=10 {
        runs.push(suite_run(dir, "n=2/Q(sqrt 5)", 2, Field::Quadratic(5), seed));
    }
    for seed in 1..=10 {
        runs.push(suite_run(dir, "n=2/Q(i)", 2, Field::Quadratic(-1), seed));
    }
    let pick = |label: &str| runs.iter().filter(|r| r.label == label).collect::<Vec<_>>();

    suite_line(&mut rep, 1, &pick("n=2/Q"), Duration::from_secs(5));
    suite_line(&mut rep, 2, &pick("n=3/Q"), Duration::from_secs(60));
    let mut general = pick("n=2/Q(sqrt 5)");
    general.extend(pick("n=2/Q(i)"));
    suite_line(&mut rep, 3, &general, Duration::from_secs(120));

    // 4: discriminants against the Gram-determinant oracle.
    let mut bad = Vec::new();
    let mut checked = 0;
    for r in &runs {
        let expected = standard_order_discriminant(r.n, r.field).unsigned_abs();
        let got = r.json().and_then(|w| w["discriminants"][0].as_str().map(|s| s.trim_start_matches('-').to_string()));
        checked += 1;
        if got.as_deref() != Some(expected.to_string().as_str()) {
            bad.push(format!("{} seed {}: {:?} vs {expected}", r.label, r.seed, got));
        }
    }
    rep.line(
        4,
        bad.is_empty(),
        format!(
            "{checked} instances, oracle |disc| n=2/Q {} n=3/Q {} Q(sqrt 5) {} Q(i) {}{}",
            standard_order_discriminant(2, Field::Rationals).abs(),
            standard_order_discriminant(3, Field::Rationals).abs(),
            standard_order_discriminant(2, Field::Quadratic(5)).abs(),
            standard_order_discriminant(2, Field::Quadratic(-1)).abs(),
            if bad.is_empty() { String::new() } else { format!(", mismatches: {bad:?}") }
        ),
    );

    // 5: every accepted reduction satisfies the length-product bound.
    let mut levels = 0;
    let mut violations = Vec::new();
    let mut worst: f64 = f64::NEG_INFINITY;
    for r in &runs {
        let Some(w) = r.json() else { continue };
        for lv in w["statistics"]["levels"].as_array().into_iter().flatten() {
            levels += 1;
            let m = lv["dimension"].as_u64().unwrap_or(0) as usize * r.field.trace_form().len();
            let ratio = lv["log2_length_ratio"].as_f64().unwrap_or(f64::INFINITY);
            let bound = log2_c(m);
            worst = worst.max(ratio - bound);
            if !(ratio <= bound) {
                violations.push(format!("{} seed {}: {ratio} > {bound}", r.label, r.seed));
            }
        }
    }
    rep.line(5, violations.is_empty() && levels > 0, format!("{levels} reductions, max log2(ratio / c_m) = {worst:.2}, {} violations", violations.len()));

    // 6: soundness of the short-element test.
    let (mut checked, mut viol) = (0u64, 0u64);
    for w in runs.iter().filter_map(Run::json) {
        checked += w["statistics"]["short_elements_checked"].as_u64().unwrap_or(0) + w["statistics"]["nilpotent_checked"].as_u64().unwrap_or(0);
        viol += w["statistics"]["short_element_violations"].as_u64().unwrap_or(1) + w["statistics"]["nilpotent_violations"].as_u64().unwrap_or(1);
    }
    rep.line(6, viol == 0 && checked > 0, format!("{checked} short elements checked exactly, {viol} violations"));

    // 7: rank-one witness norms on the n=2 rational suite.
    let mut worst: f64 = 0.0;
    let mut fails = 0;
    for r in pick("n=2/Q") {
        let Some(w) = r.json() else {
            fails += 1;
            continue;
        };
        let err = w["statistics"]["witness_norm_error"].as_f64().unwrap_or(f64::INFINITY);
        let norm = w["statistics"]["witness_norms"].as_array().map_or(f64::INFINITY, |a| a.iter().map(|x| x.as_f64().unwrap_or(f64::INFINITY)).fold(0.0, f64::max));
        worst = worst.max(norm + err);
        if !(norm + err < 2.0) {
            fails += 1;
        }
    }
    rep.line(7, fails == 0, format!("max certified witness norm {worst:.4} < 2 on {} instances, {fails} failures", pick("n=2/Q").len()));

    // 8: b-bounds.
    let bq = b_bound(&NumberField::rationals());
    let b3 = b_bound(&NumberField::quadratic(3).expect("Q(sqrt 3)"));
    let want = 2.0 * 3f64.sqrt();
    let ok8 = bq.value == 1.0 && bq.radius == 0.0 && b3.contains(want) && b3.radius < 1e-9;
    rep.line(8, ok8, format!("b(Q) = {} exactly, b(Q(sqrt 3)) = {} +- {:.1e} (2 sqrt 3 = {want})", bq.value, b3.value, b3.radius));

    // 9: algebra isomorphisms between differently conjugated presentations.
    let q = NumberField::rationals();
    let cfg = SplitConfig { deterministic: true, ..SplitConfig::default() };
    let mut ok = 0;
    let mut invariant_checks = 0;
    for k in 0..20u64 {
        let a = gen_instance(2, &q, 1000 + 2 * k, 10).and_then(|i| i.to_algebra());
        let b = gen_instance(2, &q, 1001 + 2 * k, 10).and_then(|i| i.to_algebra());
        let (Ok(a), Ok(b)) = (a, b) else { continue };
        match algebra_isomorphism(&a, &b, &cfg) {
            Ok(iso) if verify_algebra_map(&a, &b, &iso.images).is_ok() => {
                ok += 1;
                invariant_checks += iso.invariant_checks;
            }
            Ok(_) => eprintln!("  pair {k}: map failed verification"),
            Err(e) => eprintln!("  pair {k}: {e}"),
        }
    }
    rep.line(9, ok == 20 && invariant_checks > 0, format!("{ok}/20 pairs verified exactly, {invariant_checks} invariant checks clean"));

    // 10: negative controls.
    let m1 = q.from_rational(&Rational::from_integer((-1).into()));
    let hamilton = StructureAlgebra::quaternion(&q, &m1, &m1).expect("quaternions");
    let hpath = dir.join("hamilton.json");
    fs::write(&hpath, InstanceFile::from_algebra(&hamilton).to_json()).expect("write");
    let hs = run(&["split", &hpath.display().to_string()]);
    let hz = run(&["zerodiv", &hpath.display().to_string()]);
    let hamilton_ok = hs.status.code() == Some(2) && hz.status.code() == Some(2) && hs.stdout.is_empty() && hz.stdout.is_empty();

    let n52 = run(&["norm", "--d", "5", "--a", "2"]);
    let n52_json: Option<Value> = serde_json::from_slice(&n52.stdout).ok();
    // Oracle: 2 is not a square mod 5, so x^2 - 5 y^2 = 2 z^2 forces 5 | x, z and then 5 | y.
    let squares_mod5: Vec<i64> = (0..5).map(|x| x * x % 5).collect();
    let descent = !squares_mod5.contains(&2)
        && (1..=60i64).all(|z| (-60..=60i64).all(|x| (-60..=60i64).all(|y| x * x - 5 * y * y != 2 * z * z)));
    let unsolvable_ok = n52.status.code() == Some(1) && n52_json.as_ref().is_some_and(|v| v["solvable"] == Value::Bool(false)) && descent;

    let n54 = run(&["norm", "--d", "5", "--a", "4"]);
    let n54_ok = n54.status.success()
        && serde_json::from_slice::<Value>(&n54.stdout).ok().and_then(|v| {
            let x: Vec<Rational> = v["x"].as_array()?.iter().map(|s| s.as_str().and_then(|s| s.parse().ok())).collect::<Option<_>>()?;
            let five = Rational::from_integer(5.into());
            Some(&x[0] * &x[0] - five * &x[1] * &x[1] == Rational::from_integer(4.into()))
        }) == Some(true);
    rep.line(
        10,
        hamilton_ok && unsolvable_ok && n54_ok,
        format!(
            "Hamilton split/zerodiv exit {:?}/{:?}, norm(5, 2) exit {:?} with descent oracle {}, norm(5, 4) exact {}",
            hs.status.code(),
            hz.status.code(),
            n52.status.code(),
            if descent { "agreeing" } else { "DISAGREEING" },
            n54_ok
        ),
    );

    // 11: determinism across a second run of the full suite.
    let mut differ = Vec::new();
    for r in &runs {
        let inst = generate(dir, r.n, r.field, r.seed);
        let second = inst.with_extension("second.json");
        split_once(&inst, &second, r.seed);
        if fs::read(&second).ok() != r.witness || r.witness.is_none() {
            differ.push(format!("{} seed {}", r.label, r.seed));
        }
    }
    rep.line(11, differ.is_empty(), format!("{} witness files compared byte for byte, {} differ{}", runs.len(), differ.len(), if differ.is_empty() { String::new() } else { format!(": {differ:?}") }));

    if rep.failures == 0 {
        ExitCode::SUCCESS
    } else {
        println!("{} criteria failed", rep.failures);
        ExitCode::FAILURE
    }
}

use num_bigint::BigInt;
use num_traits::Pow;

use splitalg::apps::{algebra_isomorphism, find_zero_divisor, solve_norm_equation, verify_algebra_map, NormSolution};
use splitalg::order::maximal_order;
use splitalg::{gen_instance, split, verify, Error, InstanceFile, NumberField, Rational, SplitConfig, StructureAlgebra, WitnessFile};

fn cfg() -> SplitConfig {
    SplitConfig { deterministic: true, ..SplitConfig::default() }
}

#[test]
fn random_rational_instances_split_and_verify() {
    let q = NumberField::rationals();
    for seed in 0..5 {
        let inst = gen_instance(2, &q, seed, 10).unwrap();
        let report = split(&inst.to_algebra().unwrap(), &cfg()).unwrap();
        let wit = WitnessFile::from_report(&report);
        verify(&inst, &wit).unwrap();
        assert_eq!(report.discriminants[0], BigInt::from(-16));
    }
}

#[test]
fn gaussian_instance_splits() {
    let k = NumberField::quadratic(-1).unwrap();
    let inst = gen_instance(2, &k, 3, 10).unwrap();
    let report = split(&inst.to_algebra().unwrap(), &cfg()).unwrap();
    verify(&inst, &WitnessFile::from_report(&report)).unwrap();
}

#[test]
fn maximal_order_of_matrix_ring_has_expected_discriminant() {
    let q = NumberField::rationals();
    for n in 2..=3usize {
        let inst = gen_instance(n, &q, 11, 6).unwrap();
        let o = maximal_order(&inst.to_algebra().unwrap(), Default::default()).unwrap();
        let expected = BigInt::from(n).pow((n * n) as u32);
        assert_eq!(o.discriminant().magnitude(), expected.magnitude());
    }
}

#[test]
fn hamilton_quaternions_do_not_split() {
    let q = NumberField::rationals();
    let m1 = q.from_rational(&Rational::from_integer((-1).into()));
    let h = StructureAlgebra::quaternion(&q, &m1, &m1).unwrap();
    assert!(matches!(split(&h, &cfg()), Err(Error::NonSplit(_))));
    assert!(matches!(find_zero_divisor(&h, &cfg()), Err(Error::NonSplit(_))));
}

#[test]
fn tampered_witness_is_rejected() {
    let q = NumberField::rationals();
    let inst = gen_instance(2, &q, 5, 10).unwrap();
    let report = split(&inst.to_algebra().unwrap(), &cfg()).unwrap();
    let mut wit = WitnessFile::from_report(&report);
    wit.images.swap(0, 1);
    assert!(matches!(verify(&inst, &wit), Err(Error::Verification(_))));
}

#[test]
fn instance_files_round_trip() {
    let k = NumberField::quadratic(5).unwrap();
    let inst = gen_instance(2, &k, 9, 10).unwrap();
    let text = inst.to_json();
    let back = InstanceFile::from_json(&text).unwrap();
    assert_eq!(back.to_json(), text);
    let report = split(&back.to_algebra().unwrap(), &cfg()).unwrap();
    let wtext = WitnessFile::from_report(&report).to_json();
    assert_eq!(WitnessFile::from_json(&wtext).unwrap().to_json(), wtext);
}

#[test]
fn two_presentations_are_isomorphic() {
    let q = NumberField::rationals();
    let a = gen_instance(2, &q, 1, 10).unwrap().to_algebra().unwrap();
    let b = gen_instance(2, &q, 2, 10).unwrap().to_algebra().unwrap();
    let iso = algebra_isomorphism(&a, &b, &cfg()).unwrap();
    verify_algebra_map(&a, &b, &iso.images).unwrap();
}

#[test]
fn norm_equations() {
    let r = |n: i64| Rational::from_integer(n.into());
    match solve_norm_equation(5, &r(4), &cfg()).unwrap() {
        NormSolution::Solution { x0, x1 } => assert_eq!(&x0 * &x0 - r(5) * &x1 * &x1, r(4)),
        NormSolution::Unsolvable => panic!("4 is a norm"),
    }
    match solve_norm_equation(2, &r(7), &cfg()).unwrap() {
        NormSolution::Solution { x0, x1 } => assert_eq!(&x0 * &x0 - r(2) * &x1 * &x1, r(7)),
        NormSolution::Unsolvable => panic!("7 = 3^2 - 2 * 1^2"),
    }
    assert_eq!(solve_norm_equation(5, &r(2), &cfg()).unwrap(), NormSolution::Unsolvable);
}

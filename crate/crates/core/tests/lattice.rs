use num_bigint::BigInt;
use num_traits::{One, Signed};
use proptest::prelude::*;

use splitalg::exact::bareiss_det;
use splitalg::lattice::{coefficient_box, lll_integral, reduce_lattice};
use splitalg::numeric::Fixed;

fn fixed_rows(rows: &[Vec<i64>]) -> Vec<Vec<Fixed>> {
    rows.iter().map(|r| r.iter().map(|&x| Fixed::from_i64(x, 96)).collect()).collect()
}

#[test]
fn orthogonal_basis_is_left_alone() {
    let rb = reduce_lattice(&fixed_rows(&[vec![2, 0], vec![0, 2]]), 0.0, 32, (99, 100)).unwrap();
    let mut lengths = rb.lengths.clone();
    lengths.sort_by(f64::total_cmp);
    assert_eq!(lengths, vec![2.0, 2.0]);
    assert!(rb.log2_ratio.abs() < 1e-9);
}

#[test]
fn skewed_basis_reduces_to_root_two() {
    let rb = reduce_lattice(&fixed_rows(&[vec![2, 0], vec![1, 1]]), 0.0, 32, (99, 100)).unwrap();
    for l in &rb.lengths {
        assert!((l - 2f64.sqrt()).abs() < 1e-12, "length {l}");
    }
    // Product of lengths 2 equals the covolume, so the basis is orthogonal.
    assert!(rb.log2_ratio.abs() < 1e-9);
}

fn independent(rows: &[Vec<i64>]) -> bool {
    let b: Vec<Vec<BigInt>> = rows.iter().map(|r| r.iter().map(|&x| BigInt::from(x)).collect()).collect();
    bareiss_det(&b) != BigInt::from(0)
}

fn square_basis(m: usize) -> impl Strategy<Value = Vec<Vec<i64>>> {
    prop::collection::vec(prop::collection::vec(-40i64..=40, m), m).prop_filter("independent", |r| independent(r))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn transform_is_unimodular_and_consistent(rows in (2usize..=4).prop_flat_map(square_basis)) {
        let b: Vec<Vec<BigInt>> = rows.iter().map(|r| r.iter().map(|&x| BigInt::from(x)).collect()).collect();
        let out = lll_integral(&b, (99, 100)).unwrap();
        prop_assert_eq!(bareiss_det(&out.transform).abs(), BigInt::one());
        for (red, u) in out.reduced.iter().zip(&out.transform) {
            let mut v = vec![BigInt::from(0); b.len()];
            for (c, row) in u.iter().zip(&b) {
                for (o, x) in v.iter_mut().zip(row) {
                    *o += c * x;
                }
            }
            prop_assert_eq!(&v, red);
        }
    }

    #[test]
    fn coefficient_box_contains_every_short_vector(rows in square_basis(2), bound in 1.0f64..30.0) {
        let rb = reduce_lattice(&fixed_rows(&rows), 0.0, 32, (99, 100)).unwrap();
        let beta = coefficient_box(&rb, bound);
        let vecs = rb.vectors_f64();
        // Brute force over a generous window in reduced coordinates.
        let w = 60i64;
        for a in -w..=w {
            for c in -w..=w {
                let v: Vec<f64> = (0..2).map(|k| a as f64 * vecs[0][k] + c as f64 * vecs[1][k]).collect();
                let len = v.iter().map(|x| x * x).sum::<f64>().sqrt();
                if len <= bound {
                    prop_assert!(a.unsigned_abs() <= beta[0] && c.unsigned_abs() <= beta[1],
                        "({a}, {c}) of length {len} outside box {beta:?}");
                }
            }
        }
    }
}

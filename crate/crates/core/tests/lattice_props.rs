mod common;

use nalgebra::DMatrix;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use shiftinv::{coset_reps, index, Lattice};

fn basis(d: usize) -> impl Strategy<Value = Lattice> {
    any::<u64>().prop_map(move |seed| common::random_basis(&mut ChaCha8Rng::seed_from_u64(seed), d))
}

fn integer_matrix() -> impl Strategy<Value = DMatrix<f64>> {
    prop::collection::vec(-4i32..=4, 4)
        .prop_map(|v| DMatrix::from_fn(2, 2, |i, j| v[2 * i + j] as f64))
        .prop_filter("0 < |det| <= 12", |m| {
            let d = m.determinant().abs().round();
            d >= 1.0 && d <= 12.0
        })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn reduce_is_idempotent(l in basis(2), p in prop::collection::vec(-50.0f64..50.0, 2)) {
        let r = l.reduce(&p);
        let rr = l.reduce(&r);
        for (a, b) in r.iter().zip(&rr) {
            prop_assert!((a - b).abs() < 1e-9);
        }
        let diff: Vec<f64> = p.iter().zip(&r).map(|(a, b)| a - b).collect();
        prop_assert!(l.contains(&diff));
        let t = l.coords(&r);
        prop_assert!(t.iter().all(|v| *v >= -0.5 - 1e-9 && *v < 0.5 + 1e-9));
    }

    #[test]
    fn dual_of_dual_and_rows_round_trip(l in basis(3)) {
        let dd = l.dual().dual();
        prop_assert!((dd.basis() - l.basis()).abs().max() < 1e-10);
        prop_assert_eq!(Lattice::from_rows(&l.rows()).unwrap(), l.clone());
        prop_assert!((l.det_abs() * l.dual().det_abs() - 1.0).abs() < 1e-10);
    }

    #[test]
    fn index_times_det(l in basis(2), m in integer_matrix()) {
        let fine = Lattice::new(l.basis() * &m).unwrap();
        let k = m.determinant().abs().round() as usize;
        prop_assert_eq!(index(&fine, &l).unwrap(), k);
        prop_assert!((k as f64 * l.det_abs() - fine.det_abs()).abs() < 1e-9 * fine.det_abs());
    }

    #[test]
    fn coset_count_equals_index(l in basis(2), m in integer_matrix()) {
        let fine = Lattice::new(l.basis() * &m).unwrap();
        let k = m.determinant().abs().round() as usize;
        let reps = coset_reps(&fine, &l).unwrap();
        prop_assert_eq!(reps.len(), k);
        for (i, a) in reps.reps.iter().enumerate() {
            prop_assert!(fine.dual().contains(a));
            for b in &reps.reps[i + 1..] {
                let diff: Vec<f64> = a.iter().zip(b).map(|(x, y)| x - y).collect();
                prop_assert!(!l.dual().contains(&diff));
            }
        }
    }

    #[test]
    fn points_in_ball_match_brute_force(
        l in basis(2),
        c in prop::collection::vec(-3.0f64..3.0, 2),
        r in 0.1f64..4.0,
    ) {
        let got = l.points_in_ball(&c, r);
        let inv_norm = l.basis().clone().try_inverse().unwrap().norm();
        let k = (inv_norm * (c.iter().map(|v| v * v).sum::<f64>().sqrt() + r)).ceil() as i64 + 1;
        let mut want = 0;
        for i in -k..=k {
            for j in -k..=k {
                let p = l.point(&[i as f64, j as f64]);
                let dist = ((p[0] - c[0]).powi(2) + (p[1] - c[1]).powi(2)).sqrt();
                if dist <= r {
                    want += 1;
                    prop_assert!(got.iter().any(|q| (q[0] - p[0]).abs() < 1e-9 && (q[1] - p[1]).abs() < 1e-9));
                }
            }
        }
        prop_assert_eq!(got.len(), want);
    }
}

#[test]
fn nesting_is_checked() {
    let z = Lattice::integer(1);
    let third = Lattice::scaled_integer(1, 1.0 / 3.0).unwrap();
    assert_eq!(index(&z, &third).unwrap(), 3);
    assert!(index(&third, &z).is_err());
    let irrational = Lattice::scaled_integer(1, 2f64.sqrt()).unwrap();
    assert!(index(&irrational, &z).is_err());
}

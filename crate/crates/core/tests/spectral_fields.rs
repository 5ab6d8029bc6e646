mod common;

use shiftinv::periodization::{gramian_field, gramian_field_on, Grid};
use shiftinv::presets::{ex51_set, ex53_set, rank_one_identity_residual};
use shiftinv::spectral::{classify, gamma_frame_check, invariance_test, min_generators, weyl_check, SpectralProfile};
use shiftinv::{GeneratorSet, GeneratorSpec, Lattice};

#[test]
fn weyl_bound_on_shipped_fields() {
    for (name, field) in common::shipped_fields() {
        let profile = SpectralProfile::compute(&field, None).unwrap();
        let w = weyl_check(&field, &profile);
        assert_eq!(w.violations, 0, "{name}: margin {}", w.min_margin);
        assert_eq!(w.pairs, field.len());
    }
}

#[test]
fn refined_grid_reproduces_nodes_bitwise() {
    let set = ex53_set().unwrap();
    let z = Lattice::integer(1);
    let coarse = Grid::centered(64);
    let a = gramian_field_on(&set, &z, coarse, 1e-10).unwrap();
    let b = gramian_field_on(&set, &z, coarse.refined(), 1e-10).unwrap();
    for (i, m) in a.values.iter().enumerate() {
        assert_eq!(a.points[i], b.points[2 * i]);
        assert_eq!(m, &b.values[2 * i]);
    }
}

#[test]
fn two_generator_identity_in_two_dimensions() {
    let set = ex51_set(2).unwrap();
    let z2 = Lattice::integer(2);
    let field = gramian_field(&set, &z2, 32, 1e-12).unwrap();
    for (x, m) in field.points.iter().zip(&field.values) {
        let g = set.get(1).eval_fourier(x).norm_sqr();
        assert!(rank_one_identity_residual(m, g) < 1e-8);
    }
    assert_eq!(min_generators(&field, Some(1e-6)).unwrap(), 1);
}

#[test]
fn frame_not_riesz_ranks_are_one_and_two() {
    let field = gramian_field(&ex53_set().unwrap(), &Lattice::integer(1), 512, 1e-10).unwrap();
    let profile = SpectralProfile::compute(&field, None).unwrap();
    assert!(profile.ranks.iter().all(|r| *r == 1 || *r == 2));
    assert!(profile.ranks.contains(&1) && profile.ranks.contains(&2));
}

#[test]
fn paley_wiener_frame_under_half_lattice() {
    let set = GeneratorSet::new(vec![GeneratorSpec::indicator_box(vec![-0.5], vec![0.5]).unwrap()]).unwrap();
    let z = Lattice::integer(1);
    let half = Lattice::scaled_integer(1, 0.5).unwrap();
    let class = classify(&gramian_field(&set, &z, 256, 1e-10).unwrap(), None, None).unwrap();
    assert!(class.is_riesz);
    let inv = invariance_test(&set, &z, &half, 256, 1e-10, None).unwrap();
    assert!(inv.invariant);
    assert_eq!(inv.index, 2);
    let gf = gamma_frame_check(&set, &half, &inv, &class, 256, 1e-10, None).unwrap();
    assert!(gf.consistent);
    let (a, b) = gf.classification.frame_bounds;
    assert!((a - 1.0).abs() < 1e-12 && (b - 1.0).abs() < 1e-12, "({a}, {b})");
    assert!(!gf.classification.is_riesz);
}

#[test]
fn dimension_mismatch_is_reported() {
    let set = ex51_set(1).unwrap();
    assert!(gramian_field(&set, &Lattice::integer(2), 8, 1e-10).is_err());
}

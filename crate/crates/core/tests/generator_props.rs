mod common;

use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use shiftinv::periodization::gramian_field;
use shiftinv::spectral::classify;
use shiftinv::{GeneratorSet, GeneratorSpec, Lattice};

use common::simpson;

fn family() -> impl Strategy<Value = GeneratorSpec> {
    prop_oneof![
        (-1.0f64..0.0, 0.05f64..1.5).prop_map(|(a, w)| GeneratorSpec::indicator_box(vec![a], vec![a + w]).unwrap()),
        (-1.0f64..1.0, 0.05f64..1.0).prop_map(|(c, r)| GeneratorSpec::bump_fourier(vec![c], r).unwrap()),
        (-1.0f64..1.0, 0.1f64..1.0, 0.2f64..3.0, 0.0f64..4.0)
            .prop_map(|(a, w, amp, om)| GeneratorSpec::bump_time(a, a + w, amp, om).unwrap()),
        (1u32..=4).prop_map(|p| GeneratorSpec::sinc_power(p, 1).unwrap()),
        Just(GeneratorSpec::gaussian(1).unwrap()),
    ]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn envelope_dominates_samples(f in family(), seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        for _ in 0..1000 {
            let xi: f64 = rng.gen_range(-200.0..200.0);
            let v = f.eval_fourier(&[xi]).norm();
            prop_assert!(v <= f.decay_envelope(xi.abs()) * (1.0 + 1e-9) + 1e-14, "ξ = {xi}: {v}");
        }
    }

    #[test]
    fn shift_keeps_modulus(f in family(), tau in -3.0f64..3.0, xi in -20.0f64..20.0) {
        let g = f.shift_modulate(&[tau]).unwrap();
        let (a, b) = (f.eval_fourier(&[xi]), g.eval_fourier(&[xi]));
        prop_assert!((a.norm() - b.norm()).abs() <= 1e-12 * a.norm().max(1.0));
        prop_assert_eq!(g.envelope(), f.envelope());
    }

    #[test]
    fn shift_keeps_gramian_diagonal(tau in -2.0f64..2.0) {
        let f = GeneratorSpec::sinc_power(2, 1).unwrap();
        let set = GeneratorSet::new(vec![f.clone(), f.shift_modulate(&[tau]).unwrap()]).unwrap();
        let field = gramian_field(&set, &Lattice::integer(1), 32, 1e-10).unwrap();
        for m in &field.values {
            prop_assert!((m[(0, 0)] - m[(1, 1)]).norm() < 1e-12);
        }
    }

    #[test]
    fn bumps_are_normalized(c in -1.0f64..1.0, r in 0.05f64..1.0, a in -1.0f64..1.0, w in 0.1f64..1.0, om in 0.0f64..4.0) {
        let f = GeneratorSpec::bump_fourier(vec![c], r).unwrap();
        let e = simpson(|x| f.eval_fourier(&[x]).norm_sqr(), c - r, c + r, 4000);
        prop_assert!((e - 1.0).abs() < 1e-8, "{e}");
        prop_assert!((f.l2_norm_squared().unwrap() - 1.0).abs() < 1e-8);
        let g = GeneratorSpec::bump_time(a, a + w, 1.0, om).unwrap();
        let e = simpson(|x| g.eval_time(&[x]).unwrap().norm_sqr(), a, a + w, 4000);
        prop_assert!((e - 1.0).abs() < 1e-8, "{e}");
    }

    #[test]
    fn classification_scales_with_amplitude(amp in 0.1f64..10.0) {
        let z = Lattice::integer(1);
        let base = GeneratorSet::new(vec![GeneratorSpec::bump_time(0.0, 0.5, 1.0, 1.0).unwrap()]).unwrap();
        let scaled = GeneratorSet::new(vec![GeneratorSpec::bump_time(0.0, 0.5, amp, 1.0).unwrap()]).unwrap();
        let a = classify(&gramian_field(&base, &z, 128, 1e-10).unwrap(), None, None).unwrap();
        let b = classify(&gramian_field(&scaled, &z, 128, 1e-10).unwrap(), None, None).unwrap();
        prop_assert_eq!(a.status, b.status);
        prop_assert_eq!(a.is_riesz, b.is_riesz);
        prop_assert_eq!(a.rho, b.rho);
        let k = amp * amp;
        prop_assert!((b.frame_bounds.0 / a.frame_bounds.0 - k).abs() < 1e-6 * k);
        prop_assert!((b.frame_bounds.1 / a.frame_bounds.1 - k).abs() < 1e-6 * k);
    }
}

#[test]
fn two_dimensional_indicator_envelope() {
    let f = GeneratorSpec::indicator_box(vec![-0.5, 0.0], vec![0.5, 0.25]).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for _ in 0..1000 {
        let xi: [f64; 2] = [rng.gen_range(-5.0..5.0), rng.gen_range(-5.0..5.0)];
        let r = (xi[0] * xi[0] + xi[1] * xi[1]).sqrt();
        assert!(f.eval_fourier(&xi).norm() <= f.decay_envelope(r));
    }
}

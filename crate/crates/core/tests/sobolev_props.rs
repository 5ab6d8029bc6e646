mod common;

use num_complex::Complex64;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use shiftinv::sobolev::{
    bracket_embedding_check, geometric_ladder, interval_indicator_coefficient, kernel_ratio,
    torus_directional_ladder, torus_fourier_ladder, torus_gagliardo, torus_gagliardo_ladder,
    torus_seminorm_fourier, Kernel, PeriodicSamples, TrigPolynomial, Verdict,
};
use shiftinv::{GeneratorSpec, Lattice};

use common::{c, random_basis, random_trig_polynomial};

fn trig_poly(d: usize) -> impl Strategy<Value = (Lattice, TrigPolynomial)> {
    any::<u64>().prop_map(move |seed| {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let lat = random_basis(&mut rng, d);
        let p = random_trig_polynomial(&mut rng, &lat.dual(), 8, 12);
        (lat, p)
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn parseval_on_trig_polynomials((lat, p) in (1usize..=2).prop_flat_map(trig_poly)) {
        let samples = PeriodicSamples::sample(&lat, 32, |x| p.eval(x));
        let e = p.coefficient_energy();
        prop_assert!((samples.mean_square() - e).abs() <= 1e-8 * e);
    }

    #[test]
    fn fourier_sum_scales_quadratically((lat, p) in trig_poly(2), re in -3.0f64..3.0, im in -3.0f64..3.0, s in 0.05f64..0.95) {
        let k = c(re, im);
        let base = torus_seminorm_fourier(|xi| p.coefficient(xi), &lat, s, 20.0).unwrap();
        let scaled = torus_seminorm_fourier(|xi| k * p.coefficient(xi), &lat, s, 20.0).unwrap();
        prop_assert!((scaled - k.norm_sqr() * base).abs() <= 1e-10 * (1.0 + scaled.abs()));
    }

    #[test]
    fn gagliardo_scales_quadratically((lat, p) in trig_poly(1), re in -3.0f64..3.0, s in 0.1f64..0.9) {
        let f = PeriodicSamples::sample(&lat, 64, |x| p.eval(x));
        let delta = 2.0 * lat.det_abs() / 64.0;
        let a = torus_gagliardo(&f, s, delta).unwrap();
        let b = torus_gagliardo(&f.scaled(c(re, 0.0)), s, delta).unwrap();
        prop_assert!((b - re * re * a).abs() <= 1e-10 * (1.0 + b));
    }
}

#[test]
fn bracket_embedding_on_random_bump_pairs() {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let z = Lattice::integer(1);
    for _ in 0..20 {
        let g = GeneratorSpec::bump_fourier(vec![rng.gen_range(-1.0..1.0)], rng.gen_range(0.1..0.8)).unwrap();
        let h = GeneratorSpec::bump_fourier(vec![rng.gen_range(-1.0..1.0)], rng.gen_range(0.1..0.8)).unwrap();
        for s in [0.25, 0.5, 0.75] {
            let chk = bracket_embedding_check(&g, &h, &z, s, 128, 2.0 / 128.0).unwrap();
            assert!(chk.holds, "s = {s}: {} > {}", chk.lhs, chk.rhs);
            assert!(chk.lhs >= 0.0 && chk.rhs.is_finite());
        }
    }
}

fn verdicts(coeffs: &dyn Fn(f64) -> Complex64, s: f64) -> [Verdict; 3] {
    let z = Lattice::integer(1);
    let n = 1024;
    let f = PeriodicSamples::sample(&z, n, |x| {
        let x = x[0];
        (-64..=64).map(|k| coeffs(k as f64) * Complex64::from_polar(1.0, 2.0 * std::f64::consts::PI * k as f64 * x)).sum()
    });
    let deltas: Vec<f64> = (0..8).map(|k| 0.25 * 2f64.powi(-k)).collect();
    let ns: Vec<f64> = deltas.iter().map(|d| 1.0 / d).collect();
    [
        torus_fourier_ladder(|xi| coeffs(xi[0]), &z, s, &ns).unwrap().verdict,
        torus_gagliardo_ladder(&f, s, &deltas).unwrap().verdict,
        torus_directional_ladder(&f, s, &deltas).unwrap().verdict,
    ]
}

#[test]
fn characterizations_agree_on_trig_polynomials() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for _ in 0..10 {
        let p = random_trig_polynomial(&mut rng, &Lattice::integer(1), 6, 8);
        let v = verdicts(&|k| p.coefficient(&[k]), 0.5);
        assert_eq!(v, [Verdict::Finite; 3], "{p:?}");
    }
}

#[test]
fn characterizations_agree_on_indicators() {
    let z = Lattice::integer(1);
    for (a, b) in [(0.0f64, 0.5f64), (0.1, 0.4), (-0.3, 0.3)] {
        // the indicator sampled directly, not through a truncated series
        let f = PeriodicSamples::sample(&z, 4096, |x| {
            let t = x[0].rem_euclid(1.0);
            let (a, b) = (a.rem_euclid(1.0), b.rem_euclid(1.0));
            let inside = if a < b { t >= a && t < b } else { t >= a || t < b };
            c(if inside { 1.0 } else { 0.0 }, 0.0)
        });
        let deltas: Vec<f64> = (0..8).map(|k| 0.25 * 2f64.powi(-k)).collect();
        let ns = geometric_ladder(1e2, 10f64.powf(0.25), 13);
        let fs = torus_fourier_ladder(|xi| interval_indicator_coefficient(a, b, xi[0]), &z, 0.5, &ns).unwrap();
        let gg = torus_gagliardo_ladder(&f, 0.5, &deltas).unwrap();
        let dd = torus_directional_ladder(&f, 0.5, &deltas).unwrap();
        for e in [&fs, &gg, &dd] {
            assert_eq!(e.verdict, Verdict::DivergentLog, "[{a}, {b}) {:?}: slope {}", e.mode, e.fit.slope);
        }
    }
}

#[test]
fn gagliardo_constant_for_cosine() {
    let z = Lattice::integer(1);
    let s = 0.3;
    let f = PeriodicSamples::sample(&z, 2048, |x| c((2.0 * std::f64::consts::PI * x[0]).cos(), 0.0));
    let gag = torus_gagliardo(&f, s, 1.0 / 2048.0).unwrap();
    let fourier = torus_seminorm_fourier(
        |xi| if xi[0].abs() == 1.0 { c(0.5, 0.0) } else { c(0.0, 0.0) },
        &z,
        s,
        10.0,
    )
    .unwrap();
    let g1 = kernel_ratio(&[1.0], s, &z, Kernel::G).unwrap().value;
    let ratio = gag / fourier;
    assert!((ratio - g1).abs() < 0.1 * g1, "{ratio} vs G(1) = {g1}");
}

#[test]
fn kernel_ratios_stay_bounded() {
    let z = Lattice::integer(1);
    for s in [0.3, 0.5, 0.7] {
        for kernel in [Kernel::G, Kernel::H] {
            let r: Vec<f64> = (1..=200).map(|k| kernel_ratio(&[k as f64], s, &z, kernel).unwrap().ratio).collect();
            let (lo, hi) = r.iter().fold((f64::INFINITY, 0.0f64), |(a, b), v| (a.min(*v), b.max(*v)));
            assert!(lo > 0.0 && hi / lo < 2.0, "{kernel:?} s={s}: [{lo}, {hi}]");
        }
        let z2 = Lattice::integer(2);
        let mut r = Vec::new();
        for i in -20..=20 {
            for j in -20..=20 {
                if (i, j) != (0, 0) {
                    r.push(kernel_ratio(&[i as f64, j as f64], s, &z2, Kernel::H).unwrap().ratio);
                }
            }
        }
        let (lo, hi) = r.iter().fold((f64::INFINITY, 0.0f64), |(a, b), v| (a.min(*v), b.max(*v)));
        assert!(lo > 0.0 && hi / lo < 4.0, "H on ℤ², s={s}: [{lo}, {hi}]");
    }
}

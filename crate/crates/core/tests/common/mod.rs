//! Independent oracles shared by the integration tests and the acceptance run.
#![allow(dead_code)]

use std::f64::consts::PI;

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::Rng;

use shiftinv::periodization::{gramian_field, GramianField};
use shiftinv::presets::{bspline_set, chi_j_set, ex51_set, ex52_set, ex53_set, BSPLINE_EPS_TAIL};
use shiftinv::Lattice;

pub fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

/// Random Hermitian matrix with entries in the unit square.
pub fn random_hermitian<R: Rng>(rng: &mut R, k: usize) -> DMatrix<Complex64> {
    let mut m = DMatrix::<Complex64>::zeros(k, k);
    for i in 0..k {
        m[(i, i)] = c(rng.gen_range(-1.0..1.0), 0.0);
        for j in i + 1..k {
            let z = c(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
            m[(i, j)] = z;
            m[(j, i)] = z.conj();
        }
    }
    m
}

/// Eigenvalues of a 2×2 or 3×3 Hermitian matrix from its characteristic polynomial, descending.
pub fn charpoly_eigs(m: &DMatrix<Complex64>) -> Vec<f64> {
    match m.nrows() {
        1 => vec![m[(0, 0)].re],
        2 => {
            let (a, d) = (m[(0, 0)].re, m[(1, 1)].re);
            let mid = 0.5 * (a + d);
            let r = (0.25 * (a - d) * (a - d) + m[(0, 1)].norm_sqr()).sqrt();
            vec![mid + r, mid - r]
        }
        3 => {
            // trigonometric solution of the depressed cubic
            let q = (0..3).map(|i| m[(i, i)].re).sum::<f64>() / 3.0;
            let off = m[(0, 1)].norm_sqr() + m[(0, 2)].norm_sqr() + m[(1, 2)].norm_sqr();
            let p2 = (0..3).map(|i| (m[(i, i)].re - q).powi(2)).sum::<f64>() + 2.0 * off;
            let p = (p2 / 6.0).sqrt();
            if p == 0.0 {
                return vec![q; 3];
            }
            let b = (m - DMatrix::<Complex64>::identity(3, 3) * c(q, 0.0)) / c(p, 0.0);
            let det = b[(0, 0)] * (b[(1, 1)] * b[(2, 2)] - b[(1, 2)] * b[(2, 1)])
                - b[(0, 1)] * (b[(1, 0)] * b[(2, 2)] - b[(1, 2)] * b[(2, 0)])
                + b[(0, 2)] * (b[(1, 0)] * b[(2, 1)] - b[(1, 1)] * b[(2, 0)]);
            let r = (0.5 * det.re).clamp(-1.0, 1.0);
            let phi = r.acos() / 3.0;
            let e1 = q + 2.0 * p * phi.cos();
            let e3 = q + 2.0 * p * (phi + 2.0 * PI / 3.0).cos();
            vec![e1, 3.0 * q - e1 - e3, e3]
        }
        k => panic!("no closed form for {k}×{k}"),
    }
}

/// `Σ_k sinc⁴(x - 2k) = cos⁴(πx/2)(2 + cos πx)/3`.
pub fn sinc4_even_periodization(x: f64) -> f64 {
    (0.5 * PI * x).cos().powi(4) * (2.0 + (PI * x).cos()) / 3.0
}

/// Composite Simpson rule with `m` (even) subintervals.
pub fn simpson<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, m: usize) -> f64 {
    let h = (b - a) / m as f64;
    let mut acc = f(a) + f(b);
    for i in 1..m {
        let w = if i % 2 == 1 { 4.0 } else { 2.0 };
        acc += w * f(a + h * i as f64);
    }
    acc * h / 3.0
}

/// Log slope of `∫_{|ξ|≤R} |ξ| sinc²(ξ) dξ` between `r1` and `r2`, by direct quadrature.
pub fn sinc_weighted_slope(r1: f64, r2: f64) -> f64 {
    let f = |x: f64| {
        let s = (PI * x).sin();
        s * s / (PI * PI * x)
    };
    let units = (r2 - r1).ceil() as usize;
    2.0 * simpson(f, r1, r2, 16 * units) / (r2 / r1).ln()
}

/// `Σ_{0<|k|≤N} |k|·|ĉ_k|²` for `χ_{[0,1/2)}`: only odd `k` contribute `1/(π²k²)`.
pub fn half_indicator_odd_sum(n: u64) -> f64 {
    (1..=n).step_by(2).map(|k| 2.0 / (PI * PI * k as f64)).sum()
}

/// `G(ξ)/ξ^{2s}` on `Γ = ℤ` as `8∫_0^{ξ/2} sin²(πu)/u^{1+2s} du`.
pub fn kernel_ratio_oracle(xi: f64, s: f64) -> f64 {
    let q = 1.0 / (2.0 - 2.0 * s);
    // u = v^q on [0, 1] removes the endpoint power
    let core = simpson(
        |v: f64| {
            if v == 0.0 {
                q * PI * PI
            } else {
                q * (PI * v.powf(q)).sin().powi(2) * v.powf(-1.0 - 2.0 * q * s)
            }
        },
        0.0,
        1.0,
        20_000,
    );
    let top = 0.5 * xi;
    let tail = simpson(
        |u: f64| (PI * u).sin().powi(2) / u.powf(1.0 + 2.0 * s),
        1.0,
        top,
        (64.0 * (top - 1.0)).ceil() as usize * 2,
    );
    8.0 * (core + tail)
}

/// Every Gramian field the shipped examples sample, at their default resolutions.
pub fn shipped_fields() -> Vec<(&'static str, GramianField)> {
    let z = Lattice::integer(1);
    vec![
        ("ex51", gramian_field(&ex51_set(1).unwrap(), &z, 2048, 1e-12).unwrap()),
        ("ex52", gramian_field(&ex52_set(3, 0.1).unwrap(), &z, 1024, 1e-10).unwrap()),
        ("ex53", gramian_field(&ex53_set().unwrap(), &z, 2048, 1e-10).unwrap()),
        ("chi_J", gramian_field(&chi_j_set(1).unwrap(), &z, 2048, 1e-12).unwrap()),
        ("bspline", gramian_field(&bspline_set().unwrap(), &z, 1024, BSPLINE_EPS_TAIL).unwrap()),
        (
            "bspline_half",
            gramian_field(&bspline_set().unwrap(), &Lattice::scaled_integer(1, 2.0).unwrap(), 1024, BSPLINE_EPS_TAIL)
                .unwrap(),
        ),
    ]
}

/// A well-conditioned random basis with entries in `[-2, 2]`.
pub fn random_basis<R: Rng>(rng: &mut R, d: usize) -> Lattice {
    loop {
        let rows: Vec<Vec<f64>> = (0..d).map(|_| (0..d).map(|_| rng.gen_range(-2.0..2.0)).collect()).collect();
        if let Ok(l) = Lattice::from_rows(&rows) {
            if l.det_abs() > 0.3 {
                return l;
            }
        }
    }
}

/// Trigonometric polynomial with up to `terms` distinct frequencies `A*·m`, `|m_i| <= max_freq`.
pub fn random_trig_polynomial<R: Rng>(
    rng: &mut R,
    dual: &Lattice,
    max_freq: i64,
    terms: usize,
) -> shiftinv::sobolev::TrigPolynomial {
    let d = dual.dim();
    let mut seen = std::collections::BTreeSet::new();
    let mut out = Vec::new();
    for _ in 0..rng.gen_range(1..=terms) {
        let m: Vec<i64> = (0..d).map(|_| rng.gen_range(-max_freq..=max_freq)).collect();
        if seen.insert(m.clone()) {
            let mf: Vec<f64> = m.iter().map(|v| *v as f64).collect();
            out.push((dual.point(&mf), c(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))));
        }
    }
    shiftinv::sobolev::TrigPolynomial { terms: out }
}

//! Quadrature rules shared by the generator transforms and the Sobolev code.

use std::f64::consts::PI;

/// Gauss–Legendre nodes and weights on `[-1, 1]`.
#[derive(Debug, Clone)]
pub struct GaussLegendre {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
}

impl GaussLegendre {
    /// Nodes by Newton iteration on the Legendre recurrence.
    pub fn new(n: usize) -> Self {
        assert!(n >= 1);
        let mut nodes = vec![0.0; n];
        let mut weights = vec![0.0; n];
        let m = n.div_ceil(2);
        for i in 0..m {
            let mut x = (PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
            let mut dp = 1.0;
            for _ in 0..100 {
                let (p, d) = legendre(n, x);
                dp = d;
                let dx = p / d;
                x -= dx;
                if dx.abs() < 1e-16 {
                    break;
                }
            }
            let (_, d) = legendre(n, x);
            if d != 0.0 {
                dp = d;
            }
            let w = 2.0 / ((1.0 - x * x) * dp * dp);
            nodes[i] = -x;
            nodes[n - 1 - i] = x;
            weights[i] = w;
            weights[n - 1 - i] = w;
        }
        GaussLegendre { nodes, weights }
    }

    /// Integral over `[a, b]`.
    pub fn integrate<F: FnMut(f64) -> f64>(&self, a: f64, b: f64, mut f: F) -> f64 {
        let half = 0.5 * (b - a);
        let mid = 0.5 * (a + b);
        self.nodes
            .iter()
            .zip(&self.weights)
            .map(|(x, w)| w * f(mid + half * x))
            .sum::<f64>()
            * half
    }

    /// Composite rule with `panels` equal panels on `[a, b]`.
    pub fn composite<F: FnMut(f64) -> f64>(&self, a: f64, b: f64, panels: usize, mut f: F) -> f64 {
        let h = (b - a) / panels as f64;
        (0..panels)
            .map(|p| {
                let lo = a + h * p as f64;
                self.integrate(lo, lo + h, &mut f)
            })
            .sum()
    }
}

fn legendre(n: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = x;
    for k in 2..=n {
        let k = k as f64;
        let p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
    }
    let p = if n == 0 { 1.0 } else { p1 };
    let d = n as f64 * (x * p - p0) / (x * x - 1.0);
    (p, d)
}

// Gauss–Kronrod 7/15 abscissae and weights.
const XGK: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_4,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_5,
    0.0,
];
const WGK: [f64; 8] = [
    0.022_935_322_010_529_22,
    0.063_092_092_629_978_55,
    0.104_790_010_322_250_2,
    0.140_653_259_715_525_9,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_9,
    0.209_482_141_084_727_8,
];
const WG: [f64; 4] = [
    0.129_484_966_168_869_7,
    0.279_705_391_489_276_7,
    0.381_830_050_505_118_9,
    0.417_959_183_673_469_4,
];

fn gk15<F: FnMut(f64) -> f64>(f: &mut F, a: f64, b: f64) -> (f64, f64) {
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let fc = f(c);
    let mut kron = fc * WGK[7];
    let mut gauss = fc * WG[3];
    for j in 0..7 {
        let dx = h * XGK[j];
        let s = f(c - dx) + f(c + dx);
        kron += WGK[j] * s;
        if j % 2 == 1 {
            gauss += WG[j / 2] * s;
        }
    }
    (kron * h, ((kron - gauss) * h).abs())
}

/// Result of an adaptive integration.
#[derive(Debug, Clone, Copy)]
pub struct Adaptive {
    pub value: f64,
    pub error: f64,
}

/// Globally adaptive Gauss–Kronrod 7/15 on `[a, b]`, bisecting the interval
/// with the largest error estimate until the total estimate meets
/// `max(abs_tol, rel_tol·|value|)` or `max_intervals` is reached.
pub fn adaptive<F: FnMut(f64) -> f64>(
    mut f: F,
    a: f64,
    b: f64,
    abs_tol: f64,
    rel_tol: f64,
    max_intervals: usize,
) -> Adaptive {
    if a == b {
        return Adaptive {
            value: 0.0,
            error: 0.0,
        };
    }
    let (v, e) = gk15(&mut f, a, b);
    let mut segs = vec![(a, b, v, e)];
    loop {
        let value: f64 = segs.iter().map(|s| s.2).sum();
        let error: f64 = segs.iter().map(|s| s.3).sum();
        if error <= abs_tol.max(rel_tol * value.abs()) || segs.len() >= max_intervals {
            return Adaptive { value, error };
        }
        let (idx, _) = segs
            .iter()
            .enumerate()
            .max_by(|x, y| x.1 .3.total_cmp(&y.1 .3))
            .expect("non-empty");
        let (lo, hi, _, _) = segs.swap_remove(idx);
        let mid = 0.5 * (lo + hi);
        let (v1, e1) = gk15(&mut f, lo, mid);
        let (v2, e2) = gk15(&mut f, mid, hi);
        segs.push((lo, mid, v1, e1));
        segs.push((mid, hi, v2, e2));
    }
}

/// `∫_0^T (1 - cos(w t)) / t^{1+α} dt` for `0 < α < 2`.
///
/// The core `[0, t0]` with `t0 = min(T, 1/|w|)` is mapped by
/// `t = t0·u^{1/(2-α)}`, which absorbs the `t^{1-α}` endpoint behaviour; the
/// oscillatory remainder is integrated panel by panel.
pub fn one_minus_cos_power(w: f64, alpha: f64, upper: f64) -> f64 {
    assert!(alpha > 0.0 && alpha < 2.0);
    let w = w.abs();
    if w == 0.0 || upper <= 0.0 {
        return 0.0;
    }
    // (1 - cos(w t)) / t^2, stable for small t
    let h = |t: f64| {
        let s = (0.5 * w * t).sin();
        2.0 * s * s / (t * t)
    };
    let t0 = upper.min(1.0 / w);
    let q = 1.0 / (2.0 - alpha);
    let core = adaptive(
        |u| if u <= 0.0 { 0.5 * w * w } else { h(t0 * u.powf(q)) },
        0.0,
        1.0,
        1e-15,
        1e-13,
        200,
    )
    .value
        * t0.powf(2.0 - alpha)
        * q;
    if t0 >= upper {
        return core;
    }
    let gl = GaussLegendre::new(16);
    let panel = PI / w;
    let panels = ((upper - t0) / panel).ceil().max(1.0) as usize;
    let tail = gl.composite(t0, upper, panels, |t| {
        let s = (0.5 * w * t).sin();
        2.0 * s * s / t.powf(1.0 + alpha)
    });
    core + tail
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gauss_legendre_exact_for_polynomials() {
        for n in [1, 2, 5, 8, 16, 33] {
            let gl = GaussLegendre::new(n);
            let wsum: f64 = gl.weights.iter().sum();
            assert!((wsum - 2.0).abs() < 1e-13, "n={n}");
            let deg = 2 * n - 1;
            let v = gl.integrate(0.0, 1.0, |x| x.powi(deg as i32));
            assert!((v - 1.0 / (deg as f64 + 1.0)).abs() < 1e-13, "n={n}");
        }
    }

    #[test]
    fn adaptive_handles_endpoint_singularity() {
        let r = adaptive(|x| 1.0 / x.sqrt().max(1e-300), 0.0, 1.0, 1e-12, 1e-12, 500);
        assert!((r.value - 2.0).abs() < 1e-8, "{}", r.value);
        let r = adaptive(f64::sin, 0.0, PI, 1e-14, 1e-14, 100);
        assert!((r.value - 2.0).abs() < 1e-13);
    }

    #[test]
    fn one_minus_cos_matches_brute_force() {
        // midpoint rule on a very fine grid, singular part subtracted analytically
        for &(w, alpha, t) in &[(2.0 * PI, 1.0, 0.5), (2.0 * PI * 7.0, 0.6, 0.5), (3.0, 1.4, 2.0)] {
            let got = one_minus_cos_power(w, alpha, t);
            let n = 2_000_000;
            let dt = t / n as f64;
            let mut acc = 0.5 * w * w * t.powf(2.0 - alpha) / (2.0 - alpha);
            for i in 0..n {
                let x = (i as f64 + 0.5) * dt;
                let s = (0.5 * w * x).sin();
                acc += (2.0 * s * s - 0.5 * w * w * x * x) / x.powf(1.0 + alpha) * dt;
            }
            assert!((got - acc).abs() < 1e-5 * acc.abs(), "w={w} a={alpha}: {got} vs {acc}");
        }
    }
}

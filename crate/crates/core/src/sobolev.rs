//! Fractional Sobolev seminorms on ℝ^d and on tori ℝ^d/Γ, kernel ratios and
//! log-divergence diagnostics.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use statrs::distribution::{ContinuousCDF, StudentsT};

use crate::error::{Error, Result};
use crate::generators::{Envelope, GeneratorSpec};
use crate::lattice::Lattice;
use crate::periodization::Grid;
use crate::quadrature::{adaptive, one_minus_cos_power, GaussLegendre};

/// Fewest partial sums accepted by [`divergence_diagnostic`].
pub const MIN_LADDER: usize = 6;
/// Increments decaying at least like `N^{-MIN_DECAY}` count as convergent.
pub const MIN_DECAY: f64 = 0.1;
/// Residual gate for a log fit, relative to the range of the window.
pub const MAX_RESIDUAL: f64 = 0.05;
/// Gate on the full 95% confidence width of the slope, relative to the slope.
pub const MAX_CI_WIDTH: f64 = 0.30;

fn check_order(s: f64) -> Result<()> {
    if s > 0.0 && s < 1.0 {
        Ok(())
    } else {
        Err(Error::InvalidInput(format!("order s = {s} is outside (0, 1)")))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SobolevMode {
    FourierSum,
    FourierIntegral,
    Gagliardo,
    Directional,
    Moment,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Finite,
    DivergentLog,
    Inconclusive,
}

/// Least-squares fit `S ≈ a·ln N + b` on the upper half of a ladder.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LogFit {
    pub slope: f64,
    pub intercept: f64,
    pub residual_rms: f64,
    pub range: f64,
    /// Half-width of the 95% confidence interval of the slope.
    #[serde(with = "crate::float_serde")]
    pub ci_halfwidth: f64,
    pub window: usize,
    /// Fitted `β` in `S(N_{i+1}) - S(N_i) ∝ N_i^{-β}`, when enough increments are positive.
    pub increment_decay: Option<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Diagnosis {
    pub verdict: Verdict,
    pub fit: LogFit,
}

fn linear_fit(x: &[f64], y: &[f64]) -> (f64, f64, f64, f64) {
    let m = x.len() as f64;
    let mx = x.iter().sum::<f64>() / m;
    let my = y.iter().sum::<f64>() / m;
    let sxx: f64 = x.iter().map(|v| (v - mx).powi(2)).sum();
    let sxy: f64 = x.iter().zip(y).map(|(a, b)| (a - mx) * (b - my)).sum();
    let slope = if sxx > 0.0 { sxy / sxx } else { 0.0 };
    let intercept = my - slope * mx;
    let ssr: f64 = x
        .iter()
        .zip(y)
        .map(|(a, b)| (b - slope * a - intercept).powi(2))
        .sum();
    (slope, intercept, ssr, sxx)
}

/// Verdict for a ladder of partial values `(N, S(N))` with geometrically spaced `N`.
pub fn divergence_diagnostic(partials: &[(f64, f64)]) -> Result<Diagnosis> {
    if partials.len() < MIN_LADDER {
        return Err(Error::InsufficientData {
            needed: MIN_LADDER,
            got: partials.len(),
        });
    }
    if partials.iter().any(|(n, s)| !(n.is_finite() && *n > 0.0 && s.is_finite())) {
        return Err(Error::InvalidInput("ladder entries must be finite with N > 0".into()));
    }
    let w = &partials[partials.len() / 2..];
    let x: Vec<f64> = w.iter().map(|p| p.0.ln()).collect();
    let y: Vec<f64> = w.iter().map(|p| p.1).collect();
    let (slope, intercept, ssr, sxx) = linear_fit(&x, &y);
    let m = w.len();
    let residual_rms = (ssr / m as f64).sqrt();
    let range = y.iter().cloned().fold(f64::NEG_INFINITY, f64::max)
        - y.iter().cloned().fold(f64::INFINITY, f64::min);
    let t = StudentsT::new(0.0, 1.0, (m - 2) as f64)
        .expect("dof >= 1")
        .inverse_cdf(0.975);
    let ci_halfwidth = if sxx > 0.0 {
        t * (ssr / (m - 2) as f64 / sxx).sqrt()
    } else {
        f64::INFINITY
    };

    let scale = y.iter().map(|v| v.abs()).fold(0.0, f64::max).max(f64::MIN_POSITIVE);
    let incs: Vec<(f64, f64)> = w
        .windows(2)
        .map(|p| (p[0].0.ln(), p[1].1 - p[0].1))
        .collect();
    let positive: Vec<(f64, f64)> = incs
        .iter()
        .filter(|(_, d)| *d > 1e-12 * scale)
        .map(|(l, d)| (*l, d.ln()))
        .collect();
    let increment_decay = (positive.len() >= 3).then(|| {
        let (lx, ly): (Vec<f64>, Vec<f64>) = positive.iter().cloned().unzip();
        -linear_fit(&lx, &ly).0
    });
    let fit = LogFit {
        slope,
        intercept,
        residual_rms,
        range,
        ci_halfwidth,
        window: m,
        increment_decay,
    };
    let converged = positive.len() < 3 && incs.iter().all(|(_, d)| d.abs() <= 1e-9 * scale);
    let verdict = if converged || increment_decay.is_some_and(|b| b >= MIN_DECAY) {
        Verdict::Finite
    } else if slope > 0.0
        && residual_rms < MAX_RESIDUAL * range
        && 2.0 * ci_halfwidth < MAX_CI_WIDTH * slope
    {
        Verdict::DivergentLog
    } else {
        Verdict::Inconclusive
    };
    Ok(Diagnosis { verdict, fit })
}

/// A ladder of partial seminorm values with its verdict.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SobolevEstimate {
    pub s: f64,
    pub mode: SobolevMode,
    /// `(N, S(N))` in ladder order.
    pub partials: Vec<(f64, f64)>,
    pub verdict: Verdict,
    pub fit: LogFit,
}

impl SobolevEstimate {
    pub fn new(s: f64, mode: SobolevMode, partials: Vec<(f64, f64)>) -> Result<Self> {
        let d = divergence_diagnostic(&partials)?;
        Ok(SobolevEstimate {
            s,
            mode,
            partials,
            verdict: d.verdict,
            fit: d.fit,
        })
    }

    pub fn is_monotone(&self) -> bool {
        self.partials.windows(2).all(|w| w[1].1 >= w[0].1)
    }
}

/// Geometric ladder `start·ratio^k`, `k = 0..count`.
pub fn geometric_ladder(start: f64, ratio: f64, count: usize) -> Vec<f64> {
    (0..count).map(|k| start * ratio.powi(k as i32)).collect()
}

/// Default truncation ladder for integrals over ℝ: `10^{2 + k/4}`, `k = 0..=12`.
pub fn default_rd_ladder() -> Vec<f64> {
    (0..=12).map(|k| 10f64.powf(2.0 + k as f64 / 4.0)).collect()
}

// ---------------------------------------------------------------------------
// Tori
// ---------------------------------------------------------------------------

/// `Σ_{ξ∈Γ*, 0<|ξ|≤N} |ξ|^{2s}|f̂(ξ)|²` for Fourier coefficients given as a map on `Γ*`.
pub fn torus_seminorm_fourier<F: Fn(&[f64]) -> Complex64>(
    coeffs: F,
    gamma: &Lattice,
    s: f64,
    n: f64,
) -> Result<f64> {
    check_order(s)?;
    Ok(torus_fourier_partials(&coeffs, gamma, s, &[n])[0].1)
}

fn torus_fourier_partials<F: Fn(&[f64]) -> Complex64>(
    coeffs: &F,
    gamma: &Lattice,
    s: f64,
    ns: &[f64],
) -> Vec<(f64, f64)> {
    let dual = gamma.dual();
    let top = ns.iter().cloned().fold(0.0, f64::max);
    let origin = vec![0.0; gamma.dim()];
    let mut terms: Vec<(f64, f64)> = Vec::new();
    dual.for_each_point_in_ball(&origin, top, |xi| {
        let r = xi.iter().map(|v| v * v).sum::<f64>().sqrt();
        if r > 0.0 {
            terms.push((r, r.powf(2.0 * s) * coeffs(xi).norm_sqr()));
        }
    });
    terms.sort_by(|a, b| a.0.total_cmp(&b.0));
    let mut out = Vec::with_capacity(ns.len());
    let mut acc = 0.0;
    let mut pos = 0;
    let mut order: Vec<usize> = (0..ns.len()).collect();
    order.sort_by(|a, b| ns[*a].total_cmp(&ns[*b]));
    let mut vals = vec![0.0; ns.len()];
    for idx in order {
        while pos < terms.len() && terms[pos].0 <= ns[idx] * (1.0 + 1e-12) {
            acc += terms[pos].1;
            pos += 1;
        }
        vals[idx] = acc;
    }
    for (n, v) in ns.iter().zip(vals) {
        out.push((*n, v));
    }
    out
}

/// Fourier-sum ladder on a torus.
pub fn torus_fourier_ladder<F: Fn(&[f64]) -> Complex64>(
    coeffs: F,
    gamma: &Lattice,
    s: f64,
    ns: &[f64],
) -> Result<SobolevEstimate> {
    check_order(s)?;
    SobolevEstimate::new(s, SobolevMode::FourierSum, torus_fourier_partials(&coeffs, gamma, s, ns))
}

/// Fourier coefficient `∫_a^b e^{-2πikx}dx` of `χ_{[a,b)}` on ℝ/ℤ.
pub fn interval_indicator_coefficient(a: f64, b: f64, k: f64) -> Complex64 {
    if k == 0.0 {
        return Complex64::new(b - a, 0.0);
    }
    let w = -2.0 * PI * k;
    (Complex64::from_polar(1.0, w * b) - Complex64::from_polar(1.0, w * a)) / Complex64::new(0.0, w)
}

/// A trigonometric polynomial `Σ c_ξ e^{2πiξ·x}` with frequencies in `Γ*`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrigPolynomial {
    pub terms: Vec<(Vec<f64>, Complex64)>,
}

impl TrigPolynomial {
    pub fn eval(&self, x: &[f64]) -> Complex64 {
        self.terms
            .iter()
            .map(|(xi, c)| {
                let dot: f64 = xi.iter().zip(x).map(|(a, b)| a * b).sum();
                c * Complex64::from_polar(1.0, 2.0 * PI * dot)
            })
            .sum()
    }

    /// Coefficient at `ξ`, matching frequencies to `1e-9`.
    pub fn coefficient(&self, xi: &[f64]) -> Complex64 {
        self.terms
            .iter()
            .filter(|(f, _)| f.iter().zip(xi).all(|(a, b)| (a - b).abs() < 1e-9))
            .map(|(_, c)| *c)
            .sum()
    }

    pub fn coefficient_energy(&self) -> f64 {
        self.terms.iter().map(|(_, c)| c.norm_sqr()).sum()
    }
}

/// Values of a Γ-periodic function on a grid over `M_Γ`.
#[derive(Debug, Clone, PartialEq)]
pub struct PeriodicSamples {
    pub lattice: Lattice,
    pub grid: Grid,
    pub values: Vec<Complex64>,
}

impl PeriodicSamples {
    pub fn sample<F: Fn(&[f64]) -> Complex64>(lattice: &Lattice, n_per_axis: usize, f: F) -> Self {
        let grid = Grid::centered(n_per_axis);
        let values = grid
            .coords(lattice.dim())
            .iter()
            .map(|t| f(&lattice.point(t)))
            .collect();
        PeriodicSamples {
            lattice: lattice.clone(),
            grid,
            values,
        }
    }

    pub fn scaled(&self, c: Complex64) -> Self {
        PeriodicSamples {
            values: self.values.iter().map(|v| v * c).collect(),
            ..self.clone()
        }
    }

    /// `(1/|M_Γ|)∫_{M_Γ}|f|²` by the grid rule.
    pub fn mean_square(&self) -> f64 {
        self.values.iter().map(|v| v.norm_sqr()).sum::<f64>() / self.values.len() as f64
    }

    fn n(&self) -> usize {
        self.grid.n_per_axis
    }

    fn cell_volume(&self) -> f64 {
        self.lattice.det_abs() / self.values.len() as f64
    }

    /// Flat index of node `i` moved by the integer offset `m` (periodic).
    fn shifted(&self, i: usize, m: &[i64]) -> usize {
        let n = self.n() as i64;
        let d = m.len();
        let mut out = 0usize;
        let mut stride = 1usize;
        let mut rest = i;
        let mut digits = vec![0i64; d];
        for axis in (0..d).rev() {
            digits[axis] = (rest % self.n()) as i64;
            rest /= self.n();
        }
        for axis in (0..d).rev() {
            let v = (digits[axis] + m[axis]).rem_euclid(n) as usize;
            out += v * stride;
            stride *= self.n();
        }
        out
    }
}

fn offsets(d: usize, n: usize) -> Vec<Vec<i64>> {
    let half = (n / 2) as i64;
    let total = n.pow(d as u32);
    (0..total)
        .map(|mut flat| {
            let mut m = vec![0i64; d];
            for axis in (0..d).rev() {
                m[axis] = (flat % n) as i64 - half;
                flat /= n;
            }
            m
        })
        .collect()
}

/// Per-offset contributions `(|y|, Σ_x |f(x+y)-f(x)|²)·weights` for the torus double integral.
fn torus_offset_terms(f: &PeriodicSamples, s: f64) -> Vec<(f64, f64)> {
    let d = f.lattice.dim();
    let n = f.n();
    let vol = f.cell_volume();
    let mut out = Vec::new();
    for m in offsets(d, n) {
        if m.iter().all(|v| *v == 0) {
            continue;
        }
        let t: Vec<f64> = m.iter().map(|v| *v as f64 / n as f64).collect();
        let y = f.lattice.point(&t);
        let r = y.iter().map(|v| v * v).sum::<f64>().sqrt();
        let mut acc = 0.0;
        for i in 0..f.values.len() {
            acc += (f.values[f.shifted(i, &m)] - f.values[i]).norm_sqr();
        }
        out.push((r, acc * vol * vol / r.powf(d as f64 + 2.0 * s)));
    }
    out
}

/// Midpoint double sum of `|f(x+y)-f(x)|²/|y|^{d+2s}` over `M_Γ×M_Γ` with `|y| >= δ`.
/// The excluded core is nonnegative, so this is a lower bound for the integral.
pub fn torus_gagliardo(f: &PeriodicSamples, s: f64, delta: f64) -> Result<f64> {
    Ok(torus_gagliardo_ladder_values(f, s, &[delta])?[0])
}

fn check_delta(f: &PeriodicSamples, delta: f64) -> Result<()> {
    let cell: f64 = (0..f.lattice.dim())
            .map(|j| {
                let c = f.lattice.column(j);
                c.iter().map(|v| v * v).sum::<f64>().sqrt() / f.n() as f64
            })
            .sum::<f64>();
    if delta < cell * (1.0 - 1e-12) {
        return Err(Error::InvalidInput(format!(
            "exclusion radius {delta} is below one grid cell diameter {cell}"
        )));
    }
    Ok(())
}

fn torus_gagliardo_ladder_values(f: &PeriodicSamples, s: f64, deltas: &[f64]) -> Result<Vec<f64>> {
    check_order(s)?;
    for &d in deltas {
        check_delta(f, d)?;
    }
    let terms = torus_offset_terms(f, s);
    Ok(deltas
        .iter()
        .map(|&delta| terms.iter().filter(|(r, _)| *r >= delta).map(|(_, v)| v).sum())
        .collect())
}

/// Gagliardo ladder over exclusion radii; the ladder parameter is `N = 1/δ`.
pub fn torus_gagliardo_ladder(f: &PeriodicSamples, s: f64, deltas: &[f64]) -> Result<SobolevEstimate> {
    let vals = torus_gagliardo_ladder_values(f, s, deltas)?;
    let partials = deltas.iter().zip(vals).map(|(d, v)| (1.0 / d, v)).collect();
    SobolevEstimate::new(s, SobolevMode::Gagliardo, partials)
}

/// Directional double integral, total and per basis direction.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DirectionalValue {
    pub total: f64,
    pub per_direction: Vec<f64>,
}

fn directional_terms(f: &PeriodicSamples, s: f64) -> Vec<Vec<(f64, f64)>> {
    let d = f.lattice.dim();
    let n = f.n();
    let vol = f.cell_volume();
    let half = (n / 2) as i64;
    (0..d)
        .map(|axis| {
            let mut out = Vec::new();
            for k in -half..(n as i64 - half) {
                if k == 0 {
                    continue;
                }
                let mut m = vec![0i64; d];
                m[axis] = k;
                let t = (k as f64 / n as f64).abs();
                let mut acc = 0.0;
                for i in 0..f.values.len() {
                    acc += (f.values[f.shifted(i, &m)] - f.values[i]).norm_sqr();
                }
                out.push((t, acc * vol / n as f64 / t.powf(1.0 + 2.0 * s)));
            }
            out
        })
        .collect()
}

/// `Σ_j ∫_{M_Γ}∫_{[-1/2,1/2)} |f(x+t a_j)-f(x)|²/|t|^{1+2s} dt dx` with `|t| >= δ`.
pub fn torus_directional(f: &PeriodicSamples, s: f64, delta: f64) -> Result<DirectionalValue> {
    check_order(s)?;
    if delta < (1.0 - 1e-12) / f.n() as f64 {
        return Err(Error::InvalidInput(format!(
            "exclusion {delta} is below one grid step {}",
            1.0 / f.n() as f64
        )));
    }
    let per_direction: Vec<f64> = directional_terms(f, s)
        .iter()
        .map(|terms| terms.iter().filter(|(t, _)| *t >= delta).map(|(_, v)| v).sum())
        .collect();
    Ok(DirectionalValue {
        total: per_direction.iter().sum(),
        per_direction,
    })
}

/// Directional ladder over exclusion parameters, `N = 1/δ`.
pub fn torus_directional_ladder(f: &PeriodicSamples, s: f64, deltas: &[f64]) -> Result<SobolevEstimate> {
    check_order(s)?;
    let terms = directional_terms(f, s);
    let partials = deltas
        .iter()
        .map(|&delta| {
            let v: f64 = terms
                .iter()
                .flatten()
                .filter(|(t, _)| *t >= delta)
                .map(|(_, v)| v)
                .sum();
            (1.0 / delta, v)
        })
        .collect();
    SobolevEstimate::new(s, SobolevMode::Directional, partials)
}

// ---------------------------------------------------------------------------
// ℝ^d
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RdMode {
    /// `∫_{|x|≤R} |x|^{2s}|f(x)|² dx`, the Fourier form of the seminorm of `f̂`;
    /// needs the time-domain sampler `f`.
    FourierIntegral,
    /// `∬ |f̂(ξ+y)-f̂(ξ)|²/|y|^{1+2s}` with `|y| >= 1/R`; needs compact support of `f̂`.
    Gagliardo,
}

fn need_one_dim(spec: &GeneratorSpec) -> Result<()> {
    if spec.dim() != 1 {
        return Err(Error::ModeUnsupported(format!(
            "seminorms on R^d are implemented for d = 1 only (got d = {})",
            spec.dim()
        )));
    }
    Ok(())
}

/// Panel width for `|f|²` given the frequency support of `f̂`.
fn panel_width(spec: &GeneratorSpec) -> f64 {
    match spec.envelope() {
        Envelope::CompactSupport { radius, .. } => 0.25 / (2.0 * radius).max(1.0),
        Envelope::PolyDecay { .. } => 0.25,
    }
}

/// Cumulative `∫_{|x|≤R_k} |x|^{2s}|f(x)|²dx` over an increasing ladder.
fn weighted_time_partials(spec: &GeneratorSpec, s: f64, rs: &[f64]) -> Result<Vec<(f64, f64)>> {
    need_one_dim(spec)?;
    if !spec.has_time_sampler() {
        return Err(Error::ModeUnsupported(
            "this generator family has no time-domain sampler".into(),
        ));
    }
    if rs.windows(2).any(|w| w[1] < w[0]) || rs.iter().any(|r| !(*r > 0.0)) {
        return Err(Error::InvalidInput("truncation ladder must be positive and increasing".into()));
    }
    let f = |x: f64| {
        let a = spec.eval_time(&[x]).unwrap().norm_sqr();
        let b = spec.eval_time(&[-x]).unwrap().norm_sqr();
        x.powf(2.0 * s) * (a + b)
    };
    let gl = GaussLegendre::new(16);
    let w = panel_width(spec);
    let mut out = Vec::with_capacity(rs.len());
    let mut lo = 0.0;
    let mut acc = 0.0;
    for &r in rs {
        if lo == 0.0 {
            let core = w.min(r);
            acc += adaptive(f, 0.0, core, 1e-14, 1e-12, 400).value;
            lo = core;
        }
        if r > lo {
            let panels = ((r - lo) / w).ceil() as usize;
            acc += gl.composite(lo, r, panels, f);
            lo = r;
        }
        out.push((r, acc));
    }
    Ok(out)
}

/// Panels of the inner `ξ` rule and maximal log-width of an outer `y` panel.
const RD_INNER_PANELS: usize = 256;
const RD_OUTER_LOG_WIDTH: f64 = 0.25;

/// `∬_{|y|>=δ} |f̂(ξ+y)-f̂(ξ)|²/|y|^{1+2s}` for a compactly supported `f̂` on ℝ, at each
/// `δ` of an increasing ladder `R ↦ δ = 1/R`. Beyond `Y = 2ρ` the supports are disjoint
/// and the tail `4‖f̂‖²Y^{-2s}/(2s)` is exact; below it the inner integral is Gauss–Legendre
/// in `ξ` and the outer one Gauss–Legendre in `ln y`, broken at every ladder point.
fn rd_gagliardo_partials(spec: &GeneratorSpec, s: f64, rs: &[f64]) -> Result<Vec<(f64, f64)>> {
    need_one_dim(spec)?;
    let Envelope::CompactSupport { radius: rho, .. } = spec.envelope() else {
        return Err(Error::ModeUnsupported(
            "the double-integral form needs a compactly supported generator".into(),
        ));
    };
    if rs.windows(2).any(|w| w[1] < w[0]) || rs.iter().any(|r| !(*r > 0.0)) {
        return Err(Error::InvalidInput("truncation ladder must be positive and increasing".into()));
    }
    let rho = rho.max(f64::MIN_POSITIVE);
    let gl = GaussLegendre::new(16);
    let f = |x: f64| spec.eval_fourier(&[x]);
    let energy = gl.composite(-rho, rho, RD_INNER_PANELS, |x| f(x).norm_sqr());
    let inner = |y: f64| {
        gl.composite(-rho - y, rho, RD_INNER_PANELS, |x| (f(x + y) - f(x)).norm_sqr())
    };
    let y_far = 2.0 * rho;
    let far = |d: f64| 4.0 * energy * d.powf(-2.0 * s) / (2.0 * s);
    let outer = |a: f64, b: f64| {
        let (la, lb) = (a.ln(), b.ln());
        let panels = ((lb - la) / RD_OUTER_LOG_WIDTH).ceil().max(1.0) as usize;
        2.0 * gl.composite(la, lb, panels, |u| {
            let y = u.exp();
            inner(y) * y.powf(-2.0 * s)
        })
    };
    // δ decreases along the ladder, so each rung adds one more slab [δ, previous δ]
    let mut out = Vec::with_capacity(rs.len());
    let mut acc = 0.0;
    let mut upper = y_far;
    for &r in rs {
        let delta = 1.0 / r;
        if delta >= y_far {
            out.push((r, far(delta)));
            continue;
        }
        if delta < upper {
            acc += outer(delta, upper);
            upper = delta;
        }
        out.push((r, acc + far(y_far)));
    }
    Ok(out)
}

/// Partial seminorm value on ℝ in the chosen mode at truncation `R`.
pub fn rd_seminorm(spec: &GeneratorSpec, s: f64, mode: RdMode, r: f64) -> Result<f64> {
    Ok(rd_ladder(spec, s, mode, &[r])?.last().unwrap().1)
}

fn rd_ladder(spec: &GeneratorSpec, s: f64, mode: RdMode, rs: &[f64]) -> Result<Vec<(f64, f64)>> {
    check_order(s)?;
    if rs.is_empty() {
        return Err(Error::InsufficientData { needed: 1, got: 0 });
    }
    match mode {
        RdMode::FourierIntegral => weighted_time_partials(spec, s, rs),
        RdMode::Gagliardo => rd_gagliardo_partials(spec, s, rs),
    }
}

/// Ladder estimate of a seminorm on ℝ.
pub fn rd_estimate(spec: &GeneratorSpec, s: f64, mode: RdMode, rs: &[f64]) -> Result<SobolevEstimate> {
    let partials = rd_ladder(spec, s, mode, rs)?;
    let m = match mode {
        RdMode::FourierIntegral => SobolevMode::FourierIntegral,
        RdMode::Gagliardo => SobolevMode::Gagliardo,
    };
    SobolevEstimate::new(s, m, partials)
}

/// `∫_{|x|≤R} |x||f(x)|² dx`.
pub fn moment_diagnostic(spec: &GeneratorSpec, r: f64) -> Result<f64> {
    Ok(weighted_time_partials(spec, 0.5, &[r])?[0].1)
}

/// Moment ladder with verdict.
pub fn moment_estimate(spec: &GeneratorSpec, rs: &[f64]) -> Result<SobolevEstimate> {
    SobolevEstimate::new(0.5, SobolevMode::Moment, weighted_time_partials(spec, 0.5, rs)?)
}

// ---------------------------------------------------------------------------
// Kernels
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Kernel {
    /// `G(ξ) = ∫_{M_Γ} |e^{-2πiξ·y}-1|²/|y|^{d+2s} dy`.
    G,
    /// `H(ξ) = Σ_j ∫_{[-1/2,1/2)} |e^{-2πitξ·a_j}-1|²/|t|^{1+2s} dt`.
    H,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct KernelRatio {
    pub xi: Vec<f64>,
    pub s: f64,
    pub kernel: Kernel,
    pub value: f64,
    /// `kernel / |ξ|^{2s}`.
    pub ratio: f64,
}

/// Kernel value divided by `|ξ|^{2s}` at a nonzero point of `Γ*`.
pub fn kernel_ratio(xi: &[f64], s: f64, gamma: &Lattice, kernel: Kernel) -> Result<KernelRatio> {
    check_order(s)?;
    if xi.len() != gamma.dim() {
        return Err(Error::DimensionMismatch {
            expected: gamma.dim(),
            got: xi.len(),
        });
    }
    let norm = xi.iter().map(|v| v * v).sum::<f64>().sqrt();
    if norm == 0.0 {
        return Err(Error::ZeroFrequency);
    }
    if !gamma.dual().contains(xi) {
        return Err(Error::InvalidInput("frequency is not a point of the dual lattice".into()));
    }
    // |e^{iθ}-1|² = 2(1-cos θ); each kernel is a sum of symmetric 1-D integrals
    let value = match kernel {
        Kernel::G => {
            if gamma.dim() != 1 {
                return Err(Error::ModeUnsupported(
                    "the G kernel is implemented for d = 1 only".into(),
                ));
            }
            let half = 0.5 * gamma.basis()[(0, 0)].abs();
            4.0 * one_minus_cos_power(2.0 * PI * xi[0], 2.0 * s, half)
        }
        Kernel::H => (0..gamma.dim())
            .map(|j| {
                let a = gamma.column(j);
                let dot: f64 = a.iter().zip(xi).map(|(p, q)| p * q).sum();
                4.0 * one_minus_cos_power(2.0 * PI * dot, 2.0 * s, 0.5)
            })
            .sum(),
    };
    Ok(KernelRatio {
        xi: xi.to_vec(),
        s,
        kernel,
        value,
        ratio: value / norm.powf(2.0 * s),
    })
}

/// `(max - min)/min` of a set of ratios.
pub fn relative_spread(values: &[f64]) -> f64 {
    let lo = values.iter().cloned().fold(f64::INFINITY, f64::min);
    let hi = values.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    (hi - lo) / lo
}

// ---------------------------------------------------------------------------
// Bracket embedding
// ---------------------------------------------------------------------------

/// Both sides of the bracket-product embedding inequality
/// `DI_torus([g,h]_Λ) <= 2(‖P_Λ g‖_∞·DI_ℝ(h) + ‖P_Λ h‖_∞·DI_ℝ(g))`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EmbeddingCheck {
    pub lhs: f64,
    pub rhs: f64,
    pub holds: bool,
    pub delta: f64,
    pub sup_periodization_g: f64,
    pub sup_periodization_h: f64,
    pub di_g: f64,
    pub di_h: f64,
}

/// Evaluates both sides on one matched grid: `n` nodes per period of `Λ ⊂ ℝ`,
/// offsets `y ∈ M_Λ` with `|y| >= δ` on both sides.
pub fn bracket_embedding_check(
    g: &GeneratorSpec,
    h: &GeneratorSpec,
    lambda: &Lattice,
    s: f64,
    n: usize,
    delta: f64,
) -> Result<EmbeddingCheck> {
    check_order(s)?;
    need_one_dim(g)?;
    need_one_dim(h)?;
    if lambda.dim() != 1 {
        return Err(Error::ModeUnsupported("bracket embedding check is one-dimensional".into()));
    }
    let support = |f: &GeneratorSpec| match f.envelope() {
        Envelope::CompactSupport { radius, .. } => Ok(radius),
        _ => Err(Error::ModeUnsupported(
            "bracket embedding check needs compactly supported generators".into(),
        )),
    };
    let rho = support(g)?.max(support(h)?);
    let period = lambda.basis()[(0, 0)].abs();
    let step = period / n as f64;
    if delta < step * (1.0 - 1e-12) {
        return Err(Error::InvalidInput("exclusion below one grid step".into()));
    }
    // ℝ-grid nodes -period/2 + (j + 1/2)·step for j in [-k0·n, (k0+1)·n)
    let k0 = ((rho + period) / period).ceil() as i64 + 1;
    let total = ((2 * k0 + 1) as usize) * n;
    let node = |j: usize| -period / 2.0 - k0 as f64 * period + (j as f64 + 0.5) * step;
    let gv: Vec<Complex64> = (0..total).map(|j| g.eval_fourier(&[node(j)])).collect();
    let hv: Vec<Complex64> = (0..total).map(|j| h.eval_fourier(&[node(j)])).collect();
    let periods = total / n;
    let mut bracket = vec![Complex64::new(0.0, 0.0); n];
    let mut pg = vec![0.0; n];
    let mut ph = vec![0.0; n];
    for i in 0..n {
        for k in 0..periods {
            let j = i + k * n;
            bracket[i] += gv[j] * hv[j].conj();
            pg[i] += gv[j].norm_sqr();
            ph[i] += hv[j].norm_sqr();
        }
    }
    let sup_g = pg.iter().cloned().fold(0.0, f64::max);
    let sup_h = ph.iter().cloned().fold(0.0, f64::max);
    let half = (n / 2) as i64;
    let mut lhs = 0.0;
    let mut di_g = 0.0;
    let mut di_h = 0.0;
    for m in -half..(n as i64 - half) {
        if m == 0 {
            continue;
        }
        let y = (m as f64 * step).abs();
        if y < delta * (1.0 - 1e-12) {
            continue;
        }
        let w = step * step / y.powf(1.0 + 2.0 * s);
        let mut acc = 0.0;
        for i in 0..n {
            let ip = (i as i64 + m).rem_euclid(n as i64) as usize;
            acc += (bracket[ip] - bracket[i]).norm_sqr();
        }
        lhs += acc * w;
        let (mut ag, mut ah) = (0.0, 0.0);
        for j in 0..total {
            let jp = j as i64 + m;
            let (gp, hp) = if jp >= 0 && (jp as usize) < total {
                (gv[jp as usize], hv[jp as usize])
            } else {
                (Complex64::new(0.0, 0.0), Complex64::new(0.0, 0.0))
            };
            ag += (gp - gv[j]).norm_sqr();
            ah += (hp - hv[j]).norm_sqr();
        }
        di_g += ag * w;
        di_h += ah * w;
    }
    let rhs = 2.0 * (sup_g * di_h + sup_h * di_g);
    Ok(EmbeddingCheck {
        lhs,
        rhs,
        holds: lhs <= rhs * (1.0 + 1e-12) + 1e-14,
        delta,
        sup_periodization_g: sup_g,
        sup_periodization_h: sup_h,
        di_g,
        di_h,
    })
}

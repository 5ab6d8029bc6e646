//! Fourier-side generator models.
//!
//! A [`GeneratorSpec`] describes one generator `f` through its Fourier transform
//! `f̂(ξ) = ∫ f(x) e^{-2πi x·ξ} dx`, together with a decay envelope that bounds
//! `sup_{|ξ|≥R} |f̂(ξ)|` and drives certified truncation of lattice sums.

use std::f64::consts::PI;
use std::sync::{Arc, OnceLock};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::quadrature::GaussLegendre;

/// Panels and nodes per panel of the composite Gauss–Legendre rule used for
/// bump transforms.
pub const BUMP_PANELS: usize = 64;
pub const BUMP_NODES: usize = 16;

/// Polynomial exponent declared for bump transforms.
pub const BUMP_DECAY_EXPONENT: f64 = 4.0;

/// Multiplier applied to the sampled maximum when fitting a decay constant.
const ENVELOPE_SAFETY: f64 = 1.25;

/// The standard mollifier `exp(-1/(1-t²))` on `(-1, 1)`.
pub fn mollifier(t: f64) -> f64 {
    if t.abs() >= 1.0 {
        0.0
    } else {
        (-1.0 / (1.0 - t * t)).exp()
    }
}

/// Bound on `|f̂|` outside a ball.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum Envelope {
    /// `f̂` vanishes for `|ξ| > radius` and never exceeds `amplitude`.
    CompactSupport { radius: f64, amplitude: f64 },
    /// `|f̂(ξ)| <= constant·(1+|ξ|)^{-exponent}`.
    PolyDecay { constant: f64, exponent: f64 },
}

impl Envelope {
    /// Certified bound on `sup_{|ξ|≥R} |f̂(ξ)|`.
    pub fn bound(&self, r: f64) -> f64 {
        match *self {
            Envelope::CompactSupport { radius, amplitude } => {
                if r > radius {
                    0.0
                } else {
                    amplitude
                }
            }
            Envelope::PolyDecay { constant, exponent } => {
                constant * (1.0 + r.max(0.0)).powf(-exponent)
            }
        }
    }

    fn validate(&self) -> Result<()> {
        let ok = match *self {
            Envelope::CompactSupport { radius, amplitude } => {
                radius.is_finite() && radius >= 0.0 && amplitude.is_finite() && amplitude >= 0.0
            }
            Envelope::PolyDecay { constant, exponent } => {
                constant.is_finite() && constant >= 0.0 && exponent.is_finite() && exponent > 0.0
            }
        };
        if ok {
            Ok(())
        } else {
            Err(Error::InvalidInput(format!("invalid envelope {self:?}")))
        }
    }
}

fn default_amplitude() -> f64 {
    1.0
}

fn default_power() -> u32 {
    1
}

fn default_dim() -> usize {
    1
}

/// Named generator families.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum Family {
    /// `f̂ = χ_B` for the half-open box `B = [lower, upper)`.
    IndicatorBox { lower: Vec<f64>, upper: Vec<f64> },
    /// `f̂(ξ) = c·φ(|ξ - center| / radius)` with `c` chosen so that `‖f‖₂ = 1`.
    BumpFourier { center: Vec<f64>, radius: f64 },
    /// A one-dimensional smooth bump in time,
    /// `f(x) = amplitude·c·φ((x-m)/h)·cos(2π·modulation·(x-m))` on `[lower, upper]`
    /// with midpoint `m`, half-width `h` and `c` normalizing `‖f‖₂` to 1.
    BumpTime {
        lower: f64,
        upper: f64,
        #[serde(default = "default_amplitude")]
        amplitude: f64,
        #[serde(default)]
        modulation: f64,
    },
    /// `f̂(ξ) = Π_i sinc(ξ_i)^power`; `power = 2` is the hat function in time.
    SincPower {
        #[serde(default = "default_power")]
        power: u32,
        #[serde(default = "default_dim")]
        dim: usize,
    },
    /// `f̂(ξ) = exp(-π|ξ|²)`.
    Gaussian {
        #[serde(default = "default_dim")]
        dim: usize,
    },
    /// One-dimensional samples `f̂(start + k·step)` with linear interpolation,
    /// zero outside the sampled range. Each sample is `[re, im]`.
    Tabulated {
        start: f64,
        step: f64,
        values: Vec<[f64; 2]>,
    },
}

/// Serialized form of a generator: family, optional time shift and optional
/// explicit envelope (a default envelope is derived when absent).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GeneratorConfig {
    pub family: Family,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub shift: Option<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub envelope: Option<Envelope>,
}

/// Smooth weight integrated by [`SmoothTransform`].
#[derive(Debug, Clone, Copy)]
enum Profile {
    /// `norm·φ((x-m)/h)·cos(2πω(x-m))`.
    Modulated { m: f64, h: f64, omega: f64, norm: f64 },
}

impl Profile {
    fn eval(&self, x: f64) -> f64 {
        match *self {
            Profile::Modulated { m, h, omega, norm } => {
                norm * mollifier((x - m) / h) * (2.0 * PI * omega * (x - m)).cos()
            }
        }
    }

    fn support(&self) -> (f64, f64) {
        match *self {
            Profile::Modulated { m, h, .. } => (m - h, m + h),
        }
    }
}

/// Composite Gauss–Legendre table for `∫ w(x) e^{∓2πi x ξ} dx` with a fixed
/// smooth weight `w` on an interval.
#[derive(Debug)]
struct SmoothTransform {
    start_center: f64,
    panel: f64,
    offsets: Vec<f64>,
    weights: Vec<f64>,
}

/// Panels between exact phase re-evaluations in [`SmoothTransform::eval`].
const PHASE_ANCHOR: usize = 64;

impl SmoothTransform {
    fn new(profile: &Profile, panels: usize, nodes: usize) -> Self {
        let (lower, upper) = profile.support();
        let gl = GaussLegendre::new(nodes);
        let panel = (upper - lower) / panels as f64;
        let offsets: Vec<f64> = gl.nodes.iter().map(|u| 0.5 * panel * u).collect();
        let mut weights = Vec::with_capacity(panels * nodes);
        for p in 0..panels {
            let c = lower + (p as f64 + 0.5) * panel;
            for (o, gw) in offsets.iter().zip(&gl.weights) {
                weights.push(gw * 0.5 * panel * profile.eval(c + o));
            }
        }
        SmoothTransform {
            start_center: lower + 0.5 * panel,
            panel,
            offsets,
            weights,
        }
    }

    /// `Σ weight·e^{sign·2πi x ξ}`; panel phases advance by recurrence.
    fn eval(&self, xi: f64, sign: f64) -> Complex64 {
        let q = self.offsets.len();
        let theta = sign * 2.0 * PI * xi;
        let inner_phase: Vec<Complex64> = self
            .offsets
            .iter()
            .map(|o| Complex64::from_polar(1.0, theta * o))
            .collect();
        let step = Complex64::from_polar(1.0, theta * self.panel);
        let mut phase = Complex64::new(1.0, 0.0);
        let mut acc = Complex64::new(0.0, 0.0);
        for (p, chunk) in self.weights.chunks_exact(q).enumerate() {
            if p % PHASE_ANCHOR == 0 {
                phase = Complex64::from_polar(1.0, theta * (self.start_center + p as f64 * self.panel));
            }
            let mut re = 0.0;
            let mut im = 0.0;
            for (w, e) in chunk.iter().zip(&inner_phase) {
                re += w * e.re;
                im += w * e.im;
            }
            acc += phase * Complex64::new(re, im);
            phase *= step;
        }
        acc
    }
}

/// Number of refinement levels kept for bump transforms; level `j` uses
/// `BUMP_PANELS·2^j` panels.
const BUMP_LEVELS: usize = 11;

/// Bump transforms with panel counts refined to the frequency: the base rule
/// is used while a panel spans at most one period of `e^{2πixξ}`.
#[derive(Debug)]
struct LeveledTransform {
    profile: Profile,
    length: f64,
    levels: Vec<OnceLock<SmoothTransform>>,
}

impl LeveledTransform {
    fn new(profile: Profile) -> Self {
        let (lo, hi) = profile.support();
        LeveledTransform {
            profile,
            length: hi - lo,
            levels: (0..BUMP_LEVELS).map(|_| OnceLock::new()).collect(),
        }
    }

    fn level_for(&self, xi: f64) -> usize {
        let cycles = xi.abs() * self.length;
        let mut level = 0;
        while level + 1 < BUMP_LEVELS && cycles > (BUMP_PANELS << level) as f64 {
            level += 1;
        }
        level
    }

    fn table(&self, level: usize) -> &SmoothTransform {
        self.levels[level]
            .get_or_init(|| SmoothTransform::new(&self.profile, BUMP_PANELS << level, BUMP_NODES))
    }

    fn eval(&self, xi: f64, sign: f64) -> Complex64 {
        self.table(self.level_for(xi)).eval(xi, sign)
    }

    /// Same integral with the panel count doubled, for accuracy checks.
    fn eval_refined(&self, xi: f64, sign: f64) -> Complex64 {
        let level = (self.level_for(xi) + 1).min(BUMP_LEVELS - 1);
        self.table(level).eval(xi, sign)
    }
}

#[derive(Debug, Default)]
struct Prepared {
    /// Normalization constant of bump families.
    norm: f64,
    /// Quadrature tables: `f` in time (bump_time) or `f̂` in frequency (1-D bump_fourier).
    transform: Option<LeveledTransform>,
}

/// One generator, evaluated on the Fourier side.
#[derive(Debug, Clone)]
pub struct GeneratorSpec {
    family: Family,
    shift: Vec<f64>,
    envelope: Envelope,
    prepared: Arc<Prepared>,
}

impl PartialEq for GeneratorSpec {
    fn eq(&self, other: &Self) -> bool {
        self.family == other.family && self.shift == other.shift && self.envelope == other.envelope
    }
}

impl Serialize for GeneratorSpec {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.to_config().serialize(s)
    }
}

impl<'de> Deserialize<'de> for GeneratorSpec {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let cfg = GeneratorConfig::deserialize(d)?;
        GeneratorSpec::from_config(&cfg).map_err(serde::de::Error::custom)
    }
}

fn sphere_area(d: usize) -> f64 {
    // 2π^{d/2} / Γ(d/2)
    let mut gamma = if d % 2 == 0 { 1.0 } else { PI.sqrt() };
    let mut x = if d % 2 == 0 { 1.0 } else { 0.5 };
    while x < d as f64 / 2.0 {
        gamma *= x;
        x += 1.0;
    }
    2.0 * PI.powf(d as f64 / 2.0) / gamma
}

fn sinc(x: f64) -> f64 {
    if x.abs() < 1e-8 {
        1.0 - (PI * x).powi(2) / 6.0
    } else {
        (PI * x).sin() / (PI * x)
    }
}

/// Centered cardinal B-spline of order `m` (support `[-m/2, m/2]`), whose
/// Fourier transform is `sinc^m`.
fn cardinal_bspline(m: u32, x: f64) -> f64 {
    let half = m as f64 / 2.0;
    if x <= -half || x >= half {
        return 0.0;
    }
    let mut fact = 1.0;
    for k in 1..m {
        fact *= k as f64;
    }
    let mut acc = 0.0;
    let mut binom = 1.0;
    for k in 0..=m {
        let t = x + half - k as f64;
        if t > 0.0 {
            let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
            acc += sign * binom * t.powi(m as i32 - 1);
        }
        binom = binom * (m - k) as f64 / (k + 1) as f64;
    }
    acc / fact
}

impl GeneratorSpec {
    pub fn from_config(cfg: &GeneratorConfig) -> Result<Self> {
        let dim = family_dim(&cfg.family)?;
        let shift = cfg.shift.clone().unwrap_or_else(|| vec![0.0; dim]);
        if shift.len() != dim {
            return Err(Error::DimensionMismatch {
                expected: dim,
                got: shift.len(),
            });
        }
        if shift.iter().any(|v| !v.is_finite()) {
            return Err(Error::InvalidInput("shift must be finite".into()));
        }
        let prepared = Arc::new(prepare(&cfg.family)?);
        let mut spec = GeneratorSpec {
            family: cfg.family.clone(),
            shift,
            // placeholder until the default envelope is derived
            envelope: Envelope::CompactSupport {
                radius: 0.0,
                amplitude: 0.0,
            },
            prepared,
        };
        spec.envelope = match cfg.envelope {
            Some(e) => {
                e.validate()?;
                e
            }
            None => spec.default_envelope(),
        };
        Ok(spec)
    }

    pub fn new(family: Family) -> Result<Self> {
        GeneratorSpec::from_config(&GeneratorConfig {
            family,
            shift: None,
            envelope: None,
        })
    }

    pub fn indicator_box(lower: Vec<f64>, upper: Vec<f64>) -> Result<Self> {
        GeneratorSpec::new(Family::IndicatorBox { lower, upper })
    }

    pub fn bump_fourier(center: Vec<f64>, radius: f64) -> Result<Self> {
        GeneratorSpec::new(Family::BumpFourier { center, radius })
    }

    pub fn bump_time(lower: f64, upper: f64, amplitude: f64, modulation: f64) -> Result<Self> {
        GeneratorSpec::new(Family::BumpTime {
            lower,
            upper,
            amplitude,
            modulation,
        })
    }

    pub fn sinc_power(power: u32, dim: usize) -> Result<Self> {
        GeneratorSpec::new(Family::SincPower { power, dim })
    }

    pub fn gaussian(dim: usize) -> Result<Self> {
        GeneratorSpec::new(Family::Gaussian { dim })
    }

    pub fn tabulated(start: f64, step: f64, values: Vec<[f64; 2]>) -> Result<Self> {
        GeneratorSpec::new(Family::Tabulated {
            start,
            step,
            values,
        })
    }

    pub fn with_envelope(mut self, envelope: Envelope) -> Result<Self> {
        envelope.validate()?;
        self.envelope = envelope;
        Ok(self)
    }

    pub fn to_config(&self) -> GeneratorConfig {
        GeneratorConfig {
            family: self.family.clone(),
            shift: if self.shift.iter().all(|v| *v == 0.0) {
                None
            } else {
                Some(self.shift.clone())
            },
            envelope: Some(self.envelope),
        }
    }

    pub fn family(&self) -> &Family {
        &self.family
    }

    pub fn shift(&self) -> &[f64] {
        &self.shift
    }

    pub fn envelope(&self) -> Envelope {
        self.envelope
    }

    pub fn dim(&self) -> usize {
        self.shift.len()
    }

    /// Whether the generator is identically zero.
    pub fn is_zero(&self) -> bool {
        match &self.family {
            Family::IndicatorBox { lower, upper } => lower.iter().zip(upper).any(|(l, u)| u <= l),
            Family::BumpTime { amplitude, .. } => *amplitude == 0.0,
            Family::Tabulated { values, .. } => values.iter().all(|v| v[0] == 0.0 && v[1] == 0.0),
            _ => false,
        }
    }

    /// Same generator translated by `tau` in time: `f̂` picks up `e^{-2πiξ·τ}`.
    pub fn shift_modulate(&self, tau: &[f64]) -> Result<Self> {
        if tau.len() != self.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                got: tau.len(),
            });
        }
        let mut out = self.clone();
        for (s, t) in out.shift.iter_mut().zip(tau) {
            *s += t;
        }
        Ok(out)
    }

    /// `f̂(ξ)`, including the shift phase.
    pub fn eval_fourier(&self, xi: &[f64]) -> Complex64 {
        debug_assert_eq!(xi.len(), self.dim());
        let base = self.eval_unshifted(xi);
        if base == Complex64::new(0.0, 0.0) || self.shift.iter().all(|s| *s == 0.0) {
            return base;
        }
        let dot: f64 = xi.iter().zip(&self.shift).map(|(a, b)| a * b).sum();
        base * Complex64::from_polar(1.0, -2.0 * PI * dot)
    }

    fn eval_unshifted(&self, xi: &[f64]) -> Complex64 {
        let re = |v: f64| Complex64::new(v, 0.0);
        match &self.family {
            Family::IndicatorBox { lower, upper } => {
                let inside = xi
                    .iter()
                    .zip(lower.iter().zip(upper))
                    .all(|(x, (l, u))| *l <= *x && *x < *u);
                re(if inside { 1.0 } else { 0.0 })
            }
            Family::BumpFourier { center, radius } => {
                let r2: f64 = xi.iter().zip(center).map(|(a, b)| (a - b) * (a - b)).sum();
                re(self.prepared.norm * mollifier(r2.sqrt() / radius))
            }
            Family::BumpTime { amplitude, .. } => {
                let t = self.prepared.transform.as_ref().expect("bump table");
                t.eval(xi[0], -1.0) * (*amplitude)
            }
            Family::SincPower { power, .. } => {
                re(xi.iter().map(|x| sinc(*x).powi(*power as i32)).product())
            }
            Family::Gaussian { .. } => {
                let r2: f64 = xi.iter().map(|x| x * x).sum();
                re((-PI * r2).exp())
            }
            Family::Tabulated {
                start,
                step,
                values,
            } => {
                let pos = (xi[0] - start) / step;
                if pos < 0.0 || pos > (values.len() - 1) as f64 {
                    return re(0.0);
                }
                let i = (pos.floor() as usize).min(values.len().saturating_sub(2));
                let frac = pos - i as f64;
                let a = values[i];
                let b = values[(i + 1).min(values.len() - 1)];
                Complex64::new(
                    a[0] + frac * (b[0] - a[0]),
                    a[1] + frac * (b[1] - a[1]),
                )
            }
        }
    }

    /// Whether a time-domain sampler for `f` is available.
    pub fn has_time_sampler(&self) -> bool {
        match &self.family {
            Family::BumpFourier { .. } => self.dim() == 1,
            Family::Tabulated { .. } => false,
            _ => true,
        }
    }

    /// `f(x) = ∫ f̂(ξ) e^{2πi x·ξ} dξ`, when a sampler exists for the family.
    pub fn eval_time(&self, x: &[f64]) -> Option<Complex64> {
        if !self.has_time_sampler() {
            return None;
        }
        let y: Vec<f64> = x.iter().zip(&self.shift).map(|(a, s)| a - s).collect();
        let v = match &self.family {
            Family::IndicatorBox { lower, upper } => {
                let mut acc = Complex64::new(1.0, 0.0);
                for ((xi, l), u) in y.iter().zip(lower).zip(upper) {
                    let w = u - l;
                    acc *= Complex64::from_polar(w * sinc(w * xi), PI * xi * (l + u));
                }
                acc
            }
            Family::BumpFourier { .. } => {
                let t = self.prepared.transform.as_ref().expect("bump table");
                t.eval(y[0], 1.0)
            }
            Family::BumpTime {
                lower,
                upper,
                amplitude,
                modulation,
            } => {
                let m = 0.5 * (lower + upper);
                let h = 0.5 * (upper - lower);
                let v = amplitude
                    * self.prepared.norm
                    * mollifier((y[0] - m) / h)
                    * (2.0 * PI * modulation * (y[0] - m)).cos();
                Complex64::new(v, 0.0)
            }
            Family::SincPower { power, .. } => {
                Complex64::new(y.iter().map(|v| cardinal_bspline(*power, *v)).product(), 0.0)
            }
            Family::Gaussian { .. } => {
                let r2: f64 = y.iter().map(|v| v * v).sum();
                Complex64::new((-PI * r2).exp(), 0.0)
            }
            Family::Tabulated { .. } => unreachable!(),
        };
        Some(v)
    }

    /// Certified bound on `sup_{|ξ|≥R} |f̂(ξ)|`.
    pub fn decay_envelope(&self, r: f64) -> f64 {
        self.envelope.bound(r)
    }

    fn default_envelope(&self) -> Envelope {
        match &self.family {
            Family::IndicatorBox { lower, upper } => {
                let radius = lower
                    .iter()
                    .zip(upper)
                    .map(|(l, u)| l.abs().max(u.abs()).powi(2))
                    .sum::<f64>()
                    .sqrt();
                Envelope::CompactSupport {
                    radius,
                    amplitude: 1.0,
                }
            }
            Family::BumpFourier { center, radius } => Envelope::CompactSupport {
                radius: center.iter().map(|c| c * c).sum::<f64>().sqrt() + radius,
                amplitude: self.prepared.norm * (-1.0f64).exp(),
            },
            Family::BumpTime {
                lower,
                upper,
                modulation,
                ..
            } => self.fit_poly_envelope(BUMP_DECAY_EXPONENT, upper - lower, modulation.abs()),
            Family::SincPower { power, dim } => Envelope::PolyDecay {
                constant: (1.0 + 1.0 / PI).powi(*power as i32) * (*dim as f64).powf(*power as f64 / 2.0),
                exponent: *power as f64,
            },
            Family::Gaussian { dim } => {
                let p = *dim as f64 + 3.0;
                let r = (-1.0 + (1.0 + 2.0 * p / PI).sqrt()) / 2.0;
                Envelope::PolyDecay {
                    constant: (1.0 + r).powf(p) * (-PI * r * r).exp(),
                    exponent: p,
                }
            }
            Family::Tabulated {
                start,
                step,
                values,
            } => {
                let end = start + step * values.len().saturating_sub(1) as f64;
                Envelope::CompactSupport {
                    radius: start.abs().max(end.abs()),
                    amplitude: values
                        .iter()
                        .map(|v| v[0].hypot(v[1]))
                        .fold(0.0, f64::max),
                }
            }
        }
    }

    /// Fits `C` in `C(1+|ξ|)^{-p}` by dense sampling of `|f̂|` on `ξ >= 0`.
    /// The range doubles until the weighted modulus has clearly peaked or `|f̂|`
    /// has decayed to the quadrature noise floor.
    fn fit_poly_envelope(&self, p: f64, support_len: f64, modulation: f64) -> Envelope {
        let step = (0.05f64).min(1.0 / (16.0 * support_len));
        let mut peak: f64 = 0.0;
        let mut amp: f64 = 0.0;
        let mut xi = 0.0;
        let mut limit = 32.0f64.max(4.0 * modulation + 8.0 / support_len);
        loop {
            let mut tail_peak: f64 = 0.0;
            let mut tail_amp: f64 = 0.0;
            while xi <= limit {
                let a = self.eval_unshifted(&[xi]).norm();
                let v = a * (1.0 + xi).powf(p);
                if xi > 0.5 * limit {
                    tail_peak = tail_peak.max(v);
                    tail_amp = tail_amp.max(a);
                }
                peak = peak.max(v);
                amp = amp.max(a);
                xi += step;
            }
            if tail_peak < 1e-3 * peak || tail_amp < 1e-13 * amp || limit > 1e5 {
                break;
            }
            limit *= 2.0;
        }
        Envelope::PolyDecay {
            constant: ENVELOPE_SAFETY * peak,
            exponent: p,
        }
    }

    /// `f̂(ξ)` for bump families recomputed with twice the quadrature panels.
    pub fn eval_fourier_refined(&self, xi: &[f64]) -> Option<Complex64> {
        match &self.family {
            Family::BumpTime { amplitude, .. } => {
                let t = self.prepared.transform.as_ref()?;
                let base = t.eval_refined(xi[0], -1.0) * (*amplitude);
                let dot: f64 = xi.iter().zip(&self.shift).map(|(a, b)| a * b).sum();
                Some(base * Complex64::from_polar(1.0, -2.0 * PI * dot))
            }
            _ => None,
        }
    }

    /// `‖f‖₂² = ‖f̂‖₂²` by quadrature, where a smooth route exists.
    pub fn l2_norm_squared(&self) -> Option<f64> {
        match &self.family {
            Family::BumpTime {
                lower,
                upper,
                amplitude,
                ..
            } => {
                let gl = GaussLegendre::new(BUMP_NODES);
                let v = gl.composite(*lower, *upper, 4 * BUMP_PANELS, |x| {
                    self.eval_time(&[x + self.shift[0]]).unwrap().norm_sqr()
                });
                let _ = amplitude;
                Some(v)
            }
            Family::BumpFourier { center, radius } => {
                let d = self.dim();
                let gl = GaussLegendre::new(BUMP_NODES);
                let radial = gl.composite(0.0, 1.0, BUMP_PANELS, |t| {
                    mollifier(t).powi(2) * t.powi(d as i32 - 1)
                });
                let _ = center;
                Some(self.prepared.norm.powi(2) * radius.powi(d as i32) * sphere_area(d) * radial)
            }
            Family::IndicatorBox { lower, upper } => Some(
                lower
                    .iter()
                    .zip(upper)
                    .map(|(l, u)| (u - l).max(0.0))
                    .product(),
            ),
            _ => None,
        }
    }
}

fn family_dim(f: &Family) -> Result<usize> {
    let bad = |m: &str| Err(Error::InvalidInput(m.to_string()));
    match f {
        Family::IndicatorBox { lower, upper } => {
            if lower.is_empty() || lower.len() != upper.len() {
                return bad("indicator_box corners must have equal, positive length");
            }
            if lower.iter().chain(upper).any(|v| !v.is_finite()) {
                return bad("indicator_box corners must be finite");
            }
            Ok(lower.len())
        }
        Family::BumpFourier { center, radius } => {
            if center.is_empty() || !(*radius > 0.0 && radius.is_finite()) {
                return bad("bump_fourier needs a non-empty center and a positive radius");
            }
            Ok(center.len())
        }
        Family::BumpTime {
            lower,
            upper,
            amplitude,
            modulation,
        } => {
            if !(lower.is_finite() && upper.is_finite() && upper > lower) {
                return bad("bump_time support must be a finite interval with upper > lower");
            }
            if !amplitude.is_finite() || !modulation.is_finite() {
                return bad("bump_time amplitude and modulation must be finite");
            }
            Ok(1)
        }
        Family::SincPower { power, dim } => {
            if *power == 0 || *dim == 0 {
                return bad("sinc_power needs power >= 1 and dim >= 1");
            }
            Ok(*dim)
        }
        Family::Gaussian { dim } => {
            if *dim == 0 {
                return bad("gaussian needs dim >= 1");
            }
            Ok(*dim)
        }
        Family::Tabulated { step, values, start } => {
            if values.len() < 2 || !(*step > 0.0) || !start.is_finite() {
                return bad("tabulated needs at least two samples and a positive step");
            }
            Ok(1)
        }
    }
}

fn prepare(f: &Family) -> Result<Prepared> {
    let gl_norm = |d: usize| {
        let gl = GaussLegendre::new(BUMP_NODES);
        gl.composite(0.0, 1.0, BUMP_PANELS, |t| mollifier(t).powi(2) * t.powi(d as i32 - 1))
    };
    match f {
        Family::BumpFourier { center, radius } => {
            let d = center.len();
            let norm = 1.0 / (radius.powi(d as i32) * sphere_area(d) * gl_norm(d)).sqrt();
            let transform = (d == 1).then(|| {
                LeveledTransform::new(Profile::Modulated {
                    m: center[0],
                    h: *radius,
                    omega: 0.0,
                    norm,
                })
            });
            Ok(Prepared { norm, transform })
        }
        Family::BumpTime {
            lower,
            upper,
            modulation,
            ..
        } => {
            let m = 0.5 * (lower + upper);
            let h = 0.5 * (upper - lower);
            let unit = Profile::Modulated {
                m,
                h,
                omega: *modulation,
                norm: 1.0,
            };
            let gl = GaussLegendre::new(BUMP_NODES);
            let energy = gl.composite(*lower, *upper, 4 * BUMP_PANELS, |x| unit.eval(x).powi(2));
            if !(energy > 0.0) {
                return Err(Error::InvalidInput("bump_time has zero energy".into()));
            }
            let norm = 1.0 / energy.sqrt();
            Ok(Prepared {
                norm,
                transform: Some(LeveledTransform::new(Profile::Modulated {
                    m,
                    h,
                    omega: *modulation,
                    norm,
                })),
            })
        }
        _ => Ok(Prepared::default()),
    }
}

/// An ordered K-tuple of generators on a common ℝ^d.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(try_from = "Vec<GeneratorSpec>", into = "Vec<GeneratorSpec>")]
pub struct GeneratorSet {
    specs: Vec<GeneratorSpec>,
    /// Earlier generator differing from this one only by its shift.
    shares_base: Vec<Option<usize>>,
}

impl PartialEq for GeneratorSet {
    fn eq(&self, other: &Self) -> bool {
        self.specs == other.specs
    }
}

impl GeneratorSet {
    pub fn new(specs: Vec<GeneratorSpec>) -> Result<Self> {
        let first = specs
            .first()
            .ok_or_else(|| Error::InvalidInput("a generator set needs K >= 1".into()))?;
        let d = first.dim();
        if let Some(bad) = specs.iter().find(|s| s.dim() != d) {
            return Err(Error::DimensionMismatch {
                expected: d,
                got: bad.dim(),
            });
        }
        if specs.iter().all(GeneratorSpec::is_zero) {
            return Err(Error::InvalidInput(
                "generator set is trivial: every generator vanishes".into(),
            ));
        }
        let shares_base = (0..specs.len())
            .map(|j| {
                (0..j).find(|&i| {
                    Arc::ptr_eq(&specs[i].prepared, &specs[j].prepared)
                        && specs[i].family == specs[j].family
                })
            })
            .collect();
        Ok(GeneratorSet { specs, shares_base })
    }

    pub fn len(&self) -> usize {
        self.specs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.specs.is_empty()
    }

    pub fn dim(&self) -> usize {
        self.specs[0].dim()
    }

    pub fn specs(&self) -> &[GeneratorSpec] {
        &self.specs
    }

    pub fn get(&self, k: usize) -> &GeneratorSpec {
        &self.specs[k]
    }

    /// Writes `F̂(ξ)` into `out`.
    pub fn eval_into(&self, xi: &[f64], out: &mut [Complex64]) {
        for (j, s) in self.specs.iter().enumerate() {
            out[j] = match self.shares_base[j] {
                Some(i) => {
                    let dot: f64 = xi
                        .iter()
                        .zip(s.shift.iter().zip(&self.specs[i].shift))
                        .map(|(x, (a, b))| x * (a - b))
                        .sum();
                    out[i] * Complex64::from_polar(1.0, -2.0 * PI * dot)
                }
                None => s.eval_fourier(xi),
            };
        }
    }

    /// Sub-tuple by index.
    pub fn select(&self, idx: &[usize]) -> Result<Self> {
        GeneratorSet::new(idx.iter().map(|&i| self.specs[i].clone()).collect())
    }

    /// Every generator multiplied by `c > 0` on the Fourier side, expressed through
    /// an equivalent tabulated or scaled family where possible.
    pub fn into_specs(self) -> Vec<GeneratorSpec> {
        self.specs
    }
}

impl TryFrom<Vec<GeneratorSpec>> for GeneratorSet {
    type Error = Error;
    fn try_from(v: Vec<GeneratorSpec>) -> Result<Self> {
        GeneratorSet::new(v)
    }
}

impl From<GeneratorSet> for Vec<GeneratorSpec> {
    fn from(s: GeneratorSet) -> Self {
        s.specs
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bump_time_transform_matches_adaptive_quadrature() {
        use crate::quadrature::adaptive;
        let g = GeneratorSpec::bump_time(0.0, 1.0 / 3.0, 1.0, 5.0).unwrap();
        for &xi in &[0.0, 0.3, 1.7, 12.5, 49.0, 180.25, 1500.5] {
            let f = |x: f64| g.eval_time(&[x]).unwrap().re;
            let re = adaptive(|x| f(x) * (2.0 * PI * x * xi).cos(), 0.0, 1.0 / 3.0, 1e-15, 1e-14, 20_000);
            let im = adaptive(|x| -f(x) * (2.0 * PI * x * xi).sin(), 0.0, 1.0 / 3.0, 1e-15, 1e-14, 20_000);
            let got = g.eval_fourier(&[xi]);
            let err = (got - Complex64::new(re.value, im.value)).norm();
            assert!(err < 1e-11, "xi={xi}: {got} vs {} {}", re.value, im.value);
        }
    }

    #[test]
    fn bump_time_envelope_dominates_samples() {
        let g = GeneratorSpec::bump_time(-0.5, 0.5, 1.0, 1.25).unwrap();
        let mut xi = 0.0;
        while xi <= 50.0 {
            assert!(g.eval_fourier(&[xi]).norm() <= g.decay_envelope(xi), "xi={xi}");
            assert!(g.eval_fourier(&[-xi]).norm() <= g.decay_envelope(xi), "xi=-{xi}");
            xi += 0.01;
        }
    }

    #[test]
    fn indicator_values() {
        let chi = GeneratorSpec::indicator_box(vec![-0.5], vec![0.5]).unwrap();
        assert_eq!(chi.eval_fourier(&[0.0]).re, 1.0);
        assert_eq!(chi.eval_fourier(&[0.75]).re, 0.0);
        assert_eq!(chi.eval_fourier(&[-0.5]).re, 1.0);
        assert_eq!(chi.eval_fourier(&[0.5]).re, 0.0);
        let chi3 = GeneratorSpec::indicator_box(vec![-0.5; 3], vec![0.5; 3]).unwrap();
        assert_eq!(chi3.eval_fourier(&[0.0, 0.1, -0.2]).re, 1.0);
        assert_eq!(chi3.eval_fourier(&[0.75, 0.0, 0.0]).re, 0.0);
        // ρ_supp = √d / 2, so R = 2 is past the support
        assert_eq!(chi3.decay_envelope(2.0), 0.0);
        assert_eq!(chi3.decay_envelope(0.1), 1.0);
    }

    #[test]
    fn poly_envelope_formula() {
        let e = Envelope::PolyDecay {
            constant: 1.0,
            exponent: 2.0,
        };
        assert!((e.bound(9.0) - 0.01).abs() < 1e-15);
    }

    #[test]
    fn shift_is_identity_at_zero_and_preserves_modulus() {
        let g = GeneratorSpec::bump_time(0.0, 1.0 / 3.0, 1.0, 4.0).unwrap();
        let same = g.shift_modulate(&[0.0]).unwrap();
        for xi in [-3.2, 0.0, 0.7, 11.0] {
            assert_eq!(g.eval_fourier(&[xi]), same.eval_fourier(&[xi]));
        }
        let moved = g.shift_modulate(&[1.0 / 3.0]).unwrap();
        for xi in [-3.2, 0.3, 0.7, 11.0] {
            let a = g.eval_fourier(&[xi]);
            let b = moved.eval_fourier(&[xi]);
            assert!((a.norm() - b.norm()).abs() < 1e-14);
            let expect = a * Complex64::from_polar(1.0, -2.0 * PI * xi / 3.0);
            assert!((b - expect).norm() < 1e-14);
        }
        assert!(g.shift_modulate(&[0.0, 1.0]).is_err());
    }

    #[test]
    fn bspline_matches_hat() {
        for x in [-1.2, -0.7, -0.2, 0.0, 0.4, 0.99] {
            let hat = (1.0 - f64::abs(x)).max(0.0);
            assert!((cardinal_bspline(2, x) - hat).abs() < 1e-14);
        }
        assert_eq!(cardinal_bspline(1, 0.3), 1.0);
        assert_eq!(cardinal_bspline(1, 0.7), 0.0);
    }

    #[test]
    fn sphere_areas() {
        assert!((sphere_area(1) - 2.0).abs() < 1e-14);
        assert!((sphere_area(2) - 2.0 * PI).abs() < 1e-14);
        assert!((sphere_area(3) - 4.0 * PI).abs() < 1e-13);
    }

    #[test]
    fn tabulated_interpolates() {
        let t = GeneratorSpec::tabulated(-1.0, 1.0, vec![[0.0, 0.0], [2.0, 0.0], [0.0, 1.0]]).unwrap();
        assert!((t.eval_fourier(&[-0.5]).re - 1.0).abs() < 1e-15);
        assert!((t.eval_fourier(&[0.5]) - Complex64::new(1.0, 0.5)).norm() < 1e-15);
        assert_eq!(t.eval_fourier(&[1.5]).norm(), 0.0);
        assert!(!t.has_time_sampler());
        assert!(t.eval_time(&[0.0]).is_none());
    }

    #[test]
    fn set_validation() {
        assert!(GeneratorSet::new(vec![]).is_err());
        let z = GeneratorSpec::indicator_box(vec![0.0], vec![0.0]).unwrap();
        assert!(GeneratorSet::new(vec![z.clone()]).is_err());
        let a = GeneratorSpec::indicator_box(vec![-0.5], vec![0.5]).unwrap();
        assert!(GeneratorSet::new(vec![z, a.clone()]).is_ok());
        let b = GeneratorSpec::gaussian(2).unwrap();
        assert!(matches!(
            GeneratorSet::new(vec![a, b]),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn config_round_trip() {
        let src = r#"
            family = { kind = "bump_time", lower = 0.0, upper = 0.25, modulation = 3.0 }
            shift = [0.5]
        "#;
        let cfg: GeneratorConfig = toml::from_str(src).unwrap();
        let spec = GeneratorSpec::from_config(&cfg).unwrap();
        assert_eq!(spec.shift(), &[0.5]);
        let json = serde_json::to_string(&spec).unwrap();
        let back: GeneratorSpec = serde_json::from_str(&json).unwrap();
        assert_eq!(back, spec);
        let bad = r#"family = { kind = "gaussian", dim = 1, extra = 2 }"#;
        assert!(toml::from_str::<GeneratorConfig>(bad).is_err());
    }
}

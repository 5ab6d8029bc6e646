//! Truncated lattice periodizations: bracket products and Gramian fields.

use nalgebra::DMatrix;
use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::generators::{Envelope, GeneratorSet, GeneratorSpec};
use crate::lattice::Lattice;

/// Largest radius tried by the geometric sweep before giving up.
const MAX_RADIUS: f64 = 1e9;

fn sphere_area(d: usize) -> f64 {
    let mut gamma = if d % 2 == 0 { 1.0 } else { std::f64::consts::PI.sqrt() };
    let mut x = if d % 2 == 0 { 1.0 } else { 0.5 };
    while x < d as f64 / 2.0 {
        gamma *= x;
        x += 1.0;
    }
    2.0 * std::f64::consts::PI.powf(d as f64 / 2.0) / gamma
}

/// Exact cutoff when either envelope has compact support.
fn compact_cutoff(f: &Envelope, g: &Envelope) -> Option<f64> {
    let rf = match f {
        Envelope::CompactSupport { radius, .. } => Some(*radius),
        _ => None,
    };
    let rg = match g {
        Envelope::CompactSupport { radius, .. } => Some(*radius),
        _ => None,
    };
    match (rf, rg) {
        (Some(a), Some(b)) => Some(a.min(b)),
        (Some(a), None) | (None, Some(a)) => Some(a),
        (None, None) => None,
    }
}

/// Upper bound on `Σ_{λ∈L, |x-λ|>R} |f̂(x-λ)||ĝ(x-λ)|`, uniform in `x`.
///
/// For two polynomial envelopes with `q = p_f + p_g > d` every lattice point is
/// charged to its translated cell, giving
/// `S_{d-1}·C·max(1,h)^{d-1}·(1+R-2h)^{d-q} / (V·(q-d))` for `R >= 2h`,
/// where `h` bounds the cell radius and `V` is the covolume.
pub fn tail_bound(f: &GeneratorSpec, g: &GeneratorSpec, lattice: &Lattice, r: f64) -> f64 {
    let (ef, eg) = (f.envelope(), g.envelope());
    if let Some(cut) = compact_cutoff(&ef, &eg) {
        return if r >= cut { 0.0 } else { f64::INFINITY };
    }
    let (
        Envelope::PolyDecay {
            constant: cf,
            exponent: pf,
        },
        Envelope::PolyDecay {
            constant: cg,
            exponent: pg,
        },
    ) = (ef, eg)
    else {
        unreachable!()
    };
    let d = lattice.dim() as f64;
    let q = pf + pg;
    let h = lattice.cell_radius();
    if q <= d || r < 2.0 * h {
        return f64::INFINITY;
    }
    let c = cf * cg;
    if c == 0.0 {
        return 0.0;
    }
    sphere_area(lattice.dim()) * c * h.max(1.0).powf(d - 1.0) * (1.0 + r - 2.0 * h).powf(d - q)
        / (lattice.det_abs() * (q - d))
}

/// Smallest radius of the doubling sweep whose certified tail is at most `eps_tail`.
pub fn truncation_radius(
    f: &GeneratorSpec,
    g: &GeneratorSpec,
    lattice: &Lattice,
    eps_tail: f64,
) -> Result<f64> {
    if !(eps_tail > 0.0) {
        return Err(Error::InvalidInput("eps_tail must be positive".into()));
    }
    if eps_tail == f64::INFINITY {
        return Ok(0.0);
    }
    let (ef, eg) = (f.envelope(), g.envelope());
    if let Some(cut) = compact_cutoff(&ef, &eg) {
        return Ok(cut);
    }
    if let (
        Envelope::PolyDecay { exponent: pf, .. },
        Envelope::PolyDecay { exponent: pg, .. },
    ) = (ef, eg)
    {
        if pf + pg <= lattice.dim() as f64 {
            return Err(Error::TailBoundUnattainable {
                eps_tail,
                reason: format!(
                    "combined decay exponent {} does not exceed the dimension {}",
                    pf + pg,
                    lattice.dim()
                ),
            });
        }
    }
    let mut r = (2.0 * lattice.cell_radius()).max(1.0);
    while r <= MAX_RADIUS {
        if tail_bound(f, g, lattice, r) <= eps_tail {
            return Ok(r);
        }
        r *= 2.0;
    }
    Err(Error::TailBoundUnattainable {
        eps_tail,
        reason: format!("tail bound still above target at radius {MAX_RADIUS:e}"),
    })
}

/// `[f̂, ĝ]_L(x) = Σ_{λ∈L} f̂(x-λ)·conj(ĝ(x-λ))`, truncated with certified tail `<= eps_tail`.
pub fn bracket_product(
    f: &GeneratorSpec,
    g: &GeneratorSpec,
    lattice: &Lattice,
    x: &[f64],
    eps_tail: f64,
) -> Result<Complex64> {
    check_dim(lattice, x)?;
    if f.dim() != lattice.dim() || g.dim() != lattice.dim() {
        return Err(Error::DimensionMismatch {
            expected: lattice.dim(),
            got: f.dim(),
        });
    }
    let r = truncation_radius(f, g, lattice, eps_tail)?;
    let mut acc = Complex64::new(0.0, 0.0);
    let mut xi = vec![0.0; x.len()];
    lattice.for_each_point_in_ball(x, r, |p| {
        for ((o, a), b) in xi.iter_mut().zip(x).zip(p) {
            *o = a - b;
        }
        acc += f.eval_fourier(&xi) * g.eval_fourier(&xi).conj();
    });
    Ok(acc)
}

fn check_dim(lattice: &Lattice, x: &[f64]) -> Result<()> {
    if x.len() != lattice.dim() {
        return Err(Error::DimensionMismatch {
            expected: lattice.dim(),
            got: x.len(),
        });
    }
    Ok(())
}

/// Uniform cell grid on a fundamental domain: coordinates
/// `t_i = -1/2 + i/n + offset` per axis, `i = 0..n`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Grid {
    pub n_per_axis: usize,
    pub offset: f64,
}

impl Grid {
    /// Cell-centered grid with `offset = 1/(2n)`.
    pub fn centered(n_per_axis: usize) -> Self {
        Grid {
            n_per_axis,
            offset: 0.5 / n_per_axis as f64,
        }
    }

    /// The same offset with twice the resolution; every node of `self` is a node
    /// of the refinement with bit-identical coordinates.
    pub fn refined(&self) -> Self {
        Grid {
            n_per_axis: 2 * self.n_per_axis,
            offset: self.offset,
        }
    }

    pub fn coordinate(&self, i: usize) -> f64 {
        -0.5 + i as f64 / self.n_per_axis as f64 + self.offset
    }

    /// Lattice coordinates of every node, lexicographic with the last axis fastest.
    pub fn coords(&self, d: usize) -> Vec<Vec<f64>> {
        let n = self.n_per_axis;
        let total = n.pow(d as u32);
        (0..total)
            .map(|mut flat| {
                let mut t = vec![0.0; d];
                for axis in (0..d).rev() {
                    t[axis] = self.coordinate(flat % n);
                    flat /= n;
                }
                t
            })
            .collect()
    }
}

/// Samples of `P_L(F̂)(x)` on a grid over the fundamental domain of `L`.
#[derive(Debug, Clone)]
pub struct GramianField {
    pub lattice: Lattice,
    pub grid: Grid,
    /// Lattice coordinates of the nodes.
    pub coords: Vec<Vec<f64>>,
    /// Nodes `x_i = A·t_i`.
    pub points: Vec<Vec<f64>>,
    /// Hermitian `K×K` matrices, one per node.
    pub values: Vec<DMatrix<Complex64>>,
    pub k: usize,
    /// Certified entrywise truncation error.
    pub trunc_err: f64,
    /// Truncation radius used at every node.
    pub radius: f64,
    pub eps_tail: f64,
}

impl GramianField {
    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// Node indices adjacent to `i` along each axis (periodic wrap).
    pub fn neighbors(&self, i: usize) -> Vec<usize> {
        let n = self.grid.n_per_axis;
        let d = self.lattice.dim();
        let mut out = Vec::with_capacity(d);
        let mut stride = 1;
        for axis in (0..d).rev() {
            let pos = (i / stride) % n;
            let next = if pos + 1 == n { i + stride - n * stride } else { i + stride };
            out.push(next);
            let _ = axis;
            stride *= n;
        }
        out
    }
}

/// Radius covering every pair of generators and the largest certified tail at that radius.
pub fn set_truncation(set: &GeneratorSet, lattice: &Lattice, eps_tail: f64) -> Result<(f64, f64)> {
    let specs = set.specs();
    let mut r: f64 = 0.0;
    for (j, f) in specs.iter().enumerate() {
        for g in &specs[j..] {
            r = r.max(truncation_radius(f, g, lattice, eps_tail)?);
        }
    }
    let mut err: f64 = 0.0;
    if eps_tail.is_finite() {
        for (j, f) in specs.iter().enumerate() {
            for g in &specs[j..] {
                err = err.max(tail_bound(f, g, lattice, r).min(eps_tail));
            }
        }
    }
    Ok((r, err))
}

/// `Σ_{λ∈L, |x-λ|≤R} F̂(x-λ)F̂*(x-λ)`, symmetrized.
pub fn gramian_at(set: &GeneratorSet, lattice: &Lattice, x: &[f64], radius: f64) -> DMatrix<Complex64> {
    let k = set.len();
    let mut m = DMatrix::<Complex64>::zeros(k, k);
    let mut xi = vec![0.0; x.len()];
    let mut v = vec![Complex64::new(0.0, 0.0); k];
    lattice.for_each_point_in_ball(x, radius, |p| {
        for ((o, a), b) in xi.iter_mut().zip(x).zip(p) {
            *o = a - b;
        }
        set.eval_into(&xi, &mut v);
        if v.iter().all(|c| c.re == 0.0 && c.im == 0.0) {
            return;
        }
        for j in 0..k {
            for l in 0..k {
                m[(j, l)] += v[j] * v[l].conj();
            }
        }
    });
    symmetrize(&m)
}

/// `(M + M*)/2`.
pub fn symmetrize(m: &DMatrix<Complex64>) -> DMatrix<Complex64> {
    let k = m.nrows();
    DMatrix::from_fn(k, k, |j, l| (m[(j, l)] + m[(l, j)].conj()) * 0.5)
}

/// Gramian field on the centered grid with `n_per_axis` nodes per axis.
pub fn gramian_field(
    set: &GeneratorSet,
    lattice: &Lattice,
    n_per_axis: usize,
    eps_tail: f64,
) -> Result<GramianField> {
    gramian_field_on(set, lattice, Grid::centered(n_per_axis), eps_tail)
}

/// Gramian field on an explicit grid.
pub fn gramian_field_on(
    set: &GeneratorSet,
    lattice: &Lattice,
    grid: Grid,
    eps_tail: f64,
) -> Result<GramianField> {
    if set.dim() != lattice.dim() {
        return Err(Error::DimensionMismatch {
            expected: lattice.dim(),
            got: set.dim(),
        });
    }
    if grid.n_per_axis < 2 {
        return Err(Error::InvalidInput("n_per_axis must be at least 2".into()));
    }
    let (radius, trunc_err) = set_truncation(set, lattice, eps_tail)?;
    let coords = grid.coords(lattice.dim());
    let points: Vec<Vec<f64>> = coords.iter().map(|t| lattice.point(t)).collect();
    let values: Vec<DMatrix<Complex64>> = points
        .par_iter()
        .map(|x| gramian_at(set, lattice, x, radius))
        .collect();
    Ok(GramianField {
        lattice: lattice.clone(),
        grid,
        coords,
        points,
        values,
        k: set.len(),
        trunc_err,
        radius,
        eps_tail,
    })
}

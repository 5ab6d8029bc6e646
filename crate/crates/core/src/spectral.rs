//! Spectral analysis of Gramian fields: frame and Riesz classification,
//! minimal generator counts and extra invariance.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::eigen::eigvals_hermitian;
use crate::error::{Error, Result};
use crate::generators::GeneratorSet;
use crate::lattice::{coset_reps, index, Lattice};
use crate::periodization::{gramian_at, gramian_field, set_truncation, GramianField, Grid};

/// Default bound on `B/A` is `T_MAX²`.
pub const T_MAX: f64 = 1e6;
/// Nonzero eigenvalues must exceed the rank tolerance by this factor for a frame verdict.
pub const GAP_FACTOR: f64 = 10.0;

/// `max(1e-8, 10·K·trunc_err)·max(1, λ_max)`.
pub fn default_rank_tol(k: usize, trunc_err: f64, lambda_max: f64) -> f64 {
    (1e-8f64).max(10.0 * k as f64 * trunc_err) * lambda_max.max(1.0)
}

/// Number of eigenvalues strictly above `tol`.
pub fn rank_at(eigvals: &[f64], tol: f64) -> usize {
    eigvals.iter().filter(|v| **v > tol).count()
}

/// Per-node eigenvalues and ranks of a Gramian field.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpectralProfile {
    pub eigvals: Vec<Vec<f64>>,
    pub ranks: Vec<usize>,
    pub rank_tol: f64,
    /// Smallest eigenvalue above `rank_tol` over the grid (`∞` if none).
    #[serde(with = "crate::float_serde")]
    pub lower: f64,
    /// Largest eigenvalue over the grid.
    pub upper: f64,
}

impl SpectralProfile {
    pub fn compute(field: &GramianField, rank_tol: Option<f64>) -> Result<Self> {
        if field.is_empty() {
            return Err(Error::EmptyField);
        }
        let eigvals: Vec<Vec<f64>> = field
            .values
            .par_iter()
            .map(eigvals_hermitian)
            .collect::<Result<_>>()?;
        let upper = eigvals.iter().map(|e| e[0]).fold(f64::NEG_INFINITY, f64::max);
        let rank_tol = rank_tol.unwrap_or_else(|| default_rank_tol(field.k, field.trunc_err, upper));
        let ranks: Vec<usize> = eigvals.iter().map(|e| rank_at(e, rank_tol)).collect();
        let lower = eigvals
            .iter()
            .flat_map(|e| e.iter().copied().filter(|v| *v > rank_tol))
            .fold(f64::INFINITY, f64::min);
        Ok(SpectralProfile {
            eigvals,
            ranks,
            rank_tol,
            lower,
            upper,
        })
    }

    pub fn min_rank(&self) -> usize {
        self.ranks.iter().copied().min().unwrap_or(0)
    }

    pub fn max_rank(&self) -> usize {
        self.ranks.iter().copied().max().unwrap_or(0)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FrameStatus {
    Frame,
    NotFrame,
    /// Nonzero eigenvalues are not separated from the rank tolerance.
    Inconclusive,
}

/// Resolution and tolerances behind a verdict.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Confidence {
    pub n_per_axis: usize,
    pub grid_offset: f64,
    pub nodes: usize,
    pub rank_tol: f64,
    pub t_max: f64,
    pub trunc_err: f64,
    #[serde(with = "crate::float_serde")]
    pub eps_tail: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Classification {
    pub status: FrameStatus,
    pub is_frame: bool,
    pub is_riesz: bool,
    /// `(A, B)`; `A` excludes nodes next to a rank transition.
    #[serde(with = "crate::float_serde::pair")]
    pub frame_bounds: (f64, f64),
    pub rho: usize,
    pub min_rank: usize,
    pub rank_constant: bool,
    /// Nodes adjacent to a rank change, left out of the `A` estimate.
    pub transition_nodes: Vec<usize>,
    pub confidence: Confidence,
}

/// Nodes whose rank differs from some grid neighbour.
pub fn transition_nodes(field: &GramianField, ranks: &[usize]) -> Vec<usize> {
    let mut flag = vec![false; ranks.len()];
    for i in 0..ranks.len() {
        for j in field.neighbors(i) {
            if ranks[i] != ranks[j] {
                flag[i] = true;
                flag[j] = true;
            }
        }
    }
    (0..ranks.len()).filter(|i| flag[*i]).collect()
}

/// Classifies a field from an already computed profile.
pub fn classify_profile(field: &GramianField, profile: &SpectralProfile, t_max: f64) -> Classification {
    let tol = profile.rank_tol;
    let transitions = transition_nodes(field, &profile.ranks);
    let mut skip = vec![false; field.len()];
    for &i in &transitions {
        skip[i] = true;
    }
    let a = profile
        .eigvals
        .iter()
        .zip(&skip)
        .filter(|(_, s)| !**s)
        .flat_map(|(e, _)| e.iter().copied().filter(|v| *v > tol))
        .fold(f64::INFINITY, f64::min);
    let b = profile.upper;
    let status = if !a.is_finite() {
        FrameStatus::NotFrame
    } else if a < GAP_FACTOR * tol {
        FrameStatus::Inconclusive
    } else if b / a <= t_max * t_max {
        FrameStatus::Frame
    } else {
        FrameStatus::NotFrame
    };
    let is_frame = status == FrameStatus::Frame;
    let min_rank = profile.min_rank();
    let rho = profile.max_rank();
    Classification {
        status,
        is_frame,
        is_riesz: is_frame && min_rank == field.k,
        frame_bounds: (a, b),
        rho,
        min_rank,
        rank_constant: min_rank == rho,
        transition_nodes: transitions,
        confidence: Confidence {
            n_per_axis: field.grid.n_per_axis,
            grid_offset: field.grid.offset,
            nodes: field.len(),
            rank_tol: tol,
            t_max,
            trunc_err: field.trunc_err,
            eps_tail: field.eps_tail,
        },
    }
}

/// Frame/Riesz classification with optional rank tolerance and `t_max`.
pub fn classify(field: &GramianField, rank_tol: Option<f64>, t_max: Option<f64>) -> Result<Classification> {
    let profile = SpectralProfile::compute(field, rank_tol)?;
    Ok(classify_profile(field, &profile, t_max.unwrap_or(T_MAX)))
}

/// Sampled minimal number of generators: the largest rank over the grid.
pub fn min_generators(field: &GramianField, rank_tol: Option<f64>) -> Result<usize> {
    Ok(SpectralProfile::compute(field, rank_tol)?.max_rank())
}

/// One node of the rank-additivity ledger.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RankEntry {
    pub x: Vec<f64>,
    pub rank_lambda: usize,
    pub ranks_gamma: Vec<usize>,
}

impl RankEntry {
    pub fn sum_gamma(&self) -> usize {
        self.ranks_gamma.iter().sum()
    }

    pub fn agrees(&self) -> bool {
        self.rank_lambda == self.sum_gamma()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InvarianceResult {
    pub invariant: bool,
    pub index: usize,
    pub reps: Vec<Vec<f64>>,
    pub rank_tol_lambda: f64,
    pub rank_tol_gamma: f64,
    pub trunc_err: f64,
    pub mismatches: usize,
    pub ledger: Vec<RankEntry>,
}

impl InvarianceResult {
    pub fn mismatch_fraction(&self) -> f64 {
        self.mismatches as f64 / self.ledger.len().max(1) as f64
    }
}

/// Rank additivity test for `Γ`-invariance of the `Λ`-shift-invariant space:
/// `rank P_{Λ*}(x) = Σ_{k∈R} rank P_{Γ*}(x+k)` with `R` representatives of `Λ*/Γ*`.
pub fn invariance_test(
    set: &GeneratorSet,
    lambda: &Lattice,
    gamma: &Lattice,
    n_per_axis: usize,
    eps_tail: f64,
    rank_tol: Option<f64>,
) -> Result<InvarianceResult> {
    let idx = index(lambda, gamma)?;
    let reps = coset_reps(lambda, gamma)?;
    let lambda_dual = lambda.dual();
    let gamma_dual = gamma.dual();
    let field = gramian_field(set, &lambda_dual, n_per_axis, eps_tail)?;
    let profile = SpectralProfile::compute(&field, rank_tol)?;
    let (radius_g, trunc_g) = set_truncation(set, &gamma_dual, eps_tail)?;
    let shifted: Vec<Vec<Vec<f64>>> = field
        .points
        .par_iter()
        .map(|x| {
            reps.reps
                .iter()
                .map(|k| {
                    let y: Vec<f64> = x.iter().zip(k).map(|(a, b)| a + b).collect();
                    eigvals_hermitian(&gramian_at(set, &gamma_dual, &y, radius_g))
                })
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<_>>()?;
    let max_g = shifted
        .iter()
        .flatten()
        .map(|e| e[0])
        .fold(f64::NEG_INFINITY, f64::max);
    let tol_g = rank_tol.unwrap_or_else(|| default_rank_tol(set.len(), trunc_g, max_g));
    let ledger: Vec<RankEntry> = field
        .points
        .iter()
        .zip(&profile.ranks)
        .zip(&shifted)
        .map(|((x, r), evs)| RankEntry {
            x: x.clone(),
            rank_lambda: *r,
            ranks_gamma: evs.iter().map(|e| rank_at(e, tol_g)).collect(),
        })
        .collect();
    let mismatches = ledger.iter().filter(|e| !e.agrees()).count();
    Ok(InvarianceResult {
        invariant: mismatches == 0,
        index: idx,
        reps: reps.reps.clone(),
        rank_tol_lambda: profile.rank_tol,
        rank_tol_gamma: tol_g,
        trunc_err: field.trunc_err.max(trunc_g),
        mismatches,
        ledger,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GammaFrame {
    pub classification: Classification,
    /// `false` flags an inconsistency: the premises hold yet the `Γ*` field is not a frame.
    pub consistent: bool,
}

/// Classifies the `Γ*`-Gramian once `Γ`-invariance and the `Λ`-frame property are established.
pub fn gamma_frame_check(
    set: &GeneratorSet,
    gamma: &Lattice,
    invariance: &InvarianceResult,
    lambda_class: &Classification,
    n_per_axis: usize,
    eps_tail: f64,
    rank_tol: Option<f64>,
) -> Result<GammaFrame> {
    if !invariance.invariant {
        return Err(Error::PreconditionUnmet(
            "the space is not invariant under the finer lattice".into(),
        ));
    }
    if !lambda_class.is_frame {
        return Err(Error::PreconditionUnmet(
            "the translates along the coarse lattice do not form a frame".into(),
        ));
    }
    let field = gramian_field(set, &gamma.dual(), n_per_axis, eps_tail)?;
    let classification = classify(&field, rank_tol, Some(lambda_class.confidence.t_max))?;
    let consistent = classification.is_frame;
    Ok(GammaFrame {
        classification,
        consistent,
    })
}

/// Outcome of the eigenvalue regularity check on adjacent grid nodes.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct WeylCheck {
    pub pairs: usize,
    pub violations: usize,
    /// Smallest `bound - |λ_k(x) - λ_k(y)|` over all pairs and `k`.
    #[serde(with = "crate::float_serde")]
    pub min_margin: f64,
}

/// Checks `|λ_k(x) - λ_k(y)| <= ‖P(x) - P(y)‖_F + 2e-12·max‖P‖_F` for every
/// pair of grid-adjacent nodes.
pub fn weyl_check(field: &GramianField, profile: &SpectralProfile) -> WeylCheck {
    let max_f = field
        .values
        .iter()
        .map(|m| m.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt())
        .fold(0.0, f64::max);
    let slack = 2.0 * 1e-12 * max_f;
    let mut out = WeylCheck {
        pairs: 0,
        violations: 0,
        min_margin: f64::INFINITY,
    };
    for i in 0..field.len() {
        for j in field.neighbors(i) {
            if j == i {
                continue;
            }
            out.pairs += 1;
            let diff = (&field.values[i] - &field.values[j])
                .iter()
                .map(|c| c.norm_sqr())
                .sum::<f64>()
                .sqrt();
            for (a, b) in profile.eigvals[i].iter().zip(&profile.eigvals[j]) {
                let margin = diff + slack - (a - b).abs();
                out.min_margin = out.min_margin.min(margin);
                if margin < 0.0 {
                    out.violations += 1;
                }
            }
        }
    }
    out
}

/// Grid used by the spectral routines, re-exported for callers that refine fields.
pub fn centered_grid(n: usize) -> Grid {
    Grid::centered(n)
}

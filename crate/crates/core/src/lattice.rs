//! Full-rank lattices in ℝ^d.
//!
//! A lattice is stored through a basis matrix `A` whose columns generate it over ℤ.
//! The fundamental domain used throughout the crate is the half-open box image
//! `M = A·[-1/2, 1/2)^d`; [`Lattice::reduce`] maps any point into it.

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Default coordinate tolerance for membership tests.
pub const MEMBERSHIP_TOL: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<Vec<f64>>", into = "Vec<Vec<f64>>")]
pub struct Lattice {
    basis: DMatrix<f64>,
    inverse: DMatrix<f64>,
    det_abs: f64,
    inv_op_norm: f64,
}

impl Lattice {
    pub fn new(basis: DMatrix<f64>) -> Result<Self> {
        if basis.nrows() != basis.ncols() || basis.nrows() == 0 {
            return Err(Error::InvalidInput(format!(
                "basis must be a non-empty square matrix, got {}x{}",
                basis.nrows(),
                basis.ncols()
            )));
        }
        if basis.iter().any(|v| !v.is_finite()) {
            return Err(Error::InvalidInput("basis has non-finite entries".into()));
        }
        let d = basis.nrows();
        let scale = basis
            .column_iter()
            .map(|c| c.norm())
            .fold(0.0_f64, f64::max);
        let threshold = 1e-12 * scale.powi(d as i32);
        let det_abs = basis.determinant().abs();
        if det_abs <= threshold {
            return Err(Error::SingularBasis { det_abs, threshold });
        }
        let inverse = basis
            .clone()
            .try_inverse()
            .ok_or(Error::SingularBasis { det_abs, threshold })?;
        let inv_op_norm = inverse
            .clone()
            .svd(false, false)
            .singular_values
            .iter()
            .cloned()
            .fold(0.0_f64, f64::max);
        Ok(Lattice {
            basis,
            inverse,
            det_abs,
            inv_op_norm,
        })
    }

    /// Builds a lattice from a row-major basis array.
    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self> {
        let d = rows.len();
        if d == 0 || rows.iter().any(|r| r.len() != d) {
            return Err(Error::InvalidInput(
                "basis rows must form a non-empty square array".into(),
            ));
        }
        Lattice::new(DMatrix::from_fn(d, d, |i, j| rows[i][j]))
    }

    /// ℤ^d.
    pub fn integer(d: usize) -> Self {
        Lattice::new(DMatrix::identity(d, d)).expect("identity basis is regular")
    }

    /// `alpha`·ℤ^d.
    pub fn scaled_integer(d: usize, alpha: f64) -> Result<Self> {
        Lattice::new(DMatrix::identity(d, d) * alpha)
    }

    pub fn diagonal(diag: &[f64]) -> Result<Self> {
        Lattice::new(DMatrix::from_diagonal(&nalgebra::DVector::from_column_slice(
            diag,
        )))
    }

    pub fn dim(&self) -> usize {
        self.basis.nrows()
    }

    pub fn basis(&self) -> &DMatrix<f64> {
        &self.basis
    }

    /// Covolume `|det A|`, i.e. the volume of any fundamental domain.
    pub fn det_abs(&self) -> f64 {
        self.det_abs
    }

    pub fn column(&self, j: usize) -> Vec<f64> {
        self.basis.column(j).iter().cloned().collect()
    }

    pub fn rows(&self) -> Vec<Vec<f64>> {
        self.basis
            .row_iter()
            .map(|r| r.iter().cloned().collect())
            .collect()
    }

    /// Largest column norm.
    pub fn scale(&self) -> f64 {
        self.basis
            .column_iter()
            .map(|c| c.norm())
            .fold(0.0_f64, f64::max)
    }

    /// Every point of `M` lies within this distance of the origin.
    pub fn cell_radius(&self) -> f64 {
        0.5 * self.basis.column_iter().map(|c| c.norm()).sum::<f64>()
    }

    /// Dual lattice with basis `(Aᵀ)⁻¹`.
    pub fn dual(&self) -> Lattice {
        Lattice::new(self.inverse.transpose()).expect("inverse transpose of a regular basis")
    }

    /// Coordinates `A⁻¹p`.
    pub fn coords(&self, p: &[f64]) -> Vec<f64> {
        mat_vec(&self.inverse, p)
    }

    /// Point `A t`.
    pub fn point(&self, t: &[f64]) -> Vec<f64> {
        mat_vec(&self.basis, t)
    }

    /// Representative of `p + L` inside `M = A[-1/2,1/2)^d`.
    pub fn reduce(&self, p: &[f64]) -> Vec<f64> {
        self.check_dim(p.len());
        let t: Vec<f64> = self.coords(p).into_iter().map(wrap_half).collect();
        self.point(&t)
    }

    pub fn contains(&self, p: &[f64]) -> bool {
        self.contains_tol(p, MEMBERSHIP_TOL)
    }

    /// True iff `A⁻¹p` is within `tol` of an integer vector.
    pub fn contains_tol(&self, p: &[f64], tol: f64) -> bool {
        self.check_dim(p.len());
        self.coords(p).iter().all(|t| (t - t.round()).abs() <= tol)
    }

    /// True iff every basis vector of `self` belongs to `other`.
    pub fn is_sublattice_of(&self, other: &Lattice) -> bool {
        self.dim() == other.dim() && (0..self.dim()).all(|j| other.contains(&self.column(j)))
    }

    /// Lattice points `p` with `|p - center| <= radius`.
    pub fn points_in_ball(&self, center: &[f64], radius: f64) -> Vec<Vec<f64>> {
        let mut out = Vec::new();
        self.for_each_point_in_ball(center, radius, |p| out.push(p.to_vec()));
        out
    }

    /// Visits the lattice points of a closed ball in lexicographic order of
    /// their integer coordinates.
    pub fn for_each_point_in_ball<F: FnMut(&[f64])>(
        &self,
        center: &[f64],
        radius: f64,
        mut visit: F,
    ) {
        self.check_dim(center.len());
        if radius < 0.0 || !radius.is_finite() {
            return;
        }
        let d = self.dim();
        let tc = self.coords(center);
        let reach = self.inv_op_norm * radius + 1e-9;
        let lo: Vec<i64> = tc.iter().map(|t| (t - reach).ceil() as i64).collect();
        let hi: Vec<i64> = tc.iter().map(|t| (t + reach).floor() as i64).collect();
        if lo.iter().zip(&hi).any(|(l, h)| l > h) {
            return;
        }
        let r2 = radius * radius * (1.0 + 8.0 * f64::EPSILON);
        let mut z = lo.clone();
        let mut p = vec![0.0; d];
        loop {
            for (i, pi) in p.iter_mut().enumerate() {
                let mut acc = 0.0;
                for (j, zj) in z.iter().enumerate() {
                    acc += self.basis[(i, j)] * *zj as f64;
                }
                *pi = acc;
            }
            let dist2: f64 = p.iter().zip(center).map(|(a, b)| (a - b) * (a - b)).sum();
            if dist2 <= r2 {
                visit(&p);
            }
            // odometer, last coordinate fastest
            let mut k = d;
            loop {
                if k == 0 {
                    return;
                }
                k -= 1;
                if z[k] < hi[k] {
                    z[k] += 1;
                    break;
                }
                z[k] = lo[k];
            }
        }
    }

    fn check_dim(&self, got: usize) {
        assert_eq!(got, self.dim(), "point dimension does not match lattice");
    }
}

impl TryFrom<Vec<Vec<f64>>> for Lattice {
    type Error = Error;
    fn try_from(rows: Vec<Vec<f64>>) -> Result<Self> {
        Lattice::from_rows(&rows)
    }
}

impl From<Lattice> for Vec<Vec<f64>> {
    fn from(l: Lattice) -> Self {
        l.rows()
    }
}

/// Wraps a coordinate into `[-1/2, 1/2)`. Values within rounding of the upper
/// edge go to `-1/2`, so reduction is stable under re-application.
pub(crate) fn wrap_half(t: f64) -> f64 {
    let r = t + 0.5;
    let mut f = r - r.floor();
    if f >= 1.0 - 1e-12 {
        f = 0.0;
    }
    f - 0.5
}

fn mat_vec(m: &DMatrix<f64>, v: &[f64]) -> Vec<f64> {
    assert_eq!(m.ncols(), v.len(), "dimension mismatch");
    (0..m.nrows())
        .map(|i| (0..m.ncols()).map(|j| m[(i, j)] * v[j]).sum())
        .collect()
}

/// Index `[coarse : fine]` of nested lattices `fine ⊂ coarse`.
pub fn index(fine: &Lattice, coarse: &Lattice) -> Result<usize> {
    if fine.dim() != coarse.dim() {
        return Err(Error::DimensionMismatch {
            expected: coarse.dim(),
            got: fine.dim(),
        });
    }
    if !fine.is_sublattice_of(coarse) {
        return Err(Error::NotNested);
    }
    let ratio = fine.det_abs() / coarse.det_abs();
    let rounded = ratio.round();
    if rounded < 1.0 || (ratio - rounded).abs() > 1e-9 * ratio.max(1.0) {
        return Err(Error::NonIntegerIndex { ratio });
    }
    Ok(rounded as usize)
}

/// Representatives of the quotient `Λ*/Γ*` for nested lattices `Λ ⊂ Γ`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CosetReps {
    /// Γ*, the lattice being quotiented out.
    pub sub: Lattice,
    /// Λ*, the lattice the representatives live in.
    pub sup: Lattice,
    /// One point of Λ* per coset, reduced into `M_{Γ*}` and sorted lexicographically.
    pub reps: Vec<Vec<f64>>,
}

impl CosetReps {
    pub fn len(&self) -> usize {
        self.reps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.reps.is_empty()
    }
}

/// Coset representatives of `Λ*/Γ*` given the primal pair `Λ ⊂ Γ`.
///
/// Points of Λ* inside a ball covering `M_{Γ*}` are reduced into `M_{Γ*}` and
/// deduplicated modulo Γ*.
pub fn coset_reps(lambda: &Lattice, gamma: &Lattice) -> Result<CosetReps> {
    let count = index(lambda, gamma)?;
    let sup = lambda.dual();
    let sub = gamma.dual();
    let origin = vec![0.0; sup.dim()];
    let mut reps: Vec<Vec<f64>> = Vec::with_capacity(count);
    sup.for_each_point_in_ball(&origin, sub.cell_radius() * (1.0 + 1e-9), |p| {
        let q = sub.reduce(p);
        let seen = reps.iter().any(|r| {
            let diff: Vec<f64> = q.iter().zip(r).map(|(a, b)| a - b).collect();
            sub.contains(&diff)
        });
        if !seen {
            reps.push(q);
        }
    });
    if reps.len() != count {
        return Err(Error::InvalidInput(format!(
            "found {} coset representatives, expected index {count}",
            reps.len()
        )));
    }
    reps.sort_by(|a, b| {
        a.iter()
            .zip(b)
            .map(|(x, y)| x.total_cmp(y))
            .find(|o| o.is_ne())
            .unwrap_or(std::cmp::Ordering::Equal)
    });
    Ok(CosetReps { sub, sup, reps })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(a: &[f64], b: &[f64]) -> bool {
        a.iter().zip(b).all(|(x, y)| (x - y).abs() < 1e-12)
    }

    #[test]
    fn construction() {
        let z2 = Lattice::integer(2);
        assert_eq!(z2.det_abs(), 1.0);
        let g = Lattice::diagonal(&[0.5, 1.0]).unwrap();
        assert!((g.det_abs() - 0.5).abs() < 1e-15);
        assert!(matches!(
            Lattice::new(DMatrix::zeros(2, 2)),
            Err(Error::SingularBasis { .. })
        ));
        assert!(Lattice::from_rows(&[vec![1.0, 2.0], vec![2.0, 4.0]]).is_err());
        assert!(Lattice::from_rows(&[vec![f64::NAN]]).is_err());
    }

    #[test]
    fn duals() {
        let z3 = Lattice::integer(3);
        assert_eq!(z3.dual().basis(), z3.basis());
        let half = Lattice::scaled_integer(1, 0.5).unwrap();
        assert!((half.dual().basis()[(0, 0)] - 2.0).abs() < 1e-15);
        let l = Lattice::diagonal(&[1.0 / 3.0, 1.0]).unwrap();
        let d = l.dual();
        assert!((d.basis()[(0, 0)] - 3.0).abs() < 1e-14);
        assert!((d.basis()[(1, 1)] - 1.0).abs() < 1e-14);
    }

    #[test]
    fn dual_of_dual_same_points() {
        let l = Lattice::from_rows(&[vec![1.0, 0.3], vec![0.2, 0.7]]).unwrap();
        let dd = l.dual().dual();
        for j in 0..2 {
            assert!(l.contains(&dd.column(j)));
            assert!(dd.contains(&l.column(j)));
        }
    }

    #[test]
    fn indices() {
        let z = Lattice::integer(1);
        let half = Lattice::scaled_integer(1, 0.5).unwrap();
        assert_eq!(index(&z, &half).unwrap(), 2);
        for n in 2..7 {
            let fine = Lattice::scaled_integer(1, 1.0 / n as f64).unwrap();
            assert_eq!(index(&z, &fine).unwrap(), n);
        }
        let z2 = Lattice::integer(2);
        assert_eq!(index(&z2, &z2).unwrap(), 1);
        assert_eq!(index(&half, &z), Err(Error::NotNested));
        let g = Lattice::diagonal(&[0.5, 1.0]).unwrap();
        assert_eq!(index(&z2, &g).unwrap(), 2);
    }

    #[test]
    fn reduction() {
        let z = Lattice::integer(1);
        assert!(close(&z.reduce(&[0.75]), &[-0.25]));
        let z2 = Lattice::integer(2);
        assert!(close(&z2.reduce(&[0.0, 0.0]), &[0.0, 0.0]));
        let two = Lattice::scaled_integer(1, 2.0).unwrap();
        assert!(close(&two.reduce(&[1.0]), &[-1.0]));
        assert!(close(&two.reduce(&[-1.0]), &[-1.0]));
    }

    #[test]
    fn membership() {
        let z2 = Lattice::integer(2);
        assert!(z2.contains(&[3.0, -7.0]));
        let half = Lattice::scaled_integer(1, 0.5).unwrap();
        assert!(!half.contains(&[0.25]));
        let two = Lattice::scaled_integer(1, 2.0).unwrap();
        assert!(two.contains(&[2.0 + 1e-12]));
    }

    #[test]
    fn balls() {
        let z = Lattice::integer(1);
        let pts = z.points_in_ball(&[0.0], 2.5);
        assert_eq!(pts, vec![vec![-2.0], vec![-1.0], vec![0.0], vec![1.0], vec![2.0]]);
        let z2 = Lattice::integer(2);
        let mut pts = z2.points_in_ball(&[0.0, 0.0], 1.0);
        pts.sort_by(|a, b| a.partial_cmp(b).unwrap());
        assert_eq!(pts.len(), 5);
        assert!(pts.contains(&vec![0.0, 1.0]) && pts.contains(&vec![-1.0, 0.0]));
        // |p - 0.5| <= 1.6 on 2ℤ: only 0 and 2
        let two = Lattice::scaled_integer(1, 2.0).unwrap();
        assert_eq!(two.points_in_ball(&[0.5], 1.6), vec![vec![0.0], vec![2.0]]);
        assert!(z.points_in_ball(&[0.0], -1.0).is_empty());
    }

    #[test]
    fn cosets() {
        let z = Lattice::integer(1);
        let half = Lattice::scaled_integer(1, 0.5).unwrap();
        let reps = coset_reps(&z, &half).unwrap();
        // brute force: ℤ ∩ [-1, 1) modulo 2ℤ is {-1, 0}
        assert_eq!(reps.reps, vec![vec![-1.0], vec![0.0]]);
        let same = coset_reps(&z, &z).unwrap();
        assert_eq!(same.reps, vec![vec![0.0]]);
        let third = Lattice::scaled_integer(1, 1.0 / 3.0).unwrap();
        let reps = coset_reps(&z, &third).unwrap();
        assert_eq!(reps.len(), 3);
        // pairwise differences are not in 3ℤ
        for a in &reps.reps {
            for b in &reps.reps {
                if a != b {
                    assert!(!reps.sub.contains(&[a[0] - b[0]]));
                }
            }
        }
        assert!(coset_reps(&half, &z).is_err());
    }

    #[test]
    fn serde_row_major() {
        let l = Lattice::from_rows(&[vec![1.0, 0.5], vec![0.0, 2.0]]).unwrap();
        let s = serde_json::to_string(&l).unwrap();
        assert_eq!(s, "[[1.0,0.5],[0.0,2.0]]");
        let back: Lattice = serde_json::from_str(&s).unwrap();
        assert_eq!(back, l);
        assert!(serde_json::from_str::<Lattice>("[[0.0]]").is_err());
    }
}

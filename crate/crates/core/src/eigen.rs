//! Cyclic Jacobi eigenvalues for small Hermitian matrices.

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{Error, Result};

/// Sweep stops once the off-diagonal Frobenius norm falls below this fraction of `‖M‖_F`.
pub const JACOBI_TOL: f64 = 1e-14;
pub const JACOBI_MAX_SWEEPS: usize = 30;
/// Allowed `max |M_ij - conj(M_ji)|` relative to `max(1, ‖M‖_F)`.
pub const HERMITIAN_TOL: f64 = 1e-12;

fn frobenius(m: &DMatrix<Complex64>) -> f64 {
    m.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt()
}

/// Largest deviation from Hermitian symmetry.
pub fn asymmetry(m: &DMatrix<Complex64>) -> f64 {
    let k = m.nrows();
    let mut worst: f64 = 0.0;
    for i in 0..k {
        for j in i..k {
            worst = worst.max((m[(i, j)] - m[(j, i)].conj()).norm());
        }
    }
    worst
}

/// Eigenvalues of a Hermitian matrix in descending order.
pub fn eigvals_hermitian(m: &DMatrix<Complex64>) -> Result<Vec<f64>> {
    if m.nrows() != m.ncols() {
        return Err(Error::DimensionMismatch {
            expected: m.nrows(),
            got: m.ncols(),
        });
    }
    let k = m.nrows();
    let norm = frobenius(m);
    let asym = asymmetry(m);
    if asym > HERMITIAN_TOL * norm.max(1.0) || !norm.is_finite() {
        return Err(Error::NonHermitianInput { asymmetry: asym });
    }
    // row-major working copy, symmetrized
    let mut a = vec![Complex64::new(0.0, 0.0); k * k];
    for i in 0..k {
        for j in 0..k {
            a[i * k + j] = (m[(i, j)] + m[(j, i)].conj()) * 0.5;
        }
    }
    let stop = JACOBI_TOL * norm;
    for _ in 0..JACOBI_MAX_SWEEPS {
        let off: f64 = (0..k)
            .flat_map(|i| (0..k).filter(move |j| *j != i).map(move |j| (i, j)))
            .map(|(i, j)| a[i * k + j].norm_sqr())
            .sum::<f64>()
            .sqrt();
        if off <= stop {
            break;
        }
        for p in 0..k {
            for q in p + 1..k {
                rotate(&mut a, k, p, q);
            }
        }
    }
    let mut ev: Vec<f64> = (0..k).map(|i| a[i * k + i].re).collect();
    ev.sort_by(|x, y| y.total_cmp(x));
    Ok(ev)
}

/// Annihilates `a[p][q]`: a diagonal phase makes it real, then a real Givens
/// rotation finishes the job.
fn rotate(a: &mut [Complex64], k: usize, p: usize, q: usize) {
    let apq = a[p * k + q];
    let r = apq.norm();
    if r == 0.0 {
        return;
    }
    let phase = apq / r;
    for j in 0..k {
        a[q * k + j] *= phase;
    }
    for i in 0..k {
        a[i * k + q] *= phase.conj();
    }
    let app = a[p * k + p].re;
    let aqq = a[q * k + q].re;
    let tau = (aqq - app) / (2.0 * r);
    let t = if tau >= 0.0 {
        1.0 / (tau + (1.0 + tau * tau).sqrt())
    } else {
        -1.0 / (-tau + (1.0 + tau * tau).sqrt())
    };
    let c = 1.0 / (1.0 + t * t).sqrt();
    let s = t * c;
    for i in 0..k {
        if i == p || i == q {
            continue;
        }
        let aip = a[i * k + p];
        let aiq = a[i * k + q];
        let np = aip * c - aiq * s;
        let nq = aip * s + aiq * c;
        a[i * k + p] = np;
        a[i * k + q] = nq;
        a[p * k + i] = np.conj();
        a[q * k + i] = nq.conj();
    }
    a[p * k + p] = Complex64::new(app - t * r, 0.0);
    a[q * k + q] = Complex64::new(aqq + t * r, 0.0);
    a[p * k + q] = Complex64::new(0.0, 0.0);
    a[q * k + p] = Complex64::new(0.0, 0.0);
}

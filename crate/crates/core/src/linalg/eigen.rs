//! Hermitian eigendecomposition by cyclic complex Jacobi rotations.
//!
//! The matrices diagonalized here are tiny (path-graph adjacencies, a few
//! tens of rows), so the quadratically convergent and numerically
//! self-correcting Jacobi method is a better fit than a tridiagonalizing
//! QL pipeline. Sweeps run in a fixed cyclic order and all tie-breaking is
//! explicit, so the output is deterministic for a fixed input.

use num_complex::Complex64;

use super::ComplexMat;
use crate::error::{Error, Result};
use crate::tol;

const MAX_SWEEPS: usize = 100;

/// Eigenvalues (ascending) and orthonormal eigenvector columns of a
/// Hermitian matrix: `M = V diag(λ) V†`.
#[derive(Debug, Clone)]
pub struct SpectralDecomposition {
    eigenvalues: Vec<f64>,
    eigenvectors: ComplexMat,
}

impl SpectralDecomposition {
    pub fn eigenvalues(&self) -> &[f64] {
        &self.eigenvalues
    }

    /// Matrix whose columns are the eigenvectors, ordered like the
    /// eigenvalues.
    pub fn eigenvectors(&self) -> &ComplexMat {
        &self.eigenvectors
    }

    pub fn dim(&self) -> usize {
        self.eigenvalues.len()
    }

    /// `V diag(λ) V†`, for checking the decomposition against its source.
    pub fn reconstruct(&self) -> ComplexMat {
        let n = self.dim();
        let v = &self.eigenvectors;
        let mut m = ComplexMat::zeros(n, n).expect("nonzero dims");
        for r in 0..n {
            for c in 0..n {
                let mut acc = Complex64::ZERO;
                for k in 0..n {
                    acc += v[(r, k)] * self.eigenvalues[k] * v[(c, k)].conj();
                }
                m[(r, c)] = acc;
            }
        }
        m
    }

    /// Largest deviation of `⟨v_i|v_j⟩` from `δ_ij` over all column pairs.
    pub fn orthonormality_error(&self) -> f64 {
        self.eigenvectors.unitarity_error()
    }
}

/// Decompose a Hermitian matrix; eigenvalues come out ascending and each
/// eigenvector has its first non-negligible component rotated to the
/// positive real axis, so repeated calls agree bit for bit.
pub fn eig_hermitian(m: &ComplexMat) -> Result<SpectralDecomposition> {
    if !m.is_square() {
        return Err(Error::InvalidDimension(format!(
            "eigendecomposition needs a square matrix, got {}x{}",
            m.rows(),
            m.cols()
        )));
    }
    let herm_err = m.hermiticity_error();
    if herm_err > tol::HERMITICITY {
        return Err(Error::ContractViolation(format!(
            "matrix is not Hermitian: |M - M\u{2020}| reaches {herm_err:.3e}"
        )));
    }

    let n = m.rows();
    // Work on an exactly Hermitian copy so the iteration never chases the
    // caller's sub-tolerance asymmetry.
    let mut a = m.clone();
    for r in 0..n {
        a[(r, r)] = Complex64::new(a[(r, r)].re, 0.0);
        for c in (r + 1)..n {
            let avg = (a[(r, c)] + a[(c, r)].conj()) * 0.5;
            a[(r, c)] = avg;
            a[(c, r)] = avg.conj();
        }
    }

    let mut q = ComplexMat::identity(n)?;
    let threshold = tol::EIG_OFFDIAG_DECAY * m.max_abs().max(1.0);

    let mut converged = n <= 1;
    for _sweep in 0..MAX_SWEEPS {
        if converged {
            break;
        }
        let mut off_max = 0.0f64;
        for p in 0..n {
            for qi in (p + 1)..n {
                off_max = off_max.max(a[(p, qi)].norm());
            }
        }
        if off_max <= threshold {
            converged = true;
            break;
        }
        for p in 0..n {
            for qi in (p + 1)..n {
                rotate(&mut a, &mut q, p, qi);
            }
        }
    }
    if !converged {
        return Err(Error::ContractViolation(format!(
            "Jacobi eigensolver did not converge within {MAX_SWEEPS} sweeps"
        )));
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| {
        a[(i, i)]
            .re
            .partial_cmp(&a[(j, j)].re)
            .unwrap_or(std::cmp::Ordering::Equal)
            .then(i.cmp(&j))
    });

    let mut eigenvalues = Vec::with_capacity(n);
    let mut eigenvectors = ComplexMat::zeros(n, n)?;
    for (dst, &src) in order.iter().enumerate() {
        eigenvalues.push(a[(src, src)].re);
        // Global-phase convention: first non-negligible component is made
        // real and positive.
        let mut phase = Complex64::ONE;
        for r in 0..n {
            let z = q[(r, src)];
            if z.norm() > tol::EIG_PHASE_PIVOT {
                phase = z.conj() / z.norm();
                break;
            }
        }
        for r in 0..n {
            eigenvectors[(r, dst)] = q[(r, src)] * phase;
        }
    }

    Ok(SpectralDecomposition { eigenvalues, eigenvectors })
}

/// One Jacobi rotation zeroing `a[p][q]`, mirrored onto `a[q][p]`, with the
/// same unitary accumulated into the columns of `q_acc`.
fn rotate(a: &mut ComplexMat, q_acc: &mut ComplexMat, p: usize, q: usize) {
    let n = a.rows();
    let apq = a[(p, q)];
    let r = apq.norm();
    if r <= tol::DEGENERATE_NORM_SQ {
        return;
    }
    let phase = apq / r;
    let app = a[(p, p)].re;
    let aqq = a[(q, q)].re;

    // tan of the rotation angle: smaller root of t^2 + 2 tau t - 1 = 0.
    let tau = (aqq - app) / (2.0 * r);
    let t = if tau >= 0.0 {
        1.0 / (tau + (1.0 + tau * tau).sqrt())
    } else {
        -1.0 / (-tau + (1.0 + tau * tau).sqrt())
    };
    let c = 1.0 / (1.0 + t * t).sqrt();
    let s = t * c;

    for k in 0..n {
        if k == p || k == q {
            continue;
        }
        let akp = a[(k, p)];
        let akq = a[(k, q)];
        let new_kp = akp * c - akq * (phase.conj() * s);
        let new_kq = akp * (phase * s) + akq * c;
        a[(k, p)] = new_kp;
        a[(p, k)] = new_kp.conj();
        a[(k, q)] = new_kq;
        a[(q, k)] = new_kq.conj();
    }
    a[(p, p)] = Complex64::new(c * c * app - 2.0 * c * s * r + s * s * aqq, 0.0);
    a[(q, q)] = Complex64::new(s * s * app + 2.0 * c * s * r + c * c * aqq, 0.0);
    a[(p, q)] = Complex64::ZERO;
    a[(q, p)] = Complex64::ZERO;

    for k in 0..n {
        let qkp = q_acc[(k, p)];
        let qkq = q_acc[(k, q)];
        q_acc[(k, p)] = qkp * c - qkq * (phase.conj() * s);
        q_acc[(k, q)] = qkp * (phase * s) + qkq * c;
    }
}

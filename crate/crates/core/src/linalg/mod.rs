//! Minimal dense complex linear algebra for small unitary evolution.
//!
//! Everything here is sized for the walk operators this crate actually
//! builds (dimension a few tens), so the implementations favour clarity
//! and determinism over asymptotics: plain row-major storage, triple-loop
//! products, and a Jacobi eigensolver.

mod eigen;

pub use eigen::{eig_hermitian, SpectralDecomposition};

use std::fmt;
use std::ops::{Index, IndexMut, Mul};

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::tol;

/// Complex amplitude vector.
#[derive(Debug, Clone, PartialEq)]
pub struct ComplexVec {
    data: Vec<Complex64>,
}

impl ComplexVec {
    /// Zero vector of dimension `dim`.
    pub fn zeros(dim: usize) -> Result<Self> {
        if dim == 0 {
            return Err(Error::InvalidDimension("vector dimension must be positive".into()));
        }
        Ok(Self { data: vec![Complex64::ZERO; dim] })
    }

    /// Basis vector `e_index` of dimension `dim`.
    pub fn basis(dim: usize, index: usize) -> Result<Self> {
        let mut v = Self::zeros(dim)?;
        if index >= dim {
            return Err(Error::InvalidDimension(format!(
                "basis index {index} out of range for dimension {dim}"
            )));
        }
        v.data[index] = Complex64::ONE;
        Ok(v)
    }

    pub fn from_entries(entries: Vec<Complex64>) -> Result<Self> {
        if entries.is_empty() {
            return Err(Error::InvalidDimension("vector dimension must be positive".into()));
        }
        if entries.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::ContractViolation("vector entries must be finite".into()));
        }
        Ok(Self { data: entries })
    }

    pub fn dim(&self) -> usize {
        self.data.len()
    }

    pub fn entries(&self) -> &[Complex64] {
        &self.data
    }

    pub fn norm_sqr(&self) -> f64 {
        self.data.iter().map(|z| z.norm_sqr()).sum()
    }

    pub fn norm(&self) -> f64 {
        self.norm_sqr().sqrt()
    }

    pub fn scaled(&self, factor: Complex64) -> Self {
        Self { data: self.data.iter().map(|z| z * factor).collect() }
    }

    /// Unit-norm copy; degenerate if the vector is (numerically) zero.
    pub fn normalized(&self) -> Result<Self> {
        let ns = self.norm_sqr();
        if ns <= tol::DEGENERATE_NORM_SQ {
            return Err(Error::DegenerateState("cannot normalize a zero vector".into()));
        }
        Ok(self.scaled(Complex64::new(1.0 / ns.sqrt(), 0.0)))
    }

    /// Inner product `⟨self|other⟩` (conjugate-linear in `self`).
    pub fn inner(&self, other: &Self) -> Result<Complex64> {
        if self.dim() != other.dim() {
            return Err(Error::InvalidDimension(format!(
                "inner product of dimensions {} and {}",
                self.dim(),
                other.dim()
            )));
        }
        Ok(self
            .data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| a.conj() * b)
            .sum())
    }
}

impl Index<usize> for ComplexVec {
    type Output = Complex64;
    fn index(&self, i: usize) -> &Complex64 {
        &self.data[i]
    }
}

impl IndexMut<usize> for ComplexVec {
    fn index_mut(&mut self, i: usize) -> &mut Complex64 {
        &mut self.data[i]
    }
}

/// Dense row-major complex matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct ComplexMat {
    rows: usize,
    cols: usize,
    data: Vec<Complex64>,
}

impl ComplexMat {
    pub fn zeros(rows: usize, cols: usize) -> Result<Self> {
        if rows == 0 || cols == 0 {
            return Err(Error::InvalidDimension("matrix dimensions must be positive".into()));
        }
        Ok(Self { rows, cols, data: vec![Complex64::ZERO; rows * cols] })
    }

    pub fn identity(n: usize) -> Result<Self> {
        let mut m = Self::zeros(n, n)?;
        for i in 0..n {
            m[(i, i)] = Complex64::ONE;
        }
        Ok(m)
    }

    /// Build from nested rows; all rows must have equal length.
    pub fn from_rows(rows: &[Vec<Complex64>]) -> Result<Self> {
        if rows.is_empty() || rows[0].is_empty() {
            return Err(Error::InvalidDimension("matrix dimensions must be positive".into()));
        }
        let cols = rows[0].len();
        if rows.iter().any(|r| r.len() != cols) {
            return Err(Error::InvalidDimension("ragged rows".into()));
        }
        Ok(Self {
            rows: rows.len(),
            cols,
            data: rows.iter().flatten().copied().collect(),
        })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    /// Conjugate transpose.
    pub fn adjoint(&self) -> Self {
        let mut out = Self::zeros(self.cols, self.rows).expect("nonzero dims");
        for r in 0..self.rows {
            for c in 0..self.cols {
                out[(c, r)] = self[(r, c)].conj();
            }
        }
        out
    }

    pub fn matmul(&self, other: &Self) -> Result<Self> {
        if self.cols != other.rows {
            return Err(Error::InvalidDimension(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let mut out = Self::zeros(self.rows, other.cols)?;
        for r in 0..self.rows {
            for k in 0..self.cols {
                let a = self[(r, k)];
                if a == Complex64::ZERO {
                    continue;
                }
                for c in 0..other.cols {
                    out[(r, c)] += a * other[(k, c)];
                }
            }
        }
        Ok(out)
    }

    pub fn mul_vec(&self, v: &ComplexVec) -> Result<ComplexVec> {
        if self.cols != v.dim() {
            return Err(Error::InvalidDimension(format!(
                "cannot apply {}x{} to vector of dimension {}",
                self.rows,
                self.cols,
                v.dim()
            )));
        }
        let mut out = ComplexVec::zeros(self.rows)?;
        for r in 0..self.rows {
            let row = &self.data[r * self.cols..(r + 1) * self.cols];
            out[r] = row
                .iter()
                .zip(v.entries())
                .map(|(a, x)| a * x)
                .sum();
        }
        Ok(out)
    }

    /// Kronecker product `self ⊗ other`.
    pub fn kron(&self, other: &Self) -> Self {
        let rows = self.rows * other.rows;
        let cols = self.cols * other.cols;
        let mut out = Self::zeros(rows, cols).expect("nonzero dims");
        for r1 in 0..self.rows {
            for c1 in 0..self.cols {
                let a = self[(r1, c1)];
                if a == Complex64::ZERO {
                    continue;
                }
                for r2 in 0..other.rows {
                    for c2 in 0..other.cols {
                        out[(r1 * other.rows + r2, c1 * other.cols + c2)] = a * other[(r2, c2)];
                    }
                }
            }
        }
        out
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.zip_with(other, |a, b| a + b)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.zip_with(other, |a, b| a - b)
    }

    pub fn scaled(&self, factor: Complex64) -> Self {
        Self {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|z| z * factor).collect(),
        }
    }

    fn zip_with(&self, other: &Self, f: impl Fn(Complex64, Complex64) -> Complex64) -> Result<Self> {
        if self.rows != other.rows || self.cols != other.cols {
            return Err(Error::InvalidDimension(format!(
                "shape mismatch: {}x{} vs {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        Ok(Self {
            rows: self.rows,
            cols: self.cols,
            data: self
                .data
                .iter()
                .zip(&other.data)
                .map(|(&a, &b)| f(a, b))
                .collect(),
        })
    }

    /// Largest entry modulus.
    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    /// Largest entry of `|M - M†|`; zero for an exactly Hermitian matrix.
    pub fn hermiticity_error(&self) -> f64 {
        let mut worst = 0.0f64;
        for r in 0..self.rows {
            for c in 0..self.cols.min(self.rows) {
                let d = (self[(r, c)] - self[(c, r)].conj()).norm();
                worst = worst.max(d);
            }
        }
        worst
    }

    /// Largest entry of `|U†U - I|`; zero for an exactly unitary matrix.
    pub fn unitarity_error(&self) -> f64 {
        if !self.is_square() {
            return f64::INFINITY;
        }
        let gram = self.adjoint().matmul(self).expect("square");
        let mut worst = 0.0f64;
        for r in 0..self.rows {
            for c in 0..self.cols {
                let expected = if r == c { Complex64::ONE } else { Complex64::ZERO };
                worst = worst.max((gram[(r, c)] - expected).norm());
            }
        }
        worst
    }

    /// Largest entry of `|self - other|`.
    pub fn max_abs_diff(&self, other: &Self) -> Result<f64> {
        Ok(self.sub(other)?.max_abs())
    }
}

impl Index<(usize, usize)> for ComplexMat {
    type Output = Complex64;
    fn index(&self, (r, c): (usize, usize)) -> &Complex64 {
        &self.data[r * self.cols + c]
    }
}

impl IndexMut<(usize, usize)> for ComplexMat {
    fn index_mut(&mut self, (r, c): (usize, usize)) -> &mut Complex64 {
        &mut self.data[r * self.cols + c]
    }
}

impl Mul for &ComplexMat {
    type Output = ComplexMat;
    fn mul(self, rhs: &ComplexMat) -> ComplexMat {
        self.matmul(rhs).expect("matrix dimension mismatch")
    }
}

impl Mul<&ComplexVec> for &ComplexMat {
    type Output = ComplexVec;
    fn mul(self, rhs: &ComplexVec) -> ComplexVec {
        self.mul_vec(rhs).expect("matrix-vector dimension mismatch")
    }
}

impl fmt::Display for ComplexMat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for r in 0..self.rows {
            for c in 0..self.cols {
                let z = self[(r, c)];
                write!(f, "{:+.4}{:+.4}i ", z.re, z.im)?;
            }
            writeln!(f)?;
        }
        Ok(())
    }
}

/// Adjacency matrix of the path graph on `n` vertices: `A[i][j] = 1`
/// iff `|i - j| = 1`.
pub fn path_adjacency(n: usize) -> Result<ComplexMat> {
    if n == 0 {
        return Err(Error::InvalidDimension("path graph needs at least one vertex".into()));
    }
    let mut a = ComplexMat::zeros(n, n)?;
    for i in 0..n.saturating_sub(1) {
        a[(i, i + 1)] = Complex64::ONE;
        a[(i + 1, i)] = Complex64::ONE;
    }
    Ok(a)
}

/// Matrix-vector product `M·v`.
pub fn apply(m: &ComplexMat, v: &ComplexVec) -> Result<ComplexVec> {
    m.mul_vec(v)
}

/// The unitary `exp(-i·M·t)` of a Hermitian `M`, computed through the
/// spectral decomposition `V diag(e^{-iλt}) V†`.
///
/// Requires `t > 0`; the evolution time is a fixed positive constant in
/// this scheme, and `t <= 0` almost always indicates a configuration bug.
pub fn expm_hermitian(m: &ComplexMat, t: f64) -> Result<ComplexMat> {
    if t <= 0.0 || !t.is_finite() {
        return Err(Error::InvalidParameter(format!(
            "evolution time must be positive and finite, got {t}"
        )));
    }
    let decomp = eig_hermitian(m)?;
    let n = m.rows();
    let v = decomp.eigenvectors();
    let phases: Vec<Complex64> = decomp
        .eigenvalues()
        .iter()
        .map(|&lambda| Complex64::from_polar(1.0, -lambda * t))
        .collect();
    // U = V diag(phases) V†
    let mut u = ComplexMat::zeros(n, n)?;
    for r in 0..n {
        for c in 0..n {
            let mut acc = Complex64::ZERO;
            for k in 0..n {
                acc += v[(r, k)] * phases[k] * v[(c, k)].conj();
            }
            u[(r, c)] = acc;
        }
    }
    Ok(u)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn path_adjacency_p2_is_pauli_x() {
        let a = path_adjacency(2).unwrap();
        assert_eq!(a[(0, 0)], Complex64::ZERO);
        assert_eq!(a[(0, 1)], Complex64::ONE);
        assert_eq!(a[(1, 0)], Complex64::ONE);
        assert_eq!(a[(1, 1)], Complex64::ZERO);
    }

    #[test]
    fn path_adjacency_single_vertex_has_no_edges() {
        let a = path_adjacency(1).unwrap();
        assert_eq!(a.rows(), 1);
        assert_eq!(a[(0, 0)], Complex64::ZERO);
    }

    #[test]
    fn path_adjacency_rejects_zero_vertices() {
        assert!(matches!(path_adjacency(0), Err(Error::InvalidDimension(_))));
    }

    #[test]
    fn path_spectrum_matches_closed_form() {
        // Eigenvalues of the path on n vertices are 2 cos(j π / (n+1)).
        let n = 15;
        let a = path_adjacency(n).unwrap();
        let d = eig_hermitian(&a).unwrap();
        let mut expected: Vec<f64> = (1..=n)
            .map(|j| 2.0 * (j as f64 * std::f64::consts::PI / (n as f64 + 1.0)).cos())
            .collect();
        expected.sort_by(|x, y| x.partial_cmp(y).unwrap());
        for (got, want) in d.eigenvalues().iter().zip(&expected) {
            assert!((got - want).abs() < 1e-12, "{got} vs {want}");
        }
    }

    #[test]
    fn apply_identity_is_noop() {
        let id = ComplexMat::identity(3).unwrap();
        let v = ComplexVec::from_entries(vec![c(1.0, 2.0), c(-0.5, 0.0), c(0.0, 1.0)]).unwrap();
        assert_eq!(apply(&id, &v).unwrap(), v);
    }

    #[test]
    fn apply_pauli_x_swaps_basis() {
        let x = path_adjacency(2).unwrap();
        let e0 = ComplexVec::basis(2, 0).unwrap();
        let got = apply(&x, &e0).unwrap();
        assert_eq!(got[0], Complex64::ZERO);
        assert_eq!(got[1], Complex64::ONE);
    }

    #[test]
    fn apply_rejects_dimension_mismatch() {
        let x = path_adjacency(2).unwrap();
        let v = ComplexVec::zeros(3).unwrap();
        assert!(matches!(apply(&x, &v), Err(Error::InvalidDimension(_))));
    }

    #[test]
    fn expm_pauli_x_closed_form() {
        // exp(-iXt) = [[cos t, -i sin t], [-i sin t, cos t]]
        let x = path_adjacency(2).unwrap();
        for &t in &[0.3, 1.0, 2.7] {
            let u = expm_hermitian(&x, t).unwrap();
            let want = ComplexMat::from_rows(&[
                vec![c(t.cos(), 0.0), c(0.0, -t.sin())],
                vec![c(0.0, -t.sin()), c(t.cos(), 0.0)],
            ])
            .unwrap();
            assert!(u.max_abs_diff(&want).unwrap() < 1e-12);
        }
    }

    #[test]
    fn expm_of_zero_matrix_is_identity() {
        let z = ComplexMat::zeros(4, 4).unwrap();
        let u = expm_hermitian(&z, 1.0).unwrap();
        assert!(u.max_abs_diff(&ComplexMat::identity(4).unwrap()).unwrap() < 1e-14);
    }

    #[test]
    fn expm_rejects_nonpositive_time() {
        let x = path_adjacency(2).unwrap();
        assert!(matches!(expm_hermitian(&x, 0.0), Err(Error::InvalidParameter(_))));
        assert!(matches!(expm_hermitian(&x, -1.0), Err(Error::InvalidParameter(_))));
    }

    #[test]
    fn expm_is_unitary() {
        for n in [2, 5, 9] {
            let a = path_adjacency(n).unwrap();
            let u = expm_hermitian(&a, 1.3).unwrap();
            assert!(u.unitarity_error() < tol::UNITARITY);
        }
    }

    #[test]
    fn expm_semigroup_property() {
        let a = path_adjacency(6).unwrap();
        let (t1, t2) = (0.7, 1.9);
        let u12 = expm_hermitian(&a, t1 + t2).unwrap();
        let product = expm_hermitian(&a, t1)
            .unwrap()
            .matmul(&expm_hermitian(&a, t2).unwrap())
            .unwrap();
        assert!(u12.max_abs_diff(&product).unwrap() < tol::SEMIGROUP);
    }

    #[test]
    fn kron_of_identities_is_identity() {
        let a = ComplexMat::identity(3).unwrap();
        let b = ComplexMat::identity(4).unwrap();
        assert!(a.kron(&b).max_abs_diff(&ComplexMat::identity(12).unwrap()).unwrap() == 0.0);
    }

    #[test]
    fn unitary_application_preserves_norm() {
        let a = path_adjacency(7).unwrap();
        let u = expm_hermitian(&a, 2.1).unwrap();
        let v = ComplexVec::from_entries(
            (0..7).map(|i| c(0.3 * i as f64 - 1.0, 0.1 * i as f64)).collect(),
        )
        .unwrap();
        let w = apply(&u, &v).unwrap();
        assert!((w.norm() - v.norm()).abs() < tol::NORM_PRESERVATION);
    }
}

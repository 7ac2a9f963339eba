//! Dense complex matrix kernel.
//!
//! Matrices are `nalgebra` dense matrices over `Complex64`. Inner products are
//! conjugate-linear in the first slot, so `inner(a, b) = Σ conj(a_i) b_i`.

use nalgebra::{DMatrix, DVector, SymmetricEigen};
use num_complex::Complex64;

use crate::error::{Error, Result};

pub type CMatrix = DMatrix<Complex64>;
pub type CVector = DVector<Complex64>;

pub const I: Complex64 = Complex64 { re: 0.0, im: 1.0 };

pub fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

/// Numerical tolerances used by the kernel.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Tolerances {
    /// Relative Hermiticity defect: `‖A − A*‖ ≤ hermitian · (1 + ‖A‖)`.
    pub hermitian: f64,
    /// `‖U*U − 𝟙‖` allowed for a unitary.
    pub unitary: f64,
    /// Eigenvalues closer than this to −1 have no principal logarithm here.
    pub branch_cut: f64,
    /// `‖P² − P‖` and `‖P − P*‖` allowed for a projection.
    pub projection: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances {
            hermitian: 1e-12,
            unitary: 1e-10,
            branch_cut: 1e-8,
            projection: 1e-10,
        }
    }
}

/// A square matrix validated to be Hermitian.
#[derive(Clone, Debug, PartialEq)]
pub struct HermitianMatrix(CMatrix);

impl HermitianMatrix {
    pub fn new(m: CMatrix) -> Result<Self> {
        Self::new_with(m, &Tolerances::default())
    }

    pub fn new_with(m: CMatrix, tol: &Tolerances) -> Result<Self> {
        check_square(&m)?;
        check_finite(&m)?;
        let defect = operator_norm(&(&m - m.adjoint()));
        if defect > tol.hermitian * (1.0 + operator_norm(&m)) {
            return Err(Error::NotHermitian { defect });
        }
        Ok(HermitianMatrix(m))
    }

    /// Symmetrizes `m` as `(m + m*)/2`; for results that are Hermitian by construction.
    pub fn symmetrized(m: &CMatrix) -> Self {
        HermitianMatrix((m + m.adjoint()).scale(0.5))
    }

    pub fn zeros(d: usize) -> Self {
        HermitianMatrix(CMatrix::zeros(d, d))
    }

    pub fn dim(&self) -> usize {
        self.0.nrows()
    }

    pub fn as_matrix(&self) -> &CMatrix {
        &self.0
    }

    pub fn into_inner(self) -> CMatrix {
        self.0
    }

    pub fn norm(&self) -> f64 {
        operator_norm(&self.0)
    }

    pub fn spectrum(&self) -> HermitianSpectrum {
        let eig = SymmetricEigen::new(self.0.clone());
        HermitianSpectrum {
            values: eig.eigenvalues.iter().copied().collect(),
            vectors: eig.eigenvectors,
        }
    }
}

/// Eigendecomposition `A = Q diag(λ) Q*` of a Hermitian matrix.
///
/// Kept around so that a whole path `s ↦ e^{isA}` costs one eigensolve.
#[derive(Clone, Debug)]
pub struct HermitianSpectrum {
    pub values: Vec<f64>,
    pub vectors: CMatrix,
}

impl HermitianSpectrum {
    /// `e^{isA}`.
    pub fn exp_i(&self, s: f64) -> CMatrix {
        self.apply(|x| Complex64::from_polar(1.0, s * x))
    }

    pub fn apply(&self, f: impl Fn(f64) -> Complex64) -> CMatrix {
        let q = &self.vectors;
        let mut scaled = q.clone();
        for (j, &x) in self.values.iter().enumerate() {
            let fx = f(x);
            scaled.column_mut(j).iter_mut().for_each(|z| *z *= fx);
        }
        scaled * q.adjoint()
    }

    pub fn norm(&self) -> f64 {
        self.values.iter().fold(0.0, |m, x| m.max(x.abs()))
    }
}

pub fn identity(d: usize) -> CMatrix {
    CMatrix::identity(d, d)
}

/// `Σ conj(a_i) b_i`.
pub fn inner(a: &CVector, b: &CVector) -> Complex64 {
    a.dotc(b)
}

/// The rank-one operator `|a⟩⟨b|`, i.e. `x ↦ ⟨b, x⟩ a`.
pub fn ket_bra(a: &CVector, b: &CVector) -> CMatrix {
    a * b.adjoint()
}

pub fn kron(a: &CMatrix, b: &CMatrix) -> CMatrix {
    a.kronecker(b)
}

pub fn basis_vector(d: usize, i: usize) -> CVector {
    let mut v = CVector::zeros(d);
    v[i] = Complex64::new(1.0, 0.0);
    v
}

pub fn check_square(m: &CMatrix) -> Result<()> {
    if m.nrows() != m.ncols() || m.nrows() == 0 {
        return Err(Error::NotSquare {
            rows: m.nrows(),
            cols: m.ncols(),
        });
    }
    Ok(())
}

pub fn check_finite(m: &CMatrix) -> Result<()> {
    if m.iter().all(|z| z.re.is_finite() && z.im.is_finite()) {
        Ok(())
    } else {
        Err(Error::NonFinite)
    }
}

/// Largest singular value.
pub fn operator_norm(m: &CMatrix) -> f64 {
    if m.is_empty() {
        return 0.0;
    }
    m.clone().svd(false, false).singular_values.max()
}

/// `‖𝟙 − U‖`.
pub fn dist_from_identity(u: &CMatrix) -> f64 {
    operator_norm(&(identity(u.nrows()) - u))
}

/// `‖U*U − 𝟙‖`, or infinity for a non-square input.
pub fn unitarity_defect(u: &CMatrix) -> f64 {
    if u.nrows() != u.ncols() {
        return f64::INFINITY;
    }
    operator_norm(&(u.adjoint() * u - identity(u.nrows())))
}

pub fn check_unitary(u: &CMatrix, tol: &Tolerances) -> Result<()> {
    check_square(u)?;
    check_finite(u)?;
    let defect = unitarity_defect(u);
    if defect > tol.unitary {
        return Err(Error::NotUnitary { defect });
    }
    Ok(())
}

/// `max(‖P² − P‖, ‖P − P*‖)`.
pub fn projection_defect(p: &CMatrix) -> f64 {
    if p.nrows() != p.ncols() {
        return f64::INFINITY;
    }
    operator_norm(&(p * p - p)).max(operator_norm(&(p - p.adjoint())))
}

/// `e^{iA}`.
pub fn unitary_exp(a: &HermitianMatrix) -> CMatrix {
    a.spectrum().exp_i(1.0)
}

/// Eigenvalues and an eigenbasis of a unitary, `U = Q diag(λ) Q*`.
///
/// Diagonalizes `H₁ + c·H₂` where `H₁ = (U+U*)/2` and `H₂ = (U−U*)/2i` commute.
/// If the resulting basis fails to diagonalize `U` (two distinct eigenvalues
/// collide under the combination) it falls back to a complex Schur form.
pub fn unitary_eigen(u: &CMatrix, tol: &Tolerances) -> Result<(Vec<Complex64>, CMatrix)> {
    check_unitary(u, tol)?;
    let d = u.nrows();
    let ua = u.adjoint();
    let h1 = (u + &ua).scale(0.5);
    let h2 = (u - &ua) * Complex64::new(0.0, -0.5);
    const MIX: f64 = 0.618_033_988_749_894_8;
    let m = HermitianMatrix::symmetrized(&(h1 + h2 * Complex64::new(MIX, 0.0)));
    let q = m.spectrum().vectors;
    let dmat = q.adjoint() * u * &q;
    let mut off = 0.0f64;
    for i in 0..d {
        for j in 0..d {
            if i != j {
                off = off.max(dmat[(i, j)].norm());
            }
        }
    }
    if off <= 1e-12 {
        let vals = (0..d).map(|i| dmat[(i, i)] / dmat[(i, i)].norm()).collect();
        return Ok((vals, q));
    }
    let (q, t) = nalgebra::linalg::Schur::new(u.clone()).unpack();
    let vals = (0..d).map(|i| t[(i, i)] / t[(i, i)].norm()).collect();
    Ok((vals, q))
}

/// `A = −i Log U` with eigenvalue phases in (−π, π).
pub fn principal_log_unitary(u: &CMatrix) -> Result<HermitianMatrix> {
    principal_log_unitary_with(u, &Tolerances::default())
}

pub fn principal_log_unitary_with(u: &CMatrix, tol: &Tolerances) -> Result<HermitianMatrix> {
    let (vals, q) = unitary_eigen(u, tol)?;
    let mut phases = Vec::with_capacity(vals.len());
    for lam in &vals {
        let distance = (lam + 1.0).norm();
        if distance <= tol.branch_cut {
            return Err(Error::BranchCut {
                distance,
                radius: tol.branch_cut,
            });
        }
        phases.push(lam.arg());
    }
    let spec = HermitianSpectrum {
        values: phases,
        vectors: q,
    };
    Ok(HermitianMatrix::symmetrized(&spec.apply(|x| Complex64::new(x, 0.0))))
}

/// Spectrum of `A` for a matrix already known to be a principal logarithm.
pub fn log_spectrum(u: &CMatrix) -> Result<HermitianSpectrum> {
    Ok(principal_log_unitary(u)?.spectrum())
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn diag(entries: &[Complex64]) -> CMatrix {
        CMatrix::from_diagonal(&CVector::from_column_slice(entries))
    }

    #[test]
    fn exp_of_zero_is_identity() {
        let u = unitary_exp(&HermitianMatrix::zeros(3));
        assert!((u - identity(3)).camax() < 1e-15);
    }

    #[test]
    fn exp_and_log_of_diagonal() {
        let a = HermitianMatrix::new(diag(&[c(PI / 2.0, 0.0), c(0.0, 0.0)])).unwrap();
        let u = unitary_exp(&a);
        assert!((&u - diag(&[I, c(1.0, 0.0)])).camax() < 1e-14);
        let back = principal_log_unitary(&u).unwrap();
        assert!((back.as_matrix() - a.as_matrix()).camax() < 1e-14);
    }

    #[test]
    fn log_of_identity_is_zero() {
        let a = principal_log_unitary(&identity(4)).unwrap();
        assert!(a.as_matrix().camax() < 1e-15);
    }

    #[test]
    fn norm_of_diagonal() {
        assert!((operator_norm(&identity(5)) - 1.0).abs() < 1e-14);
        assert!((operator_norm(&diag(&[c(3.0, 0.0), c(0.0, -4.0)])) - 4.0).abs() < 1e-14);
    }

    #[test]
    fn branch_cut_is_reported() {
        let u = diag(&[c(-1.0, 0.0), c(1.0, 0.0)]);
        assert!(matches!(principal_log_unitary(&u), Err(Error::BranchCut { .. })));
    }

    #[test]
    fn rejects_non_hermitian_and_non_unitary() {
        let m = CMatrix::from_row_slice(2, 2, &[c(0.0, 0.0), c(1.0, 0.0), c(0.0, 0.0), c(0.0, 0.0)]);
        assert!(matches!(HermitianMatrix::new(m.clone()), Err(Error::NotHermitian { .. })));
        assert!(matches!(principal_log_unitary(&m), Err(Error::NotUnitary { .. })));
        let rect = CMatrix::zeros(2, 3);
        assert!(matches!(HermitianMatrix::new(rect), Err(Error::NotSquare { .. })));
    }

    #[test]
    fn degenerate_mix_falls_back_to_schur() {
        // phases 0.618.. ± 1 collide under the cos + MIX·sin combination
        let phi0 = 0.618_033_988_749_894_8f64.atan();
        let u = diag(&[Complex64::from_polar(1.0, phi0 + 1.0), Complex64::from_polar(1.0, phi0 - 1.0)]);
        let a = principal_log_unitary(&u).unwrap();
        assert!((unitary_exp(&a) - &u).camax() < 1e-12);
    }
}

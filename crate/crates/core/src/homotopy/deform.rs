use crate::error::{Error, Result};
use crate::geodesic::{geodesic_matrix, phase_extended_unitary, StateVector};
use crate::mats::{self, check_unitary, principal_log_unitary, CMatrix, Tolerances};
use crate::state::{CornerData, Projection};

use super::UnitaryPath;

/// `⟨Ψ, UΨ⟩` imaginary parts up to this size count as real in the Z condition.
const Z_IMAG_TOL: f64 = 1e-10;

fn check_shapes(u: &CMatrix, psi: &StateVector) -> Result<()> {
    check_unitary(u, &Tolerances::default())?;
    if u.nrows() != psi.dim() {
        return Err(Error::DimensionMismatch {
            expected: psi.dim(),
            got: u.nrows(),
        });
    }
    Ok(())
}

/// `𝒱(U,s) = 𝒰(Ψ, UΨ)·e^{i(1−s)A}` with `A = −i Log(𝒰(Ψ,UΨ)* U)`.
///
/// Requires the Z condition: `⟨Ψ, UΨ⟩ > 0` and `‖𝟙 − U‖ < 1`. Every sample maps Ψ
/// to `UΨ` and stays within `3‖𝟙 − U‖` of the identity.
pub fn deform_to_geodesic(u: &CMatrix, psi: &StateVector, grid: &[f64]) -> Result<UnitaryPath> {
    check_shapes(u, psi)?;
    let target = psi.apply(u)?;
    let z = psi.inner(&target);
    if z.re <= 1e-10 || z.im.abs() > Z_IMAG_TOL {
        return Err(Error::Precondition {
            name: "<psi, U psi> > 0",
            detail: format!("overlap {:.3e}{:+.3e}i", z.re, z.im),
        });
    }
    let dist = mats::dist_from_identity(u);
    if dist >= 1.0 {
        return Err(Error::Precondition {
            name: "norm(1 - U) < 1",
            detail: format!("distance {dist:.6}"),
        });
    }
    let g = geodesic_matrix(psi, &target);
    let a = principal_log_unitary(&(g.adjoint() * u))?.spectrum();
    UnitaryPath::from_fn(grid, |s| &g * a.exp_i(1.0 - s))
}

/// `β = 1/√(γ‖PΨ‖) + √(2/(2γ‖PΨ‖ − δ²))`.
pub fn corner_beta(gamma: f64, delta: f64, p_psi_norm: f64) -> f64 {
    1.0 / (gamma * p_psi_norm).sqrt() + (2.0 / (2.0 * gamma * p_psi_norm - delta * delta)).sqrt()
}

/// `𝒲(U,s) = e^{isA}U`, turning `PUΨ` onto the ray of `PΨ` inside the corner of P.
pub fn corner_align(u: &CMatrix, p: &Projection, psi: &StateVector, gamma: f64, delta: f64, grid: &[f64]) -> Result<UnitaryPath> {
    corner_align_in(&CornerData::new(p), u, psi, gamma, delta, grid)
}

/// [`corner_align`] with a precomputed corner.
pub fn corner_align_in(
    corner: &CornerData,
    u: &CMatrix,
    psi: &StateVector,
    gamma: f64,
    delta: f64,
    grid: &[f64],
) -> Result<UnitaryPath> {
    check_shapes(u, psi)?;
    let p = corner.projection().matrix();
    if p.nrows() != psi.dim() {
        return Err(Error::DimensionMismatch {
            expected: psi.dim(),
            got: p.nrows(),
        });
    }
    let p_psi = corner.compress_vector(psi.coords());
    let p_psi_norm = p_psi.norm();
    if p_psi_norm <= 1e-10 {
        return Err(Error::Precondition {
            name: "P psi != 0",
            detail: format!("norm(P psi) = {p_psi_norm:.3e}"),
        });
    }
    let pu_psi = corner.compress_vector(&(u * psi.coords()));
    let pu_norm = pu_psi.norm();
    if pu_norm < gamma {
        return Err(Error::Precondition {
            name: "norm(P U psi) >= gamma",
            detail: format!("{pu_norm:.6e} < {gamma:.6e}"),
        });
    }
    let dist = mats::dist_from_identity(u);
    if dist >= delta {
        return Err(Error::Precondition {
            name: "norm(1 - U) < delta",
            detail: format!("{dist:.6e} >= {delta:.6e}"),
        });
    }
    if delta * delta >= 2.0 * gamma * p_psi_norm {
        return Err(Error::Precondition {
            name: "delta^2 < 2 gamma norm(P psi)",
            detail: format!("delta {delta:.3e}, gamma {gamma:.3e}, norm(P psi) {p_psi_norm:.3e}"),
        });
    }
    let beta = corner_beta(gamma, delta, p_psi_norm);
    if beta * delta >= 2.0 {
        return Err(Error::Precondition {
            name: "beta delta < 2",
            detail: format!("beta {beta:.6}, delta {delta:.3e}"),
        });
    }
    let omega_u = StateVector::normalized(pu_psi)?;
    let omega_1 = StateVector::normalized(p_psi)?;
    let turn = phase_extended_unitary(&omega_u, &omega_1)?;
    let a = principal_log_unitary(&turn)?.spectrum();
    let complement = corner.projection().complement();
    UnitaryPath::from_fn(grid, |s| (corner.expand(&a.exp_i(s)) + complement.matrix()) * u)
}

/// `s ↦ e^{i(1−s) Log U}`, from U to 𝟙.
pub fn log_contraction(u: &CMatrix, grid: &[f64]) -> Result<UnitaryPath> {
    let a = principal_log_unitary(u)?.spectrum();
    UnitaryPath::from_fn(grid, |s| a.exp_i(1.0 - s))
}

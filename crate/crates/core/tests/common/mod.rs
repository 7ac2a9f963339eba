#![allow(dead_code)]

use pure_homotopy::geodesic::StateVector;
use pure_homotopy::mats::{self, CMatrix, CVector};

/// `e^{M}` by scaling and squaring a truncated Taylor series.
pub fn taylor_exp(m: &CMatrix) -> CMatrix {
    let norm = m.norm();
    let squarings = if norm > 0.5 { (norm / 0.5).log2().ceil() as u32 } else { 0 };
    let a = m.unscale(2f64.powi(squarings as i32));
    let d = m.nrows();
    let mut term = mats::identity(d);
    let mut sum = mats::identity(d);
    for k in 1..30 {
        term = &term * &a / mats::c(k as f64, 0.0);
        sum += &term;
    }
    for _ in 0..squarings {
        sum = &sum * &sum;
    }
    sum
}

/// The rotation by `θ = arccos⟨Ψ,Ω⟩` in the plane of Ψ and the Gram–Schmidt partner of Ω.
pub fn plane_rotation(psi: &StateVector, omega: &StateVector) -> CMatrix {
    let p = psi.coords();
    let c = p.dotc(omega.coords()).re;
    let d = p.len();
    let rest = omega.coords() - p * mats::c(c, 0.0);
    if rest.norm() < 1e-14 {
        return mats::identity(d);
    }
    let phi = rest.unscale(rest.norm());
    let s = (1.0 - c * c).max(0.0).sqrt();
    let plane = mats::ket_bra(p, p) + mats::ket_bra(&phi, &phi);
    mats::identity(d) - &plane + plane * mats::c(c, 0.0) + (mats::ket_bra(&phi, p) - mats::ket_bra(p, &phi)) * mats::c(s, 0.0)
}

/// Trace norm of `|a⟩⟨a| − |b⟩⟨b|` from the 2×2 Gram matrix of the pair.
pub fn rank_two_trace_norm(a: &CVector, b: &CVector) -> f64 {
    // eigenvalues of the difference are ±√(1 − |⟨a,b⟩|²)
    let g = a.dotc(b).norm_sqr();
    2.0 * (1.0 - g).max(0.0).sqrt()
}

pub fn close(a: &CMatrix, b: &CMatrix) -> f64 {
    mats::operator_norm(&(a - b))
}

//! Two-vector geodesics on the unit sphere and the unitaries that realize them.
//!
//! For unit vectors Ψ, Ω with real overlap `⟨Ψ,Ω⟩ ∈ [0, 1]` the geodesic unitary
//! is the rotation in the plane span{Ψ, Ω} taking Ψ to Ω and fixing the
//! orthogonal complement. Its distance to 𝟙 equals `‖Ψ − Ω‖`.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::mats::{self, ket_bra, CMatrix, CVector, HermitianMatrix, I};

/// Tolerance on `|‖v‖ − 1|` for a [`StateVector`].
pub const UNIT_TOL: f64 = 1e-12;
/// `|Im⟨Ψ,Ω⟩|` below this counts as a real overlap.
pub const REAL_OVERLAP_TOL: f64 = 1e-12;
/// Overlap magnitude below which the phase extension is undefined.
pub const ORTHOGONAL_TOL: f64 = 1e-10;
/// Components this small are treated as zero when forming companions.
const COMPANION_CUTOFF: f64 = 1e-15;

/// Unit vector in `ℂ^d`.
#[derive(Clone, Debug, PartialEq)]
pub struct StateVector {
    coords: CVector,
}

impl StateVector {
    pub fn new(coords: CVector) -> Result<Self> {
        if coords.is_empty() {
            return Err(Error::DimensionMismatch { expected: 1, got: 0 });
        }
        if !coords.iter().all(|z| z.re.is_finite() && z.im.is_finite()) {
            return Err(Error::NonFinite);
        }
        let norm = coords.norm();
        if (norm - 1.0).abs() > UNIT_TOL {
            return Err(Error::NotUnit { norm });
        }
        Ok(StateVector { coords })
    }

    /// Rescales a nonzero vector to unit length.
    pub fn normalized(v: CVector) -> Result<Self> {
        let norm = v.norm();
        if !norm.is_finite() {
            return Err(Error::NonFinite);
        }
        if norm <= 0.0 || v.is_empty() {
            return Err(Error::ZeroVector);
        }
        Ok(StateVector { coords: v.unscale(norm) })
    }

    pub fn from_slice(entries: &[Complex64]) -> Result<Self> {
        Self::normalized(CVector::from_column_slice(entries))
    }

    pub fn basis(d: usize, i: usize) -> Self {
        StateVector {
            coords: mats::basis_vector(d, i),
        }
    }

    pub fn dim(&self) -> usize {
        self.coords.len()
    }

    pub fn coords(&self) -> &CVector {
        &self.coords
    }

    pub fn into_coords(self) -> CVector {
        self.coords
    }

    /// `⟨self, other⟩`.
    pub fn inner(&self, other: &StateVector) -> Complex64 {
        self.coords.dotc(&other.coords)
    }

    /// `UΨ`, renormalized to absorb rounding.
    pub fn apply(&self, u: &CMatrix) -> Result<StateVector> {
        if u.ncols() != self.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                got: u.ncols(),
            });
        }
        StateVector::normalized(u * &self.coords)
    }

    /// Same ray, with the first coordinate of magnitude > 1e−12 made positive real.
    pub fn canonical(&self) -> StateVector {
        match self.coords.iter().find(|z| z.norm() > 1e-12) {
            Some(z) => {
                let phase = z.conj() / z.norm();
                StateVector {
                    coords: self.coords.map(|w| w * phase),
                }
            }
            None => self.clone(),
        }
    }

    /// Distance between the canonical representatives.
    pub fn ray_distance(&self, other: &StateVector) -> f64 {
        (self.canonical().coords - other.canonical().coords).norm()
    }

    pub fn distance(&self, other: &StateVector) -> f64 {
        (&self.coords - &other.coords).norm()
    }
}

/// Geodesic data for an ordered pair (Ψ, Ω).
#[derive(Clone, Debug)]
pub struct GeodesicData {
    /// `arccos Re⟨Ψ,Ω⟩`.
    pub theta: f64,
    /// Unit vector of `Ω − ⟨Ψ,Ω⟩Ψ`, absent when Ω is a multiple of Ψ.
    pub companion: Option<StateVector>,
    /// `T` with `e^{iT} = V` and `‖T‖ = θ`.
    pub generator: HermitianMatrix,
    /// The ambient unitary `V`.
    pub unitary: CMatrix,
}

fn check_dims(psi: &StateVector, omega: &StateVector) -> Result<()> {
    if psi.dim() != omega.dim() {
        return Err(Error::DimensionMismatch {
            expected: psi.dim(),
            got: omega.dim(),
        });
    }
    Ok(())
}

/// `θ(Ψ,Ω) = arccos Re⟨Ψ,Ω⟩ ∈ [0, π]`.
pub fn angle(psi: &StateVector, omega: &StateVector) -> Result<f64> {
    check_dims(psi, omega)?;
    Ok(psi.inner(omega).re.clamp(-1.0, 1.0).acos())
}

/// Unit vector along `Ω − ⟨Ψ,Ω⟩Ψ`.
pub fn companion(psi: &StateVector, omega: &StateVector) -> Option<StateVector> {
    let w = raw_companion(psi.coords(), omega.coords());
    if w.norm() <= COMPANION_CUTOFF {
        None
    } else {
        StateVector::normalized(w).ok()
    }
}

fn raw_companion(psi: &CVector, omega: &CVector) -> CVector {
    omega - psi * psi.dotc(omega)
}

/// `⟨Ω,Ψ⟩Q + |Ω⟩⟨Ψ| − |Ψ⟩⟨Ω| + (𝟙 − Q)` with Q the projection onto span{Ψ, Ω}.
///
/// Unitary and maps Ψ to Ω for every overlap; well conditioned near Y₊. This is
/// the unchecked core of [`geodesic_unitary`].
pub fn geodesic_matrix(psi: &StateVector, omega: &StateVector) -> CMatrix {
    let (p, o) = (psi.coords(), omega.coords());
    let d = p.len();
    let cbar = o.dotc(p);
    let w = raw_companion(p, o);
    let wn = w.norm();
    let mut q = ket_bra(p, p);
    if wn > COMPANION_CUTOFF {
        q += ket_bra(&w, &w).unscale(wn * wn);
    }
    let mut v = mats::identity(d) + q * (cbar - 1.0);
    v += ket_bra(o, p);
    v -= ket_bra(p, o);
    v
}

/// `T = iθ(|Ψ⟩⟨Φ| − |Φ⟩⟨Ψ|)` for a real overlap, computed without dividing by a tiny `‖w‖`.
fn generator_matrix(psi: &CVector, omega: &CVector, theta: f64) -> CMatrix {
    let d = psi.len();
    let w = raw_companion(psi, omega);
    let wn = w.norm();
    if wn <= COMPANION_CUTOFF || theta == 0.0 {
        return CMatrix::zeros(d, d);
    }
    let k = I * (theta / wn);
    (ket_bra(psi, &w) - ket_bra(&w, psi)) * k
}

/// The geodesic unitary for a pair in Y₊.
///
/// Accepts overlaps with real part in [0, 1] and `|Im| ≤ 1e−12`. Overlap 1 gives
/// `V = 𝟙`; overlap 0 gives the quarter turn.
pub fn geodesic_unitary(psi: &StateVector, omega: &StateVector) -> Result<GeodesicData> {
    geodesic_unitary_with(psi, omega, REAL_OVERLAP_TOL)
}

pub fn geodesic_unitary_with(psi: &StateVector, omega: &StateVector, imag_tol: f64) -> Result<GeodesicData> {
    check_dims(psi, omega)?;
    let z = psi.inner(omega);
    if z.im.abs() > imag_tol || z.re < 0.0 {
        return Err(Error::OutsideYPlus { re: z.re, im: z.im });
    }
    // atan2 of (sin θ, cos θ) keeps full accuracy near θ = 0, where acos loses half the digits
    let theta = raw_companion(psi.coords(), omega.coords()).norm().atan2(z.re);
    let unitary = geodesic_matrix(psi, omega);
    let generator = HermitianMatrix::symmetrized(&generator_matrix(psi.coords(), omega.coords(), theta));
    Ok(GeodesicData {
        theta,
        companion: companion(psi, omega),
        generator,
        unitary,
    })
}

/// Extension to any nonzero overlap: `(c/|c|)·V(Ψ, (|c|/c)Ω)` with `c = ⟨Ψ,Ω⟩`.
pub fn phase_extended_unitary(psi: &StateVector, omega: &StateVector) -> Result<CMatrix> {
    check_dims(psi, omega)?;
    let z = psi.inner(omega);
    let magnitude = z.norm();
    if magnitude <= ORTHOGONAL_TOL {
        return Err(Error::Orthogonal {
            magnitude,
            threshold: ORTHOGONAL_TOL,
        });
    }
    let phase = z / magnitude;
    let rotated = StateVector {
        coords: omega.coords().map(|w| w * phase.conj()),
    };
    Ok(geodesic_matrix(psi, &rotated) * phase)
}

/// `(‖Ψ/‖Ψ‖ − Ω/‖Ω‖‖², ‖Ψ − Ω‖²/(‖Ψ‖‖Ω‖))`; the first never exceeds the second.
pub fn normalization_gap(psi: &CVector, omega: &CVector) -> Result<(f64, f64)> {
    if psi.len() != omega.len() {
        return Err(Error::DimensionMismatch {
            expected: psi.len(),
            got: omega.len(),
        });
    }
    let (a, b) = (psi.norm(), omega.norm());
    if a == 0.0 || b == 0.0 {
        return Err(Error::ZeroVector);
    }
    let lhs = (psi.unscale(a) - omega.unscale(b)).norm_squared();
    let rhs = (psi - omega).norm_squared() / (a * b);
    Ok((lhs, rhs))
}

/// Norm distance of the vector states: `2√(1 − |⟨Ψ,Ω⟩|²)`.
pub fn pure_state_norm_distance(psi: &StateVector, omega: &StateVector) -> Result<f64> {
    check_dims(psi, omega)?;
    let f = psi.inner(omega).norm_sqr().min(1.0);
    Ok(2.0 * (1.0 - f).sqrt())
}

use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::geodesic::{phase_extended_unitary, StateVector};
use crate::mats::{self, CMatrix, CVector};
use crate::sample;

use super::UnitaryPath;

/// Minimum consecutive overlap `|⟨y_k, y_{k+1}⟩|` for lifting.
pub const LIFT_OVERLAP: f64 = 0.1;

#[derive(Clone, Debug)]
pub struct PaddedSample {
    pub vector: StateVector,
    /// `‖t·a + (1−t)·b‖` before normalization.
    pub denominator: f64,
}

/// One sample of the two-stage contraction of the unit sphere of `ℂ^d` inside `ℂ^{2d}`.
///
/// With `ι` the inclusion into the first `d` coordinates and `S` the shift onto the
/// last `d`, stage 1 runs `ι(Ω) → Sι(Ω)` and stage 2 runs `Sι(Ω) → e₁`. Stage 1
/// takes `Ω ∈ ℂ^d`; stage 2 takes a stage-1 endpoint in `ℂ^{2d}`.
pub fn padded_sphere_step(omega: &StateVector, stage: u8, t: f64) -> Result<PaddedSample> {
    if !(0.0..=1.0).contains(&t) {
        return Err(Error::Range(format!("t = {t} outside [0, 1]")));
    }
    let (from, to) = match stage {
        1 => {
            let d = omega.dim();
            let mut a = CVector::zeros(2 * d);
            let mut b = CVector::zeros(2 * d);
            a.rows_mut(0, d).copy_from(omega.coords());
            b.rows_mut(d, d).copy_from(omega.coords());
            (a, b)
        }
        2 => {
            let n = omega.dim();
            if !n.is_multiple_of(2) {
                return Err(Error::DimensionMismatch { expected: n + 1, got: n });
            }
            let lead = omega.coords().rows(0, n / 2).norm();
            if lead > 1e-12 {
                return Err(Error::Precondition {
                    name: "stage 2 input is a stage-1 endpoint",
                    detail: format!("first half has norm {lead:.3e}"),
                });
            }
            (omega.coords().clone(), mats::basis_vector(n, 0))
        }
        s => return Err(Error::Range(format!("stage {s} is not 1 or 2"))),
    };
    let v = to * Complex64::new(t, 0.0) + from * Complex64::new(1.0 - t, 0.0);
    let denominator = v.norm();
    Ok(PaddedSample {
        vector: StateVector::normalized(v)?,
        denominator,
    })
}

pub fn padded_sphere_contraction(omega: &StateVector, stage: u8, t: f64) -> Result<StateVector> {
    Ok(padded_sphere_step(omega, stage, t)?.vector)
}

/// Lifts `y_0, …, y_K` to unitaries `V_k` with `V_k·base = y_k`.
///
/// `V_{k+1} = 𝒰(y_k, y_{k+1})·V_k`, with `𝒰` the phase-extended geodesic unitary.
/// Samples are placed at uniform times.
pub fn lift_path(base_path: &[StateVector], start_unitary: &CMatrix, base_point: &StateVector) -> Result<UnitaryPath> {
    let lifted = lift_sequence(base_path, start_unitary, base_point)?;
    let times = super::uniform_grid(lifted.len());
    if lifted.len() == 1 {
        return UnitaryPath::new(times, vec![lifted[0].clone(), lifted[0].clone()]);
    }
    UnitaryPath::new(times, lifted)
}

fn lift_sequence(base_path: &[StateVector], start_unitary: &CMatrix, base_point: &StateVector) -> Result<Vec<CMatrix>> {
    let first = base_path.first().ok_or_else(|| Error::Range("empty base path".into()))?;
    if start_unitary.nrows() != base_point.dim() || first.dim() != base_point.dim() {
        return Err(Error::DimensionMismatch {
            expected: base_point.dim(),
            got: first.dim(),
        });
    }
    let miss = (start_unitary * base_point.coords() - first.coords()).norm();
    if miss > 1e-9 {
        return Err(Error::Precondition {
            name: "start_unitary base_point = base_path[0]",
            detail: format!("miss {miss:.3e}"),
        });
    }
    let mut out = Vec::with_capacity(base_path.len());
    out.push(start_unitary.clone());
    for (k, w) in base_path.windows(2).enumerate() {
        let overlap = w[0].inner(&w[1]).norm();
        if overlap <= LIFT_OVERLAP {
            return Err(Error::SubdivisionNeeded { index: k, overlap });
        }
        let step = phase_extended_unitary(&w[0], &w[1])?;
        let next = step * out.last().unwrap();
        out.push(next);
    }
    Ok(out)
}

/// Lifts a continuous curve sampled at `times`, halving each interval until
/// consecutive overlaps exceed [`LIFT_OVERLAP`]. Returns the lift at `times` only.
pub fn lift_curve(
    curve: impl Fn(f64) -> StateVector,
    times: &[f64],
    start_unitary: &CMatrix,
    base_point: &StateVector,
) -> Result<Vec<CMatrix>> {
    let mut fine_t = vec![times[0]];
    let mut fine_y = vec![curve(times[0])];
    let mut keep = vec![0usize];
    for w in times.windows(2) {
        let mut pieces = 1usize;
        loop {
            let ts: Vec<f64> = (1..=pieces)
                .map(|j| w[0] + (w[1] - w[0]) * j as f64 / pieces as f64)
                .collect();
            let ys: Vec<StateVector> = ts.iter().map(|&t| curve(t)).collect();
            let mut prev = fine_y.last().unwrap();
            let ok = ys.iter().all(|y| {
                let good = prev.inner(y).norm() > LIFT_OVERLAP;
                prev = y;
                good
            });
            if ok || pieces >= 1 << 20 {
                fine_t.extend(ts);
                fine_y.extend(ys);
                break;
            }
            pieces *= 2;
        }
        keep.push(fine_t.len() - 1);
    }
    let lifted = lift_sequence(&fine_y, start_unitary, base_point)?;
    Ok(keep.into_iter().map(|k| lifted[k].clone()).collect())
}

/// Stereographic projection of the unit sphere of `ℂ^r ≅ ℝ^{2r}` from a pole N.
///
/// Chart: `x ↦ (x − sN)/(1 − s)` with `s = Re⟨N, x⟩`, defined away from N.
#[derive(Clone, Debug)]
pub struct StereographicChart {
    pole: CVector,
}

impl StereographicChart {
    pub fn new(pole: &StateVector) -> Self {
        StereographicChart {
            pole: pole.coords().clone(),
        }
    }

    pub fn pole(&self) -> &CVector {
        &self.pole
    }

    pub fn project(&self, x: &CVector) -> CVector {
        let s = self.pole.dotc(x).re;
        (x - &self.pole * Complex64::new(s, 0.0)).unscale(1.0 - s)
    }

    pub fn unproject(&self, y: &CVector) -> CVector {
        let n2 = y.norm_squared();
        (y * Complex64::new(2.0, 0.0) + &self.pole * Complex64::new(n2 - 1.0, 0.0)).unscale(n2 + 1.0)
    }

    /// `t ↦ σ⁻¹((1−t)σ(a) + tσ(b))`.
    pub fn segment(&self, a: &CVector, b: &CVector, t: f64) -> CVector {
        let (ya, yb) = (self.project(a), self.project(b));
        self.unproject(&(ya * Complex64::new(1.0 - t, 0.0) + yb * Complex64::new(t, 0.0)))
    }
}

/// A unit vector as far as possible from every point in `avoid`.
///
/// Candidates are the antipode of the mean, ± basis vectors and their `i`
/// multiples, and seeded random directions. Returns the pole and its clearance
/// `min ‖N − x‖`.
pub fn choose_pole(avoid: &[CVector], r: usize, seed: u64) -> (StateVector, f64) {
    let mut candidates: Vec<CVector> = Vec::new();
    let mean = avoid.iter().fold(CVector::zeros(r), |acc, x| acc + x);
    if mean.norm() > 1e-9 {
        candidates.push(-mean.unscale(mean.norm()));
    }
    for j in 0..r {
        for ph in [Complex64::new(1.0, 0.0), Complex64::new(-1.0, 0.0), mats::I, -mats::I] {
            candidates.push(mats::basis_vector(r, j) * ph);
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..64 {
        candidates.push(sample::state(&mut rng, r).into_coords());
    }
    let clearance = |n: &CVector| avoid.iter().map(|x| (n - x).norm()).fold(f64::INFINITY, f64::min);
    let mut best = (candidates[0].clone(), clearance(&candidates[0]));
    for cand in &candidates[1..] {
        let c = clearance(cand);
        if c > best.1 {
            best = (cand.clone(), c);
        }
    }
    (StateVector::normalized(best.0).expect("unit candidate"), best.1)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mats::c;

    #[test]
    fn padded_endpoints() {
        let om = StateVector::from_slice(&[c(0.6, 0.0), c(0.0, 0.8)]).unwrap();
        let s0 = padded_sphere_contraction(&om, 1, 0.0).unwrap();
        assert!((s0.coords().rows(0, 2) - om.coords()).norm() < 1e-15);
        let s1 = padded_sphere_contraction(&om, 1, 1.0).unwrap();
        let e = padded_sphere_contraction(&s1, 2, 1.0).unwrap();
        assert!((e.coords() - mats::basis_vector(4, 0)).norm() < 1e-15);
        assert!(padded_sphere_contraction(&s0, 2, 0.5).is_err());
        assert!(padded_sphere_contraction(&om, 3, 0.5).is_err());
    }

    #[test]
    fn constant_path_lifts_to_constant() {
        let y = StateVector::basis(3, 0);
        let path = lift_path(&[y.clone(), y.clone(), y.clone()], &mats::identity(3), &y).unwrap();
        assert!(path.max_step() < 1e-15);
    }

    #[test]
    fn orthogonal_step_needs_subdivision() {
        let e1 = StateVector::basis(3, 0);
        let e2 = StateVector::basis(3, 1);
        let err = lift_path(&[e1.clone(), e1.clone(), e2], &mats::identity(3), &e1).unwrap_err();
        assert!(matches!(err, Error::SubdivisionNeeded { index: 1, .. }));
    }

    #[test]
    fn chart_round_trip() {
        let pole = StateVector::basis(2, 0);
        let chart = StereographicChart::new(&pole);
        let x = StateVector::from_slice(&[c(0.2, 0.3), c(-0.5, 0.7)]).unwrap();
        let back = chart.unproject(&chart.project(x.coords()));
        assert!((back - x.coords()).norm() < 1e-14);
        let mid = chart.segment(x.coords(), &mats::basis_vector(2, 1), 0.4);
        assert!((mid.norm() - 1.0).abs() < 1e-14);
    }
}

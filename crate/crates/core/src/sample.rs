//! Seeded random instances for experiments, examples and tests.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::complex::SampledComplex;
use crate::geodesic::StateVector;
use crate::mats::{self, CMatrix, CVector, HermitianMatrix};
use crate::state::{AlgebraShape, Projection};

pub type SeededRng = ChaCha8Rng;

pub fn rng(seed: u64) -> SeededRng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn gaussian(rng: &mut impl Rng) -> Complex64 {
    let re: f64 = rng.sample(StandardNormal);
    let im: f64 = rng.sample(StandardNormal);
    Complex64::new(re, im)
}

pub fn gaussian_vector(rng: &mut impl Rng, d: usize) -> CVector {
    CVector::from_fn(d, |_, _| gaussian(rng))
}

pub fn gaussian_matrix(rng: &mut impl Rng, rows: usize, cols: usize) -> CMatrix {
    CMatrix::from_fn(rows, cols, |_, _| gaussian(rng))
}

/// Uniform on the unit sphere of `ℂ^d`.
pub fn state(rng: &mut impl Rng, d: usize) -> StateVector {
    loop {
        if let Ok(v) = StateVector::normalized(gaussian_vector(rng, d)) {
            return v;
        }
    }
}

/// A pair with `⟨Ψ,Ω⟩ > 0`.
pub fn y_plus_pair(rng: &mut impl Rng, d: usize) -> (StateVector, StateVector) {
    let psi = state(rng, d);
    loop {
        let om = state(rng, d);
        let z = psi.inner(&om);
        if z.norm() > 1e-3 {
            let rot = om.coords().map(|w| w * (z.conj() / z.norm()));
            return (psi, StateVector::normalized(rot).expect("unit"));
        }
    }
}

/// Hermitian with operator norm exactly `norm`.
pub fn hermitian_with_norm(rng: &mut impl Rng, d: usize, norm: f64) -> HermitianMatrix {
    let g = gaussian_matrix(rng, d, d);
    let h = HermitianMatrix::symmetrized(&g);
    let n = h.norm();
    HermitianMatrix::symmetrized(&h.as_matrix().unscale(n / norm))
}

/// Haar-distributed unitary (QR of a Ginibre matrix with phase correction).
pub fn unitary(rng: &mut impl Rng, d: usize) -> CMatrix {
    let qr = gaussian_matrix(rng, d, d).qr();
    let (mut q, r) = (qr.q(), qr.r());
    for j in 0..d {
        let z = r[(j, j)];
        let ph = if z.norm() > 0.0 {
            z / z.norm()
        } else {
            Complex64::new(1.0, 0.0)
        };
        q.column_mut(j).iter_mut().for_each(|w| *w *= ph);
    }
    q
}

/// `e^{iH}` with `‖𝟙 − e^{iH}‖ = dist` exactly (`dist ≤ 2`).
pub fn unitary_at_distance(rng: &mut impl Rng, d: usize, dist: f64) -> CMatrix {
    let theta = 2.0 * (dist / 2.0).clamp(0.0, 1.0).asin();
    mats::unitary_exp(&hermitian_with_norm(rng, d, theta))
}

/// Projection onto the span of `r` random vectors.
pub fn projection(rng: &mut impl Rng, d: usize, r: usize) -> Projection {
    let vs: Vec<CVector> = (0..r).map(|_| gaussian_vector(rng, d)).collect();
    Projection::onto_span(AlgebraShape::single(d), &vs).expect("random span is a projection")
}

/// Uniform in `[lo, hi)`.
pub fn uniform(rng: &mut impl Rng, lo: f64, hi: f64) -> f64 {
    lo + (hi - lo) * rng.random::<f64>()
}

/// A random unit vector with `‖PΨ‖² = a` (`0 ≤ a ≤ 1`, P neither 0 nor 𝟙 unless `a` forces it).
pub fn state_with_overlap(rng: &mut impl Rng, p: &Projection, a: f64) -> StateVector {
    let d = p.matrix().nrows();
    let q = p.complement();
    let unit_in = |m: &CMatrix, rng: &mut _| -> CVector {
        loop {
            let v = m * gaussian_vector(rng, d);
            if v.norm() > 1e-6 {
                return v.unscale(v.norm());
            }
        }
    };
    let mut v = CVector::zeros(d);
    if a > 0.0 {
        v += unit_in(p.matrix(), rng) * Complex64::new(a.sqrt(), 0.0);
    }
    if a < 1.0 {
        v += unit_in(q.matrix(), rng) * Complex64::new((1.0 - a).sqrt(), 0.0);
    }
    StateVector::normalized(v).expect("unit")
}

/// Ambient coordinates of a vertex: circles map to `(cos x, sin x, 0)`, spheres to their point.
pub fn vertex_coordinates(complex: &SampledComplex, v: usize) -> [f64; 3] {
    let p = &complex.points[v];
    match p.len() {
        0 => [0.0; 3],
        1 => [p[0].cos(), p[0].sin(), 0.0],
        _ => [p[0], p[1], p.get(2).copied().unwrap_or(0.0)],
    }
}

/// `U_x = exp(i Σ x_k H_k)` over the vertices, scaled so that `max_x ‖𝟙 − U_x‖ = radius`.
pub fn ball_family(rng: &mut impl Rng, complex: &SampledComplex, d: usize, radius: f64) -> Vec<CMatrix> {
    let hs: Vec<CMatrix> = (0..3).map(|_| hermitian_with_norm(rng, d, 1.0).into_inner()).collect();
    let gens: Vec<CMatrix> = (0..complex.len())
        .map(|v| {
            let x = vertex_coordinates(complex, v);
            &hs[0] * Complex64::new(x[0], 0.0) + &hs[1] * Complex64::new(x[1], 0.0) + &hs[2] * Complex64::new(x[2], 0.0)
        })
        .collect();
    let biggest = gens.iter().map(mats::operator_norm).fold(0.0, f64::max);
    let theta = 2.0 * (radius / 2.0).clamp(0.0, 1.0).asin();
    let scale = if biggest > 0.0 { theta / biggest } else { 0.0 };
    gens.iter()
        .map(|g| mats::unitary_exp(&HermitianMatrix::symmetrized(&g.scale(scale))))
        .collect()
}

/// A unitary with `⟨Ψ, UΨ⟩ > 0` and `‖𝟙 − U‖ ≤ dist`: a geodesic step of size `dist/2`
/// followed by `e^{iK}`, `K = QHQ`, `Q = 𝟙 − |Ψ⟩⟨Ψ|`, also of size `dist/2`.
pub fn z_unitary(rng: &mut impl Rng, psi: &StateVector, dist: f64) -> CMatrix {
    let d = psi.dim();
    let q = mats::identity(d) - mats::ket_bra(psi.coords(), psi.coords());
    let w = loop {
        let w = &q * gaussian_vector(rng, d);
        if w.norm() > 1e-6 {
            break w.unscale(w.norm());
        }
    };
    let phi = 2.0 * (dist / 4.0).asin();
    let omega = StateVector::normalized(psi.coords() * Complex64::new(phi.cos(), 0.0) + w * Complex64::new(phi.sin(), 0.0))
        .expect("unit");
    let g = crate::geodesic::geodesic_matrix(psi, &omega);
    let h = hermitian_with_norm(rng, d, 1.0).into_inner();
    let k = HermitianMatrix::symmetrized(&(&q * h * &q));
    let theta = 2.0 * (dist / 4.0).asin();
    let scale = if k.norm() > 0.0 { theta / k.norm() } else { 0.0 };
    g * mats::unitary_exp(&HermitianMatrix::symmetrized(&k.as_matrix().scale(scale)))
}

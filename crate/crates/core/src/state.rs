//! Vector states on finite tensor products of matrix algebras.
//!
//! A state's GNS representation is taken to be the identity representation with
//! the state vector as cyclic vector, so `π(A)Ψ` is just `AΨ`.

use nalgebra::SymmetricEigen;
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::geodesic::{geodesic_unitary, StateVector};
use crate::mats::{self, check_unitary, operator_norm, projection_defect, CMatrix, CVector, HermitianMatrix, Tolerances};

/// Threshold on `ψ(P)` below which [`move_onto_projection`] refuses.
pub const ZERO_OVERLAP: f64 = 1e-10;
/// Tolerance of the product-state test in [`excision_projections`].
pub const PRODUCT_TOL: f64 = 1e-10;

/// Factor dimensions `d₁, …, d_m` of `M_{d₁} ⊗ ⋯ ⊗ M_{d_m}`; factor 1 is leftmost in Kronecker products.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct AlgebraShape {
    factor_dims: Vec<usize>,
}

impl AlgebraShape {
    pub fn new(factor_dims: Vec<usize>) -> Result<Self> {
        if factor_dims.is_empty() || factor_dims.contains(&0) {
            return Err(Error::ShapeMismatch(format!("invalid factor dimensions {factor_dims:?}")));
        }
        Ok(AlgebraShape { factor_dims })
    }

    pub fn single(d: usize) -> Self {
        AlgebraShape {
            factor_dims: vec![d.max(1)],
        }
    }

    /// `m` copies of `M_d`.
    pub fn uniform(d: usize, m: usize) -> Self {
        AlgebraShape {
            factor_dims: vec![d.max(1); m.max(1)],
        }
    }

    pub fn factor_dims(&self) -> &[usize] {
        &self.factor_dims
    }

    pub fn factors(&self) -> usize {
        self.factor_dims.len()
    }

    pub fn total_dim(&self) -> usize {
        self.factor_dims.iter().product()
    }

    fn dim_of(&self, range: std::ops::Range<usize>) -> usize {
        self.factor_dims[range].iter().product()
    }

    /// `𝟙 ⊗ ⋯ ⊗ op ⊗ ⋯ ⊗ 𝟙` with `op` in factor `k` (0-based).
    pub fn embed_local(&self, op: &CMatrix, k: usize) -> Result<CMatrix> {
        if k >= self.factors() || op.nrows() != self.factor_dims[k] || op.ncols() != self.factor_dims[k] {
            return Err(Error::ShapeMismatch(format!(
                "operator of size {} in factor {k} of {:?}",
                op.nrows(),
                self.factor_dims
            )));
        }
        let left = mats::identity(self.dim_of(0..k));
        let right = mats::identity(self.dim_of(k + 1..self.factors()));
        Ok(left.kronecker(op).kronecker(&right))
    }

    /// `op ⊗ 𝟙` with `op` acting on the first `n` factors.
    pub fn embed_leading(&self, op: &CMatrix, n: usize) -> Result<CMatrix> {
        if n > self.factors() || op.nrows() != self.dim_of(0..n) || op.ncols() != op.nrows() {
            return Err(Error::ShapeMismatch(format!(
                "operator of size {} on the first {n} factors of {:?}",
                op.nrows(),
                self.factor_dims
            )));
        }
        Ok(op.kronecker(&mats::identity(self.dim_of(n..self.factors()))))
    }

    fn check_dim(&self, d: usize) -> Result<()> {
        if d != self.total_dim() {
            return Err(Error::DimensionMismatch {
                expected: self.total_dim(),
                got: d,
            });
        }
        Ok(())
    }
}

/// Vector state, stored under canonical phase.
#[derive(Clone, Debug, PartialEq)]
pub struct PureState {
    shape: AlgebraShape,
    vector: StateVector,
}

impl PureState {
    pub fn new(shape: AlgebraShape, vector: StateVector) -> Result<Self> {
        shape.check_dim(vector.dim())?;
        Ok(PureState {
            shape,
            vector: vector.canonical(),
        })
    }

    /// `φ₁ ⊗ ⋯ ⊗ φ_m`.
    pub fn product(factors: &[StateVector]) -> Result<Self> {
        if factors.is_empty() {
            return Err(Error::ShapeMismatch("empty product".into()));
        }
        let shape = AlgebraShape::new(factors.iter().map(|f| f.dim()).collect())?;
        let mut v = factors[0].coords().clone();
        for f in &factors[1..] {
            v = v.kronecker(f.coords());
        }
        PureState::new(shape, StateVector::normalized(v)?)
    }

    pub fn shape(&self) -> &AlgebraShape {
        &self.shape
    }

    pub fn vector(&self) -> &StateVector {
        &self.vector
    }

    pub fn coords(&self) -> &CVector {
        self.vector.coords()
    }

    /// `ψ(A) = ⟨Ψ, AΨ⟩`.
    pub fn evaluate(&self, a: &CMatrix) -> Result<Complex64> {
        self.shape.check_dim(a.nrows())?;
        self.shape.check_dim(a.ncols())?;
        Ok(self.coords().dotc(&(a * self.coords())))
    }

    /// Distance between canonical representatives.
    pub fn distance(&self, other: &PureState) -> f64 {
        self.vector.ray_distance(&other.vector)
    }
}

/// Orthogonal projection on an algebra of the given shape.
#[derive(Clone, Debug, PartialEq)]
pub struct Projection {
    shape: AlgebraShape,
    matrix: CMatrix,
}

impl Projection {
    pub fn new(shape: AlgebraShape, matrix: CMatrix) -> Result<Self> {
        Self::new_with(shape, matrix, &Tolerances::default())
    }

    pub fn new_with(shape: AlgebraShape, matrix: CMatrix, tol: &Tolerances) -> Result<Self> {
        mats::check_square(&matrix)?;
        mats::check_finite(&matrix)?;
        shape.check_dim(matrix.nrows())?;
        let defect = projection_defect(&matrix);
        if defect > tol.projection {
            return Err(Error::NotProjection { defect });
        }
        Ok(Projection { shape, matrix })
    }

    pub fn identity(shape: AlgebraShape) -> Self {
        let d = shape.total_dim();
        Projection {
            shape,
            matrix: mats::identity(d),
        }
    }

    pub fn zero(shape: AlgebraShape) -> Self {
        let d = shape.total_dim();
        Projection {
            shape,
            matrix: CMatrix::zeros(d, d),
        }
    }

    /// Projection onto the span of orthonormalized `vectors`.
    pub fn onto_span(shape: AlgebraShape, vectors: &[CVector]) -> Result<Self> {
        let d = shape.total_dim();
        let mut basis: Vec<CVector> = Vec::new();
        for v in vectors {
            shape.check_dim(v.len())?;
            let mut w = v.clone();
            for b in &basis {
                w -= b * b.dotc(&w);
            }
            let n = w.norm();
            if n > 1e-10 {
                basis.push(w.unscale(n));
            }
        }
        let mut m = CMatrix::zeros(d, d);
        for b in &basis {
            m += mats::ket_bra(b, b);
        }
        Projection::new(shape, m)
    }

    pub fn shape(&self) -> &AlgebraShape {
        &self.shape
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.matrix
    }

    pub fn rank(&self) -> usize {
        self.matrix.trace().re.round().max(0.0) as usize
    }

    /// `𝟙 − P`.
    pub fn complement(&self) -> Projection {
        Projection {
            shape: self.shape.clone(),
            matrix: mats::identity(self.matrix.nrows()) - &self.matrix,
        }
    }

    /// `U* P U`.
    pub fn conjugated(&self, u: &CMatrix) -> Result<Projection> {
        Projection::new(self.shape.clone(), u.adjoint() * &self.matrix * u)
    }
}

fn check_same_shape(a: &AlgebraShape, b: &AlgebraShape) -> Result<()> {
    if a != b {
        return Err(Error::ShapeMismatch(format!(
            "{:?} vs {:?}",
            a.factor_dims(),
            b.factor_dims()
        )));
    }
    Ok(())
}

/// `Uψ = ψ(U* · U)`, realized as the vector `UΨ`.
pub fn act(u: &CMatrix, psi: &PureState) -> Result<PureState> {
    check_unitary(u, &Tolerances::default())?;
    psi.shape.check_dim(u.nrows())?;
    PureState::new(psi.shape.clone(), psi.vector.apply(u)?)
}

/// `ψ(P) = ‖PΨ‖²`.
pub fn overlap(psi: &PureState, p: &Projection) -> Result<f64> {
    check_same_shape(&psi.shape, &p.shape)?;
    Ok((p.matrix() * psi.coords()).norm_squared())
}

/// Generator of the geodesic from Ψ to `PΨ/‖PΨ‖`, together with `ψ(P)`.
pub fn projection_generator(psi: &StateVector, p: &CMatrix) -> Result<(HermitianMatrix, f64)> {
    let pv = p * psi.coords();
    let ov = pv.norm_squared();
    if ov <= ZERO_OVERLAP {
        return Err(Error::ZeroOverlap {
            overlap: ov,
            threshold: ZERO_OVERLAP,
        });
    }
    let target = StateVector::normalized(pv)?;
    Ok((geodesic_unitary(psi, &target)?.generator, ov))
}

/// A unitary `U` with `(Uψ)(P) = 1` and `‖𝟙 − U‖ = √(2 − 2√ψ(P))`.
pub fn move_onto_projection(psi: &PureState, p: &Projection) -> Result<CMatrix> {
    check_same_shape(&psi.shape, &p.shape)?;
    let (t, _) = projection_generator(&psi.vector, p.matrix())?;
    Ok(mats::unitary_exp(&t))
}

/// A projection P with an isometry `W: ℂ^r → ℂ^d` onto its range.
///
/// Compression maps `A ↦ W*AW` identify `P𝔄P` with `M_r`.
#[derive(Clone, Debug)]
pub struct CornerData {
    projection: Projection,
    isometry: CMatrix,
}

impl CornerData {
    pub fn new(p: &Projection) -> Self {
        let m = p.matrix();
        let d = m.nrows();
        let diagonal = (0..d).all(|i| (0..d).all(|j| i == j || m[(i, j)].norm() <= 1e-12))
            && (0..d).all(|i| m[(i, i)].norm() <= 1e-12 || (m[(i, i)] - 1.0).norm() <= 1e-12);
        let isometry = if diagonal {
            let cols: Vec<CVector> = (0..d)
                .filter(|&i| m[(i, i)].re > 0.5)
                .map(|i| mats::basis_vector(d, i))
                .collect();
            columns(d, &cols)
        } else {
            let eig = SymmetricEigen::new(HermitianMatrix::symmetrized(m).into_inner());
            let cols: Vec<CVector> = (0..d)
                .filter(|&j| eig.eigenvalues[j] > 0.5)
                .map(|j| eig.eigenvectors.column(j).into_owned())
                .collect();
            columns(d, &cols)
        };
        CornerData {
            projection: p.clone(),
            isometry,
        }
    }

    pub fn projection(&self) -> &Projection {
        &self.projection
    }

    pub fn isometry(&self) -> &CMatrix {
        &self.isometry
    }

    pub fn rank(&self) -> usize {
        self.isometry.ncols()
    }

    /// `W*AW`.
    pub fn compress(&self, a: &CMatrix) -> CMatrix {
        self.isometry.adjoint() * a * &self.isometry
    }

    /// `WBW*`.
    pub fn expand(&self, b: &CMatrix) -> CMatrix {
        &self.isometry * b * self.isometry.adjoint()
    }

    /// `WBW* + 𝟙 − P`, the unitary of the unital corner extended by the identity.
    pub fn extend_unitary(&self, b: &CMatrix) -> CMatrix {
        self.expand(b) + self.projection.complement().matrix()
    }

    pub fn compress_vector(&self, v: &CVector) -> CVector {
        self.isometry.adjoint() * v
    }

    pub fn expand_vector(&self, x: &CVector) -> CVector {
        &self.isometry * x
    }

    /// `W*QW` for a subprojection `Q ≤ P`.
    pub fn compress_projection(&self, q: &Projection) -> Result<Projection> {
        Projection::new(AlgebraShape::single(self.rank()), self.compress(q.matrix()))
    }
}

fn columns(d: usize, cols: &[CVector]) -> CMatrix {
    let mut w = CMatrix::zeros(d, cols.len());
    for (j, col) in cols.iter().enumerate() {
        w.set_column(j, col);
    }
    w
}

/// A state of `P𝔄P`, realized on `ℂ^r` through the corner isometry.
#[derive(Clone, Debug)]
pub struct CornerState {
    pub corner: CornerData,
    pub state: PureState,
}

impl CornerState {
    /// `ψ(WBW*)` for `B ∈ M_r`.
    pub fn evaluate(&self, b: &CMatrix) -> Result<Complex64> {
        self.state.evaluate(b)
    }
}

/// Restriction of ψ to `P𝔄P` for ψ supported on P.
pub fn compress_state(psi: &PureState, p: &Projection) -> Result<CornerState> {
    compress_state_with(psi, p, 1e-10)
}

pub fn compress_state_with(psi: &PureState, p: &Projection, tol: f64) -> Result<CornerState> {
    let ov = overlap(psi, p)?;
    if (1.0 - ov).abs() > tol {
        return Err(Error::NotCaptured { overlap: ov });
    }
    let corner = CornerData::new(p);
    let v = StateVector::normalized(corner.compress_vector(psi.coords()))?;
    let state = PureState::new(AlgebraShape::single(corner.rank()), v)?;
    Ok(CornerState { corner, state })
}

/// The decreasing projections `P_n = E₁ ⊗ ⋯ ⊗ E_n ⊗ 𝟙`, `n = 1..m`, of a product state.
pub fn excision_projections(shape: &AlgebraShape, reference: &PureState) -> Result<Vec<Projection>> {
    check_same_shape(shape, &reference.shape)?;
    let dims = shape.factor_dims();
    let m = dims.len();
    let psi = reference.coords();
    for cut in 1..m {
        let left = shape.dim_of(0..cut);
        let right = shape.dim_of(cut..m);
        let mat = CMatrix::from_fn(left, right, |i, j| psi[i * right + j]);
        let sv = mat.svd(false, false).singular_values;
        let total: f64 = sv.iter().map(|s| s * s).sum();
        let top = sv.max();
        let residual = (total - top * top).max(0.0).sqrt();
        if residual > PRODUCT_TOL {
            return Err(Error::NotProduct { cut, residual });
        }
    }
    let mut factor_projections = Vec::with_capacity(m);
    for (k, &dk) in dims.iter().enumerate() {
        let (left, right) = (shape.dim_of(0..k), shape.dim_of(k + 1..m));
        let rho = CMatrix::from_fn(dk, dk, |a, b| {
            let mut acc = Complex64::new(0.0, 0.0);
            for l in 0..left {
                for r in 0..right {
                    acc += psi[(l * dk + a) * right + r] * psi[(l * dk + b) * right + r].conj();
                }
            }
            acc
        });
        let eig = SymmetricEigen::new(HermitianMatrix::symmetrized(&rho).into_inner());
        let top = eig.eigenvalues.imax();
        let phi = eig.eigenvectors.column(top).into_owned();
        factor_projections.push(mats::ket_bra(&phi, &phi));
    }
    let mut out = Vec::with_capacity(m);
    let mut lead = CMatrix::identity(1, 1);
    for (n, e) in factor_projections.iter().enumerate() {
        lead = lead.kronecker(e);
        out.push(Projection::new(shape.clone(), shape.embed_leading(&lead, n + 1)?)?);
    }
    Ok(out)
}

/// `‖PAP − ω(A)P²‖`.
pub fn excision_defect(p: &Projection, a: &CMatrix, omega: &PureState) -> Result<f64> {
    check_same_shape(&p.shape, &omega.shape)?;
    let pm = p.matrix();
    let w = omega.evaluate(a)?;
    Ok(operator_norm(&(pm * a * pm - (pm * pm) * w)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mats::c;
    use std::f64::consts::FRAC_1_SQRT_2;

    fn plus_projection() -> Projection {
        let plus = CVector::from_column_slice(&[c(FRAC_1_SQRT_2, 0.0), c(FRAC_1_SQRT_2, 0.0)]);
        Projection::new(AlgebraShape::single(2), mats::ket_bra(&plus, &plus)).unwrap()
    }

    fn e1_state(d: usize) -> PureState {
        PureState::new(AlgebraShape::single(d), StateVector::basis(d, 0)).unwrap()
    }

    #[test]
    fn swap_moves_e1_off_e1() {
        let swap = CMatrix::from_row_slice(2, 2, &[c(0.0, 0.0), c(1.0, 0.0), c(1.0, 0.0), c(0.0, 0.0)]);
        let moved = act(&swap, &e1_state(2)).unwrap();
        let e11 = mats::ket_bra(&mats::basis_vector(2, 0), &mats::basis_vector(2, 0));
        assert!(moved.evaluate(&e11).unwrap().norm() < 1e-15);
        assert!((moved.evaluate(&mats::identity(2)).unwrap() - 1.0).norm() < 1e-15);
    }

    #[test]
    fn overlaps() {
        let psi = e1_state(2);
        assert!((overlap(&psi, &Projection::identity(AlgebraShape::single(2))).unwrap() - 1.0).abs() < 1e-15);
        assert_eq!(overlap(&psi, &Projection::zero(AlgebraShape::single(2))).unwrap(), 0.0);
        assert!((overlap(&psi, &plus_projection()).unwrap() - 0.5).abs() < 1e-15);
        assert!(overlap(&e1_state(3), &plus_projection()).is_err());
    }

    #[test]
    fn move_onto_plus() {
        let psi = e1_state(2);
        let p = plus_projection();
        let u = move_onto_projection(&psi, &p).unwrap();
        assert!((mats::dist_from_identity(&u) - 0.765_366_864_730_18).abs() < 1e-12);
        assert!((overlap(&act(&u, &psi).unwrap(), &p).unwrap() - 1.0).abs() < 1e-12);
        let captured = Projection::identity(AlgebraShape::single(2));
        assert!((move_onto_projection(&psi, &captured).unwrap() - mats::identity(2)).camax() < 1e-15);
        let e2 = Projection::onto_span(AlgebraShape::single(2), &[mats::basis_vector(2, 1)]).unwrap();
        assert!(matches!(move_onto_projection(&psi, &e2), Err(Error::ZeroOverlap { .. })));
    }

    #[test]
    fn compress_identity_corner_is_same_state() {
        let psi = PureState::new(
            AlgebraShape::single(3),
            StateVector::from_slice(&[c(0.6, 0.0), c(0.0, 0.8), c(0.0, 0.0)]).unwrap(),
        )
        .unwrap();
        let cs = compress_state(&psi, &Projection::identity(AlgebraShape::single(3))).unwrap();
        assert!(cs.state.distance(&psi) < 1e-15);
        let p = Projection::onto_span(AlgebraShape::single(3), &[mats::basis_vector(3, 0), mats::basis_vector(3, 1)]).unwrap();
        let cs = compress_state(&psi, &p).unwrap();
        assert_eq!(cs.corner.rank(), 2);
        assert!(compress_state(
            &e1_state(3),
            &Projection::onto_span(AlgebraShape::single(3), &[mats::basis_vector(3, 1)]).unwrap()
        )
        .is_err());
    }

    #[test]
    fn excision_ranks_and_defects() {
        let e1 = StateVector::basis(2, 0);
        let reference = PureState::product(&[e1.clone(), e1.clone(), e1]).unwrap();
        let ps = excision_projections(reference.shape(), &reference).unwrap();
        assert_eq!(ps.iter().map(|p| p.rank()).collect::<Vec<_>>(), vec![4, 2, 1]);
        for p in &ps {
            assert!((overlap(&reference, p).unwrap() - 1.0).abs() < 1e-14);
        }
        let sx = CMatrix::from_row_slice(2, 2, &[c(0.0, 0.0), c(1.0, 0.0), c(1.0, 0.0), c(0.0, 0.0)]);
        let a3 = reference.shape().embed_local(&sx, 2).unwrap();
        let defects: Vec<f64> = ps.iter().map(|p| excision_defect(p, &a3, &reference).unwrap()).collect();
        assert!((defects[0] - 1.0).abs() < 1e-14 && (defects[1] - 1.0).abs() < 1e-14);
        assert!(defects[2] < 1e-14);
    }

    #[test]
    fn entangled_reference_is_rejected() {
        let bell = StateVector::from_slice(&[c(1.0, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(1.0, 0.0)]).unwrap();
        let psi = PureState::new(AlgebraShape::uniform(2, 2), bell).unwrap();
        assert!(matches!(
            excision_projections(psi.shape(), &psi),
            Err(Error::NotProduct { cut: 1, .. })
        ));
    }

    #[test]
    fn near_projection_is_not_repaired() {
        let m = CMatrix::from_row_slice(2, 2, &[c(1.0 + 1e-6, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(0.0, 0.0)]);
        assert!(matches!(
            Projection::new(AlgebraShape::single(2), m),
            Err(Error::NotProjection { .. })
        ));
    }
}

//! Rational rotation algebras `A_{p/q}` over the 2-torus.
//!
//! The irreducible representations are modelled by `u = z₁·diag(ω^j)` with
//! `ω = e^{2πip/q}` and `v = z₂·S`, where `S e_j = e_{j+1 mod q}`. With this orientation
//! `vu = e^{−2πiθ}uv` holds exactly.

use std::collections::BTreeMap;
use std::f64::consts::TAU;
use std::fmt;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geodesic::StateVector;
use crate::mats::{self, CMatrix};

const UNIT_MODULUS_TOL: f64 = 1e-12;

/// `θ = p/q` in lowest terms with `q ≥ 2`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RotationParams {
    p: i64,
    q: u64,
}

impl RotationParams {
    pub fn new(p: i64, q: u64) -> Result<Self> {
        if q == 0 {
            return Err(Error::Rotation("q must be positive".into()));
        }
        let g = num_integer::gcd(p.unsigned_abs(), q);
        if g != 1 {
            return Err(Error::Rotation(format!(
                "p = {p} and q = {q} are not coprime (common divisor {g})"
            )));
        }
        if q == 1 {
            return Err(Error::Rotation(format!(
                "theta = {p} is an integer: A_theta is commutative, use the commutative query (pi_1 = Z^2, all others trivial)"
            )));
        }
        Ok(RotationParams { p, q })
    }

    pub fn p(&self) -> i64 {
        self.p
    }

    pub fn q(&self) -> u64 {
        self.q
    }

    pub fn theta(&self) -> f64 {
        self.p as f64 / self.q as f64
    }

    /// `λ = e^{−2πiθ}`.
    pub fn lambda(&self) -> Complex64 {
        Complex64::from_polar(1.0, -TAU * self.theta())
    }
}

fn check_unit(z: Complex64, name: &str) -> Result<()> {
    if (z.norm() - 1.0).abs() > UNIT_MODULUS_TOL {
        return Err(Error::Rotation(format!("{name} = {z} is not of unit modulus")));
    }
    Ok(())
}

/// The pair `(u, v)` of the irreducible representation at `(z₁, z₂) ∈ 𝕋²`.
pub fn irrep_at(params: &RotationParams, z1: Complex64, z2: Complex64) -> Result<(CMatrix, CMatrix)> {
    check_unit(z1, "z1")?;
    check_unit(z2, "z2")?;
    let q = params.q as usize;
    let omega = Complex64::from_polar(1.0, TAU * params.theta());
    let u = CMatrix::from_fn(q, q, |i, j| {
        if i == j {
            z1 * omega.powi(i as i32)
        } else {
            Complex64::new(0.0, 0.0)
        }
    });
    let v = CMatrix::from_fn(q, q, |i, j| if i == (j + 1) % q { z2 } else { Complex64::new(0.0, 0.0) });
    Ok((u, v))
}

/// `‖vu − e^{−2πiθ}uv‖`.
pub fn relation_residual(params: &RotationParams, u: &CMatrix, v: &CMatrix) -> f64 {
    mats::operator_norm(&(v * u - (u * v) * params.lambda()))
}

/// A finite sum `Σ c_{mn} U^m V^n`.
#[derive(Clone, Debug, PartialEq)]
pub struct RotationAlgebraElement {
    params: RotationParams,
    terms: BTreeMap<(i64, i64), Complex64>,
}

impl RotationAlgebraElement {
    pub fn new(params: RotationParams, terms: impl IntoIterator<Item = ((i64, i64), Complex64)>) -> Self {
        let mut map = BTreeMap::new();
        for (k, c) in terms {
            *map.entry(k).or_insert(Complex64::new(0.0, 0.0)) += c;
        }
        map.retain(|_, c| *c != Complex64::new(0.0, 0.0));
        RotationAlgebraElement { params, terms: map }
    }

    pub fn unit(params: RotationParams) -> Self {
        Self::monomial(params, 0, 0, Complex64::new(1.0, 0.0))
    }

    pub fn monomial(params: RotationParams, m: i64, n: i64, c: Complex64) -> Self {
        Self::new(params, [((m, n), c)])
    }

    pub fn u(params: RotationParams) -> Self {
        Self::monomial(params, 1, 0, Complex64::new(1.0, 0.0))
    }

    pub fn v(params: RotationParams) -> Self {
        Self::monomial(params, 0, 1, Complex64::new(1.0, 0.0))
    }

    pub fn params(&self) -> &RotationParams {
        &self.params
    }

    pub fn terms(&self) -> &BTreeMap<(i64, i64), Complex64> {
        &self.terms
    }

    pub fn add(&self, other: &Self) -> Self {
        Self::new(self.params, self.terms.iter().chain(&other.terms).map(|(k, c)| (*k, *c)))
    }

    pub fn scale(&self, s: Complex64) -> Self {
        Self::new(self.params, self.terms.iter().map(|(k, c)| (*k, c * s)))
    }

    /// Uses `(U^mV^n)(U^{m'}V^{n'}) = λ^{nm'} U^{m+m'}V^{n+n'}`.
    pub fn mul(&self, other: &Self) -> Self {
        let lambda = self.params.lambda();
        let mut out = Vec::new();
        for (&(m, n), &a) in &self.terms {
            for (&(m2, n2), &b) in &other.terms {
                out.push(((m + m2, n + n2), a * b * lambda.powi((n * m2) as i32)));
            }
        }
        Self::new(self.params, out)
    }

    /// `(cU^mV^n)* = c̄ λ^{nm} U^{−m}V^{−n}`.
    pub fn adjoint(&self) -> Self {
        let lambda = self.params.lambda();
        Self::new(
            self.params,
            self.terms
                .iter()
                .map(|(&(m, n), c)| ((-m, -n), c.conj() * lambda.powi((n * m) as i32))),
        )
    }
}

fn matrix_power(a: &CMatrix, inv: &CMatrix, k: i64) -> CMatrix {
    let base = if k >= 0 { a } else { inv };
    let mut out = mats::identity(a.nrows());
    for _ in 0..k.unsigned_abs() {
        out = &out * base;
    }
    out
}

/// `Σ c_{mn} u^m v^n` in the representation at `(z₁, z₂)`.
pub fn evaluate_element(elem: &RotationAlgebraElement, z1: Complex64, z2: Complex64) -> Result<CMatrix> {
    let (u, v) = irrep_at(&elem.params, z1, z2)?;
    let (ui, vi) = (u.adjoint(), v.adjoint());
    let q = elem.params.q as usize;
    let mut out = CMatrix::zeros(q, q);
    for (&(m, n), &c) in &elem.terms {
        out += matrix_power(&u, &ui, m) * matrix_power(&v, &vi, n) * c;
    }
    Ok(out)
}

/// A point of the `ℂP^{q−1}`-bundle over `𝕋²`.
#[derive(Clone, Debug, PartialEq)]
pub struct BundlePoint {
    pub params: RotationParams,
    z1: Complex64,
    z2: Complex64,
    ray: StateVector,
}

impl BundlePoint {
    pub fn new(params: RotationParams, z1: Complex64, z2: Complex64, ray: StateVector) -> Result<Self> {
        check_unit(z1, "z1")?;
        check_unit(z2, "z2")?;
        if ray.dim() != params.q as usize {
            return Err(Error::DimensionMismatch {
                expected: params.q as usize,
                got: ray.dim(),
            });
        }
        Ok(BundlePoint {
            params,
            z1,
            z2,
            ray: ray.canonical(),
        })
    }

    pub fn z1(&self) -> Complex64 {
        self.z1
    }

    pub fn z2(&self) -> Complex64 {
        self.z2
    }

    pub fn ray(&self) -> &StateVector {
        &self.ray
    }
}

/// The pure state `elem ↦ ⟨ray, π_{z}(elem)·ray⟩`.
#[derive(Clone, Debug)]
pub struct EvaluationState {
    point: BundlePoint,
}

impl EvaluationState {
    pub fn evaluate(&self, elem: &RotationAlgebraElement) -> Result<Complex64> {
        if elem.params != self.point.params {
            return Err(Error::Rotation("element and point have different parameters".into()));
        }
        let m = evaluate_element(elem, self.point.z1, self.point.z2)?;
        let r = self.point.ray.coords();
        Ok(r.dotc(&(m * r)))
    }

    pub fn point(&self) -> &BundlePoint {
        &self.point
    }
}

pub fn pure_state_at(point: &BundlePoint) -> EvaluationState {
    EvaluationState { point: point.clone() }
}

/// An element evaluating to the matrix unit `E_{ij}` at `(z₁, z₂) = (1, 1)`:
/// `(1/q) Σ_m ω^{−mi} U^m V^{i−j}`.
pub fn matrix_unit(params: RotationParams, i: usize, j: usize) -> Result<RotationAlgebraElement> {
    let q = params.q as usize;
    if i >= q || j >= q {
        return Err(Error::Range(format!("matrix unit ({i}, {j}) outside {q}x{q}")));
    }
    let n = ((i + q - j) % q) as i64;
    let omega = Complex64::from_polar(1.0, TAU * params.theta());
    let terms = (0..q as i64).map(|m| ((m, n), omega.powi(-(m as i32) * i as i32) / q as f64));
    Ok(RotationAlgebraElement::new(params, terms))
}

/// Value of a homotopy group, as far as it is determined.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "kind")]
pub enum GroupValue {
    Trivial,
    Integers,
    IntegersSquared,
    /// `π_k(S^m)`, left symbolic.
    SphereGroup {
        k: u64,
        m: u64,
    },
}

impl fmt::Display for GroupValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GroupValue::Trivial => write!(f, "0"),
            GroupValue::Integers => write!(f, "Z"),
            GroupValue::IntegersSquared => write!(f, "Z^2"),
            GroupValue::SphereGroup { k, m } => write!(f, "pi_{k}(S^{m})"),
        }
    }
}

/// Where a value comes from.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Provenance {
    /// Read off the long exact sequence of the bundle.
    ExactSequence,
    /// Looked up in the bundled table of sphere homotopy groups (external reference data).
    SphereTable,
    /// Left as `π_k(S^{2q−1})`.
    Symbolic,
    /// Answer for irrational θ or θ = 0, stated rather than computed.
    Stated,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct HomotopyGroupResult {
    pub k: u64,
    pub value: GroupValue,
    /// Finite-group descriptor such as `Z/2` or `Z+Z/12`, from the sphere table.
    pub resolved: Option<String>,
    pub provenance: Provenance,
}

impl HomotopyGroupResult {
    pub fn display_value(&self) -> String {
        match &self.resolved {
            Some(r) => format!("{} = {r}", self.value),
            None => self.value.to_string(),
        }
    }
}

/// `π_k(S^m)` for `m ≤ k ≤ m + 3`, `m ≥ 1`. External reference data.
pub fn sphere_table(k: u64, m: u64) -> Option<&'static str> {
    if m == 0 || k < m || k > m + 3 {
        return None;
    }
    Some(match (k - m, m) {
        (0, _) => "Z",
        (1, 1) => "0",
        (1, 2) => "Z",
        (1, _) => "Z/2",
        (2, 1) => "0",
        (2, _) => "Z/2",
        (3, 1) => "0",
        (3, 2) => "Z/2",
        (3, 3) => "Z/12",
        (3, 4) => "Z+Z/12",
        (3, _) => "Z/24",
        _ => unreachable!(),
    })
}

/// `π_k(𝒫(A_{p/q}))`: trivial for k = 0, `ℤ²` for k = 1, `ℤ` for k = 2, trivial for
/// `2 < k < 2q−1`, `ℤ` for `k = 2q−1` and `π_k(S^{2q−1})` beyond.
pub fn homotopy_groups(params: &RotationParams, k: u64, resolve: bool) -> HomotopyGroupResult {
    let top = 2 * params.q - 1;
    let value = match k {
        0 => GroupValue::Trivial,
        1 => GroupValue::IntegersSquared,
        2 => GroupValue::Integers,
        k if k < top => GroupValue::Trivial,
        k if k == top => GroupValue::Integers,
        k => GroupValue::SphereGroup { k, m: top },
    };
    let (resolved, provenance) = match value {
        GroupValue::SphereGroup { k, m } => match sphere_table(k, m).filter(|_| resolve) {
            Some(r) => (Some(r.to_string()), Provenance::SphereTable),
            None => (None, Provenance::Symbolic),
        },
        _ => (None, Provenance::ExactSequence),
    };
    HomotopyGroupResult {
        k,
        value,
        resolved,
        provenance,
    }
}

/// Irrational θ: every homotopy group vanishes.
pub fn homotopy_groups_irrational(k: u64) -> HomotopyGroupResult {
    HomotopyGroupResult {
        k,
        value: GroupValue::Trivial,
        resolved: None,
        provenance: Provenance::Stated,
    }
}

/// θ = 0, the commutative torus: `π₁ = ℤ²`, all others trivial.
pub fn homotopy_groups_commutative(k: u64) -> HomotopyGroupResult {
    let value = if k == 1 {
        GroupValue::IntegersSquared
    } else {
        GroupValue::Trivial
    };
    HomotopyGroupResult {
        k,
        value,
        resolved: None,
        provenance: Provenance::Stated,
    }
}

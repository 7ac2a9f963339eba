//! Family-level pipelines.
//!
//! * [`deform_family_onto_projection`]: unitary paths `U(x,·)` with `ψ_x(U(x,1)*PU(x,1)) = 1`.
//! * [`iterate_contraction`]: the dyadic schedule over the excising projections of a
//!   product reference state, producing a [`HomotopyTrace`].
//! * [`weak_star_convergence_check`]: tail deviations of local observables along a trace.

use std::path::Path;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::complex::SampledComplex;
use crate::error::{Error, Obstruction, Result};
use crate::geodesic::{geodesic_unitary, StateVector};
use crate::homotopy::uniform_grid;
use crate::mats::{self, operator_norm, CMatrix, CVector};
use crate::sample;
use crate::state::{
    compress_state_with, excision_projections, projection_generator, AlgebraShape, CornerData, Projection, PureState,
};

/// Overlaps above this use the direct geodesic route.
pub const POSITIVE_OVERLAP: f64 = 1e-6;
/// Vertices within this of `ψ_x(P) = 1` keep the identity path.
pub const CAPTURED_TOL: f64 = 1e-10;
/// Tolerance when restricting a captured state to the next corner.
pub const CORNER_TOL: f64 = 1e-8;
/// Smallest acceptable pushed overlap in the push route.
const PUSH_SCORE_MIN: f64 = 1e-4;
const PUSH_CANDIDATES: usize = 16;

/// A sampled map `X → 𝒫(𝔄)` with a base vertex.
#[derive(Clone, Debug)]
pub struct StateFamily {
    grid: SampledComplex,
    states: Vec<PureState>,
    base_vertex: usize,
}

impl StateFamily {
    pub fn new(grid: SampledComplex, states: Vec<PureState>, base_vertex: usize) -> Result<Self> {
        grid.validate()?;
        if states.len() != grid.len() {
            return Err(Error::DimensionMismatch {
                expected: grid.len(),
                got: states.len(),
            });
        }
        if base_vertex >= states.len() {
            return Err(Error::Range(format!(
                "base vertex {base_vertex} not in a grid of {} vertices",
                states.len()
            )));
        }
        let shape = states[0].shape();
        if let Some(bad) = states.iter().find(|s| s.shape() != shape) {
            return Err(Error::ShapeMismatch(format!(
                "{:?} vs {:?}",
                bad.shape().factor_dims(),
                shape.factor_dims()
            )));
        }
        Ok(StateFamily {
            grid,
            states,
            base_vertex,
        })
    }

    pub fn grid(&self) -> &SampledComplex {
        &self.grid
    }

    pub fn states(&self) -> &[PureState] {
        &self.states
    }

    pub fn base_vertex(&self) -> usize {
        self.base_vertex
    }

    pub fn base_state(&self) -> &PureState {
        &self.states[self.base_vertex]
    }

    pub fn shape(&self) -> &AlgebraShape {
        self.states[0].shape()
    }

    pub fn len(&self) -> usize {
        self.states.len()
    }

    pub fn is_empty(&self) -> bool {
        self.states.is_empty()
    }

    /// The family `x ↦ U_x ψ_x`.
    pub fn acted(&self, unitaries: &[CMatrix]) -> Result<StateFamily> {
        let states = self
            .states
            .iter()
            .zip(unitaries)
            .map(|(s, u)| crate::state::act(u, s))
            .collect::<Result<_>>()?;
        StateFamily::new(self.grid.clone(), states, self.base_vertex)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DeformRoute {
    /// `U(x,s) = e^{isT_x}` along the geodesic to `PΨ_x/‖PΨ_x‖`.
    PositiveOverlap,
    /// First push every state to positive overlap, then follow the geodesic.
    Push,
}

/// Output of [`deform_family_onto_projection`].
#[derive(Clone, Debug)]
pub struct ProjectionDeformation {
    pub route: DeformRoute,
    pub times: Vec<f64>,
    /// `paths[x][k] = U(x, times[k])`.
    pub paths: Vec<Vec<CMatrix>>,
    pub overlaps: Vec<f64>,
    pub final_overlaps: Vec<f64>,
    /// `√(2 − 2√ψ_x(P))` (positive route only).
    pub bounds: Option<Vec<f64>>,
    /// `bound − max_s ‖𝟙 − U(x,s)‖` (positive route only).
    pub bound_margins: Option<Vec<f64>>,
    /// Minimum pushed overlap over vertices and edge midpoints (push route only).
    pub push_score: Option<f64>,
    /// Largest `‖U(x,s) − U(y,s)‖` over edges and times.
    pub max_edge_gap: f64,
}

impl ProjectionDeformation {
    pub fn endpoints(&self) -> Vec<CMatrix> {
        self.paths.iter().map(|p| p.last().expect("non-empty").clone()).collect()
    }

    pub fn max_final_defect(&self) -> f64 {
        self.final_overlaps.iter().map(|o| (1.0 - o).abs()).fold(0.0, f64::max)
    }
}

/// Fraction of the time axis given to the push phase.
pub const PUSH_FRACTION: f64 = 0.25;

/// Deforms every state of the family onto P: `ψ_x(U(x,1)*PU(x,1)) = 1`, `U(x,0) = 𝟙`.
///
/// When every overlap exceeds [`POSITIVE_OVERLAP`] the geodesic generator is used
/// directly. Otherwise the family dimension n and the rank r of P must satisfy
/// `n ≤ 2r − 2`; states are then pushed towards P by a fixed unitary B before the
/// geodesic phase. Failure of the rank condition is reported as an obstruction.
pub fn deform_family_onto_projection(family: &StateFamily, p: &Projection, time_points: usize) -> Result<ProjectionDeformation> {
    if p.shape() != family.shape() {
        return Err(Error::ShapeMismatch(format!(
            "projection on {:?}, family on {:?}",
            p.shape().factor_dims(),
            family.shape().factor_dims()
        )));
    }
    let times = uniform_grid(time_points);
    let pm = p.matrix();
    let overlaps: Vec<f64> = family.states().iter().map(|s| (pm * s.coords()).norm_squared()).collect();
    let d = pm.nrows();

    if overlaps.iter().all(|&o| o > POSITIVE_OVERLAP) {
        let results: Vec<(Vec<CMatrix>, f64)> = family
            .states()
            .par_iter()
            .zip(overlaps.par_iter())
            .map(|(s, &ov)| {
                if (1.0 - ov).abs() <= CAPTURED_TOL {
                    return Ok((vec![mats::identity(d); times.len()], 0.0));
                }
                let (gen, _) = projection_generator(s.vector(), pm)?;
                let spec = gen.spectrum();
                let path: Vec<CMatrix> = times
                    .iter()
                    .map(|&t| if t == 0.0 { mats::identity(d) } else { spec.exp_i(t) })
                    .collect();
                let worst = path.iter().map(mats::dist_from_identity).fold(0.0, f64::max);
                Ok((path, worst))
            })
            .collect::<Result<_>>()?;
        let bounds: Vec<f64> = overlaps.iter().map(|&o| (2.0 - 2.0 * o.sqrt()).max(0.0).sqrt()).collect();
        let margins = bounds.iter().zip(&results).map(|(b, (_, w))| b - w).collect();
        let paths: Vec<Vec<CMatrix>> = results.into_iter().map(|(p, _)| p).collect();
        return Ok(finish(
            family,
            p,
            DeformRoute::PositiveOverlap,
            times,
            paths,
            overlaps,
            Some(bounds),
            Some(margins),
            None,
        ));
    }

    let n = family.grid().dim;
    let r = p.rank();
    if n + 2 > 2 * r {
        return Err(Error::Obstruction(Box::new(Obstruction {
            stage: "deform_family_onto_projection".into(),
            level: None,
            family_dim: n,
            corner_rank: r,
            condition: "n <= 2r - 2".into(),
            detail: format!(
                "{} vertices have overlap <= {POSITIVE_OVERLAP:e}; the unit sphere of the rank-{r} range is not {n}-connected",
                overlaps.iter().filter(|&&o| o <= POSITIVE_OVERLAP).count()
            ),
        })));
    }

    let (b, score) = choose_push(family, pm);
    if score < PUSH_SCORE_MIN {
        return Err(Error::Obstruction(Box::new(Obstruction {
            stage: "deform_family_onto_projection: push".into(),
            level: None,
            family_dim: n,
            corner_rank: r,
            condition: "a push unitary keeping every overlap positive".into(),
            detail: format!("best minimum pushed overlap {score:.3e} below {PUSH_SCORE_MIN:e}"),
        })));
    }
    let paths: Vec<Vec<CMatrix>> = family
        .states()
        .par_iter()
        .zip(overlaps.par_iter())
        .map(|(s, &ov)| {
            if (1.0 - ov).abs() <= CAPTURED_TOL {
                return Ok(vec![mats::identity(d); times.len()]);
            }
            let pushed = push(s.coords(), &b, pm, 1.0 - ov);
            let g = geodesic_unitary(s.vector(), &pushed)?.generator.spectrum();
            let g1 = g.exp_i(1.0);
            let (t2, _) = projection_generator(&pushed, pm)?;
            let t2 = t2.spectrum();
            Ok(times
                .iter()
                .map(|&t| {
                    if t == 0.0 {
                        mats::identity(d)
                    } else if t <= PUSH_FRACTION {
                        g.exp_i(t / PUSH_FRACTION)
                    } else {
                        t2.exp_i((t - PUSH_FRACTION) / (1.0 - PUSH_FRACTION)) * &g1
                    }
                })
                .collect())
        })
        .collect::<Result<_>>()?;
    Ok(finish(
        family,
        p,
        DeformRoute::Push,
        times,
        paths,
        overlaps,
        None,
        None,
        Some(score),
    ))
}

#[allow(clippy::too_many_arguments)]
fn finish(
    family: &StateFamily,
    p: &Projection,
    route: DeformRoute,
    times: Vec<f64>,
    paths: Vec<Vec<CMatrix>>,
    overlaps: Vec<f64>,
    bounds: Option<Vec<f64>>,
    bound_margins: Option<Vec<f64>>,
    push_score: Option<f64>,
) -> ProjectionDeformation {
    let pm = p.matrix();
    let final_overlaps = family
        .states()
        .iter()
        .zip(&paths)
        .map(|(s, path)| (pm * (path.last().unwrap() * s.coords())).norm_squared())
        .collect();
    let max_edge_gap = family
        .grid()
        .edges
        .iter()
        .flat_map(|&(a, b)| paths[a].iter().zip(&paths[b]).map(|(u, v)| operator_norm(&(u - v))))
        .fold(0.0, f64::max);
    ProjectionDeformation {
        route,
        times,
        paths,
        overlaps,
        final_overlaps,
        bounds,
        bound_margins,
        push_score,
        max_edge_gap,
    }
}

/// `normalize(Ψ + ε(PBΨ − ⟨Ψ,PBΨ⟩Ψ))`.
fn push(psi: &CVector, b: &CMatrix, p: &CMatrix, eps: f64) -> StateVector {
    let pb = p * (b * psi);
    let orth = &pb - psi * psi.dotc(&pb);
    StateVector::normalized(psi + orth * mats::c(eps, 0.0)).expect("push keeps a nonzero component along psi")
}

/// Picks B among 𝟙 and seeded Haar unitaries, maximizing the smallest pushed overlap
/// over vertices and edge midpoints.
fn choose_push(family: &StateFamily, p: &CMatrix) -> (CMatrix, f64) {
    let d = p.nrows();
    let mut rng = sample::rng(0xb005);
    let mut candidates = vec![mats::identity(d)];
    candidates.extend((0..PUSH_CANDIDATES).map(|_| sample::unitary(&mut rng, d)));
    let mut probes: Vec<CVector> = family.states().iter().map(|s| s.coords().clone()).collect();
    for &(i, j) in &family.grid().edges {
        let (a, b) = (family.states()[i].coords(), family.states()[j].coords());
        let m = a + b;
        if m.norm() > 1e-9 {
            probes.push(m.unscale(m.norm()));
        }
    }
    candidates
        .into_iter()
        .map(|b| {
            let score = probes
                .iter()
                .map(|v| {
                    let ov = (p * v).norm_squared();
                    (p * push(v, &b, p, 1.0 - ov).coords()).norm_squared()
                })
                .fold(f64::INFINITY, f64::min);
            (b, score)
        })
        .fold((mats::identity(d), f64::NEG_INFINITY), |best, cand| {
            if cand.1 > best.1 {
                cand
            } else {
                best
            }
        })
}

/// One level of the dyadic schedule.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LevelRecord {
    pub level: usize,
    pub t_start: f64,
    pub t_end: f64,
    pub route: DeformRoute,
    pub corner_rank: usize,
    /// `max_x ‖𝟙 − U_i(x,1)‖`.
    pub max_distance: f64,
    /// `max_x |1 − ψ_x^{(i)}(P_i)|` after the level.
    pub capture_defect: f64,
    /// `max ‖[U_i(x,s), P_{i−1}]‖`.
    pub corner_defect: f64,
}

/// `V(x,t)` sampled on a grid × time mesh, with `H(x,t) = V(x,t)ψ_x` and `H(x,1)` the reference.
#[derive(Clone, Debug)]
pub struct HomotopyTrace {
    pub family: StateFamily,
    pub reference: PureState,
    pub depth: usize,
    pub times: Vec<f64>,
    /// `level_of[k]`: the level whose window contains `times[k]` (0 for `t = 0`, `depth + 1` for the tail).
    pub level_of: Vec<usize>,
    /// `unitaries[x][k] = V(x, times[k])`.
    pub unitaries: Vec<Vec<CMatrix>>,
    pub levels: Vec<LevelRecord>,
}

/// Start of the level-i window, `1 − 2^{−i+1}`.
pub fn window_start(level: usize) -> f64 {
    1.0 - 0.5f64.powi(level as i32 - 1)
}

impl HomotopyTrace {
    /// `H(x, times[k])`.
    pub fn state(&self, vertex: usize, k: usize) -> Result<PureState> {
        crate::state::act(&self.unitaries[vertex][k], &self.family.states()[vertex])
    }

    /// `H(x, times[k])(B) = ⟨VΨ_x, B VΨ_x⟩`.
    pub fn evaluate(&self, vertex: usize, k: usize, b: &CMatrix) -> Result<f64> {
        let v = &self.unitaries[vertex][k] * self.family.states()[vertex].coords();
        Ok(v.dotc(&(b * &v)).re)
    }

    /// `H(x,1)(B)`, i.e. the reference value.
    pub fn evaluate_at_one(&self, b: &CMatrix) -> Result<f64> {
        Ok(self.reference.evaluate(b)?.re)
    }

    /// Largest `‖𝟙 − V(x₀,t)‖` over recorded times.
    pub fn base_defect(&self) -> f64 {
        self.unitaries[self.family.base_vertex()]
            .iter()
            .map(mats::dist_from_identity)
            .fold(0.0, f64::max)
    }

    /// Largest `‖𝟙 − V(x,0)‖`.
    pub fn start_defect(&self) -> f64 {
        self.unitaries
            .iter()
            .map(|u| mats::dist_from_identity(&u[0]))
            .fold(0.0, f64::max)
    }

    /// `max |1 − H(x,t)(P_j)|` over `j ≤ i` and `t` at or after the end of level i.
    pub fn capture_defect(&self, projections: &[Projection]) -> f64 {
        let mut worst = 0.0f64;
        for (i, p) in projections.iter().enumerate().take(self.depth) {
            let t_end = window_start(i + 2);
            for (k, &t) in self.times.iter().enumerate() {
                if t < t_end - 1e-15 {
                    continue;
                }
                for x in 0..self.family.len() {
                    let v = &self.unitaries[x][k] * self.family.states()[x].coords();
                    worst = worst.max((1.0 - (p.matrix() * v).norm_squared()).abs());
                }
            }
        }
        worst
    }
}

#[derive(Clone, Debug)]
pub struct IterationConfig {
    /// Samples per level window, endpoints included.
    pub level_points: usize,
    /// Samples `1 − 2^{−depth−j}`, `j = 1..tail_points`, after the last window.
    pub tail_points: usize,
}

impl Default for IterationConfig {
    fn default() -> Self {
        IterationConfig {
            level_points: 33,
            tail_points: 4,
        }
    }
}

/// Runs levels `i = 1..depth` of the dyadic schedule.
///
/// Level i deforms the family, restricted to the corner `P_{i−1}𝔄P_{i−1}`, onto
/// `P_i`; its unitaries are re-embedded as `WŨW* + 𝟙 − P_{i−1}`. On the window
/// `[1 − 2^{−i+1}, 1 − 2^{−i}]`, `V(x,t) = U_i(x,s)U_{i−1}(x,1)⋯U_1(x,1)`.
pub fn iterate_contraction(
    family: &StateFamily,
    reference: &PureState,
    depth: usize,
    cfg: &IterationConfig,
) -> Result<HomotopyTrace> {
    if reference.shape() != family.shape() {
        return Err(Error::ShapeMismatch("reference and family live on different algebras".into()));
    }
    let projections = excision_projections(family.shape(), reference)?;
    if depth > projections.len() {
        return Err(Error::Range(format!(
            "depth {depth} exceeds the {} tensor factors",
            projections.len()
        )));
    }
    let base_gap = family.base_state().distance(reference);
    if base_gap > 1e-10 {
        return Err(Error::Precondition {
            name: "base state = reference",
            detail: format!("distance {base_gap:.3e}"),
        });
    }
    let d = family.shape().total_dim();
    let nv = family.len();
    let eye = mats::identity(d);

    let mut times = vec![0.0];
    let mut level_of = vec![0];
    let mut unitaries: Vec<Vec<CMatrix>> = vec![vec![eye.clone()]; nv];
    let mut levels = Vec::with_capacity(depth);
    let mut accumulated: Vec<CMatrix> = vec![eye.clone(); nv];
    let mut previous = Projection::identity(family.shape().clone());

    for (i, p_i) in projections.iter().enumerate().take(depth) {
        let level = i + 1;
        let current = family.acted(&accumulated)?;
        let corner = CornerData::new(&previous);
        let corner_states = current
            .states()
            .iter()
            .map(|s| compress_state_with(s, &previous, CORNER_TOL).map(|c| c.state))
            .collect::<Result<Vec<_>>>()
            .map_err(|e| match e {
                Error::NotCaptured { overlap } => Error::Precondition {
                    name: "earlier levels captured",
                    detail: format!("level {level}: overlap with P_{i} is {overlap:.3e}"),
                },
                other => other,
            })?;
        let corner_family = StateFamily::new(family.grid().clone(), corner_states, family.base_vertex())?;
        let corner_p = corner.compress_projection(p_i)?;
        let deformation = deform_family_onto_projection(&corner_family, &corner_p, cfg.level_points).map_err(|e| match e {
            Error::Obstruction(mut ob) => {
                ob.level = Some(level);
                Error::Obstruction(ob)
            }
            other => other,
        })?;

        let (t0, t1) = (window_start(level), window_start(level + 1));
        let mut corner_defect = 0.0f64;
        let lifted: Vec<Vec<CMatrix>> = deformation
            .paths
            .iter()
            .map(|path| path.iter().map(|u| corner.extend_unitary(u)).collect())
            .collect();
        for path in &lifted {
            for u in path {
                corner_defect = corner_defect.max(operator_norm(&(u * previous.matrix() - previous.matrix() * u)));
            }
        }
        for (k, &s) in deformation.times.iter().enumerate().skip(1) {
            times.push(if k + 1 == deformation.times.len() {
                t1
            } else {
                t0 + s * (t1 - t0)
            });
            level_of.push(level);
            for x in 0..nv {
                unitaries[x].push(&lifted[x][k] * &accumulated[x]);
            }
        }
        for x in 0..nv {
            accumulated[x] = lifted[x].last().unwrap() * &accumulated[x];
        }
        let capture_defect = family
            .states()
            .iter()
            .zip(&accumulated)
            .map(|(s, u)| (1.0 - (p_i.matrix() * (u * s.coords())).norm_squared()).abs())
            .fold(0.0, f64::max);
        levels.push(LevelRecord {
            level,
            t_start: t0,
            t_end: t1,
            route: deformation.route,
            corner_rank: corner.rank(),
            max_distance: lifted
                .iter()
                .map(|p| mats::dist_from_identity(p.last().unwrap()))
                .fold(0.0, f64::max),
            capture_defect,
            corner_defect,
        });
        previous = p_i.clone();
    }

    if depth > 0 {
        for j in 1..=cfg.tail_points {
            times.push(1.0 - 0.5f64.powi((depth + j) as i32));
            level_of.push(depth + 1);
            for x in 0..nv {
                unitaries[x].push(accumulated[x].clone());
            }
        }
    } else {
        times.push(0.5);
        level_of.push(1);
        for u in unitaries.iter_mut() {
            u.push(eye.clone());
        }
    }
    Ok(HomotopyTrace {
        family: family.clone(),
        reference: reference.clone(),
        depth,
        times,
        level_of,
        unitaries,
        levels,
    })
}

/// A named observable supported on the first `depth` tensor factors.
#[derive(Clone, Debug)]
pub struct Observable {
    pub name: String,
    pub matrix: CMatrix,
    pub depth: usize,
}

impl Observable {
    pub fn new(name: impl Into<String>, matrix: CMatrix, depth: usize) -> Self {
        Observable {
            name: name.into(),
            matrix,
            depth,
        }
    }

    /// `op` acting on factor `k` (0-based); supported on the first `k + 1` factors.
    pub fn local(shape: &AlgebraShape, name: impl Into<String>, op: &CMatrix, k: usize) -> Result<Self> {
        Ok(Observable {
            name: name.into(),
            matrix: shape.embed_local(op, k)?,
            depth: k + 1,
        })
    }

    /// `op` acting on the first `n` factors.
    pub fn leading(shape: &AlgebraShape, name: impl Into<String>, op: &CMatrix, n: usize) -> Result<Self> {
        Ok(Observable {
            name: name.into(),
            matrix: shape.embed_leading(op, n)?,
            depth: n,
        })
    }

    pub fn identity(shape: &AlgebraShape) -> Self {
        Observable {
            name: "identity".into(),
            matrix: mats::identity(shape.total_dim()),
            depth: 0,
        }
    }
}

/// Pauli-type test observables on each of the first `n` factors of a qubit chain, plus their
/// nearest-neighbour products.
pub fn qubit_observables(shape: &AlgebraShape, n: usize) -> Result<Vec<Observable>> {
    let x = CMatrix::from_row_slice(2, 2, &[mats::c(0., 0.), mats::c(1., 0.), mats::c(1., 0.), mats::c(0., 0.)]);
    let y = CMatrix::from_row_slice(2, 2, &[mats::c(0., 0.), mats::c(0., -1.), mats::c(0., 1.), mats::c(0., 0.)]);
    let z = CMatrix::from_row_slice(2, 2, &[mats::c(1., 0.), mats::c(0., 0.), mats::c(0., 0.), mats::c(-1., 0.)]);
    let mut out = vec![Observable::identity(shape)];
    for k in 0..n {
        for (label, op) in [("X", &x), ("Y", &y), ("Z", &z)] {
            out.push(Observable::local(shape, format!("{label}{}", k + 1), op, k)?);
        }
        if k + 1 < n {
            out.push(Observable::leading(
                shape,
                format!("Z{}Z{}", k + 1, k + 2),
                &lead_pair(&z, k),
                k + 2,
            )?);
        }
    }
    Ok(out)
}

fn lead_pair(z: &CMatrix, k: usize) -> CMatrix {
    let mut m = mats::identity(1);
    for _ in 0..k {
        m = mats::kron(&m, &mats::identity(2));
    }
    mats::kron(&mats::kron(&m, z), z)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ObservableReport {
    pub name: String,
    pub depth: usize,
    pub reference_value: f64,
    /// `1 − 2^{−n−1}`.
    pub window_start: f64,
    /// False when `depth` exceeds the realized trace depth; values are reported, not asserted.
    pub tail_guaranteed: bool,
    pub max_tail_deviation: f64,
    pub max_deviation: f64,
    pub exceeded: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct WeakStarReport {
    pub tolerance: f64,
    pub observables: Vec<ObservableReport>,
    pub passed: bool,
}

/// Default tail tolerance.
pub const TAIL_TOL: f64 = 1e-8;

/// Reports `|H(x,t)(B) − ψ_{x₀}(B)|` over the tail window `t ≥ 1 − 2^{−n−1}` of each observable.
pub fn weak_star_convergence_check(
    trace: &HomotopyTrace,
    family: &StateFamily,
    observables: &[Observable],
    tol: f64,
) -> Result<WeakStarReport> {
    let factors = family.shape().factors();
    let reference = family.base_state();
    let mut out = Vec::with_capacity(observables.len());
    for ob in observables {
        if ob.depth > factors {
            return Err(Error::Range(format!(
                "observable {} has depth {} beyond the {factors} factors",
                ob.name, ob.depth
            )));
        }
        let reference_value = reference.evaluate(&ob.matrix)?.re;
        let window = 1.0 - 0.5f64.powi(ob.depth as i32 + 1);
        let tail_guaranteed = ob.depth <= trace.depth;
        let mut max_tail = 0.0f64;
        let mut max_any = 0.0f64;
        for x in 0..family.len() {
            for (k, &t) in trace.times.iter().enumerate() {
                let dev = (trace.evaluate(x, k, &ob.matrix)? - reference_value).abs();
                max_any = max_any.max(dev);
                if t >= window {
                    max_tail = max_tail.max(dev);
                }
            }
        }
        out.push(ObservableReport {
            name: ob.name.clone(),
            depth: ob.depth,
            reference_value,
            window_start: window,
            tail_guaranteed,
            max_tail_deviation: max_tail,
            max_deviation: max_any,
            exceeded: tail_guaranteed && max_tail > tol,
        });
    }
    let passed = out.iter().all(|o| !o.exceeded);
    Ok(WeakStarReport {
        tolerance: tol,
        observables: out,
        passed,
    })
}

/// One `(vertex, time, observable, value)` row.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ObservableRow {
    pub vertex: usize,
    pub time: f64,
    pub observable: String,
    pub value: f64,
}

/// Evaluations at every recorded time, plus `t = 1` (the reference).
pub fn observable_rows(trace: &HomotopyTrace, observables: &[Observable]) -> Result<Vec<ObservableRow>> {
    let mut rows = Vec::new();
    for x in 0..trace.family.len() {
        for ob in observables {
            for (k, &time) in trace.times.iter().enumerate() {
                rows.push(ObservableRow {
                    vertex: x,
                    time,
                    observable: ob.name.clone(),
                    value: trace.evaluate(x, k, &ob.matrix)?,
                });
            }
            rows.push(ObservableRow {
                vertex: x,
                time: 1.0,
                observable: ob.name.clone(),
                value: trace.evaluate_at_one(&ob.matrix)?,
            });
        }
    }
    Ok(rows)
}

/// `[re, im]` rows of a matrix.
pub type MatrixDoc = Vec<Vec<[f64; 2]>>;

fn matrix_doc(m: &CMatrix) -> MatrixDoc {
    (0..m.nrows())
        .map(|i| (0..m.ncols()).map(|j| [m[(i, j)].re, m[(i, j)].im]).collect())
        .collect()
}

/// Structured form of a [`HomotopyTrace`].
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct TraceDocument {
    pub grid: SampledComplex,
    pub factor_dims: Vec<usize>,
    pub base_vertex: usize,
    pub depth: usize,
    pub times: Vec<f64>,
    pub level_of: Vec<usize>,
    pub levels: Vec<LevelRecord>,
    pub base_defect: f64,
    pub observables: Vec<ObservableRow>,
    pub weak_star: Option<WeakStarReport>,
    /// `unitaries[x][k]`, present only when requested.
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub unitaries: Option<Vec<Vec<MatrixDoc>>>,
}

impl TraceDocument {
    pub fn new(
        trace: &HomotopyTrace,
        observables: &[Observable],
        weak_star: Option<WeakStarReport>,
        emit_unitaries: bool,
    ) -> Result<Self> {
        Ok(TraceDocument {
            grid: trace.family.grid().clone(),
            factor_dims: trace.family.shape().factor_dims().to_vec(),
            base_vertex: trace.family.base_vertex(),
            depth: trace.depth,
            times: trace.times.clone(),
            level_of: trace.level_of.clone(),
            levels: trace.levels.clone(),
            base_defect: trace.base_defect(),
            observables: observable_rows(trace, observables)?,
            weak_star,
            unitaries: emit_unitaries.then(|| {
                trace
                    .unitaries
                    .iter()
                    .map(|path| path.iter().map(matrix_doc).collect())
                    .collect()
            }),
        })
    }

    pub fn write_json(&self, path: &Path) -> Result<()> {
        std::fs::write(path, serde_json::to_string_pretty(self)?)?;
        Ok(())
    }

    pub fn write_observables_csv(&self, path: &Path) -> Result<()> {
        let mut w = csv::Writer::from_path(path)?;
        for row in &self.observables {
            w.serialize(row)?;
        }
        w.flush()?;
        Ok(())
    }
}

/// A circle family on a qubit chain that starts and ends at the reference
/// `e₁^{⊗m}`: `Ψ_x = normalize(e₁^{⊗m} + a(1 − cos x)v₁ + a sin x·v₂)`.
pub fn circle_family(shape: &AlgebraShape, vertices: usize, amplitude: f64, seed: u64) -> Result<(StateFamily, PureState)> {
    let d = shape.total_dim();
    let reference = PureState::new(shape.clone(), StateVector::basis(d, 0))?;
    let mut rng = sample::rng(seed);
    let v1 = sample::gaussian_vector(&mut rng, d);
    let v2 = sample::gaussian_vector(&mut rng, d);
    let (v1, v2) = (v1.unscale(v1.norm()), v2.unscale(v2.norm()));
    let grid = SampledComplex::circle(vertices);
    let states = grid
        .points
        .iter()
        .map(|p| {
            let x = p[0];
            let v =
                reference.coords() + &v1 * mats::c(amplitude * (1.0 - x.cos()), 0.0) + &v2 * mats::c(amplitude * x.sin(), 0.0);
            PureState::new(shape.clone(), StateVector::normalized(v)?)
        })
        .collect::<Result<Vec<_>>>()?;
    Ok((StateFamily::new(grid, states, 0)?, reference))
}

/// The identity family `S² → 𝒫(M₂)`: Bloch vector `n ↦` its pure state.
pub fn bloch_sphere_family(level: usize) -> Result<StateFamily> {
    let grid = SampledComplex::sphere(level);
    let states = grid
        .points
        .iter()
        .map(|p| {
            let (x, y, z) = (p[0], p[1], p[2]);
            let theta = z.clamp(-1.0, 1.0).acos();
            let phi = y.atan2(x);
            let v = StateVector::from_slice(&[
                mats::c((theta / 2.0).cos(), 0.0),
                num_complex::Complex64::from_polar((theta / 2.0).sin(), phi),
            ])?;
            PureState::new(AlgebraShape::single(2), v)
        })
        .collect::<Result<Vec<_>>>()?;
    StateFamily::new(grid, states, 0)
}

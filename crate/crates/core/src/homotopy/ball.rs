use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::complex::SampledComplex;
use crate::error::{Error, Obstruction, Result};
use crate::geodesic::{geodesic_matrix, StateVector};
use crate::mats::{self, operator_norm, CMatrix, CVector};
use crate::state::{CornerData, Projection};

use super::deform::{corner_align_in, corner_beta, deform_to_geodesic, log_contraction};
use super::sphere::{choose_pole, lift_curve, StereographicChart};
use super::{uniform_grid, UnitaryPath};

/// Upper end of the admissible δ range.
pub const DELTA_MAX: f64 = 1.0 / 1296.0;
/// Window on δ for the zero-overlap construction.
pub const ZERO_OVERLAP_WINDOW: f64 = 7.0 / 16.0;
/// Window on δ for the small-overlap construction.
pub const SMALL_OVERLAP_WINDOW: f64 = 1.0 / 36.0;
/// Stages are required to meet within this distance.
const JOIN_TOL: f64 = 1e-9;
/// Clearance below which the pole is treated as hit by the family.
const POLE_CLEARANCE_MIN: f64 = 1e-6;

/// `S = {U : ‖PUΨ‖² ≥ t}` together with the ball radius δ.
#[derive(Clone, Debug)]
pub struct SBall {
    pub psi: StateVector,
    pub p: Projection,
    pub t_level: f64,
    pub delta: f64,
}

impl SBall {
    pub fn new(psi: StateVector, p: Projection, t_level: f64, delta: f64) -> Result<Self> {
        if psi.dim() != p.matrix().nrows() {
            return Err(Error::DimensionMismatch {
                expected: p.matrix().nrows(),
                got: psi.dim(),
            });
        }
        if !(0.0..=0.25).contains(&t_level) {
            return Err(Error::Range(format!("t = {t_level} outside [0, 1/4]")));
        }
        if delta.is_nan() || delta <= 0.0 {
            return Err(Error::Range(format!("delta = {delta} is not positive")));
        }
        Ok(SBall { psi, p, t_level, delta })
    }

    /// `‖PUΨ‖² − t`; nonnegative exactly on S.
    pub fn s_slack(&self, u: &CMatrix) -> f64 {
        (self.p.matrix() * (u * self.psi.coords())).norm_squared() - self.t_level
    }

    /// `‖PΨ‖²`.
    pub fn p_overlap(&self) -> f64 {
        (self.p.matrix() * self.psi.coords()).norm_squared()
    }

    /// True when `(‖PΨ‖ + δ)² < t`, which forces `B_δ(𝟙) ∩ S = ∅`.
    pub fn provably_empty(&self) -> bool {
        (self.p_overlap().sqrt() + self.delta).powi(2) < self.t_level
    }
}

/// Data of the set `R = {U : ⟨Ω,UΨ⟩ ∈ [√t, 1), ⟨Φ,UΨ⟩ = √(1 − ⟨Ω,UΨ⟩²)}`.
#[derive(Clone, Debug)]
pub struct RSetup {
    pub psi: StateVector,
    pub omega: StateVector,
    pub phi: StateVector,
    pub t_level: f64,
}

impl RSetup {
    pub fn new(psi: StateVector, omega: StateVector, phi: StateVector, t_level: f64) -> Result<Self> {
        let (po, fp, fo) = (psi.inner(&omega), phi.inner(&psi), phi.inner(&omega));
        if po.re < -1e-12 || po.im.abs() > 1e-10 {
            return Err(Error::Precondition {
                name: "<psi, omega> >= 0",
                detail: format!("{po}"),
            });
        }
        if fp.re <= 0.0 || fp.im.abs() > 1e-10 {
            return Err(Error::Precondition {
                name: "<phi, psi> > 0",
                detail: format!("{fp}"),
            });
        }
        if fo.norm() > 1e-10 {
            return Err(Error::Precondition {
                name: "<phi, omega> = 0",
                detail: format!("{fo}"),
            });
        }
        Ok(RSetup {
            psi,
            omega,
            phi,
            t_level,
        })
    }

    /// Defect of membership in R (0 for members).
    pub fn membership_defect(&self, u: &CMatrix) -> f64 {
        let v = u * self.psi.coords();
        let a = self.omega.coords().dotc(&v);
        let b = self.phi.coords().dotc(&v);
        let low = (self.t_level.sqrt() - a.re).max(0.0);
        let high = (a.re - 1.0).max(0.0);
        let curve = (b - (1.0 - a.re * a.re).max(0.0).sqrt()).norm();
        a.im.abs().max(low).max(high).max(curve)
    }
}

/// Output of [`contract_in_r`].
#[derive(Clone, Debug)]
pub struct RContraction {
    pub paths: Vec<UnitaryPath>,
    /// Largest `‖𝟙 − ·‖` over the deformation stage, per member.
    pub stage1_max: Vec<f64>,
    /// Largest `‖𝟙 − ·‖` over the straight-line stage, per member.
    pub stage2_max: Vec<f64>,
    /// Smallest `‖sU₀Ψ + (1−s)UΨ‖` seen.
    pub min_denominator: f64,
    /// Largest R-membership defect over all samples.
    pub max_r_defect: f64,
    /// The common endpoint `𝒰(Ψ, U₀Ψ)`.
    pub endpoint: CMatrix,
}

/// Path, stage-one max, stage-two max, smallest denominator, largest R-defect.
type MemberRun = (UnitaryPath, f64, f64, f64, f64);

/// Contracts a family in `B_ζ(𝟙) ∩ R` to the point `𝒰(Ψ, U₀Ψ)`, `U₀ = members[0]`.
///
/// Stage 1 is [`deform_to_geodesic`]; stage 2 is `s ↦ 𝒰(Ψ, Υ̂)` with
/// `Υ = sU₀Ψ + (1−s)UΨ`. Samples stay within `3ζ` of 𝟙.
pub fn contract_in_r(members: &[CMatrix], zeta: f64, setup: &RSetup, grid: &[f64]) -> Result<RContraction> {
    if !(zeta > 0.0 && zeta <= 1.0) {
        return Err(Error::Range(format!("zeta = {zeta} outside (0, 1]")));
    }
    let first = members.first().ok_or_else(|| Error::Range("empty family".into()))?;
    for (k, u) in members.iter().enumerate() {
        let dist = mats::dist_from_identity(u);
        if dist >= zeta + 1e-10 {
            return Err(Error::Precondition {
                name: "family in B_zeta(1)",
                detail: format!("member {k} at distance {dist:.6e} >= {zeta:.6e}"),
            });
        }
        let defect = setup.membership_defect(u);
        if defect > 1e-8 {
            return Err(Error::Precondition {
                name: "family in R",
                detail: format!("member {k} has R-defect {defect:.3e}"),
            });
        }
    }
    let psi = &setup.psi;
    let target = first * psi.coords();
    let results: Vec<Result<MemberRun>> = members
        .par_iter()
        .map(|u| {
            let stage1 = deform_to_geodesic(u, psi, grid)?;
            let start = u * psi.coords();
            let mut min_den = f64::INFINITY;
            let mut samples = Vec::with_capacity(grid.len());
            for &s in grid {
                let ups: CVector = &target * mats::c(s, 0.0) + &start * mats::c(1.0 - s, 0.0);
                min_den = min_den.min(ups.norm());
                samples.push(geodesic_matrix(psi, &StateVector::normalized(ups)?));
            }
            let stage2 = UnitaryPath::new(grid.to_vec(), samples)?;
            let defect = stage1
                .unitaries()
                .iter()
                .chain(stage2.unitaries())
                .map(|w| setup.membership_defect(w))
                .fold(0.0, f64::max);
            let (m1, m2) = (stage1.max_dist_from_identity(), stage2.max_dist_from_identity());
            Ok((UnitaryPath::concat(&[stage1, stage2], JOIN_TOL)?, m1, m2, min_den, defect))
        })
        .collect();
    let mut out = RContraction {
        paths: Vec::with_capacity(members.len()),
        stage1_max: Vec::new(),
        stage2_max: Vec::new(),
        min_denominator: f64::INFINITY,
        max_r_defect: 0.0,
        endpoint: geodesic_matrix(psi, &StateVector::normalized(target)?),
    };
    for r in results {
        let (path, m1, m2, den, defect) = r?;
        out.paths.push(path);
        out.stage1_max.push(m1);
        out.stage2_max.push(m2);
        out.min_denominator = out.min_denominator.min(den);
        out.max_r_defect = out.max_r_defect.max(defect);
    }
    Ok(out)
}

/// Which construction [`contract_in_s`] ran.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Branch {
    /// No members were given.
    Empty,
    /// `‖PΨ‖² ≥ t + 2δ`: the whole ball lies in S and is contracted along logarithms.
    LargeOverlapWholeBall,
    /// `2δ ≤ ‖PΨ‖² < t + 2δ`: align in `𝟙−P`, align in P, then contract in R.
    LargeOverlap,
    /// `‖PΨ‖² < 2δ`, `t = 0`: move Ψ off P, contract along logarithms, move back.
    SmallOverlapUnconstrained,
    /// `‖PΨ‖² < 2δ`, `t > 0`: move Ψ off P, then sphere contraction, lift, align, contract in R.
    SmallOverlap,
}

impl Branch {
    pub fn name(&self) -> &'static str {
        match self {
            Branch::Empty => "empty",
            Branch::LargeOverlapWholeBall => "large_overlap_whole_ball",
            Branch::LargeOverlap => "large_overlap",
            Branch::SmallOverlapUnconstrained => "small_overlap_unconstrained",
            Branch::SmallOverlap => "small_overlap",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Thresholds {
    pub delta_max: f64,
    pub large_small_split: f64,
    pub whole_ball: f64,
    pub zero_overlap_window: f64,
    pub small_overlap_window: f64,
}

/// Realized distance of one stage against its bound.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct StageRecord {
    pub name: String,
    pub bound_label: String,
    pub bound: f64,
    pub realized: f64,
    pub margin: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ConstantRecord {
    pub label: String,
    pub value: f64,
    pub realized: f64,
    pub margin: f64,
}

/// Summary of one [`contract_in_s`] run.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ContractionReport {
    pub branch: Branch,
    pub delta: f64,
    pub t_level: f64,
    pub p_overlap: f64,
    pub thresholds: Thresholds,
    pub members: usize,
    pub samples_per_member: usize,
    pub stages: Vec<StageRecord>,
    pub constants: Vec<ConstantRecord>,
    pub max_distance: f64,
    pub branch_constant: f64,
    pub overall_bound: f64,
    pub margin: f64,
    /// `min (‖PXΨ‖² − t)` over every emitted sample.
    pub min_s_slack: f64,
    /// `max ‖end_k − end_0‖`.
    pub endpoint_spread: f64,
    pub max_step: f64,
    /// Distance from the chosen pole to the sampled corner vectors.
    pub pole_clearance: Option<f64>,
    /// `‖𝟙 − V‖` for the unitary moving Ψ off P.
    pub move_distance: Option<f64>,
    /// Smallest straight-line denominator in the R stage.
    pub min_denominator: Option<f64>,
    pub ball_provably_empty: bool,
    pub notes: Vec<String>,
}

/// One row of the margins table.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MarginRow {
    pub vertex: usize,
    pub time: f64,
    pub distance: f64,
    pub branch_constant: f64,
    pub margin: f64,
}

#[derive(Clone, Debug)]
pub struct Contraction {
    pub paths: Vec<UnitaryPath>,
    pub report: ContractionReport,
}

impl Contraction {
    pub fn margin_rows(&self) -> Vec<MarginRow> {
        let k = self.report.branch_constant;
        let mut rows = Vec::new();
        for (vertex, path) in self.paths.iter().enumerate() {
            for (t, u) in path.times().iter().zip(path.unitaries()) {
                let distance = mats::dist_from_identity(u);
                rows.push(MarginRow {
                    vertex,
                    time: *t,
                    distance,
                    branch_constant: k,
                    margin: k - distance,
                });
            }
        }
        rows
    }
}

#[derive(Clone, Debug)]
pub struct ContractionConfig {
    /// Samples per stage.
    pub grid_points: usize,
    /// Seed for the pole search of the sphere step.
    pub seed: u64,
}

impl Default for ContractionConfig {
    fn default() -> Self {
        ContractionConfig {
            grid_points: 33,
            seed: 0x5eed,
        }
    }
}

struct StageMax {
    name: &'static str,
    label: String,
    bound: f64,
    realized: f64,
}

impl StageMax {
    fn new(name: &'static str, label: impl Into<String>, bound: f64) -> Self {
        StageMax {
            name,
            label: label.into(),
            bound,
            realized: 0.0,
        }
    }

    fn record(&self) -> StageRecord {
        StageRecord {
            name: self.name.into(),
            bound_label: self.label.clone(),
            bound: self.bound,
            realized: self.realized,
            margin: self.bound - self.realized,
        }
    }
}

/// Contracts a sampled family in `B_δ(𝟙) ∩ S` to a single unitary inside `B_{39√δ}(𝟙) ∩ S`.
///
/// Dispatches on `‖PΨ‖² ≥ 2δ`. The returned paths start at the members and share
/// their endpoint. The zero-overlap step needs `n ≤ 2r − 2` (n the dimension of
/// `complex`, r the rank of P); otherwise an [`Obstruction`] is returned.
pub fn contract_in_s(
    complex: &SampledComplex,
    members: &[CMatrix],
    ball: &SBall,
    cfg: &ContractionConfig,
) -> Result<Contraction> {
    let delta = ball.delta;
    if !(delta > 0.0 && delta < DELTA_MAX) {
        return Err(Error::Range(format!("delta = {delta} outside (0, 1/1296)")));
    }
    if !members.is_empty() && members.len() != complex.len() {
        return Err(Error::DimensionMismatch {
            expected: complex.len(),
            got: members.len(),
        });
    }
    let d = ball.psi.dim();
    for (k, u) in members.iter().enumerate() {
        mats::check_unitary(u, &mats::Tolerances::default())?;
        if u.nrows() != d {
            return Err(Error::DimensionMismatch {
                expected: d,
                got: u.nrows(),
            });
        }
        let dist = mats::dist_from_identity(u);
        let slack = ball.s_slack(u);
        if dist >= delta + 1e-10 || slack < -1e-10 {
            return Err(Error::Precondition {
                name: "family in B_delta(1) and S",
                detail: format!("member {k}: distance {dist:.6e} (delta {delta:.6e}), S-slack {slack:.3e}"),
            });
        }
    }
    let a = ball.p_overlap();
    let t = ball.t_level;
    let grid = uniform_grid(cfg.grid_points);
    let mut report = ContractionReport {
        branch: Branch::Empty,
        delta,
        t_level: t,
        p_overlap: a,
        thresholds: Thresholds {
            delta_max: DELTA_MAX,
            large_small_split: 2.0 * delta,
            whole_ball: t + 2.0 * delta,
            zero_overlap_window: ZERO_OVERLAP_WINDOW,
            small_overlap_window: SMALL_OVERLAP_WINDOW,
        },
        members: members.len(),
        samples_per_member: 0,
        stages: Vec::new(),
        constants: Vec::new(),
        max_distance: 0.0,
        branch_constant: 39.0 * delta.sqrt(),
        overall_bound: 39.0 * delta.sqrt(),
        margin: 39.0 * delta.sqrt(),
        min_s_slack: f64::INFINITY,
        endpoint_spread: 0.0,
        max_step: 0.0,
        pole_clearance: None,
        move_distance: None,
        min_denominator: None,
        ball_provably_empty: ball.provably_empty(),
        notes: Vec::new(),
    };
    if members.is_empty() {
        report.notes.push(if report.ball_provably_empty {
            "(norm(P psi) + delta)^2 < t, so B_delta(1) and S do not meet".into()
        } else {
            "no members given".into()
        });
        return Ok(Contraction {
            paths: Vec::new(),
            report,
        });
    }

    let (paths, stages) = if a >= 2.0 * delta {
        report.branch_constant = 39.0 * delta.sqrt();
        if a >= t + 2.0 * delta {
            report.branch = Branch::LargeOverlapWholeBall;
            whole_ball(members, delta, &grid)?
        } else {
            report.branch = Branch::LargeOverlap;
            large_overlap(members, ball, &grid, &mut report)?
        }
    } else {
        report.branch_constant = 32.0 * delta.sqrt();
        report.branch = if t == 0.0 {
            Branch::SmallOverlapUnconstrained
        } else {
            Branch::SmallOverlap
        };
        small_overlap(complex, members, ball, &grid, cfg, &mut report)?
    };

    report.samples_per_member = paths[0].len();
    report.stages = stages.iter().map(StageMax::record).collect();
    report.max_distance = paths.iter().map(|p| p.max_dist_from_identity()).fold(0.0, f64::max);
    report.max_step = paths.iter().map(|p| p.max_step()).fold(0.0, f64::max);
    report.min_s_slack = paths
        .iter()
        .flat_map(|p| p.unitaries().iter().map(|u| ball.s_slack(u)))
        .fold(f64::INFINITY, f64::min);
    report.endpoint_spread = paths
        .iter()
        .map(|p| operator_norm(&(p.end() - paths[0].end())))
        .fold(0.0, f64::max);
    report.margin = report.overall_bound - report.max_distance;
    let sd = delta.sqrt();
    let gamma = (2.0 * delta / (1.0 - 2.0 * delta)).sqrt();
    let dp = delta + gamma;
    let constants: Vec<(String, f64)> = match report.branch {
        Branch::LargeOverlapWholeBall | Branch::LargeOverlap => vec![("39√δ".into(), 39.0 * sd)],
        _ => vec![
            ("12δ' + γ, δ' = δ + γ".into(), 12.0 * dp + gamma),
            ("12δ + 13γ".into(), 12.0 * delta + 13.0 * gamma),
            ("32√δ".into(), 32.0 * sd),
            ("39√δ".into(), 39.0 * sd),
        ],
    };
    report.constants = constants
        .into_iter()
        .map(|(label, value)| ConstantRecord {
            label,
            value,
            realized: report.max_distance,
            margin: value - report.max_distance,
        })
        .collect();
    Ok(Contraction { paths, report })
}

fn whole_ball(members: &[CMatrix], delta: f64, grid: &[f64]) -> Result<(Vec<UnitaryPath>, Vec<StageMax>)> {
    let paths: Vec<UnitaryPath> = members.par_iter().map(|u| log_contraction(u, grid)).collect::<Result<_>>()?;
    let mut st = StageMax::new("log_contraction", "δ", delta);
    st.realized = paths.iter().map(|p| p.max_dist_from_identity()).fold(0.0, f64::max);
    Ok((paths, vec![st]))
}

fn max_dist(paths: &[UnitaryPath]) -> f64 {
    paths.iter().map(|p| p.max_dist_from_identity()).fold(0.0, f64::max)
}

fn large_overlap(
    members: &[CMatrix],
    ball: &SBall,
    grid: &[f64],
    report: &mut ContractionReport,
) -> Result<(Vec<UnitaryPath>, Vec<StageMax>)> {
    let delta = ball.delta;
    let sd = delta.sqrt();
    let psi = &ball.psi;
    let q_corner = CornerData::new(&ball.p.complement());
    let p_corner = CornerData::new(&ball.p);
    let gamma_q = 45.0 / 64.0;
    let gamma_p = (2.0 * delta).sqrt() - delta;
    let p_norm = ball.p_overlap().sqrt();
    let q_norm = (1.0 - ball.p_overlap()).max(0.0).sqrt();
    report.notes.push(format!(
        "beta for 1-P: {:.6}; beta for P: {:.6}",
        corner_beta(gamma_q, delta, q_norm),
        corner_beta(gamma_p, 4.0 * delta, p_norm)
    ));

    let aligned: Vec<(UnitaryPath, UnitaryPath)> = members
        .par_iter()
        .map(|u| {
            let h1 = corner_align_in(&q_corner, u, psi, gamma_q, delta, grid)?;
            let h2 = corner_align_in(&p_corner, h1.end(), psi, gamma_p, 4.0 * delta, grid)?;
            Ok((h1, h2))
        })
        .collect::<Result<_>>()?;

    let omega = StateVector::normalized(ball.p.matrix() * psi.coords())?;
    let phi = StateVector::normalized(ball.p.complement().matrix() * psi.coords())?;
    let setup = RSetup::new(psi.clone(), omega, phi, ball.t_level)?;
    let zeta = 13.0 * sd;
    let ends: Vec<CMatrix> = aligned.iter().map(|(_, h2)| h2.end().clone()).collect();
    let r = contract_in_r(&ends, zeta, &setup, grid)?;
    report.min_denominator = Some(r.min_denominator);

    let mut st = [
        StageMax::new("corner_align(1-P)", "4δ", 4.0 * delta),
        StageMax::new("corner_align(P)", "13√δ", 13.0 * sd),
        StageMax::new("deform_to_geodesic", "3ζ, ζ = 13√δ", 3.0 * zeta),
        StageMax::new("straight_line", "2^{1/4}ζ", 2f64.powf(0.25) * zeta),
    ];
    let h1s: Vec<UnitaryPath> = aligned.iter().map(|x| x.0.clone()).collect();
    let h2s: Vec<UnitaryPath> = aligned.iter().map(|x| x.1.clone()).collect();
    st[0].realized = max_dist(&h1s);
    st[1].realized = max_dist(&h2s);
    st[2].realized = r.stage1_max.iter().copied().fold(0.0, f64::max);
    st[3].realized = r.stage2_max.iter().copied().fold(0.0, f64::max);
    let paths = aligned
        .into_iter()
        .zip(r.paths)
        .map(|((h1, h2), rp)| UnitaryPath::concat(&[h1, h2, rp], JOIN_TOL))
        .collect::<Result<Vec<_>>>()?;
    Ok((paths, st.into()))
}

fn small_overlap(
    complex: &SampledComplex,
    members: &[CMatrix],
    ball: &SBall,
    grid: &[f64],
    cfg: &ContractionConfig,
    report: &mut ContractionReport,
) -> Result<(Vec<UnitaryPath>, Vec<StageMax>)> {
    let delta = ball.delta;
    let t = ball.t_level;
    let gamma = (2.0 * delta / (1.0 - 2.0 * delta)).sqrt();
    let dp = delta + gamma;
    if dp >= ZERO_OVERLAP_WINDOW {
        return Err(Error::Range(format!("delta + gamma = {dp:.4} is not below 7/16")));
    }
    let q = ball.p.complement();
    // Ψ ↦ VΨ with PVΨ = 0, and X = UV* lies in the ball of radius δ + γ.
    let (v, _) = crate::state::projection_generator(&ball.psi, q.matrix())?;
    let v = mats::unitary_exp(&v);
    report.move_distance = Some(mats::dist_from_identity(&v));
    let psi2 = ball.psi.apply(&v)?;
    let vs = v.adjoint();
    let xs: Vec<CMatrix> = members.iter().map(|u| u * &vs).collect();

    if t == 0.0 {
        let paths: Vec<UnitaryPath> = xs
            .par_iter()
            .map(|x| Ok(log_contraction(x, grid)?.right_multiply(&v)))
            .collect::<Result<_>>()?;
        let mut st = StageMax::new("log_contraction(UV*)V", "δ' + γ, δ' = δ + γ", dp + gamma);
        st.realized = max_dist(&paths);
        return Ok((paths, vec![st]));
    }

    let p_corner = CornerData::new(&ball.p);
    let r = p_corner.rank();
    let n = complex.dim;
    if n + 2 > 2 * r {
        return Err(Error::Obstruction(Box::new(Obstruction {
            stage: "contract_in_s: zero-overlap sphere contraction".into(),
            level: None,
            family_dim: n,
            corner_rank: r,
            condition: "n <= 2r - 2".into(),
            detail: format!(
                "the unit sphere of the rank-{r} corner is only {}-connected",
                (2 * r).saturating_sub(2)
            ),
        })));
    }
    let corner_vecs: Vec<CVector> = xs
        .iter()
        .map(|x| {
            let w = p_corner.compress_vector(&(x * psi2.coords()));
            let n = w.norm();
            w.unscale(n)
        })
        .collect();
    let mut avoid = corner_vecs.clone();
    for &(i, j) in &complex.edges {
        let (a, b) = (&corner_vecs[i], &corner_vecs[j]);
        let z = a.dotc(b);
        let ph = if z.norm() > 0.0 {
            z.conj() / z.norm()
        } else {
            mats::c(1.0, 0.0)
        };
        let m = a + b * ph;
        if m.norm() > 1e-12 {
            avoid.push(m.unscale(m.norm()));
        }
    }
    let (pole, clearance) = choose_pole(&avoid, r, cfg.seed);
    report.pole_clearance = Some(clearance);
    if clearance < POLE_CLEARANCE_MIN {
        return Err(Error::Obstruction(Box::new(Obstruction {
            stage: "contract_in_s: pole search".into(),
            level: None,
            family_dim: n,
            corner_rank: r,
            condition: "a pole missed by every sample".into(),
            detail: format!("best clearance {clearance:.3e}"),
        })));
    }
    let chart = StereographicChart::new(&pole);
    let omega0 = StateVector::normalized(corner_vecs[0].clone())?;
    let eye_r = mats::identity(r);

    let gamma_q = 9.0 / 16.0;
    let q_corner = CornerData::new(&q);
    let staged: Vec<(UnitaryPath, UnitaryPath)> = xs
        .par_iter()
        .zip(corner_vecs.par_iter())
        .map(|(x, target)| {
            let curve = |s: f64| StateVector::normalized(chart.segment(omega0.coords(), target, s)).expect("unit");
            let lifts = lift_curve(curve, grid, &eye_r, &omega0)?;
            let h1: Vec<CMatrix> = lifts
                .iter()
                .map(|e| {
                    let big = p_corner.extend_unitary(e);
                    big.adjoint() * x * big
                })
                .collect();
            let h1 = UnitaryPath::new(grid.to_vec(), h1)?;
            let h2 = corner_align_in(&q_corner, h1.end(), &psi2, gamma_q, dp, grid)?;
            Ok((h1, h2))
        })
        .collect::<Result<_>>()?;

    let omega_amb = StateVector::normalized(p_corner.expand_vector(omega0.coords()))?;
    let setup = RSetup::new(psi2.clone(), omega_amb, psi2.clone(), t)?;
    let zeta = 4.0 * dp;
    let ends: Vec<CMatrix> = staged.iter().map(|(_, h2)| h2.end().clone()).collect();
    let rc = contract_in_r(&ends, zeta, &setup, grid)?;
    report.min_denominator = Some(rc.min_denominator);

    let mut st = [
        StageMax::new("lift_conjugation", "δ'", dp),
        StageMax::new("corner_align(1-P)", "4δ'", 4.0 * dp),
        StageMax::new("deform_to_geodesic", "3ζ, ζ = 4δ'", 3.0 * zeta),
        StageMax::new("straight_line", "2^{1/4}ζ", 2f64.powf(0.25) * zeta),
    ];
    st[0].realized = staged.iter().map(|x| x.0.max_dist_from_identity()).fold(0.0, f64::max);
    st[1].realized = staged.iter().map(|x| x.1.max_dist_from_identity()).fold(0.0, f64::max);
    st[2].realized = rc.stage1_max.iter().copied().fold(0.0, f64::max);
    st[3].realized = rc.stage2_max.iter().copied().fold(0.0, f64::max);
    report.notes.push(format!(
        "delegated construction runs on the ball of radius delta' = delta + gamma = {dp:.6e}"
    ));
    let paths = staged
        .into_iter()
        .zip(rc.paths)
        .map(|((h1, h2), rp)| Ok(UnitaryPath::concat(&[h1, h2, rp], JOIN_TOL)?.right_multiply(&v)))
        .collect::<Result<Vec<_>>>()?;
    Ok((paths, st.into()))
}

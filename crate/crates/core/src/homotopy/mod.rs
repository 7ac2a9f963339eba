//! Paths of unitaries and the explicit homotopies built from them.
//!
//! * [`deform_to_geodesic`]: the path `𝒱(U,s)` ending at the geodesic unitary for `(Ψ, UΨ)`.
//! * [`corner_align`]: the path `𝒲(U,s)` that turns `PUΨ` onto `PΨ` inside the corner.
//! * [`padded_sphere_contraction`], [`lift_path`]: sphere contraction and lifting through
//!   the bundle `U ↦ UΨ`.
//! * [`contract_in_r`], [`contract_in_s`]: nulhomotopies of sampled families in small balls.

mod ball;
mod deform;
mod sphere;

pub use ball::{
    contract_in_r, contract_in_s, Branch, ConstantRecord, Contraction, ContractionConfig, ContractionReport, MarginRow,
    RContraction, RSetup, SBall, StageRecord, Thresholds, DELTA_MAX,
};
pub use deform::{corner_align, corner_align_in, corner_beta, deform_to_geodesic, log_contraction};
pub use sphere::{
    choose_pole, lift_curve, lift_path, padded_sphere_contraction, padded_sphere_step, PaddedSample, StereographicChart,
};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::mats::{self, operator_norm, CMatrix};

/// `n` equally spaced times `k/(n−1)` in [0, 1] (at least two).
pub fn uniform_grid(n: usize) -> Vec<f64> {
    let n = n.max(2);
    (0..n).map(|k| k as f64 / (n - 1) as f64).collect()
}

/// A time-sampled path of unitaries on [0, 1].
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct UnitaryPath {
    times: Vec<f64>,
    #[serde(skip)]
    unitaries: Vec<CMatrix>,
    max_step: f64,
    max_dist_from_identity: f64,
}

impl UnitaryPath {
    pub fn new(times: Vec<f64>, unitaries: Vec<CMatrix>) -> Result<Self> {
        if times.len() < 2 || times.len() != unitaries.len() {
            return Err(Error::Range(format!(
                "path needs ≥ 2 samples with matching times ({} vs {})",
                times.len(),
                unitaries.len()
            )));
        }
        if times[0] != 0.0 || *times.last().unwrap() != 1.0 || times.windows(2).any(|w| w[1] <= w[0]) {
            return Err(Error::Range("path times must increase from 0 to 1".into()));
        }
        let d = unitaries[0].nrows();
        if unitaries.iter().any(|u| u.nrows() != d || u.ncols() != d) {
            return Err(Error::DimensionMismatch {
                expected: d,
                got: unitaries.iter().map(|u| u.nrows()).find(|&r| r != d).unwrap_or(0),
            });
        }
        let (max_step, max_dist_from_identity) = metrics(&unitaries);
        Ok(UnitaryPath {
            times,
            unitaries,
            max_step,
            max_dist_from_identity,
        })
    }

    pub fn from_fn(times: &[f64], f: impl Fn(f64) -> CMatrix) -> Result<Self> {
        UnitaryPath::new(times.to_vec(), times.iter().map(|&t| f(t)).collect())
    }

    pub fn constant(u: &CMatrix, times: &[f64]) -> Result<Self> {
        UnitaryPath::from_fn(times, |_| u.clone())
    }

    /// Runs the paths one after another, stage `k` of `K` occupying `[k/K, (k+1)/K]`.
    ///
    /// Consecutive stages must meet: the end of one and the start of the next may
    /// differ by at most `join_tol`. The shared sample is kept once.
    pub fn concat(stages: &[UnitaryPath], join_tol: f64) -> Result<Self> {
        let k = stages.len();
        if k == 0 {
            return Err(Error::Range("no stages to concatenate".into()));
        }
        let mut times = Vec::new();
        let mut unitaries = Vec::new();
        for (j, stage) in stages.iter().enumerate() {
            if j > 0 {
                let gap = operator_norm(&(stage.start() - stages[j - 1].end()));
                if gap > join_tol {
                    return Err(Error::Precondition {
                        name: "stage continuity",
                        detail: format!("stage {j} starts {gap:.3e} away from the end of stage {}", j - 1),
                    });
                }
            }
            let skip = usize::from(j > 0);
            for (t, u) in stage.times.iter().zip(&stage.unitaries).skip(skip) {
                times.push(if j + 1 == k && *t == 1.0 {
                    1.0
                } else {
                    (j as f64 + t) / k as f64
                });
                unitaries.push(u.clone());
            }
        }
        UnitaryPath::new(times, unitaries)
    }

    /// `s ↦ U(s)·v`.
    pub fn right_multiply(&self, v: &CMatrix) -> UnitaryPath {
        let unitaries: Vec<CMatrix> = self.unitaries.iter().map(|u| u * v).collect();
        let (max_step, max_dist_from_identity) = metrics(&unitaries);
        UnitaryPath {
            times: self.times.clone(),
            unitaries,
            max_step,
            max_dist_from_identity,
        }
    }

    pub fn times(&self) -> &[f64] {
        &self.times
    }

    pub fn unitaries(&self) -> &[CMatrix] {
        &self.unitaries
    }

    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }

    pub fn start(&self) -> &CMatrix {
        &self.unitaries[0]
    }

    pub fn end(&self) -> &CMatrix {
        self.unitaries.last().expect("non-empty path")
    }

    /// `max_k ‖U_{k+1} − U_k‖`.
    pub fn max_step(&self) -> f64 {
        self.max_step
    }

    /// `max_k ‖𝟙 − U_k‖`.
    pub fn max_dist_from_identity(&self) -> f64 {
        self.max_dist_from_identity
    }

    /// Largest `‖U_k*U_k − 𝟙‖` along the path.
    pub fn unitarity_defect(&self) -> f64 {
        self.unitaries.iter().map(mats::unitarity_defect).fold(0.0, f64::max)
    }

    /// Difference between the stored metadata and a fresh recomputation.
    pub fn metadata_defect(&self) -> f64 {
        let (s, d) = metrics(&self.unitaries);
        (s - self.max_step).abs().max((d - self.max_dist_from_identity).abs())
    }
}

fn metrics(unitaries: &[CMatrix]) -> (f64, f64) {
    let step = unitaries
        .windows(2)
        .map(|w| operator_norm(&(&w[1] - &w[0])))
        .fold(0.0, f64::max);
    let dist = unitaries.iter().map(mats::dist_from_identity).fold(0.0, f64::max);
    (step, dist)
}

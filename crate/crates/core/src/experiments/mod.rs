//! Batch driver behind the `pure-homotopy` binary.
//!
//! Configuration is one flat `key = value` file (`#` starts a comment) plus flag
//! overrides. Recognized keys:
//!
//! | key | default | meaning |
//! |---|---|---|
//! | `seed` | 7 | RNG seed for every suite and run |
//! | `cases` | 100 | random instances per verify suite |
//! | `tol.<suite>` | per suite | tolerance override, must be positive |
//! | `factors` | 4 | number of `M₂` factors in the iteration demo |
//! | `vertices` | 17 | circle family size |
//! | `amplitude` | 0.5 | circle family amplitude |
//! | `depth` | 4 | iteration depth |
//! | `level_points` | 33 | samples per dyadic window |
//! | `delta` | 5e-4 | ball radius for the S-ball run, in `(0, 1/1296)` |
//! | `t_level` | 0.1 | `t` in `S = {‖PUΨ‖² ≥ t}` |
//! | `dim`, `rank` | 8, 4 | ambient dimension and rank of P in the S-ball run |
//! | `family` | `circle` | `circle` or `sphere-m2` (the obstructed instance) |
//! | `p`, `q` | 1, 2 | rotation parameters; `irrational = true` overrides |
//! | `kmax` | 6 | last k in the rotation table |
//! | `resolve_spheres` | false | look up `π_k(S^m)` in the sphere table |
//! | `emit_unitaries` | false | include matrices in `trace.json` |
//!
//! Exit codes: 0 all checks pass, 1 an invariant failed, 2 obstruction, 3 configuration error.

mod verify;

use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::complex::SampledComplex;
use crate::contract::{
    bloch_sphere_family, circle_family, deform_family_onto_projection, iterate_contraction, qubit_observables,
    weak_star_convergence_check, IterationConfig, TraceDocument, TAIL_TOL,
};
use crate::error::{Error, Result};
use crate::homotopy::{contract_in_s, ContractionConfig, ContractionReport, SBall};
use crate::mats::{self, CMatrix};
use crate::nctorus::{homotopy_groups, homotopy_groups_irrational, RotationParams};
use crate::sample;
use crate::state::{AlgebraShape, Projection};

pub use verify::{run_verify, SuiteReport, VerifyReport, SUITES};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ExitStatus {
    Pass = 0,
    Failure = 1,
    Obstruction = 2,
    ConfigError = 3,
}

impl ExitStatus {
    pub fn code(self) -> i32 {
        self as i32
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct RunConfig {
    pub seed: u64,
    pub cases: usize,
    pub tolerances: BTreeMap<String, f64>,
    pub factors: usize,
    pub vertices: usize,
    pub amplitude: f64,
    pub depth: usize,
    pub level_points: usize,
    pub delta: f64,
    pub t_level: f64,
    pub dim: usize,
    pub rank: usize,
    pub family: String,
    pub p: i64,
    pub q: u64,
    pub irrational: bool,
    pub kmax: u64,
    pub resolve_spheres: bool,
    pub emit_unitaries: bool,
    pub out_dir: PathBuf,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            seed: 7,
            cases: 100,
            tolerances: BTreeMap::new(),
            factors: 4,
            vertices: 17,
            amplitude: 0.5,
            depth: 4,
            level_points: 33,
            delta: 5e-4,
            t_level: 0.1,
            dim: 8,
            rank: 4,
            family: "circle".into(),
            p: 1,
            q: 2,
            irrational: false,
            kmax: 6,
            resolve_spheres: false,
            emit_unitaries: false,
            out_dir: PathBuf::from("out"),
        }
    }
}

fn parse<T: std::str::FromStr>(key: &str, value: &str) -> Result<T> {
    value
        .parse()
        .map_err(|_| Error::Config(format!("invalid value `{value}` for `{key}`")))
}

impl RunConfig {
    pub fn from_file(path: &Path) -> Result<Self> {
        let text = fs::read_to_string(path).map_err(|e| Error::Config(format!("cannot read {}: {e}", path.display())))?;
        let mut cfg = RunConfig::default();
        cfg.apply_text(&text)?;
        Ok(cfg)
    }

    /// Applies `key = value` lines on top of the current values.
    pub fn apply_text(&mut self, text: &str) -> Result<()> {
        for (n, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (k, v) = line
                .split_once('=')
                .ok_or_else(|| Error::Config(format!("line {}: expected `key = value`", n + 1)))?;
            self.set(k.trim(), v.trim())?;
        }
        Ok(())
    }

    pub fn set(&mut self, key: &str, value: &str) -> Result<()> {
        if let Some(suite) = key.strip_prefix("tol.") {
            if !SUITES.contains(&suite) {
                return Err(Error::Config(format!("unknown suite `{suite}` in `{key}`")));
            }
            let tol: f64 = parse(key, value)?;
            if tol.is_nan() || tol <= 0.0 {
                return Err(Error::Config(format!("tolerance `{key}` must be positive")));
            }
            self.tolerances.insert(suite.to_string(), tol);
            return Ok(());
        }
        match key {
            "seed" => self.seed = parse(key, value)?,
            "cases" => self.cases = parse(key, value)?,
            "factors" => self.factors = parse(key, value)?,
            "vertices" => self.vertices = parse(key, value)?,
            "amplitude" => self.amplitude = parse(key, value)?,
            "depth" => self.depth = parse(key, value)?,
            "level_points" => self.level_points = parse(key, value)?,
            "delta" => self.delta = parse(key, value)?,
            "t_level" => self.t_level = parse(key, value)?,
            "dim" => self.dim = parse(key, value)?,
            "rank" => self.rank = parse(key, value)?,
            "family" => self.family = value.to_string(),
            "p" => self.p = parse(key, value)?,
            "q" => self.q = parse(key, value)?,
            "irrational" => self.irrational = parse(key, value)?,
            "kmax" => self.kmax = parse(key, value)?,
            "resolve_spheres" => self.resolve_spheres = parse(key, value)?,
            "emit_unitaries" => self.emit_unitaries = parse(key, value)?,
            "out_dir" => self.out_dir = PathBuf::from(value),
            other => return Err(Error::Config(format!("unknown key `{other}`"))),
        }
        Ok(())
    }

    pub fn tolerance(&self, suite: &str, default: f64) -> f64 {
        self.tolerances.get(suite).copied().unwrap_or(default)
    }

    fn validate_contract(&self) -> Result<()> {
        if !(self.delta > 0.0 && self.delta < crate::homotopy::DELTA_MAX) {
            return Err(Error::Config(format!("delta = {} must lie in (0, 1/1296)", self.delta)));
        }
        if self.vertices == 0 {
            return Err(Error::Config("empty family: `vertices` must be at least 1".into()));
        }
        if self.factors == 0 || self.depth > self.factors {
            return Err(Error::Config(format!(
                "depth {} needs at least that many factors (have {})",
                self.depth, self.factors
            )));
        }
        if !(0.0..=0.25).contains(&self.t_level) {
            return Err(Error::Config(format!("t_level = {} outside [0, 1/4]", self.t_level)));
        }
        if self.rank == 0 || self.rank >= self.dim {
            return Err(Error::Config(format!(
                "rank {} must lie strictly between 0 and dim {}",
                self.rank, self.dim
            )));
        }
        if !matches!(self.family.as_str(), "circle" | "sphere-m2") {
            return Err(Error::Config(format!("unknown family `{}`", self.family)));
        }
        Ok(())
    }
}

/// Maps an error to its exit status.
pub fn status_of(err: &Error) -> ExitStatus {
    match err {
        Error::Obstruction(_) => ExitStatus::Obstruction,
        Error::Config(_) | Error::Rotation(_) => ExitStatus::ConfigError,
        _ => ExitStatus::Failure,
    }
}

/// Summary written to `contract.json`.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ContractSummary {
    pub factors: usize,
    pub depth: usize,
    pub vertices: usize,
    pub base_defect: f64,
    pub weak_star_passed: bool,
    pub max_tail_deviation: f64,
    pub ball: ContractionReport,
    pub files: Vec<String>,
}

/// Outcome of a driver command: the status plus the files it wrote.
#[derive(Clone, Debug)]
pub struct RunOutcome {
    pub status: ExitStatus,
    pub files: Vec<PathBuf>,
    pub summary: String,
}

fn ensure_dir(dir: &Path) -> Result<()> {
    fs::create_dir_all(dir)?;
    Ok(())
}

/// Runs the iteration demo (trace, observables) and an S-ball contraction (margins).
///
/// `family = sphere-m2` runs the obstructed instance instead and writes `obstruction.json`.
pub fn run_contract(cfg: &RunConfig) -> Result<RunOutcome> {
    cfg.validate_contract()?;
    ensure_dir(&cfg.out_dir)?;
    if cfg.family == "sphere-m2" {
        return run_obstruction(cfg);
    }
    let shape = AlgebraShape::uniform(2, cfg.factors);
    let (family, reference) = circle_family(&shape, cfg.vertices, cfg.amplitude, cfg.seed)?;
    let trace = iterate_contraction(
        &family,
        &reference,
        cfg.depth,
        &IterationConfig {
            level_points: cfg.level_points,
            tail_points: 4,
        },
    )?;
    let observables = qubit_observables(&shape, cfg.depth.max(1).min(cfg.factors))?;
    let weak = weak_star_convergence_check(&trace, &family, &observables, cfg.tolerance("iteration", TAIL_TOL))?;
    let max_tail = weak
        .observables
        .iter()
        .filter(|o| o.tail_guaranteed)
        .map(|o| o.max_tail_deviation)
        .fold(0.0, f64::max);
    let weak_passed = weak.passed;
    let doc = TraceDocument::new(&trace, &observables, Some(weak), cfg.emit_unitaries)?;
    let trace_path = cfg.out_dir.join("trace.json");
    let obs_path = cfg.out_dir.join("observables.csv");
    doc.write_json(&trace_path)?;
    doc.write_observables_csv(&obs_path)?;

    let (ball, members) = ball_instance(cfg)?;
    let grid = SampledComplex::circle(cfg.vertices);
    let contraction = contract_in_s(
        &grid,
        &members,
        &ball,
        &ContractionConfig {
            grid_points: cfg.level_points,
            seed: cfg.seed,
        },
    )?;
    let margins_path = cfg.out_dir.join("margins.csv");
    let mut w = csv::Writer::from_path(&margins_path)?;
    for row in contraction.margin_rows() {
        w.serialize(row)?;
    }
    w.flush()?;

    let ball_ok = contraction.report.min_s_slack >= -1e-8
        && contraction.report.endpoint_spread <= 1e-8
        && contraction.report.max_distance <= 39.0 * cfg.delta.sqrt() + 1e-6;
    let files = vec![trace_path, obs_path, margins_path, cfg.out_dir.join("contract.json")];
    let summary = ContractSummary {
        factors: cfg.factors,
        depth: cfg.depth,
        vertices: cfg.vertices,
        base_defect: trace.base_defect(),
        weak_star_passed: weak_passed,
        max_tail_deviation: max_tail,
        ball: contraction.report.clone(),
        files: files.iter().map(|p| p.display().to_string()).collect(),
    };
    fs::write(&files[3], serde_json::to_string_pretty(&summary)?)?;
    let status = if weak_passed && ball_ok && trace.base_defect() <= 1e-12 {
        ExitStatus::Pass
    } else {
        ExitStatus::Failure
    };
    let text = format!(
        "iteration: {} factors, depth {}, {} vertices, max tail deviation {:.3e}, base defect {:.1e}\n\
         S-ball: branch {}, max distance {:.6e} vs 39*sqrt(delta) = {:.6e}, min S-slack {:.3e}, endpoint spread {:.1e}\n",
        cfg.factors,
        cfg.depth,
        cfg.vertices,
        max_tail,
        trace.base_defect(),
        contraction.report.branch.name(),
        contraction.report.max_distance,
        39.0 * cfg.delta.sqrt(),
        contraction.report.min_s_slack,
        contraction.report.endpoint_spread,
    );
    Ok(RunOutcome {
        status,
        files,
        summary: text,
    })
}

/// The S-ball instance of the contract run: rank-`rank` P in dimension `dim`,
/// `‖PΨ‖² = t + δ` and a circle of unitaries at distance `0.4δ`.
pub fn ball_instance(cfg: &RunConfig) -> Result<(SBall, Vec<CMatrix>)> {
    let mut rng = sample::rng(cfg.seed);
    let pm = CMatrix::from_fn(cfg.dim, cfg.dim, |i, j| {
        mats::c(if i == j && i < cfg.rank { 1.0 } else { 0.0 }, 0.0)
    });
    let p = Projection::new(AlgebraShape::single(cfg.dim), pm)?;
    let psi = sample::state_with_overlap(&mut rng, &p, cfg.t_level + cfg.delta);
    let members = sample::ball_family(&mut rng, &SampledComplex::circle(cfg.vertices), cfg.dim, 0.4 * cfg.delta);
    Ok((SBall::new(psi, p, cfg.t_level, cfg.delta)?, members))
}

fn run_obstruction(cfg: &RunConfig) -> Result<RunOutcome> {
    let family = bloch_sphere_family(3)?;
    let p = Projection::onto_span(AlgebraShape::single(2), &[mats::basis_vector(2, 0)])?;
    match deform_family_onto_projection(&family, &p, cfg.level_points) {
        Err(Error::Obstruction(ob)) => {
            let path = cfg.out_dir.join("obstruction.json");
            fs::write(&path, serde_json::to_string_pretty(&ob)?)?;
            Ok(RunOutcome {
                status: ExitStatus::Obstruction,
                files: vec![path],
                summary: format!("{ob}\n"),
            })
        }
        Err(e) => Err(e),
        Ok(_) => Ok(RunOutcome {
            status: ExitStatus::Failure,
            files: vec![],
            summary: "the sphere family was deformed onto a rank-one projection, which cannot happen\n".into(),
        }),
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RotationRow {
    pub k: u64,
    pub value: String,
    pub resolved: String,
    pub provenance: String,
}

/// `π_k(𝒫(A_θ))` for `k = 0..=kmax`.
pub fn rotation_table(cfg: &RunConfig) -> Result<Vec<RotationRow>> {
    let params = if cfg.irrational {
        None
    } else {
        Some(RotationParams::new(cfg.p, cfg.q)?)
    };
    Ok((0..=cfg.kmax)
        .map(|k| {
            let r = match &params {
                Some(params) => homotopy_groups(params, k, cfg.resolve_spheres),
                None => homotopy_groups_irrational(k),
            };
            RotationRow {
                k,
                value: r.value.to_string(),
                resolved: r.resolved.clone().unwrap_or_default(),
                provenance: serde_json::to_value(r.provenance)
                    .ok()
                    .and_then(|v| v.as_str().map(String::from))
                    .unwrap_or_default(),
            }
        })
        .collect())
}

pub fn run_rotation(cfg: &RunConfig) -> Result<RunOutcome> {
    let rows = rotation_table(cfg)?;
    ensure_dir(&cfg.out_dir)?;
    let path = cfg.out_dir.join("rotation.csv");
    let mut w = csv::Writer::from_path(&path)?;
    let mut text = String::from(
        if cfg.irrational {
            "theta irrational\n".to_string()
        } else {
            format!("theta = {}/{}\n", cfg.p, cfg.q)
        }
        .as_str(),
    );
    text.push_str(&format!("{:>3}  {:<16} {:<10} {}\n", "k", "pi_k", "resolved", "provenance"));
    for row in &rows {
        text.push_str(&format!(
            "{:>3}  {:<16} {:<10} {}\n",
            row.k, row.value, row.resolved, row.provenance
        ));
        w.serialize(row)?;
    }
    w.flush()?;
    Ok(RunOutcome {
        status: ExitStatus::Pass,
        files: vec![path],
        summary: text,
    })
}

/// Runs the verify suites and writes `verify.json`.
pub fn run_verify_command(cfg: &RunConfig) -> Result<RunOutcome> {
    let report = run_verify(cfg);
    ensure_dir(&cfg.out_dir)?;
    let path = cfg.out_dir.join("verify.json");
    fs::write(&path, serde_json::to_string_pretty(&report)?)?;
    let mut text = format!("{:<14} {:>6} {:>12} {:>10}  result\n", "suite", "cases", "max resid", "tol");
    for s in &report.suites {
        text.push_str(&format!(
            "{:<14} {:>6} {:>12.3e} {:>10.1e}  {}\n",
            s.suite,
            s.cases,
            s.max_residual,
            s.tolerance,
            if s.passed { "pass" } else { "FAIL" }
        ));
    }
    let status = if report.passed {
        ExitStatus::Pass
    } else {
        ExitStatus::Failure
    };
    Ok(RunOutcome {
        status,
        files: vec![path],
        summary: text,
    })
}

use nalgebra::SymmetricEigen;
use num_complex::Complex64;
use rand::Rng;
use serde::{Deserialize, Serialize};

use super::RunConfig;
use crate::complex::SampledComplex;
use crate::contract::{circle_family, iterate_contraction, qubit_observables, weak_star_convergence_check, IterationConfig};
use crate::error::Result;
use crate::geodesic::{geodesic_unitary, pure_state_norm_distance, StateVector};
use crate::homotopy::{
    contract_in_s, corner_align, corner_beta, deform_to_geodesic, padded_sphere_step, uniform_grid, ContractionConfig,
};
use crate::mats::{self, operator_norm, HermitianMatrix};
use crate::nctorus::{evaluate_element, irrep_at, relation_residual, RotationAlgebraElement, RotationParams};
use crate::sample::{self, SeededRng};
use crate::state::{excision_defect, excision_projections, move_onto_projection, AlgebraShape, PureState};

/// Suite names, in run order.
pub const SUITES: [&str; 11] = [
    "mats",
    "geodesic",
    "projection",
    "deform",
    "corner",
    "sphere",
    "ball",
    "iteration",
    "excision",
    "norm_distance",
    "rotation",
];

fn default_tolerance(suite: &str) -> f64 {
    match suite {
        "mats" | "geodesic" | "norm_distance" => 1e-9,
        "sphere" | "excision" | "rotation" => 1e-12,
        _ => 1e-8,
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SuiteReport {
    pub suite: String,
    pub cases: usize,
    pub max_residual: f64,
    pub tolerance: f64,
    pub passed: bool,
    /// Set when the suite could not run to completion.
    pub error: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct VerifyReport {
    pub seed: u64,
    pub suites: Vec<SuiteReport>,
    pub passed: bool,
}

/// Runs every suite with its own RNG stream derived from the seed.
pub fn run_verify(cfg: &RunConfig) -> VerifyReport {
    let suites: Vec<SuiteReport> = SUITES
        .iter()
        .enumerate()
        .map(|(k, &suite)| {
            let mut rng = sample::rng(cfg.seed.wrapping_mul(0x9e37_79b9_7f4a_7c15).wrapping_add(k as u64));
            let tolerance = cfg.tolerance(suite, default_tolerance(suite));
            match run_suite(suite, cfg, &mut rng) {
                Ok((cases, max_residual)) => SuiteReport {
                    suite: suite.into(),
                    cases,
                    max_residual,
                    tolerance,
                    passed: max_residual <= tolerance,
                    error: None,
                },
                Err(e) => SuiteReport {
                    suite: suite.into(),
                    cases: 0,
                    max_residual: f64::MAX,
                    tolerance,
                    passed: false,
                    error: Some(e.to_string()),
                },
            }
        })
        .collect();
    let passed = suites.iter().all(|s| s.passed);
    VerifyReport {
        seed: cfg.seed,
        suites,
        passed,
    }
}

fn run_suite(suite: &str, cfg: &RunConfig, rng: &mut SeededRng) -> Result<(usize, f64)> {
    let n = cfg.cases.max(1);
    match suite {
        "mats" => mats_suite(rng, n),
        "geodesic" => geodesic_suite(rng, n),
        "projection" => projection_suite(rng, n),
        "deform" => deform_suite(rng, n),
        "corner" => corner_suite(rng, n),
        "sphere" => sphere_suite(rng, n),
        "ball" => ball_suite(cfg),
        "iteration" => iteration_suite(cfg),
        "excision" => excision_suite(rng, n),
        "norm_distance" => norm_distance_suite(rng, n),
        "rotation" => rotation_suite(),
        other => unreachable!("suite {other} is listed but not implemented"),
    }
}

fn mats_suite(rng: &mut SeededRng, n: usize) -> Result<(usize, f64)> {
    let mut worst = 0.0f64;
    for _ in 0..n {
        let d = rng.random_range(2..=8);
        let norm = sample::uniform(rng, 0.0, 3.0);
        let h = sample::hermitian_with_norm(rng, d, norm);
        let log = mats::principal_log_unitary(&mats::unitary_exp(&h))?;
        worst = worst.max(operator_norm(&(log.as_matrix() - h.as_matrix())));
    }
    Ok((n, worst))
}

fn geodesic_suite(rng: &mut SeededRng, n: usize) -> Result<(usize, f64)> {
    let mut worst = 0.0f64;
    for _ in 0..n {
        let d = rng.random_range(2..=16);
        let (psi, omega) = sample::y_plus_pair(rng, d);
        let g = geodesic_unitary(&psi, &omega)?;
        let v = &g.unitary;
        let (vals, _) = mats::unitary_eigen(v, &mats::Tolerances::default())?;
        let allowed = [
            Complex64::from_polar(1.0, g.theta),
            Complex64::from_polar(1.0, -g.theta),
            Complex64::new(1.0, 0.0),
        ];
        let spec = vals
            .iter()
            .map(|z| allowed.iter().map(|a| (z - a).norm()).fold(f64::INFINITY, f64::min))
            .fold(0.0, f64::max);
        worst = worst
            .max((v * psi.coords() - omega.coords()).norm())
            .max(mats::unitarity_defect(v))
            .max((mats::dist_from_identity(v) - (psi.coords() - omega.coords()).norm()).abs())
            .max(spec);
    }
    Ok((n, worst))
}

fn projection_suite(rng: &mut SeededRng, n: usize) -> Result<(usize, f64)> {
    let mut worst = 0.0f64;
    let mut done = 0;
    while done < n {
        let d = rng.random_range(2..=16);
        let r = rng.random_range(1..d);
        let p = sample::projection(rng, d, r);
        let psi = PureState::new(AlgebraShape::single(d), sample::state(rng, d))?;
        let ov = (p.matrix() * psi.coords()).norm_squared();
        if ov < 0.05 {
            continue;
        }
        let u = move_onto_projection(&psi, &p)?;
        let moved = (p.matrix() * (&u * psi.coords())).norm_squared();
        let bound = (2.0 - 2.0 * ov.sqrt()).max(0.0).sqrt();
        worst = worst
            .max((moved - 1.0).abs())
            .max((mats::dist_from_identity(&u) - bound).abs());
        done += 1;
    }
    Ok((n, worst))
}

fn deform_suite(rng: &mut SeededRng, n: usize) -> Result<(usize, f64)> {
    let mut worst = 0.0f64;
    let grid = uniform_grid(17);
    for _ in 0..n {
        let d = rng.random_range(2..=8);
        let psi = sample::state(rng, d);
        let dist = sample::uniform(rng, 0.01, 0.3);
        let u = sample::z_unitary(rng, &psi, dist);
        let dist = mats::dist_from_identity(&u);
        let path = deform_to_geodesic(&u, &psi, &grid)?;
        let target = &u * psi.coords();
        let g = geodesic_unitary(&psi, &StateVector::normalized(target.clone())?)?.unitary;
        worst = worst
            .max(operator_norm(&(path.start() - &u)))
            .max(operator_norm(&(path.end() - &g)))
            .max(
                path.unitaries()
                    .iter()
                    .map(|w| (w * psi.coords() - &target).norm())
                    .fold(0.0, f64::max),
            )
            .max((path.max_dist_from_identity() - 3.0 * dist).max(0.0));
    }
    Ok((n, worst))
}

fn corner_suite(rng: &mut SeededRng, n: usize) -> Result<(usize, f64)> {
    let mut worst = 0.0f64;
    let grid = uniform_grid(17);
    for _ in 0..n {
        let d = rng.random_range(3..=8);
        let r = rng.random_range(1..d);
        let p = sample::projection(rng, d, r);
        let psi = sample::state_with_overlap(rng, &p, 0.5);
        let delta = 0.05;
        let u = sample::unitary_at_distance(rng, d, 0.9 * delta);
        let dist = mats::dist_from_identity(&u);
        let pu = p.matrix() * (&u * psi.coords());
        let gamma = 0.99 * pu.norm();
        let p_psi = p.matrix() * psi.coords();
        let beta = corner_beta(gamma, delta, p_psi.norm());
        let path = corner_align(&u, &p, &psi, gamma, delta, &grid)?;
        let q = p.complement();
        let end = path.end() * psi.coords();
        let aligned = p.matrix() * &end;
        let z = p_psi.dotc(&aligned);
        worst = worst
            .max(operator_norm(&(path.start() - &u)))
            .max((aligned.norm() * p_psi.norm() - z.re).abs() + z.im.abs())
            .max((q.matrix() * &end - q.matrix() * (&u * psi.coords())).norm())
            .max(
                path.unitaries()
                    .iter()
                    .map(|w| ((p.matrix() * (w * psi.coords())).norm() - pu.norm()).abs())
                    .fold(0.0, f64::max),
            )
            .max((path.max_dist_from_identity() - (1.0 + beta) * dist).max(0.0));
    }
    Ok((n, worst))
}

fn sphere_suite(rng: &mut SeededRng, n: usize) -> Result<(usize, f64)> {
    let mut worst = 0.0f64;
    let ts = uniform_grid(257);
    for _ in 0..n {
        let d = rng.random_range(1..=6);
        let omega = sample::state(rng, d);
        let mut stage1_end = None;
        for &t in &ts {
            let s = padded_sphere_step(&omega, 1, t)?;
            worst = worst.max((std::f64::consts::FRAC_1_SQRT_2 - s.denominator).max(0.0));
            if t == 1.0 {
                stage1_end = Some(s.vector);
            }
        }
        let mid = stage1_end.expect("grid ends at 1");
        worst = worst.max((mid.coords().rows(d, d) - omega.coords()).norm());
        for &t in &ts {
            let s = padded_sphere_step(&mid, 2, t)?;
            worst = worst.max((std::f64::consts::FRAC_1_SQRT_2 - s.denominator).max(0.0));
            if t == 1.0 {
                worst = worst.max((s.vector.coords() - mats::basis_vector(2 * d, 0)).norm());
            }
        }
    }
    Ok((n, worst))
}

fn ball_suite(cfg: &RunConfig) -> Result<(usize, f64)> {
    let mut worst = 0.0f64;
    let mut cases = 0;
    for &t in &[0.0, 0.1, 0.25] {
        let mut run = cfg.clone();
        run.t_level = t;
        let (ball, members) = super::ball_instance(&run)?;
        let c = contract_in_s(
            &SampledComplex::circle(run.vertices),
            &members,
            &ball,
            &ContractionConfig::default(),
        )?;
        let r = &c.report;
        worst = worst
            .max((-r.min_s_slack).max(0.0))
            .max(r.endpoint_spread)
            .max((r.max_distance - 39.0 * run.delta.sqrt()).max(0.0));
        cases += 1;
    }
    Ok((cases, worst))
}

fn iteration_suite(cfg: &RunConfig) -> Result<(usize, f64)> {
    let shape = AlgebraShape::uniform(2, 3);
    let (fam, reference) = circle_family(&shape, 9, cfg.amplitude, cfg.seed)?;
    let tr = iterate_contraction(&fam, &reference, 3, &IterationConfig::default())?;
    let obs = qubit_observables(&shape, 3)?;
    let report = weak_star_convergence_check(&tr, &fam, &obs, 1e-8)?;
    let tail = report.observables.iter().map(|o| o.max_tail_deviation).fold(0.0, f64::max);
    Ok((obs.len(), tail.max(tr.base_defect())))
}

fn excision_suite(rng: &mut SeededRng, n: usize) -> Result<(usize, f64)> {
    let mut worst = 0.0f64;
    for _ in 0..n {
        let m = rng.random_range(1..=6);
        let factors: Vec<StateVector> = (0..m).map(|_| sample::state(rng, 2)).collect();
        let reference = PureState::product(&factors)?;
        let shape = reference.shape().clone();
        let projections = excision_projections(&shape, &reference)?;
        let k = rng.random_range(1..=m);
        let local = sample::gaussian_matrix(rng, 1 << k, 1 << k);
        let a = shape.embed_leading(&local, k)?;
        worst = worst.max(excision_defect(&projections[k - 1], &a, &reference)?);
    }
    Ok((n, worst))
}

/// Trace norm of `|Ψ⟩⟨Ψ| − |Ω⟩⟨Ω|`.
pub(crate) fn trace_norm_of_difference(psi: &StateVector, omega: &StateVector) -> f64 {
    let diff = mats::ket_bra(psi.coords(), psi.coords()) - mats::ket_bra(omega.coords(), omega.coords());
    let eig = SymmetricEigen::new(HermitianMatrix::symmetrized(&diff).into_inner());
    eig.eigenvalues.iter().map(|l| l.abs()).sum()
}

fn norm_distance_suite(rng: &mut SeededRng, n: usize) -> Result<(usize, f64)> {
    let mut worst = 0.0f64;
    for _ in 0..n {
        let d = rng.random_range(2..=12);
        let (a, b) = (sample::state(rng, d), sample::state(rng, d));
        worst = worst.max((pure_state_norm_distance(&a, &b)? - trace_norm_of_difference(&a, &b)).abs());
    }
    Ok((n, worst))
}

fn rotation_suite() -> Result<(usize, f64)> {
    let mut worst = 0.0f64;
    let mut cases = 0;
    for q in 2..=6u64 {
        for p in 0..q as i64 {
            let Ok(params) = RotationParams::new(p, q) else { continue };
            let rel = RotationAlgebraElement::v(params).mul(&RotationAlgebraElement::u(params)).add(
                &RotationAlgebraElement::u(params)
                    .mul(&RotationAlgebraElement::v(params))
                    .scale(-params.lambda()),
            );
            for a in 0..16 {
                for b in 0..16 {
                    let z1 = Complex64::from_polar(1.0, std::f64::consts::TAU * a as f64 / 16.0);
                    let z2 = Complex64::from_polar(1.0, std::f64::consts::TAU * b as f64 / 16.0);
                    let (u, v) = irrep_at(&params, z1, z2)?;
                    worst = worst.max(relation_residual(&params, &u, &v));
                    worst = worst.max(operator_norm(&evaluate_element(&rel, z1, z2)?));
                    cases += 1;
                }
            }
        }
    }
    Ok((cases, worst))
}

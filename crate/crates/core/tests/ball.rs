use pure_homotopy::complex::SampledComplex;
use pure_homotopy::homotopy::{contract_in_s, Branch, ContractionConfig, SBall};
use pure_homotopy::mats::{self, operator_norm, CMatrix};
use pure_homotopy::sample;
use pure_homotopy::state::{AlgebraShape, Projection};

fn diag_projection(d: usize, r: usize) -> Projection {
    let m = CMatrix::from_fn(d, d, |i, j| mats::c(if i == j && i < r { 1.0 } else { 0.0 }, 0.0));
    Projection::new(AlgebraShape::single(d), m).unwrap()
}

fn setup(seed: u64, complex: &SampledComplex, d: usize, r: usize, a: f64, t: f64, delta: f64) -> (SBall, Vec<CMatrix>) {
    let mut rng = sample::rng(seed);
    let p = diag_projection(d, r);
    let psi = sample::state_with_overlap(&mut rng, &p, a);
    let members = sample::ball_family(&mut rng, complex, d, 0.4 * delta);
    (SBall::new(psi, p, t, delta).unwrap(), members)
}

fn check_common(c: &pure_homotopy::homotopy::Contraction, members: &[CMatrix], ball: &SBall) {
    let end0 = c.paths[0].end();
    for (path, u) in c.paths.iter().zip(members) {
        assert!(operator_norm(&(path.start() - u)) < 1e-9, "path does not start at member");
        assert!(operator_norm(&(path.end() - end0)) < 1e-9, "endpoints differ");
        assert!(path.unitarity_defect() < 1e-9);
        for w in path.unitaries() {
            assert!(ball.s_slack(w) > -1e-9, "left S");
        }
    }
    assert!(c.report.max_distance <= 39.0 * ball.delta.sqrt());
    assert!(c.report.max_distance <= c.report.branch_constant);
}

#[test]
fn whole_ball_branch() {
    let delta = 1e-4;
    let cx = SampledComplex::circle(12);
    let (ball, members) = setup(1, &cx, 6, 3, 0.5, 0.1, delta);
    let c = contract_in_s(&cx, &members, &ball, &ContractionConfig::default()).unwrap();
    assert_eq!(c.report.branch, Branch::LargeOverlapWholeBall);
    check_common(&c, &members, &ball);
    assert!(operator_norm(&(c.paths[0].end() - mats::identity(6))) < 1e-12);
}

#[test]
fn large_overlap_branch() {
    for &t in &[0.1, 0.25] {
        let delta = 1e-4;
        let cx = SampledComplex::circle(16);
        let (ball, members) = setup(2, &cx, 6, 3, t + delta, t, delta);
        let c = contract_in_s(&cx, &members, &ball, &ContractionConfig::default()).unwrap();
        assert_eq!(c.report.branch, Branch::LargeOverlap);
        check_common(&c, &members, &ball);
        for st in &c.report.stages {
            assert!(st.margin >= 0.0, "{st:?}");
        }
    }
}

#[test]
fn small_overlap_unconstrained() {
    let delta = 5e-4;
    let cx = SampledComplex::circle(10);
    let (ball, members) = setup(3, &cx, 6, 3, delta, 0.0, delta);
    let c = contract_in_s(&cx, &members, &ball, &ContractionConfig::default()).unwrap();
    assert_eq!(c.report.branch, Branch::SmallOverlapUnconstrained);
    check_common(&c, &members, &ball);
}

#[test]
fn small_overlap_sphere_family() {
    let delta = 5e-4;
    let cx = SampledComplex::sphere(2);
    let (ball, members) = setup(4, &cx, 6, 3, delta, 4e-4, delta);
    let c = contract_in_s(&cx, &members, &ball, &ContractionConfig::default()).unwrap();
    assert_eq!(c.report.branch, Branch::SmallOverlap);
    check_common(&c, &members, &ball);
    assert!(c.report.pole_clearance.unwrap() > 1e-6);
}

#[test]
fn small_overlap_rank_obstruction() {
    let delta = 5e-4;
    let cx = SampledComplex::sphere(1);
    let (ball, members) = setup(5, &cx, 4, 1, delta, 4e-4, delta);
    let err = contract_in_s(&cx, &members, &ball, &ContractionConfig::default()).unwrap_err();
    let ob = err.obstruction().expect("obstruction");
    assert_eq!(ob.condition, "n <= 2r - 2");
}

#[test]
fn empty_family_reports_provable_emptiness() {
    let p = diag_projection(4, 2);
    let mut rng = sample::rng(6);
    let psi = sample::state_with_overlap(&mut rng, &p, 1e-4);
    let ball = SBall::new(psi, p, 0.25, 1e-4).unwrap();
    let c = contract_in_s(&SampledComplex::circle(4), &[], &ball, &ContractionConfig::default()).unwrap();
    assert_eq!(c.report.branch, Branch::Empty);
    assert!(c.report.ball_provably_empty);
}

#[test]
fn rejects_delta_out_of_range() {
    let cx = SampledComplex::circle(4);
    let (ball, members) = setup(7, &cx, 4, 2, 0.5, 0.1, 1.0 / 1000.0);
    assert!(contract_in_s(&cx, &members, &ball, &ContractionConfig::default()).is_err());
}

mod common;

use common::close;
use proptest::prelude::*;
use pure_homotopy::geodesic::StateVector;
use pure_homotopy::mats::{self, c, CMatrix, CVector};
use pure_homotopy::state::{
    act, compress_state, excision_defect, excision_projections, move_onto_projection, overlap, AlgebraShape, Projection,
    PureState,
};
use pure_homotopy::{sample, Error};
use std::f64::consts::FRAC_1_SQRT_2;

fn single(v: StateVector) -> PureState {
    PureState::new(AlgebraShape::single(v.dim()), v).unwrap()
}

fn plus_projection() -> Projection {
    let plus = CVector::from_column_slice(&[c(FRAC_1_SQRT_2, 0.), c(FRAC_1_SQRT_2, 0.)]);
    Projection::new(AlgebraShape::single(2), mats::ket_bra(&plus, &plus)).unwrap()
}

fn pauli_x() -> CMatrix {
    CMatrix::from_row_slice(2, 2, &[c(0., 0.), c(1., 0.), c(1., 0.), c(0., 0.)])
}

#[test]
fn swap_moves_population() {
    let psi = single(StateVector::basis(2, 0));
    let moved = act(&pauli_x(), &psi).unwrap();
    let e11 = mats::ket_bra(&mats::basis_vector(2, 0), &mats::basis_vector(2, 0));
    assert!(moved.evaluate(&e11).unwrap().norm() < 1e-15);
    assert!((moved.evaluate(&mats::identity(2)).unwrap() - c(1., 0.)).norm() < 1e-15);
    assert!(act(&mats::identity(2), &psi).unwrap().distance(&psi) < 1e-15);
}

#[test]
fn non_unitary_action_is_rejected() {
    let psi = single(StateVector::basis(2, 0));
    assert!(matches!(act(&(pauli_x() * c(2., 0.)), &psi), Err(Error::NotUnitary { .. })));
}

#[test]
fn overlap_cases() {
    let psi = single(StateVector::basis(2, 0));
    assert!((overlap(&psi, &plus_projection()).unwrap() - 0.5).abs() < 1e-15);
    let shape = AlgebraShape::single(2);
    assert_eq!(overlap(&psi, &Projection::identity(shape.clone())).unwrap(), 1.0);
    assert_eq!(overlap(&psi, &Projection::zero(shape)).unwrap(), 0.0);
    let other = Projection::identity(AlgebraShape::single(3));
    assert!(overlap(&psi, &other).is_err());
}

#[test]
fn move_onto_plus() {
    let psi = single(StateVector::basis(2, 0));
    let p = plus_projection();
    let u = move_onto_projection(&psi, &p).unwrap();
    let expected = (2.0 - 2.0 * 0.5f64.sqrt()).sqrt();
    assert!((mats::dist_from_identity(&u) - expected).abs() < 1e-9);
    assert!((expected - 0.76537).abs() < 1e-5);
    assert!((overlap(&act(&u, &psi).unwrap(), &p).unwrap() - 1.0).abs() < 1e-9);
    let full = Projection::identity(AlgebraShape::single(2));
    assert!(close(&move_onto_projection(&psi, &full).unwrap(), &mats::identity(2)) < 1e-15);
    let orth = Projection::onto_span(AlgebraShape::single(2), &[mats::basis_vector(2, 1)]).unwrap();
    assert!(move_onto_projection(&psi, &orth).is_err());
}

#[test]
fn move_onto_random_projection() {
    let mut rng = sample::rng(21);
    let mut done = 0;
    while done < 50 {
        let psi = single(sample::state(&mut rng, 4));
        let p = sample::projection(&mut rng, 4, 2);
        let ov = overlap(&psi, &p).unwrap();
        if ov < 0.1 {
            continue;
        }
        done += 1;
        let u = move_onto_projection(&psi, &p).unwrap();
        assert!((overlap(&act(&u, &psi).unwrap(), &p).unwrap() - 1.0).abs() < 1e-9);
        assert!((mats::dist_from_identity(&u) - (2.0 - 2.0 * ov.sqrt()).sqrt()).abs() < 1e-9);
    }
}

#[test]
fn corner_state_matches_ambient() {
    let mut rng = sample::rng(22);
    let shape = AlgebraShape::single(4);
    let psi_v = sample::state(&mut rng, 4);
    let extra = sample::gaussian_vector(&mut rng, 4);
    let p = Projection::onto_span(shape.clone(), &[psi_v.coords().clone(), extra]).unwrap();
    let psi = PureState::new(shape.clone(), psi_v.clone()).unwrap();
    let cs = compress_state(&psi, &p).unwrap();
    assert_eq!(cs.corner.rank(), 2);
    let image = cs.corner.compress_vector(psi_v.coords());
    assert!((image.dotc(cs.state.coords()).norm() - 1.0).abs() < 1e-12);
    for _ in 0..20 {
        let b = sample::gaussian_matrix(&mut rng, 2, 2);
        let ambient = psi.evaluate(&cs.corner.expand(&b)).unwrap();
        assert!((cs.evaluate(&b).unwrap() - ambient).norm() < 1e-10);
    }
    let same = compress_state(&psi, &Projection::identity(shape.clone())).unwrap();
    assert!((same.state.coords().dotc(&same.corner.compress_vector(psi_v.coords())).norm() - 1.0).abs() < 1e-12);
    assert!(matches!(
        compress_state(&psi, &sample::projection(&mut rng, 4, 1)),
        Err(Error::NotCaptured { .. })
    ));
}

#[test]
fn excision_ranks_and_capture() {
    let shape = AlgebraShape::uniform(2, 3);
    let e = StateVector::basis(2, 0);
    let reference = PureState::product(&[e.clone(), e.clone(), e.clone()]).unwrap();
    let ps = excision_projections(&shape, &reference).unwrap();
    assert_eq!(ps.iter().map(Projection::rank).collect::<Vec<_>>(), vec![4, 2, 1]);
    for p in &ps {
        assert!((overlap(&reference, p).unwrap() - 1.0).abs() < 1e-12);
    }
    for w in ps.windows(2) {
        // decreasing: P_{n+1} ≤ P_n
        assert!(close(&(w[0].matrix() * w[1].matrix()), w[1].matrix()) < 1e-12);
    }
    let one = excision_projections(&AlgebraShape::single(3), &single(StateVector::basis(3, 2))).unwrap();
    assert_eq!(one.len(), 1);
    assert_eq!(one[0].rank(), 1);
}

#[test]
fn excision_rejects_entangled_reference() {
    let shape = AlgebraShape::uniform(2, 2);
    let bell = StateVector::from_slice(&[c(FRAC_1_SQRT_2, 0.), c(0., 0.), c(0., 0.), c(FRAC_1_SQRT_2, 0.)]).unwrap();
    let psi = PureState::new(shape.clone(), bell).unwrap();
    assert!(matches!(
        excision_projections(&shape, &psi),
        Err(Error::NotProduct { cut: 1, .. })
    ));
}

#[test]
fn excision_defects() {
    let mut rng = sample::rng(23);
    let m = 4;
    let shape = AlgebraShape::uniform(2, m);
    let factors: Vec<StateVector> = (0..m).map(|_| sample::state(&mut rng, 2)).collect();
    let reference = PureState::product(&factors).unwrap();
    let ps = excision_projections(&shape, &reference).unwrap();
    // supported in the first n factors: exact excision
    for n in 1..=m {
        let a = shape
            .embed_leading(&sample::gaussian_matrix(&mut rng, 1 << n, 1 << n), n)
            .unwrap();
        assert!(excision_defect(&ps[n - 1], &a, &reference).unwrap() <= 1e-12);
    }
    // supported beyond n: positive defect, equal to ‖X − ω(X)‖ of the local factor
    let x = pauli_x();
    for k in 1..m {
        let a = shape.embed_local(&x, k).unwrap();
        let defect = excision_defect(&ps[k - 1], &a, &reference).unwrap();
        let local = single(factors[k].clone());
        let expected = mats::operator_norm(&(&x - mats::identity(2) * local.evaluate(&x).unwrap()));
        assert!(defect > 1e-3);
        assert!((defect - expected).abs() < 1e-10);
    }
    let rank_one = Projection::onto_span(shape.clone(), &[reference.coords().clone()]).unwrap();
    let a = sample::gaussian_matrix(&mut rng, 16, 16);
    assert!(excision_defect(&rank_one, &a, &reference).unwrap() < 1e-12);
    let full = Projection::identity(shape);
    let w = reference.evaluate(&a).unwrap();
    let direct = mats::operator_norm(&(&a - mats::identity(16) * w));
    assert!((excision_defect(&full, &a, &reference).unwrap() - direct).abs() < 1e-12);
}

proptest! {
    #[test]
    fn action_is_a_group_action(seed in any::<u64>(), d in 1usize..6) {
        let mut rng = sample::rng(seed);
        let psi = single(sample::state(&mut rng, d));
        let u = sample::unitary(&mut rng, d);
        let v = sample::unitary(&mut rng, d);
        let lhs = act(&u, &act(&v, &psi).unwrap()).unwrap();
        let rhs = act(&(&u * &v), &psi).unwrap();
        prop_assert!((lhs.coords() - rhs.coords()).norm() < 1e-10);
    }

    #[test]
    fn overlap_is_covariant(seed in any::<u64>(), d in 2usize..6, r in 0usize..6) {
        let r = r.min(d);
        let mut rng = sample::rng(seed);
        let psi = single(sample::state(&mut rng, d));
        let u = sample::unitary(&mut rng, d);
        let p = sample::projection(&mut rng, d, r);
        let lhs = overlap(&act(&u, &psi).unwrap(), &p).unwrap();
        let rhs = overlap(&psi, &p.conjugated(&u).unwrap()).unwrap();
        prop_assert!((lhs - rhs).abs() < 1e-10);
        prop_assert!((-1e-12..=1.0 + 1e-12).contains(&lhs));
    }

    #[test]
    fn action_preserves_evaluation(seed in any::<u64>(), d in 1usize..6) {
        let mut rng = sample::rng(seed);
        let psi = single(sample::state(&mut rng, d));
        let u = sample::unitary(&mut rng, d);
        let cm = sample::gaussian_matrix(&mut rng, d, d);
        let lhs = act(&u, &psi).unwrap().evaluate(&cm).unwrap();
        let rhs = psi.evaluate(&(u.adjoint() * &cm * &u)).unwrap();
        prop_assert!((lhs - rhs).norm() < 1e-10);
    }
}

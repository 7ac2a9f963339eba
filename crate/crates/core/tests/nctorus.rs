mod common;

use common::close;
use num_complex::Complex64;
use proptest::prelude::*;
use pure_homotopy::geodesic::StateVector;
use pure_homotopy::mats::{self, c};
use pure_homotopy::nctorus::{
    evaluate_element, homotopy_groups, homotopy_groups_commutative, homotopy_groups_irrational, irrep_at, matrix_unit,
    pure_state_at, relation_residual, sphere_table, BundlePoint, GroupValue, Provenance, RotationAlgebraElement, RotationParams,
};
use pure_homotopy::{sample, Error};
use rand::Rng;
use std::f64::consts::TAU;

fn torus_point(a: f64) -> Complex64 {
    Complex64::from_polar(1.0, a)
}

fn coprime_pairs(qmax: u64) -> Vec<RotationParams> {
    (2..=qmax)
        .flat_map(|q| (-(q as i64)..=q as i64).filter_map(move |p| RotationParams::new(p, q).ok()))
        .collect()
}

fn random_element(rng: &mut impl Rng, params: RotationParams, terms: usize) -> RotationAlgebraElement {
    RotationAlgebraElement::new(
        params,
        (0..terms)
            .map(|_| ((rng.random_range(-3..=3), rng.random_range(-3..=3)), sample::gaussian(rng)))
            .collect::<Vec<_>>(),
    )
}

#[test]
fn params_validation() {
    assert!(matches!(RotationParams::new(2, 4), Err(Error::Rotation(_))));
    let err = RotationParams::new(3, 1).unwrap_err().to_string();
    assert!(err.contains("commutative"));
    assert!(RotationParams::new(0, 2).is_err());
    let p = RotationParams::new(-1, 3).unwrap();
    assert!((p.theta() + 1.0 / 3.0).abs() < 1e-15);
}

#[test]
fn relation_at_identity_point() {
    let params = RotationParams::new(1, 2).unwrap();
    let (u, v) = irrep_at(&params, c(1., 0.), c(1., 0.)).unwrap();
    let direct = &v * &u - &u * &v * Complex64::from_polar(1.0, -TAU * 0.5);
    assert!(mats::operator_norm(&direct) <= 1e-12);
    assert!(relation_residual(&params, &u, &v) <= 1e-12);
}

#[test]
fn relation_over_grid() {
    for params in coprime_pairs(6) {
        let lambda = Complex64::from_polar(1.0, -TAU * params.theta());
        for a in 0..16 {
            for b in 0..16 {
                let (z1, z2) = (torus_point(TAU * a as f64 / 16.0), torus_point(TAU * b as f64 / 16.0));
                let (u, v) = irrep_at(&params, z1, z2).unwrap();
                assert!(mats::operator_norm(&(&v * &u - &u * &v * lambda)) <= 1e-12);
                assert!(mats::unitarity_defect(&u) <= 1e-12 && mats::unitarity_defect(&v) <= 1e-12);
            }
        }
    }
}

#[test]
fn clock_trace_vanishes() {
    for params in coprime_pairs(7) {
        let (u, _) = irrep_at(&params, c(1., 0.), c(1., 0.)).unwrap();
        assert!(u.trace().norm() < 1e-12, "q = {}", params.q());
    }
}

#[test]
fn non_unit_torus_point_rejected() {
    let params = RotationParams::new(1, 2).unwrap();
    assert!(irrep_at(&params, c(1.1, 0.), c(1., 0.)).is_err());
}

#[test]
fn element_evaluation() {
    let params = RotationParams::new(1, 3).unwrap();
    let one = evaluate_element(&RotationAlgebraElement::unit(params), c(1., 0.), c(1., 0.)).unwrap();
    assert!(close(&one, &mats::identity(3)) < 1e-15);
    let clock = evaluate_element(&RotationAlgebraElement::u(params), c(1., 0.), c(1., 0.)).unwrap();
    let w = Complex64::from_polar(1.0, TAU / 3.0);
    let expected = mats::CMatrix::from_diagonal(&nalgebra::DVector::from_column_slice(&[c(1., 0.), w, w * w]));
    assert!(close(&clock, &expected) < 1e-15);
    let (u, v) = (RotationAlgebraElement::u(params), RotationAlgebraElement::v(params));
    let relation = v.mul(&u).add(&u.mul(&v).scale(-params.lambda()));
    assert!(relation.terms().values().all(|x| x.norm() < 1e-15));
    for a in 0..12 {
        for b in 0..12 {
            let (z1, z2) = (torus_point(TAU * a as f64 / 12.0), torus_point(TAU * b as f64 / 12.0));
            let vu = evaluate_element(&v.mul(&u), z1, z2).unwrap();
            let uv = evaluate_element(&u.mul(&v), z1, z2).unwrap();
            assert!(mats::operator_norm(&(vu - uv * params.lambda())) <= 1e-12);
        }
    }
}

#[test]
fn pure_states_positive_and_unital() {
    let mut rng = sample::rng(31);
    let pairs = coprime_pairs(5);
    for i in 0..1000 {
        let params = pairs[i % pairs.len()];
        let q = params.q() as usize;
        let point = BundlePoint::new(
            params,
            torus_point(sample::uniform(&mut rng, 0.0, TAU)),
            torus_point(sample::uniform(&mut rng, 0.0, TAU)),
            sample::state(&mut rng, q),
        )
        .unwrap();
        let state = pure_state_at(&point);
        assert!((state.evaluate(&RotationAlgebraElement::unit(params)).unwrap() - c(1., 0.)).norm() < 1e-12);
        let x = random_element(&mut rng, params, 4);
        let val = state.evaluate(&x.adjoint().mul(&x)).unwrap();
        assert!(val.re >= -1e-12 && val.im.abs() < 1e-10);
    }
}

#[test]
fn matrix_units_separate_rays() {
    let params = RotationParams::new(2, 5).unwrap();
    let (z1, z2) = (c(1., 0.), c(1., 0.));
    for i in 0..5 {
        for j in 0..5 {
            let e = evaluate_element(&matrix_unit(params, i, j).unwrap(), z1, z2).unwrap();
            let target = mats::ket_bra(&mats::basis_vector(5, i), &mats::basis_vector(5, j));
            assert!(close(&e, &target) < 1e-12);
        }
    }
    let mut rng = sample::rng(32);
    for _ in 0..20 {
        let a = BundlePoint::new(params, z1, z2, sample::state(&mut rng, 5)).unwrap();
        let b = BundlePoint::new(params, z1, z2, sample::state(&mut rng, 5)).unwrap();
        let mut gap: f64 = 0.0;
        for i in 0..5 {
            for j in 0..5 {
                let e = matrix_unit(params, i, j).unwrap();
                let diff = pure_state_at(&a).evaluate(&e).unwrap() - pure_state_at(&b).evaluate(&e).unwrap();
                gap = gap.max(diff.norm());
            }
        }
        assert!(gap > 1e-3);
    }
    let ray = StateVector::basis(5, 0);
    let phased = StateVector::new(ray.coords() * c(0., 1.)).unwrap();
    let a = pure_state_at(&BundlePoint::new(params, z1, z2, ray).unwrap());
    let b = pure_state_at(&BundlePoint::new(params, z1, z2, phased).unwrap());
    for i in 0..5 {
        let e = matrix_unit(params, 0, i).unwrap();
        assert!((a.evaluate(&e).unwrap() - b.evaluate(&e).unwrap()).norm() < 1e-12);
    }
}

#[test]
fn homotopy_group_examples() {
    let p13 = RotationParams::new(1, 3).unwrap();
    let p12 = RotationParams::new(1, 2).unwrap();
    assert_eq!(homotopy_groups(&p13, 2, false).value, GroupValue::Integers);
    assert_eq!(homotopy_groups(&p12, 3, false).value, GroupValue::Integers);
    assert_eq!(homotopy_groups(&p13, 4, false).value, GroupValue::Trivial);
    assert_eq!(homotopy_groups(&p13, 1, false).value, GroupValue::IntegersSquared);
    assert_eq!(homotopy_groups(&p13, 0, false).value, GroupValue::Trivial);
    let sym = homotopy_groups(&p12, 4, false);
    assert_eq!(sym.value, GroupValue::SphereGroup { k: 4, m: 3 });
    assert_eq!(sym.provenance, Provenance::Symbolic);
    assert_eq!(sym.value.to_string(), "pi_4(S^3)");
    let res = homotopy_groups(&p12, 4, true);
    assert_eq!(res.resolved.as_deref(), Some("Z/2"));
    assert_eq!(res.provenance, Provenance::SphereTable);
    // beyond the table the answer stays symbolic
    let far = homotopy_groups(&p12, 9, true);
    assert_eq!((far.resolved, far.provenance), (None, Provenance::Symbolic));
}

#[test]
fn groups_depend_only_on_q() {
    for q in 2..=6u64 {
        let params: Vec<_> = coprime_pairs(6).into_iter().filter(|p| p.q() == q).collect();
        for k in 0..=15 {
            let first = homotopy_groups(&params[0], k, true);
            for p in &params[1..] {
                assert_eq!(homotopy_groups(p, k, true), first);
            }
        }
    }
}

#[test]
fn irrational_and_commutative_queries() {
    for k in [0, 1, 7] {
        assert_eq!(homotopy_groups_irrational(k).value, GroupValue::Trivial);
    }
    assert_eq!(homotopy_groups_commutative(1).value, GroupValue::IntegersSquared);
    for k in [0, 2, 3, 5] {
        assert_eq!(homotopy_groups_commutative(k).value, GroupValue::Trivial);
    }
}

#[test]
fn sphere_table_entries() {
    assert_eq!(sphere_table(3, 2), Some("Z"));
    assert_eq!(sphere_table(6, 3), Some("Z/12"));
    assert_eq!(sphere_table(7, 4), Some("Z+Z/12"));
    assert_eq!(sphere_table(8, 5), Some("Z/24"));
    assert_eq!(sphere_table(9, 5), None);
    assert_eq!(sphere_table(2, 3), None);
}

proptest! {
    #[test]
    fn evaluation_is_a_star_homomorphism(seed in any::<u64>(), idx in 0usize..20, a in 0.0..TAU, b in 0.0..TAU) {
        let pairs = coprime_pairs(6);
        let params = pairs[idx % pairs.len()];
        let mut rng = sample::rng(seed);
        let x = random_element(&mut rng, params, 3);
        let y = random_element(&mut rng, params, 3);
        let (z1, z2) = (torus_point(a), torus_point(b));
        let ex = evaluate_element(&x, z1, z2).unwrap();
        let ey = evaluate_element(&y, z1, z2).unwrap();
        let scale = 1.0 + ex.norm() * ey.norm();
        prop_assert!(close(&evaluate_element(&x.mul(&y), z1, z2).unwrap(), &(&ex * &ey)) <= 1e-12 * scale);
        prop_assert!(close(&evaluate_element(&x.adjoint(), z1, z2).unwrap(), &ex.adjoint()) <= 1e-12 * (1.0 + ex.norm()));
    }
}

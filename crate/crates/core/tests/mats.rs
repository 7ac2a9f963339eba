mod common;

use common::{close, taylor_exp};
use nalgebra::SymmetricEigen;
use proptest::prelude::*;
use pure_homotopy::mats::{self, c, operator_norm, CMatrix, HermitianMatrix, I};
use pure_homotopy::{sample, Error};
use std::f64::consts::FRAC_PI_2;

fn diag(entries: &[num_complex::Complex64]) -> CMatrix {
    CMatrix::from_diagonal(&nalgebra::DVector::from_column_slice(entries))
}

#[test]
fn exp_scalar_cases() {
    assert_eq!(close(&mats::unitary_exp(&HermitianMatrix::zeros(3)), &mats::identity(3)), 0.0);
    let a = HermitianMatrix::new(diag(&[c(FRAC_PI_2, 0.0), c(0.0, 0.0)])).unwrap();
    assert!(close(&mats::unitary_exp(&a), &diag(&[I, c(1.0, 0.0)])) < 1e-15);
}

#[test]
fn exp_matches_taylor_oracle() {
    let mut rng = sample::rng(3);
    for _ in 0..20 {
        let h = sample::hermitian_with_norm(&mut rng, 8, 2.5);
        let oracle = taylor_exp(&(h.as_matrix() * I));
        let got = mats::unitary_exp(&h);
        assert!((got - oracle).camax() < 1e-11);
    }
}

#[test]
fn log_scalar_cases() {
    assert!(mats::principal_log_unitary(&mats::identity(4)).unwrap().norm() < 1e-15);
    let log = mats::principal_log_unitary(&diag(&[I, c(1.0, 0.0)])).unwrap();
    assert!(close(log.as_matrix(), &diag(&[c(FRAC_PI_2, 0.0), c(0.0, 0.0)])) < 1e-15);
    let minus = diag(&[c(-1.0, 0.0), c(1.0, 0.0)]);
    assert!(matches!(mats::principal_log_unitary(&minus), Err(Error::BranchCut { .. })));
}

#[test]
fn log_handles_degenerate_spectra() {
    // two repeated pairs in the spectrum
    let mut rng = sample::rng(4);
    let q = sample::unitary(&mut rng, 6);
    let d = diag(&[I, I, c(1.0, 0.0), c(1.0, 0.0), -I, c(0.6, 0.8)]);
    let u = &q * d * q.adjoint();
    let log = mats::principal_log_unitary(&u).unwrap();
    assert!(close(&mats::unitary_exp(&log), &u) < 1e-10);
}

#[test]
fn operator_norm_cases() {
    assert!((operator_norm(&mats::identity(5)) - 1.0).abs() < 1e-15);
    assert!((operator_norm(&diag(&[c(3.0, 0.0), c(0.0, -4.0)])) - 4.0).abs() < 1e-14);
    let mut rng = sample::rng(5);
    let m = sample::gaussian_matrix(&mut rng, 7, 7);
    let gram = SymmetricEigen::new(m.adjoint() * &m);
    let oracle = gram.eigenvalues.max().sqrt();
    assert!((operator_norm(&m) - oracle).abs() < 1e-10 * oracle);
}

#[test]
fn rejects_non_hermitian_and_non_unitary() {
    let m = CMatrix::from_row_slice(2, 2, &[c(0., 0.), c(1., 0.), c(0., 0.), c(0., 0.)]);
    assert!(matches!(HermitianMatrix::new(m.clone()), Err(Error::NotHermitian { .. })));
    assert!(matches!(mats::principal_log_unitary(&m), Err(Error::NotUnitary { .. })));
}

proptest! {
    #[test]
    fn log_exp_round_trip(seed in any::<u64>(), d in 1usize..7, r in 0.0f64..3.0) {
        let mut rng = sample::rng(seed);
        let h = sample::hermitian_with_norm(&mut rng, d, r);
        let u = mats::unitary_exp(&h);
        prop_assert!(mats::unitarity_defect(&u) < 1e-12);
        let back = mats::principal_log_unitary(&u).unwrap();
        prop_assert!(close(back.as_matrix(), h.as_matrix()) < 1e-9);
    }

    #[test]
    fn haar_unitaries_round_trip(seed in any::<u64>(), d in 1usize..7) {
        let mut rng = sample::rng(seed);
        let u = sample::unitary(&mut rng, d);
        if let Ok(log) = mats::principal_log_unitary(&u) {
            prop_assert!(close(&mats::unitary_exp(&log), &u) < 1e-10);
        }
    }
}

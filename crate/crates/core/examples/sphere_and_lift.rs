//! Contracting a unit sphere inside twice the dimension, then lifting the contraction to unitaries.

use pure_homotopy::geodesic::StateVector;
use pure_homotopy::homotopy::{lift_curve, padded_sphere_step, uniform_grid};
use pure_homotopy::mats;
use pure_homotopy::sample;

fn main() -> pure_homotopy::Result<()> {
    let mut rng = sample::rng(5);
    let omega = sample::state(&mut rng, 4);
    let mid = padded_sphere_step(&omega, 1, 1.0)?.vector;
    let mut min_den = f64::INFINITY;
    for k in 0..=100 {
        let t = k as f64 / 100.0;
        min_den = min_den.min(padded_sphere_step(&omega, 1, t)?.denominator);
        min_den = min_den.min(padded_sphere_step(&mid, 2, t)?.denominator);
    }
    println!("smallest interpolation denominator {min_den:.6} (never below 1/sqrt 2)");

    // the two stages as one curve in C^8, lifted through the base point ι(Ω)
    let curve = |s: f64| -> StateVector {
        if s <= 0.5 {
            padded_sphere_step(&omega, 1, 2.0 * s).unwrap().vector
        } else {
            padded_sphere_step(&mid, 2, 2.0 * s - 1.0).unwrap().vector
        }
    };
    let base = curve(0.0);
    let times = uniform_grid(17);
    let lift = lift_curve(curve, &times, &mats::identity(8), &base)?;
    let end = lift.last().unwrap() * base.coords();
    println!(
        "lifted endpoint sends the base point to e1 within {:.2e}",
        (end - mats::basis_vector(8, 0)).norm()
    );
    let worst = lift
        .iter()
        .zip(&times)
        .map(|(v, &s)| (v * base.coords() - curve(s).coords()).norm())
        .fold(0.0, f64::max);
    println!("lift tracks the curve within {worst:.2e}");
    Ok(())
}

//! The two single-unitary deformations: onto the geodesic, and aligning inside a corner.

use pure_homotopy::homotopy::{corner_align, corner_beta, deform_to_geodesic, uniform_grid};
use pure_homotopy::mats;
use pure_homotopy::sample;

fn main() -> pure_homotopy::Result<()> {
    let mut rng = sample::rng(3);
    let grid = uniform_grid(33);
    let psi = sample::state(&mut rng, 6);

    let u = sample::z_unitary(&mut rng, &psi, 0.3);
    let v = deform_to_geodesic(&u, &psi, &grid)?;
    println!(
        "deform_to_geodesic: |1-U| = {:.4}, path max {:.4} (bound {:.4})",
        mats::dist_from_identity(&u),
        v.max_dist_from_identity(),
        3.0 * mats::dist_from_identity(&u)
    );

    let p = sample::projection(&mut rng, 6, 3);
    let delta = 0.05;
    let w0 = sample::unitary_at_distance(&mut rng, 6, 0.04);
    let pu = (p.matrix() * &w0 * psi.coords()).norm();
    let gamma = 0.99 * pu;
    let beta = corner_beta(gamma, delta, (p.matrix() * psi.coords()).norm());
    let w = corner_align(&w0, &p, &psi, gamma, delta, &grid)?;
    let end_norm = (p.matrix() * w.end() * psi.coords()).norm();
    println!("corner_align: |P U psi| = {pu:.6} at both ends ({end_norm:.6}); beta = {beta:.3}");
    println!(
        "  path max {:.4} (bound {:.4})",
        w.max_dist_from_identity(),
        (1.0 + beta) * mats::dist_from_identity(&w0)
    );
    Ok(())
}

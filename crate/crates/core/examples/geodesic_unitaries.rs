//! Geodesic unitary between two vector states and its exact distance identity.

use pure_homotopy::geodesic::{geodesic_unitary, phase_extended_unitary, pure_state_norm_distance};
use pure_homotopy::mats;
use pure_homotopy::sample;

fn main() -> pure_homotopy::Result<()> {
    let mut rng = sample::rng(1);
    let (psi, omega) = sample::y_plus_pair(&mut rng, 5);
    let g = geodesic_unitary(&psi, &omega)?;
    println!("theta              = {:.6}", g.theta);
    println!(
        "|V psi - omega|    = {:.2e}",
        (&g.unitary * psi.coords() - omega.coords()).norm()
    );
    println!("|1 - V|            = {:.12}", mats::dist_from_identity(&g.unitary));
    println!("|psi - omega|      = {:.12}", (psi.coords() - omega.coords()).norm());
    println!(
        "|exp(iT) - V|      = {:.2e}",
        mats::operator_norm(&(mats::unitary_exp(&g.generator) - &g.unitary))
    );

    // any nonzero overlap: absorb the phase
    let other = sample::state(&mut rng, 5);
    let u = phase_extended_unitary(&psi, &other)?;
    println!(
        "phase extension maps psi to omega: {:.2e}",
        (&u * psi.coords() - other.coords()).norm()
    );
    println!("state norm distance = {:.6}", pure_state_norm_distance(&psi, &other)?);
    Ok(())
}

//! Moving a state onto a projection with the explicit unitary, and compressing to the corner.

use pure_homotopy::mats;
use pure_homotopy::sample;
use pure_homotopy::state::{act, compress_state, move_onto_projection, overlap, AlgebraShape, PureState};

fn main() -> pure_homotopy::Result<()> {
    let mut rng = sample::rng(2);
    let psi = PureState::new(AlgebraShape::single(6), sample::state(&mut rng, 6))?;
    let p = sample::projection(&mut rng, 6, 3);
    let ov = overlap(&psi, &p)?;
    let u = move_onto_projection(&psi, &p)?;
    let moved = act(&u, &psi)?;
    println!("psi(P)              = {ov:.6}");
    println!("(U psi)(P)          = {:.12}", overlap(&moved, &p)?);
    println!("|1 - U|             = {:.12}", mats::dist_from_identity(&u));
    println!("sqrt(2 - 2 sqrt ov) = {:.12}", (2.0 - 2.0 * ov.sqrt()).sqrt());

    let corner = compress_state(&moved, &p)?;
    println!(
        "corner rank {}, corner state {:?}",
        corner.corner.rank(),
        corner.state.coords().as_slice()
    );
    Ok(())
}

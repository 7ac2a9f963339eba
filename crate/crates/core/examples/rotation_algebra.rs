//! Clock and shift representations of a rational rotation algebra and the homotopy groups of its pure states.

use pure_homotopy::geodesic::StateVector;
use pure_homotopy::mats::c;
use pure_homotopy::nctorus::{
    homotopy_groups, irrep_at, pure_state_at, relation_residual, BundlePoint, RotationAlgebraElement, RotationParams,
};

fn main() -> pure_homotopy::Result<()> {
    let params = RotationParams::new(1, 3)?;
    let z1 = num_complex::Complex64::from_polar(1.0, 0.7);
    let z2 = num_complex::Complex64::from_polar(1.0, -1.9);
    let (u, v) = irrep_at(&params, z1, z2)?;
    println!("theta = 1/3, |vu - lambda uv| = {:.2e}", relation_residual(&params, &u, &v));

    let x = RotationAlgebraElement::u(params).add(&RotationAlgebraElement::v(params).scale(c(0.5, 0.0)));
    let point = BundlePoint::new(params, z1, z2, StateVector::from_slice(&[c(0.6, 0.), c(0., 0.8), c(0., 0.)])?)?;
    let state = pure_state_at(&point);
    println!("state(x* x) = {:.6}", state.evaluate(&x.adjoint().mul(&x))?);

    for k in 0..=7 {
        let g = homotopy_groups(&params, k, true);
        println!("pi_{k} = {:<14} ({:?})", g.display_value(), g.provenance);
    }
    Ok(())
}

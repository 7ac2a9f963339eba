//! The sphere of qubit states cannot be pushed onto a rank-one projection; the library says why.

use pure_homotopy::contract::{bloch_sphere_family, deform_family_onto_projection, StateFamily};
use pure_homotopy::geodesic::StateVector;
use pure_homotopy::mats;
use pure_homotopy::state::{AlgebraShape, Projection, PureState};

fn main() -> pure_homotopy::Result<()> {
    let family = bloch_sphere_family(3)?;
    let p = Projection::onto_span(AlgebraShape::single(2), &[mats::basis_vector(2, 0)])?;
    match deform_family_onto_projection(&family, &p, 9) {
        Ok(_) => println!("unexpected: deformation succeeded"),
        Err(e) => match e.obstruction() {
            Some(ob) => println!(
                "obstruction: family dim {}, corner rank {}, fails {}\n  {}",
                ob.family_dim, ob.corner_rank, ob.condition, ob.detail
            ),
            None => return Err(e),
        },
    }

    // in M_3 against span{e1, e3} the corner sphere is 2-connected and the same sphere goes through
    let shape = AlgebraShape::single(3);
    let p2 = Projection::onto_span(shape.clone(), &[mats::basis_vector(3, 0), mats::basis_vector(3, 2)])?;
    let states = family
        .states()
        .iter()
        .map(|s| {
            let v = s.coords();
            PureState::new(shape.clone(), StateVector::from_slice(&[v[0], v[1], mats::c(0.0, 0.0)])?)
        })
        .collect::<pure_homotopy::Result<Vec<_>>>()?;
    let lifted = StateFamily::new(family.grid().clone(), states, family.base_vertex())?;
    let def = deform_family_onto_projection(&lifted, &p2, 9)?;
    println!(
        "rank-2 corner in M_3: route {:?}, final defect {:.2e}",
        def.route,
        def.max_final_defect()
    );
    Ok(())
}

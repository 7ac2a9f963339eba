//! Contracting a loop of unitaries inside B_delta(1) ∩ S and printing the margin table.

use pure_homotopy::complex::SampledComplex;
use pure_homotopy::homotopy::{contract_in_s, ContractionConfig, SBall};
use pure_homotopy::mats;
use pure_homotopy::sample;
use pure_homotopy::state::{AlgebraShape, Projection};

fn main() -> pure_homotopy::Result<()> {
    let (d, r, delta, t) = (8, 4, 5e-4, 0.1);
    let mut rng = sample::rng(4);
    let pm = mats::CMatrix::from_fn(d, d, |i, j| mats::c(if i == j && i < r { 1.0 } else { 0.0 }, 0.0));
    let p = Projection::new(AlgebraShape::single(d), pm)?;
    let cx = SampledComplex::circle(17);
    for a in [t + 0.05, t + delta] {
        let psi = sample::state_with_overlap(&mut rng, &p, a);
        let ball = SBall::new(psi, p.clone(), t, delta)?;
        let members = sample::ball_family(&mut rng, &cx, d, 0.9 * delta);
        let c = contract_in_s(&cx, &members, &ball, &ContractionConfig::default())?;
        let rep = &c.report;
        println!(
            "overlap {a:.4}: branch {}, max distance {:.3e}, constant {:.4}, endpoint spread {:.1e}",
            rep.branch.name(),
            rep.max_distance,
            rep.branch_constant,
            rep.endpoint_spread
        );
        for st in &rep.stages {
            println!(
                "  {:<28} realized {:.3e}  bound {:.3e}  margin {:.3e}",
                st.name, st.realized, st.bound, st.margin
            );
        }
    }
    Ok(())
}

//! Excising a product state with the decreasing projections E_1 ⊗ … ⊗ E_n ⊗ 1.

use pure_homotopy::mats::{self, CMatrix};
use pure_homotopy::sample;
use pure_homotopy::state::{excision_defect, excision_projections, AlgebraShape, PureState};

fn main() -> pure_homotopy::Result<()> {
    let mut rng = sample::rng(6);
    let m = 4;
    let shape = AlgebraShape::uniform(2, m);
    let factors: Vec<_> = (0..m).map(|_| sample::state(&mut rng, 2)).collect();
    let reference = PureState::product(&factors)?;
    let ps = excision_projections(&shape, &reference)?;
    let x = CMatrix::from_row_slice(2, 2, &[mats::c(0., 0.), mats::c(1., 0.), mats::c(1., 0.), mats::c(0., 0.)]);
    println!("  n  rank  defect(A local in first n)  defect(X on factor n+1)");
    for (n, p) in ps.iter().enumerate().map(|(i, p)| (i + 1, p)) {
        let a = shape.embed_leading(&sample::gaussian_matrix(&mut rng, 1 << n, 1 << n), n)?;
        let inside = excision_defect(p, &a, &reference)?;
        let outside = if n < m {
            format!("{:.4}", excision_defect(p, &shape.embed_local(&x, n)?, &reference)?)
        } else {
            "-".into()
        };
        println!("{n:>3} {:>5}  {inside:>26.2e}  {outside:>22}", p.rank());
    }
    Ok(())
}

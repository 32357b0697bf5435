//! Grows a Wendland kernel system one support at a time and checks the
//! appended factor against the matrix it represents.

use rbfmorph::prelude::*;

fn main() -> Result<()> {
    let kernel = KernelConfig::new(1.5)?;
    let points: Vec<Point3> = (0..200)
        .map(|i| {
            let t = i as f64 * 0.618_033_988_75;
            Point3::new(
                t.fract(),
                (0.5 * t).sin() * 0.5 + 0.5,
                (i as f64 / 200.0).sqrt(),
            )
        })
        .collect();

    let mut factor = CholeskyState::new();
    for (i, p) in points.iter().enumerate() {
        let row: Vec<f64> = points[..=i]
            .iter()
            .map(|q| wendland_c2(normalized_distance(p, q, &kernel)))
            .collect::<Result<_>>()?;
        factor.append(&row)?;
        if (i + 1) % 50 == 0 {
            let n = i + 1;
            let phi = assemble_phi(&points[..n], &kernel)?;
            let back = factor.reconstruct();
            let gap = (0..n)
                .flat_map(|r| (0..n).map(move |c| (r, c)))
                .map(|(r, c)| (back[r][c] - phi[r][c]).abs())
                .fold(0.0, f64::max);
            println!(
                "order {n:>3}: last pivot {:.3e}, max |L L^T - Phi| = {gap:.2e}",
                factor.get(i, i)
            );
        }
    }

    let dx: Vec<f64> = points.iter().map(|p| 0.01 * p.z).collect();
    let zero = vec![0.0; points.len()];
    let (wx, _, _) = solve_weights(&factor, &dx, &zero, &zero)?;
    let support = SupportSet::from_parts(
        (0..points.len()).collect(),
        points.clone(),
        wx,
        zero.clone(),
        zero,
    )?;
    let worst = points
        .iter()
        .zip(&dx)
        .map(|(p, d)| Ok((evaluate_displacement(p, &support, &kernel)?.dx - d).abs()))
        .collect::<Result<Vec<f64>>>()?
        .into_iter()
        .fold(0.0, f64::max);
    println!(
        "interpolation residual at the {} centres: {worst:.2e}",
        points.len()
    );
    Ok(())
}

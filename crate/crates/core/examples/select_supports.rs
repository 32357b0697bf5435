//! Traditional greedy against grouping-circular greedy on the same wing.
//!
//! ```text
//! cargo run --release --example select_supports -- [small|desk] [m]
//! ```

use rbfmorph::prelude::*;

fn main() -> Result<()> {
    let mut args = std::env::args().skip(1);
    let (spec, tol) = match args.next().as_deref() {
        Some("desk") => (WingSpec::desk(), 1e-6),
        _ => (WingSpec::small(), 1e-5),
    };
    let m: usize = args.next().and_then(|s| s.parse().ok()).unwrap_or(8);

    let mesh = swept_wing(&spec)?;
    let chord = spec.root_chord;
    let wall = mesh.boundary_points();
    let deformer = Deformer::BendTwist(BendTwistParams::new(chord, 30.0, 0.25 * chord, 0.0)?);
    let disp = prescribe(
        mesh.boundary(),
        &wall,
        &DisplacementSource::Analytic(deformer),
    )?;
    let boundary = BoundarySet::new(mesh.boundary().to_vec(), wall, disp)?;
    let kernel = KernelConfig::new(7.0 * chord)?;
    let n_b = boundary.len();

    let greedy = greedy_select(&boundary, &SelectionConfig::new(tol, n_b, 1, 7), &kernel)?;
    let gcb = gcb_select(&boundary, &SelectionConfig::new(tol, n_b, m, 7), &kernel)?;

    println!("{n_b} wall nodes, tolerance {tol:e}");
    println!("algorithm  m    N_c   iters  kernel evals   t1 [s]   t2 [s]  max error");
    for (name, m, r) in [("greedy", 1, &greedy), ("gcb", m, &gcb)] {
        let h = &r.history;
        println!(
            "{name:<9} {m:>2} {:>6} {:>7} {:>13} {:>8.3} {:>8.3}  {:.2e}",
            r.support.len(),
            h.iterations(),
            error_stage_cost(h),
            h.t1_total(),
            h.t2_total(),
            r.summary.max_error
        );
    }
    println!(
        "error-stage speedup {:.1}x, normalized cost ratio {:.3}",
        greedy.history.t1_total() / gcb.history.t1_total(),
        normalized_cost_ratio(&gcb.history, &gcb.partition)
    );
    Ok(())
}

//! Support count, error-stage cost and timings as the group count grows.
//!
//! ```text
//! cargo run --release --example group_count_sweep -- [small|desk]
//! ```

use rbfmorph::prelude::*;

fn main() -> Result<()> {
    let (spec, tol) = match std::env::args().nth(1).as_deref() {
        Some("desk") => (WingSpec::desk(), 1e-6),
        _ => (WingSpec::small(), 1e-5),
    };
    let mesh = swept_wing(&spec)?;
    let chord = spec.root_chord;
    let wall = mesh.boundary_points();
    let deformer = Deformer::BendTwist(BendTwistParams::new(chord, 30.0, 0.25 * chord, 0.0)?);
    let disp = prescribe(
        mesh.boundary(),
        &wall,
        &DisplacementSource::Analytic(deformer),
    )?;
    let b = BoundarySet::new(mesh.boundary().to_vec(), wall, disp)?;
    let kernel = KernelConfig::new(7.0 * chord)?;
    let n_b = b.len();

    println!("m,n_supports,iterations,cum_kernel_evals,cost_ratio,t1_s,t2_s");
    let mut base = None;
    for m in [1, 2, 5, 10, 20, 40, 80] {
        if m > n_b {
            break;
        }
        let r = gcb_select(&b, &SelectionConfig::new(tol, n_b, m, 11), &kernel)?;
        let h = &r.history;
        println!(
            "{m},{},{},{},{:.4},{:.3},{:.3}",
            r.support.len(),
            h.iterations(),
            error_stage_cost(h),
            normalized_cost_ratio(h, &r.partition),
            h.t1_total(),
            h.t2_total()
        );
        base.get_or_insert(r.support.len());
    }
    if let Some(n_c) = base {
        println!(
            "# greedy needs {n_c} supports; suggested m between {} and {}",
            n_b / n_c,
            2 * n_b / n_c
        );
    }
    Ok(())
}

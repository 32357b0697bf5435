//! Bends and twists the wing, moves every volume node, and compares the wall
//! cell quality before and after.
//!
//! ```text
//! cargo run --release --example deform_wing -- [small|desk] [out.mdk]
//! ```

use std::time::Instant;

use rbfmorph::prelude::*;

fn main() -> Result<()> {
    let mut args = std::env::args().skip(1);
    let (spec, tol) = match args.next().as_deref() {
        Some("desk") => (WingSpec::desk(), 1e-6),
        _ => (WingSpec::small(), 1e-5),
    };
    let out = args.next();

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
    let m = (n_b / 1500).max(4);
    let result = gcb_select(&boundary, &SelectionConfig::new(tol, n_b, m, 1), &kernel)?;

    let exec = Executor::new(std::thread::available_parallelism().map_or(1, |n| n.get()))?;
    let t = Instant::now();
    let moved = deform_points_with(mesh.nodes(), &result.support, &kernel, &exec)?;
    let t3 = t.elapsed().as_secs_f64();
    let deformed = mesh.with_nodes(moved)?;

    let before = quality_report(mesh.cells(), mesh.nodes())?;
    let after = quality_report(deformed.cells(), deformed.nodes())?;
    println!(
        "{} nodes moved with {} supports (m = {m}) in {t3:.2} s",
        mesh.nodes().len(),
        result.support.len()
    );
    for (label, q) in [("before", &before), ("after", &after)] {
        println!(
            "{label:<7} min q {:.4}  mean q {:.4}",
            q.min.unwrap_or(f64::NAN),
            q.mean.unwrap_or(f64::NAN)
        );
    }
    println!("quality histogram (bin width 0.05), before -> after:");
    for (i, (a, b)) in before.histogram.iter().zip(&after.histogram).enumerate() {
        if *a > 0 || *b > 0 {
            println!(
                "  [{:.2}, {:.2})  {a:>6} -> {b:<6}",
                0.05 * i as f64,
                0.05 * (i + 1) as f64
            );
        }
    }
    if let Some(path) = out {
        std::fs::write(&path, write_mesh(&deformed))?;
        println!("wrote {path}");
    }
    Ok(())
}

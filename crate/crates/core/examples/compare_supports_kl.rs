//! How far GCB and random support sets drift from the greedy one, measured by
//! the nearest-support KL divergence at a common support count.
//!
//! ```text
//! cargo run --release --example compare_supports_kl -- [small|desk]
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

    let greedy = greedy_select(&b, &SelectionConfig::new(tol, b.len(), 1, 0), &kernel)?.support;
    let n_c = greedy.len();
    println!("greedy picked {n_c} of {} wall nodes", b.len());

    let mut rows = Vec::new();
    for m in [2, 5, 20, 40] {
        if m > b.len() {
            continue;
        }
        // stop at the greedy support count so the sets are the same size
        let cfg = SelectionConfig::new(tol, n_c, m, 0);
        rows.push((format!("gcb m={m}"), gcb_select(&b, &cfg, &kernel)?.support));
    }
    for seed in [1, 2] {
        rows.push((
            format!("random {seed}"),
            random_select(&b, n_c, seed, &kernel)?,
        ));
    }
    println!("{:<12} {:>8} {:>12}", "set", "shared", "KL(greedy||set)");
    for (label, s) in &rows {
        let shared = s.nodes().iter().filter(|&&n| greedy.contains(n)).count();
        println!(
            "{label:<12} {shared:>8} {:>12.2}",
            kl_divergence(&greedy, s, &b)?
        );
    }
    Ok(())
}

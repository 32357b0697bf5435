//! Writes a swept-wing mesh and its bend-twist wall displacements.
//!
//! ```text
//! cargo run --release --example generate_wing -- [small|desk] [out_dir]
//! ```

use std::path::PathBuf;

use rbfmorph::prelude::*;

fn main() -> Result<()> {
    let mut args = std::env::args().skip(1);
    let preset = args.next().unwrap_or_else(|| "small".into());
    let dir = PathBuf::from(args.next().unwrap_or_else(|| ".".into()));
    let spec = match preset.as_str() {
        "desk" => WingSpec::desk(),
        "small" => WingSpec::small(),
        other => return Err(Error::InvalidConfig(format!("unknown preset {other:?}"))),
    };

    let mesh = swept_wing(&spec)?;
    let b = spec.root_chord;
    let deformer = Deformer::BendTwist(BendTwistParams::new(b, 30.0, 0.25 * b, 0.0)?);
    let wall = mesh.boundary_points();
    let disp = prescribe(
        mesh.boundary(),
        &wall,
        &DisplacementSource::Analytic(deformer),
    )?;

    std::fs::create_dir_all(&dir)?;
    let mesh_path = dir.join(format!("wing_{preset}.mdk"));
    let disp_path = dir.join(format!("wing_{preset}.disp"));
    std::fs::write(&mesh_path, write_mesh(&mesh))?;
    std::fs::write(&disp_path, write_displacements(mesh.boundary(), &disp))?;
    println!(
        "{}: {} nodes, {} wall nodes, {} cells",
        mesh_path.display(),
        mesh.nodes().len(),
        mesh.boundary().len(),
        mesh.cells().len()
    );
    println!("{}", disp_path.display());
    Ok(())
}

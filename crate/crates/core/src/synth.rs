//! Parametric swept-wing test meshes.
//!
//! The wall is a tapered, swept wing with symmetric four-digit sections and a
//! closed trailing edge, sampled as a closed chordwise loop at evenly spaced
//! span stations. Volume nodes are the wall nodes pushed out along the surface
//! normal in geometrically growing layers, so spacing clusters toward the wall.
//! Node ids `0..n_boundary` are the wall; the rest are volume nodes. Surface
//! quads join neighbouring loop points on neighbouring stations.

use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::geometry::Point3;
use crate::mesh_io::Mesh;

#[derive(Debug, Clone, PartialEq)]
pub struct WingSpec {
    pub root_chord: f64,
    pub semi_span: f64,
    /// Tip chord over root chord.
    pub taper: f64,
    /// Leading-edge sweep, degrees.
    pub sweep_deg: f64,
    /// Maximum thickness over chord.
    pub thickness: f64,
    /// Points around each section loop.
    pub chordwise: usize,
    /// Span stations, root and tip included.
    pub spanwise: usize,
    /// Volume layers extruded from the wall.
    pub layers: usize,
    pub first_layer: f64,
    pub growth: f64,
}

impl WingSpec {
    /// 12,000 wall nodes and 204,000 volume nodes.
    pub fn desk() -> Self {
        Self {
            root_chord: 0.805,
            semi_span: 1.196,
            taper: 0.562,
            sweep_deg: 30.0,
            thickness: 0.10,
            chordwise: 160,
            spanwise: 75,
            layers: 17,
            first_layer: 1e-4,
            growth: 1.2,
        }
    }

    /// 1,200 wall nodes and 7,200 volume nodes, for quick runs.
    pub fn small() -> Self {
        Self {
            chordwise: 48,
            spanwise: 25,
            layers: 6,
            first_layer: 1e-3,
            growth: 1.5,
            ..Self::desk()
        }
    }

    pub fn n_boundary(&self) -> usize {
        self.chordwise * self.spanwise
    }

    fn validate(&self) -> Result<()> {
        let positive = [
            self.root_chord,
            self.semi_span,
            self.taper,
            self.thickness,
            self.first_layer,
            self.growth,
        ];
        if positive.iter().any(|v| !(v.is_finite() && *v > 0.0)) || !self.sweep_deg.is_finite() {
            return Err(Error::InvalidConfig(
                "wing dimensions must be finite and positive".into(),
            ));
        }
        if self.chordwise < 4 || self.spanwise < 2 {
            return Err(Error::InvalidConfig(
                "need at least 4 loop points and 2 stations".into(),
            ));
        }
        Ok(())
    }

    fn chord(&self, z: f64) -> f64 {
        self.root_chord * (1.0 - (1.0 - self.taper) * z / self.semi_span)
    }

    fn leading_edge(&self, z: f64) -> f64 {
        z * self.sweep_deg.to_radians().tan()
    }

    fn station(&self, j: usize) -> f64 {
        self.semi_span * j as f64 / (self.spanwise - 1) as f64
    }

    /// Wall point at loop parameter `theta` (0 = trailing edge, pi = leading
    /// edge, upper surface first) and span position `z`.
    fn surface(&self, theta: f64, z: f64) -> Point3 {
        let xc = 0.5 * (1.0 + theta.cos());
        let half = half_thickness(xc, self.thickness);
        let side = if theta.sin() >= 0.0 { 1.0 } else { -1.0 };
        let c = self.chord(z);
        Point3::new(self.leading_edge(z) + xc * c, side * half * c, z)
    }
}

/// Symmetric four-digit half thickness with a closed trailing edge.
fn half_thickness(xc: f64, t: f64) -> f64 {
    let xc = xc.clamp(0.0, 1.0);
    5.0 * t
        * (0.2969 * xc.sqrt() - 0.1260 * xc - 0.3516 * xc * xc + 0.2843 * xc.powi(3)
            - 0.1036 * xc.powi(4))
}

fn cross(a: (f64, f64, f64), b: (f64, f64, f64)) -> (f64, f64, f64) {
    (
        a.1 * b.2 - a.2 * b.1,
        a.2 * b.0 - a.0 * b.2,
        a.0 * b.1 - a.1 * b.0,
    )
}

/// Generates the wing mesh described by `spec`.
pub fn swept_wing(spec: &WingSpec) -> Result<Mesh> {
    spec.validate()?;
    let nc = spec.chordwise;
    let ns = spec.spanwise;
    let theta = |i: usize| 2.0 * PI * i as f64 / nc as f64;

    let mut wall = Vec::with_capacity(nc * ns);
    for j in 0..ns {
        let z = spec.station(j);
        for i in 0..nc {
            wall.push(spec.surface(theta(i), z));
        }
    }

    let id = |i: usize, j: usize| j * nc + i;
    let mut normals = Vec::with_capacity(wall.len());
    for j in 0..ns {
        for i in 0..nc {
            let a = wall[id((i + 1) % nc, j)] - wall[id((i + nc - 1) % nc, j)];
            let (j0, j1) = (j.saturating_sub(1), (j + 1).min(ns - 1));
            let b = wall[id(i, j1)] - wall[id(i, j0)];
            let n = cross((a.dx, a.dy, a.dz), (b.dx, b.dy, b.dz));
            let p = wall[id(i, j)];
            let z = p.z;
            // outward: away from the section's mid-chord point
            let mid = (spec.leading_edge(z) + 0.5 * spec.chord(z), 0.0);
            let out = (p.x - mid.0, p.y - mid.1, 0.0);
            let sign = if n.0 * out.0 + n.1 * out.1 + n.2 * out.2 >= 0.0 {
                1.0
            } else {
                -1.0
            };
            let len = (n.0 * n.0 + n.1 * n.1 + n.2 * n.2).sqrt();
            normals.push((sign * n.0 / len, sign * n.1 / len, sign * n.2 / len));
        }
    }

    let mut nodes = wall.clone();
    nodes.reserve(wall.len() * spec.layers);
    let mut offset = 0.0;
    let mut step = spec.first_layer;
    for _ in 0..spec.layers {
        offset += step;
        step *= spec.growth;
        for (p, n) in wall.iter().zip(&normals) {
            nodes.push(Point3::new(
                p.x + offset * n.0,
                p.y + offset * n.1,
                p.z + offset * n.2,
            ));
        }
    }

    let mut cells = Vec::with_capacity(nc * (ns - 1));
    for j in 0..ns - 1 {
        for i in 0..nc {
            let i1 = (i + 1) % nc;
            cells.push(vec![id(i, j), id(i1, j), id(i1, j + 1), id(i, j + 1)]);
        }
    }
    let boundary = (0..wall.len()).collect();
    Mesh::new(nodes, boundary, cells)
}

//! Analytic displacement prescriptions for wing-like surfaces.
//!
//! `z` is the spanwise coordinate throughout. Angles are given in degrees.

use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::geometry::{DisplacementField, Point3, Vec3Displacement};
use crate::mesh_io::read_displacements;

/// Coupled bending and twisting about a spanwise axis through `(x0, y0)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BendTwistParams {
    /// Root chord length.
    pub b: f64,
    /// Twist at the section where `z = b`, degrees.
    pub theta_m: f64,
    pub x0: f64,
    pub y0: f64,
}

impl BendTwistParams {
    pub fn new(b: f64, theta_m: f64, x0: f64, y0: f64) -> Result<Self> {
        if !(b.is_finite() && b > 0.0) {
            return Err(Error::InvalidConfig(format!(
                "root chord must be positive, got {b}"
            )));
        }
        if !(theta_m.is_finite() && x0.is_finite() && y0.is_finite()) {
            return Err(Error::InvalidConfig(
                "bend-twist parameters must be finite".into(),
            ));
        }
        Ok(Self { b, theta_m, x0, y0 })
    }
}

/// Spanwise sinusoidal heave.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpanSineParams {
    /// Span length.
    pub b: f64,
    /// Mean aerodynamic chord.
    pub c: f64,
}

impl SpanSineParams {
    pub fn new(b: f64, c: f64) -> Result<Self> {
        if !(b.is_finite() && b > 0.0 && c.is_finite() && c > 0.0) {
            return Err(Error::InvalidConfig(format!(
                "span and chord must be positive, got b={b}, c={c}"
            )));
        }
        Ok(Self { b, c })
    }
}

/// Rotates `(x, y)` about the pivot by `theta(z) = theta_m sin(pi z / 2b)`
/// (counter-clockwise in the x-y plane), then adds the bending heave
/// `0.05 z sin(pi z / 2b)` to `y`.
pub fn bend_twist(p: &Point3, params: &BendTwistParams) -> Vec3Displacement {
    let s = (PI * p.z / (2.0 * params.b)).sin();
    let theta = (params.theta_m * s).to_radians();
    let (sin_t, cos_t) = theta.sin_cos();
    let rx = p.x - params.x0;
    let ry = p.y - params.y0;
    let dx = (cos_t - 1.0) * rx - sin_t * ry;
    let dy = sin_t * rx + (cos_t - 1.0) * ry + 0.05 * p.z * s;
    Vec3Displacement::new(dx, dy, 0.0)
}

/// `dy = 0.3 c (z / b)^2 sin(8 pi z / b)`.
pub fn span_sine(p: &Point3, params: &SpanSineParams) -> Vec3Displacement {
    let r = p.z / params.b;
    Vec3Displacement::new(0.0, 0.3 * params.c * r * r * (8.0 * PI * r).sin(), 0.0)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Deformer {
    Zero,
    BendTwist(BendTwistParams),
    SpanSine(SpanSineParams),
}

impl Deformer {
    pub fn displacement(&self, p: &Point3) -> Vec3Displacement {
        match self {
            Deformer::Zero => Vec3Displacement::ZERO,
            Deformer::BendTwist(params) => bend_twist(p, params),
            Deformer::SpanSine(params) => span_sine(p, params),
        }
    }
}

/// Where boundary displacements come from.
#[derive(Debug, Clone, PartialEq)]
pub enum DisplacementSource<'a> {
    Analytic(Deformer),
    /// Text in the displacement file format, keyed by mesh node id.
    File(&'a str),
}

/// Displacements for every boundary node, aligned with `boundary_ids`.
pub fn prescribe(
    boundary_ids: &[usize],
    points: &[Point3],
    source: &DisplacementSource<'_>,
) -> Result<DisplacementField> {
    if boundary_ids.len() != points.len() {
        return Err(Error::DimensionMismatch {
            expected: boundary_ids.len(),
            actual: points.len(),
        });
    }
    match source {
        DisplacementSource::Analytic(d) => Ok(points
            .iter()
            .map(|p| d.displacement(p))
            .collect::<Vec<_>>()
            .into()),
        DisplacementSource::File(text) => {
            let entries = count_entries(text);
            if entries != boundary_ids.len() {
                return Err(Error::SourceMismatch {
                    expected: boundary_ids.len(),
                    actual: entries,
                });
            }
            read_displacements(text, boundary_ids)
        }
    }
}

fn count_entries(text: &str) -> usize {
    text.lines()
        .map(|l| l.split('#').next().unwrap_or("").trim())
        .filter(|l| !l.is_empty())
        .count()
        .saturating_sub(1)
}

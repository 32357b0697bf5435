//! Error summaries, support-distribution similarity and cell quality.

use crate::error::{Error, Result};
use crate::geometry::Point3;
use crate::kernel::KernelConfig;
use crate::rbf::{evaluate_unchecked, SupportSet};
use crate::selection::BoundarySet;

/// Floor applied to the second distance in the KL ratio.
pub const KL_DISTANCE_FLOOR: f64 = 1e-12;

/// Histogram bin width for quality reports.
pub const QUALITY_BIN_WIDTH: f64 = 0.05;
pub const QUALITY_BINS: usize = 20;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ErrorSummary {
    pub max_error: f64,
    pub rms_error: f64,
    pub node_of_max: usize,
}

/// Max (lowest index on ties) and RMS of a list of per-node errors.
pub fn summarize_errors(errors: &[f64]) -> ErrorSummary {
    let mut max_error = 0.0;
    let mut node_of_max = 0;
    let mut sum_sq = 0.0;
    for (j, &e) in errors.iter().enumerate() {
        if e > max_error {
            max_error = e;
            node_of_max = j;
        }
        sum_sq += e * e;
    }
    let rms_error = if errors.is_empty() {
        0.0
    } else {
        (sum_sq / errors.len() as f64).sqrt()
    };
    ErrorSummary {
        // rms can exceed max by an ulp when all errors are equal
        rms_error: rms_error.min(max_error),
        max_error,
        node_of_max,
    }
}

/// Interpolation errors over every boundary node.
pub fn error_summary(b: &BoundarySet, s: &SupportSet, cfg: &KernelConfig) -> ErrorSummary {
    let disp = b.displacements();
    let errors: Vec<f64> = b
        .points()
        .iter()
        .enumerate()
        .map(|(j, p)| (disp[j] - evaluate_unchecked(p, s, cfg)).norm())
        .collect();
    summarize_errors(&errors)
}

/// Distance from boundary node `i` to the closest support node.
pub fn nearest_support_distance(i: usize, s: &SupportSet, b: &BoundarySet) -> Result<f64> {
    if s.is_empty() {
        return Err(Error::EmptySupportSet);
    }
    let p = b.points().get(i).ok_or(Error::UnknownIndex(i))?;
    Ok(nearest_distance(p, s.points()))
}

fn nearest_distance(p: &Point3, supports: &[Point3]) -> f64 {
    supports
        .iter()
        .map(|q| p.distance_squared(q))
        .fold(f64::INFINITY, f64::min)
        .sqrt()
}

/// Nearest-support distance for every boundary node.
pub fn nearest_support_distances(s: &SupportSet, b: &BoundarySet) -> Result<Vec<f64>> {
    if s.is_empty() {
        return Err(Error::EmptySupportSet);
    }
    Ok(b.points()
        .iter()
        .map(|p| nearest_distance(p, s.points()))
        .collect())
}

/// `Σ d1 ln(d1 / d2)` over boundary nodes, where `d` is the nearest-support
/// distance under each set.
///
/// Terms with `d1 = 0` contribute 0 and `d2` is floored at
/// [`KL_DISTANCE_FLOOR`]. Natural logarithm.
pub fn kl_divergence(s1: &SupportSet, s2: &SupportSet, b: &BoundarySet) -> Result<f64> {
    let d1 = nearest_support_distances(s1, b)?;
    let d2 = nearest_support_distances(s2, b)?;
    Ok(kl_from_distances(&d1, &d2))
}

pub fn kl_from_distances(d1: &[f64], d2: &[f64]) -> f64 {
    d1.iter()
        .zip(d2)
        .map(|(&a, &b)| {
            if a == 0.0 {
                0.0
            } else {
                a * (a / b.max(KL_DISTANCE_FLOOR)).ln()
            }
        })
        .sum()
}

/// Interior angles of a polygon in degrees, one per vertex.
fn interior_angles(cell_id: usize, verts: &[Point3]) -> Result<Vec<f64>> {
    let k = verts.len();
    for a in 0..k {
        for b in a + 1..k {
            if verts[a] == verts[b] {
                return Err(Error::DegenerateCell {
                    cell: cell_id,
                    reason: format!("vertices {a} and {b} coincide"),
                });
            }
        }
    }
    Ok((0..k)
        .map(|v| {
            let prev = verts[(v + k - 1) % k] - verts[v];
            let next = verts[(v + 1) % k] - verts[v];
            let dot = prev.dx * next.dx + prev.dy * next.dy + prev.dz * next.dz;
            let cos = (dot / (prev.norm() * next.norm())).clamp(-1.0, 1.0);
            cos.acos().to_degrees()
        })
        .collect())
}

fn quality_of(cell_id: usize, cell: &[usize], positions: &[Point3]) -> Result<f64> {
    let ideal = match cell.len() {
        3 => 60.0,
        4 => 90.0,
        k => {
            return Err(Error::DegenerateCell {
                cell: cell_id,
                reason: format!("unsupported arity {k}"),
            })
        }
    };
    let mut verts = Vec::with_capacity(cell.len());
    for &v in cell {
        verts.push(*positions.get(v).ok_or_else(|| Error::DegenerateCell {
            cell: cell_id,
            reason: format!("vertex {v} out of range"),
        })?);
    }
    let angles = interior_angles(cell_id, &verts)?;
    let a_max = angles.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let a_min = angles.iter().copied().fold(f64::INFINITY, f64::min);
    Ok(1.0 - f64::max((a_max - ideal) / (180.0 - ideal), (ideal - a_min) / ideal))
}

/// Angle-based quality of a triangle or quadrilateral; 1 for a regular cell.
///
/// Compares the largest and smallest interior angles against the regular
/// polygon angle (60° or 90°).
pub fn cell_quality(cell: &[usize], positions: &[Point3]) -> Result<f64> {
    quality_of(0, cell, positions)
}

#[derive(Debug, Clone, PartialEq)]
pub struct QualityReport {
    pub values: Vec<f64>,
    pub min: Option<f64>,
    pub mean: Option<f64>,
    /// Counts per 0.05-wide bin over [0, 1]; values below 0 fall in the first bin.
    pub histogram: [usize; QUALITY_BINS],
}

impl QualityReport {
    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }
}

pub fn quality_report(cells: &[Vec<usize>], positions: &[Point3]) -> Result<QualityReport> {
    let values = cells
        .iter()
        .enumerate()
        .map(|(id, c)| quality_of(id, c, positions))
        .collect::<Result<Vec<f64>>>()?;
    let mut histogram = [0usize; QUALITY_BINS];
    for &q in &values {
        let bin = ((q / QUALITY_BIN_WIDTH).floor().max(0.0) as usize).min(QUALITY_BINS - 1);
        histogram[bin] += 1;
    }
    let (min, mean) = if values.is_empty() {
        (None, None)
    } else {
        (
            Some(values.iter().copied().fold(f64::INFINITY, f64::min)),
            Some(values.iter().sum::<f64>() / values.len() as f64),
        )
    };
    Ok(QualityReport {
        values,
        min,
        mean,
        histogram,
    })
}

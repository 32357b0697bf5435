//! RBF interpolation over a set of support nodes.
//!
//! The interpolant is a plain weighted sum of Wendland C² kernels centred on
//! the support nodes, one weight vector per displacement component. There is no
//! polynomial term. Weights come from the incremental Cholesky factor of the
//! support kernel matrix.

use crate::cholesky::CholeskyState;
use crate::error::{Error, Result};
use crate::exec::Executor;
use crate::geometry::{Point3, Vec3Displacement};
use crate::kernel::{kernel_between, phi, KernelConfig};

/// Candidates closer than this fraction of the radius to an existing support
/// are rejected as duplicates.
pub const DUPLICATE_RELATIVE_DISTANCE: f64 = 1e-12;

/// Selected support nodes and their weights.
///
/// `nodes` are boundary indices (positions in the boundary set), not mesh ids.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct SupportSet {
    nodes: Vec<usize>,
    points: Vec<Point3>,
    wx: Vec<f64>,
    wy: Vec<f64>,
    wz: Vec<f64>,
}

impl SupportSet {
    pub fn new() -> Self {
        Self::default()
    }

    /// Builds a support set from explicit weights.
    pub fn from_parts(
        nodes: Vec<usize>,
        points: Vec<Point3>,
        wx: Vec<f64>,
        wy: Vec<f64>,
        wz: Vec<f64>,
    ) -> Result<Self> {
        let n = nodes.len();
        for len in [points.len(), wx.len(), wy.len(), wz.len()] {
            if len != n {
                return Err(Error::DimensionMismatch {
                    expected: n,
                    actual: len,
                });
            }
        }
        let mut seen = std::collections::HashSet::with_capacity(n);
        for (pos, &node) in nodes.iter().enumerate() {
            if !seen.insert(node) {
                let first = nodes.iter().position(|&v| v == node).unwrap_or(pos);
                return Err(Error::DuplicateNodes(first, pos));
            }
        }
        Ok(Self {
            nodes,
            points,
            wx,
            wy,
            wz,
        })
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn nodes(&self) -> &[usize] {
        &self.nodes
    }

    pub fn points(&self) -> &[Point3] {
        &self.points
    }

    pub fn weights(&self) -> (&[f64], &[f64], &[f64]) {
        (&self.wx, &self.wy, &self.wz)
    }

    pub fn contains(&self, node: usize) -> bool {
        self.nodes.contains(&node)
    }
}

/// Dense kernel matrix over `points`.
pub fn assemble_phi(points: &[Point3], cfg: &KernelConfig) -> Result<Vec<Vec<f64>>> {
    let n = points.len();
    let mut m = vec![vec![0.0; n]; n];
    for j in 0..n {
        m[j][j] = 1.0;
        for i in 0..j {
            if points[i] == points[j] {
                return Err(Error::DuplicateNodes(i, j));
            }
            let v = kernel_between(&points[j], &points[i], cfg);
            m[j][i] = v;
            m[i][j] = v;
        }
    }
    Ok(m)
}

/// Interpolated displacement at `p`.
pub fn evaluate_displacement(
    p: &Point3,
    s: &SupportSet,
    cfg: &KernelConfig,
) -> Result<Vec3Displacement> {
    if s.is_empty() {
        return Err(Error::EmptySupportSet);
    }
    Ok(evaluate_unchecked(p, s, cfg))
}

/// Hot-path evaluation; an empty set yields zero.
#[inline]
pub(crate) fn evaluate_unchecked(
    p: &Point3,
    s: &SupportSet,
    cfg: &KernelConfig,
) -> Vec3Displacement {
    let radius = cfg.radius();
    let r2 = radius * radius;
    let (mut sx, mut sy, mut sz) = (0.0, 0.0, 0.0);
    for (i, q) in s.points.iter().enumerate() {
        let d2 = p.distance_squared(q);
        if d2 < r2 {
            let f = phi(d2.sqrt() / radius);
            sx += s.wx[i] * f;
            sy += s.wy[i] * f;
            sz += s.wz[i] * f;
        }
    }
    Vec3Displacement::new(sx, sy, sz)
}

/// Moves every point by its interpolated displacement.
pub fn deform_points(points: &[Point3], s: &SupportSet, cfg: &KernelConfig) -> Result<Vec<Point3>> {
    deform_points_with(points, s, cfg, &Executor::serial())
}

/// As [`deform_points`], spreading the evaluation over `exec`.
pub fn deform_points_with(
    points: &[Point3],
    s: &SupportSet,
    cfg: &KernelConfig,
    exec: &Executor,
) -> Result<Vec<Point3>> {
    if points.is_empty() {
        return Ok(Vec::new());
    }
    if s.is_empty() {
        return Err(Error::EmptySupportSet);
    }
    Ok(exec.map(points.len(), |k| {
        let p = points[k];
        p + evaluate_unchecked(&p, s, cfg)
    }))
}

/// Support set under construction: factor, right-hand sides and weights kept
/// in step as nodes are appended.
#[derive(Debug, Clone)]
pub struct SupportBuilder {
    cfg: KernelConfig,
    factor: CholeskyState,
    set: SupportSet,
    rhs: [Vec<f64>; 3],
    weights_current: bool,
}

impl SupportBuilder {
    pub fn new(cfg: KernelConfig) -> Self {
        Self {
            cfg,
            factor: CholeskyState::new(),
            set: SupportSet::new(),
            rhs: Default::default(),
            weights_current: true,
        }
    }

    pub fn len(&self) -> usize {
        self.set.len()
    }

    pub fn is_empty(&self) -> bool {
        self.set.is_empty()
    }

    pub fn factor(&self) -> &CholeskyState {
        &self.factor
    }

    pub fn kernel(&self) -> &KernelConfig {
        &self.cfg
    }

    /// Appends a support node and its prescribed displacement.
    ///
    /// Near-coincident candidates and rows that break positive definiteness
    /// are rejected without changing the builder.
    pub fn try_push(&mut self, node: usize, point: Point3, disp: Vec3Displacement) -> Result<()> {
        let min_dist = DUPLICATE_RELATIVE_DISTANCE * self.cfg.radius();
        let mut row = Vec::with_capacity(self.set.len() + 1);
        for (k, q) in self.set.points.iter().enumerate() {
            if self.set.nodes[k] == node || point.distance(q) < min_dist {
                return Err(Error::DuplicateNodes(self.set.nodes[k], node));
            }
            row.push(kernel_between(&point, q, &self.cfg));
        }
        row.push(1.0);
        self.factor.append(&row)?;
        self.set.nodes.push(node);
        self.set.points.push(point);
        self.rhs[0].push(disp.dx);
        self.rhs[1].push(disp.dy);
        self.rhs[2].push(disp.dz);
        self.weights_current = false;
        Ok(())
    }

    /// Re-solves the weights if nodes were added since the last solve.
    pub fn solve(&mut self) -> Result<()> {
        if self.weights_current {
            return Ok(());
        }
        let [dx, dy, dz] = &self.rhs;
        let (mut wx, mut wy, mut wz) = (dx.clone(), dy.clone(), dz.clone());
        self.factor
            .solve_in_place(&mut [&mut wx, &mut wy, &mut wz])?;
        self.set.wx = wx;
        self.set.wy = wy;
        self.set.wz = wz;
        self.weights_current = true;
        Ok(())
    }

    pub fn weights_current(&self) -> bool {
        self.weights_current
    }

    /// Current support set with weights brought up to date.
    pub fn solved(&mut self) -> Result<&SupportSet> {
        self.solve()?;
        Ok(&self.set)
    }

    /// Support set as it stands; weights lag behind until [`Self::solve`] runs.
    pub(crate) fn current(&self) -> &SupportSet {
        &self.set
    }

    /// Solves if needed and hands back the finished set.
    pub fn finish(mut self) -> Result<SupportSet> {
        self.solve()?;
        Ok(self.set)
    }

    /// Largest interpolation residual over the support nodes themselves.
    pub fn max_support_residual(&self) -> f64 {
        let mut worst: f64 = 0.0;
        for k in 0..self.set.len() {
            let f = evaluate_unchecked(&self.set.points[k], &self.set, &self.cfg);
            let r = Vec3Displacement::new(
                self.rhs[0][k] - f.dx,
                self.rhs[1][k] - f.dy,
                self.rhs[2][k] - f.dz,
            );
            worst = worst.max(r.norm());
        }
        worst
    }
}

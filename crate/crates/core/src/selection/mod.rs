//! Support-node data reduction.
//!
//! Both strategies grow the support set one node at a time from three seeds,
//! adding the node whose interpolation error is largest. The traditional
//! greedy scans every boundary node per iteration. The grouping-circular
//! variant splits the boundary into `m` random balanced groups and scans only
//! group `k mod m` in iteration `k`, so one full pass over the boundary takes
//! `m` iterations.

mod history;
mod partition;

use std::collections::HashSet;
use std::time::Instant;

pub use history::{
    error_stage_cost, normalized_cost_ratio, IterationRecord, ProbeRecord, SelectionHistory,
    SweepRecord,
};
pub use partition::{partition_boundary, seeded_rng, GroupPartition, SeededRng};

use crate::error::{Error, Result};
use crate::exec::Executor;
use crate::geometry::{DisplacementField, Point3, Vec3Displacement};
use crate::kernel::KernelConfig;
use crate::metrics::{summarize_errors, ErrorSummary};
use crate::rbf::{evaluate_unchecked, SupportBuilder, SupportSet};

/// Boundary nodes with their prescribed displacements.
///
/// Selection refers to nodes by position in this set ("boundary index");
/// `ids` maps positions back to mesh node ids.
#[derive(Debug, Clone, PartialEq)]
pub struct BoundarySet {
    ids: Vec<usize>,
    points: Vec<Point3>,
    disp: DisplacementField,
}

impl BoundarySet {
    pub fn new(ids: Vec<usize>, points: Vec<Point3>, disp: DisplacementField) -> Result<Self> {
        let n = ids.len();
        if n == 0 {
            return Err(Error::InvalidConfig("boundary set is empty".into()));
        }
        for len in [points.len(), disp.len()] {
            if len != n {
                return Err(Error::DimensionMismatch {
                    expected: n,
                    actual: len,
                });
            }
        }
        let mut seen = HashSet::with_capacity(n);
        for (pos, id) in ids.iter().enumerate() {
            if !seen.insert(*id) {
                return Err(Error::InvalidConfig(format!(
                    "boundary id {id} repeated at position {pos}"
                )));
            }
        }
        if let Some(k) = points.iter().position(|p| !p.is_finite()) {
            return Err(Error::InvalidConfig(format!(
                "boundary point {k} is not finite"
            )));
        }
        if let Some(k) = disp.iter().position(|d| !d.is_finite()) {
            return Err(Error::InvalidConfig(format!(
                "displacement {k} is not finite"
            )));
        }
        Ok(Self { ids, points, disp })
    }

    /// Boundary set whose ids are simply `0..points.len()`.
    pub fn from_points(points: Vec<Point3>, disp: DisplacementField) -> Result<Self> {
        let ids = (0..points.len()).collect();
        Self::new(ids, points, disp)
    }

    pub fn len(&self) -> usize {
        self.ids.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ids.is_empty()
    }

    pub fn ids(&self) -> &[usize] {
        &self.ids
    }

    pub fn points(&self) -> &[Point3] {
        &self.points
    }

    pub fn displacements(&self) -> &DisplacementField {
        &self.disp
    }

    /// Same nodes with a different displacement field.
    pub fn with_displacements(&self, disp: DisplacementField) -> Result<Self> {
        Self::new(self.ids.clone(), self.points.clone(), disp)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SelectionConfig {
    /// Allowable interpolation error `E*`.
    pub tolerance: f64,
    /// Upper bound on the support count.
    pub max_supports: usize,
    /// Group count; 1 gives the traditional greedy.
    pub m: usize,
    pub seed: u64,
    /// Threads used for error scans. Results do not depend on it.
    pub workers: usize,
    /// Record a global error snapshot whenever the support count is a multiple of this.
    pub probe_every: Option<usize>,
    /// Check the residual at every support node after every solve.
    pub verify_supports: bool,
}

impl SelectionConfig {
    pub fn new(tolerance: f64, max_supports: usize, m: usize, seed: u64) -> Self {
        Self {
            tolerance,
            max_supports,
            m,
            seed,
            workers: 1,
            probe_every: None,
            verify_supports: false,
        }
    }

    fn validate(&self, n_boundary: usize) -> Result<()> {
        if !(self.tolerance.is_finite() && self.tolerance > 0.0) {
            return Err(Error::InvalidConfig(format!(
                "tolerance must be positive, got {}",
                self.tolerance
            )));
        }
        if self.max_supports < 3 {
            return Err(Error::InvalidConfig(format!(
                "max_supports must be at least 3, got {}",
                self.max_supports
            )));
        }
        if self.m < 1 || self.m > n_boundary {
            return Err(Error::InvalidGroupCount {
                m: self.m,
                n_boundary,
            });
        }
        if self.probe_every == Some(0) {
            return Err(Error::InvalidConfig(
                "probe interval must be positive".into(),
            ));
        }
        Ok(())
    }
}

#[derive(Debug, Clone)]
pub struct SelectionResult {
    pub support: SupportSet,
    pub history: SelectionHistory,
    /// True when the final full sweep is within tolerance.
    pub converged: bool,
    pub partition: GroupPartition,
    /// Errors over every boundary node with the final weights.
    pub summary: ErrorSummary,
}

/// Largest-error node of a group and the work spent finding it.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GroupScan {
    pub node: usize,
    pub error: f64,
    pub kernel_evals: u64,
}

/// Euclidean length of the residual between the prescribed and interpolated
/// displacement at boundary node `j`.
pub fn interpolation_error(
    j: usize,
    b: &BoundarySet,
    s: &SupportSet,
    cfg: &KernelConfig,
) -> Result<f64> {
    if j >= b.len() {
        return Err(Error::UnknownIndex(j));
    }
    Ok(node_error(j, b, s, cfg))
}

#[inline]
fn node_error(j: usize, b: &BoundarySet, s: &SupportSet, cfg: &KernelConfig) -> f64 {
    let f = evaluate_unchecked(&b.points[j], s, cfg);
    (b.disp[j] - f).norm()
}

fn scan_errors(
    nodes: &[usize],
    b: &BoundarySet,
    s: &SupportSet,
    cfg: &KernelConfig,
    exec: &Executor,
) -> Vec<f64> {
    exec.map(nodes.len(), |k| node_error(nodes[k], b, s, cfg))
}

/// Position of the largest error; ties go to the smallest boundary index.
fn arg_max(nodes: &[usize], errors: &[f64]) -> (usize, f64) {
    let mut best = (nodes[0], errors[0]);
    for (&node, &e) in nodes.iter().zip(errors).skip(1) {
        if e > best.1 || (e == best.1 && node < best.0) {
            best = (node, e);
        }
    }
    best
}

/// Node with the largest interpolation error in `group`.
pub fn group_arg_max_error(
    group: &[usize],
    b: &BoundarySet,
    s: &SupportSet,
    cfg: &KernelConfig,
) -> Result<GroupScan> {
    if group.is_empty() {
        return Err(Error::EmptyGroup);
    }
    if let Some(&bad) = group.iter().find(|&&j| j >= b.len()) {
        return Err(Error::UnknownIndex(bad));
    }
    let errors = scan_errors(group, b, s, cfg, &Executor::serial());
    let (node, error) = arg_max(group, &errors);
    Ok(GroupScan {
        node,
        error,
        kernel_evals: (group.len() * s.len()) as u64,
    })
}

/// Three deterministic starting supports: the node with the largest prescribed
/// displacement, then two farthest-point picks. Ties go to the lowest index.
pub fn seed_supports(b: &BoundarySet) -> Result<[usize; 3]> {
    let n = b.len();
    if n < 3 {
        return Err(Error::TooFewBoundaryNodes(n));
    }
    let mut first = 0;
    let mut best = b.disp[0].norm();
    for j in 1..n {
        let v = b.disp[j].norm();
        if v > best {
            best = v;
            first = j;
        }
    }
    let mut chosen = vec![first];
    let mut min_d2: Vec<f64> = b
        .points
        .iter()
        .map(|p| p.distance_squared(&b.points[first]))
        .collect();
    for _ in 0..2 {
        let mut pick = usize::MAX;
        let mut far = f64::NEG_INFINITY;
        for (j, &d) in min_d2.iter().enumerate() {
            if chosen.contains(&j) {
                continue;
            }
            if d > far {
                far = d;
                pick = j;
            }
        }
        chosen.push(pick);
        for (j, d) in min_d2.iter_mut().enumerate() {
            *d = d.min(b.points[j].distance_squared(&b.points[pick]));
        }
    }
    Ok([chosen[0], chosen[1], chosen[2]])
}

/// Shared mutable state of one selection run.
struct Run<'a> {
    b: &'a BoundarySet,
    cfg: &'a SelectionConfig,
    kernel: KernelConfig,
    exec: Executor,
    builder: SupportBuilder,
    ineligible: HashSet<usize>,
    history: SelectionHistory,
    cum_evals: u64,
}

impl<'a> Run<'a> {
    fn start(b: &'a BoundarySet, cfg: &'a SelectionConfig, kernel: KernelConfig) -> Result<Self> {
        cfg.validate(b.len())?;
        let seeds = seed_supports(b)?;
        let mut run = Self {
            b,
            cfg,
            kernel,
            exec: Executor::new(cfg.workers)?,
            builder: SupportBuilder::new(kernel),
            ineligible: HashSet::new(),
            history: SelectionHistory {
                seed: cfg.seed,
                ..Default::default()
            },
            cum_evals: 0,
        };
        for s in seeds {
            run.builder.try_push(s, b.points[s], b.disp[s])?;
        }
        run.after_solve()?;
        Ok(run)
    }

    fn support(&self) -> &SupportSet {
        self.builder.current()
    }

    fn scan(&self, nodes: &[usize]) -> Vec<f64> {
        scan_errors(nodes, self.b, self.support(), &self.kernel, &self.exec)
    }

    /// Tries candidates above tolerance in decreasing error order until one is
    /// accepted. Rejected candidates stay ineligible for the rest of the run.
    fn add_best(&mut self, nodes: &[usize], errors: &[f64]) -> Option<usize> {
        let tol = self.cfg.tolerance;
        let mut tried: HashSet<usize> = HashSet::new();
        loop {
            let mut best: Option<(usize, f64)> = None;
            for (&node, &e) in nodes.iter().zip(errors) {
                if e <= tol || self.ineligible.contains(&node) || tried.contains(&node) {
                    continue;
                }
                match best {
                    Some((bn, be)) if e < be || (e == be && node > bn) => {}
                    _ => best = Some((node, e)),
                }
            }
            let (node, _) = best?;
            match self
                .builder
                .try_push(node, self.b.points[node], self.b.disp[node])
            {
                Ok(()) => return Some(node),
                Err(Error::DuplicateNodes(..)) | Err(Error::NotPositiveDefinite { .. }) => {
                    self.ineligible.insert(node);
                    tried.insert(node);
                }
                Err(_) => {
                    tried.insert(node);
                }
            }
        }
    }

    fn after_solve(&mut self) -> Result<()> {
        self.builder.solve()?;
        if self.cfg.verify_supports {
            let r = self.builder.max_support_residual();
            let worst = self.history.max_support_residual.get_or_insert(0.0);
            *worst = worst.max(r);
        }
        if let Some(every) = self.cfg.probe_every {
            let n = self.builder.len();
            if n.is_multiple_of(every) {
                let all: Vec<usize> = (0..self.b.len()).collect();
                let s = summarize_errors(&self.scan(&all));
                self.history.probes.push(ProbeRecord {
                    supports: n,
                    max_error: s.max_error,
                    rms_error: s.rms_error,
                });
            }
        }
        Ok(())
    }

    /// One loop iteration over `nodes`. Returns (added, group max error).
    fn visit(&mut self, iter: usize, group: usize, nodes: &[usize]) -> Result<(bool, f64)> {
        let t1 = Instant::now();
        let errors = self.scan(nodes);
        let t1_s = t1.elapsed().as_secs_f64();
        let kernel_evals = (nodes.len() * self.builder.len()) as u64;
        self.cum_evals += kernel_evals;
        let (arg, local_max) = arg_max(nodes, &errors);

        let mut t2_s = 0.0;
        let mut added = None;
        if local_max > self.cfg.tolerance {
            let t2 = Instant::now();
            added = self.add_best(nodes, &errors);
            if added.is_some() {
                self.builder.solve()?;
            }
            t2_s = t2.elapsed().as_secs_f64();
            if added.is_some() {
                self.after_solve()?;
            }
        }
        self.history.records.push(IterationRecord {
            iter,
            group,
            node: added.unwrap_or(arg),
            local_max_error: local_max,
            kernel_evals,
            cum_kernel_evals: self.cum_evals,
            t1_s,
            t2_s,
        });
        Ok((added.is_some(), local_max))
    }

    fn finish(mut self, partition: GroupPartition) -> Result<SelectionResult> {
        let all: Vec<usize> = (0..self.b.len()).collect();
        let t = Instant::now();
        let errors = self.scan(&all);
        let elapsed_s = t.elapsed().as_secs_f64();
        let summary = summarize_errors(&errors);
        self.history.final_sweep = Some(SweepRecord {
            node: summary.node_of_max,
            max_error: summary.max_error,
            kernel_evals: (all.len() * self.builder.len()) as u64,
            elapsed_s,
        });
        let converged = summary.max_error <= self.cfg.tolerance;
        Ok(SelectionResult {
            support: self.builder.finish()?,
            history: self.history,
            converged,
            partition,
            summary,
        })
    }
}

/// Grouping-circular greedy selection.
///
/// Iteration `k` scans group `k mod m` and adds its largest-error node when
/// that error exceeds the tolerance. The run stops after `m` consecutive visits
/// add nothing (every node has then been checked against the final support
/// set) or when the support count reaches `max_supports`. A final sweep over
/// all boundary nodes sets `converged`.
pub fn gcb_select(
    b: &BoundarySet,
    cfg: &SelectionConfig,
    kernel: &KernelConfig,
) -> Result<SelectionResult> {
    let mut run = Run::start(b, cfg, *kernel)?;
    let partition = partition_boundary(b, cfg.m, cfg.seed)?;
    let m = partition.group_count();
    let mut idle = 0;
    let mut blocked_error: Option<f64> = None;
    let mut k = 3;
    while run.builder.len() < cfg.max_supports {
        let i = k % m;
        let (added, local_max) = run.visit(k, i, partition.group(i))?;
        if added {
            idle = 0;
            blocked_error = None;
        } else {
            idle += 1;
            if local_max > cfg.tolerance {
                blocked_error = Some(blocked_error.map_or(local_max, |e: f64| e.max(local_max)));
            }
            if idle >= m {
                if let Some(error) = blocked_error {
                    return Err(Error::SelectionStalled { error });
                }
                break;
            }
        }
        k += 1;
    }
    run.finish(partition)
}

/// Traditional greedy: every iteration scans all boundary nodes and adds the
/// global arg-max. Equivalent to [`gcb_select`] with `m = 1`.
pub fn greedy_select(
    b: &BoundarySet,
    cfg: &SelectionConfig,
    kernel: &KernelConfig,
) -> Result<SelectionResult> {
    let cfg = SelectionConfig {
        m: 1,
        ..cfg.clone()
    };
    let mut run = Run::start(b, &cfg, *kernel)?;
    let partition = partition_boundary(b, 1, cfg.seed)?;
    let all: Vec<usize> = (0..b.len()).collect();
    let mut k = 3;
    while run.builder.len() < cfg.max_supports {
        let (added, global_max) = run.visit(k, 0, &all)?;
        if !added {
            if global_max > cfg.tolerance {
                return Err(Error::SelectionStalled { error: global_max });
            }
            break;
        }
        k += 1;
    }
    run.finish(partition)
}

/// `n` distinct boundary nodes drawn uniformly without replacement, with
/// weights solved for their prescribed displacements.
pub fn random_select(
    b: &BoundarySet,
    n: usize,
    seed: u64,
    kernel: &KernelConfig,
) -> Result<SupportSet> {
    if n < 3 || n > b.len() {
        return Err(Error::InvalidCount {
            count: n,
            min: 3,
            max: b.len(),
        });
    }
    let picks = rand::seq::index::sample(&mut seeded_rng(seed), b.len(), n).into_vec();
    let mut builder = SupportBuilder::new(*kernel);
    for j in picks {
        builder.try_push(j, b.points[j], b.disp[j])?;
    }
    builder.finish()
}

/// Displacement a support set reproduces at each boundary node.
pub fn interpolated_boundary(
    b: &BoundarySet,
    s: &SupportSet,
    cfg: &KernelConfig,
) -> Vec<Vec3Displacement> {
    b.points
        .iter()
        .map(|p| evaluate_unchecked(p, s, cfg))
        .collect()
}

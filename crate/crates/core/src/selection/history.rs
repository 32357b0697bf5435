//! Per-iteration bookkeeping for a selection run.

use super::GroupPartition;

/// One visit of the selection loop.
#[derive(Debug, Clone, PartialEq)]
pub struct IterationRecord {
    /// Loop counter; starts at 3 because three seeds precede the loop.
    pub iter: usize,
    /// Group scanned in this iteration.
    pub group: usize,
    /// Node added to the support set, or the group's arg-max when nothing was added.
    pub node: usize,
    /// Largest interpolation error found in the group.
    pub local_max_error: f64,
    /// Kernel evaluations spent computing the group's errors.
    pub kernel_evals: u64,
    pub cum_kernel_evals: u64,
    /// Error-stage wall time in seconds.
    pub t1_s: f64,
    /// Factor append plus weight solve wall time in seconds.
    pub t2_s: f64,
}

/// Full scan over every boundary node after the loop ends.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepRecord {
    pub node: usize,
    pub max_error: f64,
    pub kernel_evals: u64,
    pub elapsed_s: f64,
}

/// Global error snapshot taken at a fixed support count. Diagnostic only:
/// neither timed into `t1` nor counted in the kernel-evaluation totals.
#[derive(Debug, Clone, PartialEq)]
pub struct ProbeRecord {
    pub supports: usize,
    pub max_error: f64,
    pub rms_error: f64,
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct SelectionHistory {
    pub seed: u64,
    pub records: Vec<IterationRecord>,
    pub final_sweep: Option<SweepRecord>,
    pub probes: Vec<ProbeRecord>,
    /// Worst residual at support nodes over every solve, when verification is on.
    pub max_support_residual: Option<f64>,
    /// Volume evaluation time, filled in when a deformation follows selection.
    pub t3_s: Option<f64>,
}

impl SelectionHistory {
    pub fn t1_total(&self) -> f64 {
        self.records.iter().map(|r| r.t1_s).sum()
    }

    pub fn t2_total(&self) -> f64 {
        self.records.iter().map(|r| r.t2_s).sum()
    }

    pub fn iterations(&self) -> usize {
        self.records.len()
    }
}

/// Cumulative error-stage kernel evaluations.
pub fn error_stage_cost(history: &SelectionHistory) -> u64 {
    history.records.iter().map(|r| r.kernel_evals).sum()
}

/// Error-stage cost relative to a full scan of every boundary node on the same
/// support-count schedule, multiplied by the group count.
///
/// Each iteration's support count is recovered as `kernel_evals / card(G_i)`.
/// With balanced groups the result is 1 up to the group-size imbalance.
pub fn normalized_cost_ratio(history: &SelectionHistory, partition: &GroupPartition) -> f64 {
    let sizes = partition.group_sizes();
    let n_boundary: usize = sizes.iter().sum();
    let mut actual = 0.0;
    let mut full_scan = 0.0;
    for r in &history.records {
        let card = sizes[r.group] as f64;
        let supports = r.kernel_evals as f64 / card;
        actual += r.kernel_evals as f64;
        full_scan += n_boundary as f64 * supports;
    }
    if full_scan == 0.0 {
        return f64::NAN;
    }
    partition.group_count() as f64 * actual / full_scan
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rec(group: usize, kernel_evals: u64) -> IterationRecord {
        IterationRecord {
            iter: 3,
            group,
            node: 0,
            local_max_error: 0.0,
            kernel_evals,
            cum_kernel_evals: kernel_evals,
            t1_s: 0.0,
            t2_s: 0.0,
        }
    }

    #[test]
    fn cost_of_empty_history() {
        assert_eq!(error_stage_cost(&SelectionHistory::default()), 0);
    }

    #[test]
    fn cost_of_one_iteration() {
        let h = SelectionHistory {
            records: vec![rec(0, 7 * 3)],
            ..Default::default()
        };
        assert_eq!(error_stage_cost(&h), 21);
    }
}

//! Command-line front end: `select`, `deform`, `metrics` and `bench`.
//!
//! Every command loads an MDK1 mesh, prescribes wall displacements from a file
//! or an analytic deformer, and runs support selection before doing its own
//! work. Outputs are MDK1 meshes or CSV.

use std::fmt::Write as _;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::str::FromStr;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::deformers::{prescribe, BendTwistParams, Deformer, DisplacementSource, SpanSineParams};
use crate::error::{Error, Result};
use crate::exec::Executor;
use crate::kernel::KernelConfig;
use crate::mesh_io::{read_mesh, write_history_csv, write_mesh, Mesh};
use crate::metrics::{kl_divergence, quality_report, QualityReport, QUALITY_BINS};
use crate::rbf::{deform_points_with, SupportSet};
use crate::selection::{
    gcb_select, greedy_select, normalized_cost_ratio, random_select, BoundarySet, SelectionConfig,
    SelectionResult,
};

/// Support count reached by the greedy probe behind `--m auto`.
pub const AUTO_PROBE_SUPPORTS: usize = 200;

#[derive(Debug, Parser)]
#[command(
    name = "rbfmorph",
    version,
    about = "RBF mesh deformation with greedy support selection"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Select support nodes and write the iteration history.
    Select(SelectArgs),
    /// Select supports, then move every mesh node.
    Deform(DeformArgs),
    /// Cell quality before and after deformation, and KL divergences between support sets.
    Metrics(MetricsArgs),
    /// One selection per group count, as a CSV table.
    Bench(BenchArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum DeformMode {
    BendTwist,
    SpanSine,
    Zero,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Algorithm {
    Greedy,
    Gcb,
}

/// Group count: fixed, or estimated from a short greedy probe.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GroupCount {
    Fixed(usize),
    Auto,
}

impl FromStr for GroupCount {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        if s.eq_ignore_ascii_case("auto") {
            return Ok(GroupCount::Auto);
        }
        match s.parse::<usize>() {
            Ok(m) if m >= 1 => Ok(GroupCount::Fixed(m)),
            _ => Err(format!(
                "expected a positive integer or \"auto\", got {s:?}"
            )),
        }
    }
}

#[derive(Debug, Clone, Args)]
pub struct InputArgs {
    /// MDK1 mesh file.
    #[arg(long)]
    pub mesh: PathBuf,
    /// MDK1-DISP displacement file.
    #[arg(long, conflicts_with = "deform_mode")]
    pub disp: Option<PathBuf>,
    #[arg(long, value_enum)]
    pub deform_mode: Option<DeformMode>,
    /// Root chord (bend-twist) or span (span-sine).
    #[arg(long, default_value_t = 0.805)]
    pub b: f64,
    /// Twist amplitude in degrees.
    #[arg(long, default_value_t = 30.0)]
    pub theta_m: f64,
    /// Twist axis x; defaults to a quarter of `b`.
    #[arg(long)]
    pub x0: Option<f64>,
    #[arg(long, default_value_t = 0.0)]
    pub y0: f64,
    /// Mean aerodynamic chord for span-sine.
    #[arg(long)]
    pub c: Option<f64>,
    #[arg(long, default_value_t = 7.0)]
    pub radius: f64,
    #[arg(long, default_value_t = 1e-6)]
    pub tol: f64,
    #[arg(long, value_enum, default_value_t = Algorithm::Gcb)]
    pub algorithm: Algorithm,
    /// Group count, or "auto".
    #[arg(long, default_value = "auto")]
    pub m: GroupCount,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Defaults to the number of boundary nodes.
    #[arg(long)]
    pub max_supports: Option<usize>,
    #[arg(long, default_value_t = 1)]
    pub workers: usize,
}

#[derive(Debug, Clone, Args)]
pub struct SelectArgs {
    #[command(flatten)]
    pub input: InputArgs,
    #[arg(long)]
    pub history: Option<PathBuf>,
    /// Support nodes and weights as CSV.
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long)]
    pub report: Option<PathBuf>,
    /// Exit 0 when the run stops at --max-supports without meeting --tol.
    #[arg(long)]
    pub allow_max_stop: bool,
}

#[derive(Debug, Clone, Args)]
pub struct DeformArgs {
    #[command(flatten)]
    pub input: InputArgs,
    #[arg(long)]
    pub history: Option<PathBuf>,
    /// Deformed MDK1 mesh.
    #[arg(long)]
    pub out: PathBuf,
    #[arg(long)]
    pub report: Option<PathBuf>,
}

#[derive(Debug, Clone, Args)]
pub struct MetricsArgs {
    #[command(flatten)]
    pub input: InputArgs,
    /// Deformed mesh to compare against; computed from the greedy supports when absent.
    #[arg(long)]
    pub deformed: Option<PathBuf>,
    /// Group counts for the GCB support sets in the KL table.
    #[arg(long, value_delimiter = ',', default_value = "5,20,40")]
    pub m_list: Vec<usize>,
    /// Seeds for the random support sets in the KL table.
    #[arg(long, value_delimiter = ',', default_value = "1,2")]
    pub random_seeds: Vec<u64>,
    #[arg(long)]
    pub report: Option<PathBuf>,
}

#[derive(Debug, Clone, Args)]
pub struct BenchArgs {
    #[command(flatten)]
    pub input: InputArgs,
    #[arg(long, value_delimiter = ',', required = true)]
    pub m_list: Vec<usize>,
    /// Benchmark CSV; stdout when absent.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

/// Displacement source after resolving the command-line options.
#[derive(Debug, Clone, PartialEq)]
pub enum DisplacementChoice {
    File(PathBuf),
    Analytic(Deformer),
}

/// Everything a selection needs, independent of the subcommand.
#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub mesh: PathBuf,
    pub displacement: DisplacementChoice,
    pub radius: f64,
    pub tolerance: f64,
    pub algorithm: Algorithm,
    pub m: GroupCount,
    pub seed: u64,
    pub max_supports: Option<usize>,
    pub workers: usize,
}

impl RunConfig {
    pub fn from_args(a: &InputArgs) -> Result<Self> {
        let displacement = match (&a.disp, a.deform_mode) {
            (Some(path), _) => DisplacementChoice::File(path.clone()),
            (None, Some(DeformMode::Zero)) => DisplacementChoice::Analytic(Deformer::Zero),
            (None, Some(DeformMode::BendTwist)) => {
                let x0 = a.x0.unwrap_or(0.25 * a.b);
                DisplacementChoice::Analytic(Deformer::BendTwist(BendTwistParams::new(
                    a.b, a.theta_m, x0, a.y0,
                )?))
            }
            (None, Some(DeformMode::SpanSine)) => {
                let c =
                    a.c.ok_or_else(|| Error::InvalidConfig("span-sine needs --c".into()))?;
                DisplacementChoice::Analytic(Deformer::SpanSine(SpanSineParams::new(a.b, c)?))
            }
            (None, None) => {
                return Err(Error::InvalidConfig(
                    "give a displacement source with --disp or --deform-mode".into(),
                ))
            }
        };
        Ok(Self {
            mesh: a.mesh.clone(),
            displacement,
            radius: a.radius,
            tolerance: a.tol,
            algorithm: a.algorithm,
            m: a.m,
            seed: a.seed,
            max_supports: a.max_supports,
            workers: a.workers,
        })
    }

    pub fn kernel(&self) -> Result<KernelConfig> {
        KernelConfig::new(self.radius)
    }

    /// Selection settings for `m` groups on `n_boundary` wall nodes.
    pub fn selection(&self, n_boundary: usize, m: usize) -> SelectionConfig {
        let mut cfg = SelectionConfig::new(
            self.tolerance,
            self.max_supports.unwrap_or(n_boundary),
            m,
            self.seed,
        );
        cfg.workers = self.workers;
        cfg
    }
}

/// The mesh and its wall with prescribed displacements.
#[derive(Debug, Clone)]
pub struct Inputs {
    pub mesh: Mesh,
    pub boundary: BoundarySet,
}

fn read_text(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))
}

fn write_text(path: &Path, text: &str) -> Result<()> {
    std::fs::write(path, text).map_err(|e| Error::Io(format!("{}: {e}", path.display())))
}

pub fn load_inputs(cfg: &RunConfig) -> Result<Inputs> {
    let mesh = read_mesh(&read_text(&cfg.mesh)?)?;
    let wall = mesh.boundary_points();
    let disp = match &cfg.displacement {
        DisplacementChoice::File(path) => {
            let text = read_text(path)?;
            prescribe(mesh.boundary(), &wall, &DisplacementSource::File(&text))?
        }
        DisplacementChoice::Analytic(d) => {
            prescribe(mesh.boundary(), &wall, &DisplacementSource::Analytic(*d))?
        }
    };
    let boundary = BoundarySet::new(mesh.boundary().to_vec(), wall, disp)?;
    Ok(Inputs { mesh, boundary })
}

/// Extrapolated support count needed to reach `tol`.
///
/// Runs the traditional greedy up to [`AUTO_PROBE_SUPPORTS`] supports and fits
/// `ln E = a + p ln n` to the second half of its error history.
pub fn estimate_support_count(
    b: &BoundarySet,
    tol: f64,
    kernel: &KernelConfig,
    workers: usize,
) -> Result<usize> {
    let cap = AUTO_PROBE_SUPPORTS.min(b.len()).max(3);
    let mut cfg = SelectionConfig::new(tol, cap, 1, 0);
    cfg.workers = workers;
    let probe = greedy_select(b, &cfg, kernel)?;
    if probe.converged {
        return Ok(probe.support.len());
    }
    let n_b = b.len() as f64;
    let mut samples: Vec<(f64, f64)> = probe
        .history
        .records
        .iter()
        .map(|r| (r.kernel_evals as f64 / n_b, r.local_max_error))
        .collect();
    if let Some(sweep) = &probe.history.final_sweep {
        samples.push((probe.support.len() as f64, sweep.max_error));
    }
    let half = cap as f64 / 2.0;
    let (xs, ys): (Vec<f64>, Vec<f64>) = samples
        .into_iter()
        .filter(|&(n, e)| n >= half && e > 0.0)
        .map(|(n, e)| (n.ln(), e.ln()))
        .unzip();
    let Some((a, p)) = fit_line(&xs, &ys) else {
        return Ok(b.len());
    };
    if p >= 0.0 {
        return Ok(b.len());
    }
    let estimate = ((tol.ln() - a) / p).exp();
    Ok((estimate.round() as usize).clamp(cap, b.len()))
}

/// Least-squares intercept and slope.
fn fit_line(xs: &[f64], ys: &[f64]) -> Option<(f64, f64)> {
    let n = xs.len() as f64;
    if xs.len() < 2 {
        return None;
    }
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxx: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
    let sxy: f64 = xs.iter().zip(ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    if sxx == 0.0 {
        return None;
    }
    let p = sxy / sxx;
    Some((my - p * mx, p))
}

/// `round(1.5 N_b / estimate)` clamped to `[1, N_b]`.
pub fn auto_group_count(n_boundary: usize, estimate: usize) -> usize {
    let m = (1.5 * n_boundary as f64 / estimate.max(1) as f64).round() as usize;
    m.clamp(1, n_boundary.max(1))
}

pub fn resolve_m(cfg: &RunConfig, b: &BoundarySet, kernel: &KernelConfig) -> Result<usize> {
    if cfg.algorithm == Algorithm::Greedy {
        return Ok(1);
    }
    match cfg.m {
        GroupCount::Fixed(m) => Ok(m),
        GroupCount::Auto => {
            let estimate = estimate_support_count(b, cfg.tolerance, kernel, cfg.workers)?;
            Ok(auto_group_count(b.len(), estimate))
        }
    }
}

fn run_selection(
    cfg: &RunConfig,
    b: &BoundarySet,
    kernel: &KernelConfig,
    m: usize,
) -> Result<SelectionResult> {
    let sel = cfg.selection(b.len(), m);
    match cfg.algorithm {
        Algorithm::Greedy => greedy_select(b, &sel, kernel),
        Algorithm::Gcb => gcb_select(b, &sel, kernel),
    }
}

#[derive(Debug, Clone)]
pub struct SelectOutcome {
    pub m: usize,
    pub result: SelectionResult,
}

fn summary_lines(o: &SelectOutcome) -> String {
    let h = &o.result.history;
    let mut s = String::new();
    let _ = writeln!(s, "m={}", o.m);
    let _ = writeln!(s, "n_supports={}", o.result.support.len());
    let _ = writeln!(s, "converged={}", o.result.converged);
    let _ = writeln!(s, "iterations={}", h.iterations());
    let _ = writeln!(
        s,
        "cum_kernel_evals={}",
        h.records.last().map_or(0, |r| r.cum_kernel_evals)
    );
    let _ = writeln!(s, "final_max_error={:e}", o.result.summary.max_error);
    let _ = writeln!(s, "final_rms_error={:e}", o.result.summary.rms_error);
    let _ = writeln!(s, "t1_s={:.6}", h.t1_total());
    let _ = writeln!(s, "t2_s={:.6}", h.t2_total());
    if let Some(t3) = h.t3_s {
        let _ = writeln!(s, "t3_s={t3:.6}");
    }
    s
}

/// Support nodes and weights, one row per support in selection order.
pub fn write_supports_csv(s: &SupportSet) -> String {
    let mut out = String::from("node,wx,wy,wz\n");
    let (wx, wy, wz) = s.weights();
    for (k, node) in s.nodes().iter().enumerate() {
        let _ = writeln!(out, "{node},{:e},{:e},{:e}", wx[k], wy[k], wz[k]);
    }
    out
}

/// Runs selection, writes the requested files and prints a summary.
pub fn cmd_select(args: &SelectArgs, stdout: &mut dyn Write) -> Result<SelectOutcome> {
    let cfg = RunConfig::from_args(&args.input)?;
    let inputs = load_inputs(&cfg)?;
    let kernel = cfg.kernel()?;
    let m = resolve_m(&cfg, &inputs.boundary, &kernel)?;
    let result = run_selection(&cfg, &inputs.boundary, &kernel, m)?;
    let outcome = SelectOutcome { m, result };
    if let Some(path) = &args.history {
        write_text(path, &write_history_csv(&outcome.result.history))?;
    }
    if let Some(path) = &args.out {
        write_text(path, &write_supports_csv(&outcome.result.support))?;
    }
    let summary = summary_lines(&outcome);
    if let Some(path) = &args.report {
        write_text(path, &summary)?;
    }
    stdout.write_all(summary.as_bytes())?;
    Ok(outcome)
}

/// Selects supports and writes the mesh with every node moved.
pub fn cmd_deform(args: &DeformArgs, stdout: &mut dyn Write) -> Result<(SelectOutcome, Mesh)> {
    let cfg = RunConfig::from_args(&args.input)?;
    let inputs = load_inputs(&cfg)?;
    let kernel = cfg.kernel()?;
    let m = resolve_m(&cfg, &inputs.boundary, &kernel)?;
    let mut result = run_selection(&cfg, &inputs.boundary, &kernel, m)?;
    let exec = Executor::new(cfg.workers)?;
    let t = Instant::now();
    let moved = deform_points_with(inputs.mesh.nodes(), &result.support, &kernel, &exec)?;
    result.history.t3_s = Some(t.elapsed().as_secs_f64());
    let deformed = inputs.mesh.with_nodes(moved)?;
    write_text(&args.out, &write_mesh(&deformed))?;
    let outcome = SelectOutcome { m, result };
    if let Some(path) = &args.history {
        write_text(path, &write_history_csv(&outcome.result.history))?;
    }
    let summary = summary_lines(&outcome);
    if let Some(path) = &args.report {
        write_text(path, &summary)?;
    }
    stdout.write_all(summary.as_bytes())?;
    Ok((outcome, deformed))
}

fn quality_row(label: &str, q: &QualityReport) -> String {
    let fmt = |v: Option<f64>| v.map_or(String::new(), |v| format!("{v:e}"));
    let bins: Vec<String> = q.histogram.iter().map(|c| c.to_string()).collect();
    format!(
        "{label},{},{},{},{}\n",
        q.len(),
        fmt(q.min),
        fmt(q.mean),
        bins.join(",")
    )
}

/// Labelled support sets compared in the metrics report.
pub fn comparison_sets(
    cfg: &RunConfig,
    b: &BoundarySet,
    kernel: &KernelConfig,
    m_list: &[usize],
    random_seeds: &[u64],
) -> Result<Vec<(String, SupportSet)>> {
    let greedy = greedy_select(b, &cfg.selection(b.len(), 1), kernel)?;
    let n_c = greedy.support.len();
    let mut sets = vec![("greedy".to_string(), greedy.support)];
    for &m in m_list {
        // same support count as the greedy set
        let mut sel = cfg.selection(b.len(), m);
        sel.max_supports = n_c.max(3);
        sets.push((format!("gcb_m{m}"), gcb_select(b, &sel, kernel)?.support));
    }
    for &seed in random_seeds {
        sets.push((
            format!("random_s{seed}"),
            random_select(b, n_c.max(3), seed, kernel)?,
        ));
    }
    Ok(sets)
}

/// Quality reports for the undeformed and deformed meshes and, when a
/// displacement source is given, KL divergences between every ordered pair of
/// support sets.
pub fn cmd_metrics(args: &MetricsArgs, stdout: &mut dyn Write) -> Result<String> {
    let cfg = RunConfig::from_args(&args.input)?;
    let inputs = load_inputs(&cfg)?;
    let kernel = cfg.kernel()?;
    let sets = comparison_sets(
        &cfg,
        &inputs.boundary,
        &kernel,
        &args.m_list,
        &args.random_seeds,
    )?;
    let after = match &args.deformed {
        Some(path) => read_mesh(&read_text(path)?)?,
        None => {
            let exec = Executor::new(cfg.workers)?;
            let moved = deform_points_with(inputs.mesh.nodes(), &sets[0].1, &kernel, &exec)?;
            inputs.mesh.with_nodes(moved)?
        }
    };

    let mut report = String::from("# quality\nmesh,cells,min_q,mean_q");
    for i in 0..QUALITY_BINS {
        let _ = write!(report, ",h{i:02}");
    }
    report.push('\n');
    let before_q = quality_report(inputs.mesh.cells(), inputs.mesh.nodes())?;
    let after_q = quality_report(after.cells(), after.nodes())?;
    report.push_str(&quality_row("before", &before_q));
    report.push_str(&quality_row("after", &after_q));

    report.push_str("# kl\nfirst,second,n_first,n_second,kl\n");
    for (la, sa) in &sets {
        for (lb, sb) in &sets {
            let kl = kl_divergence(sa, sb, &inputs.boundary)?;
            let _ = writeln!(report, "{la},{lb},{},{},{kl:e}", sa.len(), sb.len());
        }
    }
    if let Some(path) = &args.report {
        write_text(path, &report)?;
    }
    stdout.write_all(report.as_bytes())?;
    Ok(report)
}

pub const BENCH_HEADER: &str =
    "m,n_supports,converged,iterations,cum_kernel_evals,cost_ratio,t1_s,t2_s,t3_s";

/// One GCB run per group count. The largest group count runs once first as an
/// untimed warm-up.
pub fn cmd_bench(args: &BenchArgs, stdout: &mut dyn Write) -> Result<String> {
    let cfg = RunConfig::from_args(&args.input)?;
    let inputs = load_inputs(&cfg)?;
    let kernel = cfg.kernel()?;
    let exec = Executor::new(cfg.workers)?;
    let b = &inputs.boundary;
    if let Some(&warm) = args.m_list.iter().max() {
        gcb_select(b, &cfg.selection(b.len(), warm), &kernel)?;
    }
    let mut table = format!("{BENCH_HEADER}\n");
    for &m in &args.m_list {
        let r = gcb_select(b, &cfg.selection(b.len(), m), &kernel)?;
        let t = Instant::now();
        deform_points_with(inputs.mesh.nodes(), &r.support, &kernel, &exec)?;
        let t3 = t.elapsed().as_secs_f64();
        let h = &r.history;
        let _ = writeln!(
            table,
            "{m},{},{},{},{},{:.6},{:.6},{:.6},{:.6}",
            r.support.len(),
            r.converged,
            h.iterations(),
            h.records.last().map_or(0, |x| x.cum_kernel_evals),
            normalized_cost_ratio(h, &r.partition),
            h.t1_total(),
            h.t2_total(),
            t3
        );
    }
    match &args.out {
        Some(path) => write_text(path, &table)?,
        None => stdout.write_all(table.as_bytes())?,
    }
    Ok(table)
}

/// Parses `args` (program name first) and runs the command. Returns the exit
/// status: 0 on success, 1 on a failed or unconverged run, 2 on a usage error.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let text = e.render().to_string();
            let _ = if code == 0 {
                stdout.write_all(text.as_bytes())
            } else {
                stderr.write_all(text.as_bytes())
            };
            return code;
        }
    };
    let outcome = match &cli.command {
        Command::Select(a) => cmd_select(a, stdout).map(|o| {
            if o.result.converged || a.allow_max_stop {
                0
            } else {
                let _ = writeln!(
                    stderr,
                    "error: stopped at {} supports with max error {:e} above tolerance",
                    o.result.support.len(),
                    o.result.summary.max_error
                );
                1
            }
        }),
        Command::Deform(a) => cmd_deform(a, stdout).map(|_| 0),
        Command::Metrics(a) => cmd_metrics(a, stdout).map(|_| 0),
        Command::Bench(a) => cmd_bench(a, stdout).map(|_| 0),
    };
    match outcome {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            1
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn group_count_parsing() {
        assert_eq!("auto".parse::<GroupCount>(), Ok(GroupCount::Auto));
        assert_eq!("12".parse::<GroupCount>(), Ok(GroupCount::Fixed(12)));
        assert!("0".parse::<GroupCount>().is_err());
        assert!("x".parse::<GroupCount>().is_err());
    }

    #[test]
    fn auto_group_count_band() {
        assert_eq!(auto_group_count(12000, 1500), 12);
        assert_eq!(auto_group_count(10, 100), 1);
        assert_eq!(auto_group_count(10, 1), 10);
    }

    #[test]
    fn line_fit() {
        let xs = [0.0, 1.0, 2.0, 3.0];
        let ys: Vec<f64> = xs.iter().map(|x| 1.5 - 2.0 * x).collect();
        let (a, p) = fit_line(&xs, &ys).unwrap();
        assert!((a - 1.5).abs() < 1e-12 && (p + 2.0).abs() < 1e-12);
        assert!(fit_line(&[1.0], &[1.0]).is_none());
    }

    #[test]
    fn usage_errors_exit_two() {
        let (mut out, mut err) = (Vec::new(), Vec::new());
        assert_eq!(run(["rbfmorph", "select"], &mut out, &mut err), 2);
        assert_eq!(
            run(
                ["rbfmorph", "select", "--mesh", "x", "--m", "zero"],
                &mut out,
                &mut err
            ),
            2
        );
    }
}

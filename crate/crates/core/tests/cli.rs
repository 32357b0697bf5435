use std::path::{Path, PathBuf};

use rbfmorph::cli::run;
use rbfmorph::prelude::*;
use tempfile::TempDir;

struct Case {
    dir: TempDir,
    mesh: Mesh,
}

impl Case {
    fn new() -> Self {
        let dir = TempDir::new().unwrap();
        let mesh = swept_wing(&WingSpec::small()).unwrap();
        std::fs::write(dir.path().join("wing.mdk"), write_mesh(&mesh)).unwrap();
        Self { dir, mesh }
    }

    fn path(&self, name: &str) -> PathBuf {
        self.dir.path().join(name)
    }

    fn mesh_arg(&self) -> String {
        self.path("wing.mdk").display().to_string()
    }
}

fn exec(args: &[&str]) -> (i32, String, String) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let mut full = vec!["rbfmorph"];
    full.extend_from_slice(args);
    let code = run(full, &mut out, &mut err);
    (
        code,
        String::from_utf8(out).unwrap(),
        String::from_utf8(err).unwrap(),
    )
}

fn value(stdout: &str, key: &str) -> String {
    stdout
        .lines()
        .find_map(|l| l.strip_prefix(&format!("{key}=")))
        .unwrap_or_else(|| panic!("{key} missing from {stdout}"))
        .to_string()
}

/// History CSV with the timing columns removed.
fn untimed(path: &Path) -> String {
    std::fs::read_to_string(path)
        .unwrap()
        .lines()
        .map(|l| {
            l.split(',')
                .enumerate()
                .filter(|(i, _)| *i != 6 && *i != 7)
                .map(|(_, f)| f)
                .collect::<Vec<_>>()
                .join(",")
        })
        .collect::<Vec<_>>()
        .join("\n")
}

const BEND: [&str; 4] = ["--deform-mode", "bend-twist", "--radius", "5.635"];

#[test]
fn huge_tolerance_selects_three_seeds() {
    let c = Case::new();
    let mesh = c.mesh_arg();
    let mut args = vec!["select", "--mesh", &mesh, "--tol", "1e3", "--m", "4"];
    args.extend(BEND);
    let (code, out, _) = exec(&args);
    assert_eq!(code, 0);
    assert_eq!(value(&out, "n_supports"), "3");
    assert_eq!(value(&out, "converged"), "true");
}

#[test]
fn single_group_history_equals_greedy_history() {
    let c = Case::new();
    let mesh = c.mesh_arg();
    let (h1, h2) = (c.path("gcb.csv"), c.path("greedy.csv"));
    let (h1s, h2s) = (h1.display().to_string(), h2.display().to_string());
    let mut a = vec!["select", "--mesh", &mesh, "--tol", "1e-5", "--seed", "3"];
    a.extend(BEND);
    let mut gcb = a.clone();
    gcb.extend(["--algorithm", "gcb", "--m", "1", "--history", &h1s]);
    let mut greedy = a.clone();
    greedy.extend(["--algorithm", "greedy", "--history", &h2s]);
    assert_eq!(exec(&gcb).0, 0);
    assert_eq!(exec(&greedy).0, 0);
    assert_eq!(untimed(&h1), untimed(&h2));
}

#[test]
fn missing_mesh_fails() {
    let (code, _, err) = exec(&["select", "--deform-mode", "bend-twist"]);
    assert_eq!(code, 2);
    assert!(err.contains("--mesh"));
    let (code, _, err) = exec(&[
        "select",
        "--mesh",
        "/nonexistent/wing.mdk",
        "--deform-mode",
        "zero",
    ]);
    assert_eq!(code, 1);
    assert!(err.contains("error"));
}

#[test]
fn missing_displacement_source_fails() {
    let c = Case::new();
    let (code, _, err) = exec(&["select", "--mesh", &c.mesh_arg()]);
    assert_eq!(code, 1);
    assert!(err.contains("displacement"));
}

#[test]
fn zero_displacement_leaves_mesh_unchanged() {
    let c = Case::new();
    let out = c.path("out.mdk").display().to_string();
    let (code, _, err) = exec(&[
        "deform",
        "--mesh",
        &c.mesh_arg(),
        "--deform-mode",
        "zero",
        "--m",
        "2",
        "--out",
        &out,
    ]);
    assert_eq!(code, 0, "{err}");
    assert_eq!(
        std::fs::read_to_string(&out).unwrap(),
        std::fs::read_to_string(c.path("wing.mdk")).unwrap()
    );
}

#[test]
fn deformed_wall_lands_on_prescribed_positions() {
    let c = Case::new();
    let wall = c.mesh.boundary_points();
    let d = Deformer::BendTwist(BendTwistParams::new(0.805, 30.0, 0.25 * 0.805, 0.0).unwrap());
    let disp = prescribe(c.mesh.boundary(), &wall, &DisplacementSource::Analytic(d)).unwrap();
    std::fs::write(
        c.path("wing.disp"),
        write_displacements(c.mesh.boundary(), &disp),
    )
    .unwrap();

    let out = c.path("out.mdk").display().to_string();
    let disp_arg = c.path("wing.disp").display().to_string();
    let report = c.path("report.txt").display().to_string();
    let (code, stdout, err) = exec(&[
        "deform",
        "--mesh",
        &c.mesh_arg(),
        "--disp",
        &disp_arg,
        "--radius",
        "5.635",
        "--out",
        &out,
        "--report",
        &report,
    ]);
    assert_eq!(code, 0, "{err}");
    assert!(value(&stdout, "t3_s").parse::<f64>().unwrap() >= 0.0);
    assert_eq!(std::fs::read_to_string(&report).unwrap(), stdout);
    let moved = read_mesh(&std::fs::read_to_string(&out).unwrap()).unwrap();
    for (k, &id) in c.mesh.boundary().iter().enumerate() {
        let target = wall[k] + disp[k];
        assert!(moved.nodes()[id].distance(&target) <= 1e-6);
    }
    let q = quality_report(moved.cells(), moved.nodes()).unwrap();
    assert!(q.min.unwrap() > 0.0);
}

#[test]
fn worker_count_does_not_change_history() {
    let c = Case::new();
    let mesh = c.mesh_arg();
    let mut histories = Vec::new();
    for workers in ["1", "8"] {
        let h = c.path(&format!("h{workers}.csv"));
        let hs = h.display().to_string();
        let mut a = vec![
            "select",
            "--mesh",
            &mesh,
            "--tol",
            "1e-6",
            "--workers",
            workers,
            "--history",
            &hs,
        ];
        a.extend(BEND);
        assert_eq!(exec(&a).0, 0);
        histories.push(untimed(&h));
    }
    assert_eq!(histories[0], histories[1]);
}

#[test]
fn max_supports_stop_needs_permission() {
    let c = Case::new();
    let mesh = c.mesh_arg();
    let mut a = vec![
        "select",
        "--mesh",
        &mesh,
        "--tol",
        "1e-9",
        "--max-supports",
        "8",
        "--m",
        "3",
    ];
    a.extend(BEND);
    let (code, out, _) = exec(&a);
    assert_eq!(code, 1);
    assert_eq!(value(&out, "n_supports"), "8");
    a.push("--allow-max-stop");
    assert_eq!(exec(&a).0, 0);
}

#[test]
fn select_writes_supports() {
    let c = Case::new();
    let mesh = c.mesh_arg();
    let out = c.path("s.csv").display().to_string();
    let mut a = vec![
        "select", "--mesh", &mesh, "--tol", "1e-4", "--m", "4", "--out", &out,
    ];
    a.extend(BEND);
    let (code, stdout, _) = exec(&a);
    assert_eq!(code, 0);
    let text = std::fs::read_to_string(&out).unwrap();
    assert_eq!(text.lines().next(), Some("node,wx,wy,wz"));
    assert_eq!(
        text.lines().count() - 1,
        value(&stdout, "n_supports").parse::<usize>().unwrap()
    );
}

#[test]
fn metrics_report_is_consistent() {
    let c = Case::new();
    let mesh = c.mesh_arg();
    let mut a = vec![
        "metrics",
        "--mesh",
        &mesh,
        "--deformed",
        &mesh,
        "--tol",
        "1e-5",
        "--m-list",
        "3",
        "--random-seeds",
        "1",
    ];
    a.extend(BEND);
    let (code, out, err) = exec(&a);
    assert_eq!(code, 0, "{err}");
    let rows: Vec<&str> = out.lines().collect();
    let before = rows.iter().find(|l| l.starts_with("before,")).unwrap();
    let after = rows.iter().find(|l| l.starts_with("after,")).unwrap();
    assert_eq!(before["before".len()..], after["after".len()..]);
    let kl: Vec<Vec<&str>> = rows
        .iter()
        .skip_while(|l| !l.starts_with("# kl"))
        .skip(2)
        .map(|l| l.split(',').collect())
        .collect();
    assert_eq!(kl.len(), 9);
    for r in &kl {
        if r[0] == r[1] {
            assert_eq!(r[4].parse::<f64>().unwrap(), 0.0);
        }
    }
}

#[test]
fn bench_rows() {
    let c = Case::new();
    let mesh = c.mesh_arg();
    let mut a = vec!["bench", "--mesh", &mesh, "--tol", "1e-5", "--m-list", "1,4"];
    a.extend(BEND);
    let (code, out, err) = exec(&a);
    assert_eq!(code, 0, "{err}");
    let rows: Vec<Vec<&str>> = out
        .lines()
        .skip(1)
        .map(|l| l.split(',').collect())
        .collect();
    assert_eq!(rows.len(), 2);

    let mut g = vec![
        "select",
        "--mesh",
        &mesh,
        "--tol",
        "1e-5",
        "--algorithm",
        "greedy",
    ];
    g.extend(BEND);
    let (_, greedy, _) = exec(&g);
    assert_eq!(rows[0][1], value(&greedy, "n_supports"));
    assert_eq!(rows[0][4], value(&greedy, "cum_kernel_evals"));
    for r in &rows {
        let ratio: f64 = r[5].parse().unwrap();
        assert!((0.9..=1.1).contains(&ratio), "{ratio}");
    }
}

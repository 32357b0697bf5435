mod common;

use std::collections::HashSet;

use common::*;
use proptest::prelude::*;
use rbfmorph::prelude::*;

fn kernel() -> KernelConfig {
    KernelConfig::new(2.0).unwrap()
}

fn cfg(tol: f64, n: usize, m: usize, seed: u64) -> SelectionConfig {
    SelectionConfig::new(tol, n, m, seed)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn gcb_single_group_is_greedy(seed in 0u64..1_000, n_b in 50usize..300) {
        let b = random_instance(seed, n_b);
        let c = cfg(1e-4, n_b, 1, seed);
        let g = greedy_select(&b, &c, &kernel()).unwrap();
        let s = gcb_select(&b, &c, &kernel()).unwrap();
        prop_assert_eq!(g.support.nodes(), s.support.nodes());
        prop_assert_eq!(g.converged, s.converged);
    }

    #[test]
    fn converged_runs_pass_an_independent_sweep(seed in 0u64..1_000, n_b in 50usize..300, m in 1usize..12) {
        let b = random_instance(seed, n_b);
        let r = gcb_select(&b, &cfg(1e-4, n_b, m, seed), &kernel()).unwrap();
        prop_assert!(r.converged);
        prop_assert!(full_scan_max(&b, &r.support, &kernel()) <= 1e-4);
    }

    #[test]
    fn supports_grow_by_one_without_repeats(seed in 0u64..1_000, m in 1usize..8) {
        let b = random_instance(seed, 150);
        let r = gcb_select(&b, &cfg(1e-4, 150, m, seed), &kernel()).unwrap();
        let nodes = r.support.nodes();
        let unique: HashSet<_> = nodes.iter().collect();
        prop_assert_eq!(unique.len(), nodes.len());
        // 3 seeds, then one support per adding visit
        let added = r
            .history
            .records
            .iter()
            .filter(|x| x.local_max_error > 1e-4)
            .count();
        prop_assert_eq!(nodes.len(), 3 + added);
        for w in r.history.records.windows(2) {
            prop_assert!(w[1].iter > w[0].iter);
            prop_assert!(w[1].cum_kernel_evals >= w[0].cum_kernel_evals);
            prop_assert!(w[1].kernel_evals / b.len() as u64 <= nodes.len() as u64);
        }
    }

    #[test]
    fn selection_is_deterministic(seed in 0u64..1_000, m in 1usize..8, workers in 1usize..5) {
        let b = random_instance(seed, 120);
        let mut c = cfg(1e-4, 120, m, seed);
        let first = gcb_select(&b, &c, &kernel()).unwrap();
        c.workers = workers;
        let second = gcb_select(&b, &c, &kernel()).unwrap();
        prop_assert_eq!(first.support.nodes(), second.support.nodes());
        prop_assert_eq!(first.support.weights(), second.support.weights());
    }
}

#[test]
fn hemisphere_translation_needs_few_supports() {
    let pts = hemisphere(200);
    let disp = DisplacementField::new(vec![Vec3Displacement::new(0.1, -0.05, 0.02); 200]);
    let b = BoundarySet::from_points(pts, disp).unwrap();
    // radius seven times the hemisphere's diameter
    let k = KernelConfig::new(14.0).unwrap();
    let r = gcb_select(&b, &cfg(1e-6, 200, 5, 3), &k).unwrap();
    assert!(r.converged);
    assert!(r.support.len() < 100, "{} supports", r.support.len());
    let sweep = r.history.final_sweep.as_ref().unwrap();
    assert!(sweep.max_error <= 1e-6);
    assert!(full_scan_max(&b, &r.support, &k) <= 1e-6);
}

#[test]
fn huge_tolerance_keeps_seeds() {
    let b = random_instance(1, 80);
    for m in [1, 4] {
        let r = gcb_select(&b, &cfg(1e3, 80, m, 0), &kernel()).unwrap();
        assert_eq!(r.support.nodes(), seed_supports(&b).unwrap());
        assert!(r.converged);
    }
}

#[test]
fn max_supports_stop_reports_unconverged() {
    let b = random_instance(2, 200);
    let r = gcb_select(&b, &cfg(1e-9, 10, 3, 0), &kernel()).unwrap();
    assert_eq!(r.support.len(), 10);
    assert!(!r.converged);
    assert!(r.history.final_sweep.is_some());
}

#[test]
fn error_stage_cost_scales_with_group_count() {
    let b = random_instance(9, 400);
    let k = kernel();
    for m in [2, 5, 10, 20] {
        let r = gcb_select(&b, &cfg(1e-5, 400, m, 4), &k).unwrap();
        let ratio = normalized_cost_ratio(&r.history, &r.partition);
        assert!((0.9..=1.1).contains(&ratio), "m={m} ratio={ratio}");
        // hand recount of the cumulative counter
        let sizes = r.partition.group_sizes();
        let mut supports = 3u64;
        let mut total = 0u64;
        for rec in &r.history.records {
            total += sizes[rec.group] as u64 * supports;
            if rec.local_max_error > 1e-5 {
                supports += 1;
            }
        }
        assert_eq!(error_stage_cost(&r.history), total);
    }
}

#[test]
fn random_baseline_interpolates_its_nodes() {
    let b = random_instance(4, 100);
    let s = random_select(&b, 30, 8, &kernel()).unwrap();
    assert_eq!(s.len(), 30);
    assert_eq!(random_select(&b, 30, 8, &kernel()).unwrap(), s);
    for &j in s.nodes() {
        assert!(interpolation_error(j, &b, &s, &kernel()).unwrap() <= 1e-8);
    }
}

mod common;

use common::*;
use nalgebra::DMatrix;
use rand::Rng;
use rbfmorph::prelude::*;

#[test]
fn five_by_five_matches_one_shot() {
    let a = DMatrix::from_row_slice(
        5,
        5,
        &[
            6.0, 1.0, 0.5, 0.0, 0.2, //
            1.0, 5.0, 0.3, 0.1, 0.0, //
            0.5, 0.3, 4.0, 0.7, 0.1, //
            0.0, 0.1, 0.7, 3.0, 0.4, //
            0.2, 0.0, 0.1, 0.4, 2.0,
        ],
    );
    assert!(factor_gap(&a) <= 1e-12);
}

#[test]
fn random_kernel_matrices_match_one_shot() {
    let mut r = rng(11);
    for n in [1, 2, 10, 60, 200, 500] {
        let pts = random_points(&mut r, n);
        let radius = r.gen_range(0.4..1.5);
        let gap = factor_gap(&kernel_matrix(&pts, radius));
        assert!(gap <= 1e-10, "n={n} radius={radius} gap={gap}");
    }
}

#[test]
fn reconstruction_and_solve() {
    let mut r = rng(5);
    let pts = random_points(&mut r, 120);
    let a = kernel_matrix(&pts, 0.8);
    let state = append_factor(&a);
    let back = state.reconstruct();
    for i in 0..120 {
        for j in 0..120 {
            assert!((back[i][j] - a[(i, j)]).abs() <= 1e-12);
        }
    }
    let rhs: Vec<f64> = (0..120).map(|_| r.gen_range(-1.0..1.0)).collect();
    let mut x = rhs.clone();
    state.solve_in_place(&mut [&mut x]).unwrap();
    let oracle = a
        .clone()
        .cholesky()
        .unwrap()
        .solve(&DMatrix::from_column_slice(120, 1, &rhs));
    for i in 0..120 {
        assert!((x[i] - oracle[(i, 0)]).abs() <= 1e-8 * (1.0 + oracle[(i, 0)].abs()));
    }
}

#[test]
fn indefinite_row_leaves_factor_intact() {
    let a = DMatrix::from_row_slice(2, 2, &[1.0, 0.0, 0.0, 4.0]);
    let mut state = append_factor(&a);
    let before = state.clone();
    let err = state.append(&[1.0, 2.0, 0.5]).unwrap_err();
    assert!(matches!(err, Error::NotPositiveDefinite { row: 2, .. }));
    assert_eq!(state, before);
}

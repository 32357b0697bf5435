#![allow(dead_code)]

use nalgebra::DMatrix;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rbfmorph::prelude::*;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Wendland C2 written out independently of the library.
pub fn wendland(r: f64, radius: f64) -> f64 {
    let e = r / radius;
    if e >= 1.0 {
        0.0
    } else {
        let t = 1.0 - e;
        t * t * t * t * (4.0 * e + 1.0)
    }
}

pub fn random_points(rng: &mut ChaCha8Rng, n: usize) -> Vec<Point3> {
    (0..n)
        .map(|_| Point3::new(rng.gen(), rng.gen(), rng.gen()))
        .collect()
}

pub fn kernel_matrix(points: &[Point3], radius: f64) -> DMatrix<f64> {
    let n = points.len();
    DMatrix::from_fn(n, n, |i, j| {
        wendland(points[i].distance(&points[j]), radius)
    })
}

/// Factor built one row at a time with the incremental append.
pub fn append_factor(a: &DMatrix<f64>) -> CholeskyState {
    let mut state = CholeskyState::with_capacity(a.nrows());
    for i in 0..a.nrows() {
        let row: Vec<f64> = (0..=i).map(|j| a[(i, j)]).collect();
        state.append(&row).expect("matrix is SPD");
    }
    state
}

/// Max-abs difference between the incremental factor and a one-shot factor.
pub fn factor_gap(a: &DMatrix<f64>) -> f64 {
    let inc = append_factor(a);
    let oracle = a.clone().cholesky().expect("oracle factorization").l();
    let mut gap: f64 = 0.0;
    for i in 0..a.nrows() {
        for j in 0..=i {
            gap = gap.max((inc.get(i, j) - oracle[(i, j)]).abs());
        }
    }
    gap
}

/// Points on a wavy patch with a smooth rotation-plus-heave displacement.
pub fn random_instance(seed: u64, n_b: usize) -> BoundarySet {
    let mut r = rng(seed);
    let amp: f64 = r.gen_range(0.01..0.1);
    let theta: f64 = r.gen_range(-0.2..0.2);
    let mut points = Vec::with_capacity(n_b);
    while points.len() < n_b {
        let x: f64 = r.gen();
        let z: f64 = r.gen();
        let y = 0.1 * (3.0 * x).sin() * (2.0 * z).cos();
        points.push(Point3::new(x, y, z));
    }
    let disp: Vec<Vec3Displacement> = points
        .iter()
        .map(|p| {
            let (s, c) = (theta * p.z).sin_cos();
            Vec3Displacement::new(
                (c - 1.0) * p.x - s * p.y,
                s * p.x + (c - 1.0) * p.y + amp * p.z * p.z,
                0.0,
            )
        })
        .collect();
    BoundarySet::from_points(points, disp.into()).unwrap()
}

/// Roughly even points on the upper unit hemisphere.
pub fn hemisphere(n: usize) -> Vec<Point3> {
    let golden = std::f64::consts::PI * (3.0 - 5f64.sqrt());
    (0..n)
        .map(|i| {
            let z = 1.0 - (i as f64 + 0.5) / n as f64;
            let r = (1.0 - z * z).sqrt();
            let t = golden * i as f64;
            Point3::new(r * t.cos(), r * t.sin(), z)
        })
        .collect()
}

/// Independent full scan: max residual norm over every boundary node.
pub fn full_scan_max(b: &BoundarySet, s: &SupportSet, kernel: &KernelConfig) -> f64 {
    let (wx, wy, wz) = s.weights();
    let radius = kernel.radius();
    b.points()
        .iter()
        .zip(b.displacements().iter())
        .map(|(p, d)| {
            let (mut fx, mut fy, mut fz) = (0.0, 0.0, 0.0);
            for (k, q) in s.points().iter().enumerate() {
                let f = wendland(p.distance(q), radius);
                fx += wx[k] * f;
                fy += wy[k] * f;
                fz += wz[k] * f;
            }
            ((d.dx - fx).powi(2) + (d.dy - fy).powi(2) + (d.dz - fz).powi(2)).sqrt()
        })
        .fold(0.0, f64::max)
}

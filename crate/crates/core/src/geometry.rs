//! Points and displacement vectors in 3-space.

use std::ops::{Add, Sub};

/// A position in 3-space.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Point3 {
    pub x: f64,
    pub y: f64,
    pub z: f64,
}

impl Point3 {
    pub const fn new(x: f64, y: f64, z: f64) -> Self {
        Self { x, y, z }
    }

    pub fn is_finite(&self) -> bool {
        self.x.is_finite() && self.y.is_finite() && self.z.is_finite()
    }

    #[inline]
    pub fn distance_squared(&self, other: &Point3) -> f64 {
        let dx = self.x - other.x;
        let dy = self.y - other.y;
        let dz = self.z - other.z;
        dx * dx + dy * dy + dz * dz
    }

    #[inline]
    pub fn distance(&self, other: &Point3) -> f64 {
        self.distance_squared(other).sqrt()
    }

    pub fn displaced(&self, d: Vec3Displacement) -> Point3 {
        Point3::new(self.x + d.dx, self.y + d.dy, self.z + d.dz)
    }
}

/// A displacement vector (final minus original position).
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Vec3Displacement {
    pub dx: f64,
    pub dy: f64,
    pub dz: f64,
}

impl Vec3Displacement {
    pub const ZERO: Vec3Displacement = Vec3Displacement::new(0.0, 0.0, 0.0);

    pub const fn new(dx: f64, dy: f64, dz: f64) -> Self {
        Self { dx, dy, dz }
    }

    pub fn is_finite(&self) -> bool {
        self.dx.is_finite() && self.dy.is_finite() && self.dz.is_finite()
    }

    pub fn norm(&self) -> f64 {
        (self.dx * self.dx + self.dy * self.dy + self.dz * self.dz).sqrt()
    }
}

impl Sub for Point3 {
    type Output = Vec3Displacement;

    fn sub(self, rhs: Point3) -> Vec3Displacement {
        Vec3Displacement::new(self.x - rhs.x, self.y - rhs.y, self.z - rhs.z)
    }
}

impl Add<Vec3Displacement> for Point3 {
    type Output = Point3;

    fn add(self, rhs: Vec3Displacement) -> Point3 {
        self.displaced(rhs)
    }
}

impl Sub for Vec3Displacement {
    type Output = Vec3Displacement;

    fn sub(self, rhs: Vec3Displacement) -> Vec3Displacement {
        Vec3Displacement::new(self.dx - rhs.dx, self.dy - rhs.dy, self.dz - rhs.dz)
    }
}

/// Prescribed displacement per boundary node, aligned with boundary order.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct DisplacementField(Vec<Vec3Displacement>);

impl DisplacementField {
    pub fn new(values: Vec<Vec3Displacement>) -> Self {
        Self(values)
    }

    pub fn zeros(n: usize) -> Self {
        Self(vec![Vec3Displacement::ZERO; n])
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn as_slice(&self) -> &[Vec3Displacement] {
        &self.0
    }

    pub fn iter(&self) -> std::slice::Iter<'_, Vec3Displacement> {
        self.0.iter()
    }

    pub fn into_inner(self) -> Vec<Vec3Displacement> {
        self.0
    }
}

impl From<Vec<Vec3Displacement>> for DisplacementField {
    fn from(values: Vec<Vec3Displacement>) -> Self {
        Self(values)
    }
}

impl std::ops::Index<usize> for DisplacementField {
    type Output = Vec3Displacement;

    fn index(&self, i: usize) -> &Vec3Displacement {
        &self.0[i]
    }
}

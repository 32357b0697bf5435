//! Wendland C² kernel with compact support.

use crate::error::{Error, Result};
use crate::geometry::Point3;

/// Support radius that normalizes distances before the kernel is applied.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KernelConfig {
    radius: f64,
}

impl KernelConfig {
    pub fn new(radius: f64) -> Result<Self> {
        if !(radius.is_finite() && radius > 0.0) {
            return Err(Error::InvalidRadius(radius));
        }
        Ok(Self { radius })
    }

    pub fn radius(&self) -> f64 {
        self.radius
    }
}

/// `(1 - eta)^4 (4 eta + 1)` on `[0, 1]`, zero beyond.
///
/// `eta == 1` takes the polynomial branch, which also evaluates to zero.
pub fn wendland_c2(eta: f64) -> Result<f64> {
    if eta.is_nan() || eta < 0.0 {
        return Err(Error::InvalidDistance(eta));
    }
    Ok(phi(eta))
}

#[inline(always)]
pub(crate) fn phi(eta: f64) -> f64 {
    if eta <= 1.0 {
        let t = 1.0 - eta;
        let t2 = t * t;
        t2 * t2 * (4.0 * eta + 1.0)
    } else {
        0.0
    }
}

/// Euclidean distance divided by the kernel radius.
pub fn normalized_distance(a: &Point3, b: &Point3, cfg: &KernelConfig) -> f64 {
    a.distance(b) / cfg.radius
}

/// Kernel value between two points.
#[inline]
pub fn kernel_between(a: &Point3, b: &Point3, cfg: &KernelConfig) -> f64 {
    phi(normalized_distance(a, b, cfg))
}

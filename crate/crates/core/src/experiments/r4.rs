use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::intersection::{
    common_invariant_planes, plane_to_unit_quaternion, IntersectionOptions, IntersectionReport, OrientedPlane,
    RelOrientation,
};
use crate::linalg::{Mat, Quaternion};
use crate::structures::{conjugate, standard_j, Sign, StructurePair};

/// Values of `b` for which the boundary computation is claimed correct.
pub const SAFE_INTERVAL: (f64, f64) = (0.5, 1.0);

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct R4Plane {
    pub plane: OrientedPlane,
    /// `α = v₂ v̄₁` of the `J₀`-oriented plane.
    pub quaternion: Quaternion,
    pub relative_orientation: RelOrientation,
    pub transverse: bool,
    pub local_sign: Option<Sign>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct R4Report {
    pub a: f64,
    pub b: f64,
    /// `a = b` or `a = 1/b`: the intersection is not a transverse pair of points.
    pub degenerate: bool,
    pub planes: Vec<R4Plane>,
    pub signed_total: Option<i64>,
    /// Full intersection report, when one could be computed.
    pub report: Option<IntersectionReport>,
}

/// Common complex lines of `J₀` and `J = gJ₀g⁻¹`, `g = diag(1/a, a, 1/b, b)`, in `R⁴`.
pub fn example_r4(a: f64, b: f64, tol: f64) -> Result<R4Report> {
    if !(a > 0.0 && b > 0.0 && a.is_finite() && b.is_finite()) {
        return Err(Error::InvalidArgument(format!("a and b must be positive, got a={a} b={b}")));
    }
    let degenerate = (a - b).abs() <= tol * a.max(b) || (a * b - 1.0).abs() <= tol;
    let j0 = standard_j(2);
    let j = conjugate(&j0, &Mat::diag(&[1.0 / a, a, 1.0 / b, b]))?;
    let pair = StructurePair::new(j0, j)?;
    let report = match common_invariant_planes(&pair, 1, &IntersectionOptions::default()) {
        Ok(r) => Some(r),
        Err(_) if degenerate => None,
        Err(e) => return Err(e),
    };
    let mut planes = Vec::new();
    if let Some(r) = &report {
        for p in &r.isolated_points {
            planes.push(R4Plane {
                plane: p.plane.clone(),
                quaternion: plane_to_unit_quaternion(&p.plane)?,
                relative_orientation: p.relative_orientation,
                transverse: p.transverse,
                local_sign: p.local_sign,
            });
        }
    }
    let signed_total = report
        .as_ref()
        .filter(|r| r.generic)
        .map(|_| planes.iter().map(|p| p.local_sign.map_or(0, Sign::value)).sum());
    Ok(R4Report { a, b, degenerate, planes, signed_total, report })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BoundaryReport {
    pub b: f64,
    pub u_max: f64,
    /// Maximiser of `y / (x² + y² + 1)`.
    pub x: f64,
    pub y: f64,
    pub f_max: f64,
    pub in_safe_interval: bool,
}

fn objective(x: f64, y: f64) -> f64 {
    y / (x * x + y * y + 1.0)
}

/// Largest latitude `u` solving `u / √(1 - u²) = (1/b² - b²) · y / (x² + y² + 1)`.
///
/// Grid search over `[-10, 10]²` followed by a shrinking compass search.
pub fn example_r4_boundary(b: f64) -> Result<BoundaryReport> {
    if !(b > 0.0 && b < 1.0) {
        return Err(Error::InvalidArgument(format!("b must lie in (0, 1), got {b}")));
    }
    let steps = 400;
    let h0 = 20.0 / steps as f64;
    let (mut x, mut y, mut f) = (0.0, 0.0, f64::NEG_INFINITY);
    for i in 0..=steps {
        for j in 0..=steps {
            let (xi, yj) = (-10.0 + i as f64 * h0, -10.0 + j as f64 * h0);
            let v = objective(xi, yj);
            if v > f {
                (x, y, f) = (xi, yj, v);
            }
        }
    }
    let mut h = h0;
    while h > 1e-12 {
        let mut moved = false;
        for (dx, dy) in [(h, 0.0), (-h, 0.0), (0.0, h), (0.0, -h)] {
            let v = objective(x + dx, y + dy);
            if v > f {
                (x, y, f) = (x + dx, y + dy, v);
                moved = true;
            }
        }
        if !moved {
            h /= 2.0;
        }
    }
    let c = (1.0 / (b * b) - b * b) * f;
    let u_max = c / (1.0 + c * c).sqrt();
    let in_safe_interval = b >= SAFE_INTERVAL.0 && b < SAFE_INTERVAL.1;
    Ok(BoundaryReport { b, u_max, x, y, f_max: f, in_safe_interval })
}

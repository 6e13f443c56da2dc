use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{orthonormalize, projector, projector_distance, Mat, Quaternion};
use crate::structures::{orientation_of, Sign};

/// Frames must satisfy `‖FᵀF - I‖ ≤ FRAME_TOL`.
pub const FRAME_TOL: f64 = 1e-8;

/// Oriented `2k`-plane in `R^{2n}`, stored as an orthonormal frame whose
/// column order gives the orientation.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OrientedPlane {
    frame: Mat,
}

impl OrientedPlane {
    pub fn new(frame: Mat) -> Result<Self> {
        let k2 = frame.cols();
        if k2 == 0 || k2 % 2 == 1 || k2 > frame.rows() || frame.rows() % 2 == 1 {
            return Err(Error::DimensionMismatch(format!(
                "{}-dimensional frame in R^{} is not a 2k-plane",
                k2,
                frame.rows()
            )));
        }
        let res = (&(&frame.transpose() * &frame) - &Mat::identity(k2)).norm_max();
        if res > FRAME_TOL {
            return Err(Error::NotOrthonormal(res));
        }
        Ok(OrientedPlane { frame })
    }

    /// Orthonormalises a spanning set, keeping its orientation.
    pub fn from_span(b: &Mat, tol: f64) -> Result<Self> {
        OrientedPlane::new(orthonormalize(b, tol)?)
    }

    pub fn frame(&self) -> &Mat {
        &self.frame
    }

    pub fn ambient_dim(&self) -> usize {
        self.frame.rows()
    }

    pub fn plane_dim(&self) -> usize {
        self.frame.cols()
    }

    /// Complex dimension `k`.
    pub fn k(&self) -> usize {
        self.frame.cols() / 2
    }

    pub fn projector(&self) -> Mat {
        projector(&self.frame)
    }

    /// Distance between the underlying unoriented planes.
    pub fn distance(&self, other: &OrientedPlane) -> f64 {
        projector_distance(&self.frame, &other.frame)
    }

    /// Same plane with the opposite orientation.
    pub fn reversed(&self) -> OrientedPlane {
        let mut frame = self.frame.clone();
        let last = frame.cols() - 1;
        let c: Vec<f64> = frame.col(last).iter().map(|x| -x).collect();
        frame.set_col(last, &c);
        OrientedPlane { frame }
    }

    /// `FᵀJF`, the matrix of `J` restricted to the plane (meaningful when the
    /// plane is `J`-invariant).
    pub fn restrict(&self, j: &Mat) -> Mat {
        &(&self.frame.transpose() * j) * &self.frame
    }

    /// `‖(I - FFᵀ) J F‖ / ‖J F‖`.
    pub fn invariance_residual(&self, j: &Mat) -> f64 {
        let jf = j * &self.frame;
        let inside = &self.frame * &(&self.frame.transpose() * &jf);
        (&jf - &inside).norm_fro() / jf.norm_fro().max(f64::MIN_POSITIVE)
    }

    /// Orientation `J` induces on the plane relative to the frame order.
    pub fn orientation_under(&self, j: &Mat) -> Sign {
        orientation_of(&self.restrict(j))
    }

    /// The plane carrying the orientation induced by `J`.
    pub fn oriented_by(&self, j: &Mat) -> OrientedPlane {
        match self.orientation_under(j) {
            Sign::Plus => self.clone(),
            Sign::Minus => self.reversed(),
        }
    }

    /// The image `gP`, oriented by pushing the frame forward.
    pub fn transform(&self, g: &Mat, tol: f64) -> Result<OrientedPlane> {
        OrientedPlane::from_span(&(g * &self.frame), tol)
    }
}

/// Unit imaginary quaternion `α = v₂ v̄₁` of an oriented 2-plane in `R⁴ = H`.
/// Left multiplication by `α` preserves the plane and induces its orientation.
pub fn plane_to_unit_quaternion(p: &OrientedPlane) -> Result<Quaternion> {
    if p.ambient_dim() != 4 || p.plane_dim() != 2 {
        return Err(Error::DimensionMismatch("quaternion map needs a 2-plane in R^4".into()));
    }
    let v1 = Quaternion::from_coords(&p.frame.col(0));
    let v2 = Quaternion::from_coords(&p.frame.col(1));
    Ok(v2 * v1.conj())
}

use std::ops::{Add, Mul, Neg, Sub};

use serde::{Deserialize, Serialize};

use super::Mat;

/// Quaternion `w + x i + y j + z k` with `ij = k`, `jk = i`, `ki = j`.
///
/// `R⁴` is identified with `H` through `(z₁, z₂) ↦ z₁ + z₂ j`, i.e. real
/// coordinates `(Re z₁, Im z₁, Re z₂, Im z₂)` are `(w, x, y, z)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Quaternion {
    pub w: f64,
    pub x: f64,
    pub y: f64,
    pub z: f64,
}

impl Quaternion {
    pub const ONE: Quaternion = Quaternion::new(1.0, 0.0, 0.0, 0.0);
    pub const I: Quaternion = Quaternion::new(0.0, 1.0, 0.0, 0.0);
    pub const J: Quaternion = Quaternion::new(0.0, 0.0, 1.0, 0.0);
    pub const K: Quaternion = Quaternion::new(0.0, 0.0, 0.0, 1.0);

    pub const fn new(w: f64, x: f64, y: f64, z: f64) -> Self {
        Quaternion { w, x, y, z }
    }

    pub fn from_coords(v: &[f64]) -> Self {
        Quaternion::new(v[0], v[1], v[2], v[3])
    }

    pub fn coords(self) -> [f64; 4] {
        [self.w, self.x, self.y, self.z]
    }

    pub fn conj(self) -> Self {
        Quaternion::new(self.w, -self.x, -self.y, -self.z)
    }

    pub fn norm_sqr(self) -> f64 {
        self.w * self.w + self.x * self.x + self.y * self.y + self.z * self.z
    }

    pub fn norm(self) -> f64 {
        self.norm_sqr().sqrt()
    }

    pub fn scale(self, s: f64) -> Self {
        Quaternion::new(self.w * s, self.x * s, self.y * s, self.z * s)
    }

    /// `i e^{jθ} = cos θ · i + sin θ · k`.
    pub fn i_exp_j(theta: f64) -> Self {
        Quaternion::new(0.0, theta.cos(), 0.0, theta.sin())
    }

    pub fn is_unit_imaginary(self, tol: f64) -> bool {
        self.w.abs() <= tol && (self.norm_sqr() - 1.0).abs() <= tol
    }
}

/// Hamilton product `p q`.
pub fn quat_mul(p: Quaternion, q: Quaternion) -> Quaternion {
    Quaternion::new(
        p.w * q.w - p.x * q.x - p.y * q.y - p.z * q.z,
        p.w * q.x + p.x * q.w + p.y * q.z - p.z * q.y,
        p.w * q.y - p.x * q.z + p.y * q.w + p.z * q.x,
        p.w * q.z + p.x * q.y - p.y * q.x + p.z * q.w,
    )
}

/// Matrix of `x ↦ q x` in the `(1, i, j, k)` coordinates.
pub fn left_mult_matrix(q: Quaternion) -> Mat {
    let Quaternion { w: a, x: b, y: c, z: d } = q;
    Mat::from_row_slice(4, 4, &[a, -b, -c, -d, b, a, -d, c, c, d, a, -b, d, -c, b, a])
}

impl Mul for Quaternion {
    type Output = Quaternion;
    fn mul(self, rhs: Quaternion) -> Quaternion {
        quat_mul(self, rhs)
    }
}

impl Add for Quaternion {
    type Output = Quaternion;
    fn add(self, r: Quaternion) -> Quaternion {
        Quaternion::new(self.w + r.w, self.x + r.x, self.y + r.y, self.z + r.z)
    }
}

impl Sub for Quaternion {
    type Output = Quaternion;
    fn sub(self, r: Quaternion) -> Quaternion {
        Quaternion::new(self.w - r.w, self.x - r.x, self.y - r.y, self.z - r.z)
    }
}

impl Neg for Quaternion {
    type Output = Quaternion;
    fn neg(self) -> Quaternion {
        self.scale(-1.0)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use std::f64::consts::PI;

    #[test]
    fn multiplication_table() {
        assert_eq!(Quaternion::I * Quaternion::J, Quaternion::K);
        assert_eq!(Quaternion::J * Quaternion::K, Quaternion::I);
        assert_eq!(Quaternion::K * Quaternion::I, Quaternion::J);
        assert_eq!(Quaternion::J * Quaternion::I, -Quaternion::K);
        assert_eq!(Quaternion::I * Quaternion::I, -Quaternion::ONE);
    }

    #[test]
    fn left_i_squares_to_minus_identity() {
        let l = left_mult_matrix(Quaternion::I);
        assert!((&l * &l).approx_eq(&Mat::identity(4).scale(-1.0), 0.0));
    }

    #[test]
    fn left_i_exp_j_is_traceless_complex_structure() {
        // Direct 4x4 computation for θ = π/3.
        let l = left_mult_matrix(Quaternion::i_exp_j(PI / 3.0));
        assert!(l.trace().abs() < 1e-15);
        assert!((&l * &l).approx_eq(&Mat::identity(4).scale(-1.0), 1e-15));
    }

    fn quat() -> impl Strategy<Value = Quaternion> {
        (-2.0..2.0f64, -2.0..2.0f64, -2.0..2.0f64, -2.0..2.0f64).prop_map(|(a, b, c, d)| Quaternion::new(a, b, c, d))
    }

    proptest! {
        #[test]
        fn left_mult_is_a_homomorphism(p in quat(), q in quat(), x in quat()) {
            let lp = left_mult_matrix(p);
            let prod = lp.matvec(&x.coords());
            let direct = (p * x).coords();
            for (a, b) in prod.iter().zip(direct) {
                prop_assert!((a - b).abs() < 1e-12);
            }
            let lpq = left_mult_matrix(p * q);
            prop_assert!(lpq.approx_eq(&(&lp * &left_mult_matrix(q)), 1e-12));
        }

        #[test]
        fn unit_left_mult_is_special_orthogonal(q in quat()) {
            prop_assume!(q.norm() > 0.1);
            let u = q.scale(1.0 / q.norm());
            let l = left_mult_matrix(u);
            prop_assert!((&l.transpose() * &l).approx_eq(&Mat::identity(4), 1e-12));
            prop_assert!((l.det() - 1.0).abs() < 1e-12);
        }
    }
}

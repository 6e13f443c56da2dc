use super::{nullspace, Mat};

/// Kernel of `A ↦ dA - Aa` on `q x p` matrices.
#[derive(Debug, Clone)]
pub struct SylvesterKernel {
    /// Frobenius-orthonormal basis of the kernel.
    pub basis: Vec<Mat>,
    /// The rank decision was within a factor 10 of the tolerance.
    pub ambiguous: bool,
}

impl SylvesterKernel {
    pub fn dim(&self) -> usize {
        self.basis.len()
    }
}

/// Matrix of `A ↦ dA - Aa` acting on column-major `vec(A)`:
/// `I_p ⊗ d - aᵀ ⊗ I_q`.
pub fn sylvester_operator(a: &Mat, d: &Mat) -> Mat {
    assert!(a.is_square() && d.is_square(), "sylvester blocks must be square");
    let p = a.rows();
    let q = d.rows();
    &Mat::identity(p).kron(d) - &a.transpose().kron(&Mat::identity(q))
}

/// Real basis of `{A : dA = Aa}` for square `a` (`p x p`) and `d` (`q x q`).
pub fn sylvester_kernel(a: &Mat, d: &Mat, tol: f64) -> SylvesterKernel {
    let (p, q) = (a.rows(), d.rows());
    if p == 0 || q == 0 {
        return SylvesterKernel { basis: vec![], ambiguous: false };
    }
    let ns = nullspace(&sylvester_operator(a, d), tol);
    let basis = ns.basis.columns().iter().map(|c| Mat::from_vec_col_major(q, p, c)).collect();
    SylvesterKernel { basis, ambiguous: ns.ambiguous }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::rotation2;
    use std::f64::consts::FRAC_PI_2;

    fn standard(n: usize) -> Mat {
        Mat::block_diag(&vec![rotation2(FRAC_PI_2); n])
    }

    #[test]
    fn complex_linear_maps_of_a_line() {
        let r = rotation2(FRAC_PI_2);
        let ker = sylvester_kernel(&r, &r, 1e-10);
        assert_eq!(ker.dim(), 2);
        for a in &ker.basis {
            assert!((&(&r * a) - &(a * &r)).norm_max() < 1e-12);
        }
    }

    #[test]
    fn dimension_is_2k_times_n_minus_k() {
        for n in 2..=5 {
            for k in 1..n {
                let ker = sylvester_kernel(&standard(k), &standard(n - k), 1e-10);
                assert_eq!(ker.dim(), 2 * k * (n - k), "n={n} k={k}");
                assert!(!ker.ambiguous);
            }
        }
    }

    #[test]
    fn conjugate_structures_give_antilinear_kernel() {
        let plus = rotation2(FRAC_PI_2);
        let minus = rotation2(-FRAC_PI_2);
        let lin = sylvester_kernel(&plus, &plus, 1e-10);
        let anti = sylvester_kernel(&plus, &minus, 1e-10);
        assert_eq!(anti.dim(), 2);
        // The two kernels meet only in 0: stacked they have full rank 4.
        let cols: Vec<Vec<f64>> = lin.basis.iter().chain(&anti.basis).map(Mat::vec_col_major).collect();
        let stacked = Mat::from_cols(4, &cols);
        assert!(stacked.det().abs() > 0.5);
    }
}

use super::{dot, Mat};

const MAX_SWEEPS: usize = 80;

/// Right singular system of an `m x n` matrix from one-sided Jacobi.
///
/// `values[i]` pairs with column `i` of `v`; values are sorted descending.
/// For `m < n` the trailing `n - m` values are (numerically) zero, which is
/// exactly what kernel computations need.
#[derive(Debug, Clone)]
pub struct Svd {
    pub values: Vec<f64>,
    pub v: Mat,
}

impl Svd {
    pub fn new(a: &Mat) -> Svd {
        let (m, n) = (a.rows(), a.cols());
        // Column-major working copies: u[j] is column j of A·V.
        let mut u: Vec<Vec<f64>> = a.columns();
        let mut v: Vec<Vec<f64>> = (0..n)
            .map(|j| (0..n).map(|i| if i == j { 1.0 } else { 0.0 }).collect())
            .collect();
        let eps = f64::EPSILON;
        for _ in 0..MAX_SWEEPS {
            let mut rotated = false;
            for p in 0..n {
                for q in p + 1..n {
                    let alpha = dot(&u[p], &u[p]);
                    let beta = dot(&u[q], &u[q]);
                    let gamma = dot(&u[p], &u[q]);
                    if gamma == 0.0 || gamma.abs() <= eps * (alpha * beta).sqrt() {
                        continue;
                    }
                    rotated = true;
                    let zeta = (beta - alpha) / (2.0 * gamma);
                    let t = zeta.signum() / (zeta.abs() + (1.0 + zeta * zeta).sqrt());
                    let c = 1.0 / (1.0 + t * t).sqrt();
                    let s = c * t;
                    for i in 0..m {
                        let (x, y) = (u[p][i], u[q][i]);
                        u[p][i] = c * x - s * y;
                        u[q][i] = s * x + c * y;
                    }
                    for i in 0..n {
                        let (x, y) = (v[p][i], v[q][i]);
                        v[p][i] = c * x - s * y;
                        v[q][i] = s * x + c * y;
                    }
                }
            }
            if !rotated {
                break;
            }
        }
        let mut order: Vec<(f64, usize)> = u.iter().enumerate().map(|(j, c)| (dot(c, c).sqrt(), j)).collect();
        order.sort_by(|a, b| b.0.total_cmp(&a.0));
        let values = order.iter().map(|&(s, _)| s).collect();
        let cols: Vec<Vec<f64>> = order.iter().map(|&(_, j)| v[j].clone()).collect();
        Svd { values, v: Mat::from_cols(n, &cols) }
    }

    pub fn max(&self) -> f64 {
        self.values.first().copied().unwrap_or(0.0)
    }

    pub fn min(&self) -> f64 {
        self.values.last().copied().unwrap_or(0.0)
    }

    /// 2-norm condition number; infinite for singular input.
    pub fn condition(&self) -> f64 {
        if self.min() == 0.0 {
            f64::INFINITY
        } else {
            self.max() / self.min()
        }
    }
}

/// Numerical kernel of a matrix.
#[derive(Debug, Clone)]
pub struct Nullspace {
    /// Orthonormal basis, one column per kernel direction.
    pub basis: Mat,
    /// Set when some singular value lies within a factor 10 of the threshold,
    /// so the rank decision could have gone either way.
    pub ambiguous: bool,
}

impl Nullspace {
    pub fn dim(&self) -> usize {
        self.basis.cols()
    }
}

/// Kernel of `a`: right singular vectors whose singular value is at most
/// `tol` times the largest one.
pub fn nullspace(a: &Mat, tol: f64) -> Nullspace {
    nullspace_scaled(a, tol, 0.0)
}

/// Like [`nullspace`], with the threshold taken relative to
/// `max(σ_max, scale)`. Use it for shifted operators that can vanish up to
/// rounding, such as `K - I` for `K ≈ I`.
pub fn nullspace_scaled(a: &Mat, tol: f64, scale: f64) -> Nullspace {
    let svd = Svd::new(a);
    let n = a.cols();
    let smax = svd.max().max(scale);
    if smax == 0.0 {
        return Nullspace { basis: Mat::identity(n), ambiguous: false };
    }
    let cut = tol * smax;
    let keep: Vec<usize> = (0..n).filter(|&i| svd.values[i] <= cut).collect();
    let ambiguous = svd.values.iter().any(|&s| s > cut / 10.0 && s <= cut * 10.0);
    Nullspace { basis: svd.v.select_cols(&keep), ambiguous }
}

/// The `d` right singular vectors with the smallest singular values, and the
/// largest of those values.
pub fn smallest_right_singular(a: &Mat, d: usize) -> (Mat, f64) {
    let svd = Svd::new(a);
    let n = a.cols();
    let idx: Vec<usize> = (n - d..n).collect();
    let rel = if d == 0 { 0.0 } else { svd.values[n - d] };
    (svd.v.select_cols(&idx), rel)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn singular_values_of_diagonal() {
        let a = Mat::diag(&[3.0, -5.0, 0.5]);
        let svd = Svd::new(&a);
        let want = [5.0, 3.0, 0.5];
        for (s, w) in svd.values.iter().zip(want) {
            assert!((s - w).abs() < 1e-14);
        }
    }

    #[test]
    fn wide_matrix_kernel() {
        // x + y + z = 0 has a 2-dimensional kernel.
        let a = Mat::from_row_slice(1, 3, &[1.0, 1.0, 1.0]);
        let ns = nullspace(&a, 1e-12);
        assert_eq!(ns.dim(), 2);
        assert!(!ns.ambiguous);
        let r = &a * &ns.basis;
        assert!(r.norm_max() < 1e-14);
        let g = &ns.basis.transpose() * &ns.basis;
        assert!(g.approx_eq(&Mat::identity(2), 1e-14));
    }

    #[test]
    fn ambiguity_band_is_flagged() {
        let a = Mat::diag(&[1.0, 5e-10]);
        let ns = nullspace(&a, 1e-9);
        assert_eq!(ns.dim(), 1);
        assert!(ns.ambiguous);
    }

    #[test]
    fn agrees_with_nalgebra() {
        let a = Mat::from_fn(5, 4, |i, j| ((i * 7 + j * 3) % 5) as f64 - 1.7 + 0.1 * j as f64);
        let ours = Svd::new(&a);
        let na = nalgebra::DMatrix::from_row_slice(5, 4, a.as_slice());
        let mut theirs: Vec<f64> = na.singular_values().iter().copied().collect();
        theirs.sort_by(|x, y| y.total_cmp(x));
        for (x, y) in ours.values.iter().zip(&theirs) {
            assert!((x - y).abs() < 1e-12 * theirs[0]);
        }
    }
}

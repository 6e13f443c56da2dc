use super::{dot, norm, svd::Svd, Mat};
use crate::error::{Error, Result};

/// Orthonormalises the columns of `b` by modified Gram-Schmidt with one
/// reorthogonalisation pass.
///
/// The triangular change of basis has a positive diagonal, so the column span
/// and its orientation are both preserved. Fails with `RankDeficient` when a
/// column's residual drops below `tol` times the largest column norm.
pub fn orthonormalize(b: &Mat, tol: f64) -> Result<Mat> {
    let scale = b.columns().iter().map(|c| norm(c)).fold(0.0, f64::max);
    if b.cols() > 0 && scale == 0.0 {
        return Err(Error::RankDeficient(tol));
    }
    let mut q: Vec<Vec<f64>> = Vec::with_capacity(b.cols());
    for mut v in b.columns() {
        for _ in 0..2 {
            for qi in &q {
                let c = dot(qi, &v);
                v.iter_mut().zip(qi).for_each(|(x, y)| *x -= c * y);
            }
        }
        let nv = norm(&v);
        if nv <= tol * scale {
            return Err(Error::RankDeficient(tol));
        }
        v.iter_mut().for_each(|x| *x /= nv);
        q.push(v);
    }
    Ok(Mat::from_cols(b.rows(), &q))
}

/// Orthonormal basis of the orthogonal complement of the span of an
/// orthonormal frame, oriented so that `[frame | complement]` has positive
/// determinant.
pub fn orthogonal_complement(frame: &Mat) -> Mat {
    let n = frame.rows();
    let k = frame.cols();
    if k == n {
        return Mat::zeros(n, 0);
    }
    // Right singular vectors of Fᵀ beyond rank k span the complement.
    let svd = Svd::new(&frame.transpose());
    let idx: Vec<usize> = (k..n).collect();
    let mut comp = svd.v.select_cols(&idx);
    if Mat::hstack(&[frame, &comp]).det() < 0.0 {
        let last = comp.cols() - 1;
        let c: Vec<f64> = comp.col(last).iter().map(|x| -x).collect();
        comp.set_col(last, &c);
    }
    comp
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{projector, projector_distance};

    #[test]
    fn already_orthonormal_is_kept() {
        let b = Mat::from_row_slice(3, 2, &[0.0, 1.0, 1.0, 0.0, 0.0, 0.0]);
        let q = orthonormalize(&b, 1e-12).unwrap();
        assert!(q.approx_eq(&b, 1e-15));
    }

    #[test]
    fn skew_columns_span_plane_with_positive_orientation() {
        let b = Mat::from_row_slice(3, 2, &[2.0, 1.0, 0.0, 1.0, 0.0, 0.0]);
        let q = orthonormalize(&b, 1e-12).unwrap();
        let change = &q.transpose() * &b;
        assert!(change.det() > 0.0);
        assert!(projector(&q).approx_eq(&Mat::diag(&[1.0, 1.0, 0.0]), 1e-14));
    }

    #[test]
    fn dependent_columns_are_rejected() {
        let b = Mat::from_row_slice(3, 2, &[1.0, 2.0, 1.0, 2.0, 0.0, 0.0]);
        assert_eq!(orthonormalize(&b, 1e-10), Err(Error::RankDeficient(1e-10)));
    }

    #[test]
    fn idempotent_on_span_and_orientation() {
        let b = Mat::from_fn(6, 3, |i, j| ((i + 2 * j) as f64).sin() + if i == j { 2.0 } else { 0.0 });
        let q1 = orthonormalize(&b, 1e-12).unwrap();
        let q2 = orthonormalize(&q1, 1e-12).unwrap();
        assert!(projector_distance(&q1, &q2) < 1e-13);
        assert!((&q1.transpose() * &q2).det() > 0.0);
    }

    #[test]
    fn complement_completes_positively() {
        let f = orthonormalize(&Mat::from_row_slice(4, 2, &[1.0, 0.3, 0.2, 1.0, 0.0, 0.5, 0.1, 0.0]), 1e-12).unwrap();
        let c = orthogonal_complement(&f);
        assert_eq!(c.cols(), 2);
        let full = Mat::hstack(&[&f, &c]);
        assert!((&full.transpose() * &full).approx_eq(&Mat::identity(4), 1e-12));
        assert!((full.det() - 1.0).abs() < 1e-12);
    }
}

use num_complex::Complex64;

use super::{svd::Svd, Mat};
use crate::error::{Error, Result};

/// Real Schur form `M = Z T Zᵀ` with `Z` orthogonal and `T` quasi upper
/// triangular (1x1 and 2x2 diagonal blocks).
#[derive(Debug, Clone)]
pub struct RealSchur {
    pub t: Mat,
    pub z: Mat,
    /// Eigenvalues read off the diagonal blocks, in block order.
    pub eigenvalues: Vec<Complex64>,
}

/// Householder reduction to upper Hessenberg form; returns `(H, Q)` with `M = Q H Qᵀ`.
fn hessenberg(m: &Mat) -> (Mat, Mat) {
    let n = m.rows();
    let mut h = m.clone();
    let mut q = Mat::identity(n);
    for k in 0..n.saturating_sub(2) {
        let mut v: Vec<f64> = (k + 1..n).map(|i| h[(i, k)]).collect();
        let alpha = v.iter().map(|x| x * x).sum::<f64>().sqrt();
        if alpha == 0.0 {
            continue;
        }
        let sign = if v[0] >= 0.0 { 1.0 } else { -1.0 };
        v[0] += sign * alpha;
        let vnorm2: f64 = v.iter().map(|x| x * x).sum();
        if vnorm2 == 0.0 {
            continue;
        }
        // H <- P H with P = I - 2 v vᵀ / (vᵀv), acting on rows k+1..n
        for j in 0..n {
            let s: f64 = (0..v.len()).map(|i| v[i] * h[(k + 1 + i, j)]).sum::<f64>() * 2.0 / vnorm2;
            for i in 0..v.len() {
                h[(k + 1 + i, j)] -= s * v[i];
            }
        }
        // H <- H P, Q <- Q P
        for mat in [&mut h, &mut q] {
            for i in 0..n {
                let s: f64 = (0..v.len()).map(|j| mat[(i, k + 1 + j)] * v[j]).sum::<f64>() * 2.0 / vnorm2;
                for j in 0..v.len() {
                    mat[(i, k + 1 + j)] -= s * v[j];
                }
            }
        }
        for i in k + 2..n {
            h[(i, k)] = 0.0;
        }
    }
    (h, q)
}

/// Real Schur decomposition by Francis double-shift QR on the Hessenberg form.
///
/// The iteration follows the EISPACK `hqr2` scheme (exceptional shifts at
/// iterations 10 and 30 of a stalled eigenvalue) and accumulates the
/// orthogonal transformations.
#[allow(unused_assignments)]
pub fn real_schur(m: &Mat) -> Result<RealSchur> {
    assert!(m.is_square(), "real_schur needs a square matrix");
    let nn = m.rows();
    let (mut h, mut v) = hessenberg(m);
    let mut wr = vec![0.0; nn];
    let mut wi = vec![0.0; nn];
    if nn == 0 {
        return Ok(RealSchur { t: h, z: v, eigenvalues: vec![] });
    }
    let eps = f64::EPSILON;
    let mut exshift = 0.0;
    let (mut p, mut q, mut r, mut s, mut z) = (0.0, 0.0, 0.0, 0.0, 0.0);
    let (mut w, mut x, mut y) = (0.0, 0.0, 0.0);

    let mut norm = 0.0;
    for i in 0..nn {
        for j in i.saturating_sub(1)..nn {
            norm += h[(i, j)].abs();
        }
    }

    let budget = 60 * nn.max(4);
    let mut total_iter = 0usize;
    let mut iter = 0usize;
    let mut n = nn as isize - 1;
    while n >= 0 {
        let nu = n as usize;
        // Look for a single small subdiagonal element.
        let mut l = nu;
        while l > 0 {
            s = h[(l - 1, l - 1)].abs() + h[(l, l)].abs();
            if s == 0.0 {
                s = norm;
            }
            if h[(l, l - 1)].abs() < eps * s {
                break;
            }
            l -= 1;
        }

        if l == nu {
            // One root found.
            h[(nu, nu)] += exshift;
            wr[nu] = h[(nu, nu)];
            wi[nu] = 0.0;
            if nu > 0 {
                h[(nu, nu - 1)] = 0.0;
            }
            n -= 1;
            iter = 0;
        } else if l + 1 == nu {
            // Two roots found.
            w = h[(nu, nu - 1)] * h[(nu - 1, nu)];
            p = (h[(nu - 1, nu - 1)] - h[(nu, nu)]) / 2.0;
            q = p * p + w;
            z = q.abs().sqrt();
            h[(nu, nu)] += exshift;
            h[(nu - 1, nu - 1)] += exshift;
            x = h[(nu, nu)];
            if q >= 0.0 {
                // Real pair: rotate the block to upper triangular form.
                z = if p >= 0.0 { p + z } else { p - z };
                wr[nu - 1] = x + z;
                wr[nu] = wr[nu - 1];
                if z != 0.0 {
                    wr[nu] = x - w / z;
                }
                wi[nu - 1] = 0.0;
                wi[nu] = 0.0;
                x = h[(nu, nu - 1)];
                s = x.abs() + z.abs();
                p = x / s;
                q = z / s;
                r = (p * p + q * q).sqrt();
                p /= r;
                q /= r;
                for j in nu - 1..nn {
                    z = h[(nu - 1, j)];
                    h[(nu - 1, j)] = q * z + p * h[(nu, j)];
                    h[(nu, j)] = q * h[(nu, j)] - p * z;
                }
                for i in 0..=nu {
                    z = h[(i, nu - 1)];
                    h[(i, nu - 1)] = q * z + p * h[(i, nu)];
                    h[(i, nu)] = q * h[(i, nu)] - p * z;
                }
                for i in 0..nn {
                    z = v[(i, nu - 1)];
                    v[(i, nu - 1)] = q * z + p * v[(i, nu)];
                    v[(i, nu)] = q * v[(i, nu)] - p * z;
                }
                h[(nu, nu - 1)] = 0.0;
            } else {
                wr[nu - 1] = x + p;
                wr[nu] = x + p;
                wi[nu - 1] = z;
                wi[nu] = -z;
            }
            if nu >= 2 {
                h[(nu - 1, nu - 2)] = 0.0;
            }
            n -= 2;
            iter = 0;
        } else {
            // No convergence yet: form shift.
            x = h[(nu, nu)];
            y = 0.0;
            w = 0.0;
            if l < nu {
                y = h[(nu - 1, nu - 1)];
                w = h[(nu, nu - 1)] * h[(nu - 1, nu)];
            }
            if iter == 10 {
                exshift += x;
                for i in 0..=nu {
                    h[(i, i)] -= x;
                }
                s = h[(nu, nu - 1)].abs() + h[(nu - 1, nu - 2)].abs();
                x = 0.75 * s;
                y = x;
                w = -0.4375 * s * s;
            }
            if iter == 30 {
                s = (y - x) / 2.0;
                s = s * s + w;
                if s > 0.0 {
                    s = s.sqrt();
                    if y < x {
                        s = -s;
                    }
                    s = x - w / ((y - x) / 2.0 + s);
                    for i in 0..=nu {
                        h[(i, i)] -= s;
                    }
                    exshift += s;
                    x = 0.964;
                    y = x;
                    w = x;
                }
            }
            iter += 1;
            total_iter += 1;
            if total_iter > budget {
                return Err(Error::NoConvergence(budget));
            }

            // Look for two consecutive small subdiagonal elements.
            let mut mm = nu - 2;
            loop {
                z = h[(mm, mm)];
                r = x - z;
                s = y - z;
                p = (r * s - w) / h[(mm + 1, mm)] + h[(mm, mm + 1)];
                q = h[(mm + 1, mm + 1)] - z - r - s;
                r = h[(mm + 2, mm + 1)];
                s = p.abs() + q.abs() + r.abs();
                p /= s;
                q /= s;
                r /= s;
                if mm == l {
                    break;
                }
                if h[(mm, mm - 1)].abs() * (q.abs() + r.abs())
                    < eps * (p.abs() * (h[(mm - 1, mm - 1)].abs() + z.abs() + h[(mm + 1, mm + 1)].abs()))
                {
                    break;
                }
                mm -= 1;
            }
            for i in mm + 2..=nu {
                h[(i, i - 2)] = 0.0;
                if i > mm + 2 {
                    h[(i, i - 3)] = 0.0;
                }
            }

            // Double QR step on rows l..=n and columns mm..=n.
            let mut k = mm;
            while k < nu {
                let notlast = k + 1 != nu;
                if k != mm {
                    p = h[(k, k - 1)];
                    q = h[(k + 1, k - 1)];
                    r = if notlast { h[(k + 2, k - 1)] } else { 0.0 };
                    x = p.abs() + q.abs() + r.abs();
                    if x == 0.0 {
                        k += 1;
                        continue;
                    }
                    p /= x;
                    q /= x;
                    r /= x;
                }
                s = (p * p + q * q + r * r).sqrt();
                if p < 0.0 {
                    s = -s;
                }
                if s != 0.0 {
                    if k != mm {
                        h[(k, k - 1)] = -s * x;
                    } else if l != mm {
                        h[(k, k - 1)] = -h[(k, k - 1)];
                    }
                    p += s;
                    x = p / s;
                    y = q / s;
                    z = r / s;
                    q /= p;
                    r /= p;
                    for j in k..nn {
                        p = h[(k, j)] + q * h[(k + 1, j)];
                        if notlast {
                            p += r * h[(k + 2, j)];
                            h[(k + 2, j)] -= p * z;
                        }
                        h[(k, j)] -= p * x;
                        h[(k + 1, j)] -= p * y;
                    }
                    for i in 0..=nu.min(k + 3) {
                        p = x * h[(i, k)] + y * h[(i, k + 1)];
                        if notlast {
                            p += z * h[(i, k + 2)];
                            h[(i, k + 2)] -= p * r;
                        }
                        h[(i, k)] -= p;
                        h[(i, k + 1)] -= p * q;
                    }
                    for i in 0..nn {
                        p = x * v[(i, k)] + y * v[(i, k + 1)];
                        if notlast {
                            p += z * v[(i, k + 2)];
                            v[(i, k + 2)] -= p * r;
                        }
                        v[(i, k)] -= p;
                        v[(i, k + 1)] -= p * q;
                    }
                }
                k += 1;
            }
        }
    }
    // Clear anything left below the block structure.
    for i in 0..nn {
        for j in 0..i.saturating_sub(1) {
            h[(i, j)] = 0.0;
        }
    }
    let eigenvalues = wr.iter().zip(&wi).map(|(&re, &im)| Complex64::new(re, im)).collect();
    Ok(RealSchur { t: h, z: v, eigenvalues })
}

/// Eigenvalues of a real square matrix (conjugate pairs adjacent).
pub fn eigenvalues(m: &Mat) -> Result<Vec<Complex64>> {
    Ok(real_schur(m)?.eigenvalues)
}

#[derive(Debug, Clone)]
pub struct EigenPair {
    pub value: Complex64,
    /// Unit-norm eigenvector.
    pub vector: Vec<Complex64>,
}

/// Real embedding `[[Re A, -Im A], [Im A, Re A]]` of `M - λI`.
pub(crate) fn shifted_real_embedding(m: &Mat, lambda: Complex64) -> Mat {
    let n = m.rows();
    Mat::from_fn(2 * n, 2 * n, |i, j| {
        let (bi, bj) = (i / n, j / n);
        let (ii, jj) = (i % n, j % n);
        let re = m[(ii, jj)] - if ii == jj { lambda.re } else { 0.0 };
        let im = if ii == jj { -lambda.im } else { 0.0 };
        match (bi, bj) {
            (0, 0) | (1, 1) => re,
            (0, 1) => -im,
            _ => im,
        }
    })
}

/// Orthonormal basis (complex inner product) of the `want`-dimensional
/// approximate kernel of `M - λI`, from the `2·want` smallest right singular
/// vectors of its real embedding.
pub(crate) fn complex_kernel(m: &Mat, lambda: Complex64, want: usize) -> Vec<Vec<Complex64>> {
    let n = m.rows();
    let emb = shifted_real_embedding(m, lambda);
    let svd = Svd::new(&emb);
    let total = 2 * n;
    let mut basis: Vec<Vec<Complex64>> = Vec::new();
    for idx in (0..total).rev() {
        if basis.len() == want {
            break;
        }
        let col = svd.v.col(idx);
        let mut v: Vec<Complex64> = (0..n).map(|i| Complex64::new(col[i], col[n + i])).collect();
        for _ in 0..2 {
            for b in &basis {
                let c: Complex64 = b.iter().zip(&v).map(|(bi, vi)| bi.conj() * vi).sum();
                for (vi, bi) in v.iter_mut().zip(b) {
                    *vi -= c * bi;
                }
            }
        }
        let nv = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if nv > 0.5 {
            v.iter_mut().for_each(|z| *z /= nv);
            basis.push(v);
        }
    }
    basis
}

/// All eigenpairs of a real square matrix.
///
/// Eigenvalues come from the real Schur form. Eigenvalues closer than
/// `tol·max(1, ‖M‖)` are grouped, and each group receives an orthonormal basis
/// of the kernel of `M - λ̄I` at the group mean `λ̄`. A defective group gets
/// its available eigenvectors repeated.
pub fn eig_complex(m: &Mat, tol: f64) -> Result<Vec<EigenPair>> {
    let vals = eigenvalues(m)?;
    let scale = m.norm_fro().max(1.0);
    let mut groups: Vec<Vec<Complex64>> = Vec::new();
    for &v in &vals {
        match groups.iter_mut().find(|g| g.iter().any(|&u| (u - v).norm() <= tol * scale)) {
            Some(g) => g.push(v),
            None => groups.push(vec![v]),
        }
    }
    let mut out = Vec::with_capacity(vals.len());
    for g in groups {
        let mean = g.iter().sum::<Complex64>() / g.len() as f64;
        let vecs = complex_kernel(m, mean, g.len());
        for (i, &value) in g.iter().enumerate() {
            out.push(EigenPair { value, vector: vecs[i % vecs.len()].clone() });
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn sorted(mut v: Vec<Complex64>) -> Vec<Complex64> {
        v.sort_by(|a, b| a.re.total_cmp(&b.re).then(a.im.total_cmp(&b.im)));
        v
    }

    fn pseudo_random(n: usize, seed: u64) -> Mat {
        let mut state = seed;
        Mat::from_fn(n, n, |_, _| {
            state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            ((state >> 11) as f64 / (1u64 << 53) as f64) * 2.0 - 1.0
        })
    }

    #[test]
    fn identity_has_unit_eigenvalues() {
        let pairs = eig_complex(&Mat::identity(2), 1e-9).unwrap();
        assert_eq!(pairs.len(), 2);
        for p in pairs {
            assert!((p.value - Complex64::new(1.0, 0.0)).norm() < 1e-14);
        }
    }

    #[test]
    fn plane_rotation_spectrum() {
        let r = super::super::rotation2(PI / 3.0);
        let vals = sorted(eigenvalues(&r).unwrap());
        assert!((vals[0] - Complex64::from_polar(1.0, -PI / 3.0)).norm() < 1e-14);
        assert!((vals[1] - Complex64::from_polar(1.0, PI / 3.0)).norm() < 1e-14);
    }

    #[test]
    fn schur_reconstructs() {
        for seed in 0..20 {
            let n = 2 + (seed as usize % 9);
            let m = pseudo_random(n, seed);
            let s = real_schur(&m).unwrap();
            let back = &(&s.z * &s.t) * &s.z.transpose();
            assert!(back.approx_eq(&m, 1e-12), "seed {seed}");
            let ztz = &s.z.transpose() * &s.z;
            assert!(ztz.approx_eq(&Mat::identity(n), 1e-12));
            for i in 2..n {
                for j in 0..i - 1 {
                    assert_eq!(s.t[(i, j)], 0.0);
                }
            }
        }
    }

    #[test]
    fn eigenvalues_match_nalgebra() {
        for seed in 100..130 {
            let n = 3 + (seed as usize % 10);
            let m = pseudo_random(n, seed);
            let ours = sorted(eigenvalues(&m).unwrap());
            let na = nalgebra::DMatrix::from_row_slice(n, n, m.as_slice());
            let theirs = sorted(na.complex_eigenvalues().iter().map(|z| Complex64::new(z.re, z.im)).collect());
            for (a, b) in ours.iter().zip(&theirs) {
                assert!((a - b).norm() < 1e-9, "seed {seed}: {a} vs {b}");
            }
        }
    }

    #[test]
    fn eigenpair_residuals_and_trace() {
        for seed in 200..215 {
            let n = 2 + (seed as usize % 8);
            let m = pseudo_random(n, seed);
            let pairs = eig_complex(&m, 1e-9).unwrap();
            assert_eq!(pairs.len(), n);
            let scale = m.norm_fro();
            for p in &pairs {
                let mv: Vec<Complex64> = (0..n)
                    .map(|i| (0..n).map(|j| p.vector[j] * m[(i, j)]).sum::<Complex64>())
                    .collect();
                let res: f64 = mv.iter().zip(&p.vector).map(|(a, b)| (a - p.value * b).norm_sqr()).sum::<f64>().sqrt();
                assert!(res <= 1e-9 * scale, "seed {seed}: residual {res}");
                let nv: f64 = p.vector.iter().map(|z| z.norm_sqr()).sum();
                assert!((nv - 1.0).abs() < 1e-12);
            }
            let tr: Complex64 = pairs.iter().map(|p| p.value).sum();
            assert!((tr.re - m.trace()).abs() < 1e-10 && tr.im.abs() < 1e-10);
        }
    }

    #[test]
    fn repeated_rotation_blocks() {
        // Two rotation blocks with the same angle: double eigenvalues e^{±iθ}.
        let r = super::super::rotation2(0.7);
        let m = Mat::block_diag(&[r.clone(), r]);
        let pairs = eig_complex(&m, 1e-9).unwrap();
        let up: Vec<_> = pairs.iter().filter(|p| p.value.im > 0.0).collect();
        assert_eq!(up.len(), 2);
        // The two eigenvectors for the double eigenvalue are independent.
        let ip: Complex64 = up[0].vector.iter().zip(&up[1].vector).map(|(a, b)| a.conj() * b).sum();
        assert!(ip.norm() < 1e-10);
    }
}

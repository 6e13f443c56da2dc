use serde::{Deserialize, Serialize};

use super::OrientedPlane;
use crate::error::{Error, Result};
use crate::linalg::{orthogonal_complement, smallest_right_singular, sylvester_operator, Mat, Svd};
use crate::structures::{orientation_of, ComplexStructure, Sign, StructurePair};

/// Default invariance tolerance for planes.
pub const DEFAULT_PLANE_TOL: f64 = 1e-7;
/// Default transversality threshold on the smallest singular value.
pub const DEFAULT_TRANS_TOL: f64 = 1e-7;

/// Whether the two structures orient a common plane the same way.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum RelOrientation {
    Same,
    Opposite,
}

impl RelOrientation {
    pub fn from_sign(s: Sign) -> Self {
        match s {
            Sign::Plus => RelOrientation::Same,
            Sign::Minus => RelOrientation::Opposite,
        }
    }

    /// Class of a plane with `s′` antiholomorphic lines.
    pub fn from_parity(odd: bool) -> Self {
        if odd {
            RelOrientation::Opposite
        } else {
            RelOrientation::Same
        }
    }
}

fn check_invariant(j: &Mat, p: &OrientedPlane, tol: f64) -> Result<()> {
    if j.rows() != p.ambient_dim() {
        return Err(Error::DimensionMismatch("plane and structure live in different spaces".into()));
    }
    let res = p.invariance_residual(j);
    if res > tol {
        return Err(Error::NotInvariant(res));
    }
    Ok(())
}

/// Compares the orientations `J₀` and `J₁` induce on a common plane.
pub fn relative_orientation(pair: &StructurePair, p: &OrientedPlane, tol: f64) -> Result<RelOrientation> {
    check_invariant(pair.j0.matrix(), p, tol)?;
    check_invariant(pair.j1.matrix(), p, tol)?;
    let s = orientation_of(&p.restrict(pair.j0.matrix())) * orientation_of(&p.restrict(pair.j1.matrix()));
    Ok(RelOrientation::from_sign(s))
}

/// Tangent space of `Gr^J` at `P`, as `(2n-2k) x 2k` matrices `A` in
/// `Hom(P, P^⊥)` with respect to the frame of `P` and the positively oriented
/// complement frame.
///
/// The basis is orthonormal in the Frobenius inner product and ordered so that
/// it is positively oriented for the complex structure `A ↦ dA`.
pub fn tangent_space(j: &ComplexStructure, p: &OrientedPlane, tol: f64) -> Result<Vec<Mat>> {
    check_invariant(j.matrix(), p, tol)?;
    let f = p.frame();
    let g = orthogonal_complement(f);
    let (q, pd) = (g.cols(), f.cols());
    if q == 0 {
        return Ok(vec![]);
    }
    let a = p.restrict(j.matrix());
    let d = &(&g.transpose() * j.matrix()) * &g;
    let dim = pd * q / 2;
    let op = sylvester_operator(&a, &d);
    let (mut basis, _) = smallest_right_singular(&op, dim);
    // Complex structure A ↦ dA in the coordinates of the kernel basis.
    let lift = &Mat::identity(pd).kron(&d);
    let c = &(&basis.transpose() * lift) * &basis;
    if orientation_of(&c) == Sign::Minus {
        let v: Vec<f64> = basis.col(0).iter().map(|x| -x).collect();
        basis.set_col(0, &v);
    }
    Ok(basis.columns().iter().map(|v| Mat::from_vec_col_major(q, pd, v)).collect())
}

/// Outcome of the transversality test at a common plane.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Transversality {
    pub transverse: bool,
    /// Smallest singular value of the stacked tangent bases.
    pub gap: f64,
    /// The gap lies in `[tol/10, tol]`.
    pub marginal: bool,
}

fn stacked_tangents(pair: &StructurePair, p: &OrientedPlane, tol: f64) -> Result<Mat> {
    let p0 = p.oriented_by(pair.j0.matrix());
    let t0 = tangent_space(&pair.j0, &p0, tol)?;
    let t1 = tangent_space(&pair.j1, &p0, tol)?;
    let cols: Vec<Vec<f64>> = t0.iter().chain(&t1).map(Mat::vec_col_major).collect();
    let rows = cols.first().map_or(0, Vec::len);
    Ok(Mat::from_cols(rows, &cols))
}

/// Transverse iff the two tangent spaces together span `Hom(P, P^⊥)`.
pub fn is_transverse(pair: &StructurePair, p: &OrientedPlane, tol: f64, trans_tol: f64) -> Result<Transversality> {
    let m = stacked_tangents(pair, p, tol)?;
    if m.cols() == 0 {
        return Ok(Transversality { transverse: true, gap: f64::INFINITY, marginal: false });
    }
    let gap = Svd::new(&m).min();
    Ok(Transversality { transverse: gap > trans_tol, gap, marginal: gap >= trans_tol / 10.0 && gap <= trans_tol })
}

/// Local intersection number of `Gr^{J₀}` and `Gr^{J₁}` at a transverse common
/// plane: the sign of `det[T₀ | T₁]` with both tangent bases complex-oriented
/// and `P` carrying the orientation of `J₀`.
pub fn local_intersection_sign(pair: &StructurePair, p: &OrientedPlane, tol: f64, trans_tol: f64) -> Result<Sign> {
    let m = stacked_tangents(pair, p, tol)?;
    if m.cols() == 0 {
        return Ok(Sign::Plus);
    }
    let gap = Svd::new(&m).min();
    if gap <= trans_tol {
        return Err(Error::NotTransverse(gap));
    }
    Ok(Sign::of(m.det()))
}

//! Complex structures, pairs of them, random sampling and the classification
//! of orthogonal pairs.

mod classify;
mod sampling;

use std::fmt;
use std::ops::Mul;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{dot, norm, rotation2, Mat, Svd};

pub use classify::{
    classify_orthogonal_pair, classify_orthogonal_pair_detailed, commutant_dimension, construct_canonical_pair,
    find_antiholomorphic_subspace, pairs_isomorphic, AngleBlock, Classification, PairSignature,
    DEFAULT_CLUSTER_TOL,
};
pub use sampling::{
    haar_orthogonal, random_general_j, random_invertible, random_general_j_with, random_orthogonal_j, random_orthogonal_j_with,
    trial_rng, SAMPLING_BUDGET,
};

/// Tolerance for `J² = -I`, per unit of dimension.
pub const STRUCTURE_TOL: f64 = 1e-8;
/// Tolerance for `JᵀJ = I` when deciding whether a pair is orthogonal.
pub const ORTHOGONALITY_TOL: f64 = 1e-8;
/// Conjugators whose condition number exceeds this are treated as singular.
pub const MAX_CONJUGATOR_CONDITION: f64 = 1e12;

/// An orientation, `+1` or `-1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(into = "i8", try_from = "i8")]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    pub fn value(self) -> i64 {
        match self {
            Sign::Plus => 1,
            Sign::Minus => -1,
        }
    }

    pub fn of(x: f64) -> Sign {
        if x < 0.0 {
            Sign::Minus
        } else {
            Sign::Plus
        }
    }

    pub fn flip(self) -> Sign {
        match self {
            Sign::Plus => Sign::Minus,
            Sign::Minus => Sign::Plus,
        }
    }
}

impl Mul for Sign {
    type Output = Sign;
    fn mul(self, rhs: Sign) -> Sign {
        if self == rhs {
            Sign::Plus
        } else {
            Sign::Minus
        }
    }
}

impl From<Sign> for i8 {
    fn from(s: Sign) -> i8 {
        s.value() as i8
    }
}

impl TryFrom<i8> for Sign {
    type Error = Error;
    fn try_from(v: i8) -> Result<Sign> {
        match v {
            1 => Ok(Sign::Plus),
            -1 => Ok(Sign::Minus),
            _ => Err(Error::Parse(format!("sign must be +1 or -1, got {v}"))),
        }
    }
}

impl fmt::Display for Sign {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Sign::Plus => "+1",
            Sign::Minus => "-1",
        })
    }
}

fn check_even_square(m: &Mat) -> Result<()> {
    if !m.is_square() {
        return Err(Error::DimensionMismatch(format!("{}x{} matrix is not square", m.rows(), m.cols())));
    }
    if m.rows() % 2 == 1 {
        return Err(Error::OddDimension(m.rows()));
    }
    Ok(())
}

fn square_residual(m: &Mat) -> f64 {
    (&(m * m) + &Mat::identity(m.rows())).norm_fro()
}

/// Whether `‖M² + I‖ ≤ tol · dim`.
pub fn is_complex_structure(m: &Mat, tol: f64) -> Result<bool> {
    check_even_square(m)?;
    Ok(square_residual(m) <= tol * m.rows() as f64)
}

/// Greedy `J`-adapted basis `(v₁, Jv₁, v₂, Jv₂, …)`: each `vᵢ` is the unit
/// residual of the standard basis vector furthest from the span so far.
pub fn adapted_basis(j: &Mat) -> Mat {
    let m = j.rows();
    let mut span: Vec<Vec<f64>> = Vec::with_capacity(m);
    let mut cols: Vec<Vec<f64>> = Vec::with_capacity(m);
    let project_out = |span: &[Vec<f64>], mut v: Vec<f64>| {
        for _ in 0..2 {
            for q in span {
                let c = dot(q, &v);
                v.iter_mut().zip(q).for_each(|(x, y)| *x -= c * y);
            }
        }
        v
    };
    while cols.len() + 1 < m {
        let mut best = (Vec::new(), -1.0);
        for i in 0..m {
            let mut e = vec![0.0; m];
            e[i] = 1.0;
            let r = project_out(&span, e);
            let nr = norm(&r);
            if nr > best.1 {
                best = (r, nr);
            }
        }
        let v: Vec<f64> = best.0.iter().map(|x| x / best.1).collect();
        let jv = j.matvec(&v);
        for w in [&v, &jv] {
            let r = project_out(&span, w.clone());
            let nr = norm(&r);
            span.push(r.into_iter().map(|x| x / nr).collect());
        }
        cols.push(v);
        cols.push(jv);
    }
    Mat::from_cols(m, &cols)
}

/// Orientation induced by a complex structure given as a raw matrix: the sign
/// of the determinant of a `J`-adapted basis. An empty matrix gives `+1`.
pub fn orientation_of(j: &Mat) -> Sign {
    Sign::of(adapted_basis(j).det())
}

/// A linear complex structure `J` on `R^{2n}` with its induced orientation.
#[derive(Debug, Clone, PartialEq)]
pub struct ComplexStructure {
    j: Mat,
    orientation: Sign,
}

impl ComplexStructure {
    /// Validates `J² = -I` within `STRUCTURE_TOL · dim`, relative to `‖J‖²`.
    pub fn new(j: Mat) -> Result<Self> {
        check_even_square(&j)?;
        if j.rows() == 0 {
            return Err(Error::DimensionMismatch("empty matrix".into()));
        }
        let scale = (j.norm_fro() * j.norm_fro() / j.rows() as f64).max(1.0);
        let res = square_residual(&j);
        if res > STRUCTURE_TOL * j.rows() as f64 * scale {
            return Err(Error::NotComplexStructure(res));
        }
        let orientation = orientation_of(&j);
        Ok(ComplexStructure { j, orientation })
    }

    pub fn matrix(&self) -> &Mat {
        &self.j
    }

    pub fn into_matrix(self) -> Mat {
        self.j
    }

    /// Real dimension `2n`.
    pub fn dim(&self) -> usize {
        self.j.rows()
    }

    /// Complex dimension `n`.
    pub fn n(&self) -> usize {
        self.j.rows() / 2
    }

    pub fn orientation(&self) -> Sign {
        self.orientation
    }

    pub fn orthogonality_residual(&self) -> f64 {
        (&(&self.j.transpose() * &self.j) - &Mat::identity(self.dim())).norm_max()
    }

    pub fn is_orthogonal(&self) -> bool {
        self.orthogonality_residual() <= ORTHOGONALITY_TOL
    }
}

/// The orientation induced by `J`.
pub fn orientation_sign(j: &ComplexStructure) -> Sign {
    j.orientation()
}

/// Block-diagonal `J₀` with `n` copies of the rotation by `π/2`.
pub fn standard_j(n: usize) -> ComplexStructure {
    assert!(n >= 1, "standard structure needs n >= 1");
    let j = Mat::block_diag(&vec![rotation2(std::f64::consts::FRAC_PI_2); n]);
    ComplexStructure { j, orientation: Sign::Plus }
}

/// `-J`, which carries the orientation `(-1)^n` times that of `J`.
pub fn negate(j: &ComplexStructure) -> ComplexStructure {
    let orientation = if j.n() % 2 == 1 { j.orientation.flip() } else { j.orientation };
    ComplexStructure { j: -&j.j, orientation }
}

/// `g J g⁻¹`. Its orientation is that of `J` times the sign of `det g`.
pub fn conjugate(j: &ComplexStructure, g: &Mat) -> Result<ComplexStructure> {
    if g.rows() != j.dim() || !g.is_square() {
        return Err(Error::DimensionMismatch(format!(
            "conjugator is {}x{}, structure has dimension {}",
            g.rows(),
            g.cols(),
            j.dim()
        )));
    }
    if Svd::new(g).condition() > MAX_CONJUGATOR_CONDITION {
        return Err(Error::SingularConjugator);
    }
    let ginv = g.inverse()?;
    ComplexStructure::new(&(g * &j.j) * &ginv)
}

/// Two complex structures on the same space.
#[derive(Debug, Clone, PartialEq)]
pub struct StructurePair {
    pub j0: ComplexStructure,
    pub j1: ComplexStructure,
    pub is_orthogonal: bool,
    pub same_orientation: bool,
}

impl StructurePair {
    pub fn new(j0: ComplexStructure, j1: ComplexStructure) -> Result<Self> {
        if j0.dim() != j1.dim() {
            return Err(Error::DimensionMismatch(format!("structures of dimension {} and {}", j0.dim(), j1.dim())));
        }
        let is_orthogonal = j0.is_orthogonal() && j1.is_orthogonal();
        let same_orientation = j0.orientation() == j1.orientation();
        Ok(StructurePair { j0, j1, is_orthogonal, same_orientation })
    }

    /// Builds a pair from raw matrices.
    pub fn from_matrices(j0: Mat, j1: Mat) -> Result<Self> {
        StructurePair::new(ComplexStructure::new(j0)?, ComplexStructure::new(j1)?)
    }

    pub fn dim(&self) -> usize {
        self.j0.dim()
    }

    pub fn n(&self) -> usize {
        self.j0.n()
    }

    /// `K = -J₀J₁`.
    pub fn k_operator(&self) -> Mat {
        -&(self.j0.matrix() * self.j1.matrix())
    }

    /// `(g J₀ g⁻¹, g J₁ g⁻¹)`.
    pub fn conjugate(&self, g: &Mat) -> Result<StructurePair> {
        StructurePair::new(conjugate(&self.j0, g)?, conjugate(&self.j1, g)?)
    }

    /// `(-J₀, -J₁)`.
    pub fn negate(&self) -> StructurePair {
        StructurePair {
            j0: negate(&self.j0),
            j1: negate(&self.j1),
            is_orthogonal: self.is_orthogonal,
            same_orientation: self.same_orientation,
        }
    }

    pub fn orthogonality_residual(&self) -> f64 {
        self.j0.orthogonality_residual().max(self.j1.orthogonality_residual())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{left_mult_matrix, Quaternion};

    #[test]
    fn standard_and_identity() {
        assert!(is_complex_structure(standard_j(3).matrix(), 1e-12).unwrap());
        assert!(!is_complex_structure(&Mat::identity(4), 1e-12).unwrap());
        assert_eq!(is_complex_structure(&Mat::identity(3), 1e-12), Err(Error::OddDimension(3)));
    }

    #[test]
    fn conjugates_are_complex_structures() {
        let g = Mat::from_fn(4, 4, |i, j| if i == j { 2.0 } else { ((i * 7 + j * 3) % 5) as f64 * 0.3 });
        let j = conjugate(&standard_j(2), &g).unwrap();
        assert!(is_complex_structure(j.matrix(), 1e-10).unwrap());
        assert_eq!(j.orientation(), Sign::of(g.det()));
    }

    #[test]
    fn orientation_examples() {
        assert_eq!(standard_j(4).orientation(), Sign::Plus);
        assert_eq!(orientation_of(standard_j(4).matrix()), Sign::Plus);
        assert_eq!(negate(&standard_j(1)).orientation(), Sign::Minus);
        assert_eq!(orientation_of(negate(&standard_j(1)).matrix()), Sign::Minus);
        assert_eq!(orientation_of(negate(&standard_j(2)).matrix()), Sign::Plus);
        for q in [Quaternion::I, Quaternion::J, Quaternion::K, Quaternion::i_exp_j(1.1)] {
            let u = q.scale(1.0 / q.norm());
            assert_eq!(orientation_of(&left_mult_matrix(u)), Sign::Plus);
        }
    }

    #[test]
    fn orientation_ignores_adapted_choices() {
        // Conjugating by a rotation that fixes orientation changes the greedy
        // choices but not the sign.
        let g = Mat::from_fn(6, 6, |i, j| ((i + 1) * (j + 2)) as f64 % 7.0 + if i == j { 5.0 } else { 0.0 });
        let j = conjugate(&standard_j(3), &g).unwrap();
        let b = adapted_basis(j.matrix());
        assert!(b.det().abs() > 1e-8);
        assert_eq!(Sign::of(b.det()), Sign::of(g.det()));
    }

    #[test]
    fn conjugate_by_identity_and_diagonal() {
        let j0 = standard_j(2);
        assert_eq!(conjugate(&j0, &Mat::identity(4)).unwrap().matrix(), j0.matrix());
        let (a, b) = (1.2, 0.8);
        let g = Mat::diag(&[1.0 / a, a, 1.0 / b, b]);
        let j = conjugate(&j0, &g).unwrap();
        let want = Mat::from_row_slice(
            4,
            4,
            &[
                0.0,
                -1.0 / (a * a),
                0.0,
                0.0,
                a * a,
                0.0,
                0.0,
                0.0,
                0.0,
                0.0,
                0.0,
                -1.0 / (b * b),
                0.0,
                0.0,
                b * b,
                0.0,
            ],
        );
        assert!(j.matrix().approx_eq(&want, 1e-14));
    }

    #[test]
    fn singular_conjugator_is_rejected() {
        let g = Mat::diag(&[1.0, 1.0, 1.0, 0.0]);
        assert_eq!(conjugate(&standard_j(2), &g), Err(Error::SingularConjugator));
    }

    #[test]
    fn negation_on_r4_keeps_orientation() {
        assert_eq!(negate(&standard_j(2)).orientation(), Sign::Plus);
    }

    #[test]
    fn sign_serde() {
        assert_eq!(serde_json::to_string(&Sign::Minus).unwrap(), "-1");
        assert_eq!(serde_json::from_str::<Sign>("1").unwrap(), Sign::Plus);
        assert!(serde_json::from_str::<Sign>("0").is_err());
    }
}

use std::f64::consts::{FRAC_PI_2, PI};
use std::fmt;

use serde::{Deserialize, Serialize};

use super::StructurePair;
use crate::error::{Error, Result};
use crate::intersection::OrientedPlane;
use crate::linalg::{eigenvalues, left_mult_matrix, nullspace, nullspace_scaled, rotation2, sylvester_operator, Mat, Quaternion};

/// Eigenvalue angles of `K` closer than this are merged into one cluster.
pub const DEFAULT_CLUSTER_TOL: f64 = 1e-7;

/// One quaternionic block `H_θ^r`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AngleBlock {
    pub theta: f64,
    pub mult: usize,
}

/// Isomorphism type of an orthogonal pair:
/// `H_{θ₁}^{r₁} ⊕ ⋯ ⊕ H_{θ_m}^{r_m} ⊕ C^ℓ ⊕ C̄^s`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PairSignature {
    pub blocks: Vec<AngleBlock>,
    pub l: usize,
    pub s: usize,
}

impl PairSignature {
    /// Sorts the blocks by angle and validates.
    pub fn new(mut blocks: Vec<AngleBlock>, l: usize, s: usize) -> Result<Self> {
        blocks.sort_by(|a, b| a.theta.total_cmp(&b.theta));
        let sig = PairSignature { blocks, l, s };
        sig.validate()?;
        Ok(sig)
    }

    pub fn validate(&self) -> Result<()> {
        for b in &self.blocks {
            if !(b.theta > 0.0 && b.theta < PI) {
                return Err(Error::InvalidSignature(format!("angle {} outside (0, pi)", b.theta)));
            }
            if b.mult == 0 {
                return Err(Error::InvalidSignature("zero multiplicity".into()));
            }
        }
        if self.blocks.windows(2).any(|w| w[0].theta >= w[1].theta) {
            return Err(Error::InvalidSignature("angles must be strictly increasing".into()));
        }
        if self.dim() == 0 {
            return Err(Error::InvalidSignature("empty signature".into()));
        }
        Ok(())
    }

    /// Real dimension `Σ 4rᵢ + 2ℓ + 2s`.
    pub fn dim(&self) -> usize {
        self.blocks.iter().map(|b| 4 * b.mult).sum::<usize>() + 2 * self.l + 2 * self.s
    }

    pub fn n(&self) -> usize {
        self.dim() / 2
    }

    /// Both structures induce the same orientation iff `s` is even.
    pub fn same_orientation(&self) -> bool {
        self.s % 2 == 0
    }

    /// Equal multiplicities and counts, angles within `tol`.
    pub fn approx_eq(&self, other: &PairSignature, tol: f64) -> bool {
        self.l == other.l
            && self.s == other.s
            && self.blocks.len() == other.blocks.len()
            && self
                .blocks
                .iter()
                .zip(&other.blocks)
                .all(|(a, b)| a.mult == b.mult && (a.theta - b.theta).abs() <= tol)
    }
}

impl fmt::Display for PairSignature {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for b in &self.blocks {
            writeln!(f, "theta={} (mult {})", format_sig6(b.theta), b.mult)?;
        }
        write!(f, "l={}, s={}", self.l, self.s)
    }
}

/// Six significant digits with trailing zeros removed.
pub(crate) fn format_sig6(x: f64) -> String {
    if x == 0.0 || !x.is_finite() {
        return format!("{x}");
    }
    let digits = 5 - x.abs().log10().floor() as i32;
    let s = format!("{:.*}", digits.max(0) as usize, x);
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.').to_string()
    } else {
        s
    }
}

/// Signature together with diagnostics of the clustering.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Classification {
    pub signature: PairSignature,
    /// Some angle cluster sits within ten cluster tolerances of `0` or `π`.
    pub near_degenerate: bool,
    /// Smallest gap between distinct clusters (infinite with a single cluster).
    pub min_gap: f64,
}

pub fn classify_orthogonal_pair(pair: &StructurePair, cluster_tol: f64) -> Result<PairSignature> {
    Ok(classify_orthogonal_pair_detailed(pair, cluster_tol)?.signature)
}

/// Reads the signature off the eigenvalue angles of the orthogonal map `K = -J₀J₁`.
pub fn classify_orthogonal_pair_detailed(pair: &StructurePair, cluster_tol: f64) -> Result<Classification> {
    if !pair.is_orthogonal {
        return Err(Error::NotOrthogonal(pair.orthogonality_residual()));
    }
    let mut angles: Vec<f64> = eigenvalues(&pair.k_operator())?.iter().map(|z| z.arg().abs()).collect();
    angles.sort_by(f64::total_cmp);

    let mut clusters: Vec<Vec<f64>> = vec![vec![angles[0]]];
    let mut min_gap = f64::INFINITY;
    for w in angles.windows(2) {
        let gap = w[1] - w[0];
        if gap < cluster_tol {
            clusters.last_mut().unwrap().push(w[1]);
            continue;
        }
        if gap <= 10.0 * cluster_tol {
            return Err(Error::ClusterAmbiguity(format!("angle gap {gap:.3e} near tolerance {cluster_tol:.1e}")));
        }
        min_gap = min_gap.min(gap);
        clusters.push(vec![w[1]]);
    }

    let (mut l, mut s) = (0, 0);
    let mut blocks = Vec::new();
    let mut near_degenerate = false;
    for c in clusters {
        let count = c.len();
        let mean = c.iter().sum::<f64>() / count as f64;
        if c[0] < cluster_tol {
            if count % 2 == 1 {
                return Err(Error::ClusterAmbiguity("odd multiplicity at eigenvalue 1".into()));
            }
            l = count / 2;
        } else if c[count - 1] > PI - cluster_tol {
            if count % 2 == 1 {
                return Err(Error::ClusterAmbiguity("odd multiplicity at eigenvalue -1".into()));
            }
            s = count / 2;
        } else {
            // Each cluster holds e^{iθ} and e^{-iθ}, each of even multiplicity.
            if count % 4 != 0 {
                return Err(Error::ClusterAmbiguity(format!("cluster at angle {mean} has size {count}")));
            }
            if mean < 10.0 * cluster_tol || mean > PI - 10.0 * cluster_tol {
                near_degenerate = true;
            }
            blocks.push(AngleBlock { theta: mean, mult: count / 4 });
        }
    }
    let signature = PairSignature::new(blocks, l, s)?;
    Ok(Classification { signature, near_degenerate, min_gap })
}

/// Block-diagonal representative: `(L(i), L(i e^{jθ}))` per quaternionic
/// block, then `(R, R)` per `C` and `(R, -R)` per `C̄`, `R` the rotation by `π/2`.
pub fn construct_canonical_pair(sig: &PairSignature) -> Result<StructurePair> {
    sig.validate()?;
    let r = rotation2(FRAC_PI_2);
    let (mut b0, mut b1) = (Vec::new(), Vec::new());
    for b in &sig.blocks {
        for _ in 0..b.mult {
            b0.push(left_mult_matrix(Quaternion::I));
            b1.push(left_mult_matrix(Quaternion::i_exp_j(b.theta)));
        }
    }
    for _ in 0..sig.l {
        b0.push(r.clone());
        b1.push(r.clone());
    }
    for _ in 0..sig.s {
        b0.push(r.clone());
        b1.push(-&r);
    }
    StructurePair::from_matrices(Mat::block_diag(&b0), Mat::block_diag(&b1))
}

/// Orthogonal pairs are isomorphic iff their signatures agree.
pub fn pairs_isomorphic(a: &StructurePair, b: &StructurePair, tol: f64) -> Result<bool> {
    if a.dim() != b.dim() {
        return Ok(false);
    }
    let sa = classify_orthogonal_pair(a, DEFAULT_CLUSTER_TOL)?;
    let sb = classify_orthogonal_pair(b, DEFAULT_CLUSTER_TOL)?;
    Ok(sa.approx_eq(&sb, tol))
}

/// Orthonormal frame of `ker(K + I)`, the largest subspace on which
/// `J₁ = -J₀`, oriented by `J₀`.
pub fn find_antiholomorphic_subspace(pair: &StructurePair, tol: f64) -> Result<OrientedPlane> {
    let a = &pair.k_operator() + &Mat::identity(pair.dim());
    let ns = nullspace_scaled(&a, tol, 1.0);
    match ns.dim() {
        0 => Err(Error::EmptySubspace),
        d if d % 2 == 1 => Err(Error::NonGenericSpectrum(format!("kernel of K + I has odd dimension {d}"))),
        _ => Ok(OrientedPlane::new(ns.basis)?.oriented_by(pair.j0.matrix())),
    }
}

/// Real dimension of the algebra of maps commuting with both structures.
pub fn commutant_dimension(pair: &StructurePair) -> usize {
    let (j0, j1) = (pair.j0.matrix(), pair.j1.matrix());
    let op = Mat::vstack(&[&sylvester_operator(j0, j0), &sylvester_operator(j1, j1)]);
    nullspace(&op, 1e-9).dim()
}

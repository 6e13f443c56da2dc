//! Jointly stabilised `2k`-planes of a pair of complex structures.
//!
//! Orthogonal pairs go through their signature: every component of the
//! intersection is a product of Grassmannians indexed by how many
//! quaternionic, holomorphic and antiholomorphic summands a plane contains.
//! General pairs go through the spectral blocks of `K = -J₀J₁`. Both paths
//! end in the same per-plane checks: relative orientation, transversality of
//! the two complex Grassmannians and the local intersection sign.

mod components;
mod plane;
mod spectral;
mod tangent;

use std::fmt;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::counts::{expected_counts, expected_signed_counts};
use crate::error::{Error, Result};
use crate::linalg::{smallest_right_singular, Mat};
use crate::structures::{classify_orthogonal_pair_detailed, PairSignature, Sign, StructurePair, DEFAULT_CLUSTER_TOL};

pub use components::{enumerate_components_orthogonal, IntersectionComponent};
pub use plane::{plane_to_unit_quaternion, OrientedPlane, FRAME_TOL};
pub use spectral::{spectral_blocks, BlockTag, SpectralBlock};
pub use tangent::{
    is_transverse, local_intersection_sign, relative_orientation, tangent_space, RelOrientation, Transversality,
    DEFAULT_PLANE_TOL, DEFAULT_TRANS_TOL,
};

/// Which computation produced a report.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Method {
    /// Signature path for orthogonal pairs, spectral path otherwise.
    #[default]
    Auto,
    Signature,
    Spectral,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct IntersectionOptions {
    /// Invariance tolerance for planes.
    pub tol: f64,
    pub cluster_tol: f64,
    pub trans_tol: f64,
    pub method: Method,
}

impl Default for IntersectionOptions {
    fn default() -> Self {
        IntersectionOptions {
            tol: DEFAULT_PLANE_TOL,
            cluster_tol: DEFAULT_CLUSTER_TOL,
            trans_tol: DEFAULT_TRANS_TOL,
            method: Method::Auto,
        }
    }
}

/// A number of planes, or `infinite` when a continuous family is present.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RawCount {
    Finite(usize),
    Infinite,
}

impl RawCount {
    pub fn finite(self) -> Option<usize> {
        match self {
            RawCount::Finite(c) => Some(c),
            RawCount::Infinite => None,
        }
    }
}

impl fmt::Display for RawCount {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RawCount::Finite(c) => write!(f, "{c}"),
            RawCount::Infinite => f.write_str("infinite"),
        }
    }
}

impl Serialize for RawCount {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            RawCount::Finite(c) => s.serialize_u64(*c as u64),
            RawCount::Infinite => s.serialize_str("infinite"),
        }
    }
}

impl<'de> Deserialize<'de> for RawCount {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Repr {
            Count(usize),
            Word(String),
        }
        match Repr::deserialize(d)? {
            Repr::Count(c) => Ok(RawCount::Finite(c)),
            Repr::Word(w) if w == "infinite" => Ok(RawCount::Infinite),
            Repr::Word(w) => Err(serde::de::Error::custom(format!("expected a count or \"infinite\", got {w:?}"))),
        }
    }
}

/// An isolated common plane.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IntersectionPoint {
    /// Carries the orientation induced by `J₀`.
    pub plane: OrientedPlane,
    pub relative_orientation: RelOrientation,
    pub transverse: bool,
    /// Smallest singular value of the stacked tangent bases; absent for `k = n`.
    pub gap: Option<f64>,
    pub marginal: bool,
    /// Defined iff the point is transverse.
    pub local_sign: Option<Sign>,
}

/// A continuous family found on the spectral path: `choices[b]` pieces of
/// spectral block `b`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ContinuumFamily {
    pub choices: Vec<usize>,
    pub real_dim: usize,
    pub orientation_class: RelOrientation,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IntersectionReport {
    pub n: usize,
    pub k: usize,
    pub method: Method,
    pub same_orientation_pair: bool,
    /// Present on the signature path.
    pub signature: Option<PairSignature>,
    /// All components, points and continua alike (signature path).
    pub components: Vec<IntersectionComponent>,
    /// Continuous families (spectral path).
    pub families: Vec<ContinuumFamily>,
    pub isolated_points: Vec<IntersectionPoint>,
    pub continuum: bool,
    pub raw_count_same: RawCount,
    pub raw_count_opposite: RawCount,
    pub signed_count_same: Option<i64>,
    pub signed_count_opposite: Option<i64>,
    /// Homological intersection numbers.
    pub expected_same: i64,
    pub expected_opposite: i64,
    /// What the signed counts should sum to.
    pub expected_signed_same: i64,
    pub expected_signed_opposite: i64,
    /// No continuum and every point transverse.
    pub generic: bool,
    /// A quaternionic angle is close to `0` or `π`.
    pub near_degenerate: bool,
    /// Some transversality gap is within a factor 10 of the threshold.
    pub marginal: bool,
}

impl IntersectionReport {
    pub fn points_with(&self, class: RelOrientation) -> impl Iterator<Item = &IntersectionPoint> {
        self.isolated_points.iter().filter(move |p| p.relative_orientation == class)
    }

    pub fn all_transverse(&self) -> bool {
        self.isolated_points.iter().all(|p| p.transverse)
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::to_value(self).expect("report serialises")
    }
}

/// Frames of the isotypic summands `ker(K - I)`, `ker(K + I)` and
/// `ker(K² - 2cos θ K + I)` of an orthogonal pair, in signature order.
fn isotypic_frames(pair: &StructurePair, sig: &PairSignature) -> (Vec<Mat>, Mat, Mat) {
    let k = pair.k_operator();
    let id = Mat::identity(pair.dim());
    let k2 = &k * &k;
    let theta_frames = sig
        .blocks
        .iter()
        .map(|b| {
            let m = &(&k2 - &k.scale(2.0 * b.theta.cos())) + &id;
            smallest_right_singular(&m, 4 * b.mult).0
        })
        .collect();
    let holo = smallest_right_singular(&(&k - &id), 2 * sig.l).0;
    let anti = smallest_right_singular(&(&k + &id), 2 * sig.s).0;
    (theta_frames, holo, anti)
}

fn analyse_point(pair: &StructurePair, plane: OrientedPlane, opts: &IntersectionOptions) -> Result<IntersectionPoint> {
    let plane = plane.oriented_by(pair.j0.matrix());
    let relative_orientation = relative_orientation(pair, &plane, opts.tol)?;
    let tr = is_transverse(pair, &plane, opts.tol, opts.trans_tol)?;
    let local_sign = if tr.transverse { Some(local_intersection_sign(pair, &plane, opts.tol, 0.0)?) } else { None };
    Ok(IntersectionPoint {
        plane,
        relative_orientation,
        transverse: tr.transverse,
        gap: tr.gap.is_finite().then_some(tr.gap),
        marginal: tr.marginal,
        local_sign,
    })
}

fn push_unique(points: &mut Vec<OrientedPlane>, p: OrientedPlane, tol: f64) {
    if !points.iter().any(|q| q.distance(&p) < 10.0 * tol) {
        points.push(p);
    }
}

/// All `2k`-planes stabilised by both structures, with orientation classes,
/// transversality, local signs and the counts they add up to.
pub fn common_invariant_planes(pair: &StructurePair, k: usize, opts: &IntersectionOptions) -> Result<IntersectionReport> {
    let n = pair.n();
    if k == 0 || k > n {
        return Err(Error::DimensionMismatch(format!("k = {k} outside 1..={n}")));
    }
    let method = match opts.method {
        Method::Auto if pair.is_orthogonal => Method::Signature,
        Method::Auto => Method::Spectral,
        m => m,
    };
    let mut signature = None;
    let mut components = Vec::new();
    let mut families = Vec::new();
    let mut near_degenerate = false;
    let mut planes: Vec<OrientedPlane> = Vec::new();
    // Orientation classes containing a continuum.
    let mut continuum_classes: Vec<RelOrientation> = Vec::new();

    match method {
        Method::Signature | Method::Auto => {
            let cls = classify_orthogonal_pair_detailed(pair, opts.cluster_tol)?;
            near_degenerate = cls.near_degenerate;
            let sig = cls.signature;
            let (theta_frames, holo, anti) = isotypic_frames(pair, &sig);
            components = enumerate_components_orthogonal(&sig, k);
            for c in &components {
                if !c.is_point() {
                    continuum_classes.push(c.orientation_class);
                    continue;
                }
                let mut parts: Vec<&Mat> = Vec::new();
                for (ti, f) in c.t.iter().zip(&theta_frames) {
                    if *ti > 0 {
                        parts.push(f);
                    }
                }
                if c.l_prime > 0 {
                    parts.push(&holo);
                }
                if c.s_prime > 0 {
                    parts.push(&anti);
                }
                let plane = OrientedPlane::from_span(&Mat::hstack(&parts), 1e-8)?;
                push_unique(&mut planes, plane, opts.tol);
            }
            signature = Some(sig);
        }
        Method::Spectral => {
            let blocks = spectral_blocks(pair, opts.tol, opts.cluster_tol)?;
            let mut choice = Vec::with_capacity(blocks.len());
            select_blocks(&blocks, 2 * k, &mut choice, &mut |ch| {
                let partial = ch.iter().zip(&blocks).any(|(&c, b)| c > 0 && c < b.units);
                if partial {
                    let real_dim = ch.iter().zip(&blocks).map(|(&c, b)| b.family_dim(c)).sum();
                    let opposite = ch
                        .iter()
                        .zip(&blocks)
                        .filter(|(&c, b)| c > 0 && b.orientation_of_part(c) == RelOrientation::Opposite)
                        .count();
                    let class = RelOrientation::from_parity(opposite % 2 == 1);
                    continuum_classes.push(class);
                    families.push(ContinuumFamily { choices: ch.to_vec(), real_dim, orientation_class: class });
                    return Ok(());
                }
                let parts: Vec<&Mat> =
                    ch.iter().zip(&blocks).filter(|(&c, _)| c > 0).map(|(_, b)| b.plane.frame()).collect();
                let plane = OrientedPlane::from_span(&Mat::hstack(&parts), 1e-8)?;
                push_unique(&mut planes, plane, opts.tol);
                Ok(())
            })?;
        }
    }

    let mut isolated_points = Vec::with_capacity(planes.len());
    for p in planes {
        isolated_points.push(analyse_point(pair, p, opts)?);
    }
    let continuum = !continuum_classes.is_empty();
    let raw = |class: RelOrientation| {
        if continuum_classes.contains(&class) {
            RawCount::Infinite
        } else {
            RawCount::Finite(isolated_points.iter().filter(|p| p.relative_orientation == class).count())
        }
    };
    let all_transverse = isolated_points.iter().all(|p| p.transverse);
    let signed = |class: RelOrientation| {
        (!continuum && all_transverse).then(|| {
            isolated_points
                .iter()
                .filter(|p| p.relative_orientation == class)
                .map(|p| p.local_sign.map_or(0, Sign::value))
                .sum::<i64>()
        })
    };
    let (ni, ki) = (n as i64, k as i64);
    let expected = expected_counts(pair.same_orientation, ni, ki);
    let expected_signed = expected_signed_counts(pair.same_orientation, ni, ki);
    Ok(IntersectionReport {
        n,
        k,
        method,
        same_orientation_pair: pair.same_orientation,
        signature,
        components,
        families,
        raw_count_same: raw(RelOrientation::Same),
        raw_count_opposite: raw(RelOrientation::Opposite),
        signed_count_same: signed(RelOrientation::Same),
        signed_count_opposite: signed(RelOrientation::Opposite),
        expected_same: expected.same,
        expected_opposite: expected.opposite,
        expected_signed_same: expected_signed.same,
        expected_signed_opposite: expected_signed.opposite,
        generic: !continuum && all_transverse,
        near_degenerate,
        marginal: isolated_points.iter().any(|p| p.marginal),
        isolated_points,
        continuum,
    })
}

/// Calls `f` with every choice of pieces per block whose dimensions sum to `target`.
fn select_blocks(
    blocks: &[SpectralBlock],
    target: usize,
    choice: &mut Vec<usize>,
    f: &mut impl FnMut(&[usize]) -> Result<()>,
) -> Result<()> {
    let i = choice.len();
    if i == blocks.len() {
        return if target == 0 { f(choice) } else { Ok(()) };
    }
    let b = &blocks[i];
    let rest: usize = blocks[i + 1..].iter().map(SpectralBlock::dim).sum();
    for c in 0..=b.units {
        let used = c * b.unit_dim();
        if used > target {
            break;
        }
        if target - used > rest {
            continue;
        }
        choice.push(c);
        select_blocks(blocks, target - used, choice, f)?;
        choice.pop();
    }
    Ok(())
}

//! Common invariant planes of pairs of linear complex structures on `R^{2n}`.
//!
//! Given complex structures `J₀`, `J₁` (real matrices squaring to `-I`), the
//! crate finds the `2k`-planes stabilised by both, decides whether the two
//! structures orient each plane the same way, checks transversality of the
//! two embedded complex Grassmannians and computes local intersection signs.
//!
//! Orthogonal pairs are classified up to orthogonal conjugacy by a
//! [`PairSignature`] (quaternionic blocks `H_θ`, holomorphic lines `C`,
//! antiholomorphic lines `C̄`), which gives the full description of the
//! common planes. General pairs go through the spectral blocks of
//! `K = -J₀J₁`. The [`counts`] module holds the exact combinatorics and
//! [`experiments`] ties everything together in a seeded Monte Carlo harness.

pub mod counts;
pub mod error;
pub mod experiments;
pub mod intersection;
pub mod io;
pub mod linalg;
pub mod structures;

pub use error::{Error, Result};
pub use intersection::{
    common_invariant_planes, enumerate_components_orthogonal, IntersectionComponent, IntersectionPoint,
    IntersectionReport, OrientedPlane,
};
pub use linalg::{Mat, Quaternion};
pub use structures::{
    classify_orthogonal_pair, construct_canonical_pair, ComplexStructure, PairSignature, Sign, StructurePair,
};

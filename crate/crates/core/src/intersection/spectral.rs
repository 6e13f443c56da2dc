use serde::{Deserialize, Serialize};

use super::{relative_orientation, OrientedPlane, RelOrientation};
use crate::error::{Error, Result};
use crate::linalg::{complex_kernel, eigenvalues, orthonormalize, smallest_right_singular, ComplexScalar, Mat};
use crate::structures::StructurePair;

/// Kind of eigenvalue class of `K = -J₀J₁` a block comes from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum BlockTag {
    /// Eigenvalue `1`, where `J₁ = J₀`.
    Holo,
    /// Eigenvalue `-1`, where `J₁ = -J₀`.
    Antiholo,
    /// Conjugate pair `e^{±iθ}` on the unit circle.
    UnitCircle,
    /// Real pair `{μ, 1/μ}`.
    RealPair,
    /// Quadruple `{λ, λ̄, 1/λ, 1/λ̄}` off the unit circle.
    Complex,
}

/// Smallest real subspace carrying one eigenvalue class, invariant under both
/// structures.
#[derive(Debug, Clone)]
pub struct SpectralBlock {
    /// Frame oriented by `J₀`.
    pub plane: OrientedPlane,
    pub tag: BlockTag,
    /// Representative eigenvalue: upper half plane, modulus at least one.
    pub eigenvalue: ComplexScalar,
    /// Number of indecomposable pieces the block splits into (complex lines for
    /// `Holo`/`Antiholo`, `4`-dimensional pieces for `UnitCircle`). Blocks with
    /// more than one piece contain continuous families of invariant subspaces.
    pub units: usize,
    /// Relative orientation of the whole block.
    pub orientation: RelOrientation,
}

impl SpectralBlock {
    pub fn dim(&self) -> usize {
        self.plane.plane_dim()
    }

    /// Real dimension of one indecomposable piece.
    pub fn unit_dim(&self) -> usize {
        self.dim() / self.units
    }

    /// Relative orientation of an invariant subspace made of `c` pieces.
    pub fn orientation_of_part(&self, c: usize) -> RelOrientation {
        if c == self.units {
            return self.orientation;
        }
        match self.tag {
            BlockTag::Antiholo => RelOrientation::from_parity(c % 2 == 1),
            _ => RelOrientation::Same,
        }
    }

    /// Dimension of the family of invariant subspaces made of `c` pieces.
    pub fn family_dim(&self, c: usize) -> usize {
        match self.tag {
            BlockTag::Holo | BlockTag::Antiholo => 2 * c * (self.units - c),
            BlockTag::UnitCircle => 4 * c * (self.units - c),
            _ => 0,
        }
    }
}

fn rel_dist(a: ComplexScalar, b: ComplexScalar) -> f64 {
    (a - b).norm() / a.norm().max(b.norm()).max(1.0)
}

struct Cluster {
    center: ComplexScalar,
    count: usize,
}

fn cluster_spectrum(vals: &[ComplexScalar], cluster_tol: f64) -> Result<Vec<Cluster>> {
    let m = vals.len();
    let mut parent: Vec<usize> = (0..m).collect();
    fn find(p: &mut [usize], i: usize) -> usize {
        let mut r = i;
        while p[r] != r {
            r = p[r];
        }
        p[i] = r;
        r
    }
    for i in 0..m {
        for j in i + 1..m {
            let d = rel_dist(vals[i], vals[j]);
            if d < cluster_tol {
                let (a, b) = (find(&mut parent, i), find(&mut parent, j));
                parent[a] = b;
            }
        }
    }
    let mut groups: Vec<(usize, Vec<ComplexScalar>)> = Vec::new();
    for i in 0..m {
        let r = find(&mut parent, i);
        match groups.iter_mut().find(|g| g.0 == r) {
            Some(g) => g.1.push(vals[i]),
            None => groups.push((r, vec![vals[i]])),
        }
    }
    let clusters: Vec<Cluster> = groups
        .into_iter()
        .map(|(_, g)| Cluster { center: g.iter().sum::<ComplexScalar>() / g.len() as f64, count: g.len() })
        .collect();
    for (i, a) in clusters.iter().enumerate() {
        for b in &clusters[i + 1..] {
            let d = rel_dist(a.center, b.center);
            if d < 10.0 * cluster_tol {
                return Err(Error::NonGenericSpectrum(format!("eigenvalues {} and {} nearly collide", a.center, b.center)));
            }
        }
    }
    Ok(clusters)
}

fn real_frame_from_complex(vectors: &[Vec<ComplexScalar>]) -> Vec<Vec<f64>> {
    let mut cols = Vec::new();
    for v in vectors {
        cols.push(v.iter().map(|z| z.re).collect());
        cols.push(v.iter().map(|z| z.im).collect());
    }
    cols
}

/// Real eigenvector for a real simple eigenvalue, from the complex kernel vector.
fn real_eigenvector(k: &Mat, mu: f64) -> Vec<f64> {
    let v = &complex_kernel(k, ComplexScalar::new(mu, 0.0), 1)[0];
    let re: Vec<f64> = v.iter().map(|z| z.re).collect();
    let im: Vec<f64> = v.iter().map(|z| z.im).collect();
    let nr = re.iter().map(|x| x * x).sum::<f64>();
    let ni = im.iter().map(|x| x * x).sum::<f64>();
    if nr >= ni {
        re
    } else {
        im
    }
}

fn eigen_residual(k: &Mat, lambda: ComplexScalar, vectors: &[Vec<ComplexScalar>]) -> f64 {
    let n = k.rows();
    let scale = k.norm_fro().max(1.0);
    vectors
        .iter()
        .map(|v| {
            (0..n)
                .map(|i| {
                    let kv: ComplexScalar = (0..n).map(|j| v[j] * k[(i, j)]).sum();
                    (kv - lambda * v[i]).norm_sqr()
                })
                .sum::<f64>()
                .sqrt()
        })
        .fold(0.0, f64::max)
        / scale
}

/// Tolerance on eigenvector residuals; larger residuals mean a defective cluster.
const SEMISIMPLE_TOL: f64 = 1e-6;

/// Decomposes `R^{2n}` into the spectral blocks of `K = -J₀J₁`.
///
/// `J₀` maps the `λ`-eigenspace of `K` onto the `1/λ`-eigenspace, so each class
/// of eigenvalues under `λ ↦ λ̄` and `λ ↦ 1/λ` carries a subspace invariant
/// under both structures. Fails with `NonGenericSpectrum` when clusters nearly
/// collide, repeat off the unit circle or are not semisimple.
pub fn spectral_blocks(pair: &StructurePair, tol: f64, cluster_tol: f64) -> Result<Vec<SpectralBlock>> {
    let k = pair.k_operator();
    let dim = pair.dim();
    let vals = eigenvalues(&k)?;
    let clusters = cluster_spectrum(&vals, cluster_tol)?;
    let m = clusters.len();

    // Classes under conjugation and inversion.
    let mut class_of: Vec<usize> = (0..m).collect();
    let transforms: [fn(ComplexScalar) -> ComplexScalar; 3] = [|z| z.conj(), |z| z.inv(), |z| z.inv().conj()];
    for i in 0..m {
        for f in &transforms {
            let image = f(clusters[i].center);
            let (j, d) = (0..m)
                .map(|j| (j, rel_dist(image, clusters[j].center)))
                .min_by(|a, b| a.1.total_cmp(&b.1))
                .unwrap();
            if d > 10.0 * cluster_tol {
                return Err(Error::NonGenericSpectrum(format!(
                    "eigenvalue {} has no partner under conjugation/inversion",
                    clusters[i].center
                )));
            }
            if clusters[j].count != clusters[i].count {
                return Err(Error::NonGenericSpectrum("partner eigenvalues differ in multiplicity".into()));
            }
            let (a, b) = (class_of[i], class_of[j]);
            if a != b {
                class_of.iter_mut().filter(|c| **c == a).for_each(|c| *c = b);
            }
        }
    }
    let mut classes: Vec<Vec<usize>> = Vec::new();
    let mut seen: Vec<usize> = Vec::new();
    for i in 0..m {
        if !seen.contains(&class_of[i]) {
            seen.push(class_of[i]);
            classes.push((0..m).filter(|&j| class_of[j] == class_of[i]).collect());
        }
    }

    let near_real = |z: ComplexScalar| z.im.abs() <= 10.0 * cluster_tol * z.norm().max(1.0);
    let mut blocks = Vec::new();
    for class in classes {
        let cs: Vec<&Cluster> = class.iter().map(|&i| &clusters[i]).collect();
        let count = cs[0].count;
        let (tag, rep, cols, units) = match cs.len() {
            1 => {
                let c = cs[0].center;
                let tag = if rel_dist(c, ComplexScalar::new(1.0, 0.0)) < 10.0 * cluster_tol {
                    BlockTag::Holo
                } else if rel_dist(c, ComplexScalar::new(-1.0, 0.0)) < 10.0 * cluster_tol {
                    BlockTag::Antiholo
                } else {
                    return Err(Error::NonGenericSpectrum(format!("self-paired eigenvalue {c}")));
                };
                if count % 2 == 1 {
                    return Err(Error::NonGenericSpectrum(format!("odd multiplicity {count} at {c}")));
                }
                let shift = if tag == BlockTag::Holo { 1.0 } else { -1.0 };
                let (v, rel) = smallest_right_singular(&(&k - &Mat::identity(dim).scale(shift)), count);
                if rel > SEMISIMPLE_TOL * k.norm_fro().max(1.0) {
                    return Err(Error::NonGenericSpectrum(format!("eigenvalue {shift} is not semisimple")));
                }
                (tag, ComplexScalar::new(shift, 0.0), v.columns(), count / 2)
            }
            2 if near_real(cs[0].center) && near_real(cs[1].center) => {
                if count != 1 {
                    return Err(Error::NonGenericSpectrum("repeated real eigenvalue pair".into()));
                }
                let (a, b) = (cs[0].center.re, cs[1].center.re);
                let rep = if a.abs() >= b.abs() { a } else { b };
                (BlockTag::RealPair, ComplexScalar::new(rep, 0.0), vec![real_eigenvector(&k, a), real_eigenvector(&k, b)], 1)
            }
            2 => {
                if count % 2 == 1 {
                    return Err(Error::NonGenericSpectrum("odd multiplicity on the unit circle".into()));
                }
                let c = if cs[0].center.im > 0.0 { cs[0].center } else { cs[1].center };
                let vecs = complex_kernel(&k, c, count);
                if vecs.len() < count || eigen_residual(&k, c, &vecs) > SEMISIMPLE_TOL {
                    return Err(Error::NonGenericSpectrum(format!("eigenvalue {c} is not semisimple")));
                }
                (BlockTag::UnitCircle, c, real_frame_from_complex(&vecs), count / 2)
            }
            4 => {
                if count != 1 {
                    return Err(Error::NonGenericSpectrum("repeated eigenvalue quadruple".into()));
                }
                let upper: Vec<ComplexScalar> = cs.iter().map(|c| c.center).filter(|z| z.im > 0.0).collect();
                if upper.len() != 2 {
                    return Err(Error::NonGenericSpectrum("malformed eigenvalue quadruple".into()));
                }
                let mut vecs = Vec::new();
                for &c in &upper {
                    let v = complex_kernel(&k, c, 1);
                    if eigen_residual(&k, c, &v) > SEMISIMPLE_TOL {
                        return Err(Error::NonGenericSpectrum(format!("eigenvalue {c} is not semisimple")));
                    }
                    vecs.extend(v);
                }
                let rep = if upper[0].norm() >= upper[1].norm() { upper[0] } else { upper[1] };
                (BlockTag::Complex, rep, real_frame_from_complex(&vecs), 1)
            }
            s => return Err(Error::NonGenericSpectrum(format!("eigenvalue class of size {s}"))),
        };
        let frame = orthonormalize(&Mat::from_cols(dim, &cols), 1e-8)
            .map_err(|_| Error::NonGenericSpectrum(format!("eigenvectors for {rep} are dependent")))?;
        let plane = OrientedPlane::new(frame)?.oriented_by(pair.j0.matrix());
        let res = plane.invariance_residual(pair.j0.matrix()).max(plane.invariance_residual(pair.j1.matrix()));
        if res > tol {
            return Err(Error::NonGenericSpectrum(format!("block at {rep} fails invariance (residual {res:.2e})")));
        }
        let orientation = relative_orientation(pair, &plane, tol)?;
        blocks.push(SpectralBlock { plane, tag, eigenvalue: rep, units, orientation });
    }
    let total: usize = blocks.iter().map(SpectralBlock::dim).sum();
    if total != dim {
        return Err(Error::NonGenericSpectrum(format!("blocks span {total} of {dim} dimensions")));
    }
    blocks.sort_by(|a, b| {
        a.tag
            .cmp(&b.tag)
            .then(a.eigenvalue.arg().total_cmp(&b.eigenvalue.arg()))
            .then(a.eigenvalue.norm().total_cmp(&b.eigenvalue.norm()))
    });
    Ok(blocks)
}

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use super::{standard_j, ComplexStructure, Sign};
use crate::error::{Error, Result};
use crate::linalg::{orthonormalize, Mat, Svd};

/// Number of Gaussian draws `random_general_j` makes before giving up.
pub const SAMPLING_BUDGET: usize = 100_000;

/// Generator for trial `index` of a run seeded with `seed`: one ChaCha stream
/// per trial, so trials can be evaluated in any order.
pub fn trial_rng(seed: u64, index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    rng
}

fn gaussian(m: usize, rng: &mut impl Rng) -> Mat {
    Mat::from_fn(m, m, |_, _| rng.sample(StandardNormal))
}

/// Haar-distributed rotation in `SO(m)`, `m ≥ 2`.
pub fn haar_orthogonal(m: usize, rng: &mut impl Rng) -> Mat {
    loop {
        // Gram-Schmidt keeps the diagonal of R positive, which is the sign
        // correction that makes Q Haar on O(m).
        if let Ok(mut q) = orthonormalize(&gaussian(m, rng), 1e-10) {
            if q.det() < 0.0 {
                let (a, b) = (q.col(m - 2), q.col(m - 1));
                q.set_col(m - 2, &b);
                q.set_col(m - 1, &a);
            }
            return q;
        }
    }
}

/// `J₀` for `+1`, and `J₀` conjugated by the swap of the last two coordinates for `-1`.
fn base_structure(n: usize, orientation: Sign) -> Mat {
    let j0 = standard_j(n).into_matrix();
    match orientation {
        Sign::Plus => j0,
        Sign::Minus => {
            let m = 2 * n;
            let mut p = Mat::identity(m);
            p[(m - 2, m - 2)] = 0.0;
            p[(m - 1, m - 1)] = 0.0;
            p[(m - 2, m - 1)] = 1.0;
            p[(m - 1, m - 2)] = 1.0;
            &(&p * &j0) * &p
        }
    }
}

/// Haar-random orthogonal complex structure on `R^{2n}` with the given orientation.
pub fn random_orthogonal_j_with(n: usize, orientation: Sign, rng: &mut impl Rng) -> ComplexStructure {
    assert!(n >= 1, "n must be at least 1");
    let g = haar_orthogonal(2 * n, rng);
    let j = &(&g * &base_structure(n, orientation)) * &g.transpose();
    ComplexStructure { j, orientation }
}

pub fn random_orthogonal_j(n: usize, orientation: Sign, seed: u64) -> ComplexStructure {
    random_orthogonal_j_with(n, orientation, &mut ChaCha8Rng::seed_from_u64(seed))
}

/// Gaussian matrix with condition number at most `cond_bound`.
pub fn random_invertible(m: usize, cond_bound: f64, rng: &mut impl Rng) -> Result<Mat> {
    assert!(cond_bound > 1.0, "condition bound must exceed 1");
    for _ in 0..SAMPLING_BUDGET {
        let g = gaussian(m, rng);
        if Svd::new(&g).condition() <= cond_bound {
            return Ok(g);
        }
    }
    Err(Error::SamplingExhausted(SAMPLING_BUDGET))
}

/// `g J_b g⁻¹` for a Gaussian `g` with condition number at most `cond_bound`,
/// `J_b` chosen so that the result has the requested orientation.
pub fn random_general_j_with(
    n: usize,
    orientation: Sign,
    cond_bound: f64,
    rng: &mut impl Rng,
) -> Result<ComplexStructure> {
    assert!(n >= 1, "n must be at least 1");
    assert!(cond_bound > 1.0, "condition bound must exceed 1");
    let g = random_invertible(2 * n, cond_bound, rng)?;
    let base = base_structure(n, orientation * Sign::of(g.det()));
    ComplexStructure::new(&(&g * &base) * &g.inverse()?)
}

pub fn random_general_j(n: usize, orientation: Sign, seed: u64, cond_bound: f64) -> Result<ComplexStructure> {
    random_general_j_with(n, orientation, cond_bound, &mut ChaCha8Rng::seed_from_u64(seed))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::structures::{is_complex_structure, orientation_of};

    #[test]
    fn haar_is_special_orthogonal() {
        let mut rng = trial_rng(1, 0);
        for m in [2, 3, 6] {
            let q = haar_orthogonal(m, &mut rng);
            assert!((&q.transpose() * &q).approx_eq(&Mat::identity(m), 1e-12));
            assert!((q.det() - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn orthogonal_samples_are_valid() {
        for seed in 0..20 {
            for (n, o) in [(1, Sign::Plus), (2, Sign::Minus), (3, Sign::Minus), (4, Sign::Plus)] {
                let j = random_orthogonal_j(n, o, seed);
                assert!(is_complex_structure(j.matrix(), 1e-10).unwrap());
                assert!(j.orthogonality_residual() < 1e-10);
                assert_eq!(orientation_of(j.matrix()), o);
            }
        }
    }

    #[test]
    fn negative_orientation_on_the_plane_is_minus_j0() {
        let j = random_orthogonal_j(1, Sign::Minus, 99);
        assert!(j.matrix().approx_eq(&(-standard_j(1).matrix()), 1e-12));
    }

    #[test]
    fn sampling_is_deterministic() {
        assert_eq!(random_orthogonal_j(3, Sign::Plus, 5), random_orthogonal_j(3, Sign::Plus, 5));
        assert_ne!(random_orthogonal_j(3, Sign::Plus, 5), random_orthogonal_j(3, Sign::Plus, 6));
        let a = random_general_j(2, Sign::Minus, 5, 50.0).unwrap();
        let b = random_general_j(2, Sign::Minus, 5, 50.0).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn general_samples_have_requested_orientation() {
        for seed in 0..100 {
            let o = if seed % 2 == 0 { Sign::Plus } else { Sign::Minus };
            let j = random_general_j(3, o, seed, 50.0).unwrap();
            assert_eq!(orientation_of(j.matrix()), o, "seed {seed}");
            let tol = 1e-12 * 50.0 * 50.0 * 6.0;
            assert!(is_complex_structure(j.matrix(), tol).unwrap());
        }
    }

    #[test]
    fn tight_condition_bound_gives_nearly_orthogonal_output() {
        // With cond(g) ≤ c the structure deviates from orthogonality by at most
        // c² - 1 in operator norm.
        for seed in 0..20 {
            let j = random_general_j(1, Sign::Plus, seed, 1.05).unwrap();
            assert!(j.orthogonality_residual() < 1.05f64.powi(4) - 1.0 + 1e-12);
        }
    }
}

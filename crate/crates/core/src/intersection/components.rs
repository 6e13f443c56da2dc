use serde::{Deserialize, Serialize};

use super::RelOrientation;
use crate::structures::PairSignature;

/// One connected component of the jointly stabilised `2k`-planes of an
/// orthogonal pair: a product of Grassmannians
/// `Gr^H_{t₁}(H^{r₁}) × ⋯ × Gr^C_{ℓ′}(C^ℓ) × Gr^C_{s′}(C^s)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct IntersectionComponent {
    /// Quaternionic dimension `tᵢ` chosen in each `H_{θᵢ}^{rᵢ}`.
    pub t: Vec<usize>,
    pub l_prime: usize,
    pub s_prime: usize,
    pub real_dim: usize,
    pub orientation_class: RelOrientation,
}

impl IntersectionComponent {
    pub fn is_point(&self) -> bool {
        self.real_dim == 0
    }
}

/// All index tuples with `2Σtᵢ + ℓ′ + s′ = k`.
pub fn enumerate_components_orthogonal(sig: &PairSignature, k: usize) -> Vec<IntersectionComponent> {
    let mults: Vec<usize> = sig.blocks.iter().map(|b| b.mult).collect();
    let mut out = Vec::new();
    let mut t = Vec::with_capacity(mults.len());
    recurse(&mults, sig.l, sig.s, k, &mut t, &mut out);
    out
}

fn recurse(
    mults: &[usize],
    l: usize,
    s: usize,
    remaining: usize,
    t: &mut Vec<usize>,
    out: &mut Vec<IntersectionComponent>,
) {
    if t.len() < mults.len() {
        let r = mults[t.len()];
        for ti in 0..=r.min(remaining / 2) {
            t.push(ti);
            recurse(mults, l, s, remaining - 2 * ti, t, out);
            t.pop();
        }
        return;
    }
    for l_prime in 0..=l.min(remaining) {
        let s_prime = remaining - l_prime;
        if s_prime > s {
            continue;
        }
        let quat: usize = t.iter().zip(mults).map(|(&ti, &r)| 4 * ti * (r - ti)).sum();
        let real_dim = quat + 2 * l_prime * (l - l_prime) + 2 * s_prime * (s - s_prime);
        out.push(IntersectionComponent {
            t: t.clone(),
            l_prime,
            s_prime,
            real_dim,
            orientation_class: RelOrientation::from_parity(s_prime % 2 == 1),
        });
    }
}

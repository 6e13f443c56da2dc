use proptest::prelude::*;

use cxint::counts::{s_recursive, sigma};
use cxint::intersection::{common_invariant_planes, IntersectionOptions, RawCount};
use cxint::structures::{
    classify_orthogonal_pair, construct_canonical_pair, haar_orthogonal, trial_rng, AngleBlock, PairSignature,
    DEFAULT_CLUSTER_TOL,
};

fn signature() -> impl Strategy<Value = PairSignature> {
    (0usize..=2, 0usize..=2, 0usize..=2, 0.2f64..1.4, 1.6f64..2.9).prop_filter_map(
        "empty",
        |(r, l, s, t1, t2)| {
            let blocks = match r {
                0 => vec![],
                1 => vec![AngleBlock { theta: t1, mult: 1 }],
                _ => vec![AngleBlock { theta: t1, mult: 1 }, AngleBlock { theta: t2, mult: 1 }],
            };
            PairSignature::new(blocks, l, s).ok()
        },
    )
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn recursion_agrees_with_closed_form(n in 0i64..40, k in -2i64..42) {
        prop_assert_eq!(s_recursive(k, n), sigma(k, n));
    }

    #[test]
    fn classification_is_conjugation_invariant(sig in signature(), seed in any::<u64>()) {
        let pair = construct_canonical_pair(&sig).unwrap();
        let g = haar_orthogonal(sig.dim(), &mut trial_rng(seed, 0));
        let got = classify_orthogonal_pair(&pair.conjugate(&g).unwrap(), DEFAULT_CLUSTER_TOL).unwrap();
        prop_assert!(got.approx_eq(&sig, 1e-9), "{:?} vs {:?}", got, sig);
    }

    #[test]
    fn canonical_counts_are_finite_without_repeated_summands(sig in signature(), k in 1usize..=6) {
        prop_assume!(k <= sig.n() && sig.l <= 1 && sig.s <= 1);
        let pair = construct_canonical_pair(&sig).unwrap();
        let r = common_invariant_planes(&pair, k, &IntersectionOptions::default()).unwrap();
        prop_assert!(matches!(r.raw_count_same, RawCount::Finite(_)));
        prop_assert_eq!(r.raw_count_same.finite().unwrap() + r.raw_count_opposite.finite().unwrap(), r.isolated_points.len());
    }
}

use cxint::counts::{expected_counts, expected_signed_counts, sigma};
use cxint::experiments::{
    run_trials, verify_conjugation_invariance, Conjugator, ExperimentConfig, Mode, PairKind, TrialStatus,
};
use cxint::intersection::{
    common_invariant_planes, IntersectionOptions, IntersectionReport, Method, RawCount, RelOrientation,
};
use cxint::io::{pair_to_json, parse_pair};
use cxint::structures::{construct_canonical_pair, random_orthogonal_j, AngleBlock, PairSignature, Sign};
use cxint::StructurePair;

fn line_and_antiline() -> StructurePair {
    construct_canonical_pair(&PairSignature::new(vec![], 1, 1).unwrap()).unwrap()
}

#[test]
fn opposite_lines_in_r4_carry_opposite_signs() {
    // Reversing orientation acts on H₂(Gr₂⁺(R⁴)) = H₂(S² × S²) by -1, so the
    // reversed copy of the second Grassmannian meets the first with the
    // opposite intersection number. The two points cannot both count +1.
    let r = common_invariant_planes(&line_and_antiline(), 1, &IntersectionOptions::default()).unwrap();
    let same: Vec<_> = r.points_with(RelOrientation::Same).collect();
    let opposite: Vec<_> = r.points_with(RelOrientation::Opposite).collect();
    assert_eq!((same.len(), opposite.len()), (1, 1));
    assert_eq!(same[0].local_sign, Some(Sign::Minus));
    assert_eq!(opposite[0].local_sign, Some(Sign::Plus));
    assert_eq!(expected_signed_counts(false, 2, 1).same, -1);
}

#[test]
fn orth_opposite_odd_n_gives_one_opposite_line() {
    let report = run_trials(&ExperimentConfig::new(Mode::OrthOpposite, 3, 1, 100, 11)).unwrap();
    assert_eq!(report.pass_count, 100, "{}", report.summary());
    for t in &report.trials {
        assert_eq!(t.raw_same, Some(RawCount::Finite(0)));
        assert_eq!(t.raw_opposite, Some(RawCount::Finite(1)));
    }
}

#[test]
fn general_same_lines_in_r4_cancel() {
    let report = run_trials(&ExperimentConfig::new(Mode::GeneralSame, 2, 1, 200, 12)).unwrap();
    assert_eq!(report.fail_count, 0, "{}", report.summary());
    for t in report.trials.iter().filter(|t| t.status == TrialStatus::Pass) {
        assert_eq!(t.signed_same, Some(0));
        assert!(matches!(t.raw_same, Some(RawCount::Finite(0 | 2))), "{t:?}");
    }
}

#[test]
fn general_opposite_signed_counts_are_stable() {
    for (n, k) in [(2, 1), (2, 2), (3, 1), (3, 2), (4, 1), (4, 2), (4, 3)] {
        let report = run_trials(&ExperimentConfig::new(Mode::GeneralOpposite, n, k, 40, 13)).unwrap();
        assert_eq!(report.fail_count, 0, "n={n} k={k}\n{}", report.summary());
        assert!(report.skipped_count < 4, "n={n} k={k}\n{}", report.summary());
    }
}

#[test]
fn runs_are_deterministic() {
    let config = ExperimentConfig::new(Mode::GeneralSame, 3, 2, 30, 99);
    let (a, b) = (run_trials(&config).unwrap(), run_trials(&config).unwrap());
    assert_eq!(a.trials, b.trials);
    assert!(a.trials.windows(2).all(|w| w[0].index < w[1].index));
}

#[test]
fn invertible_conjugation_keeps_signed_counts() {
    for seed in 0..10 {
        let kind = PairKind::General { cond_bound: 20.0 };
        let ok = verify_conjugation_invariance(seed, seed + 100, 3, 1, kind, Conjugator::Invertible { cond_bound: 20.0 });
        assert!(ok.unwrap(), "seed {seed}");
    }
}

#[test]
fn counts_split_matches_the_table() {
    for n in 1..=6i64 {
        for k in 1..=n {
            let same = expected_counts(true, n, k);
            assert_eq!((same.same, same.opposite), (sigma(k, n), 0));
            let opp = expected_counts(false, n, k);
            assert_eq!(opp.same + opp.opposite, sigma(k, n) * (n % 2) + (sigma(k, n - 1) + sigma(k - 1, n - 1)) * (1 - n % 2));
        }
    }
}

#[test]
fn report_json_round_trips() {
    let sig = PairSignature::new(vec![AngleBlock { theta: 0.7, mult: 1 }], 1, 0).unwrap();
    let pair = construct_canonical_pair(&sig).unwrap();
    let r = common_invariant_planes(&pair, 2, &IntersectionOptions::default()).unwrap();
    let text = serde_json::to_string(&r).unwrap();
    let back: IntersectionReport = serde_json::from_str(&text).unwrap();
    assert_eq!(back, r);
    assert_eq!(parse_pair(&pair_to_json(&pair)).unwrap(), pair);
}

#[test]
fn equal_structures_report_infinite_counts() {
    let j = random_orthogonal_j(3, Sign::Plus, 4);
    let pair = StructurePair::new(j.clone(), j).unwrap();
    for method in [Method::Signature, Method::Spectral] {
        let r = common_invariant_planes(&pair, 2, &IntersectionOptions { method, ..Default::default() }).unwrap();
        assert!(r.continuum && !r.generic);
        assert_eq!(r.raw_count_same, RawCount::Infinite);
    }
}

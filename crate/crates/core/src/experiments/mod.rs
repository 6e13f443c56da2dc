//! Seeded Monte Carlo checks of the intersection counts, invariance checks and
//! the four-dimensional non-transverse example.

mod r4;

use std::fmt;
use std::str::FromStr;
use std::time::Instant;

use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::counts::{expected_counts, expected_signed_counts, orthogonal_local_sign, ExpectedCounts};
use crate::error::{Error, Result};
use crate::intersection::{
    common_invariant_planes, IntersectionOptions, IntersectionReport, Method, RawCount, RelOrientation,
    DEFAULT_PLANE_TOL, DEFAULT_TRANS_TOL,
};
use crate::linalg::Mat;
use crate::structures::{
    haar_orthogonal, negate, random_general_j_with, random_invertible, random_orthogonal_j_with, trial_rng, Sign,
    StructurePair, DEFAULT_CLUSTER_TOL,
};

pub use r4::{example_r4, example_r4_boundary, BoundaryReport, R4Plane, R4Report, SAFE_INTERVAL};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Mode {
    OrthSame,
    OrthOpposite,
    GeneralSame,
    GeneralOpposite,
}

impl Mode {
    pub const ALL: [Mode; 4] = [Mode::OrthSame, Mode::OrthOpposite, Mode::GeneralSame, Mode::GeneralOpposite];

    pub fn is_orthogonal(self) -> bool {
        matches!(self, Mode::OrthSame | Mode::OrthOpposite)
    }

    pub fn same_orientation(self) -> bool {
        matches!(self, Mode::OrthSame | Mode::GeneralSame)
    }

    pub fn name(self) -> &'static str {
        match self {
            Mode::OrthSame => "orth-same",
            Mode::OrthOpposite => "orth-opposite",
            Mode::GeneralSame => "general-same",
            Mode::GeneralOpposite => "general-opposite",
        }
    }
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Mode {
    type Err = Error;
    fn from_str(s: &str) -> Result<Mode> {
        Mode::ALL
            .into_iter()
            .find(|m| m.name() == s)
            .ok_or_else(|| Error::Parse(format!("unknown mode {s:?}")))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentConfig {
    pub mode: Mode,
    pub n: usize,
    pub k: usize,
    pub trials: usize,
    pub seed: u64,
    pub tol: f64,
    pub cluster_tol: f64,
    pub trans_tol: f64,
    /// Condition bound for the conjugators of general modes.
    pub cond_bound: f64,
}

impl ExperimentConfig {
    pub fn new(mode: Mode, n: usize, k: usize, trials: usize, seed: u64) -> Self {
        ExperimentConfig {
            mode,
            n,
            k,
            trials,
            seed,
            tol: DEFAULT_PLANE_TOL,
            cluster_tol: DEFAULT_CLUSTER_TOL,
            trans_tol: DEFAULT_TRANS_TOL,
            cond_bound: 50.0,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.k == 0 || self.k > self.n {
            return Err(Error::InvalidArgument(format!("need 1 <= k <= n, got k={} n={}", self.k, self.n)));
        }
        if self.trials == 0 {
            return Err(Error::InvalidArgument("trials must be at least 1".into()));
        }
        if !(self.cond_bound > 1.0) {
            return Err(Error::InvalidArgument("condition bound must exceed 1".into()));
        }
        Ok(())
    }

    fn options(&self) -> IntersectionOptions {
        IntersectionOptions {
            tol: self.tol,
            cluster_tol: self.cluster_tol,
            trans_tol: self.trans_tol,
            method: Method::Auto,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum TrialStatus {
    Pass,
    Fail,
    Skipped,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrialOutcome {
    pub index: usize,
    pub status: TrialStatus,
    pub raw_same: Option<RawCount>,
    pub raw_opposite: Option<RawCount>,
    pub signed_same: Option<i64>,
    pub signed_opposite: Option<i64>,
    pub all_transverse: bool,
    /// Local signs of the isolated planes, same-oriented ones first.
    pub signs: Vec<i64>,
    pub message: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentReport {
    pub config: ExperimentConfig,
    pub expected: ExpectedCounts,
    pub expected_signed: ExpectedCounts,
    pub trials: Vec<TrialOutcome>,
    pub pass_count: usize,
    pub fail_count: usize,
    pub skipped_count: usize,
    pub duration_secs: f64,
}

impl ExperimentReport {
    pub fn all_passed(&self) -> bool {
        self.fail_count == 0
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::to_value(self).expect("report serialises")
    }

    /// Human-readable summary: a header line and one row per distinct outcome.
    pub fn summary(&self) -> String {
        let c = &self.config;
        let mut out = format!(
            "mode {} n={} k={} seed={}: {}/{} pass, {} fail, {} skipped ({:.2}s)\n",
            c.mode,
            c.n,
            c.k,
            c.seed,
            self.pass_count,
            c.trials,
            self.fail_count,
            self.skipped_count,
            self.duration_secs
        );
        out.push_str(&format!(
            "expected counts (same, opposite) = ({}, {}), signed = ({}, {})\n",
            self.expected.same, self.expected.opposite, self.expected_signed.same, self.expected_signed.opposite
        ));
        let mut rows: Vec<(String, usize)> = Vec::new();
        for t in &self.trials {
            let show = |r: Option<RawCount>| r.map_or("-".to_string(), |r| r.to_string());
            let signed = |s: Option<i64>| s.map_or("-".to_string(), |s| s.to_string());
            let key = format!(
                "{:<7} raw ({}, {}) signed ({}, {})",
                format!("{:?}", t.status).to_lowercase(),
                show(t.raw_same),
                show(t.raw_opposite),
                signed(t.signed_same),
                signed(t.signed_opposite)
            );
            match rows.iter_mut().find(|r| r.0 == key) {
                Some(r) => r.1 += 1,
                None => rows.push((key, 1)),
            }
        }
        for (key, count) in rows {
            out.push_str(&format!("  {count:>5} x {key}\n"));
        }
        out
    }
}

/// Samples a pair of the kind the mode asks for.
pub fn sample_pair(mode: Mode, n: usize, cond_bound: f64, rng: &mut impl Rng) -> Result<StructurePair> {
    match mode {
        Mode::OrthSame | Mode::OrthOpposite => {
            let o1 = if mode == Mode::OrthSame { Sign::Plus } else { Sign::Minus };
            let j0 = random_orthogonal_j_with(n, Sign::Plus, rng);
            let j1 = random_orthogonal_j_with(n, o1, rng);
            StructurePair::new(j0, j1)
        }
        Mode::GeneralSame => {
            let j0 = random_general_j_with(n, Sign::Plus, cond_bound, rng)?;
            let j1 = random_general_j_with(n, Sign::Plus, cond_bound, rng)?;
            StructurePair::new(j0, j1)
        }
        Mode::GeneralOpposite => {
            let j0 = random_general_j_with(n, Sign::Plus, cond_bound, rng)?;
            let j1 = random_general_j_with(n, Sign::Plus, cond_bound, rng)?;
            let j1 = if n % 2 == 1 {
                negate(&j1)
            } else {
                let mut r = Mat::identity(2 * n);
                r[(0, 0)] = -1.0;
                crate::structures::conjugate(&j1, &r)?
            };
            StructurePair::new(j0, j1)
        }
    }
}

fn outcome_from_report(config: &ExperimentConfig, index: usize, r: &IntersectionReport) -> TrialOutcome {
    let signs: Vec<i64> = r
        .points_with(RelOrientation::Same)
        .chain(r.points_with(RelOrientation::Opposite))
        .map(|p| p.local_sign.map_or(0, Sign::value))
        .collect();
    let mut outcome = TrialOutcome {
        index,
        status: TrialStatus::Pass,
        raw_same: Some(r.raw_count_same),
        raw_opposite: Some(r.raw_count_opposite),
        signed_same: r.signed_count_same,
        signed_opposite: r.signed_count_opposite,
        all_transverse: r.all_transverse(),
        signs,
        message: None,
    };
    let (n, k) = (config.n as i64, config.k as i64);
    let fail = |o: &mut TrialOutcome, msg: String| {
        o.status = TrialStatus::Fail;
        o.message = Some(msg);
    };
    if config.mode.is_orthogonal() {
        let want_raw = (RawCount::Finite(r.expected_same as usize), RawCount::Finite(r.expected_opposite as usize));
        if (r.raw_count_same, r.raw_count_opposite) != want_raw {
            fail(&mut outcome, format!("raw counts ({}, {})", r.raw_count_same, r.raw_count_opposite));
        } else if !r.all_transverse() {
            fail(&mut outcome, "non-transverse point".into());
        } else {
            let bad = r.isolated_points.iter().find(|p| {
                let same = p.relative_orientation == RelOrientation::Same;
                let want = orthogonal_local_sign(r.same_orientation_pair, same, n, k);
                p.local_sign.map(Sign::value) != Some(want)
            });
            if bad.is_some() {
                fail(&mut outcome, "unexpected local sign".into());
            }
        }
        return outcome;
    }
    if !r.generic {
        outcome.status = TrialStatus::Skipped;
        outcome.message = Some(if r.continuum { "continuum".into() } else { "non-transverse point".into() });
        return outcome;
    }
    let signed = (r.signed_count_same.unwrap_or(0), r.signed_count_opposite.unwrap_or(0));
    let raw = (r.raw_count_same.finite().unwrap_or(0) as i64, r.raw_count_opposite.finite().unwrap_or(0) as i64);
    if signed != (r.expected_signed_same, r.expected_signed_opposite) {
        fail(&mut outcome, format!("signed counts ({}, {})", signed.0, signed.1));
    } else if raw.0 < r.expected_signed_same.abs() || raw.1 < r.expected_signed_opposite.abs() {
        fail(&mut outcome, "fewer planes than the intersection number".into());
    } else if (raw.0 - r.expected_signed_same) % 2 != 0 || (raw.1 - r.expected_signed_opposite) % 2 != 0 {
        fail(&mut outcome, "excess planes do not come in pairs".into());
    }
    outcome
}

fn run_one(config: &ExperimentConfig, index: usize) -> TrialOutcome {
    let skipped = |msg: String| TrialOutcome {
        index,
        status: TrialStatus::Skipped,
        raw_same: None,
        raw_opposite: None,
        signed_same: None,
        signed_opposite: None,
        all_transverse: false,
        signs: vec![],
        message: Some(msg),
    };
    let mut rng = trial_rng(config.seed, index as u64);
    let pair = match sample_pair(config.mode, config.n, config.cond_bound, &mut rng) {
        Ok(p) => p,
        Err(e) => return TrialOutcome { status: TrialStatus::Fail, ..skipped(e.to_string()) },
    };
    match common_invariant_planes(&pair, config.k, &config.options()) {
        Ok(r) => outcome_from_report(config, index, &r),
        Err(e @ (Error::NonGenericSpectrum(_) | Error::ClusterAmbiguity(_))) => skipped(e.to_string()),
        Err(e) => TrialOutcome { status: TrialStatus::Fail, ..skipped(e.to_string()) },
    }
}

/// Runs `config.trials` independent trials in parallel. Trial `i` draws from
/// its own stream of the master seed, so the report does not depend on
/// scheduling.
pub fn run_trials(config: &ExperimentConfig) -> Result<ExperimentReport> {
    config.validate()?;
    let start = Instant::now();
    let trials: Vec<TrialOutcome> = (0..config.trials).into_par_iter().map(|i| run_one(config, i)).collect();
    let count = |s: TrialStatus| trials.iter().filter(|t| t.status == s).count();
    let (n, k) = (config.n as i64, config.k as i64);
    let same = config.mode.same_orientation();
    Ok(ExperimentReport {
        config: config.clone(),
        expected: expected_counts(same, n, k),
        expected_signed: expected_signed_counts(same, n, k),
        pass_count: count(TrialStatus::Pass),
        fail_count: count(TrialStatus::Fail),
        skipped_count: count(TrialStatus::Skipped),
        trials,
        duration_secs: start.elapsed().as_secs_f64(),
    })
}

/// How the pair for an invariance check is drawn.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum PairKind {
    /// Orthogonal structures with a random relative orientation.
    Orthogonal,
    /// Conjugates of orthogonal structures by Gaussian matrices.
    General { cond_bound: f64 },
}

/// The map both structures are conjugated by.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum Conjugator {
    Identity,
    /// Haar-random rotation.
    Orthogonal,
    /// Gaussian matrix of bounded condition number.
    Invertible { cond_bound: f64 },
}

fn invariance_pair(kind: PairKind, n: usize, seed: u64) -> Result<StructurePair> {
    let mut rng = trial_rng(seed, 0);
    let opposite: bool = rng.random();
    let mode = match (kind, opposite) {
        (PairKind::Orthogonal, false) => Mode::OrthSame,
        (PairKind::Orthogonal, true) => Mode::OrthOpposite,
        (PairKind::General { .. }, false) => Mode::GeneralSame,
        (PairKind::General { .. }, true) => Mode::GeneralOpposite,
    };
    let cond = match kind {
        PairKind::General { cond_bound } => cond_bound,
        PairKind::Orthogonal => 2.0,
    };
    sample_pair(mode, n, cond, &mut rng)
}

fn same_points(a: &IntersectionReport, b: &IntersectionReport, map: impl Fn(&Mat) -> Result<Mat>) -> Result<bool> {
    if a.isolated_points.len() != b.isolated_points.len() {
        return Ok(false);
    }
    for p in &a.isolated_points {
        let image = crate::intersection::OrientedPlane::from_span(&map(p.plane.frame())?, 1e-10)?;
        let matched = b.isolated_points.iter().any(|q| {
            q.plane.distance(&image) < 1e-6
                && q.relative_orientation == p.relative_orientation
                && q.local_sign == p.local_sign
        });
        if !matched {
            return Ok(false);
        }
    }
    Ok(true)
}

fn same_counts(a: &IntersectionReport, b: &IntersectionReport) -> bool {
    a.raw_count_same == b.raw_count_same
        && a.raw_count_opposite == b.raw_count_opposite
        && a.signed_count_same == b.signed_count_same
        && a.signed_count_opposite == b.signed_count_opposite
}

/// Whether conjugating both structures by `g` leaves counts, orientation
/// classes and local signs unchanged and maps each common plane `P` to `gP`.
pub fn verify_conjugation_invariance(
    pair_seed: u64,
    g_seed: u64,
    n: usize,
    k: usize,
    kind: PairKind,
    conjugator: Conjugator,
) -> Result<bool> {
    let pair = invariance_pair(kind, n, pair_seed)?;
    let mut rng = trial_rng(g_seed, 1);
    let g = match conjugator {
        Conjugator::Identity => Mat::identity(2 * n),
        Conjugator::Orthogonal => haar_orthogonal(2 * n, &mut rng),
        Conjugator::Invertible { cond_bound } => random_invertible(2 * n, cond_bound, &mut rng)?,
    };
    let moved = pair.conjugate(&g)?;
    let opts = IntersectionOptions::default();
    let before = common_invariant_planes(&pair, k, &opts)?;
    let after = common_invariant_planes(&moved, k, &opts)?;
    Ok(same_counts(&before, &after) && same_points(&before, &after, |f| Ok(&g * f))?)
}

/// Whether `(-J₀, -J₁)` has the same common planes with the same relative
/// orientations as `(J₀, J₁)`.
pub fn verify_negation_invariance(pair_seed: u64, n: usize, k: usize, kind: PairKind) -> Result<bool> {
    let pair = invariance_pair(kind, n, pair_seed)?;
    let opts = IntersectionOptions::default();
    let a = common_invariant_planes(&pair, k, &opts)?;
    let b = common_invariant_planes(&pair.negate(), k, &opts)?;
    if a.raw_count_same != b.raw_count_same || a.raw_count_opposite != b.raw_count_opposite {
        return Ok(false);
    }
    Ok(a.isolated_points.iter().all(|p| {
        b.isolated_points
            .iter()
            .any(|q| q.plane.distance(&p.plane) < 1e-6 && q.relative_orientation == p.relative_orientation)
    }))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn mode_names_round_trip() {
        for m in Mode::ALL {
            assert_eq!(m.name().parse::<Mode>().unwrap(), m);
            assert_eq!(serde_json::to_string(&m).unwrap(), format!("\"{}\"", m.name()));
        }
        assert!("orth".parse::<Mode>().is_err());
    }

    #[test]
    fn sampled_pairs_have_requested_orientation() {
        for mode in Mode::ALL {
            for n in 1..=4 {
                let mut rng = trial_rng(3, n as u64);
                let pair = sample_pair(mode, n, 50.0, &mut rng).unwrap();
                assert_eq!(pair.same_orientation, mode.same_orientation(), "{mode} n={n}");
                assert_eq!(pair.is_orthogonal, mode.is_orthogonal());
            }
        }
    }

    #[test]
    fn small_orthogonal_run() {
        let report = run_trials(&ExperimentConfig::new(Mode::OrthSame, 4, 2, 20, 7)).unwrap();
        assert_eq!(report.pass_count, 20, "{}", report.summary());
        assert!(report.trials.iter().all(|t| t.raw_same == Some(RawCount::Finite(2))));
    }

    #[test]
    fn identity_conjugation_is_invariant() {
        assert!(verify_conjugation_invariance(1, 2, 3, 1, PairKind::Orthogonal, Conjugator::Identity).unwrap());
    }

    #[test]
    fn invalid_config() {
        assert!(run_trials(&ExperimentConfig::new(Mode::OrthSame, 2, 3, 1, 0)).is_err());
        assert!(run_trials(&ExperimentConfig::new(Mode::OrthSame, 2, 1, 0, 0)).is_err());
    }
}

//! Incidence structures for three line families and multijoint queries.
//!
//! A multijoint is a point lying on at least one line from each family whose
//! chosen lines have linearly independent directions. The threshold variants
//! ask for transversal subcollections: per-family subsets of prescribed sizes
//! in which every cross triple spans. All decisions here are exact; the only
//! randomness is the seeded subsampling experiment, and even there survival of
//! each point is re-decided exactly per trial.

use std::collections::BTreeSet;

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::geom::{line_intersect, point_on_line, span3, Line3, LineIntersection, Point3};
use crate::rat::Rat;
use crate::search::{exists_transversal_subsets, SearchPolicy};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum IncidenceError {
    #[error("family {0} is empty")]
    EmptyFamily(usize),
    #[error("threshold for family {0} must be a positive integer")]
    InvalidThreshold(usize),
    #[error("transversal search budget exceeded; raise the exact search limit or allow heuristics")]
    SearchBudgetExceeded,
    #[error("threshold set is empty; nothing to subsample")]
    EmptyThresholdSet,
}

/// Three distinguished line families. Construction deduplicates each family
/// (lines compare as point sets) and rejects empty families.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "[Vec<Line3>; 3]", into = "[Vec<Line3>; 3]")]
pub struct LineFamilies {
    fams: [Vec<Line3>; 3],
}

impl LineFamilies {
    pub fn new(f1: Vec<Line3>, f2: Vec<Line3>, f3: Vec<Line3>) -> Result<Self, IncidenceError> {
        let mut fams = [f1, f2, f3];
        for (i, fam) in fams.iter_mut().enumerate() {
            if fam.is_empty() {
                return Err(IncidenceError::EmptyFamily(i + 1));
            }
            let mut seen: Vec<Line3> = Vec::with_capacity(fam.len());
            for line in fam.drain(..) {
                if seen.contains(&line) {
                    log::warn!("family {} repeats {:?}; keeping one copy", i + 1, line);
                } else {
                    seen.push(line);
                }
            }
            *fam = seen;
        }
        Ok(LineFamilies { fams })
    }

    pub fn family(&self, i: usize) -> &[Line3] {
        &self.fams[i]
    }

    pub fn sizes(&self) -> [usize; 3] {
        [self.fams[0].len(), self.fams[1].len(), self.fams[2].len()]
    }

    pub fn total(&self) -> usize {
        self.sizes().iter().sum()
    }
}

impl TryFrom<[Vec<Line3>; 3]> for LineFamilies {
    type Error = IncidenceError;

    fn try_from(value: [Vec<Line3>; 3]) -> Result<Self, Self::Error> {
        let [f1, f2, f3] = value;
        LineFamilies::new(f1, f2, f3)
    }
}

impl From<LineFamilies> for [Vec<Line3>; 3] {
    fn from(value: LineFamilies) -> Self {
        value.fams
    }
}

/// Candidate points together with, for every candidate, the indices of all
/// lines of each family passing through it.
#[derive(Clone, Debug)]
pub struct IncidenceStructure {
    families: LineFamilies,
    points: Vec<Point3>,
    through: Vec<[Vec<usize>; 3]>,
}

/// Candidate points are intersections of cross-family pairs; a point on one
/// line from each of three pairwise spanning directions always lies on such a
/// pair, so no multijoint is missed. Through-lists then rescan every family,
/// so same-family concurrences are recorded too.
pub fn build_incidences(families: &LineFamilies) -> IncidenceStructure {
    let mut candidates: BTreeSet<Point3> = BTreeSet::new();
    for i in 0..3 {
        for j in (i + 1)..3 {
            for a in families.family(i) {
                for b in families.family(j) {
                    if let LineIntersection::Point(p) = line_intersect(a, b) {
                        candidates.insert(p);
                    }
                }
            }
        }
    }
    let points: Vec<Point3> = candidates.into_iter().collect();
    let through = points
        .iter()
        .map(|p| {
            [0, 1, 2].map(|i| {
                families
                    .family(i)
                    .iter()
                    .enumerate()
                    .filter(|(_, l)| point_on_line(p, l))
                    .map(|(k, _)| k)
                    .collect()
            })
        })
        .collect();
    IncidenceStructure {
        families: families.clone(),
        points,
        through,
    }
}

impl IncidenceStructure {
    pub fn families(&self) -> &LineFamilies {
        &self.families
    }

    /// Candidate points in ascending lexicographic order.
    pub fn points(&self) -> &[Point3] {
        &self.points
    }

    /// Per-family indices of the lines through candidate `idx`.
    pub fn through(&self, idx: usize) -> &[Vec<usize>; 3] {
        &self.through[idx]
    }

    pub fn is_multijoint(&self, idx: usize) -> bool {
        let t = &self.through[idx];
        for &a in &t[0] {
            for &b in &t[1] {
                for &c in &t[2] {
                    if self.spans(a, b, c) {
                        return true;
                    }
                }
            }
        }
        false
    }

    /// Number of ordered spanning triples, one line per family, through
    /// candidate `idx`.
    pub fn multiplicity(&self, idx: usize) -> u64 {
        let t = &self.through[idx];
        let mut count = 0u64;
        for &a in &t[0] {
            for &b in &t[1] {
                for &c in &t[2] {
                    if self.spans(a, b, c) {
                        count += 1;
                    }
                }
            }
        }
        count
    }

    /// Whether candidate `idx` admits per-family subcollections of the given
    /// sizes in which every cross triple spans.
    pub fn has_transversal_subcollections(
        &self,
        idx: usize,
        thresholds: [u32; 3],
        policy: &SearchPolicy,
    ) -> Result<bool, IncidenceError> {
        validate_thresholds(thresholds)?;
        let t = &self.through[idx];
        let sizes = [t[0].len(), t[1].len(), t[2].len()];
        let quotas = [0, 1, 2].map(|i| thresholds[i] as usize);
        let mut ok = |a: usize, b: usize, c: usize| self.spans(t[0][a], t[1][b], t[2][c]);
        exists_transversal_subsets(sizes, quotas, &mut ok, policy)
            .map_err(|_| IncidenceError::SearchBudgetExceeded)
    }

    fn spans(&self, a: usize, b: usize, c: usize) -> bool {
        span3(
            self.families.family(0)[a].dir(),
            self.families.family(1)[b].dir(),
            self.families.family(2)[c].dir(),
        )
    }
}

/// All multijoints of the families, ascending lexicographic.
pub fn multijoints(families: &LineFamilies) -> Vec<Point3> {
    let inc = build_incidences(families);
    (0..inc.points().len())
        .filter(|&i| inc.is_multijoint(i))
        .map(|i| inc.points()[i].clone())
        .collect()
}

/// Whether the given subcollections are transversal at `x`: every cross
/// triple spans. All listed lines must pass through `x`.
pub fn is_transversal(x: &Point3, subsets: [&[Line3]; 3]) -> bool {
    debug_assert!(subsets
        .iter()
        .all(|fam| fam.iter().all(|l| point_on_line(x, l))));
    for a in subsets[0] {
        for b in subsets[1] {
            for c in subsets[2] {
                if !span3(a.dir(), b.dir(), c.dir()) {
                    return false;
                }
            }
        }
    }
    true
}

/// Result of a threshold query: the points admitting transversal
/// subcollections of the requested sizes.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ThresholdQuery {
    pub thresholds: [u32; 3],
    pub points: Vec<Point3>,
}

/// Points admitting per-family transversal subcollections of sizes at least
/// `thresholds`. Transversality is inherited by subsets, so searching for the
/// exact sizes is equivalent.
pub fn j_threshold(
    families: &LineFamilies,
    thresholds: [u32; 3],
    policy: &SearchPolicy,
) -> Result<ThresholdQuery, IncidenceError> {
    validate_thresholds(thresholds)?;
    let inc = build_incidences(families);
    let mut points = Vec::new();
    for idx in 0..inc.points().len() {
        if inc.has_transversal_subcollections(idx, thresholds, policy)? {
            points.push(inc.points()[idx].clone());
        }
    }
    Ok(ThresholdQuery { thresholds, points })
}

/// Outcome of a seeded subsampling experiment over a threshold set.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SamplingReport {
    pub thresholds: [u32; 3],
    pub trials: u32,
    pub seed: u64,
    /// Size of the threshold set being subsampled.
    pub threshold_count: usize,
    /// Fraction of (point, trial) pairs in which the point stayed a
    /// multijoint of the subsampled families.
    pub survival_fraction: Rat,
    /// Family sizes divided by thresholds: the expected subsample sizes.
    pub expected_sizes: [Rat; 3],
    /// Observed mean subsample size per family.
    pub mean_sizes: [Rat; 3],
}

/// Keeps each line of family `i` independently with probability `1/N_i` and
/// records how often threshold-set points survive as multijoints. Stream
/// `3 * trial + family` of a ChaCha8 generator seeded with `seed` drives the
/// decisions for one family in one trial, so reports are reproducible and
/// insensitive to evaluation order.
pub fn subsample_reduction(
    families: &LineFamilies,
    thresholds: [u32; 3],
    trials: u32,
    seed: u64,
    policy: &SearchPolicy,
) -> Result<SamplingReport, IncidenceError> {
    validate_thresholds(thresholds)?;
    assert!(trials > 0, "at least one trial");
    let inc = build_incidences(families);
    let mut members: Vec<usize> = Vec::new();
    for idx in 0..inc.points().len() {
        if inc.has_transversal_subcollections(idx, thresholds, policy)? {
            members.push(idx);
        }
    }
    if members.is_empty() {
        return Err(IncidenceError::EmptyThresholdSet);
    }
    // Spanning triples per member, precomputed once; survival per trial is
    // then a pure lookup against the keep masks.
    let spanning: Vec<Vec<[usize; 3]>> = members
        .iter()
        .map(|&idx| {
            let t = inc.through(idx);
            let mut list = Vec::new();
            for &a in &t[0] {
                for &b in &t[1] {
                    for &c in &t[2] {
                        if inc.spans(a, b, c) {
                            list.push([a, b, c]);
                        }
                    }
                }
            }
            list
        })
        .collect();
    let sizes = families.sizes();
    let mut survived: u64 = 0;
    let mut kept_totals = [0u64; 3];
    for trial in 0..trials {
        let mut keep: [Vec<bool>; 3] = [Vec::new(), Vec::new(), Vec::new()];
        for fam in 0..3 {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(3 * trial as u64 + fam as u64);
            keep[fam] = (0..sizes[fam])
                .map(|_| rng.gen_ratio(1, thresholds[fam]))
                .collect();
            kept_totals[fam] += keep[fam].iter().filter(|&&k| k).count() as u64;
        }
        for triples in &spanning {
            if triples
                .iter()
                .any(|&[a, b, c]| keep[0][a] && keep[1][b] && keep[2][c])
            {
                survived += 1;
            }
        }
    }
    let trials_rat = Rat::from_int(trials as i64);
    let survival_fraction = Rat::from_int(survived as i64)
        / (Rat::from_int(members.len() as i64) * trials_rat.clone());
    let expected_sizes =
        [0, 1, 2].map(|i| Rat::from_int(sizes[i] as i64) / Rat::from_int(thresholds[i] as i64));
    let mean_sizes = [0, 1, 2].map(|i| Rat::from_int(kept_totals[i] as i64) / trials_rat.clone());
    Ok(SamplingReport {
        thresholds,
        trials,
        seed,
        threshold_count: members.len(),
        survival_fraction,
        expected_sizes,
        mean_sizes,
    })
}

fn validate_thresholds(thresholds: [u32; 3]) -> Result<(), IncidenceError> {
    for (i, &n) in thresholds.iter().enumerate() {
        if n == 0 {
            return Err(IncidenceError::InvalidThreshold(i + 1));
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geom::Line3;

    fn line(p: (i64, i64, i64), d: (i64, i64, i64)) -> Line3 {
        Line3::through_ints(&Point3::from_ints(p.0, p.1, p.2), d.0, d.1, d.2).unwrap()
    }

    #[test]
    fn construction_validates_and_dedups() {
        let x = line((0, 0, 0), (1, 0, 0));
        let y = line((0, 0, 0), (0, 1, 0));
        let z = line((0, 0, 0), (0, 0, 1));
        assert_eq!(
            LineFamilies::new(vec![], vec![y.clone()], vec![z.clone()]),
            Err(IncidenceError::EmptyFamily(1))
        );
        // Same point set written with a different base and a scaled direction.
        let x_alias =
            Line3::through_ints(&Point3::from_ints(5, 0, 0), -3, 0, 0).unwrap();
        let fams =
            LineFamilies::new(vec![x.clone(), x_alias], vec![y], vec![z]).unwrap();
        assert_eq!(fams.sizes(), [1, 1, 1]);
        assert_eq!(fams.family(0), &[x]);
    }

    #[test]
    fn serde_rejects_empty_family() {
        let json = r#"[[{"base":[ "0/1","0/1","0/1"],"dir":["1/1","0/1","0/1"]}],[],[{"base":["0/1","0/1","0/1"],"dir":["0/1","0/1","1/1"]}]]"#;
        let got: Result<LineFamilies, _> = serde_json::from_str(json);
        assert!(got.is_err());
    }

    #[test]
    fn candidate_points_from_spec_shape() {
        // x-axis; the same direction shifted to z = 1; the z-axis. The two
        // parallel lines never meet, the shifted line meets the z-axis at
        // (0,0,1), the x-axis meets it at the origin.
        let fams = LineFamilies::new(
            vec![line((0, 0, 0), (1, 0, 0))],
            vec![line((0, 0, 1), (1, 0, 0))],
            vec![line((0, 0, 0), (0, 0, 1))],
        )
        .unwrap();
        let inc = build_incidences(&fams);
        assert_eq!(
            inc.points(),
            &[Point3::origin(), Point3::from_ints(0, 0, 1)]
        );
        // Origin: x-axis and z-axis only; no family-2 line.
        assert_eq!(inc.through(0), &[vec![0], vec![], vec![0]]);
        assert_eq!(inc.through(1), &[vec![], vec![0], vec![0]]);
        assert!(!inc.is_multijoint(0));
        assert!(!inc.is_multijoint(1));
        assert_eq!(multijoints(&fams), Vec::<Point3>::new());
    }

    #[test]
    fn axes_give_one_multijoint_of_multiplicity_one() {
        let fams = LineFamilies::new(
            vec![line((0, 0, 0), (1, 0, 0))],
            vec![line((0, 0, 0), (0, 1, 0))],
            vec![line((0, 0, 0), (0, 0, 1))],
        )
        .unwrap();
        let inc = build_incidences(&fams);
        assert_eq!(inc.points(), &[Point3::origin()]);
        assert!(inc.is_multijoint(0));
        assert_eq!(inc.multiplicity(0), 1);
        assert_eq!(multijoints(&fams), vec![Point3::origin()]);
    }

    #[test]
    fn coplanar_extra_line_adds_no_spanning_triples() {
        // Family 1 gains a second line through the origin whose direction
        // lies in the span of the other two families' directions, so the
        // multiplicity stays 1.
        let fams = LineFamilies::new(
            vec![line((0, 0, 0), (1, 0, 0)), line((0, 0, 0), (0, 1, 1))],
            vec![line((0, 0, 0), (0, 1, 0))],
            vec![line((0, 0, 0), (0, 0, 1))],
        )
        .unwrap();
        let inc = build_incidences(&fams);
        assert_eq!(inc.points(), &[Point3::origin()]);
        assert_eq!(inc.through(0), &[vec![0, 1], vec![0], vec![0]]);
        assert_eq!(inc.multiplicity(0), 1);
    }

    #[test]
    fn is_transversal_checks_every_cross_triple() {
        let o = Point3::origin();
        let lx = line((0, 0, 0), (1, 0, 0));
        let ly = line((0, 0, 0), (0, 1, 0));
        let lz = line((0, 0, 0), (0, 0, 1));
        let ldiag = line((0, 0, 0), (0, 1, 1));
        assert!(is_transversal(
            &o,
            [&[lx.clone()], &[ly.clone()], &[lz.clone()]]
        ));
        // (ldiag, ly, lz) is degenerate, so the enlarged first family fails.
        assert!(!is_transversal(
            &o,
            [&[lx.clone(), ldiag], &[ly.clone()], &[lz.clone()]]
        ));
        assert!(!is_transversal(&o, [&[lx.clone()], &[ly], &[lx]]));
    }

    #[test]
    fn threshold_validation_and_budget() {
        let fams = LineFamilies::new(
            vec![line((0, 0, 0), (1, 0, 0))],
            vec![line((0, 0, 0), (0, 1, 0))],
            vec![line((0, 0, 0), (0, 0, 1))],
        )
        .unwrap();
        assert_eq!(
            j_threshold(&fams, [1, 0, 1], &SearchPolicy::default()),
            Err(IncidenceError::InvalidThreshold(2))
        );
        let starving = SearchPolicy::exact(0);
        assert_eq!(
            j_threshold(&fams, [1, 1, 1], &starving),
            Err(IncidenceError::SearchBudgetExceeded)
        );
        let query = j_threshold(&fams, [1, 1, 1], &SearchPolicy::default()).unwrap();
        assert_eq!(query.points, vec![Point3::origin()]);
        assert_eq!(
            j_threshold(&fams, [2, 1, 1], &SearchPolicy::default())
                .unwrap()
                .points,
            Vec::<Point3>::new()
        );
    }

    #[test]
    fn subsampling_empty_threshold_set_is_an_error() {
        let fams = LineFamilies::new(
            vec![line((0, 0, 0), (1, 0, 0))],
            vec![line((0, 0, 1), (1, 0, 0))],
            vec![line((0, 0, 0), (0, 0, 1))],
        )
        .unwrap();
        assert_eq!(
            subsample_reduction(&fams, [1, 1, 1], 10, 7, &SearchPolicy::default()),
            Err(IncidenceError::EmptyThresholdSet)
        );
    }

    #[test]
    fn subsampling_with_unit_thresholds_keeps_everything() {
        let fams = LineFamilies::new(
            vec![line((0, 0, 0), (1, 0, 0))],
            vec![line((0, 0, 0), (0, 1, 0))],
            vec![line((0, 0, 0), (0, 0, 1))],
        )
        .unwrap();
        let report =
            subsample_reduction(&fams, [1, 1, 1], 8, 123, &SearchPolicy::default()).unwrap();
        assert_eq!(report.threshold_count, 1);
        assert_eq!(report.survival_fraction, Rat::one());
        assert_eq!(report.mean_sizes, report.expected_sizes);
    }

    #[test]
    fn subsampling_is_reproducible() {
        let fams = LineFamilies::new(
            vec![line((0, 0, 0), (1, 0, 0)), line((0, 0, 0), (1, 1, 0))],
            vec![line((0, 0, 0), (0, 1, 0)), line((0, 0, 0), (0, 1, 1))],
            vec![line((0, 0, 0), (0, 0, 1)), line((0, 0, 0), (1, 0, 1))],
        )
        .unwrap();
        let a = subsample_reduction(&fams, [2, 2, 2], 50, 9, &SearchPolicy::default()).unwrap();
        let b = subsample_reduction(&fams, [2, 2, 2], 50, 9, &SearchPolicy::default()).unwrap();
        assert_eq!(a, b);
        let c = subsample_reduction(&fams, [2, 2, 2], 50, 10, &SearchPolicy::default()).unwrap();
        assert_ne!(a.survival_fraction, c.survival_fraction);
    }
}

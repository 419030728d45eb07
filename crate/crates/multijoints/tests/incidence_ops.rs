//! Incidence queries against brute-force reference implementations.

use multijoints::geom::{Line3, Point3};
use multijoints::incidence::{
    build_incidences, j_threshold, multijoints, subsample_reduction, LineFamilies,
};
use multijoints::rat::Rat;
use multijoints::search::SearchPolicy;
use multijoints::testkit::{
    brute_force_j_threshold, brute_force_multijoints, brute_force_multiplicity,
};
use proptest::collection::vec;
use proptest::prelude::*;

fn line(p: (i64, i64, i64), d: (i64, i64, i64)) -> Line3 {
    Line3::through_ints(&Point3::from_ints(p.0, p.1, p.2), d.0, d.1, d.2).unwrap()
}

/// Axis-parallel grid: n^2 lines per family through the lattice cube.
fn grid_families(n: i64) -> LineFamilies {
    let mut f: [Vec<Line3>; 3] = [Vec::new(), Vec::new(), Vec::new()];
    for j in 0..n {
        for k in 0..n {
            f[0].push(line((0, j, k), (1, 0, 0)));
            f[1].push(line((j, 0, k), (0, 1, 0)));
            f[2].push(line((j, k, 0), (0, 0, 1)));
        }
    }
    let [f1, f2, f3] = f;
    LineFamilies::new(f1, f2, f3).unwrap()
}

/// Two lines per family through the origin with moment-curve directions
/// (1, t, t^2); any three distinct parameters span.
fn bush_families() -> LineFamilies {
    let d = |t: i64| (1, t, t * t);
    LineFamilies::new(
        vec![line((0, 0, 0), d(0)), line((0, 0, 0), d(1))],
        vec![line((0, 0, 0), d(2)), line((0, 0, 0), d(3))],
        vec![line((0, 0, 0), d(4)), line((0, 0, 0), d(5))],
    )
    .unwrap()
}

#[test]
fn grid_two_has_eight_multijoints_of_multiplicity_one() {
    let fams = grid_families(2);
    let want = brute_force_multijoints(&fams);
    assert_eq!(want.len(), 8);
    let got = multijoints(&fams);
    assert_eq!(got, want);
    let inc = build_incidences(&fams);
    for idx in 0..inc.points().len() {
        let p = &inc.points()[idx];
        let m = inc.multiplicity(idx);
        assert_eq!(m, brute_force_multiplicity(&fams, p));
        if got.contains(p) {
            assert_eq!(m, 1, "grid points lie on one line per family");
        }
    }
}

#[test]
fn bush_multiplicity_is_eight_and_survives_doubling_thresholds() {
    let fams = bush_families();
    let inc = build_incidences(&fams);
    assert_eq!(inc.points(), &[Point3::origin()]);
    assert_eq!(inc.multiplicity(0), 8);
    assert_eq!(brute_force_multiplicity(&fams, &Point3::origin()), 8);
    let q = j_threshold(&fams, [2, 2, 2], &SearchPolicy::default()).unwrap();
    assert_eq!(q.points, vec![Point3::origin()]);
    assert_eq!(brute_force_j_threshold(&fams, [2, 2, 2]), q.points);
    // The greedy fallback must find and verify the same witness.
    let greedy = j_threshold(&fams, [2, 2, 2], &SearchPolicy::heuristic(1)).unwrap();
    assert_eq!(greedy.points, q.points);
}

#[test]
fn bush_subsampling_matches_the_analytic_survival_rate() {
    // Keeping each of two lines with probability 1/2 leaves at least one per
    // family with probability 3/4, so survival is (3/4)^3 = 27/64.
    let fams = bush_families();
    let report =
        subsample_reduction(&fams, [2, 2, 2], 400, 20260815, &SearchPolicy::default()).unwrap();
    assert_eq!(report.threshold_count, 1);
    let expected = Rat::ratio(27, 64);
    let gap = (report.survival_fraction.clone() - expected).abs();
    assert!(
        gap < Rat::ratio(1, 10),
        "survival {} strays from 27/64",
        report.survival_fraction
    );
    assert_eq!(report.expected_sizes, [Rat::one(), Rat::one(), Rat::one()]);
}

fn arb_line() -> impl Strategy<Value = Line3> {
    // A small direction pool and tight base box force plenty of concurrences
    // and degeneracies.
    let dirs = prop_oneof![
        Just((1, 0, 0)),
        Just((0, 1, 0)),
        Just((0, 0, 1)),
        Just((1, 1, 0)),
        Just((0, 1, 1)),
        Just((1, 0, 1)),
        Just((1, 1, 1)),
        Just((1, 2, 3)),
    ];
    (dirs, -1..=1i64, -1..=1i64, -1..=1i64).prop_map(|((dx, dy, dz), x, y, z)| {
        Line3::through_ints(&Point3::from_ints(x, y, z), dx, dy, dz).unwrap()
    })
}

fn arb_families() -> impl Strategy<Value = LineFamilies> {
    (
        vec(arb_line(), 1..=3),
        vec(arb_line(), 1..=3),
        vec(arb_line(), 1..=3),
    )
        .prop_map(|(a, b, c)| LineFamilies::new(a, b, c).unwrap())
}

fn is_subset(small: &[Point3], big: &[Point3]) -> bool {
    small.iter().all(|p| big.contains(p))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn multijoints_match_oracle_and_unit_threshold(fams in arb_families()) {
        let mj = multijoints(&fams);
        prop_assert_eq!(&mj, &brute_force_multijoints(&fams));
        let unit = j_threshold(&fams, [1, 1, 1], &SearchPolicy::default()).unwrap();
        prop_assert_eq!(mj, unit.points);
    }

    #[test]
    fn thresholds_match_oracle(
        fams in arb_families(),
        n1 in 1u32..=2,
        n2 in 1u32..=2,
        n3 in 1u32..=2,
    ) {
        let q = [n1, n2, n3];
        let got = j_threshold(&fams, q, &SearchPolicy::default()).unwrap();
        prop_assert_eq!(got.points, brute_force_j_threshold(&fams, q));
    }

    #[test]
    fn multiplicities_match_oracle(fams in arb_families()) {
        let inc = build_incidences(&fams);
        for idx in 0..inc.points().len() {
            let p = &inc.points()[idx];
            prop_assert_eq!(inc.multiplicity(idx), brute_force_multiplicity(&fams, p));
            prop_assert_eq!(inc.is_multijoint(idx), inc.multiplicity(idx) > 0);
        }
    }

    #[test]
    fn threshold_sets_shrink_as_thresholds_grow(
        fams in arb_families(),
        n1 in 1u32..=2,
        n2 in 1u32..=2,
        n3 in 1u32..=2,
        bump in 0usize..3,
    ) {
        let q = [n1, n2, n3];
        let mut higher = q;
        higher[bump] += 1;
        let base = j_threshold(&fams, q, &SearchPolicy::default()).unwrap();
        let shrunk = j_threshold(&fams, higher, &SearchPolicy::default()).unwrap();
        prop_assert!(is_subset(&shrunk.points, &base.points));
    }

    #[test]
    fn pair_bound_holds_for_every_pair_of_families(
        fams in arb_families(),
        n1 in 1u32..=3,
        n2 in 1u32..=3,
        n3 in 1u32..=3,
    ) {
        let q = [n1, n2, n3];
        let count = j_threshold(&fams, q, &SearchPolicy::default()).unwrap().points.len() as u64;
        let sizes = fams.sizes();
        for i in 0..3 {
            for j in 0..3 {
                if i != j {
                    prop_assert!(
                        count * q[i] as u64 * q[j] as u64
                            <= (sizes[i] * sizes[j]) as u64,
                        "pair ({i}, {j}) violates the bound"
                    );
                }
            }
        }
    }
}

//! Cross-checks for the polynomial-algebra operations: hand-derived example
//! values plus algebraic invariants under random inputs.

use multijoints::geom::{Line3, Point3};
use multijoints::polyalg::{
    critical_line_census, gradient, is_critical_line, is_critical_point,
    line_zero_set_incidences, restrict_to_line, square_free_part, sturm_distinct_real_roots,
    sturm_distinct_real_roots_in, LineZeroSetIncidence, PolyError, TriPoly, UniPoly,
};
use multijoints::rat::Rat;
use proptest::prelude::*;

fn x() -> TriPoly {
    TriPoly::var(0)
}
fn y() -> TriPoly {
    TriPoly::var(1)
}
fn z() -> TriPoly {
    TriPoly::var(2)
}

fn line(p: (i64, i64, i64), d: (i64, i64, i64)) -> Line3 {
    Line3::through_ints(&Point3::from_ints(p.0, p.1, p.2), d.0, d.1, d.2).unwrap()
}

#[test]
fn square_free_part_strips_cubes() {
    // p = (x+y)^3 (z-1); the square-free part is (x+y)(z-1), built
    // independently by direct multiplication.
    let xy = x().add(&y());
    let zm1 = z().sub(&TriPoly::one());
    let p = xy.pow(3).mul(&zm1);
    let expected = xy.mul(&zm1).canonical();
    assert_eq!(square_free_part(&p).unwrap(), expected);
    // Idempotent on an already square-free polynomial.
    assert_eq!(square_free_part(&expected).unwrap(), expected);
    // Degenerate inputs.
    assert_eq!(
        square_free_part(&TriPoly::zero()),
        Err(PolyError::ZeroPolynomial)
    );
    assert_eq!(
        square_free_part(&TriPoly::constant(Rat::from_int(7))).unwrap(),
        TriPoly::one()
    );
}

#[test]
fn restriction_examples() {
    // p = xyz on the vertical line through (1,1,0): restriction is t.
    let p = x().mul(&y()).mul(&z());
    let l = line((1, 1, 0), (0, 0, 1));
    assert_eq!(restrict_to_line(&p, &l), UniPoly::var());
    assert_eq!(
        line_zero_set_incidences(&p, &l).unwrap(),
        LineZeroSetIncidence::Count(1)
    );
    // p = xy on the same line: restriction is the constant 1, no roots.
    let q = x().mul(&y());
    assert_eq!(restrict_to_line(&q, &l), UniPoly::one());
    assert_eq!(
        line_zero_set_incidences(&q, &l).unwrap(),
        LineZeroSetIncidence::Count(0)
    );
    // The x-axis lies inside Z(xy).
    assert_eq!(
        line_zero_set_incidences(&q, &line((0, 0, 0), (1, 0, 0))).unwrap(),
        LineZeroSetIncidence::Contained
    );
    assert_eq!(
        line_zero_set_incidences(&TriPoly::zero(), &l),
        Err(PolyError::ZeroPolynomial)
    );
}

#[test]
fn sturm_spec_example() {
    // (t-1)^2 (t+2) = t^3 - 3t + 2: two distinct real roots.
    let p = UniPoly::from_ints(&[2, -3, 0, 1]);
    assert_eq!(sturm_distinct_real_roots(&p).unwrap(), 2);
    assert_eq!(
        sturm_distinct_real_roots_in(&p, &Rat::from_int(0), &Rat::from_int(3)).unwrap(),
        1
    );
    assert_eq!(
        sturm_distinct_real_roots(&UniPoly::zero()),
        Err(PolyError::ZeroPolynomial)
    );
}

#[test]
fn critical_line_of_two_planes() {
    // Z(xy) is the union of two planes; its singular locus is the z-axis.
    let p = x().mul(&y());
    let z_axis = line((0, 0, 0), (0, 0, 1));
    let x_axis = line((0, 0, 0), (1, 0, 0));
    assert_eq!(is_critical_line(&p, &z_axis), Ok(true));
    // The x-axis lies in Z(xy) but d(xy)/dy = x does not vanish on it.
    assert_eq!(is_critical_line(&p, &x_axis), Ok(false));
    // A line outside the zero set is an error.
    let off = line((1, 1, 0), (0, 0, 1));
    assert_eq!(is_critical_line(&p, &off), Err(PolyError::LineNotInZeroSet));
    // Multiplicity in p does not change criticality: (xy)^2 has the same
    // square-free part.
    assert_eq!(is_critical_line(&p.pow(2), &z_axis), Ok(true));
}

#[test]
fn critical_point_examples() {
    // Origin is critical for Z(xy): gradient (y, x, 0) vanishes.
    let p = x().mul(&y());
    assert_eq!(is_critical_point(&p, &Point3::origin()), Ok(true));
    assert_eq!(is_critical_point(&p, &Point3::from_ints(1, 0, 0)), Ok(false));
    // Z(x^2) square-frees to the smooth plane Z(x): no critical points.
    assert_eq!(
        is_critical_point(&x().pow(2), &Point3::origin()),
        Ok(false)
    );
}

#[test]
fn census_on_three_plane_arrangement() {
    // p = x y (x - y), degree 3. Pairwise plane intersections all equal the
    // z-axis, which is the only critical line; the axes inside Z(p) are not
    // critical, and candidates outside Z(p) are skipped.
    let p = x().mul(&y()).mul(&x().sub(&y()));
    let z_axis = line((0, 0, 0), (0, 0, 1));
    let candidates = vec![
        z_axis.clone(),
        line((0, 0, 0), (1, 0, 0)),
        line((0, 0, 0), (0, 1, 0)),
        line((0, 0, 0), (1, 1, 0)),
        line((5, 5, 5), (1, 2, 3)),
        z_axis.clone(),
    ];
    let census = critical_line_census(&p, &candidates).unwrap();
    assert_eq!(census, vec![z_axis]);
    let d = p.degree() as usize;
    assert!(census.len() <= d * d);
}

#[test]
fn census_on_four_plane_arrangement() {
    // p = x y (x - y) z, degree 4: critical lines are the three axes and the
    // diagonal {x = y, z = 0} (each lies on >= 2 planes of the arrangement).
    let p = x().mul(&y()).mul(&x().sub(&y())).mul(&z());
    let mut candidates = vec![
        line((0, 0, 0), (1, 0, 0)),
        line((0, 0, 0), (0, 1, 0)),
        line((0, 0, 0), (0, 0, 1)),
        line((0, 0, 0), (1, 1, 0)),
        // Contained but only on one plane: not critical.
        line((0, 1, 0), (1, 0, 0)),
        // Not contained at all.
        line((1, 2, 3), (1, 1, 1)),
    ];
    candidates.reverse();
    let census = critical_line_census(&p, &candidates).unwrap();
    let expected: Vec<Line3> = {
        let mut v = vec![
            line((0, 0, 0), (1, 0, 0)),
            line((0, 0, 0), (0, 1, 0)),
            line((0, 0, 0), (0, 0, 1)),
            line((0, 0, 0), (1, 1, 0)),
        ];
        v.sort();
        v
    };
    assert_eq!(census, expected);
    assert!(census.len() <= (p.degree() as usize).pow(2));
}

#[test]
fn sphere_has_no_critical_lines() {
    // x^2 + y^2 + z^2 - 1: smooth, and contains no real line anyway.
    let p = x()
        .pow(2)
        .add(&y().pow(2))
        .add(&z().pow(2))
        .sub(&TriPoly::one());
    let candidates = vec![
        line((0, 0, 0), (1, 0, 0)),
        line((1, 0, 0), (0, 1, 0)),
        line((0, 0, 1), (1, 1, 0)),
    ];
    assert_eq!(critical_line_census(&p, &candidates).unwrap(), vec![]);
}

fn small_rat() -> impl Strategy<Value = Rat> {
    (-9i64..=9, 1i64..=3).prop_map(|(n, d)| Rat::ratio(n, d))
}

fn small_tripoly() -> impl Strategy<Value = TriPoly> {
    proptest::collection::vec(((0u32..3, 0u32..3, 0u32..3), small_rat()), 1..6)
        .prop_map(|terms| {
            TriPoly::from_terms(terms.into_iter().map(|((a, b, c), q)| (a, b, c, q)))
        })
}

fn small_line() -> impl Strategy<Value = Line3> {
    (
        (-4i64..=4, -4i64..=4, -4i64..=4),
        (-3i64..=3, -3i64..=3, -3i64..=3),
    )
        .prop_filter_map("nonzero direction", |(p, d)| {
            Line3::through_ints(&Point3::from_ints(p.0, p.1, p.2), d.0, d.1, d.2).ok()
        })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn restriction_is_additive_and_multiplicative(
        p in small_tripoly(),
        q in small_tripoly(),
        l in small_line(),
    ) {
        let rp = restrict_to_line(&p, &l);
        let rq = restrict_to_line(&q, &l);
        prop_assert_eq!(restrict_to_line(&p.add(&q), &l), rp.add(&rq));
        prop_assert_eq!(restrict_to_line(&p.mul(&q), &l), rp.mul(&rq));
    }

    #[test]
    fn restriction_agrees_with_pointwise_eval(p in small_tripoly(), l in small_line()) {
        let r = restrict_to_line(&p, &l);
        for t in [-2i64, 0, 1, 5] {
            let t = Rat::from_int(t);
            prop_assert_eq!(r.eval(&t), p.eval(&l.at(&t)));
        }
    }

    #[test]
    fn square_free_part_is_idempotent_and_kills_squares(p in small_tripoly()) {
        prop_assume!(!p.is_zero());
        let sf = square_free_part(&p).unwrap();
        prop_assert_eq!(square_free_part(&sf).unwrap(), sf.clone());
        prop_assert_eq!(square_free_part(&p.mul(&p)).unwrap(), sf);
    }

    #[test]
    fn incidence_count_bounded_by_degree(p in small_tripoly(), l in small_line()) {
        prop_assume!(!p.is_zero());
        match line_zero_set_incidences(&p, &l).unwrap() {
            LineZeroSetIncidence::Contained => {}
            LineZeroSetIncidence::Count(k) => prop_assert!(k <= p.degree() as usize),
        }
    }

    #[test]
    fn gradient_is_linear(p in small_tripoly(), q in small_tripoly()) {
        let gp = gradient(&p);
        let gq = gradient(&q);
        let gsum = gradient(&p.add(&q));
        prop_assert_eq!(gsum.dx, gp.dx.add(&gq.dx));
        prop_assert_eq!(gsum.dy, gp.dy.add(&gq.dy));
        prop_assert_eq!(gsum.dz, gp.dz.add(&gq.dz));
    }

    #[test]
    fn sturm_ignores_complex_factors(coeffs in proptest::collection::vec(small_rat(), 1..6)) {
        let u = UniPoly::new(coeffs);
        prop_assume!(!u.is_zero());
        // t^2 + 1 contributes no real roots.
        let boosted = u.mul(&UniPoly::from_ints(&[1, 0, 1]));
        prop_assert_eq!(
            sturm_distinct_real_roots(&u).unwrap(),
            sturm_distinct_real_roots(&boosted).unwrap()
        );
    }
}

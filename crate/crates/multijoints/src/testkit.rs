//! Reference implementations for tests, behind the `testkit` feature.
//!
//! Everything here trades speed for obviousness: exhaustive subset
//! enumeration instead of pruned search, Descartes bisection instead of Sturm
//! chains, schoolbook Euclid instead of primitive remainder sequences. The
//! point is to cross-check the fast paths against code with no shared logic.

use crate::geom::{line_intersect, point_on_line, span3, Line3, LineIntersection, Point3};
use crate::incidence::LineFamilies;
use crate::polyalg::UniPoly;
use crate::rat::Rat;

/// All points lying on one line per family with spanning directions, found by
/// trying every cross-family pair intersection and then every triple.
pub fn brute_force_multijoints(families: &LineFamilies) -> Vec<Point3> {
    let mut out: Vec<Point3> = Vec::new();
    for p in candidate_points(families) {
        if brute_force_multiplicity(families, &p) > 0 && !out.contains(&p) {
            out.push(p);
        }
    }
    out.sort();
    out
}

/// Number of ordered spanning triples through `x`, scanning the raw families.
pub fn brute_force_multiplicity(families: &LineFamilies, x: &Point3) -> u64 {
    let mut count = 0u64;
    for a in families.family(0) {
        if !point_on_line(x, a) {
            continue;
        }
        for b in families.family(1) {
            if !point_on_line(x, b) {
                continue;
            }
            for c in families.family(2) {
                if point_on_line(x, c) && span3(a.dir(), b.dir(), c.dir()) {
                    count += 1;
                }
            }
        }
    }
    count
}

/// Threshold set by bitmask enumeration of all per-family subsets of the
/// exact threshold sizes. Exponential in the family sizes; only for small
/// configurations.
pub fn brute_force_j_threshold(families: &LineFamilies, thresholds: [u32; 3]) -> Vec<Point3> {
    assert!(thresholds.iter().all(|&n| n > 0));
    assert!(families.sizes().iter().all(|&k| k <= 20));
    let mut out: Vec<Point3> = Vec::new();
    for p in candidate_points(families) {
        if out.contains(&p) {
            continue;
        }
        let through: Vec<Vec<&Line3>> = (0..3)
            .map(|i| {
                families
                    .family(i)
                    .iter()
                    .filter(|l| point_on_line(&p, l))
                    .collect()
            })
            .collect();
        let subsets = |fam: usize| -> Vec<Vec<&Line3>> {
            let lines = &through[fam];
            let want = thresholds[fam] as usize;
            let mut subs = Vec::new();
            for bits in 0u32..(1u32 << lines.len()) {
                if bits.count_ones() as usize == want {
                    subs.push(
                        (0..lines.len())
                            .filter(|i| bits >> i & 1 == 1)
                            .map(|i| lines[i])
                            .collect(),
                    );
                }
            }
            subs
        };
        'point: for sa in subsets(0) {
            for sb in subsets(1) {
                'sc: for sc in subsets(2) {
                    for a in &sa {
                        for b in &sb {
                            for c in &sc {
                                if !span3(a.dir(), b.dir(), c.dir()) {
                                    continue 'sc;
                                }
                            }
                        }
                    }
                    out.push(p.clone());
                    break 'point;
                }
            }
        }
    }
    out.sort();
    out
}

fn candidate_points(families: &LineFamilies) -> Vec<Point3> {
    let mut pts = Vec::new();
    for i in 0..3 {
        for j in 0..3 {
            if i == j {
                continue;
            }
            for a in families.family(i) {
                for b in families.family(j) {
                    if let LineIntersection::Point(p) = line_intersect(a, b) {
                        pts.push(p);
                    }
                }
            }
        }
    }
    pts
}

/// Number of distinct real roots, by Descartes bisection on the square-free
/// part. Independent of the Sturm machinery.
pub fn descartes_distinct_real_roots(p: &UniPoly) -> usize {
    assert!(!p.is_zero(), "zero polynomial has no root count");
    let q = monic(&naive_square_free(p));
    if q.degree() == Some(0) {
        return 0;
    }
    // Strict Cauchy bound: every root satisfies |r| < 1 + max |a_i / a_n|.
    let mut bound = Rat::one();
    for c in q.coeffs() {
        let m = (c / q.lead()).abs();
        if m > bound {
            bound = m;
        }
    }
    bound = bound + Rat::one();
    count_open(&q, &-bound.clone(), &bound)
}

/// Roots in the open interval, assuming `q` square-free.
fn count_open(q: &UniPoly, lo: &Rat, hi: &Rat) -> usize {
    match descartes_variations(q, lo, hi) {
        0 => 0,
        1 => 1,
        _ => {
            let mid = (lo + hi) / Rat::from_int(2);
            let at_mid = usize::from(q.eval(&mid).is_zero());
            at_mid + count_open(q, lo, &mid) + count_open(q, &mid, hi)
        }
    }
}

/// Sign variations of `(1+x)^n q(m(x))` where the Moebius map `m` sends
/// `(0, inf)` onto `(lo, hi)`. By Descartes' rule this bounds the number of
/// roots in the open interval, agrees with it mod 2, and is exact at 0 or 1.
fn descartes_variations(q: &UniPoly, lo: &Rat, hi: &Rat) -> usize {
    let unit = q.compose(&UniPoly::new(vec![lo.clone(), hi - lo]));
    let reversed = UniPoly::new(unit.coeffs().iter().rev().cloned().collect());
    let shifted = reversed.compose(&UniPoly::new(vec![Rat::one(), Rat::one()]));
    let mut vars = 0;
    let mut last = 0i8;
    for c in shifted.coeffs() {
        let s = c.sign();
        if s != 0 {
            if last != 0 && s != last {
                vars += 1;
            }
            last = s;
        }
    }
    vars
}

fn naive_square_free(p: &UniPoly) -> UniPoly {
    let g = naive_gcd(p, &p.derivative());
    p.exact_div(&g).expect("gcd divides")
}

fn naive_gcd(a: &UniPoly, b: &UniPoly) -> UniPoly {
    let (mut a, mut b) = (a.clone(), b.clone());
    while !b.is_zero() {
        let (_, r) = a.divrem(&b);
        a = b;
        b = r;
    }
    monic(&a)
}

fn monic(p: &UniPoly) -> UniPoly {
    if p.is_zero() {
        return p.clone();
    }
    p.scale(&p.lead().recip())
}

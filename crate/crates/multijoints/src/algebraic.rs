//! Exact real algebraic numbers.
//!
//! A value is either an exact rational or a certified-irrational root of a
//! square-free primitive integer polynomial together with an open isolating
//! interval (endpoints non-roots, exactly one root inside). All predicates
//! (ordering, sign, sign of a polynomial image) are decided exactly via gcds,
//! Sturm counts, and interval refinement; interval arithmetic is used only to
//! drive refinement, never as the final word on equality.

use std::cmp::Ordering;
use std::fmt;

use serde::{de, Deserialize, Deserializer, Serialize, Serializer};

use crate::polyalg::nested::{resultant, Poly, ZPoly};
use crate::polyalg::sturm::{self, RealRootLoc};
use crate::polyalg::{distinct_roots_in_open, isolate_real_roots, refine_window, UniPoly};
use crate::rat::Rat;

/// Errors constructing algebraic numbers from raw data.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum AlgebraicError {
    #[error("window does not isolate exactly one root")]
    InvalidWindow,
}

#[derive(Clone)]
enum Repr {
    Rational(Rat),
    /// Invariants: `poly` square-free, primitive integer coefficients,
    /// positive leading coefficient; `(lo, hi)` open, endpoints non-roots,
    /// exactly one root inside, and that root is irrational.
    Irrational { poly: UniPoly, lo: Rat, hi: Rat },
}

/// An exact real algebraic number.
#[derive(Clone)]
pub struct RealAlgebraic {
    repr: Repr,
}

impl RealAlgebraic {
    pub fn from_rat(r: Rat) -> Self {
        RealAlgebraic {
            repr: Repr::Rational(r),
        }
    }

    pub fn zero() -> Self {
        Self::from_rat(Rat::zero())
    }

    /// All distinct real roots of a nonzero polynomial, ascending. Rational
    /// roots come back as exact rationals.
    pub fn roots_of(p: &UniPoly) -> Vec<RealAlgebraic> {
        let iso = isolate_real_roots(p);
        iso.roots
            .into_iter()
            .map(|loc| match loc {
                RealRootLoc::Exact(r) => RealAlgebraic::from_rat(r),
                RealRootLoc::Window { lo, hi } => RealAlgebraic {
                    repr: Repr::Irrational {
                        poly: iso.poly.clone(),
                        lo,
                        hi,
                    },
                },
            })
            .collect()
    }

    /// Reconstructs a value from a defining polynomial and isolating window,
    /// validating the window and normalizing rational roots.
    pub fn from_defining_window(
        poly: &UniPoly,
        lo: Rat,
        hi: Rat,
    ) -> Result<Self, AlgebraicError> {
        if poly.is_zero() || lo >= hi {
            return Err(AlgebraicError::InvalidWindow);
        }
        let sf = poly.square_free();
        if sf.is_constant() || distinct_roots_in_open(&sf, &lo, &hi) != 1 {
            return Err(AlgebraicError::InvalidWindow);
        }
        match sturm::rational_in_window(&sf, lo, hi) {
            Ok(r) => Ok(RealAlgebraic::from_rat(r)),
            Err((lo, hi)) => Ok(RealAlgebraic {
                repr: Repr::Irrational { poly: sf, lo, hi },
            }),
        }
    }

    pub fn as_rational(&self) -> Option<&Rat> {
        match &self.repr {
            Repr::Rational(r) => Some(r),
            Repr::Irrational { .. } => None,
        }
    }

    pub fn is_rational(&self) -> bool {
        self.as_rational().is_some()
    }

    /// Defining polynomial for irrational values.
    pub fn defining_poly(&self) -> Option<&UniPoly> {
        match &self.repr {
            Repr::Rational(_) => None,
            Repr::Irrational { poly, .. } => Some(poly),
        }
    }

    /// Current isolating window for irrational values.
    pub fn window(&self) -> Option<(&Rat, &Rat)> {
        match &self.repr {
            Repr::Rational(_) => None,
            Repr::Irrational { lo, hi, .. } => Some((lo, hi)),
        }
    }

    /// An enclosing closed interval (degenerate for rationals).
    pub(crate) fn enclosure(&self) -> (Rat, Rat) {
        match &self.repr {
            Repr::Rational(r) => (r.clone(), r.clone()),
            Repr::Irrational { lo, hi, .. } => (lo.clone(), hi.clone()),
        }
    }

    /// -1, 0, or +1, decided exactly.
    pub fn sign(&self) -> i8 {
        match &self.repr {
            Repr::Rational(r) => r.sign(),
            Repr::Irrational { poly, lo, hi } => {
                if lo.sign() >= 0 {
                    return 1;
                }
                if hi.sign() <= 0 {
                    return -1;
                }
                // 0 in (lo, hi); the root is irrational so poly(0) != 0
                // (0 inside the window cannot be the window's root, and any
                // other root of poly lies outside the window).
                let zero = Rat::zero();
                if poly.eval(&zero).sign() == poly.eval(lo).sign() {
                    1
                } else {
                    -1
                }
            }
        }
    }

    pub fn is_zero(&self) -> bool {
        self.sign() == 0
    }

    /// Approximation for display and reports only.
    pub fn approx_f64(&self) -> f64 {
        match &self.repr {
            Repr::Rational(r) => r.to_f64(),
            Repr::Irrational { poly, lo, hi } => {
                let (mut lo, mut hi) = (lo.clone(), hi.clone());
                for _ in 0..80 {
                    if (&hi - &lo).to_f64() < 1e-14 * hi.to_f64().abs().max(1.0) {
                        break;
                    }
                    (lo, hi) = refine_window(poly, &lo, &hi);
                }
                ((lo + hi) / Rat::from_int(2)).to_f64()
            }
        }
    }

    /// Exact sign of `g` evaluated at this number.
    pub fn sign_of_poly(&self, g: &UniPoly) -> i8 {
        if g.is_zero() {
            return 0;
        }
        match &self.repr {
            Repr::Rational(r) => g.eval(r).sign(),
            Repr::Irrational { poly, lo, hi } => {
                // g(alpha) = 0 iff alpha is a root of gcd(poly, g), which
                // (being a root of poly in the window) it is iff the gcd has
                // a root in the window.
                let h = poly.gcd(g);
                if !h.is_constant() && distinct_roots_in_open(&h, lo, hi) >= 1 {
                    return 0;
                }
                // Otherwise g(alpha) != 0: refine until the interval image
                // of g has a determined sign.
                let (mut lo, mut hi) = (lo.clone(), hi.clone());
                loop {
                    let (glo, ghi) = interval_eval(g, &lo, &hi);
                    if glo.sign() > 0 {
                        return 1;
                    }
                    if ghi.sign() < 0 {
                        return -1;
                    }
                    (lo, hi) = refine_window(poly, &lo, &hi);
                }
            }
        }
    }

    /// The exact value `p(self)` as a real algebraic number.
    pub fn map_poly(&self, p: &UniPoly) -> RealAlgebraic {
        match &self.repr {
            Repr::Rational(r) => RealAlgebraic::from_rat(p.eval(r)),
            Repr::Irrational { poly, lo, hi } => {
                if p.is_constant() {
                    return RealAlgebraic::from_rat(p.coeff(0));
                }
                // Defining polynomial of p(alpha): Res_t(poly(t), v - p(t)),
                // computed over Z[v] after clearing p's denominators (the
                // scalar multiplies the resultant by a nonzero constant).
                let (p_ints, lambda) = p.clear_denominators();
                let f_t: Poly<ZPoly> = Poly::from_coeffs(
                    poly.primitive_integer()
                        .coeffs()
                        .iter()
                        .map(|c| ZPoly::constant(c.clone()))
                        .collect(),
                );
                let mut b_coeffs: Vec<ZPoly> =
                    p_ints.iter().map(|c| ZPoly::constant(-c)).collect();
                // Constant (in t) coefficient picks up the lambda*v term.
                let with_v = b_coeffs[0].add(&ZPoly::from_coeffs(vec![
                    num_bigint::BigInt::from(0),
                    lambda,
                ]));
                b_coeffs[0] = with_v;
                let b_t: Poly<ZPoly> = Poly::from_coeffs(b_coeffs);
                let d = UniPoly::from_zpoly(&resultant(&f_t, &b_t)).square_free();
                debug_assert!(!d.is_zero());
                locate_image(&d, p, poly, lo.clone(), hi.clone())
            }
        }
    }
}

/// Pins down which root of `d` equals `p(alpha)`, where `alpha` is the root
/// of `f` isolated by `(lo, hi)`.
fn locate_image(d: &UniPoly, p: &UniPoly, f: &UniPoly, mut lo: Rat, mut hi: Rat) -> RealAlgebraic {
    let iso = isolate_real_roots(d);
    let mut exacts: Vec<Rat> = Vec::new();
    let mut windows: Vec<(Rat, Rat)> = Vec::new();
    for loc in iso.roots {
        match loc {
            RealRootLoc::Exact(r) => exacts.push(r),
            RealRootLoc::Window { lo, hi } => windows.push((lo, hi)),
        }
    }
    loop {
        let (jlo, jhi) = interval_eval(p, &lo, &hi);
        // Candidate root regions of d meeting the closed image interval.
        let hit_exacts: Vec<&Rat> = exacts.iter().filter(|r| **r >= jlo && **r <= jhi).collect();
        let hit_windows: Vec<usize> = windows
            .iter()
            .enumerate()
            .filter(|(_, (wlo, whi))| wlo < &jhi && &jlo < whi)
            .map(|(i, _)| i)
            .collect();
        match (hit_exacts.len(), hit_windows.len()) {
            (1, 0) => return RealAlgebraic::from_rat(hit_exacts[0].clone()),
            (0, 1) => {
                let (wlo, whi) = windows[hit_windows[0]].clone();
                return RealAlgebraic {
                    repr: Repr::Irrational {
                        poly: iso.poly,
                        lo: wlo,
                        hi: whi,
                    },
                };
            }
            (0, 0) => unreachable!("p(alpha) is a root of its resultant"),
            _ => {
                // Ambiguous: shrink everything and retry.
                (lo, hi) = refine_window(f, &lo, &hi);
                for w in windows.iter_mut() {
                    let (a, b) = refine_window(&iso.poly, &w.0, &w.1);
                    *w = (a, b);
                }
            }
        }
    }
}

/// Closed interval image bounds of `p` over `[lo, hi]` by interval Horner.
pub(crate) fn interval_eval(p: &UniPoly, lo: &Rat, hi: &Rat) -> (Rat, Rat) {
    let mut alo = Rat::zero();
    let mut ahi = Rat::zero();
    for c in p.coeffs().iter().rev() {
        // [alo, ahi] * [lo, hi] + c
        let products = [&alo * lo, &alo * hi, &ahi * lo, &ahi * hi];
        let mut min = products[0].clone();
        let mut max = products[0].clone();
        for q in &products[1..] {
            if q < &min {
                min = q.clone();
            }
            if q > &max {
                max = q.clone();
            }
        }
        alo = min + c;
        ahi = max + c;
    }
    (alo, ahi)
}

impl PartialEq for RealAlgebraic {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}

impl Eq for RealAlgebraic {}

impl PartialOrd for RealAlgebraic {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for RealAlgebraic {
    fn cmp(&self, other: &Self) -> Ordering {
        match (&self.repr, &other.repr) {
            (Repr::Rational(a), Repr::Rational(b)) => a.cmp(b),
            (Repr::Rational(r), Repr::Irrational { poly, lo, hi }) => {
                cmp_rat_root(r, poly, lo, hi)
            }
            (Repr::Irrational { poly, lo, hi }, Repr::Rational(r)) => {
                cmp_rat_root(r, poly, lo, hi).reverse()
            }
            (
                Repr::Irrational {
                    poly: f1,
                    lo: lo1,
                    hi: hi1,
                },
                Repr::Irrational {
                    poly: f2,
                    lo: lo2,
                    hi: hi2,
                },
            ) => cmp_roots(f1, lo1, hi1, f2, lo2, hi2),
        }
    }
}

/// Order of rational `r` against the root of `poly` in `(lo, hi)`.
fn cmp_rat_root(r: &Rat, poly: &UniPoly, lo: &Rat, hi: &Rat) -> Ordering {
    if r <= lo {
        return Ordering::Less;
    }
    if r >= hi {
        return Ordering::Greater;
    }
    // r inside the window; the window root is irrational, so poly(r) != 0 and
    // the sign match with the left endpoint locates the root.
    if poly.eval(r).sign() == poly.eval(lo).sign() {
        Ordering::Less
    } else {
        Ordering::Greater
    }
}

fn cmp_roots(f1: &UniPoly, lo1: &Rat, hi1: &Rat, f2: &UniPoly, lo2: &Rat, hi2: &Rat) -> Ordering {
    // Equality witness: a common root must be a root of the gcd lying in
    // both windows; conversely any gcd root in the overlap equals both roots.
    let g = f1.gcd(f2);
    let (mut lo1, mut hi1) = (lo1.clone(), hi1.clone());
    let (mut lo2, mut hi2) = (lo2.clone(), hi2.clone());
    loop {
        if hi1 <= lo2 {
            return Ordering::Less;
        }
        if hi2 <= lo1 {
            return Ordering::Greater;
        }
        let a = if lo1 > lo2 { lo1.clone() } else { lo2.clone() };
        let b = if hi1 < hi2 { hi1.clone() } else { hi2.clone() };
        if a < b && !g.is_constant() && distinct_roots_in_open(&g, &a, &b) >= 1 {
            return Ordering::Equal;
        }
        (lo1, hi1) = refine_window(f1, &lo1, &hi1);
        (lo2, hi2) = refine_window(f2, &lo2, &hi2);
    }
}

impl fmt::Debug for RealAlgebraic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.repr {
            Repr::Rational(r) => write!(f, "{}", r),
            Repr::Irrational { poly, lo, hi } => {
                write!(f, "root of {:?} in ({}, {})", poly, lo, hi)
            }
        }
    }
}

#[derive(Serialize, Deserialize)]
struct WindowRepr {
    poly: UniPoly,
    lo: Rat,
    hi: Rat,
}

impl Serialize for RealAlgebraic {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        match &self.repr {
            Repr::Rational(r) => r.serialize(serializer),
            Repr::Irrational { poly, lo, hi } => WindowRepr {
                poly: poly.clone(),
                lo: lo.clone(),
                hi: hi.clone(),
            }
            .serialize(serializer),
        }
    }
}

impl<'de> Deserialize<'de> for RealAlgebraic {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            Rational(Rat),
            Window(WindowRepr),
        }
        match Raw::deserialize(deserializer)? {
            Raw::Rational(r) => Ok(RealAlgebraic::from_rat(r)),
            Raw::Window(w) => RealAlgebraic::from_defining_window(&w.poly, w.lo, w.hi)
                .map_err(de::Error::custom),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn poly(coeffs: &[i64]) -> UniPoly {
        UniPoly::from_ints(coeffs)
    }

    fn sqrt(n: i64) -> RealAlgebraic {
        // Positive root of t^2 - n.
        RealAlgebraic::roots_of(&poly(&[-n, 0, 1]))
            .into_iter()
            .last()
            .unwrap()
    }

    #[test]
    fn roots_are_sorted_and_classified() {
        // (t^2 - 2)(2t - 1): roots -sqrt2 < 1/2 < sqrt2.
        let p = poly(&[-2, 0, 1]).mul(&poly(&[-1, 2]));
        let roots = RealAlgebraic::roots_of(&p);
        assert_eq!(roots.len(), 3);
        assert!(!roots[0].is_rational());
        assert_eq!(roots[1].as_rational(), Some(&Rat::ratio(1, 2)));
        assert!(!roots[2].is_rational());
        assert!(roots[0] < roots[1] && roots[1] < roots[2]);
        assert_eq!(roots[0].sign(), -1);
        assert_eq!(roots[2].sign(), 1);
    }

    #[test]
    fn equality_across_different_defining_polynomials() {
        // sqrt2 as a root of t^2 - 2 and of (t^2 - 2)(t - 5).
        let a = sqrt(2);
        let b = RealAlgebraic::roots_of(&poly(&[-2, 0, 1]).mul(&poly(&[-5, 1])))
            .into_iter()
            .find(|r| r.sign() > 0 && !r.is_rational())
            .unwrap();
        assert_eq!(a, b);
        // And sqrt2 != sqrt3.
        assert_ne!(a, sqrt(3));
        assert!(a < sqrt(3));
    }

    #[test]
    fn ordering_against_rationals() {
        let s2 = sqrt(2);
        assert!(RealAlgebraic::from_rat(Rat::ratio(7, 5)) < s2); // 1.4 < sqrt2
        assert!(RealAlgebraic::from_rat(Rat::ratio(3, 2)) > s2); // 1.5 > sqrt2
        assert!(RealAlgebraic::from_rat(Rat::ratio(141421356, 100000000)) < s2);
    }

    #[test]
    fn sign_of_poly_detects_exact_zero() {
        let s2 = sqrt(2);
        // t^2 - 2 vanishes at sqrt2.
        assert_eq!(s2.sign_of_poly(&poly(&[-2, 0, 1])), 0);
        // (t^2 - 2)(t + 1) too.
        assert_eq!(s2.sign_of_poly(&poly(&[-2, 0, 1]).mul(&poly(&[1, 1]))), 0);
        // t^3 at sqrt2 is positive; t - 2 is negative.
        assert_eq!(s2.sign_of_poly(&poly(&[0, 0, 0, 1])), 1);
        assert_eq!(s2.sign_of_poly(&poly(&[-2, 1])), -1);
    }

    #[test]
    fn map_poly_squares_sqrt2_to_rational() {
        let s2 = sqrt(2);
        // sqrt2^2 = 2 exactly.
        let sq = s2.map_poly(&poly(&[0, 0, 1]));
        assert_eq!(sq.as_rational(), Some(&Rat::from_int(2)));
        // sqrt2^2 + sqrt2: irrational, between 3.41 and 3.42.
        let v = s2.map_poly(&poly(&[0, 1, 1]));
        assert!(!v.is_rational());
        assert!(v > RealAlgebraic::from_rat(Rat::ratio(341, 100)));
        assert!(v < RealAlgebraic::from_rat(Rat::ratio(342, 100)));
        // Image under a constant.
        assert_eq!(
            s2.map_poly(&poly(&[9])).as_rational(),
            Some(&Rat::from_int(9))
        );
    }

    #[test]
    fn map_poly_composes() {
        // (sqrt2 + 1)^2 = 3 + 2 sqrt2; check against direct arithmetic:
        // map under t^2+2t+1 equals map under t^2 then plus-2t-plus-1 path.
        let s2 = sqrt(2);
        let a = s2.map_poly(&poly(&[1, 2, 1]));
        let b = s2.map_poly(&poly(&[3, 2])); // 3 + 2t at sqrt2
        assert_eq!(a, b);
        assert_eq!(a.sign_of_poly(&poly(&[-17, 0, 6, 0, -1])), {
            // q(v) = -v^4 + 6v^2 - 17 at 3 + 2sqrt2 = -(17 - 6v^2 + v^4);
            // v^2 = 17 + 12 sqrt2, v^4 = 577 + 408 sqrt2;
            // v^4 - 6 v^2 + 17 = 577 - 102 + 17 + (408 - 72) sqrt2 > 0.
            -1
        });
    }

    #[test]
    fn interval_eval_encloses() {
        let p = poly(&[1, -3, 0, 2]); // 2t^3 - 3t + 1
        let (lo, hi) = interval_eval(&p, &Rat::from_int(-1), &Rat::from_int(2));
        for t in [-1i64, 0, 1, 2] {
            let v = p.eval(&Rat::from_int(t));
            assert!(lo <= v && v <= hi);
        }
    }

    #[test]
    fn serde_round_trip() {
        let s2 = sqrt(2);
        let js = serde_json::to_string(&s2).unwrap();
        let back: RealAlgebraic = serde_json::from_str(&js).unwrap();
        assert_eq!(back, s2);
        let r = RealAlgebraic::from_rat(Rat::ratio(-5, 3));
        let js = serde_json::to_string(&r).unwrap();
        assert_eq!(js, "\"-5/3\"");
        let back: RealAlgebraic = serde_json::from_str(&js).unwrap();
        assert_eq!(back, r);
        // A window that secretly holds a rational normalizes on read.
        let fake = r#"{"poly":["-1/1","0/1","1/1"],"lo":"1/2","hi":"3/2"}"#;
        let v: RealAlgebraic = serde_json::from_str(fake).unwrap();
        assert_eq!(v.as_rational(), Some(&Rat::one()));
    }

    #[test]
    fn from_defining_window_rejects_bad_windows() {
        // Two roots inside.
        assert_eq!(
            RealAlgebraic::from_defining_window(
                &poly(&[-2, 0, 1]),
                Rat::from_int(-4),
                Rat::from_int(4)
            ),
            Err(AlgebraicError::InvalidWindow)
        );
        // No roots inside.
        assert_eq!(
            RealAlgebraic::from_defining_window(
                &poly(&[-2, 0, 1]),
                Rat::from_int(5),
                Rat::from_int(6)
            ),
            Err(AlgebraicError::InvalidWindow)
        );
    }
}

//! Sturm chains: exact distinct-real-root counting, isolation, and rational
//! root certification.
//!
//! Chain elements are rescaled by positive rationals to primitive integer
//! coefficients, which preserves every sign and keeps coefficient growth in
//! check. Counting handles non-square-free input (the whole chain picks up
//! the common gcd factor, which is nonzero wherever the polynomial is).



use crate::polyalg::unipoly::UniPoly;
use crate::rat::{simplest_in_open_interval, Rat};

/// Signed remainder sequence of a nonzero polynomial.
pub struct SturmChain {
    chain: Vec<UniPoly>,
}

impl SturmChain {
    pub fn new(p: &UniPoly) -> Self {
        assert!(!p.is_zero(), "Sturm chain of the zero polynomial");
        let mut chain = vec![p.positive_primitive()];
        let d = p.derivative();
        if !d.is_zero() {
            chain.push(d.positive_primitive());
            loop {
                let [a, b] = [&chain[chain.len() - 2], &chain[chain.len() - 1]];
                let r = a.divrem(b).1;
                if r.is_zero() {
                    break;
                }
                chain.push(r.neg().positive_primitive());
            }
        }
        SturmChain { chain }
    }

    fn variations(&self, sign_of: impl Fn(&UniPoly) -> i8) -> usize {
        let mut count = 0;
        let mut last = 0i8;
        for p in &self.chain {
            let s = sign_of(p);
            if s != 0 {
                if last != 0 && s != last {
                    count += 1;
                }
                last = s;
            }
        }
        count
    }

    pub fn variations_at(&self, x: &Rat) -> usize {
        self.variations(|p| p.eval(x).sign())
    }

    pub fn variations_at_neg_inf(&self) -> usize {
        self.variations(|p| {
            let s = p.lead().sign();
            if p.degree().unwrap() % 2 == 1 {
                -s
            } else {
                s
            }
        })
    }

    pub fn variations_at_pos_inf(&self) -> usize {
        self.variations(|p| p.lead().sign())
    }

    /// Distinct real roots of the chain's polynomial.
    pub fn count_all(&self) -> usize {
        self.variations_at_neg_inf() - self.variations_at_pos_inf()
    }

    /// Distinct real roots in the open interval `(lo, hi)`.
    /// Precondition: neither endpoint is a root.
    fn count_open_nonroot(&self, lo: &Rat, hi: &Rat) -> usize {
        debug_assert!(lo < hi);
        debug_assert!(!self.chain[0].eval(lo).is_zero() && !self.chain[0].eval(hi).is_zero());
        self.variations_at(lo) - self.variations_at(hi)
    }
}

/// Number of distinct real roots of a nonzero polynomial.
pub fn distinct_real_roots(p: &UniPoly) -> usize {
    SturmChain::new(p).count_all()
}

/// Number of distinct real roots in the open interval `(lo, hi)`. Endpoints
/// may be roots; they are not counted.
pub fn distinct_roots_in_open(p: &UniPoly, lo: &Rat, hi: &Rat) -> usize {
    assert!(lo < hi, "empty interval");
    assert!(!p.is_zero(), "root count of the zero polynomial");
    let mut q = p.square_free();
    if q.is_constant() {
        return 0;
    }
    // Strip (necessarily rational) endpoint roots; they lie outside the open
    // interval, and removing them licenses the variation-difference count.
    for e in [lo, hi] {
        if q.eval(e).is_zero() {
            let lin = UniPoly::new(vec![-e.clone(), Rat::one()]);
            q = q.exact_div(&lin).expect("root gives linear factor");
        }
        if q.is_constant() {
            return 0;
        }
    }
    SturmChain::new(&q).count_open_nonroot(lo, hi)
}

/// Strict bound B with every real root of `q` in (-B, B) (Cauchy).
pub fn root_bound(q: &UniPoly) -> Rat {
    let d = q.degree().expect("root bound of zero polynomial");
    let lead = q.lead().abs();
    let mut m = Rat::zero();
    for i in 0..d {
        m = m.max(q.coeff(i).abs());
    }
    Rat::one() + m / lead
}

/// Location of one distinct real root.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum RealRootLoc {
    /// An exact rational root.
    Exact(Rat),
    /// An open isolating interval holding exactly one root of the companion
    /// square-free polynomial; that root is certified irrational and the
    /// endpoints are not roots.
    Window { lo: Rat, hi: Rat },
}

/// Result of isolating all distinct real roots.
pub struct IsolatedRoots {
    /// Square-free primitive-integer polynomial whose roots the windows
    /// isolate (rational roots found along the way may have been divided
    /// out; every `Window` root is a simple root of this polynomial).
    pub poly: UniPoly,
    /// All distinct real roots of the input, ascending.
    pub roots: Vec<RealRootLoc>,
}

/// Isolates every distinct real root of a nonzero polynomial. Rational roots
/// are returned exactly (decided by simplest-rational certification, not by
/// factorization); irrational roots get isolating windows.
pub fn isolate_real_roots(p: &UniPoly) -> IsolatedRoots {
    assert!(!p.is_zero(), "isolating roots of the zero polynomial");
    let mut q = p.square_free();
    if q.is_constant() {
        return IsolatedRoots {
            poly: q,
            roots: Vec::new(),
        };
    }
    let bound = root_bound(&q);
    let mut chain = SturmChain::new(&q);
    let mut exact: Vec<Rat> = Vec::new();
    let mut windows: Vec<(Rat, Rat)> = Vec::new();
    // Disjoint work intervals with non-root endpoints (Cauchy bound is strict).
    let mut work = vec![(-&bound, bound.clone())];
    while let Some((lo, hi)) = work.pop() {
        if q.is_constant() {
            break;
        }
        let n = chain.count_open_nonroot(&lo, &hi);
        match n {
            0 => {}
            1 => windows.push((lo, hi)),
            _ => {
                let mid = (&lo + &hi) / Rat::from_int(2);
                if q.eval(&mid).is_zero() {
                    exact.push(mid.clone());
                    let lin = UniPoly::new(vec![-mid.clone(), Rat::one()]);
                    q = q.exact_div(&lin).expect("root gives linear factor");
                    q = q.positive_primitive();
                    if q.is_constant() {
                        continue;
                    }
                    chain = SturmChain::new(&q);
                }
                work.push((lo, mid.clone()));
                work.push((mid, hi));
            }
        }
    }
    // Certify each window: either it hides a rational root (denominator
    // divides the leading coefficient) or its root is irrational.
    let mut roots: Vec<RealRootLoc> = exact.into_iter().map(RealRootLoc::Exact).collect();
    for (lo, hi) in windows {
        match rational_in_window(&q, lo, hi) {
            Ok(r) => roots.push(RealRootLoc::Exact(r)),
            Err((lo, hi)) => roots.push(RealRootLoc::Window { lo, hi }),
        }
    }
    roots.sort_by(|a, b| root_key(a).cmp(root_key(b)));
    IsolatedRoots { poly: q, roots }
}

fn root_key(r: &RealRootLoc) -> &Rat {
    match r {
        RealRootLoc::Exact(v) => v,
        RealRootLoc::Window { lo, .. } => lo,
    }
}

/// One bisection step on an isolating window of a square-free polynomial
/// whose window root is known to be irrational.
pub fn refine_window(q: &UniPoly, lo: &Rat, hi: &Rat) -> (Rat, Rat) {
    let mid = (lo + hi) / Rat::from_int(2);
    let s_mid = q.eval(&mid).sign();
    assert!(s_mid != 0, "window root certified irrational");
    if s_mid == q.eval(lo).sign() {
        (mid, hi.clone())
    } else {
        (lo.clone(), mid)
    }
}

/// Decides whether the unique root of square-free primitive-integer `q` in
/// the window is rational: refines until the window is narrower than
/// 1/lead(q)^2 (any rational root has denominator dividing the leading
/// coefficient, so at most one candidate survives), then tests the simplest
/// rational inside. `Err` returns the refined window of an irrational root.
pub(crate) fn rational_in_window(q: &UniPoly, mut lo: Rat, mut hi: Rat) -> Result<Rat, (Rat, Rat)> {
    debug_assert!(q.lead().is_integer() && q.lead().sign() > 0);
    let threshold = (q.lead() * q.lead()).recip();
    while &hi - &lo >= threshold {
        let mid = (&lo + &hi) / Rat::from_int(2);
        let s_mid = q.eval(&mid).sign();
        if s_mid == 0 {
            return Ok(mid);
        }
        if s_mid == q.eval(&lo).sign() {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let cand = simplest_in_open_interval(&lo, &hi);
    if q.eval(&cand).is_zero() {
        Ok(cand)
    } else {
        Err((lo, hi))
    }
}

/// All rational roots of a nonzero polynomial, ascending. Exact and complete;
/// no integer factorization involved.
pub fn rational_roots(p: &UniPoly) -> Vec<Rat> {
    isolate_real_roots(p)
        .roots
        .into_iter()
        .filter_map(|r| match r {
            RealRootLoc::Exact(v) => Some(v),
            RealRootLoc::Window { .. } => None,
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn poly(coeffs: &[i64]) -> UniPoly {
        UniPoly::from_ints(coeffs)
    }

    /// (t-1)^2 (t+2) = t^3 - 3t + 2.
    fn double_root_poly() -> UniPoly {
        poly(&[2, -3, 0, 1])
    }

    #[test]
    fn counts_distinct_roots_with_multiplicity_collapsed() {
        assert_eq!(distinct_real_roots(&double_root_poly()), 2);
        assert_eq!(distinct_real_roots(&poly(&[1, 0, 1])), 0); // t^2 + 1
        assert_eq!(distinct_real_roots(&poly(&[-2, 0, 1])), 2); // t^2 - 2
        assert_eq!(distinct_real_roots(&poly(&[5])), 0);
        assert_eq!(distinct_real_roots(&poly(&[0, 1])), 1);
        // (t^2-2)(t^2-3)(t-1): five distinct real roots.
        let p = poly(&[-2, 0, 1]).mul(&poly(&[-3, 0, 1])).mul(&poly(&[-1, 1]));
        assert_eq!(distinct_real_roots(&p), 5);
    }

    #[test]
    fn interval_counts() {
        let p = double_root_poly(); // roots 1 (double), -2
        let r = |a: i64, b: i64| distinct_roots_in_open(&p, &Rat::from_int(a), &Rat::from_int(b));
        assert_eq!(r(0, 2), 1);
        assert_eq!(r(-3, 2), 2);
        assert_eq!(r(-3, 0), 1);
        assert_eq!(r(2, 5), 0);
        // Endpoint roots are not counted.
        assert_eq!(r(-2, 1), 0);
        assert_eq!(r(-2, 2), 1);
        assert_eq!(r(1, 2), 0);
    }

    #[test]
    fn isolation_separates_and_certifies() {
        // (t^2 - 2)(3t - 1): roots -sqrt2, 1/3, sqrt2. 1/3 is never a
        // bisection midpoint, so rational certification must find it.
        let p = poly(&[-2, 0, 1]).mul(&poly(&[-1, 3]));
        let iso = isolate_real_roots(&p);
        assert_eq!(iso.roots.len(), 3);
        match &iso.roots[..] {
            [RealRootLoc::Window { lo: l1, hi: h1 }, RealRootLoc::Exact(r), RealRootLoc::Window { lo: l2, hi: h2 }] =>
            {
                assert_eq!(r, &Rat::ratio(1, 3));
                // Exactly one (simple, sign-changing) root of iso.poly in
                // each window, and the windows are ordered around 1/3.
                for (lo, hi) in [(l1, h1), (l2, h2)] {
                    assert_eq!(distinct_roots_in_open(&iso.poly, lo, hi), 1);
                    assert_eq!(
                        iso.poly.eval(lo).sign() * iso.poly.eval(hi).sign(),
                        -1
                    );
                }
                assert!(h1 <= r && r <= l2);
            }
            other => panic!("unexpected isolation shape: {other:?}"),
        }
    }

    #[test]
    fn rational_roots_found_without_factorization() {
        // (2t - 3)(5t + 7)(t^2 + 1), roots 3/2 and -7/5.
        let p = poly(&[-3, 2]).mul(&poly(&[7, 5])).mul(&poly(&[1, 0, 1]));
        assert_eq!(
            rational_roots(&p),
            vec![Rat::ratio(-7, 5), Rat::ratio(3, 2)]
        );
        // Dyadic midpoint hit: root exactly at 0.
        assert_eq!(rational_roots(&poly(&[0, 0, 1])), vec![Rat::zero()]);
        // No rational roots.
        assert!(rational_roots(&poly(&[-2, 0, 1])).is_empty());
    }

    #[test]
    fn refine_window_keeps_the_root() {
        let p = poly(&[-2, 0, 1]);
        let iso = isolate_real_roots(&p);
        let RealRootLoc::Window { mut lo, mut hi } = iso.roots[1].clone() else {
            panic!("sqrt2 is irrational");
        };
        for _ in 0..40 {
            (lo, hi) = refine_window(&iso.poly, &lo, &hi);
            assert_eq!(distinct_roots_in_open(&iso.poly, &lo, &hi), 1);
        }
        // Interval pinned around sqrt2 after 40 halvings.
        let two = Rat::from_int(2);
        assert!(&lo * &lo < two && &hi * &hi > two);
    }

    #[test]
    fn large_coefficient_chain_stays_exact() {
        // Wilkinson-ish: (t-1)(t-2)...(t-10) has 10 distinct roots.
        let mut p = UniPoly::one();
        for k in 1..=10 {
            p = p.mul(&poly(&[-k, 1]));
        }
        assert_eq!(distinct_real_roots(&p), 10);
        assert_eq!(
            distinct_roots_in_open(&p, &Rat::ratio(5, 2), &Rat::ratio(17, 2)),
            6
        );
    }
}

//! Polynomially parametrized curves: intersections, self-crossings, tangent
//! directions, and multijoint queries for curve families.
//!
//! Curves enter as component polynomials over Q. All intersection work runs
//! through integer resultants that eliminate one parameter at a time; the
//! surviving candidates are real algebraic numbers and every candidate pair is
//! verified exactly before it counts. A fast interval filter discards clearly
//! mismatched pairs first, but intervals only ever reject, never accept.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::algebraic::{interval_eval, RealAlgebraic};
use crate::geom::{span3, Dir3, Line3, Point3};
use crate::incidence::{LineFamilies, ThresholdQuery};
use crate::polyalg::nested::{resultant, Poly, ZPoly};
use crate::polyalg::{refine_window, TriPoly, UniPoly};
use crate::rat::Rat;
use crate::search::{exists_transversal_subsets, SearchPolicy};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum CurveError {
    #[error("curve components are all constant")]
    ConstantCurve,
    #[error("curve family {0} is empty")]
    EmptyFamily(usize),
    #[error("intersection locus is not zero-dimensional")]
    NotZeroDimensional,
    #[error("transversal search budget exceeded; raise the exact search limit or allow heuristics")]
    SearchBudgetExceeded,
}

/// A curve t -> (x(t), y(t), z(t)) with rational coefficients, not all
/// components constant.
///
/// Stored in a canonical orientation: of the two parametrizations t -> g(t)
/// and t -> g(-t) the one with the lexicographically smaller coefficient
/// tuple is kept, so structural equality identifies a curve with its
/// reversal. Distinct parametrizations of the same image are still distinct
/// values; queries that meet one report a non-zero-dimensional locus rather
/// than guessing.
#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
#[serde(try_from = "RawCurve", into = "RawCurve")]
pub struct ParamCurve {
    comp: [UniPoly; 3],
    deg: usize,
}

#[derive(Serialize, Deserialize)]
struct RawCurve {
    x: UniPoly,
    y: UniPoly,
    z: UniPoly,
}

impl TryFrom<RawCurve> for ParamCurve {
    type Error = CurveError;

    fn try_from(raw: RawCurve) -> Result<Self, Self::Error> {
        ParamCurve::new(raw.x, raw.y, raw.z)
    }
}

impl From<ParamCurve> for RawCurve {
    fn from(c: ParamCurve) -> Self {
        let [x, y, z] = c.comp;
        RawCurve { x, y, z }
    }
}

impl ParamCurve {
    pub fn new(x: UniPoly, y: UniPoly, z: UniPoly) -> Result<Self, CurveError> {
        let comp = [x, y, z];
        let deg = comp
            .iter()
            .map(|p| p.degree().unwrap_or(0))
            .max()
            .unwrap();
        if deg == 0 {
            return Err(CurveError::ConstantCurve);
        }
        let reflected = [0, 1, 2].map(|i| comp[i].reflect());
        let key = |c: &[UniPoly; 3]| -> Vec<Rat> {
            c.iter().flat_map(|p| p.coeffs().iter().cloned()).collect()
        };
        let comp = if key(&reflected) < key(&comp) {
            reflected
        } else {
            comp
        };
        Ok(ParamCurve { comp, deg })
    }

    /// The line as a degree-one curve (canonical parametrization of the
    /// canonical line, so equal lines give equal curves).
    pub fn from_line(l: &Line3) -> Self {
        let b = l.base().coords();
        let d = l.dir().as_rats();
        let comp = [0, 1, 2].map(|i| UniPoly::new(vec![b[i].clone(), d[i].clone()]));
        let [x, y, z] = comp;
        ParamCurve::new(x, y, z).expect("direction is nonzero")
    }

    pub fn component(&self, i: usize) -> &UniPoly {
        &self.comp[i]
    }

    pub fn components(&self) -> [&UniPoly; 3] {
        [&self.comp[0], &self.comp[1], &self.comp[2]]
    }

    /// Largest component degree; at least 1.
    pub fn degree(&self) -> usize {
        self.deg
    }

    pub fn eval(&self, t: &Rat) -> Point3 {
        Point3::new(
            self.comp[0].eval(t),
            self.comp[1].eval(t),
            self.comp[2].eval(t),
        )
    }

    /// All real parameters mapping onto `x`: the roots of the gcd of the
    /// component differences. Irrational parameters hitting a rational point
    /// are included.
    pub fn params_at(&self, x: &Point3) -> Vec<RealAlgebraic> {
        let mut g = UniPoly::zero();
        for i in 0..3 {
            let d = self.comp[i].sub(&UniPoly::constant(x.coord(i).clone()));
            g = g.gcd(&d);
        }
        debug_assert!(!g.is_zero(), "constant curves are rejected on construction");
        if g.is_constant() {
            return Vec::new();
        }
        RealAlgebraic::roots_of(&g)
    }

    pub fn contains(&self, x: &Point3) -> bool {
        !self.params_at(x).is_empty()
    }

    /// Tangent direction at parameter `t`: the direction of the first
    /// derivative order whose vector does not vanish there (the limiting
    /// secant direction, so cusps get their geometric tangent). Returns
    /// `None`, with a warning, when some component ratio of that vector is
    /// irrational and the direction therefore has no rational representative.
    pub fn tangent_dir_at(&self, t: &RealAlgebraic) -> Option<Dir3> {
        let mut ds = [0, 1, 2].map(|i| self.comp[i].derivative());
        for _order in 1..=self.deg {
            let signs = [0, 1, 2].map(|i| t.sign_of_poly(&ds[i]));
            if signs != [0, 0, 0] {
                return self.direction_of(t, &ds, signs);
            }
            ds = [0, 1, 2].map(|i| ds[i].derivative());
        }
        unreachable!("the deg-th derivative of a maximal component is a nonzero constant");
    }

    fn direction_of(
        &self,
        t: &RealAlgebraic,
        ds: &[UniPoly; 3],
        signs: [i8; 3],
    ) -> Option<Dir3> {
        if let Some(r) = t.as_rational() {
            let v = [0, 1, 2].map(|i| ds[i].eval(r));
            let [vx, vy, vz] = v;
            return Some(Dir3::new(vx, vy, vz).expect("nonvanishing vector"));
        }
        let pivot = (0..3).find(|&i| signs[i] != 0).unwrap();
        let mut ratios = [Rat::zero(), Rat::zero(), Rat::zero()];
        ratios[pivot] = Rat::one();
        for j in 0..3 {
            if j == pivot || signs[j] == 0 {
                continue;
            }
            match rational_ratio_at(t, &ds[j], &ds[pivot]) {
                Some(v) => ratios[j] = v,
                None => {
                    log::warn!(
                        "tangent direction at an algebraic parameter has an irrational \
                         component ratio; omitting it"
                    );
                    return None;
                }
            }
        }
        let [rx, ry, rz] = ratios;
        Some(Dir3::new(rx, ry, rz).expect("pivot ratio is one"))
    }

    /// Distinct tangent directions over all parameters mapping onto `x`.
    pub fn tangent_dirs_at_point(&self, x: &Point3) -> Vec<Dir3> {
        let mut dirs: Vec<Dir3> = Vec::new();
        for t in self.params_at(x) {
            if let Some(d) = self.tangent_dir_at(&t) {
                if !dirs.contains(&d) {
                    dirs.push(d);
                }
            }
        }
        dirs.sort();
        dirs
    }
}

/// The rational value of `a(t) / b(t)` at the algebraic number `t`, if it is
/// rational. Requires `b(t) != 0`. Candidates come from the resultant of the
/// defining polynomial (with factors shared with `b` stripped, which keeps the
/// resultant nonzero) against `a - v b`; each is certified by an exact sign
/// test before being accepted.
fn rational_ratio_at(t: &RealAlgebraic, a: &UniPoly, b: &UniPoly) -> Option<Rat> {
    debug_assert!(t.sign_of_poly(b) != 0);
    let h = t.defining_poly().expect("irrational representation");
    let stripped = h
        .exact_div(&h.gcd(b))
        .expect("gcd divides the defining polynomial");
    let h_int = stripped.primitive_integer();
    let (a_int, la) = a.clear_denominators();
    let (b_int, lb) = b.clear_denominators();
    let l = lcm_big(&la, &lb);
    let fa = &l / &la;
    let fb = &l / &lb;
    // a - v b over Z[v][t], t outermost; the t-leading coefficient of the
    // defining polynomial is a nonzero constant, so specialization at any v
    // commutes with the resultant up to a nonzero factor.
    let width = a_int.len().max(b_int.len());
    let mut coeffs: Vec<ZPoly> = Vec::with_capacity(width);
    for k in 0..width {
        let ak = a_int.get(k).map(|c| c * &fa).unwrap_or_else(BigInt::zero);
        let bk = b_int.get(k).map(|c| c * &fb).unwrap_or_else(BigInt::zero);
        coeffs.push(ZPoly::from_coeffs(vec![ak, -bk]));
    }
    let lhs: Poly<ZPoly> = Poly::from_coeffs(
        h_int.coeffs().iter().cloned().map(ZPoly::constant).collect(),
    );
    let res = resultant(&lhs, &Poly::from_coeffs(coeffs));
    debug_assert!(!res.is_zero(), "shared factors were stripped");
    let candidates = crate::polyalg::rational_roots(&UniPoly::from_zpoly(&res));
    candidates
        .into_iter()
        .find(|v| t.sign_of_poly(&a.sub(&b.scale(v))) == 0)
}

fn lcm_big(a: &BigInt, b: &BigInt) -> BigInt {
    if a.is_zero() || b.is_zero() {
        return BigInt::one();
    }
    a.lcm(b)
}

/// A point with real algebraic coordinates, ordered lexicographically.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct CurvePoint {
    coords: [RealAlgebraic; 3],
}

impl CurvePoint {
    pub fn new(coords: [RealAlgebraic; 3]) -> Self {
        CurvePoint { coords }
    }

    pub fn coords(&self) -> &[RealAlgebraic; 3] {
        &self.coords
    }

    /// Exact rational point, when all coordinates are rational.
    pub fn as_point3(&self) -> Option<Point3> {
        let [x, y, z] = &self.coords;
        Some(Point3::new(
            x.as_rational()?.clone(),
            y.as_rational()?.clone(),
            z.as_rational()?.clone(),
        ))
    }

    pub fn approx_f64(&self) -> [f64; 3] {
        [0, 1, 2].map(|i| self.coords[i].approx_f64())
    }
}

/// Common points of two distinct curves, exactly.
///
/// Component differences are eliminated by pairwise resultants in each
/// parameter; candidate parameter pairs are then verified coordinatewise with
/// exact algebraic arithmetic. Returns `NotZeroDimensional` when elimination
/// yields no univariate constraint, which covers identical curves, shared
/// components, and the conservative corner of a single surviving bivariate
/// equation.
pub fn curve_curve_intersections(
    g: &ParamCurve,
    d: &ParamCurve,
) -> Result<Vec<CurvePoint>, CurveError> {
    if g == d {
        return Err(CurveError::NotZeroDimensional);
    }
    let mut s_outer: Vec<Poly<ZPoly>> = Vec::new();
    let mut t_outer: Vec<Poly<ZPoly>> = Vec::new();
    for i in 0..3 {
        let (ga, db) = cleared_pair(g.component(i), d.component(i));
        let es = difference_bi(&ga, &db);
        if es.is_zero() {
            continue;
        }
        if es.degree() == Some(0) && es.coeff(0).degree() == Some(0) {
            // Constant components that differ: the curves live in disjoint
            // coordinate slices.
            return Ok(Vec::new());
        }
        s_outer.push(es);
        t_outer.push(difference_bi(&db, &ga));
    }
    let taus = match project_out_outer(&s_outer) {
        Projection::NoConstraint => return Err(CurveError::NotZeroDimensional),
        Projection::Empty => return Ok(Vec::new()),
        Projection::Candidates(r) => r,
    };
    let sigmas = match project_out_outer(&t_outer) {
        Projection::NoConstraint => return Err(CurveError::NotZeroDimensional),
        Projection::Empty => return Ok(Vec::new()),
        Projection::Candidates(r) => r,
    };
    let mut points: Vec<CurvePoint> = Vec::new();
    for sigma in &sigmas {
        let image = [0, 1, 2].map(|i| sigma.map_poly(g.component(i)));
        for tau in &taus {
            if (0..3).all(|i| values_agree(&image[i], tau, d.component(i))) {
                points.push(CurvePoint::new(image.clone()));
                break;
            }
        }
    }
    points.sort();
    points.dedup();
    debug_assert!(points.len() <= g.degree() * d.degree());
    Ok(points)
}

/// Points where the curve meets itself: images of parameter pairs s != t with
/// g(s) = g(t). A parametrization that retraces a whole arc (for example an
/// even curve) is reported as `NotZeroDimensional`.
pub fn self_crossings(g: &ParamCurve) -> Result<Vec<CurvePoint>, CurveError> {
    let mut constraints: Vec<Poly<ZPoly>> = Vec::new();
    for i in 0..3 {
        let (ints, _) = g.component(i).clear_denominators();
        let dd = divided_difference(&ints);
        if dd.is_zero() {
            continue;
        }
        if dd.degree() == Some(0) && dd.coeff(0).degree() == Some(0) {
            // A linear component separates all parameter pairs.
            return Ok(Vec::new());
        }
        constraints.push(dd);
    }
    // The divided differences are symmetric in (s, t), so one elimination
    // serves both parameters.
    let params = match project_out_outer(&constraints) {
        Projection::NoConstraint => return Err(CurveError::NotZeroDimensional),
        Projection::Empty => return Ok(Vec::new()),
        Projection::Candidates(r) => r,
    };
    let mut points: Vec<CurvePoint> = Vec::new();
    for i in 0..params.len() {
        for j in (i + 1)..params.len() {
            let agree = (0..3).all(|k| {
                let u = params[i].map_poly(g.component(k));
                values_agree(&u, &params[j], g.component(k))
            });
            if agree {
                points.push(CurvePoint::new(
                    [0, 1, 2].map(|k| params[i].map_poly(g.component(k))),
                ));
            }
        }
    }
    points.sort();
    points.dedup();
    debug_assert!(points.len() <= g.degree() * g.degree());
    Ok(points)
}

/// The restriction t -> p(g(t)) as a univariate polynomial.
pub fn restrict_to_curve(p: &TriPoly, g: &ParamCurve) -> UniPoly {
    let mut maxes = [0usize; 3];
    for (m, _) in p.terms() {
        maxes[0] = maxes[0].max(m.ex as usize);
        maxes[1] = maxes[1].max(m.ey as usize);
        maxes[2] = maxes[2].max(m.ez as usize);
    }
    let table = |i: usize| -> Vec<UniPoly> {
        let mut t = Vec::with_capacity(maxes[i] + 1);
        t.push(UniPoly::one());
        for k in 1..=maxes[i] {
            let prev: &UniPoly = &t[k - 1];
            t.push(prev.mul(g.component(i)));
        }
        t
    };
    let tables = [table(0), table(1), table(2)];
    let mut acc = UniPoly::zero();
    for (m, c) in p.terms() {
        let term = tables[0][m.ex as usize]
            .mul(&tables[1][m.ey as usize])
            .mul(&tables[2][m.ez as usize])
            .scale(c);
        acc = acc.add(&term);
    }
    acc
}

/// Scales both polynomials by the common denominator lcm so their difference
/// has integer coefficients with an unchanged zero set.
fn cleared_pair(a: &UniPoly, b: &UniPoly) -> (Vec<BigInt>, Vec<BigInt>) {
    let (ca, la) = a.clear_denominators();
    let (cb, lb) = b.clear_denominators();
    let l = lcm_big(&la, &lb);
    let fa = &l / &la;
    let fb = &l / &lb;
    (
        ca.iter().map(|c| c * &fa).collect(),
        cb.iter().map(|c| c * &fb).collect(),
    )
}

/// `outer(X) - inner(Y)` in Z[Y][X].
fn difference_bi(outer: &[BigInt], inner: &[BigInt]) -> Poly<ZPoly> {
    let mut coeffs: Vec<ZPoly> = outer.iter().cloned().map(ZPoly::constant).collect();
    if coeffs.is_empty() {
        coeffs.push(ZPoly::zero());
    }
    let sub = ZPoly::from_coeffs(inner.to_vec());
    coeffs[0] = coeffs[0].sub(&sub);
    Poly::from_coeffs(coeffs)
}

/// `(p(s) - p(t)) / (s - t)` for integer coefficients, in Z[t][s]. The
/// coefficient of s^a t^b is `c[a + b + 1]`, so the result is symmetric.
fn divided_difference(c: &[BigInt]) -> Poly<ZPoly> {
    if c.len() < 2 {
        return Poly::zero();
    }
    let deg = c.len() - 1;
    let mut coeffs: Vec<ZPoly> = Vec::with_capacity(deg);
    for a in 0..deg {
        coeffs.push(ZPoly::from_coeffs(c[(a + 1)..].to_vec()));
    }
    Poly::from_coeffs(coeffs)
}

enum Projection {
    /// No univariate constraint survives: the solution locus has a
    /// one-dimensional (or undecided) part.
    NoConstraint,
    /// Constraints are contradictory: no candidate values at all.
    Empty,
    Candidates(Vec<RealAlgebraic>),
}

/// Eliminates the outer variable from a system of bivariate constraints.
/// Degree-zero constraints contribute their inner polynomial directly; pairs
/// of positive-degree constraints contribute their resultant (sound because
/// every outer leading coefficient here is a nonzero constant). Candidates
/// are the roots of the gcd of all contributions.
fn project_out_outer(constraints: &[Poly<ZPoly>]) -> Projection {
    let mut acc = UniPoly::zero();
    let mut gathered = false;
    for c in constraints {
        debug_assert!(!c.is_zero());
        if c.degree() == Some(0) {
            gathered = true;
            acc = acc.gcd(&UniPoly::from_zpoly(&c.coeff(0)));
        }
    }
    let positive: Vec<&Poly<ZPoly>> = constraints
        .iter()
        .filter(|c| c.degree().map_or(false, |d| d >= 1))
        .collect();
    for i in 0..positive.len() {
        for j in (i + 1)..positive.len() {
            gathered = true;
            let r = resultant(positive[i], positive[j]);
            acc = acc.gcd(&UniPoly::from_zpoly(&r));
        }
    }
    if !gathered || acc.is_zero() {
        return Projection::NoConstraint;
    }
    if acc.is_constant() {
        return Projection::Empty;
    }
    Projection::Candidates(RealAlgebraic::roots_of(&acc))
}

/// Whether `u` equals `q(t)`. An interval comparison rejects clear mismatches
/// before the exact algebraic equality runs.
fn values_agree(u: &RealAlgebraic, t: &RealAlgebraic, q: &UniPoly) -> bool {
    let (ulo, uhi) = approx_range(u, None, 24);
    let (vlo, vhi) = approx_range(t, Some(q), 24);
    if uhi < vlo || vhi < ulo {
        return false;
    }
    *u == t.map_poly(q)
}

/// A closed rational interval containing `v` (or `p(v)` when `p` is given),
/// after `rounds` of window refinement.
fn approx_range(v: &RealAlgebraic, p: Option<&UniPoly>, rounds: u32) -> (Rat, Rat) {
    let ident = UniPoly::var();
    let p = p.unwrap_or(&ident);
    match v.as_rational() {
        Some(r) => {
            let e = p.eval(r);
            (e.clone(), e)
        }
        None => {
            let h = v.defining_poly().unwrap();
            let (mut lo, mut hi) = v.enclosure();
            for _ in 0..rounds {
                let (l, h2) = refine_window(h, &lo, &hi);
                lo = l;
                hi = h2;
            }
            interval_eval(p, &lo, &hi)
        }
    }
}

/// Three distinguished curve families; deduplicated and nonempty.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "[Vec<ParamCurve>; 3]", into = "[Vec<ParamCurve>; 3]")]
pub struct CurveFamilies {
    fams: [Vec<ParamCurve>; 3],
}

impl CurveFamilies {
    pub fn new(
        f1: Vec<ParamCurve>,
        f2: Vec<ParamCurve>,
        f3: Vec<ParamCurve>,
    ) -> Result<Self, CurveError> {
        let mut fams = [f1, f2, f3];
        for (i, fam) in fams.iter_mut().enumerate() {
            if fam.is_empty() {
                return Err(CurveError::EmptyFamily(i + 1));
            }
            let mut seen: Vec<ParamCurve> = Vec::with_capacity(fam.len());
            for c in fam.drain(..) {
                if seen.contains(&c) {
                    log::warn!("curve family {} repeats a curve; keeping one copy", i + 1);
                } else {
                    seen.push(c);
                }
            }
            *fam = seen;
        }
        Ok(CurveFamilies { fams })
    }

    pub fn from_lines(lines: &LineFamilies) -> Self {
        let fam = |i: usize| -> Vec<ParamCurve> {
            lines.family(i).iter().map(ParamCurve::from_line).collect()
        };
        CurveFamilies {
            fams: [fam(0), fam(1), fam(2)],
        }
    }

    pub fn family(&self, i: usize) -> &[ParamCurve] {
        &self.fams[i]
    }

    pub fn sizes(&self) -> [usize; 3] {
        [self.fams[0].len(), self.fams[1].len(), self.fams[2].len()]
    }
}

impl TryFrom<[Vec<ParamCurve>; 3]> for CurveFamilies {
    type Error = CurveError;

    fn try_from(value: [Vec<ParamCurve>; 3]) -> Result<Self, Self::Error> {
        let [f1, f2, f3] = value;
        CurveFamilies::new(f1, f2, f3)
    }
}

impl From<CurveFamilies> for [Vec<ParamCurve>; 3] {
    fn from(value: CurveFamilies) -> Self {
        value.fams
    }
}

/// Rational candidate points for curve multijoint queries: cross-family
/// pairwise intersections plus self-crossings of every curve (a triple point
/// of one curve shared by all families needs no second curve). Intersections
/// with an irrational coordinate are logged and skipped; identical curves in
/// different families contribute no isolated pair intersections.
fn rational_candidates(f: &CurveFamilies) -> Result<Vec<Point3>, CurveError> {
    let mut pts: BTreeSet<Point3> = BTreeSet::new();
    let mut absorb = |found: Vec<CurvePoint>| {
        for cp in found {
            match cp.as_point3() {
                Some(p) => {
                    pts.insert(p);
                }
                None => log::warn!(
                    "intersection near {:?} has irrational coordinates; multijoint \
                     queries consider rational points only",
                    cp.approx_f64()
                ),
            }
        }
    };
    for i in 0..3 {
        for j in (i + 1)..3 {
            for a in f.family(i) {
                for b in f.family(j) {
                    if a == b {
                        continue;
                    }
                    absorb(curve_curve_intersections(a, b)?);
                }
            }
        }
    }
    for i in 0..3 {
        for c in f.family(i) {
            absorb(self_crossings(c)?);
        }
    }
    Ok(pts.into_iter().collect())
}

/// Tangent direction sets, one entry per curve of the family passing through
/// `x` with at least one representable tangent direction.
fn family_tangents(f: &CurveFamilies, fam: usize, x: &Point3) -> Vec<Vec<Dir3>> {
    f.family(fam)
        .iter()
        .map(|c| c.tangent_dirs_at_point(x))
        .filter(|dirs| !dirs.is_empty())
        .collect()
}

fn spanning_choice_exists(t1: &[Dir3], t2: &[Dir3], t3: &[Dir3]) -> bool {
    for a in t1 {
        for b in t2 {
            for c in t3 {
                if span3(a, b, c) {
                    return true;
                }
            }
        }
    }
    false
}

/// Multijoints of the curve families among rational candidate points: a
/// point with one curve per family through it whose tangent directions admit
/// a spanning choice.
pub fn curve_multijoints(f: &CurveFamilies) -> Result<Vec<Point3>, CurveError> {
    let mut out = Vec::new();
    for p in rational_candidates(f)? {
        let per_family = [0, 1, 2].map(|i| family_tangents(f, i, &p));
        let flat = [0, 1, 2].map(|i| {
            per_family[i]
                .iter()
                .flatten()
                .cloned()
                .collect::<Vec<Dir3>>()
        });
        if spanning_choice_exists(&flat[0], &flat[1], &flat[2]) {
            out.push(p);
        }
    }
    Ok(out)
}

/// Points admitting per-family curve subcollections of the threshold sizes in
/// which every cross triple of curves has a spanning tangent choice. With
/// unit thresholds this is exactly [`curve_multijoints`].
pub fn curve_j_threshold(
    f: &CurveFamilies,
    thresholds: [u32; 3],
    policy: &SearchPolicy,
) -> Result<ThresholdQuery, CurveError> {
    assert!(thresholds.iter().all(|&n| n > 0), "thresholds are positive");
    let mut points = Vec::new();
    for p in rational_candidates(f)? {
        let per_family = [0, 1, 2].map(|i| family_tangents(f, i, &p));
        let sizes = [0, 1, 2].map(|i| per_family[i].len());
        let quotas = [0, 1, 2].map(|i| thresholds[i] as usize);
        let mut ok = |a: usize, b: usize, c: usize| {
            spanning_choice_exists(&per_family[0][a], &per_family[1][b], &per_family[2][c])
        };
        match exists_transversal_subsets(sizes, quotas, &mut ok, policy) {
            Ok(true) => points.push(p),
            Ok(false) => {}
            Err(_) => return Err(CurveError::SearchBudgetExceeded),
        }
    }
    Ok(ThresholdQuery { thresholds, points })
}

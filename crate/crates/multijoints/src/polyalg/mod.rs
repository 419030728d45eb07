//! Polynomial algebra: univariate and trivariate polynomials, Sturm theory,
//! square-free parts, restrictions to lines and parametrized curves, and
//! critical-point/line queries on algebraic surfaces.

pub mod nested;
pub mod sturm;
mod tripoly;
mod unipoly;

pub use sturm::{
    distinct_real_roots, distinct_roots_in_open, isolate_real_roots, rational_roots,
    refine_window, root_bound, IsolatedRoots, RealRootLoc, SturmChain,
};
pub use tripoly::{Mono3, TriPoly};
pub use unipoly::UniPoly;

use crate::geom::{Line3, Point3};
use crate::rat::Rat;
use nested::poly_gcd;

/// Polynomial operation errors.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum PolyError {
    /// The operation requires a nonzero polynomial.
    #[error("zero polynomial")]
    ZeroPolynomial,
    /// A criticality query was made for a line outside the zero set.
    #[error("line is not contained in the zero set")]
    LineNotInZeroSet,
}

/// The three partial derivatives of a trivariate polynomial.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GradientTriple {
    pub dx: TriPoly,
    pub dy: TriPoly,
    pub dz: TriPoly,
}

impl GradientTriple {
    pub fn eval_is_zero(&self, x: &Point3) -> bool {
        self.dx.eval(x).is_zero() && self.dy.eval(x).is_zero() && self.dz.eval(x).is_zero()
    }

    pub fn components(&self) -> [&TriPoly; 3] {
        [&self.dx, &self.dy, &self.dz]
    }
}

pub fn gradient(p: &TriPoly) -> GradientTriple {
    GradientTriple {
        dx: p.partial(0),
        dy: p.partial(1),
        dz: p.partial(2),
    }
}

/// Square-free part `p / gcd(p, p_x, p_y, p_z)`, canonicalized to primitive
/// integer coefficients with positive leading coefficient. Same real zero
/// set as `p`; no repeated factors.
pub fn square_free_part(p: &TriPoly) -> Result<TriPoly, PolyError> {
    if p.is_zero() {
        return Err(PolyError::ZeroPolynomial);
    }
    if p.is_constant() {
        return Ok(TriPoly::one());
    }
    let n = p.to_nested();
    let mut g = n.clone();
    for axis in 0..3 {
        let partial = p.partial(axis);
        if !partial.is_zero() {
            g = poly_gcd(&g, &partial.to_nested());
        }
    }
    let sf = n.exact_div_poly(&g).expect("gcd divides p");
    Ok(TriPoly::from_nested(&sf).canonical())
}

/// Exact restriction of `p` to the parametrized line `t -> base + t*dir`.
pub fn restrict_to_line(p: &TriPoly, l: &Line3) -> UniPoly {
    let [dx, dy, dz] = l.dir().as_rats();
    let comps = [
        UniPoly::new(vec![l.base().x.clone(), dx]),
        UniPoly::new(vec![l.base().y.clone(), dy]),
        UniPoly::new(vec![l.base().z.clone(), dz]),
    ];
    restrict_to_components(p, [&comps[0], &comps[1], &comps[2]])
}

/// Exact restriction of `p` to a polynomial path `t -> (c0(t), c1(t), c2(t))`.
pub fn restrict_to_components(p: &TriPoly, comps: [&UniPoly; 3]) -> UniPoly {
    let max = p.terms().fold([0u32; 3], |acc, (m, _)| {
        [acc[0].max(m.ex), acc[1].max(m.ey), acc[2].max(m.ez)]
    });
    let pow_table = |q: &UniPoly, n: u32| -> Vec<UniPoly> {
        let mut t = Vec::with_capacity(n as usize + 1);
        t.push(UniPoly::one());
        for i in 1..=n as usize {
            t.push(t[i - 1].mul(q));
        }
        t
    };
    let px = pow_table(comps[0], max[0]);
    let py = pow_table(comps[1], max[1]);
    let pz = pow_table(comps[2], max[2]);
    let mut acc = UniPoly::zero();
    for (m, c) in p.terms() {
        let term = px[m.ex as usize]
            .mul(&py[m.ey as usize])
            .mul(&pz[m.ez as usize])
            .scale(c);
        acc = acc.add(&term);
    }
    acc
}

/// Number of distinct real roots of a nonzero univariate polynomial.
pub fn sturm_distinct_real_roots(u: &UniPoly) -> Result<usize, PolyError> {
    if u.is_zero() {
        return Err(PolyError::ZeroPolynomial);
    }
    Ok(distinct_real_roots(u))
}

/// Distinct real roots in the open interval `(lo, hi)`; endpoint roots are
/// not counted.
pub fn sturm_distinct_real_roots_in(u: &UniPoly, lo: &Rat, hi: &Rat) -> Result<usize, PolyError> {
    if u.is_zero() {
        return Err(PolyError::ZeroPolynomial);
    }
    Ok(distinct_roots_in_open(u, lo, hi))
}

/// How a line meets the zero set Z(p).
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum LineZeroSetIncidence {
    /// The whole line lies in Z(p).
    Contained,
    /// The line meets Z(p) in exactly this many points.
    Count(usize),
}

/// Classifies the intersection of a line with Z(p): either the line is
/// contained, or it meets Z(p) in at most `deg p` points, counted exactly.
pub fn line_zero_set_incidences(
    p: &TriPoly,
    l: &Line3,
) -> Result<LineZeroSetIncidence, PolyError> {
    if p.is_zero() {
        return Err(PolyError::ZeroPolynomial);
    }
    let r = restrict_to_line(p, l);
    if r.is_zero() {
        return Ok(LineZeroSetIncidence::Contained);
    }
    let count = distinct_real_roots(&r);
    debug_assert!(count <= p.degree() as usize);
    Ok(LineZeroSetIncidence::Count(count))
}

/// Whether `x` is a critical point of Z(p): the square-free part and its
/// whole gradient vanish at `x`.
pub fn is_critical_point(p: &TriPoly, x: &Point3) -> Result<bool, PolyError> {
    let sf = square_free_part(p)?;
    Ok(sf.eval(x).is_zero() && gradient(&sf).eval_is_zero(x))
}

/// Whether `l` is a critical line of Z(p): every point of `l` is critical.
/// The line must lie in Z(p) (equivalently Z of the square-free part).
pub fn is_critical_line(p: &TriPoly, l: &Line3) -> Result<bool, PolyError> {
    let sf = square_free_part(p)?;
    if !restrict_to_line(&sf, l).is_zero() {
        return Err(PolyError::LineNotInZeroSet);
    }
    Ok(gradient(&sf)
        .components()
        .iter()
        .all(|g| restrict_to_line(g, l).is_zero()))
}

/// The critical lines of Z(p) among `candidates`: candidates not contained in
/// Z(p) are skipped, contained candidates are kept when critical. Output is
/// sorted and deduplicated.
pub fn critical_line_census(p: &TriPoly, candidates: &[Line3]) -> Result<Vec<Line3>, PolyError> {
    if p.is_zero() {
        return Err(PolyError::ZeroPolynomial);
    }
    // Containment w.r.t. p equals containment w.r.t. its square-free part;
    // the (potentially expensive) square-free computation is deferred until
    // a contained candidate exists.
    let contained: Vec<&Line3> = candidates
        .iter()
        .filter(|l| restrict_to_line(p, l).is_zero())
        .collect();
    if contained.is_empty() {
        return Ok(Vec::new());
    }
    let sf = square_free_part(p)?;
    let grad = gradient(&sf);
    let mut out: Vec<Line3> = contained
        .into_iter()
        .filter(|l| {
            grad.components()
                .iter()
                .all(|g| restrict_to_line(g, l).is_zero())
        })
        .cloned()
        .collect();
    out.sort();
    out.dedup();
    Ok(out)
}

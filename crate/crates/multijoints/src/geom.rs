//! Points, directions, and canonical lines in R^3.
//!
//! Lines carry a canonical (base, direction) pair so that structural equality
//! coincides with equality of point sets: the direction is a primitive integer
//! vector with positive leading entry, and the base point is the point of the
//! line whose pivot coordinate (the first coordinate where the direction is
//! nonzero) equals zero.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::rat::Rat;

/// Geometry construction errors.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum GeomError {
    /// A direction vector was zero.
    #[error("zero direction vector")]
    ZeroDirection,
}

/// A point of R^3 with exact rational coordinates.
///
/// Ordered lexicographically by (x, y, z); serialized as a 3-array of
/// `"num/den"` strings.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Point3 {
    pub x: Rat,
    pub y: Rat,
    pub z: Rat,
}

impl Point3 {
    pub fn new(x: Rat, y: Rat, z: Rat) -> Self {
        Point3 { x, y, z }
    }

    pub fn origin() -> Self {
        Point3::new(Rat::zero(), Rat::zero(), Rat::zero())
    }

    /// Integer-coordinate convenience constructor.
    pub fn from_ints(x: i64, y: i64, z: i64) -> Self {
        Point3::new(Rat::from_int(x), Rat::from_int(y), Rat::from_int(z))
    }

    pub fn coords(&self) -> [&Rat; 3] {
        [&self.x, &self.y, &self.z]
    }

    pub fn coord(&self, axis: usize) -> &Rat {
        match axis {
            0 => &self.x,
            1 => &self.y,
            2 => &self.z,
            _ => panic!("axis out of range"),
        }
    }
}

impl fmt::Debug for Point3 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {}, {})", self.x, self.y, self.z)
    }
}

/// A canonical direction: primitive integer components (gcd 1), first nonzero
/// component positive. Two parallel vectors canonicalize to the same value.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Dir3 {
    d: [BigInt; 3],
}

impl Dir3 {
    /// Canonicalizes an arbitrary rational vector. Fails on the zero vector.
    pub fn new(dx: Rat, dy: Rat, dz: Rat) -> Result<Self, GeomError> {
        if dx.is_zero() && dy.is_zero() && dz.is_zero() {
            return Err(GeomError::ZeroDirection);
        }
        // Clear denominators, then divide by the gcd of the integer entries.
        let lcm = dx.denom().lcm(dy.denom()).lcm(dz.denom());
        let mut v = [
            dx.numer() * (&lcm / dx.denom()),
            dy.numer() * (&lcm / dy.denom()),
            dz.numer() * (&lcm / dz.denom()),
        ];
        let g = v[0].gcd(&v[1]).gcd(&v[2]);
        for c in v.iter_mut() {
            *c = &*c / &g;
        }
        let lead_negative = v.iter().find(|c| !c.is_zero()).is_some_and(|c| c.is_negative());
        if lead_negative {
            for c in v.iter_mut() {
                *c = -&*c;
            }
        }
        Ok(Dir3 { d: v })
    }

    pub fn from_ints(dx: i64, dy: i64, dz: i64) -> Result<Self, GeomError> {
        Dir3::new(Rat::from_int(dx), Rat::from_int(dy), Rat::from_int(dz))
    }

    pub fn components(&self) -> [&BigInt; 3] {
        [&self.d[0], &self.d[1], &self.d[2]]
    }

    pub fn component(&self, axis: usize) -> &BigInt {
        &self.d[axis]
    }

    /// Index of the first nonzero component (0 = x, 1 = y, 2 = z).
    pub fn pivot(&self) -> usize {
        self.d.iter().position(|c| !c.is_zero()).expect("nonzero invariant")
    }

    pub fn as_rats(&self) -> [Rat; 3] {
        [
            Rat::from_bigint(self.d[0].clone()),
            Rat::from_bigint(self.d[1].clone()),
            Rat::from_bigint(self.d[2].clone()),
        ]
    }

    /// Exact cross product (not canonicalized; may be zero for parallel inputs).
    fn cross(&self, other: &Dir3) -> [BigInt; 3] {
        let a = &self.d;
        let b = &other.d;
        [
            &a[1] * &b[2] - &a[2] * &b[1],
            &a[2] * &b[0] - &a[0] * &b[2],
            &a[0] * &b[1] - &a[1] * &b[0],
        ]
    }

    pub fn is_parallel(&self, other: &Dir3) -> bool {
        // Canonical forms make parallelism structural equality.
        self == other
    }
}

impl fmt::Debug for Dir3 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}, {}, {}]", self.d[0], self.d[1], self.d[2])
    }
}

impl Serialize for Dir3 {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        self.as_rats().serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for Dir3 {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let [dx, dy, dz] = <[Rat; 3]>::deserialize(deserializer)?;
        Dir3::new(dx, dy, dz).map_err(serde::de::Error::custom)
    }
}

/// A line in canonical form. Construct via [`canonicalize_line`] (or
/// [`Line3::through`]); structural equality then equals point-set equality.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct Line3 {
    base: Point3,
    dir: Dir3,
}

impl Line3 {
    /// Canonical line through `p` with direction `d`.
    pub fn through(p: &Point3, d: &Dir3) -> Self {
        canonicalize_line(p, d)
    }

    /// Canonical line through `p` with integer direction components.
    pub fn through_ints(p: &Point3, dx: i64, dy: i64, dz: i64) -> Result<Self, GeomError> {
        Ok(canonicalize_line(p, &Dir3::from_ints(dx, dy, dz)?))
    }

    pub fn base(&self) -> &Point3 {
        &self.base
    }

    pub fn dir(&self) -> &Dir3 {
        &self.dir
    }

    /// The point `base + t * dir`.
    pub fn at(&self, t: &Rat) -> Point3 {
        let [dx, dy, dz] = self.dir.as_rats();
        Point3::new(
            &self.base.x + t * dx,
            &self.base.y + t * dy,
            &self.base.z + t * dz,
        )
    }
}

impl fmt::Debug for Line3 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Line3 {{ base: {:?}, dir: {:?} }}", self.base, self.dir)
    }
}

impl<'de> Deserialize<'de> for Line3 {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        #[derive(Deserialize)]
        struct Raw {
            base: Point3,
            dir: Dir3,
        }
        let raw = Raw::deserialize(deserializer)?;
        // Re-canonicalize: the base in the file may be any point of the line.
        Ok(canonicalize_line(&raw.base, &raw.dir))
    }
}

/// Canonical form of the line through `p` with direction `d`: the direction is
/// already canonical, and the base is the point of the line whose coordinate
/// at the direction's pivot axis is zero.
pub fn canonicalize_line(p: &Point3, d: &Dir3) -> Line3 {
    let pivot = d.pivot();
    let t = -(p.coord(pivot) / Rat::from_bigint(d.component(pivot).clone()));
    let [dx, dy, dz] = d.as_rats();
    let base = Point3::new(&p.x + &t * dx, &p.y + &t * dy, &p.z + &t * dz);
    debug_assert!(base.coord(pivot).is_zero());
    Line3 {
        base,
        dir: d.clone(),
    }
}

/// Whether three directions span R^3, decided by an exact integer 3x3
/// determinant.
pub fn span3(a: &Dir3, b: &Dir3, c: &Dir3) -> bool {
    !det3(&a.d, &b.d, &c.d).is_zero()
}

fn det3(a: &[BigInt; 3], b: &[BigInt; 3], c: &[BigInt; 3]) -> BigInt {
    &a[0] * (&b[1] * &c[2] - &b[2] * &c[1]) - &a[1] * (&b[0] * &c[2] - &b[2] * &c[0])
        + &a[2] * (&b[0] * &c[1] - &b[1] * &c[0])
}

/// Result of intersecting two lines.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum LineIntersection {
    /// Disjoint (parallel or skew).
    Empty,
    /// Exactly one common point.
    Point(Point3),
    /// The same line.
    Identical,
}

/// Exact intersection of two canonical lines.
pub fn line_intersect(l1: &Line3, l2: &Line3) -> LineIntersection {
    if l1 == l2 {
        return LineIntersection::Identical;
    }
    if l1.dir == l2.dir {
        // Distinct parallel lines share no point.
        return LineIntersection::Empty;
    }
    let w = [
        &l2.base.x - &l1.base.x,
        &l2.base.y - &l1.base.y,
        &l2.base.z - &l1.base.z,
    ];
    // Coplanarity test: det(w, d1, d2) = w . (d1 x d2).
    let n = l1.dir.cross(&l2.dir);
    let mut triple = Rat::zero();
    for i in 0..3 {
        triple += &w[i] * Rat::from_bigint(n[i].clone());
    }
    if !triple.is_zero() {
        return LineIntersection::Empty;
    }
    // Coplanar, non-parallel: solve base1 + t d1 = base2 + s d2 from two
    // axes where the 2x2 system is invertible.
    for i in 0..3 {
        for j in (i + 1)..3 {
            let a = Rat::from_bigint(l1.dir.d[i].clone());
            let b = -Rat::from_bigint(l2.dir.d[i].clone());
            let c = Rat::from_bigint(l1.dir.d[j].clone());
            let d = -Rat::from_bigint(l2.dir.d[j].clone());
            let det = &a * &d - &b * &c;
            if det.is_zero() {
                continue;
            }
            let t = (&w[i] * &d - &b * &w[j]) / &det;
            return LineIntersection::Point(l1.at(&t));
        }
    }
    unreachable!("non-parallel directions admit an invertible 2x2 minor");
}

/// Whether `p` lies on `l`, via an exact parallelism test of `p - base`
/// against the direction.
pub fn point_on_line(p: &Point3, l: &Line3) -> bool {
    let w = [&p.x - &l.base.x, &p.y - &l.base.y, &p.z - &l.base.z];
    let d = &l.dir.d;
    let cx = &w[1] * Rat::from_bigint(d[2].clone()) - &w[2] * Rat::from_bigint(d[1].clone());
    let cy = &w[2] * Rat::from_bigint(d[0].clone()) - &w[0] * Rat::from_bigint(d[2].clone());
    let cz = &w[0] * Rat::from_bigint(d[1].clone()) - &w[1] * Rat::from_bigint(d[0].clone());
    cx.is_zero() && cy.is_zero() && cz.is_zero()
}

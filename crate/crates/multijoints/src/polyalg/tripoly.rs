//! Sparse trivariate polynomials over Q with graded-lex monomial order.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::geom::Point3;
use crate::polyalg::nested::{Poly, ZPoly3};
use crate::rat::Rat;

/// Monomial x^ex y^ey z^ez, ordered graded-lexicographically with x > y > z.
#[derive(Clone, Copy, PartialEq, Eq, Debug, Hash)]
pub struct Mono3 {
    pub ex: u32,
    pub ey: u32,
    pub ez: u32,
}

impl Mono3 {
    pub fn new(ex: u32, ey: u32, ez: u32) -> Self {
        Mono3 { ex, ey, ez }
    }

    pub fn total_degree(&self) -> u32 {
        self.ex + self.ey + self.ez
    }
}

impl Ord for Mono3 {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        (self.total_degree(), self.ex, self.ey).cmp(&(
            other.total_degree(),
            other.ex,
            other.ey,
        ))
    }
}

impl PartialOrd for Mono3 {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

/// Polynomial in Q[x, y, z]; only nonzero terms stored.
///
/// Serialized as the term list `[[ex, ey, ez, "num/den"], ...]` in ascending
/// graded-lex order.
#[derive(Clone, PartialEq, Eq, Default)]
pub struct TriPoly {
    terms: BTreeMap<Mono3, Rat>,
}

impl TriPoly {
    pub fn zero() -> Self {
        TriPoly::default()
    }

    pub fn one() -> Self {
        TriPoly::constant(Rat::one())
    }

    pub fn constant(c: Rat) -> Self {
        let mut t = TriPoly::zero();
        if !c.is_zero() {
            t.terms.insert(Mono3::new(0, 0, 0), c);
        }
        t
    }

    /// The coordinate variable on `axis` (0 = x, 1 = y, 2 = z).
    pub fn var(axis: usize) -> Self {
        let m = match axis {
            0 => Mono3::new(1, 0, 0),
            1 => Mono3::new(0, 1, 0),
            2 => Mono3::new(0, 0, 1),
            _ => panic!("axis out of range"),
        };
        let mut t = TriPoly::zero();
        t.terms.insert(m, Rat::one());
        t
    }

    pub fn from_terms(terms: impl IntoIterator<Item = (u32, u32, u32, Rat)>) -> Self {
        let mut p = TriPoly::zero();
        for (ex, ey, ez, c) in terms {
            p.add_term(Mono3::new(ex, ey, ez), c);
        }
        p
    }

    pub fn add_term(&mut self, m: Mono3, c: Rat) {
        if c.is_zero() {
            return;
        }
        let entry = self.terms.entry(m).or_default();
        *entry += c;
        if entry.is_zero() {
            self.terms.remove(&m);
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Mono3, &Rat)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.keys().all(|m| m.total_degree() == 0)
    }

    /// Maximum total degree of stored monomials; 0 for the zero polynomial.
    pub fn degree(&self) -> u32 {
        self.terms
            .keys()
            .next_back()
            .map_or(0, Mono3::total_degree)
    }

    pub fn add(&self, o: &Self) -> Self {
        let mut out = self.clone();
        for (m, c) in &o.terms {
            out.add_term(*m, c.clone());
        }
        out
    }

    pub fn sub(&self, o: &Self) -> Self {
        let mut out = self.clone();
        for (m, c) in &o.terms {
            out.add_term(*m, -c);
        }
        out
    }

    pub fn neg(&self) -> Self {
        TriPoly {
            terms: self.terms.iter().map(|(m, c)| (*m, -c)).collect(),
        }
    }

    pub fn mul(&self, o: &Self) -> Self {
        let mut out = TriPoly::zero();
        for (ma, ca) in &self.terms {
            for (mb, cb) in &o.terms {
                out.add_term(
                    Mono3::new(ma.ex + mb.ex, ma.ey + mb.ey, ma.ez + mb.ez),
                    ca * cb,
                );
            }
        }
        out
    }

    pub fn scale(&self, c: &Rat) -> Self {
        if c.is_zero() {
            return TriPoly::zero();
        }
        TriPoly {
            terms: self.terms.iter().map(|(m, a)| (*m, a * c)).collect(),
        }
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut acc = TriPoly::one();
        for _ in 0..e {
            acc = acc.mul(self);
        }
        acc
    }

    pub fn eval(&self, p: &Point3) -> Rat {
        let max = self.terms.keys().fold([0u32; 3], |acc, m| {
            [acc[0].max(m.ex), acc[1].max(m.ey), acc[2].max(m.ez)]
        });
        let pows = |v: &Rat, n: u32| -> Vec<Rat> {
            let mut t = Vec::with_capacity(n as usize + 1);
            t.push(Rat::one());
            for i in 1..=n as usize {
                t.push(&t[i - 1] * v);
            }
            t
        };
        let (px, py, pz) = (
            pows(&p.x, max[0]),
            pows(&p.y, max[1]),
            pows(&p.z, max[2]),
        );
        let mut acc = Rat::zero();
        for (m, c) in &self.terms {
            acc += c * &px[m.ex as usize] * &py[m.ey as usize] * &pz[m.ez as usize];
        }
        acc
    }

    pub fn eval_sign(&self, p: &Point3) -> i8 {
        self.eval(p).sign()
    }

    /// Partial derivative along `axis`.
    pub fn partial(&self, axis: usize) -> Self {
        let mut out = TriPoly::zero();
        for (m, c) in &self.terms {
            let (e, dm) = match axis {
                0 => (m.ex, Mono3::new(m.ex.wrapping_sub(1), m.ey, m.ez)),
                1 => (m.ey, Mono3::new(m.ex, m.ey.wrapping_sub(1), m.ez)),
                2 => (m.ez, Mono3::new(m.ex, m.ey, m.ez.wrapping_sub(1))),
                _ => panic!("axis out of range"),
            };
            if e > 0 {
                out.add_term(dm, c * Rat::from_int(e as i64));
            }
        }
        out
    }

    /// Canonical associate: primitive integer coefficients with the leading
    /// (graded-lex maximal) coefficient positive.
    pub fn canonical(&self) -> Self {
        if self.is_zero() {
            return TriPoly::zero();
        }
        let lcm = self
            .terms
            .values()
            .fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
        let ints: Vec<(Mono3, BigInt)> = self
            .terms
            .iter()
            .map(|(m, c)| (*m, c.numer() * (&lcm / c.denom())))
            .collect();
        let content = ints
            .iter()
            .fold(BigInt::from(0), |acc, (_, c)| acc.gcd(c));
        let lead_neg = ints.last().expect("nonzero").1.is_negative();
        TriPoly {
            terms: ints
                .into_iter()
                .map(|(m, c)| {
                    let v = &c / &content;
                    (m, Rat::from_bigint(if lead_neg { -v } else { v }))
                })
                .collect(),
        }
    }

    /// Nested integer representation: polynomial in z whose coefficients are
    /// polynomials in y over Z[x]. Denominators cleared (positive scaling).
    pub fn to_nested(&self) -> ZPoly3 {
        if self.is_zero() {
            return Poly::zero();
        }
        let lcm = self
            .terms
            .values()
            .fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
        let max = self.terms.keys().fold([0usize; 3], |acc, m| {
            [
                acc[0].max(m.ex as usize),
                acc[1].max(m.ey as usize),
                acc[2].max(m.ez as usize),
            ]
        });
        let mut cube =
            vec![vec![vec![BigInt::from(0); max[0] + 1]; max[1] + 1]; max[2] + 1];
        for (m, c) in &self.terms {
            cube[m.ez as usize][m.ey as usize][m.ex as usize] =
                c.numer() * (&lcm / c.denom());
        }
        Poly::from_coeffs(
            cube.into_iter()
                .map(|yplane| {
                    Poly::from_coeffs(yplane.into_iter().map(Poly::from_coeffs).collect())
                })
                .collect(),
        )
    }

    pub fn from_nested(p: &ZPoly3) -> Self {
        let mut out = TriPoly::zero();
        for (ez, yp) in p.coeffs().iter().enumerate() {
            for (ey, xp) in yp.coeffs().iter().enumerate() {
                for (ex, c) in xp.coeffs().iter().enumerate() {
                    out.add_term(
                        Mono3::new(ex as u32, ey as u32, ez as u32),
                        Rat::from_bigint(c.clone()),
                    );
                }
            }
        }
        out
    }
}

impl fmt::Debug for TriPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (m, c) in self.terms.iter().rev() {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            write!(f, "{}", c)?;
            for (sym, e) in [("x", m.ex), ("y", m.ey), ("z", m.ez)] {
                match e {
                    0 => {}
                    1 => write!(f, "*{}", sym)?,
                    _ => write!(f, "*{}^{}", sym, e)?,
                }
            }
        }
        Ok(())
    }
}

impl Serialize for TriPoly {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let terms: Vec<(u32, u32, u32, &Rat)> = self
            .terms
            .iter()
            .map(|(m, c)| (m.ex, m.ey, m.ez, c))
            .collect();
        terms.serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for TriPoly {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let terms = Vec::<(u32, u32, u32, Rat)>::deserialize(deserializer)?;
        Ok(TriPoly::from_terms(terms))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn x() -> TriPoly {
        TriPoly::var(0)
    }
    fn y() -> TriPoly {
        TriPoly::var(1)
    }
    fn z() -> TriPoly {
        TriPoly::var(2)
    }

    #[test]
    fn graded_lex_order() {
        // Degree-2 block, descending: x^2, xy, xz, y^2, yz, z^2.
        let mut monos = vec![
            Mono3::new(0, 0, 2),
            Mono3::new(1, 1, 0),
            Mono3::new(0, 2, 0),
            Mono3::new(2, 0, 0),
            Mono3::new(0, 1, 1),
            Mono3::new(1, 0, 1),
        ];
        monos.sort();
        monos.reverse();
        assert_eq!(
            monos,
            vec![
                Mono3::new(2, 0, 0),
                Mono3::new(1, 1, 0),
                Mono3::new(1, 0, 1),
                Mono3::new(0, 2, 0),
                Mono3::new(0, 1, 1),
                Mono3::new(0, 0, 2),
            ]
        );
        // Degree dominates.
        assert!(Mono3::new(0, 0, 2) > Mono3::new(1, 0, 0));
    }

    #[test]
    fn arithmetic_and_eval() {
        // p = x*y - 1 at (3, 5, 7) = 14.
        let p = x().mul(&y()).sub(&TriPoly::one());
        assert_eq!(p.eval(&Point3::from_ints(3, 5, 7)), Rat::from_int(14));
        assert_eq!(p.degree(), 2);
        // (x + y + z)^2 expands to 6 terms.
        let s = x().add(&y()).add(&z());
        assert_eq!(s.pow(2).num_terms(), 6);
        assert_eq!(s.sub(&s), TriPoly::zero());
    }

    #[test]
    fn partial_derivatives() {
        // d/dx (x^2 y + z) = 2xy.
        let p = x().pow(2).mul(&y()).add(&z());
        assert_eq!(p.partial(0), x().mul(&y()).scale(&Rat::from_int(2)));
        assert_eq!(p.partial(1), x().pow(2));
        assert_eq!(p.partial(2), TriPoly::one());
        assert_eq!(TriPoly::constant(Rat::from_int(9)).partial(0), TriPoly::zero());
    }

    #[test]
    fn canonical_form() {
        // (2/3) x - (4/3) y canonicalizes to x - 2y.
        let p = x().scale(&Rat::ratio(2, 3)).sub(&y().scale(&Rat::ratio(4, 3)));
        let c = p.canonical();
        assert_eq!(c, x().sub(&y().scale(&Rat::from_int(2))));
        // Leading sign flips: -x + y -> x - y.
        let q = x().neg().add(&y());
        assert_eq!(q.canonical(), x().sub(&y()));
    }

    #[test]
    fn nested_round_trip() {
        let p = x()
            .pow(2)
            .mul(&z())
            .add(&y().scale(&Rat::ratio(1, 2)))
            .sub(&TriPoly::one());
        let nested = p.to_nested();
        // Denominators were cleared by 2.
        assert_eq!(TriPoly::from_nested(&nested), p.scale(&Rat::from_int(2)));
    }

    #[test]
    fn serde_term_list() {
        let p = x().mul(&y()).sub(&TriPoly::one());
        let js = serde_json::to_string(&p).unwrap();
        assert_eq!(js, r#"[[0,0,0,"-1/1"],[1,1,0,"1/1"]]"#);
        let back: TriPoly = serde_json::from_str(&js).unwrap();
        assert_eq!(back, p);
    }
}

//! Univariate polynomials with exact rational coefficients.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed};
use serde::{Deserialize, Deserializer, Serialize};

use crate::polyalg::nested::{poly_gcd, Poly, ZPoly};
use crate::rat::Rat;

/// Dense univariate polynomial over Q; coefficients ascending, leading
/// coefficient nonzero (zero polynomial = empty coefficient list).
///
/// Serialized as the ascending coefficient array of `"num/den"` strings.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(transparent)]
pub struct UniPoly {
    coeffs: Vec<Rat>,
}

impl UniPoly {
    pub fn zero() -> Self {
        UniPoly { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        UniPoly::constant(Rat::one())
    }

    pub fn constant(c: Rat) -> Self {
        UniPoly::new(vec![c])
    }

    /// The variable t.
    pub fn var() -> Self {
        UniPoly::new(vec![Rat::zero(), Rat::one()])
    }

    pub fn new(mut coeffs: Vec<Rat>) -> Self {
        while coeffs.last().is_some_and(Rat::is_zero) {
            coeffs.pop();
        }
        UniPoly { coeffs }
    }

    pub fn from_ints(coeffs: &[i64]) -> Self {
        UniPoly::new(coeffs.iter().map(|&c| Rat::from_int(c)).collect())
    }

    pub fn monomial(deg: usize, c: Rat) -> Self {
        if c.is_zero() {
            return UniPoly::zero();
        }
        let mut coeffs = vec![Rat::zero(); deg + 1];
        coeffs[deg] = c;
        UniPoly { coeffs }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.coeffs.len() <= 1
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn lead(&self) -> &Rat {
        self.coeffs.last().expect("leading coefficient of zero polynomial")
    }

    pub fn coeff(&self, i: usize) -> Rat {
        self.coeffs.get(i).cloned().unwrap_or_else(Rat::zero)
    }

    pub fn coeffs(&self) -> &[Rat] {
        &self.coeffs
    }

    pub fn add(&self, o: &Self) -> Self {
        let n = self.coeffs.len().max(o.coeffs.len());
        UniPoly::new((0..n).map(|i| self.coeff(i) + o.coeff(i)).collect())
    }

    pub fn sub(&self, o: &Self) -> Self {
        let n = self.coeffs.len().max(o.coeffs.len());
        UniPoly::new((0..n).map(|i| self.coeff(i) - o.coeff(i)).collect())
    }

    pub fn neg(&self) -> Self {
        UniPoly {
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
    }

    pub fn mul(&self, o: &Self) -> Self {
        if self.is_zero() || o.is_zero() {
            return UniPoly::zero();
        }
        let mut out = vec![Rat::zero(); self.coeffs.len() + o.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in o.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        UniPoly::new(out)
    }

    pub fn scale(&self, c: &Rat) -> Self {
        if c.is_zero() {
            return UniPoly::zero();
        }
        UniPoly {
            coeffs: self.coeffs.iter().map(|a| a * c).collect(),
        }
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut acc = UniPoly::one();
        for _ in 0..e {
            acc = acc.mul(self);
        }
        acc
    }

    /// Horner evaluation.
    pub fn eval(&self, x: &Rat) -> Rat {
        let mut acc = Rat::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * x + c;
        }
        acc
    }

    pub fn derivative(&self) -> Self {
        if self.coeffs.len() <= 1 {
            return UniPoly::zero();
        }
        UniPoly::new(
            self.coeffs[1..]
                .iter()
                .enumerate()
                .map(|(i, c)| c * Rat::from_int(i as i64 + 1))
                .collect(),
        )
    }

    /// Euclidean division over Q: `self = q * div + r` with `deg r < deg div`.
    pub fn divrem(&self, div: &Self) -> (Self, Self) {
        assert!(!div.is_zero(), "division by zero polynomial");
        let db = div.degree().unwrap();
        let mut r = self.clone();
        let mut q = vec![Rat::zero(); self.coeffs.len()];
        while let Some(dr) = r.degree() {
            if dr < db {
                break;
            }
            let c = r.lead() / div.lead();
            q[dr - db] = c.clone();
            r = r.sub(&div.mul(&UniPoly::monomial(dr - db, c)));
        }
        (UniPoly::new(q), r)
    }

    /// Exact division; `None` if `div` does not divide `self`.
    pub fn exact_div(&self, div: &Self) -> Option<Self> {
        let (q, r) = self.divrem(div);
        r.is_zero().then_some(q)
    }

    /// Composition `self(inner(t))`.
    pub fn compose(&self, inner: &Self) -> Self {
        let mut acc = UniPoly::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc.mul(inner).add(&UniPoly::constant(c.clone()));
        }
        acc
    }

    /// Substitution t -> -t.
    pub fn reflect(&self) -> Self {
        UniPoly {
            coeffs: self
                .coeffs
                .iter()
                .enumerate()
                .map(|(i, c)| if i % 2 == 1 { -c } else { c.clone() })
                .collect(),
        }
    }

    /// Integer coefficient vector after clearing denominators (content NOT
    /// removed), plus the common denominator used.
    pub fn clear_denominators(&self) -> (Vec<BigInt>, BigInt) {
        let lcm = self
            .coeffs
            .iter()
            .fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
        let ints = self
            .coeffs
            .iter()
            .map(|c| c.numer() * (&lcm / c.denom()))
            .collect();
        (ints, lcm)
    }

    /// The canonical integer representative: primitive coefficients, positive
    /// leading coefficient. Zero stays zero.
    pub fn primitive_integer(&self) -> ZPoly {
        if self.is_zero() {
            return Poly::zero();
        }
        let (ints, _) = self.clear_denominators();
        let mut p = Poly::from_coeffs(ints).primitive();
        if p.lead().is_negative() {
            p = p.neg();
        }
        p
    }

    /// Rescales by a positive rational so coefficients are integers with
    /// content 1. Signs (hence Sturm variation counts) are preserved; this is
    /// not the canonical form, which also fixes the leading sign.
    pub fn positive_primitive(&self) -> Self {
        if self.is_zero() {
            return UniPoly::zero();
        }
        let (ints, _) = self.clear_denominators();
        let p = Poly::from_coeffs(ints).primitive();
        UniPoly::from_zpoly(&p)
    }

    pub fn from_zpoly(p: &ZPoly) -> Self {
        UniPoly::new(p.coeffs().iter().map(|c| Rat::from_bigint(c.clone())).collect())
    }

    /// Gcd, canonicalized to primitive integer coefficients with positive
    /// leading coefficient (1 for coprime inputs, 0 only if both are zero).
    pub fn gcd(&self, o: &Self) -> Self {
        if self.is_zero() {
            return UniPoly::from_zpoly(&o.primitive_integer());
        }
        if o.is_zero() {
            return UniPoly::from_zpoly(&self.primitive_integer());
        }
        let a = self.primitive_integer();
        let b = o.primitive_integer();
        UniPoly::from_zpoly(&poly_gcd(&a, &b).canonical())
    }

    /// Square-free part `self / gcd(self, self')`, canonicalized like
    /// [`UniPoly::gcd`]. Same distinct complex (hence real) roots, all simple.
    pub fn square_free(&self) -> Self {
        if self.is_zero() {
            return UniPoly::zero();
        }
        if self.is_constant() {
            return UniPoly::one();
        }
        let g = self.gcd(&self.derivative());
        let sf = self.exact_div(&g).expect("gcd divides");
        UniPoly::from_zpoly(&sf.primitive_integer())
    }
}

impl fmt::Debug for UniPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            match i {
                0 => write!(f, "{}", c)?,
                1 => write!(f, "{}*t", c)?,
                _ => write!(f, "{}*t^{}", c, i)?,
            }
        }
        Ok(())
    }
}

impl<'de> Deserialize<'de> for UniPoly {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let coeffs = Vec::<Rat>::deserialize(deserializer)?;
        Ok(UniPoly::new(coeffs))
    }
}

//! Dense generic polynomials over an integral domain.
//!
//! Multivariate computations nest these: `Poly<BigInt>` is Z[x],
//! `Poly<Poly<BigInt>>` is Z[x][y], and so on. Gcds use pseudo-remainder
//! sequences with the full content stripped at every step, and resultants use
//! fraction-free Bareiss elimination on the Sylvester matrix, so every
//! intermediate division is exact.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};

/// Coefficient contract: an integral domain with gcd and a canonical choice
/// of associate (`is_neg` marks elements that negate to canonical form).
pub trait Ring: Clone + PartialEq + std::fmt::Debug {
    fn zero() -> Self;
    fn one() -> Self;
    fn is_zero(&self) -> bool;
    fn neg_of(&self) -> Self;
    fn add_ref(&self, o: &Self) -> Self;
    fn sub_ref(&self, o: &Self) -> Self;
    fn mul_ref(&self, o: &Self) -> Self;
    /// Exact division; `None` when `o` does not divide `self`.
    fn exact_div(&self, o: &Self) -> Option<Self>;
    /// Gcd, already in canonical-associate form.
    fn gcd_ref(&self, o: &Self) -> Self;
    fn is_neg(&self) -> bool;
}

impl Ring for BigInt {
    fn zero() -> Self {
        Zero::zero()
    }
    fn one() -> Self {
        BigInt::from(1)
    }
    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }
    fn neg_of(&self) -> Self {
        -self
    }
    fn add_ref(&self, o: &Self) -> Self {
        self + o
    }
    fn sub_ref(&self, o: &Self) -> Self {
        self - o
    }
    fn mul_ref(&self, o: &Self) -> Self {
        self * o
    }
    fn exact_div(&self, o: &Self) -> Option<Self> {
        if Zero::is_zero(o) {
            return None;
        }
        let (q, r) = self.div_rem(o);
        Zero::is_zero(&r).then_some(q)
    }
    fn gcd_ref(&self, o: &Self) -> Self {
        Integer::gcd(self, o)
    }
    fn is_neg(&self) -> bool {
        self.is_negative()
    }
}

/// Dense polynomial; coefficients ascending, leading coefficient nonzero
/// (the zero polynomial is the empty vector).
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Poly<T: Ring> {
    coeffs: Vec<T>,
}

pub type ZPoly = Poly<BigInt>;
pub type ZPoly2 = Poly<ZPoly>;
pub type ZPoly3 = Poly<ZPoly2>;

impl<T: Ring> Poly<T> {
    pub fn zero() -> Self {
        Poly { coeffs: Vec::new() }
    }

    pub fn constant(c: T) -> Self {
        Poly::from_coeffs(vec![c])
    }

    pub fn from_coeffs(mut coeffs: Vec<T>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        Poly { coeffs }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn lead(&self) -> &T {
        self.coeffs.last().expect("leading coefficient of zero polynomial")
    }

    pub fn coeff(&self, i: usize) -> T {
        self.coeffs.get(i).cloned().unwrap_or_else(T::zero)
    }

    pub fn coeffs(&self) -> &[T] {
        &self.coeffs
    }

    pub fn add(&self, o: &Self) -> Self {
        let n = self.coeffs.len().max(o.coeffs.len());
        let mut out = Vec::with_capacity(n);
        for i in 0..n {
            out.push(self.coeff(i).add_ref(&o.coeff(i)));
        }
        Poly::from_coeffs(out)
    }

    pub fn sub(&self, o: &Self) -> Self {
        let n = self.coeffs.len().max(o.coeffs.len());
        let mut out = Vec::with_capacity(n);
        for i in 0..n {
            out.push(self.coeff(i).sub_ref(&o.coeff(i)));
        }
        Poly::from_coeffs(out)
    }

    pub fn neg(&self) -> Self {
        Poly {
            coeffs: self.coeffs.iter().map(|c| c.neg_of()).collect(),
        }
    }

    pub fn mul(&self, o: &Self) -> Self {
        if self.is_zero() || o.is_zero() {
            return Poly::zero();
        }
        let mut out = vec![T::zero(); self.coeffs.len() + o.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in o.coeffs.iter().enumerate() {
                out[i + j] = out[i + j].add_ref(&a.mul_ref(b));
            }
        }
        Poly::from_coeffs(out)
    }

    pub fn scale(&self, c: &T) -> Self {
        if c.is_zero() {
            return Poly::zero();
        }
        Poly::from_coeffs(self.coeffs.iter().map(|a| a.mul_ref(c)).collect())
    }

    /// Multiplication by x^k.
    pub fn shift_up(&self, k: usize) -> Self {
        if self.is_zero() {
            return Poly::zero();
        }
        let mut out = vec![T::zero(); k];
        out.extend(self.coeffs.iter().cloned());
        Poly { coeffs: out }
    }

    /// Gcd of all coefficients (canonical associate); zero for the zero poly.
    pub fn content(&self) -> T {
        self.coeffs
            .iter()
            .fold(T::zero(), |acc, c| acc.gcd_ref(c))
    }

    pub fn primitive(&self) -> Self {
        if self.is_zero() {
            return Poly::zero();
        }
        let c = self.content();
        Poly {
            coeffs: self
                .coeffs
                .iter()
                .map(|a| a.exact_div(&c).expect("content divides"))
                .collect(),
        }
    }

    /// Primitive with canonical leading sign.
    pub fn canonical(&self) -> Self {
        let p = self.primitive();
        if !p.is_zero() && p.lead().is_neg() {
            p.neg()
        } else {
            p
        }
    }

    /// Pseudo-remainder of `self` by `div` (`div` nonzero): the remainder of
    /// `lc(div)^k * self` by `div` for the minimal `k` making every step
    /// exact. Coefficient-scaled, so only meaningful up to content.
    pub fn pseudo_rem(&self, div: &Self) -> Self {
        assert!(!div.is_zero(), "pseudo-remainder by zero");
        let db = div.degree().unwrap();
        let lb = div.lead();
        let mut r = self.clone();
        while let Some(dr) = r.degree() {
            if dr < db {
                break;
            }
            let lr = r.lead().clone();
            r = r.scale(lb).sub(&div.shift_up(dr - db).scale(&lr));
            debug_assert!(r.degree().map_or(true, |d| d < dr));
        }
        r
    }

    /// Exact polynomial division; `None` if `div` does not divide `self`.
    pub fn exact_div_poly(&self, div: &Self) -> Option<Self> {
        if div.is_zero() {
            return None;
        }
        if self.is_zero() {
            return Some(Poly::zero());
        }
        let db = div.degree().unwrap();
        let mut r = self.clone();
        let mut q = vec![T::zero(); self.coeffs.len()];
        while let Some(dr) = r.degree() {
            if dr < db {
                return None;
            }
            let c = r.lead().exact_div(div.lead())?;
            q[dr - db] = c.clone();
            r = r.sub(&div.shift_up(dr - db).scale(&c));
            if r.is_zero() {
                return Some(Poly::from_coeffs(q));
            }
        }
        Some(Poly::from_coeffs(q))
    }
}

/// Gcd via a pseudo-remainder sequence with the content stripped at every
/// step; result is canonical (primitive part canonical-signed, scaled by the
/// gcd of the contents).
pub fn poly_gcd<T: Ring>(a: &Poly<T>, b: &Poly<T>) -> Poly<T> {
    if a.is_zero() {
        return b.canonical().scale(&a.content().gcd_ref(&b.content()));
    }
    if b.is_zero() {
        return a.canonical().scale(&a.content().gcd_ref(&b.content()));
    }
    let c = a.content().gcd_ref(&b.content());
    let mut big = a.primitive();
    let mut small = b.primitive();
    if big.degree() < small.degree() {
        std::mem::swap(&mut big, &mut small);
    }
    while !small.is_zero() {
        if small.degree() == Some(0) {
            // Primitive constant: the primitive parts are coprime.
            return Poly::constant(c);
        }
        let r = big.pseudo_rem(&small).primitive();
        big = small;
        small = r;
    }
    let mut g = big;
    if g.lead().is_neg() {
        g = g.neg();
    }
    g.scale(&c)
}

/// Resultant of `a` and `b` with respect to their (outer) variable, by
/// fraction-free Bareiss elimination of the Sylvester matrix. Zero when
/// either input is zero.
pub fn resultant<T: Ring>(a: &Poly<T>, b: &Poly<T>) -> T {
    if a.is_zero() || b.is_zero() {
        return T::zero();
    }
    let m = a.degree().unwrap();
    let n = b.degree().unwrap();
    if m == 0 && n == 0 {
        return T::one();
    }
    if m == 0 {
        return pow_ring(a.lead(), n);
    }
    if n == 0 {
        return pow_ring(b.lead(), m);
    }
    let size = m + n;
    let mut mat: Vec<Vec<T>> = Vec::with_capacity(size);
    // n rows of a's coefficients, descending, shifted.
    for i in 0..n {
        let mut row = vec![T::zero(); size];
        for (k, c) in a.coeffs().iter().rev().enumerate() {
            row[i + k] = c.clone();
        }
        mat.push(row);
    }
    for i in 0..m {
        let mut row = vec![T::zero(); size];
        for (k, c) in b.coeffs().iter().rev().enumerate() {
            row[i + k] = c.clone();
        }
        mat.push(row);
    }
    bareiss_det(mat)
}

fn pow_ring<T: Ring>(base: &T, e: usize) -> T {
    let mut acc = T::one();
    for _ in 0..e {
        acc = acc.mul_ref(base);
    }
    acc
}

/// Fraction-free determinant (Bareiss). Every division is exact because each
/// intermediate entry is a minor of the original matrix.
fn bareiss_det<T: Ring>(mut m: Vec<Vec<T>>) -> T {
    let n = m.len();
    if n == 0 {
        return T::one();
    }
    let mut sign_flip = false;
    let mut prev = T::one();
    for k in 0..n - 1 {
        if m[k][k].is_zero() {
            let Some(swap) = (k + 1..n).find(|&i| !m[i][k].is_zero()) else {
                return T::zero();
            };
            m.swap(k, swap);
            sign_flip = !sign_flip;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let num = m[k][k].mul_ref(&m[i][j]).sub_ref(&m[i][k].mul_ref(&m[k][j]));
                m[i][j] = num.exact_div(&prev).expect("Bareiss division is exact");
            }
            m[i][k] = T::zero();
        }
        prev = m[k][k].clone();
    }
    let det = m[n - 1][n - 1].clone();
    if sign_flip {
        det.neg_of()
    } else {
        det
    }
}

impl<T: Ring> Ring for Poly<T> {
    fn zero() -> Self {
        Poly::zero()
    }
    fn one() -> Self {
        Poly::constant(T::one())
    }
    fn is_zero(&self) -> bool {
        Poly::is_zero(self)
    }
    fn neg_of(&self) -> Self {
        self.neg()
    }
    fn add_ref(&self, o: &Self) -> Self {
        self.add(o)
    }
    fn sub_ref(&self, o: &Self) -> Self {
        self.sub(o)
    }
    fn mul_ref(&self, o: &Self) -> Self {
        self.mul(o)
    }
    fn exact_div(&self, o: &Self) -> Option<Self> {
        self.exact_div_poly(o)
    }
    fn gcd_ref(&self, o: &Self) -> Self {
        poly_gcd(self, o)
    }
    fn is_neg(&self) -> bool {
        !self.is_zero() && self.lead().is_neg()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn zp(coeffs: &[i64]) -> ZPoly {
        Poly::from_coeffs(coeffs.iter().map(|&c| BigInt::from(c)).collect())
    }

    #[test]
    fn arithmetic_and_division() {
        let a = zp(&[-1, 0, 1]); // x^2 - 1
        let b = zp(&[1, 1]); // x + 1
        assert_eq!(a.exact_div_poly(&b).unwrap(), zp(&[-1, 1]));
        assert_eq!(b.mul(&zp(&[-1, 1])), a);
        assert!(zp(&[1, 1]).exact_div_poly(&zp(&[0, 1])).is_none());
        assert_eq!(a.sub(&a), Poly::zero());
    }

    #[test]
    fn gcd_examples() {
        // gcd(x^2 - 1, x^2 + 2x + 1) = x + 1.
        assert_eq!(poly_gcd(&zp(&[-1, 0, 1]), &zp(&[1, 2, 1])), zp(&[1, 1]));
        // Coprime.
        assert_eq!(poly_gcd(&zp(&[1, 0, 1]), &zp(&[0, 1])), zp(&[1]));
        // Content handling: gcd(2x, 4) = 2.
        assert_eq!(poly_gcd(&zp(&[0, 2]), &zp(&[4])), zp(&[2]));
        // Sign canonicalization.
        assert_eq!(poly_gcd(&zp(&[1, -1]), &zp(&[-1, 1])), zp(&[-1, 1]));
        // Against zero: the canonical associate of the other argument.
        assert_eq!(poly_gcd(&Poly::zero(), &zp(&[-2, -4])), zp(&[2, 4]));
    }

    #[test]
    fn gcd_of_products_contains_common_factor() {
        // (x+2)(x-3)(2x+1) vs (x+2)(x^2+1): gcd = x + 2.
        let common = zp(&[2, 1]);
        let a = common.mul(&zp(&[-3, 1])).mul(&zp(&[1, 2]));
        let b = common.mul(&zp(&[1, 0, 1]));
        assert_eq!(poly_gcd(&a, &b), common);
    }

    #[test]
    fn resultant_univariate() {
        // Res(x^2-1, x^2-4) = prod over roots {1,-1} x {2,-2} of differences
        // = (1-2)(1+2)(-1-2)(-1+2) = 9.
        assert_eq!(resultant(&zp(&[-1, 0, 1]), &zp(&[-4, 0, 1])), BigInt::from(9));
        // Common root => resultant 0.
        assert_eq!(resultant(&zp(&[-1, 0, 1]), &zp(&[-1, 1])), BigInt::from(0));
        // Degree-0 cases.
        assert_eq!(resultant(&zp(&[3]), &zp(&[0, 0, 1])), BigInt::from(9));
        assert_eq!(resultant(&zp(&[7]), &zp(&[5])), BigInt::from(1));
    }

    #[test]
    fn resultant_matches_leading_product_formula() {
        // Res(f, g) = lc(f)^deg(g) * prod g(roots of f) for f = (x-1)(x-2) and
        // g = x^3 - x + 1: g(1) * g(2) = 1 * 7 = 7.
        let f = zp(&[2, -3, 1]);
        let g = zp(&[1, -1, 0, 1]);
        assert_eq!(resultant(&f, &g), BigInt::from(7));
    }

    #[test]
    fn bivariate_resultant_eliminates() {
        // In Z[t][s]: Res_s(s - t, s^2 - t) = t^2 - t (up to sign +1 here).
        let t = zp(&[0, 1]);
        let f: ZPoly2 = Poly::from_coeffs(vec![t.neg(), Poly::one()]); // s - t
        let g: ZPoly2 = Poly::from_coeffs(vec![t.neg(), Poly::zero(), Poly::one()]); // s^2 - t
        let r = resultant(&f, &g);
        assert_eq!(r, zp(&[0, -1, 1]));
    }

    #[test]
    fn nested_gcd() {
        // In Z[x][y]: gcd((x+y)(x-y), (x+y)^2) = x + y
        // where poly in y with coeffs in Z[x].
        let x = zp(&[0, 1]);
        let xy: ZPoly2 = Poly::from_coeffs(vec![x.clone(), Poly::one()]); // x + y
        let xmy: ZPoly2 = Poly::from_coeffs(vec![x, zp(&[-1])]); // x - y
        let a = xy.mul(&xmy);
        let b = xy.mul(&xy);
        assert_eq!(poly_gcd(&a, &b), xy);
    }
}

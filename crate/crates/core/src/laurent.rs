//! Bivariate Laurent polynomials with exact rational coefficients.
//!
//! Coefficients live in ℚ. Exponents are signed 64-bit integers and every
//! exponent computation is checked: overflow is reported, never wrapped.

mod parse;

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{Face, NewtonPolytope};
use crate::residue::{is_prime, FpPoly};

pub type Rational = num_rational::BigRational;

/// An exponent pair `(i, j)` of the monomial `x^i y^j`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(from = "[i64; 2]", into = "[i64; 2]")]
pub struct LatticePoint {
    pub i: i64,
    pub j: i64,
}

impl LatticePoint {
    pub const ORIGIN: LatticePoint = LatticePoint { i: 0, j: 0 };

    pub const fn new(i: i64, j: i64) -> Self {
        LatticePoint { i, j }
    }

    pub fn checked_add(self, other: LatticePoint) -> Option<LatticePoint> {
        Some(LatticePoint {
            i: self.i.checked_add(other.i)?,
            j: self.j.checked_add(other.j)?,
        })
    }

    fn graded_key(&self) -> (i128, i64, i64) {
        (self.i as i128 + self.j as i128, self.i, self.j)
    }
}

impl From<[i64; 2]> for LatticePoint {
    fn from([i, j]: [i64; 2]) -> Self {
        LatticePoint { i, j }
    }
}

impl From<LatticePoint> for [i64; 2] {
    fn from(p: LatticePoint) -> Self {
        [p.i, p.j]
    }
}

impl From<(i64, i64)> for LatticePoint {
    fn from((i, j): (i64, i64)) -> Self {
        LatticePoint { i, j }
    }
}

impl fmt::Display for LatticePoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.i, self.j)
    }
}

/// Graded lexicographic order on exponents: total degree first, then `i`, then `j`.
pub fn graded_cmp(a: &LatticePoint, b: &LatticePoint) -> Ordering {
    a.graded_key().cmp(&b.graded_key())
}

/// A Laurent polynomial `Σ c_{ij} x^i y^j` over ℚ.
///
/// No stored coefficient is zero; the zero polynomial is the empty map.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct LaurentPolynomial {
    terms: BTreeMap<LatticePoint, Rational>,
}

/// Result of multiplying a Laurent polynomial by the smallest monomial that
/// makes every exponent nonnegative.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ClearedPolynomial {
    /// `x^n y^m · f`, with only nonnegative exponents.
    pub poly: LaurentPolynomial,
    /// `(n, m)`.
    pub shift: LatticePoint,
}

impl LaurentPolynomial {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::monomial(Rational::one(), LatticePoint::ORIGIN)
    }

    pub fn monomial(coeff: Rational, exp: LatticePoint) -> Self {
        let mut p = Self::zero();
        p.add_term(exp, coeff);
        p
    }

    /// Builds a polynomial from `(exponent, coefficient)` pairs, combining like terms.
    pub fn from_terms<I>(terms: I) -> Self
    where
        I: IntoIterator<Item = (LatticePoint, Rational)>,
    {
        let mut p = Self::zero();
        for (e, c) in terms {
            p.add_term(e, c);
        }
        p
    }

    /// Convenience constructor with integer coefficients.
    pub fn from_int_terms(terms: &[((i64, i64), i64)]) -> Self {
        Self::from_terms(
            terms
                .iter()
                .map(|&(e, c)| (LatticePoint::from(e), Rational::from_integer(c.into()))),
        )
    }

    pub fn parse(text: &str) -> Result<Self> {
        parse::parse(text)
    }

    fn add_term(&mut self, exp: LatticePoint, coeff: Rational) {
        if coeff.is_zero() {
            return;
        }
        let slot = self.terms.entry(exp).or_insert_with(Rational::zero);
        *slot += coeff;
        if slot.is_zero() {
            self.terms.remove(&exp);
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_monomial(&self) -> bool {
        self.terms.len() == 1
    }

    pub fn coeff(&self, exp: LatticePoint) -> Option<&Rational> {
        self.terms.get(&exp)
    }

    /// Terms in `(i, j)` lexicographic order.
    pub fn terms(&self) -> impl Iterator<Item = (&LatticePoint, &Rational)> {
        self.terms.iter()
    }

    /// The exponent set `S`.
    pub fn support(&self) -> Vec<LatticePoint> {
        self.terms.keys().copied().collect()
    }

    pub fn checked_mul(&self, other: &Self) -> Result<Self> {
        let mut out = Self::zero();
        for (e1, c1) in &self.terms {
            for (e2, c2) in &other.terms {
                let e = e1.checked_add(*e2).ok_or_else(|| Error::overflow_at(*e1))?;
                out.add_term(e, c1 * c2);
            }
        }
        Ok(out)
    }

    pub fn checked_pow(&self, exp: u32) -> Result<Self> {
        let mut acc = Self::one();
        for _ in 0..exp {
            acc = acc.checked_mul(self)?;
        }
        Ok(acc)
    }

    pub fn scale(&self, c: &Rational) -> Self {
        Self::from_terms(self.terms.iter().map(|(e, k)| (*e, k * c)))
    }

    /// Multiplies by the monomial `x^{by.i} y^{by.j}`.
    pub fn shift(&self, by: LatticePoint) -> Result<Self> {
        let mut out = BTreeMap::new();
        for (e, c) in &self.terms {
            let e = e.checked_add(by).ok_or_else(|| Error::overflow_at(*e))?;
            out.insert(e, c.clone());
        }
        Ok(LaurentPolynomial { terms: out })
    }

    /// Restriction of `self` to the exponents lying on `face`.
    ///
    /// `face` must be a face of the Newton polytope of `self`.
    pub fn face_function(&self, face: &Face) -> Result<Self> {
        let poly = NewtonPolytope::new(self)?;
        if !poly.has_face(face) {
            return Err(Error::FaceMismatch);
        }
        Ok(self.restrict_to_face(face))
    }

    /// Same as [`face_function`](Self::face_function) without re-validating the face.
    pub(crate) fn restrict_to_face(&self, face: &Face) -> Self {
        LaurentPolynomial {
            terms: self
                .terms
                .iter()
                .filter(|(e, _)| face.contains(**e))
                .map(|(e, c)| (*e, c.clone()))
                .collect(),
        }
    }

    /// Multiplies by `x^n y^m` with `(n, m)` minimal such that all exponents are
    /// nonnegative.
    pub fn clear_denominators(&self) -> Result<ClearedPolynomial> {
        let min_i = self.terms.keys().map(|e| e.i).min().ok_or(Error::ZeroPolynomial)?;
        let min_j = self.terms.keys().map(|e| e.j).min().ok_or(Error::ZeroPolynomial)?;
        let n = min_i
            .checked_neg()
            .ok_or_else(|| Error::ExponentOverflow("cannot negate i64::MIN".into()))?
            .max(0);
        let m = min_j
            .checked_neg()
            .ok_or_else(|| Error::ExponentOverflow("cannot negate i64::MIN".into()))?
            .max(0);
        let shift = LatticePoint::new(n, m);
        Ok(ClearedPolynomial {
            poly: self.shift(shift)?,
            shift,
        })
    }

    /// Formal partial derivatives `(∂/∂x, ∂/∂y)`.
    pub fn gradient(&self) -> (Self, Self) {
        let dx = Self::from_terms(
            self.terms
                .iter()
                .filter(|(e, _)| e.i != 0)
                .map(|(e, c)| (LatticePoint::new(e.i - 1, e.j), c * Rational::from_integer(e.i.into()))),
        );
        let dy = Self::from_terms(
            self.terms
                .iter()
                .filter(|(e, _)| e.j != 0)
                .map(|(e, c)| (LatticePoint::new(e.i, e.j - 1), c * Rational::from_integer(e.j.into()))),
        );
        (dx, dy)
    }

    /// Reduction of the coefficients modulo a prime `p`.
    pub fn reduce_mod_p(&self, p: u64) -> Result<FpPoly> {
        if !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        if p > u32::MAX as u64 {
            return Err(Error::InvalidParameter(format!(
                "prime {p} exceeds the supported 32-bit range"
            )));
        }
        let big_p = BigInt::from(p);
        let mut terms = Vec::with_capacity(self.terms.len());
        for (e, c) in &self.terms {
            if c.denom().is_multiple_of(&big_p) {
                return Err(Error::BadPrime {
                    p,
                    reason: format!("divides the denominator of coefficient {c}"),
                });
            }
            let num = residue_of(c.numer(), p);
            let den = residue_of(c.denom(), p);
            terms.push((*e, crate::residue::mul_mod(num, crate::residue::inv_mod(den, p), p)));
        }
        Ok(FpPoly::new(p, terms))
    }

    /// `p`-adic valuation of every coefficient, keyed by exponent. Fails if `p`
    /// divides a denominator.
    pub fn coefficient_valuations(&self, p: u64) -> Result<Vec<(LatticePoint, u32, Rational)>> {
        let big_p = BigInt::from(p);
        self.terms
            .iter()
            .map(|(e, c)| {
                if c.denom().is_multiple_of(&big_p) {
                    return Err(Error::BadPrime {
                        p,
                        reason: format!("divides the denominator of coefficient {c}"),
                    });
                }
                let mut num = c.numer().clone();
                let mut v = 0u32;
                while num.is_multiple_of(&big_p) {
                    num /= &big_p;
                    v += 1;
                }
                let unit = Rational::new(num, c.denom().clone());
                Ok((*e, v, unit))
            })
            .collect()
    }
}

/// Nonnegative residue of a big integer modulo `p`.
pub(crate) fn residue_of(n: &BigInt, p: u64) -> u64 {
    let r = n.mod_floor(&BigInt::from(p));
    u64::try_from(r).expect("residue below p fits in u64")
}

impl Add for &LaurentPolynomial {
    type Output = LaurentPolynomial;

    fn add(self, rhs: &LaurentPolynomial) -> LaurentPolynomial {
        let mut out = self.clone();
        for (e, c) in &rhs.terms {
            out.add_term(*e, c.clone());
        }
        out
    }
}

impl Sub for &LaurentPolynomial {
    type Output = LaurentPolynomial;

    fn sub(self, rhs: &LaurentPolynomial) -> LaurentPolynomial {
        self + &(-rhs)
    }
}

impl Neg for &LaurentPolynomial {
    type Output = LaurentPolynomial;

    fn neg(self) -> LaurentPolynomial {
        LaurentPolynomial {
            terms: self.terms.iter().map(|(e, c)| (*e, -c)).collect(),
        }
    }
}

impl FromStr for LaurentPolynomial {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        parse::parse(s)
    }
}

fn fmt_var(out: &mut Vec<String>, name: char, exp: i64) {
    match exp {
        0 => {}
        1 => out.push(name.to_string()),
        e => out.push(format!("{name}^{e}")),
    }
}

/// `a/b`, or just `a` for integers.
pub fn fmt_rational(c: &Rational) -> String {
    if c.is_integer() {
        c.numer().to_string()
    } else {
        format!("{}/{}", c.numer(), c.denom())
    }
}

/// Canonical text form: graded lexicographic term order, parseable by
/// [`LaurentPolynomial::parse`].
impl fmt::Display for LaurentPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        let mut ordered: Vec<_> = self.terms.iter().collect();
        ordered.sort_by(|a, b| graded_cmp(a.0, b.0));
        for (k, (e, c)) in ordered.into_iter().enumerate() {
            let negative = c.is_negative();
            match (k, negative) {
                (0, true) => f.write_str("-")?,
                (0, false) => {}
                (_, true) => f.write_str(" - ")?,
                (_, false) => f.write_str(" + ")?,
            }
            let abs = c.abs();
            let mut vars = Vec::new();
            fmt_var(&mut vars, 'x', e.i);
            fmt_var(&mut vars, 'y', e.j);
            let mono = vars.join("*");
            if mono.is_empty() {
                f.write_str(&fmt_rational(&abs))?;
            } else if abs.is_one() {
                f.write_str(&mono)?;
            } else {
                write!(f, "{}*{}", fmt_rational(&abs), mono)?;
            }
        }
        Ok(())
    }
}

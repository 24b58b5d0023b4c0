//! Exact Laurent polynomials in `q` and `t = q^{-s}`.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::ser::SerializeSeq;
use serde::{Serialize, Serializer};

use crate::laurent::{fmt_rational, Rational};

/// `Σ c · q^{e_q} t^{e_t}`. Zero coefficients are never stored.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct QTLaurent {
    terms: BTreeMap<(i64, i64), Rational>,
}

fn int(n: i64) -> Rational {
    Rational::from_integer(n.into())
}

impl QTLaurent {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::monomial(Rational::one(), 0, 0)
    }

    pub fn monomial(c: Rational, e_q: i64, e_t: i64) -> Self {
        let mut out = Self::zero();
        out.add_term((e_q, e_t), c);
        out
    }

    /// `q^{e_q} t^{e_t}` with coefficient 1.
    pub fn qt(e_q: i64, e_t: i64) -> Self {
        Self::monomial(Rational::one(), e_q, e_t)
    }

    pub fn constant(c: i64) -> Self {
        Self::monomial(int(c), 0, 0)
    }

    fn add_term(&mut self, key: (i64, i64), c: Rational) {
        if c.is_zero() {
            return;
        }
        let slot = self.terms.entry(key).or_insert_with(Rational::zero);
        *slot += c;
        if slot.is_zero() {
            self.terms.remove(&key);
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

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1 && self.terms.get(&(0, 0)).is_some_and(One::is_one)
    }

    /// Terms in ascending `(e_q, e_t)` order.
    pub fn terms(&self) -> impl Iterator<Item = (&(i64, i64), &Rational)> {
        self.terms.iter()
    }

    pub fn coeff(&self, e_q: i64, e_t: i64) -> Rational {
        self.terms.get(&(e_q, e_t)).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn scale(&self, c: &Rational) -> Self {
        let mut out = Self::zero();
        for (k, v) in &self.terms {
            out.add_term(*k, v * c);
        }
        out
    }

    pub fn pow(&self, k: u32) -> Self {
        (0..k).fold(Self::one(), |acc, _| &acc * self)
    }

    /// Numeric value at `q = e^{ln_q}`, `t = e^{ln_t}`.
    pub fn eval_ln(&self, ln_q: f64, ln_t: f64) -> f64 {
        self.terms
            .iter()
            .map(|(&(a, b), c)| c.to_f64().unwrap_or(f64::NAN) * (a as f64 * ln_q + b as f64 * ln_t).exp())
            .sum()
    }

    pub fn eval(&self, q: f64, t: f64) -> f64 {
        self.eval_ln(q.ln(), t.ln())
    }

    /// Exact value at rational `q`, `t` (both nonzero).
    pub fn eval_exact(&self, q: &Rational, t: &Rational) -> Rational {
        let mut acc = Rational::zero();
        for (&(a, b), c) in &self.terms {
            acc += c * rpow(q, a) * rpow(t, b);
        }
        acc
    }

    /// Text with monomials written as `q^{a+bs}`.
    pub fn render_s(&self) -> String {
        self.render_with(monomial_s)
    }

    /// Text with monomials written as `q^a*t^b`.
    pub fn render_raw(&self) -> String {
        self.render_with(monomial_raw)
    }

    fn render_with(&self, mono: impl Fn(i64, i64) -> String) -> String {
        if self.terms.is_empty() {
            return "0".to_string();
        }
        let mut out = String::new();
        for (k, (&(a, b), c)) in self.terms.iter().enumerate() {
            let negative = c.is_negative();
            if negative {
                out.push('-');
            } else if k > 0 {
                out.push('+');
            }
            let mag = c.abs();
            let m = mono(a, b);
            match (mag.is_one(), m == "1") {
                (true, _) => out.push_str(&m),
                (false, true) => out.push_str(&fmt_rational(&mag)),
                (false, false) => {
                    let _ = write!(out, "{}*{m}", fmt_rational(&mag));
                }
            }
        }
        out
    }
}

pub(crate) fn rpow(base: &Rational, e: i64) -> Rational {
    let r = num_traits::pow(base.clone(), e.unsigned_abs() as usize);
    if e < 0 {
        r.recip()
    } else {
        r
    }
}

/// `q^{a} t^{b}` as `q^{a-bs}`; the bare `1` for the unit monomial.
pub(crate) fn monomial_s(a: i64, b: i64) -> String {
    let c = -b;
    if a == 0 && c == 0 {
        return "1".to_string();
    }
    let mut e = String::new();
    if a != 0 {
        e.push_str(&a.to_string());
    }
    if c != 0 {
        if c < 0 {
            e.push('-');
        } else if a != 0 {
            e.push('+');
        }
        if c.abs() != 1 {
            e.push_str(&c.abs().to_string());
        }
        e.push('s');
    }
    if e == "1" {
        "q".to_string()
    } else {
        format!("q^{{{e}}}")
    }
}

pub(crate) fn monomial_raw(a: i64, b: i64) -> String {
    let part = |name: &str, e: i64| match e {
        0 => None,
        1 => Some(name.to_string()),
        e => Some(format!("{name}^{e}")),
    };
    let parts: Vec<String> = [part("q", a), part("t", b)].into_iter().flatten().collect();
    if parts.is_empty() {
        "1".to_string()
    } else {
        parts.join("*")
    }
}

impl Add for &QTLaurent {
    type Output = QTLaurent;
    fn add(self, rhs: &QTLaurent) -> QTLaurent {
        let mut out = self.clone();
        for (k, v) in &rhs.terms {
            out.add_term(*k, v.clone());
        }
        out
    }
}

impl Sub for &QTLaurent {
    type Output = QTLaurent;
    fn sub(self, rhs: &QTLaurent) -> QTLaurent {
        self + &(-rhs)
    }
}

impl Neg for &QTLaurent {
    type Output = QTLaurent;
    fn neg(self) -> QTLaurent {
        QTLaurent {
            terms: self.terms.iter().map(|(k, v)| (*k, -v)).collect(),
        }
    }
}

impl Mul for &QTLaurent {
    type Output = QTLaurent;
    fn mul(self, rhs: &QTLaurent) -> QTLaurent {
        let mut out = QTLaurent::zero();
        for (&(a1, b1), c1) in &self.terms {
            for (&(a2, b2), c2) in &rhs.terms {
                out.add_term((a1 + a2, b1 + b2), c1 * c2);
            }
        }
        out
    }
}

#[derive(Serialize)]
#[serde(untagged)]
enum JsonInt {
    Small(i64),
    Big(String),
}

fn json_int(n: &num_bigint::BigInt) -> JsonInt {
    n.to_i64().map_or_else(|| JsonInt::Big(n.to_string()), JsonInt::Small)
}

/// A list of `[e_q, e_t, num, den]` monomials.
impl Serialize for QTLaurent {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let mut seq = serializer.serialize_seq(Some(self.terms.len()))?;
        for (&(a, b), c) in &self.terms {
            let num = json_int(c.numer());
            let den = json_int(c.denom());
            seq.serialize_element(&(JsonInt::Small(a), JsonInt::Small(b), num, den))?;
        }
        seq.end()
    }
}

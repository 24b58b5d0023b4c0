//! Brute-force `p`-adic integration of `|f(x,y)|^s` by coset refinement, with
//! certified error bounds. Shares no code with the explicit formula beyond
//! polynomial parsing and modular arithmetic.
//!
//! The domain is cut into strata `ord x = m`, `ord y = n`. On a stratum,
//! `f(p^m u, p^n v) = p^δ g(u, v)` with `g` having `p`-integral coefficients
//! and at least one unit coefficient, and the unit-torus integral of `|g|^s`
//! is computed by refining cosets `u ≡ u₀, v ≡ v₀ (mod p^k)` until `g(u₀, v₀)`
//! is nonzero modulo `p^k`, which fixes `ord g` on the whole coset.

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::laurent::{fmt_rational, residue_of, LatticePoint, LaurentPolynomial, Rational};
use crate::residue::{inv_mod, is_prime, mul_mod, signed_pow_mod};

pub const DEFAULT_DEPTH: u32 = 4;
pub const DEFAULT_TRUNCATION: u32 = 40;

/// `p^m(u₀ + p^k R) × p^n(v₀ + p^k R)` with `u₀, v₀` units.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct PadicCoset {
    pub prefix_u: u64,
    pub prefix_v: u64,
    pub level: u32,
    pub val_u: u32,
    pub val_v: u32,
}

/// A value with a rigorous absolute error bound.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct IntegralEstimate {
    pub value: f64,
    pub error_bound: f64,
    /// Fraction of the domain's measure on which `|f|` was pinned down exactly.
    pub resolved_mass: f64,
    pub p: u64,
    pub s: f64,
    pub depth: u32,
    #[serde(rename = "M", skip_serializing_if = "Option::is_none")]
    pub truncation: Option<u32>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub min_val: Option<[u32; 2]>,
}

impl IntegralEstimate {
    pub fn lower(&self) -> f64 {
        self.value - self.error_bound
    }

    pub fn upper(&self) -> f64 {
        self.value + self.error_bound
    }

    pub fn brackets(&self, x: f64) -> bool {
        (x - self.value).abs() <= self.error_bound
    }
}

/// `g` reduced modulo `p^D`, as `(exponent, residue)` pairs.
struct StratumPoly {
    p: u64,
    depth: u32,
    modulus: u64,
    terms: Vec<(LatticePoint, u64)>,
}

#[derive(Clone, Copy, Default)]
struct Partial {
    value: f64,
    error: f64,
    resolved: f64,
}

impl std::ops::AddAssign for Partial {
    fn add_assign(&mut self, o: Partial) {
        self.value += o.value;
        self.error += o.error;
        self.resolved += o.resolved;
    }
}

impl StratumPoly {
    fn eval(&self, u: u64, v: u64) -> u64 {
        let m = self.modulus;
        self.terms.iter().fold(0, |acc, &(e, c)| {
            let mono = mul_mod(signed_pow_mod(u, e.i, m), signed_pow_mod(v, e.j, m), m);
            (acc + mul_mod(c, mono, m)) % m
        })
    }

    fn visit(&self, c: PadicCoset, ln_p: f64, s: f64, out: &mut Partial) {
        let k = c.level;
        let pk = self.p.pow(k);
        let r = self.eval(c.prefix_u, c.prefix_v) % pk;
        let log_measure = -(2.0 * k as f64) * ln_p;
        if r != 0 {
            let mut v = 0u32;
            let mut x = r;
            while x.is_multiple_of(self.p) {
                x /= self.p;
                v += 1;
            }
            out.value += (log_measure - v as f64 * s * ln_p).exp();
            out.resolved += log_measure.exp();
            return;
        }
        if k == self.depth {
            let half = 0.5 * (log_measure - self.depth as f64 * s * ln_p).exp();
            out.value += half;
            out.error += half;
            return;
        }
        for a in 0..self.p {
            for b in 0..self.p {
                self.visit(
                    PadicCoset {
                        prefix_u: c.prefix_u + a * pk,
                        prefix_v: c.prefix_v + b * pk,
                        level: k + 1,
                        ..c
                    },
                    ln_p,
                    s,
                    out,
                );
            }
        }
    }

    /// `∫_{(R^×)²} |g|^s`. Level-one cosets are summed in a fixed order.
    fn integrate(&self, s: f64, val_u: u32, val_v: u32, parallel: bool) -> Partial {
        let ln_p = (self.p as f64).ln();
        let column = |u0: u64| {
            let mut acc = Partial::default();
            for v0 in 1..self.p {
                let coset = PadicCoset {
                    prefix_u: u0,
                    prefix_v: v0,
                    level: 1,
                    val_u,
                    val_v,
                };
                self.visit(coset, ln_p, s, &mut acc);
            }
            acc
        };
        let columns: Vec<Partial> = if parallel {
            (1..self.p).into_par_iter().map(column).collect()
        } else {
            (1..self.p).map(column).collect()
        };
        columns.into_iter().fold(Partial::default(), |mut a, b| {
            a += b;
            a
        })
    }
}

/// Exponent, coefficient valuation and unit part modulo `p^D` of each term.
struct Valued {
    exp: LatticePoint,
    val: u32,
    unit_mod: u64,
}

fn prepare(f: &LaurentPolynomial, p: u64, depth: u32) -> Result<(Vec<Valued>, u64)> {
    if !is_prime(p) {
        return Err(Error::NotPrime(p));
    }
    if f.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    if depth == 0 {
        return Err(Error::InvalidParameter("depth must be at least 1".into()));
    }
    let modulus = p
        .checked_pow(depth)
        .filter(|m| *m < 1 << 62)
        .ok_or_else(|| Error::InvalidParameter(format!("{p}^{depth} is too large for the oracle")))?;
    let terms = f
        .coefficient_valuations(p)?
        .into_iter()
        .map(|(exp, val, unit)| {
            let num = residue_of(unit.numer(), modulus);
            let den = residue_of(unit.denom(), modulus);
            Valued {
                exp,
                val,
                unit_mod: mul_mod(num, inv_mod(den, modulus), modulus),
            }
        })
        .collect();
    Ok((terms, modulus))
}

/// `f(p^m u, p^n v) = p^δ g(u, v)`; returns `(δ, g mod p^D)`.
fn stratum(terms: &[Valued], p: u64, depth: u32, modulus: u64, m: u32, n: u32) -> (i64, StratumPoly) {
    let weights: Vec<i64> = terms
        .iter()
        .map(|t| m as i64 * t.exp.i + n as i64 * t.exp.j + t.val as i64)
        .collect();
    let delta = *weights.iter().min().expect("nonzero polynomial");
    let g_terms = terms
        .iter()
        .zip(&weights)
        .filter(|(_, &w)| w - delta < depth as i64)
        .map(|(t, &w)| {
            let c = mul_mod(t.unit_mod, p.pow((w - delta) as u32), modulus);
            (t.exp, c)
        })
        .collect();
    (
        delta,
        StratumPoly {
            p,
            depth,
            modulus,
            terms: g_terms,
        },
    )
}

fn check_s(s: f64, alpha: Option<&Rational>) -> Result<()> {
    use num_traits::ToPrimitive;
    let upper = alpha.map_or(f64::INFINITY, |a| a.to_f64().unwrap_or(0.0));
    if s > 0.0 && s < upper {
        Ok(())
    } else {
        Err(Error::OracleRange {
            s,
            alpha: alpha.map_or_else(|| "+inf".into(), fmt_rational),
        })
    }
}

/// `∫_{(R^×)²} |f|^s |dx dy|` for `f` with `p`-integral coefficients.
pub fn unit_torus_integral(f: &LaurentPolynomial, p: u64, s: f64, depth: u32) -> Result<IntegralEstimate> {
    check_s(s, None)?;
    let (terms, modulus) = prepare(f, p, depth)?;
    let (delta, g) = stratum(&terms, p, depth, modulus, 0, 0);
    let scale = (-(delta as f64) * s * (p as f64).ln()).exp();
    let part = g.integrate(s, 0, 0, true);
    let unit_mass = (1.0 - 1.0 / p as f64).powi(2);
    Ok(IntegralEstimate {
        value: scale * part.value,
        error_bound: scale * part.error,
        resolved_mass: part.resolved / unit_mass,
        p,
        s,
        depth,
        truncation: None,
        min_val: None,
    })
}

/// Upper end of the oracle's range: `s` must stay below `1/(-min i)` and
/// `1/(-min j)` over the support, or the stratum sum diverges.
pub fn oracle_alpha(f: &LaurentPolynomial) -> Option<Rational> {
    let support = f.support();
    let min_i = support.iter().map(|e| e.i).min()?;
    let min_j = support.iter().map(|e| e.j).min()?;
    let worst = (-min_i).max(-min_j);
    (worst > 0).then(|| Rational::new(1.into(), worst.into()))
}

/// `Σ_{k ≥ lo} r^k` restricted to `k ≤ hi` (`hi = None` for no limit).
fn geometric(r: f64, lo: u32, hi: Option<u32>) -> f64 {
    let head = r.powi(lo as i32);
    match hi {
        None => head / (1.0 - r),
        Some(h) if h < lo => 0.0,
        Some(h) => (head - r.powi(h as i32 + 1)) / (1.0 - r),
    }
}

/// `∫ |f|^s` over `(p^{m₀}R∖{0}) × (p^{n₀}R∖{0})`, summed over strata
/// `m₀ ≤ m ≤ M`, `n₀ ≤ n ≤ M` with a certified bound on the remaining strata.
pub fn truncated_z0(
    f: &LaurentPolynomial,
    p: u64,
    s: f64,
    truncation: u32,
    depth: u32,
    min_val: (u32, u32),
) -> Result<IntegralEstimate> {
    let alpha = oracle_alpha(f);
    check_s(s, alpha.as_ref())?;
    let (m0, n0) = min_val;
    if truncation < m0.max(n0) {
        return Err(Error::InvalidParameter(format!(
            "truncation {truncation} is below the minimal valuations ({m0},{n0})"
        )));
    }
    let (terms, modulus) = prepare(f, p, depth)?;
    let ln_p = (p as f64).ln();

    let strata: Vec<(u32, u32)> = (m0..=truncation)
        .flat_map(|m| (n0..=truncation).map(move |n| (m, n)))
        .collect();
    let parts: Vec<Partial> = strata
        .par_iter()
        .map(|&(m, n)| {
            let (delta, g) = stratum(&terms, p, depth, modulus, m, n);
            let part = g.integrate(s, m, n, false);
            let w = (-(m as f64 + n as f64 + delta as f64 * s) * ln_p).exp();
            let mass = (-(m as f64 + n as f64) * ln_p).exp();
            Partial {
                value: w * part.value,
                error: w * part.error,
                resolved: mass * part.resolved,
            }
        })
        .collect();
    let mut total = Partial::default();
    for part in parts {
        total += part;
    }

    // every stratum outside the box contributes at most
    // (1-1/p)² max_ij p^{-m-n-(mi+nj+v_ij)s}
    let unit_mass = (1.0 - 1.0 / p as f64).powi(2);
    let mut tail = 0.0;
    for t in &terms {
        let r1 = (-(1.0 + t.exp.i as f64 * s) * ln_p).exp();
        let r2 = (-(1.0 + t.exp.j as f64 * s) * ln_p).exp();
        debug_assert!(r1 < 1.0 && r2 < 1.0);
        let outside = geometric(r1, truncation + 1, None) * geometric(r2, n0, None)
            + geometric(r1, m0, Some(truncation)) * geometric(r2, truncation + 1, None);
        tail += (-(t.val as f64) * s * ln_p).exp() * outside;
    }
    tail *= unit_mass;
    if !tail.is_finite() {
        return Err(Error::OracleRange {
            s,
            alpha: alpha.as_ref().map_or_else(|| "+inf".into(), fmt_rational),
        });
    }

    let value = total.value + 0.5 * tail;
    let slack = 1e-12 * (1.0 + value.abs());
    let domain_mass = (-((m0 + n0) as f64) * ln_p).exp();
    Ok(IntegralEstimate {
        value,
        error_bound: total.error + 0.5 * tail + slack,
        resolved_mass: total.resolved / domain_mass,
        p,
        s,
        depth,
        truncation: Some(truncation),
        min_val: Some([m0, n0]),
    })
}

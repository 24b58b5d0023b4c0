//! The explicit formula for `Z₀(s, f)` as an exact rational function of `q`
//! and `t = q^{-s}`, together with its candidate poles and convergence band.

pub mod qt;

use std::collections::BTreeMap;
use std::fmt;

use num_traits::{One, Signed, Zero};
use rayon::prelude::*;
use serde::ser::SerializeStruct;
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::fans::{conical_partition, make_simple, Cone};
use crate::geometry::{LatticeVector, NewtonPolytope};
use crate::laurent::{fmt_rational, LaurentPolynomial, Rational};
use crate::residue::{check_weak_nondegeneracy, count_n_delta, count_on_face, is_prime};

pub use qt::QTLaurent;
use qt::{monomial_raw, monomial_s};

fn ser_rational<S: Serializer>(r: &Rational, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&fmt_rational(r))
}

/// One factor of a factored denominator.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum DenomFactor {
    /// `1 - q^{-norm} t^{d}` for a cone generator with `d(a) ≠ 0`.
    ConeRay { norm: i64, d: i64 },
    /// `1 - q^{-1} t`, from the unit-torus integral.
    UnitTorus,
    /// `1 - q^{-norm}` for a generator with `d(a) = 0`; no pole in `s`.
    Constant { norm: i64 },
}

impl DenomFactor {
    pub fn for_generator(a: LatticeVector, polytope: &NewtonPolytope) -> DenomFactor {
        let (norm, d) = (a.norm(), polytope.d_value(a));
        debug_assert!(norm >= 1);
        if d == 0 {
            DenomFactor::Constant { norm }
        } else {
            DenomFactor::ConeRay { norm, d }
        }
    }

    fn monomial(&self) -> (i64, i64) {
        match *self {
            DenomFactor::ConeRay { norm, d } => (-norm, d),
            DenomFactor::UnitTorus => (-1, 1),
            DenomFactor::Constant { norm } => (-norm, 0),
        }
    }

    pub fn as_qt(&self) -> QTLaurent {
        let (a, b) = self.monomial();
        &QTLaurent::one() - &QTLaurent::qt(a, b)
    }

    pub fn eval_ln(&self, ln_q: f64, ln_t: f64) -> f64 {
        let (a, b) = self.monomial();
        1.0 - (a as f64 * ln_q + b as f64 * ln_t).exp()
    }

    pub fn is_cone_ray(&self) -> bool {
        matches!(self, DenomFactor::ConeRay { .. })
    }

    /// Real part and period datum of the poles this factor produces.
    pub fn pole(&self) -> Option<(Rational, i64)> {
        match *self {
            DenomFactor::ConeRay { norm, d } => Some((Rational::new((-norm).into(), d.into()), d)),
            DenomFactor::UnitTorus => Some((-Rational::one(), 1)),
            DenomFactor::Constant { .. } => None,
        }
    }

    pub fn render_s(&self) -> String {
        let (a, b) = self.monomial();
        format!("1-{}", monomial_s(a, b))
    }

    pub fn render_raw(&self) -> String {
        let (a, b) = self.monomial();
        format!("1-{}", monomial_raw(a, b))
    }

    fn display_key(&self) -> (u8, i64, i64) {
        match *self {
            DenomFactor::ConeRay { norm, d } => (0, norm, d),
            DenomFactor::Constant { norm } => (1, norm, 0),
            DenomFactor::UnitTorus => (2, 0, 0),
        }
    }
}

fn render_denominator(factors: &[DenomFactor], raw: bool) -> Option<String> {
    if factors.is_empty() {
        return None;
    }
    let mut sorted = factors.to_vec();
    sorted.sort_by_key(DenomFactor::display_key);
    let parts: String = sorted
        .iter()
        .map(|f| format!("({})", if raw { f.render_raw() } else { f.render_s() }))
        .collect();
    Some(if sorted.len() > 1 { format!("({parts})") } else { parts })
}

/// `numerator / ∏ denominator`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ZetaTerm {
    pub label: String,
    pub numerator: QTLaurent,
    pub denominator: Vec<DenomFactor>,
}

impl ZetaTerm {
    pub fn eval_ln(&self, ln_q: f64, ln_t: f64) -> Result<f64> {
        let mut den = 1.0;
        for f in &self.denominator {
            let v = f.eval_ln(ln_q, ln_t);
            if v.abs() < POLE_TOLERANCE {
                return Err(Error::PoleHit {
                    factor: f.render_s(),
                    s: -ln_t / ln_q,
                });
            }
            den *= v;
        }
        Ok(self.numerator.eval_ln(ln_q, ln_t) / den)
    }

    pub fn cone_ray_factor_count(&self) -> usize {
        self.denominator.iter().filter(|f| f.is_cone_ray()).count()
    }

    pub fn render_s(&self) -> String {
        self.render(false)
    }

    pub fn render_raw(&self) -> String {
        self.render(true)
    }

    fn render(&self, raw: bool) -> String {
        let num = if raw {
            self.numerator.render_raw()
        } else {
            self.numerator.render_s()
        };
        match render_denominator(&self.denominator, raw) {
            None => num,
            Some(den) => format!("({num})/{den}"),
        }
    }

    pub fn product(&self, other: &ZetaTerm, label: String) -> ZetaTerm {
        let mut denominator = self.denominator.clone();
        denominator.extend_from_slice(&other.denominator);
        ZetaTerm {
            label,
            numerator: &self.numerator * &other.numerator,
            denominator,
        }
    }
}

impl Serialize for ZetaTerm {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let mut s = serializer.serialize_struct("ZetaTerm", 4)?;
        s.serialize_field("label", &self.label)?;
        s.serialize_field("numerator", &self.numerator)?;
        s.serialize_field("denominator", &self.denominator)?;
        s.serialize_field("text", &self.render_s())?;
        s.end()
    }
}

const POLE_TOLERANCE: f64 = 1e-12;

/// `(1-q^{-1})²`.
fn unit_measure() -> QTLaurent {
    let a = &QTLaurent::one() - &QTLaurent::qt(-1, 0);
    &a * &a
}

/// The unit-torus integral of `|g|^s` for a non-degenerate `g` with `N` zeros
/// on `(F_q^×)²`:
/// `[q^{-2}(q-1)²(1-q^{-1}t) + q^{-2}N(t-1)] / (1-q^{-1}t)`.
pub fn unit_integral_term(n: u64) -> ZetaTerm {
    if n == 0 {
        return ZetaTerm {
            label: "L".into(),
            numerator: unit_measure(),
            denominator: Vec::new(),
        };
    }
    let base = &unit_measure() * &DenomFactor::UnitTorus.as_qt();
    let n = Rational::from_integer(n.into());
    let corr = &QTLaurent::monomial(n.clone(), -2, 1) - &QTLaurent::monomial(n, -2, 0);
    ZetaTerm {
        label: "L".into(),
        numerator: &base + &corr,
        denominator: vec![DenomFactor::UnitTorus],
    }
}

/// Conventional text of the unit-integral term. `n` may be a symbol.
pub fn render_unit_integral(n: &str, raw: bool) -> String {
    match (n == "0", raw) {
        (true, false) => "(1-q^{-1})^2".into(),
        (true, true) => "(1-q^-1)^2".into(),
        (false, false) => format!("q^{{-2}}((q-1)^2+{n}(q^{{-s}}-1)/(1-q^{{-1-s}}))"),
        (false, true) => format!("q^-2*((q-1)^2+{n}*(t-1)/(1-q^-1*t))"),
    }
}

/// The lattice-point generating series of an open cone, in the factored shape
/// `(Σ_h q^{‖h‖} t^{-d(h)}) · q^{-Σ‖aⱼ‖} t^{Σ d(aⱼ)} / ∏ (1 - q^{-‖aⱼ‖} t^{d(aⱼ)})`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct STerm {
    pub h_sum: QTLaurent,
    pub prefactor: [i64; 2],
    pub denominator: Vec<DenomFactor>,
}

pub fn s_term(cone: &Cone, polytope: &NewtonPolytope) -> STerm {
    let mut h_sum = QTLaurent::zero();
    for h in cone.fundamental_points() {
        h_sum = &h_sum + &QTLaurent::qt(h.norm(), -polytope.d_value(h));
    }
    let (mut e_q, mut e_t) = (0, 0);
    let mut denominator = Vec::with_capacity(cone.generators.len());
    for &a in &cone.generators {
        e_q -= a.norm();
        e_t += polytope.d_value(a);
        denominator.push(DenomFactor::for_generator(a, polytope));
    }
    STerm {
        h_sum,
        prefactor: [e_q, e_t],
        denominator,
    }
}

impl STerm {
    pub fn numerator(&self) -> QTLaurent {
        &self.h_sum * &QTLaurent::qt(self.prefactor[0], self.prefactor[1])
    }

    pub fn to_term(&self, label: impl Into<String>) -> ZetaTerm {
        ZetaTerm {
            label: label.into(),
            numerator: self.numerator(),
            denominator: self.denominator.clone(),
        }
    }

    pub fn render_s(&self) -> String {
        self.render(false)
    }

    pub fn render_raw(&self) -> String {
        self.render(true)
    }

    fn render(&self, raw: bool) -> String {
        let [a, b] = self.prefactor;
        let pre = if raw { monomial_raw(a, b) } else { monomial_s(a, b) };
        let mut num = if self.h_sum.is_one() {
            String::new()
        } else if raw {
            format!("({})", self.h_sum.render_raw())
        } else {
            format!("({})", self.h_sum.render_s())
        };
        match (num.is_empty(), pre == "1") {
            (true, _) => num = pre,
            (false, true) => {}
            (false, false) => {
                if raw {
                    num.push('*');
                }
                num.push_str(&pre);
            }
        }
        match render_denominator(&self.denominator, raw) {
            None => num,
            Some(den) => format!("{num}/{den}"),
        }
    }
}

/// Which family of cones the formula is summed over.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum FanVariant {
    #[default]
    Partition,
    Simple,
}

/// Domain of the integral, as a sum over strata `(ord x, ord y)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Domain {
    /// `(R∖{0})²`: every stratum.
    Full,
    /// `(𝔭R∖{0})²`: strata with both valuations positive.
    Interior,
}

/// The `L_Δ · S_Δ` summand of one cone.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConeContribution {
    pub cone: Cone,
    pub n_delta: u64,
    pub l_term: ZetaTerm,
    pub s_term: STerm,
    pub term: ZetaTerm,
}

impl ConeContribution {
    fn on_axis(&self) -> bool {
        self.cone.generators == [LatticeVector::E1] || self.cone.generators == [LatticeVector::E2]
    }
}

impl Serialize for ConeContribution {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let mut s = serializer.serialize_struct("ConeContribution", 7)?;
        s.serialize_field("label", &self.cone.label)?;
        s.serialize_field("gens", &self.cone.generators)?;
        s.serialize_field("face", &self.cone.face)?;
        s.serialize_field("n_delta", &self.n_delta)?;
        s.serialize_field("L", &self.l_term)?;
        s.serialize_field("S", &SText(&self.s_term))?;
        s.serialize_field("term", &self.term)?;
        s.end()
    }
}

struct SText<'a>(&'a STerm);

impl Serialize for SText<'_> {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let mut s = serializer.serialize_struct("STerm", 4)?;
        s.serialize_field("h_sum", &self.0.h_sum)?;
        s.serialize_field("prefactor", &self.0.prefactor)?;
        s.serialize_field("denominator", &self.0.denominator)?;
        s.serialize_field("text", &self.0.render_s())?;
        s.end()
    }
}

/// `Z₀(s, f) = L₀ + Σ_Δ L_Δ S_Δ` at a fixed prime.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ZetaFunction {
    pub polynomial: String,
    pub p: u64,
    pub fan: FanVariant,
    pub n0: u64,
    #[serde(rename = "L0")]
    pub l0: ZetaTerm,
    pub cones: Vec<ConeContribution>,
}

impl ZetaFunction {
    pub fn terms(&self) -> Vec<ZetaTerm> {
        std::iter::once(self.l0.clone())
            .chain(self.cones.iter().map(|c| c.term.clone()))
            .collect()
    }

    fn terms_on(&self, domain: Domain) -> Vec<&ZetaTerm> {
        match domain {
            Domain::Full => std::iter::once(&self.l0)
                .chain(self.cones.iter().map(|c| &c.term))
                .collect(),
            Domain::Interior => self.cones.iter().filter(|c| !c.on_axis()).map(|c| &c.term).collect(),
        }
    }

    /// Numeric value at `q = q0`, `t = q0^{-s0}`.
    pub fn evaluate(&self, q0: f64, s0: f64) -> Result<f64> {
        self.evaluate_on(Domain::Full, q0, s0)
    }

    pub fn evaluate_on(&self, domain: Domain, q0: f64, s0: f64) -> Result<f64> {
        if !(q0 > 1.0 && q0.is_finite()) || !s0.is_finite() {
            return Err(Error::InvalidParameter(format!(
                "evaluation needs finite q > 1 and finite s, got q = {q0}, s = {s0}"
            )));
        }
        let ln_q = q0.ln();
        let ln_t = -s0 * ln_q;
        let mut acc = 0.0;
        for term in self.terms_on(domain) {
            acc += term.eval_ln(ln_q, ln_t)?;
        }
        Ok(acc)
    }

    /// The whole sum as a single fraction.
    pub fn combine(&self) -> RationalFunction {
        RationalFunction::sum(&self.terms())
    }
}

/// `numerator / ∏ denominator` with the denominator kept factored.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RationalFunction {
    pub numerator: QTLaurent,
    pub denominator: Vec<DenomFactor>,
}

fn multiset(factors: &[DenomFactor]) -> BTreeMap<DenomFactor, usize> {
    let mut m = BTreeMap::new();
    for f in factors {
        *m.entry(*f).or_insert(0) += 1;
    }
    m
}

fn expand(factors: &BTreeMap<DenomFactor, usize>) -> QTLaurent {
    factors
        .iter()
        .fold(QTLaurent::one(), |acc, (f, &k)| &acc * &f.as_qt().pow(k as u32))
}

impl RationalFunction {
    /// Sums terms over the least common multiset of their denominators.
    pub fn sum(terms: &[ZetaTerm]) -> RationalFunction {
        let mut lcm: BTreeMap<DenomFactor, usize> = BTreeMap::new();
        for t in terms {
            for (f, k) in multiset(&t.denominator) {
                let e = lcm.entry(f).or_insert(0);
                *e = (*e).max(k);
            }
        }
        let mut numerator = QTLaurent::zero();
        for t in terms {
            let own = multiset(&t.denominator);
            let missing: BTreeMap<DenomFactor, usize> = lcm
                .iter()
                .map(|(f, &k)| (*f, k - own.get(f).copied().unwrap_or(0)))
                .filter(|&(_, k)| k > 0)
                .collect();
            numerator = &numerator + &(&t.numerator * &expand(&missing));
        }
        let denominator = lcm.into_iter().flat_map(|(f, k)| std::iter::repeat_n(f, k)).collect();
        RationalFunction { numerator, denominator }
    }

    /// Equality as rational functions, by cross-multiplication.
    pub fn equivalent(&self, other: &RationalFunction) -> bool {
        let lhs = &self.numerator * &expand(&multiset(&other.denominator));
        let rhs = &other.numerator * &expand(&multiset(&self.denominator));
        lhs == rhs
    }

    pub fn eval_ln(&self, ln_q: f64, ln_t: f64) -> f64 {
        let den: f64 = self.denominator.iter().map(|f| f.eval_ln(ln_q, ln_t)).product();
        self.numerator.eval_ln(ln_q, ln_t) / den
    }

    /// Real parts of the poles allowed by the factored denominator.
    pub fn pole_real_parts(&self) -> Vec<Rational> {
        let mut out: Vec<Rational> = self
            .denominator
            .iter()
            .filter_map(|f| f.pole().map(|(r, _)| r))
            .collect();
        out.sort();
        out.dedup();
        out
    }
}

/// One arithmetic progression of candidate poles
/// `real_part + 2πi ℤ / (d ln q)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PoleData {
    #[serde(serialize_with = "ser_rational")]
    pub real_part: Rational,
    pub d: i64,
    pub source: String,
}

/// `-‖a‖/d(a)` for each generator with `d(a) ≠ 0`, then the family at `-1`.
pub fn candidate_poles(gens: &[LatticeVector], polytope: &NewtonPolytope) -> Vec<PoleData> {
    let mut out: Vec<PoleData> = Vec::new();
    let mut push = |pd: PoleData| {
        if !out.iter().any(|q| q.real_part == pd.real_part && q.d == pd.d) {
            out.push(pd);
        }
    };
    for &a in gens {
        if let Some((real_part, d)) = DenomFactor::for_generator(a, polytope).pole() {
            push(PoleData {
                real_part,
                d,
                source: a.to_string(),
            });
        }
    }
    push(PoleData {
        real_part: -Rational::one(),
        d: 1,
        source: "-1 constant".into(),
    });
    out
}

/// The strip `β < Re(s) < α`; `alpha = None` stands for `+∞`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConvergenceBand {
    pub beta: Rational,
    pub alpha: Option<Rational>,
}

impl ConvergenceBand {
    pub fn contains(&self, s: f64) -> bool {
        use num_traits::ToPrimitive;
        let above = s > self.beta.to_f64().unwrap_or(f64::NEG_INFINITY);
        let below = self
            .alpha
            .as_ref()
            .is_none_or(|a| s < a.to_f64().unwrap_or(f64::INFINITY));
        above && below
    }

    pub fn alpha_text(&self) -> String {
        self.alpha.as_ref().map_or_else(|| "+inf".into(), fmt_rational)
    }
}

impl fmt::Display for ConvergenceBand {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "β={}, α={}", fmt_rational(&self.beta), self.alpha_text())
    }
}

impl Serialize for ConvergenceBand {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let mut s = serializer.serialize_struct("ConvergenceBand", 2)?;
        s.serialize_field("beta", &fmt_rational(&self.beta))?;
        s.serialize_field("alpha", &self.alpha_text())?;
        s.end()
    }
}

pub fn convergence_band(gens: &[LatticeVector], polytope: &NewtonPolytope) -> ConvergenceBand {
    let mut alpha: Option<Rational> = None;
    let mut beta = -Rational::one();
    for &a in gens {
        let d = polytope.d_value(a);
        if d == 0 {
            continue;
        }
        let gamma = Rational::new(a.norm().into(), (-d).into());
        if d < 0 {
            if alpha.as_ref().is_none_or(|x| gamma < *x) {
                alpha = Some(gamma);
            }
        } else if gamma > beta {
            beta = gamma;
        }
    }
    debug_assert!(beta.is_negative() && alpha.as_ref().is_none_or(|a| a.is_positive()));
    ConvergenceBand { beta, alpha }
}

/// Assembles `Z₀(s, f)` over the conical partition after checking weak
/// non-degeneracy at `p`.
pub fn assemble(f: &LaurentPolynomial, p: u64) -> Result<ZetaFunction> {
    assemble_with(f, p, FanVariant::Partition)
}

pub fn assemble_with(f: &LaurentPolynomial, p: u64, fan: FanVariant) -> Result<ZetaFunction> {
    if !is_prime(p) {
        return Err(Error::NotPrime(p));
    }
    let polytope = NewtonPolytope::new(f)?;
    let part = conical_partition(&polytope);
    let report = check_weak_nondegeneracy(f, &part, p)?;
    if let Some(bad) = report.first_degenerate() {
        let w = bad.witness.expect("degenerate entries carry a witness");
        return Err(Error::Degenerate {
            face: bad.face.to_string(),
            witness: (w[0], w[1]),
        });
    }
    let cones = match fan {
        FanVariant::Partition => part.cones,
        FanVariant::Simple => make_simple(&part).cones,
    };
    let n0 = count_on_face(f, &polytope.full_face(), p)?;
    let mut l0 = unit_integral_term(n0);
    l0.label = "L0".into();
    let cones = cones
        .into_par_iter()
        .map(|cone| {
            let n_delta = count_n_delta(f, &cone, p)?;
            let mut l_term = unit_integral_term(n_delta);
            l_term.label = format!("L[{}]", cone.label);
            let s = s_term(&cone, &polytope);
            let term = l_term.product(&s.to_term(""), cone.label.clone());
            Ok(ConeContribution {
                cone,
                n_delta,
                l_term,
                s_term: s,
                term,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(ZetaFunction {
        polynomial: f.to_string(),
        p,
        fan,
        n0,
        l0,
        cones,
    })
}

impl ZetaFunction {
    /// The zero-free check behind the closed form `(1-q^{-1})²`.
    pub fn all_counts_vanish(&self) -> bool {
        self.n0.is_zero() && self.cones.iter().all(|c| c.n_delta.is_zero())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fans::conical_partition;

    fn v(a1: i64, a2: i64) -> LatticeVector {
        LatticeVector::new(a1, a2)
    }

    fn lp(s: &str) -> LaurentPolynomial {
        s.parse().unwrap()
    }

    fn r(n: i64, d: i64) -> Rational {
        Rational::new(n.into(), d.into())
    }

    #[test]
    fn example_table_s_column() {
        let g = lp("x^-3 + y^-2 + y^4");
        let poly = NewtonPolytope::new(&g).unwrap();
        let part = conical_partition(&poly);
        let texts: Vec<String> = part.cones.iter().map(|c| s_term(c, &poly).render_s()).collect();
        assert_eq!(
            texts,
            vec![
                "q^{-1+2s}/(1-q^{-1+2s})",
                "q^{-5+6s}/(1-q^{-5+6s})",
                "q^{-1+3s}/(1-q^{-1+3s})",
                "(1+q^{3-4s})q^{-6+8s}/((1-q^{-1+2s})(1-q^{-5+6s}))",
                "(1+q^{2-3s}+q^{4-6s})q^{-6+9s}/((1-q^{-1+3s})(1-q^{-5+6s}))",
            ]
        );
        assert_eq!(
            s_term(&part.cones[3], &poly).render_raw(),
            "(1+q^3*t^4)*q^-6*t^-8/((1-q^-1*t^-2)(1-q^-5*t^-6))"
        );
    }

    #[test]
    fn unit_integral_shapes() {
        let t0 = unit_integral_term(0);
        assert!(t0.denominator.is_empty());
        assert_eq!(t0.numerator.render_s(), "q^{-2}-2*q^{-1}+1");
        // at t = 1 the count drops out
        for n in [0, 3, 36] {
            let v = unit_integral_term(n).eval_ln(5f64.ln(), 0.0).unwrap();
            assert!((v - 16.0 / 25.0).abs() < 1e-14);
        }
        assert_eq!(render_unit_integral("0", false), "(1-q^{-1})^2");
    }

    #[test]
    fn unit_integral_matches_stationary_phase_expression() {
        // q^{-2}((q-1)^2 + N (t-1)/(1-q^{-1}t)) at q = 7, s = 0.2, N = 6
        let (q, s, n) = (7.0f64, 0.2f64, 6.0);
        let t = q.powf(-s);
        let direct = ((q - 1.0).powi(2) + n * (t - 1.0) / (1.0 - t / q)) / (q * q);
        let ours = unit_integral_term(6).eval_ln(q.ln(), t.ln()).unwrap();
        assert!((direct - ours).abs() < 1e-14);
    }

    #[test]
    fn example_poles_and_band() {
        let poly = NewtonPolytope::new(&lp("x^-3 + y^-2 + y^4")).unwrap();
        let gens = conical_partition(&poly).rays;
        let mut reals: Vec<Rational> = candidate_poles(&gens, &poly).into_iter().map(|p| p.real_part).collect();
        reals.sort();
        assert_eq!(reals, vec![r(-1, 1), r(1, 3), r(1, 2), r(5, 6)]);
        let band = convergence_band(&gens, &poly);
        assert_eq!(band.beta, r(-1, 1));
        assert_eq!(band.alpha, Some(r(1, 3)));
        assert_eq!(band.to_string(), "β=-1, α=1/3");
    }

    #[test]
    fn band_without_negative_d() {
        let poly = NewtonPolytope::new(&lp("x*y + x^2*y^2 + x^3*y")).unwrap();
        let band = convergence_band(&conical_partition(&poly).rays, &poly);
        assert_eq!(band.alpha, None);
        assert!(band.contains(1e6));
    }

    #[test]
    fn diagonal_pole_on_binomial_example() {
        let poly = NewtonPolytope::new(&lp("(y^-1 + x)^2 + y^3")).unwrap();
        let p = candidate_poles(&[v(1, 1)], &poly);
        assert_eq!(p[0].real_part, r(1, 1));
        assert_eq!(p[0].d, -2);
        // a d = 0 generator contributes nothing
        let p = candidate_poles(&[v(1, 0)], &poly);
        assert_eq!(p.len(), 1);
        assert_eq!(p[0].source, "-1 constant");
    }

    #[test]
    fn assembled_example_has_six_terms() {
        let z = assemble(&lp("x^-3 + y^-2 + y^4"), 7).unwrap();
        assert_eq!(z.terms().len(), 6);
        assert!(z.terms().iter().all(|t| t.cone_ray_factor_count() <= 2));
        let at_zero = z.evaluate(7.0, 0.0).unwrap();
        assert!((at_zero - 1.0).abs() < 1e-12, "{at_zero}");
    }

    #[test]
    fn value_at_zero_is_total_measure() {
        for (f, p) in [
            ("x^-3 + y^-2 + y^4", 5),
            ("(y^-1 + x)^2 + y^3", 7),
            ("x*y + x^2*y^2 + x^3*y", 11),
        ] {
            let z = assemble(&lp(f), p).unwrap();
            assert!((z.evaluate(p as f64, 0.0).unwrap() - 1.0).abs() < 1e-12, "{f}");
        }
    }

    #[test]
    fn degenerate_and_bad_input() {
        assert!(matches!(assemble(&lp("x*y"), 7), Err(Error::LowDimension { dim: 0 })));
        assert_eq!(assemble(&lp("x + y + 1"), 8), Err(Error::NotPrime(8)));
        // (1+x)(1+y) is singular at (-1,-1)
        assert!(matches!(assemble(&lp("(1+x)*(1+y)"), 5), Err(Error::Degenerate { .. })));
    }

    #[test]
    fn pole_hit_is_reported() {
        let z = assemble(&lp("x^-3 + y^-2 + y^4"), 7).unwrap();
        assert!(matches!(z.evaluate(7.0, 0.5), Err(Error::PoleHit { .. })));
        assert!(z.evaluate(7.0, 0.5 - 1e-6).is_ok());
        assert!(z.evaluate(1.0, 0.1).is_err());
    }

    #[test]
    fn divergence_toward_alpha() {
        let z = assemble(&lp("x^-3 + y^-2 + y^4"), 7).unwrap();
        let mut last = 0.0;
        for k in 2..=5 {
            let v = z.evaluate(7.0, 1.0 / 3.0 - 10f64.powi(-k)).unwrap();
            assert!(v > last);
            last = v;
        }
        assert!(last > 1e3);
    }

    #[test]
    fn combine_respects_permutation_and_rescaling() {
        let z = assemble(&lp("x^-3 + y^-2 + y^4"), 7).unwrap();
        let mut rev = z.clone();
        rev.cones.reverse();
        assert!(z.combine().equivalent(&rev.combine()));
        let ln_q = 7f64.ln();
        let ln_t = -0.2 * ln_q;
        let a = z.combine().eval_ln(ln_q, ln_t);
        let b = z.evaluate(7.0, 0.2).unwrap();
        assert!((a - b).abs() < 1e-9 * b.abs());

        let term = &z.cones[0].term;
        let one = RationalFunction::sum(std::slice::from_ref(term));
        let times_q = RationalFunction {
            numerator: &term.numerator * &QTLaurent::qt(1, 0),
            denominator: term.denominator.clone(),
        };
        assert!(!one.equivalent(&times_q));
        let c = DenomFactor::Constant { norm: 1 };
        let expanded = RationalFunction {
            numerator: &term.numerator * &c.as_qt(),
            denominator: [term.denominator.clone(), vec![c]].concat(),
        };
        assert!(one.equivalent(&expanded));
    }

    #[test]
    fn restricted_domain_binomial_example() {
        let z = assemble(&lp("(y^-1 + x)^2 + y^3"), 7).unwrap();
        let interior: Vec<&ZetaTerm> = z.terms_on(Domain::Interior);
        let combined = RationalFunction::sum(&interior.into_iter().cloned().collect::<Vec<_>>());
        // (1-q^{-1}) q^{-2+2s} / (1-q^{-1+2s})
        let closed = RationalFunction {
            numerator: &QTLaurent::qt(-2, -2) - &QTLaurent::qt(-3, -2),
            denominator: vec![DenomFactor::ConeRay { norm: 1, d: -2 }],
        };
        assert!(combined.equivalent(&closed), "{}", combined.numerator.render_s());
    }
}

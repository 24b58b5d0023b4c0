//! Prime-field arithmetic, exhaustive point counts on the torus `(F_p^×)²`
//! and the non-degeneracy checks that gate the explicit formula.
//!
//! Only prime residue fields are supported. All counts come from exhaustive
//! enumeration; strips of the torus are scanned in parallel and summed, which
//! gives the same integer as a sequential scan.

use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::fans::{Cone, ConicalPartition};
use crate::geometry::{Face, NewtonPolytope};
use crate::laurent::{LatticePoint, LaurentPolynomial};

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n.is_multiple_of(2) {
        return n == 2;
    }
    let mut d = 3u64;
    while d.saturating_mul(d) <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 2;
    }
    true
}

pub fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

pub fn pow_mod(mut base: u64, mut exp: u64, m: u64) -> u64 {
    let mut acc = 1 % m;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base, m);
        }
        base = mul_mod(base, base, m);
        exp >>= 1;
    }
    acc
}

/// Inverse modulo any `m` for `gcd(a, m) = 1`.
pub fn inv_mod(a: u64, m: u64) -> u64 {
    let (mut old_r, mut r) = (a as i128 % m as i128, m as i128);
    let (mut old_s, mut s) = (1i128, 0i128);
    while r != 0 {
        let q = old_r / r;
        (old_r, r) = (r, old_r - q * r);
        (old_s, s) = (s, old_s - q * s);
    }
    assert_eq!(old_r, 1, "{a} is not invertible modulo {m}");
    old_s.rem_euclid(m as i128) as u64
}

/// `u^e mod m` for a unit `u` and any signed exponent.
pub fn signed_pow_mod(u: u64, e: i64, m: u64) -> u64 {
    if e >= 0 {
        pow_mod(u, e as u64, m)
    } else {
        pow_mod(inv_mod(u, m), e.unsigned_abs(), m)
    }
}

/// A Laurent polynomial over `F_p`. Coefficients lie in `[1, p-1]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FpPoly {
    p: u64,
    terms: Vec<(LatticePoint, u64)>,
}

impl FpPoly {
    pub fn new(p: u64, terms: impl IntoIterator<Item = (LatticePoint, u64)>) -> Self {
        let mut acc: BTreeMap<LatticePoint, u64> = BTreeMap::new();
        for (e, c) in terms {
            let slot = acc.entry(e).or_insert(0);
            *slot = (*slot + c % p) % p;
        }
        FpPoly {
            p,
            terms: acc.into_iter().filter(|&(_, c)| c != 0).collect(),
        }
    }

    pub fn prime(&self) -> u64 {
        self.p
    }

    pub fn terms(&self) -> &[(LatticePoint, u64)] {
        &self.terms
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Value at a torus point `(x, y)`, both nonzero mod `p`.
    pub fn eval(&self, x: u64, y: u64) -> u64 {
        let p = self.p;
        self.terms.iter().fold(0, |acc, &(e, c)| {
            let t = mul_mod(c, mul_mod(signed_pow_mod(x, e.i, p), signed_pow_mod(y, e.j, p), p), p);
            (acc + t) % p
        })
    }

    pub fn gradient(&self) -> (FpPoly, FpPoly) {
        let p = self.p;
        let factor = |k: i64| k.rem_euclid(p as i64) as u64;
        let dx = FpPoly::new(
            p,
            self.terms
                .iter()
                .filter(|(e, _)| e.i != 0)
                .map(|&(e, c)| (LatticePoint::new(e.i - 1, e.j), mul_mod(c, factor(e.i), p))),
        );
        let dy = FpPoly::new(
            p,
            self.terms
                .iter()
                .filter(|(e, _)| e.j != 0)
                .map(|&(e, c)| (LatticePoint::new(e.i, e.j - 1), mul_mod(c, factor(e.j), p))),
        );
        (dx, dy)
    }

    /// Coefficients of `f(x, ·)` as a polynomial in `y`, for a fixed unit `x`.
    fn specialize_x(&self, x: u64) -> Vec<(i64, u64)> {
        let p = self.p;
        let mut by_j: BTreeMap<i64, u64> = BTreeMap::new();
        for &(e, c) in &self.terms {
            let slot = by_j.entry(e.j).or_insert(0);
            *slot = (*slot + mul_mod(c, signed_pow_mod(x, e.i, p), p)) % p;
        }
        by_j.into_iter().filter(|&(_, c)| c != 0).collect()
    }
}

fn eval_in_y(coeffs: &[(i64, u64)], y: u64, p: u64) -> u64 {
    coeffs
        .iter()
        .fold(0, |acc, &(j, c)| (acc + mul_mod(c, signed_pow_mod(y, j, p), p)) % p)
}

/// `#{(x, y) ∈ (F_p^×)² : g(x, y) = 0}` by exhaustive evaluation.
pub fn torus_zero_count(g: &FpPoly) -> u64 {
    let p = g.p;
    if g.is_zero() {
        return (p - 1) * (p - 1);
    }
    (1..p)
        .into_par_iter()
        .map(|x| {
            let coeffs = g.specialize_x(x);
            if coeffs.is_empty() {
                return p - 1;
            }
            (1..p).filter(|&y| eval_in_y(&coeffs, y, p) == 0).count() as u64
        })
        .sum()
}

/// First torus point (in `(x, y)` lexicographic order) where `g` and both
/// partials vanish.
pub fn singular_torus_point(g: &FpPoly) -> Option<(u64, u64)> {
    let p = g.p;
    let (gx, gy) = g.gradient();
    (1..p).into_par_iter().find_map_first(|x| {
        let c = g.specialize_x(x);
        let cx = gx.specialize_x(x);
        let cy = gy.specialize_x(x);
        (1..p).find_map(|y| {
            let zero = eval_in_y(&c, y, p) == 0 && eval_in_y(&cx, y, p) == 0 && eval_in_y(&cy, y, p) == 0;
            zero.then_some((x, y))
        })
    })
}

/// Every torus point where `g` and both partials vanish, in lexicographic order.
pub fn singular_torus_points(g: &FpPoly) -> Vec<(u64, u64)> {
    let p = g.p;
    let (gx, gy) = g.gradient();
    (1..p)
        .into_par_iter()
        .flat_map_iter(|x| {
            let c = g.specialize_x(x);
            let cx = gx.specialize_x(x);
            let cy = gy.specialize_x(x);
            (1..p)
                .filter(move |&y| eval_in_y(&c, y, p) == 0 && eval_in_y(&cx, y, p) == 0 && eval_in_y(&cy, y, p) == 0)
                .map(move |y| (x, y))
        })
        .collect()
}

fn clear_and_reduce(f_a: &LaurentPolynomial, p: u64, check_shift: bool) -> Result<(LaurentPolynomial, FpPoly)> {
    let cleared = f_a.clear_denominators()?;
    if check_shift {
        for k in [cleared.shift.i, cleared.shift.j] {
            if k != 0 && (k as u64).is_multiple_of(p) {
                return Err(Error::BadPrime {
                    p,
                    reason: format!("divides the clearing exponent {k}"),
                });
            }
        }
    }
    let reduced = cleared.poly.reduce_mod_p(p)?;
    Ok((cleared.poly, reduced))
}

/// Checks that `{f̄_a = 0, ∇f̄_a = 0}` has no solution on `(F_p^×)²`, after
/// clearing denominators. Returns `(nondegenerate, witness)`.
pub fn is_face_nondegenerate(f_a: &LaurentPolynomial, p: u64) -> Result<(bool, Option<(u64, u64)>)> {
    let (_, reduced) = clear_and_reduce(f_a, p, true)?;
    let witness = singular_torus_point(&reduced);
    Ok((witness.is_none(), witness))
}

/// Zero count of the cleared, reduced face function attached to `cone`.
pub fn count_n_delta(f: &LaurentPolynomial, cone: &Cone, p: u64) -> Result<u64> {
    count_on_face(f, &cone.face, p)
}

pub(crate) fn count_on_face(f: &LaurentPolynomial, face: &Face, p: u64) -> Result<u64> {
    let f_a = f.restrict_to_face(face);
    let (_, reduced) = clear_and_reduce(&f_a, p, false)?;
    Ok(torus_zero_count(&reduced))
}

/// One checked face.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FaceReport {
    /// Cones (or the face itself) this entry stands for.
    pub label: String,
    pub face: Face,
    /// The face function after clearing denominators, in canonical text form.
    pub cleared: String,
    pub degenerate: bool,
    pub witness: Option<[u64; 2]>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct NondegeneracyReport {
    pub p: u64,
    pub entries: Vec<FaceReport>,
    pub overall: bool,
}

impl NondegeneracyReport {
    fn from_faces(f: &LaurentPolynomial, p: u64, faces: Vec<(String, Face)>) -> Result<Self> {
        let mut entries = Vec::with_capacity(faces.len());
        for (label, face) in faces {
            let f_a = f.restrict_to_face(&face);
            let (cleared, reduced) = clear_and_reduce(&f_a, p, true)?;
            let witness = singular_torus_point(&reduced);
            entries.push(FaceReport {
                label,
                face,
                cleared: cleared.to_string(),
                degenerate: witness.is_some(),
                witness: witness.map(|(x, y)| [x, y]),
            });
        }
        let overall = entries.iter().all(|e| !e.degenerate);
        Ok(NondegeneracyReport { p, entries, overall })
    }

    pub fn first_degenerate(&self) -> Option<&FaceReport> {
        self.entries.iter().find(|e| e.degenerate)
    }
}

/// Weak non-degeneracy: every face `F(a)` with `a ∈ ℝ₊²`, including `F(0)`.
pub fn check_weak_nondegeneracy(f: &LaurentPolynomial, part: &ConicalPartition, p: u64) -> Result<NondegeneracyReport> {
    let polytope = NewtonPolytope::new(f)?;
    let mut faces: Vec<(String, Face)> = vec![("a=0".to_string(), polytope.full_face())];
    for cone in &part.cones {
        match faces.iter_mut().find(|(_, face)| *face == cone.face) {
            Some((label, _)) => {
                label.push_str("; ");
                label.push_str(&cone.label);
            }
            None => faces.push((cone.label.clone(), cone.face.clone())),
        }
    }
    NondegeneracyReport::from_faces(f, p, faces)
}

/// Khovanskii non-degeneracy: every face of `Γ∞`, for all `a ∈ ℝ²`.
pub fn check_khovanskii_nondegeneracy(f: &LaurentPolynomial, p: u64) -> Result<NondegeneracyReport> {
    let polytope = NewtonPolytope::new(f)?;
    let faces = polytope
        .faces()
        .into_iter()
        .map(|face| (face.to_string(), face))
        .collect();
    NondegeneracyReport::from_faces(f, p, faces)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fans::conical_partition;
    use crate::geometry::LatticeVector;

    fn lp(s: &str) -> LaurentPolynomial {
        s.parse().unwrap()
    }

    #[test]
    fn primes() {
        let small: Vec<u64> = (0..40).filter(|&n| is_prime(n)).collect();
        assert_eq!(small, vec![2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37]);
        assert!(is_prime(10007));
        assert!(!is_prime(10001));
    }

    #[test]
    fn modular_inverse() {
        assert_eq!(inv_mod(2, 5), 3);
        assert_eq!(inv_mod(3, 49), 33);
        assert_eq!(signed_pow_mod(3, -1, 7), 5);
    }

    #[test]
    fn torus_counts() {
        assert_eq!(torus_zero_count(&lp("1").reduce_mod_p(7).unwrap()), 0);
        assert_eq!(torus_zero_count(&lp("x^3 + y^2").reduce_mod_p(7).unwrap()), 6);
        assert_eq!(torus_zero_count(&lp("x + y").reduce_mod_p(5).unwrap()), 4);
        assert_eq!(torus_zero_count(&lp("x^5*y^-2").reduce_mod_p(11).unwrap()), 0);
    }

    #[test]
    fn x_cubed_plus_y_squared_by_fibers() {
        // independent route: for each x, count y with y² = -x³
        let p = 7u64;
        let n: u64 = (1..p)
            .map(|x| {
                let target = (p - pow_mod(x, 3, p)) % p;
                (1..p).filter(|&y| mul_mod(y, y, p) == target).count() as u64
            })
            .sum();
        assert_eq!(n, 6);
    }

    #[test]
    fn face_nondegeneracy_examples() {
        assert_eq!(is_face_nondegenerate(&lp("x^-3 + y^-2"), 7).unwrap(), (true, None));

        let (ok, w) = is_face_nondegenerate(&lp("(y^-1 + x)^2"), 7).unwrap();
        assert!(!ok);
        let (x, y) = w.unwrap();
        assert_eq!(mul_mod(x, y, 7), 6, "witness satisfies x = -1/y");

        assert_eq!(is_face_nondegenerate(&lp("3*x^2*y^-5"), 7).unwrap(), (true, None));
    }

    #[test]
    fn clearing_exponent_divisible_by_p_is_bad() {
        assert!(matches!(
            is_face_nondegenerate(&lp("x^-3 + y^-2"), 3),
            Err(Error::BadPrime { .. })
        ));
        assert!(matches!(
            is_face_nondegenerate(&lp("1/7*x + y"), 7),
            Err(Error::BadPrime { .. })
        ));
    }

    #[test]
    fn coefficient_vanishing_mod_p_is_degenerate() {
        // a vertex coefficient divisible by p leaves nothing to control the valuation
        let (ok, w) = is_face_nondegenerate(&lp("7*x^2*y"), 7).unwrap();
        assert!(!ok);
        assert_eq!(w, Some((1, 1)));
    }

    #[test]
    fn weak_report_for_example_polynomial() {
        let g = lp("x^-3 + y^-2 + y^4");
        let part = conical_partition(&NewtonPolytope::new(&g).unwrap());
        let r = check_weak_nondegeneracy(&g, &part, 7).unwrap();
        assert!(r.overall);
        // a=0, two vertices, one edge
        assert_eq!(r.entries.len(), 4);
        assert!(r.entries.iter().all(|e| e.witness.is_none()));
    }

    #[test]
    fn weak_vs_khovanskii_on_binomial_example() {
        let f = lp("(y^-1 + x)^2 + y^3");
        let part = conical_partition(&NewtonPolytope::new(&f).unwrap());
        let weak = check_weak_nondegeneracy(&f, &part, 7).unwrap();
        assert!(weak.overall);
        let kh = check_khovanskii_nondegeneracy(&f, 7).unwrap();
        assert!(!kh.overall);
        let bad = kh.first_degenerate().unwrap();
        assert_eq!(bad.face.inward_normal, Some(LatticeVector::new(-1, 1)));
        assert_eq!(bad.cleared, "1 + 2*x*y + x^2*y^2");
        let [x, y] = bad.witness.unwrap();
        assert_eq!(mul_mod(x, y, 7), 6);
    }

    #[test]
    fn khovanskii_example_polynomial() {
        assert!(
            check_khovanskii_nondegeneracy(&lp("x^-3 + y^-2 + y^4"), 7)
                .unwrap()
                .overall
        );
    }

    #[test]
    fn product_of_linear_forms_is_singular_at_minus_one() {
        let r = check_khovanskii_nondegeneracy(&lp("1 + x + y + x*y"), 5).unwrap();
        let full = r.entries.last().unwrap();
        assert_eq!(full.face.dim, 2);
        assert!(full.degenerate);
        assert_eq!(full.witness, Some([4, 4]));
        assert!(!r.overall);
    }

    #[test]
    fn degenerate_hull_rejected() {
        assert!(matches!(
            check_khovanskii_nondegeneracy(&lp("(x + y)^2"), 7),
            Err(Error::LowDimension { dim: 1 })
        ));
    }

    #[test]
    fn n_delta_counts() {
        let g = lp("x^-3 + y^-2 + y^4");
        let part = conical_partition(&NewtonPolytope::new(&g).unwrap());
        for cone in &part.cones {
            let n = count_n_delta(&g, cone, 7).unwrap();
            if cone.face.dim == 1 {
                assert_eq!(n, 6);
            } else {
                assert_eq!(n, 0);
            }
        }
    }
}

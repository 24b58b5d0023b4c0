#![allow(dead_code)]

use lzeta::{
    assemble, conical_partition, make_simple, singular_torus_points, Cone, Error, LatticePoint, LatticeVector,
    LaurentPolynomial, NewtonPolytope,
};
use num_integer::Integer;
use proptest::prelude::*;
use proptest::test_runner::TestCaseError;

pub const SMALL_PRIMES: [u64; 11] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31];

/// 3 to 6 exponents in `[-5, 5]²` spanning a 2-dimensional hull, with nonzero
/// integer coefficients.
pub fn laurent_2d() -> impl Strategy<Value = LaurentPolynomial> {
    prop::collection::vec(((-5i64..=5, -5i64..=5), -9i64..=9), 3..=6)
        .prop_map(|terms| {
            let terms: Vec<((i64, i64), i64)> = terms
                .into_iter()
                .map(|(e, c)| (e, if c == 0 { 1 } else { c }))
                .collect();
            LaurentPolynomial::from_int_terms(&terms)
        })
        .prop_filter("hull must be 2-dimensional", |f| NewtonPolytope::new(f).is_ok())
}

pub fn polytope() -> impl Strategy<Value = NewtonPolytope> {
    laurent_2d().prop_map(|f| NewtonPolytope::new(&f).unwrap())
}

pub fn primitive_vector(range: i64) -> impl Strategy<Value = LatticeVector> {
    (-range..=range, -range..=range)
        .prop_filter("primitive", |&(a, b)| (a, b) != (0, 0) && a.gcd(&b) == 1)
        .prop_map(|(a, b)| LatticeVector::new(a, b))
}

pub fn independent_pair(range: i64) -> impl Strategy<Value = (LatticeVector, LatticeVector)> {
    (primitive_vector(range), primitive_vector(range)).prop_filter("independent", |(a, b)| a.det(b) != 0)
}

pub fn prime_up_to_31() -> impl Strategy<Value = u64> {
    prop::sample::select(SMALL_PRIMES.to_vec())
}

/// Every lattice point of `[0,20]² ∖ {0}` lies in exactly one cone.
pub fn check_partition_coverage(p: &NewtonPolytope) -> Result<(), TestCaseError> {
    let part = conical_partition(p);
    for m in 0..=20 {
        for n in 0..=20 {
            if (m, n) == (0, 0) {
                continue;
            }
            let v = LatticeVector::new(m, n);
            let hits = part.cones.iter().filter(|c| c.contains(v)).count();
            prop_assert_eq!(hits, 1, "{} lies in {} cones", v, hits);
        }
    }
    Ok(())
}

/// Interior lattice points `Σ λⱼ aⱼ` with positive integer `λ`.
fn interior_point(cone: &Cone, l1: i64, l2: i64) -> LatticeVector {
    match cone.generators.as_slice() {
        [a] => LatticeVector::new(a.a1 * l1, a.a2 * l1),
        [a, b] => LatticeVector::new(a.a1 * l1 + b.a1 * l2, a.a2 * l1 + b.a2 * l2),
        _ => unreachable!(),
    }
}

pub fn check_face_constancy(p: &NewtonPolytope, samples: &[(i64, i64)]) -> Result<(), TestCaseError> {
    for cone in &conical_partition(p).cones {
        for &(l1, l2) in samples {
            let v = interior_point(cone, l1, l2);
            prop_assert!(cone.contains(v));
            prop_assert_eq!(&p.first_meet_locus(v), &cone.face, "cone {} at {}", cone.label, v);
        }
    }
    Ok(())
}

pub fn check_fundamental_count(a: LatticeVector, b: LatticeVector) -> Result<(), TestCaseError> {
    let cone = Cone::sector(a, b, lzeta::Face::vertex(LatticePoint::ORIGIN));
    let pts = cone.fundamental_points();
    prop_assert_eq!(pts.len() as i64, a.det(&b).abs());
    let mut dedup = pts.clone();
    dedup.dedup();
    prop_assert_eq!(dedup.len(), pts.len());
    Ok(())
}

/// Refined cones are unimodular, keep the original rays, and tile each
/// original sector exactly.
pub fn check_make_simple(p: &NewtonPolytope) -> Result<(), TestCaseError> {
    let part = conical_partition(p);
    let fan = make_simple(&part);
    for c in fan.cones.iter().filter(|c| !c.is_ray()) {
        prop_assert_eq!(c.det().abs(), 1, "cone {} has det {}", c.label, c.det());
    }
    for r in &part.rays {
        prop_assert!(fan.rays.contains(r));
    }
    for m in 0..=20 {
        for n in 0..=20 {
            if (m, n) == (0, 0) {
                continue;
            }
            let v = LatticeVector::new(m, n);
            let hits: Vec<&Cone> = fan.cones.iter().filter(|c| c.contains(v)).collect();
            prop_assert_eq!(hits.len(), 1, "{} lies in {} refined cones", v, hits.len());
            let original = part.cone_containing(v).unwrap();
            prop_assert_eq!(&hits[0].face, &original.face);
        }
    }
    Ok(())
}

/// The singular torus points of `f_τ` and of `x^n y^m f_τ` coincide on every face.
pub fn check_cleared_equivalence(f: &LaurentPolynomial, p: u64) -> Result<(), TestCaseError> {
    let polytope = NewtonPolytope::new(f).unwrap();
    for face in polytope.faces() {
        let f_a = f.face_function(&face).unwrap();
        let cleared = f_a.clear_denominators().unwrap();
        let laurent = singular_torus_points(&f_a.reduce_mod_p(p).unwrap());
        let polynomial = singular_torus_points(&cleared.poly.reduce_mod_p(p).unwrap());
        prop_assert_eq!(laurent, polynomial, "face {} at p = {}", face, p);
    }
    Ok(())
}

/// At most two cone-ray factors per assembled term. Degenerate inputs are
/// skipped.
pub fn check_term_factor_count(f: &LaurentPolynomial, p: u64) -> Result<(), TestCaseError> {
    let z = match assemble(f, p) {
        Ok(z) => z,
        Err(Error::Degenerate { .. }) | Err(Error::BadPrime { .. }) => return Ok(()),
        Err(e) => return Err(TestCaseError::fail(e.to_string())),
    };
    for term in z.terms() {
        prop_assert!(term.cone_ray_factor_count() <= 2, "{}", term.render_s());
        prop_assert!(term.denominator.len() <= 3);
    }
    Ok(())
}

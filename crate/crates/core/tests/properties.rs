mod common;

use common::*;
use lzeta::oracle::oracle_alpha;
use lzeta::{
    assemble, candidate_poles, classify_generators, conical_partition, convergence_band, s_term, torus_zero_count,
    truncated_z0, unit_torus_integral, Error, LatticePoint, LatticeVector, LaurentPolynomial, NewtonPolytope, Rational,
};
use num_integer::Integer;
use proptest::prelude::*;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn print_then_parse_is_identity(f in laurent_2d()) {
        let text = f.to_string();
        prop_assert_eq!(text.parse::<LaurentPolynomial>().unwrap(), f);
    }

    #[test]
    fn gradient_is_linear(f in laurent_2d(), g in laurent_2d()) {
        let (fx, fy) = f.gradient();
        let (gx, gy) = g.gradient();
        let (sx, sy) = (&f + &g).gradient();
        prop_assert_eq!(sx, &fx + &gx);
        prop_assert_eq!(sy, &fy + &gy);
    }

    #[test]
    fn cleared_polynomial_is_minimal(f in laurent_2d()) {
        let c = f.clear_denominators().unwrap();
        let supp = c.poly.support();
        prop_assert!(supp.iter().all(|e| e.i >= 0 && e.j >= 0));
        prop_assert!(c.shift.i == 0 || supp.iter().any(|e| e.i == 0));
        prop_assert!(c.shift.j == 0 || supp.iter().any(|e| e.j == 0));
    }

    #[test]
    fn partition_covers_quadrant(p in polytope()) {
        check_partition_coverage(&p)?;
    }

    #[test]
    fn faces_constant_on_cones(
        p in polytope(),
        samples in prop::collection::vec((1i64..30, 1i64..30), 10),
    ) {
        check_face_constancy(&p, &samples)?;
    }

    #[test]
    fn parallelepiped_count_is_det((a, b) in independent_pair(9)) {
        check_fundamental_count(a, b)?;
    }

    #[test]
    fn simple_refinement(p in polytope()) {
        check_make_simple(&p)?;
    }

    #[test]
    fn cleared_system_equivalence(f in laurent_2d(), p in prime_up_to_31()) {
        check_cleared_equivalence(&f, p)?;
    }

    #[test]
    fn term_factor_count(f in laurent_2d(), p in prop::sample::select(vec![5u64, 7, 11])) {
        check_term_factor_count(&f, p)?;
    }

    #[test]
    fn normals_take_precedence(p in polytope()) {
        let part = conical_partition(&p);
        let cls = classify_generators(&part.rays, &p);
        prop_assert_eq!(cls.normals.len() + cls.axes.len() + cls.extras.len(), part.rays.len());
        for a in &cls.axes {
            prop_assert!(!p.inward_normals().contains(a));
        }
        prop_assert!(cls.extras.is_empty());
    }

    #[test]
    fn edges_get_rays_and_vertices_get_sectors(p in polytope()) {
        for face in p.faces().into_iter().filter(|f| f.dim < 2) {
            let c = lzeta::cone_of_face(&p, &face).unwrap();
            prop_assert_eq!(c.generators.len(), 2 - face.dim as usize);
            // a sample of the cone meets the face
            prop_assert_eq!(&p.first_meet_locus(c.interior_sample()), &face);
        }
    }
}

/// Independent count: `x^i y^j = c` has `(p-1)·g` torus solutions when `c` is a
/// `g`-th power residue, `g = gcd(i, j, p-1)`, and none otherwise.
fn binomial_count(i: i64, j: i64, c: u64, p: u64) -> u64 {
    let g = i.gcd(&j).gcd(&((p - 1) as i64)) as u64;
    let on_image = lzeta::residue::pow_mod(c, (p - 1) / g, p) == 1;
    if on_image {
        (p - 1) * g
    } else {
        0
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn binomial_counts_match_character_theory(
        (i, j) in (-8i64..=8, -8i64..=8).prop_filter("nonconstant", |&e| e != (0, 0)),
        c in 1u64..31,
        p in prime_up_to_31(),
    ) {
        let c = c % p;
        prop_assume!(c != 0);
        // x^i y^j - c
        let f = LaurentPolynomial::from_int_terms(&[((i, j), 1), ((0, 0), -(c as i64))]);
        let count = torus_zero_count(&f.reduce_mod_p(p).unwrap());
        prop_assert_eq!(count, binomial_count(i, j, c, p));
    }

    #[test]
    fn lattice_sum_matches_s_term_at_zero(p in polytope()) {
        // t = 1: every series is Σ q^{-‖v‖}, so truncation at norm 40 is far below 1e-12
        let q = 7.0f64;
        for cone in &conical_partition(&p).cones {
            let exact = s_term(cone, &p).to_term("").eval_ln(q.ln(), 0.0).unwrap();
            let mut direct = 0.0;
            for m in 0..=40i64 {
                for n in 0..=(40 - m) {
                    let v = LatticeVector::new(m, n);
                    if cone.contains(v) {
                        direct += q.powi(-(m + n) as i32);
                    }
                }
            }
            prop_assert!((exact - direct).abs() < 1e-12, "{}: {} vs {}", cone.label, exact, direct);
        }
    }

    #[test]
    fn combined_poles_are_candidates(f in laurent_2d()) {
        let Ok(z) = assemble(&f, 7) else { return Ok(()); };
        let poly = NewtonPolytope::new(&f).unwrap();
        let gens = conical_partition(&poly).rays;
        let cands: Vec<Rational> = candidate_poles(&gens, &poly).into_iter().map(|p| p.real_part).collect();
        for r in z.combine().pole_real_parts() {
            prop_assert!(cands.contains(&r));
        }
    }

    #[test]
    fn evaluation_ignores_cone_order(f in laurent_2d(), seed in any::<u64>()) {
        let Ok(z) = assemble(&f, 5) else { return Ok(()); };
        let band = convergence_band(&conical_partition(&NewtonPolytope::new(&f).unwrap()).rays, &NewtonPolytope::new(&f).unwrap());
        let s = 0.5 * num_traits::ToPrimitive::to_f64(&band.beta).unwrap();
        let mut shuffled = z.clone();
        let n = shuffled.cones.len();
        shuffled.cones.rotate_left((seed as usize) % n);
        shuffled.cones.swap(0, n - 1);
        let a = z.evaluate(5.0, s);
        let b = shuffled.evaluate(5.0, s);
        match (a, b) {
            (Ok(a), Ok(b)) => prop_assert!((a - b).abs() <= 1e-9 * a.abs().max(1.0)),
            (Err(Error::PoleHit { .. }), Err(Error::PoleHit { .. })) => {}
            other => prop_assert!(false, "{:?}", other),
        }
        prop_assert!(z.combine().equivalent(&shuffled.combine()));
    }

    #[test]
    fn total_measure_at_s_zero(f in laurent_2d()) {
        let Ok(z) = assemble(&f, 7) else { return Ok(()); };
        prop_assert!((z.evaluate(7.0, 0.0).unwrap() - 1.0).abs() < 1e-10);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn oracle_refinement_is_monotone(f in laurent_2d(), s in 0.05f64..0.9) {
        let mut last = f64::INFINITY;
        for d in 1..=3 {
            let e = unit_torus_integral(&f, 5, s, d).unwrap();
            prop_assert!(e.error_bound <= last + 1e-15);
            last = e.error_bound;
        }
    }

    #[test]
    fn oracle_truncation_is_monotone(f in laurent_2d(), frac in 0.1f64..0.9) {
        let s = oracle_alpha(&f).map_or(0.5, |a| frac * num_traits::ToPrimitive::to_f64(&a).unwrap());
        let a = truncated_z0(&f, 5, s, 6, 2, (0, 0)).unwrap();
        let b = truncated_z0(&f, 5, s, 12, 2, (0, 0)).unwrap();
        // the wider box certifies a subinterval of the cruder one, up to float slack
        prop_assert!(b.lower() >= a.lower() - 1e-9);
        prop_assert!(b.upper() <= a.upper() + 1e-9);
    }

    #[test]
    fn oracle_brackets_formula(f in laurent_2d(), frac in 0.2f64..0.8) {
        let Ok(z) = assemble(&f, 5) else { return Ok(()); };
        let s = oracle_alpha(&f).map_or(0.6, |a| frac * num_traits::ToPrimitive::to_f64(&a).unwrap());
        let e = truncated_z0(&f, 5, s, 30, 3, (0, 0)).unwrap();
        let formula = z.evaluate(5.0, s).unwrap();
        prop_assert!(e.brackets(formula), "{:?} vs {}", e, formula);
    }
}

#[test]
fn monomial_stratum_is_exact() {
    for p in [2u64, 3, 7] {
        let e = unit_torus_integral(&LaurentPolynomial::from_int_terms(&[((2, -1), 3)]), p, 0.7, 1).unwrap();
        assert_eq!(e.error_bound, 0.0);
    }
}

#[test]
fn low_dimension_is_rejected() {
    let seg = LaurentPolynomial::from_int_terms(&[((1, 1), 1), ((2, 2), 1)]);
    assert_eq!(NewtonPolytope::new(&seg).unwrap_err(), Error::LowDimension { dim: 1 });
    let pt = NewtonPolytope::from_points(&[LatticePoint::new(1, 1)]).unwrap_err();
    assert_eq!(pt, Error::LowDimension { dim: 0 });
}

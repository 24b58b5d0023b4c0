//! `Z₀(s, f) = ∫_{(ℤ_p∖{0})²} |f|_p^s` in closed form for two-variable Laurent
//! polynomials `f` that are weakly non-degenerate mod `p`, plus a numeric
//! integrator to check it against.
//!
//! ```
//! use lzeta::{assemble, LaurentPolynomial};
//!
//! let g: LaurentPolynomial = "x^-3 + y^-2 + y^4".parse().unwrap();
//! let z = assemble(&g, 7).unwrap();
//! assert_eq!(z.cones.len(), 5);
//! assert!((z.evaluate(7.0, 0.0).unwrap() - 1.0).abs() < 1e-12);
//! ```

pub mod error;
pub mod fans;
pub mod geometry;
pub mod laurent;
pub mod oracle;
pub mod residue;
pub mod zetafun;

pub use error::{Error, Result};
pub use fans::{
    classify_generators, cone_of_face, conical_partition, make_simple, make_simple_nontrivial, Cone, ConicalPartition,
    GeneratorClasses, SimpleFan,
};
pub use geometry::{Face, LatticeVector, NewtonPolytope};
pub use laurent::{fmt_rational, ClearedPolynomial, LatticePoint, LaurentPolynomial, Rational};
pub use oracle::{truncated_z0, unit_torus_integral, IntegralEstimate, PadicCoset};
pub use residue::{
    check_khovanskii_nondegeneracy, check_weak_nondegeneracy, count_n_delta, is_face_nondegenerate, is_prime,
    singular_torus_point, singular_torus_points, torus_zero_count, FaceReport, FpPoly, NondegeneracyReport,
};
pub use zetafun::{
    assemble, assemble_with, candidate_poles, convergence_band, s_term, unit_integral_term, ConeContribution,
    ConvergenceBand, DenomFactor, Domain, FanVariant, PoleData, QTLaurent, RationalFunction, STerm, ZetaFunction,
    ZetaTerm,
};

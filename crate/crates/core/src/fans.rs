//! Cones in the positive quadrant subordinated to a Newton polytope.
//!
//! The conical partition consists of the axis rays, every inward normal lying
//! strictly inside the open quadrant, and the open sectors between consecutive
//! rays. All membership and coefficient tests are exact 2×2 integer solves.
//!
//! Strictly two-dimensional.

use std::cmp::Ordering;

use serde::ser::SerializeStruct;
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::geometry::{Face, LatticeVector, NewtonPolytope};

/// An open cone strictly spanned by one or two primitive generators.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Cone {
    pub generators: Vec<LatticeVector>,
    pub label: String,
    /// The constant value of `F(·)` on the cone.
    pub face: Face,
}

fn label_for(gens: &[LatticeVector]) -> String {
    gens.iter().map(|g| g.to_string()).collect::<Vec<_>>().join(",")
}

impl Cone {
    pub fn ray(a: LatticeVector, face: Face) -> Cone {
        debug_assert!(a.is_primitive());
        Cone {
            generators: vec![a],
            label: label_for(&[a]),
            face,
        }
    }

    pub fn sector(a1: LatticeVector, a2: LatticeVector, face: Face) -> Cone {
        debug_assert!(a1.is_primitive() && a2.is_primitive());
        assert_ne!(a1.det(&a2), 0, "sector generators must be independent");
        Cone {
            generators: vec![a1, a2],
            label: label_for(&[a1, a2]),
            face,
        }
    }

    pub fn is_ray(&self) -> bool {
        self.generators.len() == 1
    }

    /// `det(a₁, a₂)`, or 1 for a ray.
    pub fn det(&self) -> i64 {
        match self.generators.as_slice() {
            [a1, a2] => a1.det(a2),
            _ => 1,
        }
    }

    /// A lattice point in the relative interior.
    pub fn interior_sample(&self) -> LatticeVector {
        match self.generators.as_slice() {
            [a] => *a,
            [a1, a2] => a1.add(a2),
            _ => unreachable!(),
        }
    }

    /// Membership in the open cone: positive multiples of the generator for a
    /// ray, strictly positive coordinates in the generator basis for a sector.
    pub fn contains(&self, v: LatticeVector) -> bool {
        match self.generators.as_slice() {
            [a] => a.det(&v) == 0 && (a.a1 as i128 * v.a1 as i128 + a.a2 as i128 * v.a2 as i128) > 0,
            [a1, a2] => {
                let d = a1.det(a2).signum();
                v.det(a2).signum() == d && a1.det(&v).signum() == d
            }
            _ => unreachable!(),
        }
    }

    /// Lattice points `h = Σ λⱼ aⱼ` with `0 ≤ λⱼ < 1`. Exactly `|det|` of them.
    pub fn fundamental_points(&self) -> Vec<LatticeVector> {
        let (a1, a2) = match self.generators.as_slice() {
            [_] => return vec![LatticeVector::ZERO],
            [a1, a2] => (*a1, *a2),
            _ => unreachable!(),
        };
        let d = a1.det(&a2);
        let (sign, abs_d) = (d.signum(), d.abs());
        let corners = [LatticeVector::ZERO, a1, a2, a1.add(&a2)];
        let (lo1, hi1) = (
            corners.iter().map(|c| c.a1).min().unwrap(),
            corners.iter().map(|c| c.a1).max().unwrap(),
        );
        let (lo2, hi2) = (
            corners.iter().map(|c| c.a2).min().unwrap(),
            corners.iter().map(|c| c.a2).max().unwrap(),
        );
        let mut out = Vec::with_capacity(abs_d as usize);
        for x in lo1..=hi1 {
            for y in lo2..=hi2 {
                let h = LatticeVector::new(x, y);
                let l1 = sign * h.det(&a2);
                let l2 = sign * a1.det(&h);
                if (0..abs_d).contains(&l1) && (0..abs_d).contains(&l2) {
                    out.push(h);
                }
            }
        }
        out.sort_by_key(|h| (h.norm(), h.a1, h.a2));
        out
    }
}

impl Serialize for Cone {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let mut s = serializer.serialize_struct("Cone", 3)?;
        s.serialize_field("gens", &self.generators)?;
        s.serialize_field("face", &self.face)?;
        s.serialize_field("fundamental_points", &self.fundamental_points())?;
        s.end()
    }
}

/// Counterclockwise angular order for vectors in the closed positive quadrant.
fn by_angle(u: &LatticeVector, w: &LatticeVector) -> Ordering {
    0.cmp(&u.det(w))
}

/// Lists rays ccw (e₁ first) and derives the cones in table order: rays from
/// e₂ down to e₁, then the sectors in the same direction.
fn cones_from_rays(polytope: &NewtonPolytope, rays: &[LatticeVector]) -> Vec<Cone> {
    let mut cones: Vec<Cone> = rays
        .iter()
        .rev()
        .map(|&a| Cone::ray(a, polytope.first_meet_locus(a)))
        .collect();
    for k in (1..rays.len()).rev() {
        let (hi, lo) = (rays[k], rays[k - 1]);
        cones.push(Cone::sector(hi, lo, polytope.first_meet_locus(hi.add(&lo))));
    }
    cones
}

/// The partition of `ℝ₊² ∖ {0}` into open cones on which `F(·)` is constant.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ConicalPartition {
    /// e₁, the inward normals in the open quadrant by angle, e₂.
    pub rays: Vec<LatticeVector>,
    pub cones: Vec<Cone>,
}

pub fn conical_partition(polytope: &NewtonPolytope) -> ConicalPartition {
    let mut interior: Vec<LatticeVector> = polytope
        .inward_normals()
        .iter()
        .copied()
        .filter(LatticeVector::in_open_quadrant)
        .collect();
    interior.sort_by(by_angle);
    interior.dedup();
    let mut rays = vec![LatticeVector::E1];
    rays.extend(interior);
    rays.push(LatticeVector::E2);
    let cones = cones_from_rays(polytope, &rays);
    ConicalPartition { rays, cones }
}

impl ConicalPartition {
    pub fn generators(&self) -> &[LatticeVector] {
        &self.rays
    }

    /// The unique cone containing a nonzero vector of the closed quadrant.
    pub fn cone_containing(&self, v: LatticeVector) -> Option<&Cone> {
        self.cones.iter().find(|c| c.contains(v))
    }
}

/// `Δ_τ`: the open cone of `a ∈ ℝ²` with `F(a) = τ`, for `τ` a vertex or edge.
pub fn cone_of_face(polytope: &NewtonPolytope, face: &Face) -> Result<Cone> {
    if !polytope.has_face(face) {
        return Err(Error::FaceMismatch);
    }
    match face.dim {
        1 => Ok(Cone::ray(
            face.inward_normal.expect("edges carry normals"),
            face.clone(),
        )),
        0 => {
            let k = polytope
                .vertices()
                .iter()
                .position(|v| *v == face.vertices[0])
                .expect("vertex of polytope");
            let (incoming, outgoing) = polytope.vertex_normals(k);
            Ok(Cone::sector(incoming, outgoing, face.clone()))
        }
        _ => Err(Error::WholePolytopeCone),
    }
}

/// A fan in `ℝ₊²` with every 2-dimensional cone unimodular.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SimpleFan {
    pub rays: Vec<LatticeVector>,
    pub cones: Vec<Cone>,
}

/// Interior parallelepiped point with the smallest coefficient on the second
/// generator. It is primitive and splits the sector into two cones of strictly
/// smaller multiplicity.
fn hirzebruch_jung_point(cone: &Cone) -> LatticeVector {
    let (a1, a2) = (cone.generators[0], cone.generators[1]);
    let sign = a1.det(&a2).signum();
    cone.fundamental_points()
        .into_iter()
        .filter(|h| !h.is_zero())
        .min_by_key(|h| sign * a1.det(h))
        .expect("non-unimodular sector has interior points")
}

fn refine(cone: Cone, new_rays: &mut Vec<LatticeVector>) -> Vec<Cone> {
    if cone.is_ray() || cone.det().abs() == 1 {
        return vec![cone];
    }
    let h = hirzebruch_jung_point(&cone);
    new_rays.push(h);
    let (a1, a2) = (cone.generators[0], cone.generators[1]);
    let mut out = refine(Cone::sector(a1, h, cone.face.clone()), new_rays);
    out.extend(refine(Cone::sector(h, a2, cone.face), new_rays));
    out
}

fn assemble_fan(rays: Vec<LatticeVector>, sectors: Vec<Cone>, ray_faces: &[(LatticeVector, Face)]) -> SimpleFan {
    let mut cones: Vec<Cone> = rays
        .iter()
        .rev()
        .map(|a| {
            let face = ray_faces
                .iter()
                .find(|(r, _)| r == a)
                .map(|(_, f)| f.clone())
                .expect("face for every ray");
            Cone::ray(*a, face)
        })
        .collect();
    let mut sectors = sectors;
    sectors.sort_by(|x, y| by_angle(&x.generators[0], &y.generators[0]).reverse());
    cones.extend(sectors);
    SimpleFan { rays, cones }
}

/// Refines every sector of `part` into unimodular cones by Hirzebruch–Jung
/// insertion. Rays of `part` are kept.
pub fn make_simple(part: &ConicalPartition) -> SimpleFan {
    let mut ray_faces: Vec<(LatticeVector, Face)> = part
        .cones
        .iter()
        .filter(|c| c.is_ray())
        .map(|c| (c.generators[0], c.face.clone()))
        .collect();
    let mut sectors = Vec::new();
    for cone in part.cones.iter().filter(|c| !c.is_ray()) {
        let mut new_rays = Vec::new();
        sectors.extend(refine(cone.clone(), &mut new_rays));
        ray_faces.extend(new_rays.into_iter().map(|h| (h, cone.face.clone())));
    }
    let mut rays: Vec<LatticeVector> = ray_faces.iter().map(|(r, _)| *r).collect();
    rays.sort_by(by_angle);
    assemble_fan(rays, sectors, &ray_faces)
}

/// Like [`make_simple`], but a trivial result (rays e₁, e₂ only) is split by
/// the ray `(1, 1)`.
pub fn make_simple_nontrivial(part: &ConicalPartition) -> SimpleFan {
    let fan = make_simple(part);
    if fan.rays != [LatticeVector::E1, LatticeVector::E2] {
        return fan;
    }
    let sector = fan.cones.iter().find(|c| !c.is_ray()).expect("one sector");
    let diag = LatticeVector::new(1, 1);
    let face = sector.face.clone();
    let mut ray_faces: Vec<(LatticeVector, Face)> = fan
        .cones
        .iter()
        .filter(|c| c.is_ray())
        .map(|c| (c.generators[0], c.face.clone()))
        .collect();
    ray_faces.push((diag, face.clone()));
    let sectors = vec![
        Cone::sector(LatticeVector::E2, diag, face.clone()),
        Cone::sector(diag, LatticeVector::E1, face),
    ];
    assemble_fan(vec![LatticeVector::E1, diag, LatticeVector::E2], sectors, &ray_faces)
}

impl SimpleFan {
    pub fn generators(&self) -> &[LatticeVector] {
        &self.rays
    }

    pub fn is_trivial(&self) -> bool {
        self.rays == [LatticeVector::E1, LatticeVector::E2]
    }
}

/// The three-way split of a fan's rays: inward normals of `Γ∞`, axis vectors
/// that are not normals, and the remaining subdivision rays.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct GeneratorClasses {
    pub normals: Vec<LatticeVector>,
    pub axes: Vec<LatticeVector>,
    pub extras: Vec<LatticeVector>,
}

/// Splits rays into normals / axes / extras. A ray that is both a normal and
/// an axis vector counts as a normal.
pub fn classify_generators(rays: &[LatticeVector], polytope: &NewtonPolytope) -> GeneratorClasses {
    let mut out = GeneratorClasses::default();
    for &r in rays {
        if polytope.inward_normals().contains(&r) {
            out.normals.push(r);
        } else if r == LatticeVector::E1 || r == LatticeVector::E2 {
            out.axes.push(r);
        } else {
            out.extras.push(r);
        }
    }
    out
}

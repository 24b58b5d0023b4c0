//! Newton polytopes at infinity in the plane: exact integer convex hulls,
//! faces, primitive inward normals, `d(a)` and first meet loci.
//!
//! Everything is computed with integers. The hull is kept counterclockwise, so
//! the inward side of a directed edge is always its left-hand side.

use std::fmt;

use num_integer::Integer;
use serde::ser::SerializeStruct;
use serde::{Deserialize, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::laurent::{LatticePoint, LaurentPolynomial};

/// An integer vector in the dual plane, e.g. a cone generator or an inward normal.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(from = "[i64; 2]", into = "[i64; 2]")]
pub struct LatticeVector {
    pub a1: i64,
    pub a2: i64,
}

impl LatticeVector {
    pub const ZERO: LatticeVector = LatticeVector { a1: 0, a2: 0 };
    pub const E1: LatticeVector = LatticeVector { a1: 1, a2: 0 };
    pub const E2: LatticeVector = LatticeVector { a1: 0, a2: 1 };

    pub const fn new(a1: i64, a2: i64) -> Self {
        LatticeVector { a1, a2 }
    }

    pub fn is_zero(&self) -> bool {
        self.a1 == 0 && self.a2 == 0
    }

    pub fn is_primitive(&self) -> bool {
        self.a1.gcd(&self.a2) == 1
    }

    /// Divides out the gcd of the coordinates, keeping the direction.
    pub fn primitive(&self) -> Result<LatticeVector> {
        if self.is_zero() {
            return Err(Error::ZeroVector);
        }
        let g = self.a1.gcd(&self.a2);
        Ok(LatticeVector::new(self.a1 / g, self.a2 / g))
    }

    /// `‖a‖ = a₁ + a₂`.
    pub fn norm(&self) -> i64 {
        self.a1 + self.a2
    }

    /// `⟨a, p⟩`.
    pub fn dot(&self, p: LatticePoint) -> i64 {
        let v = self.a1 as i128 * p.i as i128 + self.a2 as i128 * p.j as i128;
        i64::try_from(v).expect("lattice inner product exceeds the 64-bit range")
    }

    /// Determinant of the 2×2 matrix with columns `self`, `other`.
    pub fn det(&self, other: &LatticeVector) -> i64 {
        let v = self.a1 as i128 * other.a2 as i128 - self.a2 as i128 * other.a1 as i128;
        i64::try_from(v).expect("determinant exceeds the 64-bit range")
    }

    pub fn add(&self, other: &LatticeVector) -> LatticeVector {
        LatticeVector::new(self.a1 + other.a1, self.a2 + other.a2)
    }

    /// Inside the closed positive quadrant and nonzero.
    pub fn in_positive_quadrant(&self) -> bool {
        self.a1 >= 0 && self.a2 >= 0 && !self.is_zero()
    }

    /// Strictly inside the open positive quadrant.
    pub fn in_open_quadrant(&self) -> bool {
        self.a1 > 0 && self.a2 > 0
    }
}

impl From<[i64; 2]> for LatticeVector {
    fn from([a1, a2]: [i64; 2]) -> Self {
        LatticeVector { a1, a2 }
    }
}

impl From<LatticeVector> for [i64; 2] {
    fn from(v: LatticeVector) -> Self {
        [v.a1, v.a2]
    }
}

impl From<(i64, i64)> for LatticeVector {
    fn from((a1, a2): (i64, i64)) -> Self {
        LatticeVector { a1, a2 }
    }
}

impl fmt::Display for LatticeVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.a1, self.a2)
    }
}

fn cross(o: LatticePoint, a: LatticePoint, b: LatticePoint) -> i128 {
    (a.i as i128 - o.i as i128) * (b.j as i128 - o.j as i128)
        - (a.j as i128 - o.j as i128) * (b.i as i128 - o.i as i128)
}

/// A face of a Newton polytope: a vertex, an edge, or the polytope itself.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Face {
    pub dim: u8,
    pub vertices: Vec<LatticePoint>,
    #[serde(rename = "normal")]
    pub inward_normal: Option<LatticeVector>,
}

impl Face {
    pub fn vertex(v: LatticePoint) -> Face {
        Face {
            dim: 0,
            vertices: vec![v],
            inward_normal: None,
        }
    }

    /// Whether the lattice point lies on this face (for `dim = 2`, inside the polygon).
    pub fn contains(&self, p: LatticePoint) -> bool {
        match self.dim {
            0 => self.vertices[0] == p,
            1 => {
                let (v, w) = (self.vertices[0], self.vertices[1]);
                if cross(v, w, p) != 0 {
                    return false;
                }
                let along = (p.i as i128 - v.i as i128) * (w.i as i128 - v.i as i128)
                    + (p.j as i128 - v.j as i128) * (w.j as i128 - v.j as i128);
                let len2 = (w.i as i128 - v.i as i128).pow(2) + (w.j as i128 - v.j as i128).pow(2);
                (0..=len2).contains(&along)
            }
            _ => {
                let n = self.vertices.len();
                (0..n).all(|k| cross(self.vertices[k], self.vertices[(k + 1) % n], p) >= 0)
            }
        }
    }
}

impl fmt::Display for Face {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.dim {
            0 => write!(f, "{{{}}}", self.vertices[0]),
            1 => write!(f, "[{},{}]", self.vertices[0], self.vertices[1]),
            _ => f.write_str("full polytope"),
        }
    }
}

/// The convex hull of a polynomial's support, of dimension 2.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NewtonPolytope {
    vertices: Vec<LatticePoint>,
    edges: Vec<Face>,
    normals: Vec<LatticeVector>,
}

/// Monotone chain hull; collinear boundary points are dropped. Counterclockwise,
/// starting from the lexicographically smallest point.
fn convex_hull(points: &[LatticePoint]) -> Vec<LatticePoint> {
    let mut pts = points.to_vec();
    pts.sort();
    pts.dedup();
    if pts.len() < 3 {
        return pts;
    }
    let mut lower: Vec<LatticePoint> = Vec::new();
    for &p in &pts {
        while lower.len() >= 2 && cross(lower[lower.len() - 2], lower[lower.len() - 1], p) <= 0 {
            lower.pop();
        }
        lower.push(p);
    }
    let mut upper: Vec<LatticePoint> = Vec::new();
    for &p in pts.iter().rev() {
        while upper.len() >= 2 && cross(upper[upper.len() - 2], upper[upper.len() - 1], p) <= 0 {
            upper.pop();
        }
        upper.push(p);
    }
    lower.pop();
    upper.pop();
    lower.extend(upper);
    lower
}

impl NewtonPolytope {
    /// `Γ∞(f)`. Fails for the zero polynomial and for hulls of dimension < 2.
    pub fn new(f: &LaurentPolynomial) -> Result<Self> {
        if f.is_zero() {
            return Err(Error::ZeroPolynomial);
        }
        Self::from_points(&f.support())
    }

    pub fn from_points(points: &[LatticePoint]) -> Result<Self> {
        if points.is_empty() {
            return Err(Error::ZeroPolynomial);
        }
        let vertices = convex_hull(points);
        if vertices.len() < 3 {
            return Err(Error::LowDimension {
                dim: vertices.len() - 1,
            });
        }
        let n = vertices.len();
        let mut edges = Vec::with_capacity(n);
        let mut normals = Vec::with_capacity(n);
        for k in 0..n {
            let (v, w) = (vertices[k], vertices[(k + 1) % n]);
            let dir = LatticeVector::new(w.i - v.i, w.j - v.j).primitive()?;
            let normal = LatticeVector::new(-dir.a2, dir.a1);
            edges.push(Face {
                dim: 1,
                vertices: vec![v, w],
                inward_normal: Some(normal),
            });
            normals.push(normal);
        }
        Ok(NewtonPolytope {
            vertices,
            edges,
            normals,
        })
    }

    /// Vertices in counterclockwise order.
    pub fn vertices(&self) -> &[LatticePoint] {
        &self.vertices
    }

    /// Edge `k` joins vertex `k` to vertex `k + 1` (cyclically).
    pub fn edges(&self) -> &[Face] {
        &self.edges
    }

    /// The primitive inward normals, one per edge, in edge order.
    pub fn inward_normals(&self) -> &[LatticeVector] {
        &self.normals
    }

    pub fn full_face(&self) -> Face {
        Face {
            dim: 2,
            vertices: self.vertices.clone(),
            inward_normal: None,
        }
    }

    /// All faces: every vertex, every edge, then the polytope itself.
    pub fn faces(&self) -> Vec<Face> {
        let mut out: Vec<Face> = self.vertices.iter().map(|&v| Face::vertex(v)).collect();
        out.extend(self.edges.iter().cloned());
        out.push(self.full_face());
        out
    }

    pub fn has_face(&self, face: &Face) -> bool {
        match face.dim {
            0 => face.vertices.len() == 1 && self.vertices.contains(&face.vertices[0]),
            1 => self.edges.contains(face),
            2 => face.vertices == self.vertices,
            _ => false,
        }
    }

    /// `d(a) = min ⟨a, v⟩` over the vertices. Accepts any integer vector.
    pub fn d_value(&self, a: LatticeVector) -> i64 {
        self.vertices
            .iter()
            .map(|&v| a.dot(v))
            .min()
            .expect("polytope has vertices")
    }

    /// `F(a)`: the face on which `⟨a, ·⟩` attains `d(a)`. `F(0)` is the polytope.
    pub fn first_meet_locus(&self, a: LatticeVector) -> Face {
        if a.is_zero() {
            return self.full_face();
        }
        let d = self.d_value(a);
        let hits: Vec<usize> = (0..self.vertices.len())
            .filter(|&k| a.dot(self.vertices[k]) == d)
            .collect();
        match hits.as_slice() {
            [k] => Face::vertex(self.vertices[*k]),
            [k, l] => {
                let n = self.vertices.len();
                // consecutive in cyclic order: either (k, k+1) or (0, n-1)
                let start = if (k + 1) % n == *l { *k } else { *l };
                self.edges[start].clone()
            }
            _ => unreachable!("vertices in strictly convex position"),
        }
    }

    /// Inward normals of the two edges meeting at vertex `k`: (incoming, outgoing).
    pub fn vertex_normals(&self, k: usize) -> (LatticeVector, LatticeVector) {
        let n = self.vertices.len();
        (self.normals[(k + n - 1) % n], self.normals[k])
    }
}

impl Serialize for NewtonPolytope {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        struct Edge {
            v: LatticePoint,
            w: LatticePoint,
            normal: LatticeVector,
        }
        let edges: Vec<Edge> = self
            .edges
            .iter()
            .map(|e| Edge {
                v: e.vertices[0],
                w: e.vertices[1],
                normal: e.inward_normal.expect("edge normal"),
            })
            .collect();
        let mut s = serializer.serialize_struct("NewtonPolytope", 2)?;
        s.serialize_field("vertices", &self.vertices)?;
        s.serialize_field("edges", &edges)?;
        s.end()
    }
}

use std::collections::BTreeSet;
use std::fmt;

use num_traits::{Signed, Zero};

use super::dd::{canonical_basis, h_to_v, nullspace, project_out};
use crate::error::{Error, Result};
use crate::lattice::{LatticeMap, LatticeVector};

/// A rational polyhedral cone kept in canonical double description.
///
/// `lineality` and `equations` are RREF bases made primitive. `rays` are the
/// extreme rays projected onto the orthogonal complement of the lineality space,
/// `facets` are the facet normals projected onto the linear span. Both lists are
/// primitive and sorted, so structural equality is equality of sets.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Cone {
    dim: usize,
    lineality: Vec<LatticeVector>,
    rays: Vec<LatticeVector>,
    equations: Vec<LatticeVector>,
    facets: Vec<LatticeVector>,
}

fn check_rank(dim: usize, vs: &[LatticeVector], context: &'static str) -> Result<()> {
    match vs.iter().find(|v| v.rank() != dim) {
        Some(v) => Err(Error::RankMismatch {
            context,
            expected: dim,
            found: v.rank(),
        }),
        None => Ok(()),
    }
}

fn normalize_generators(vs: Vec<LatticeVector>, modulo: &[LatticeVector]) -> Vec<LatticeVector> {
    let set: BTreeSet<LatticeVector> = vs
        .into_iter()
        .map(|v| project_out(&v, modulo))
        .filter(|v| !v.is_zero())
        .map(|v| v.primitive_direction())
        .collect();
    set.into_iter().collect()
}

impl Cone {
    fn assemble(dim: usize, lineality: Vec<LatticeVector>, rays: Vec<LatticeVector>) -> Self {
        let dual = h_to_v(dim, &rays, &lineality);
        let lineality = canonical_basis(&lineality, dim);
        let equations = canonical_basis(&dual.lineality, dim);
        let rays = normalize_generators(rays, &lineality);
        let facets = normalize_generators(dual.rays, &equations);
        Cone {
            dim,
            lineality,
            rays,
            equations,
            facets,
        }
    }

    /// `{x : a·x ≥ 0 for a in inequalities, e·x = 0 for e in equations}`.
    pub fn from_inequalities(
        dim: usize,
        inequalities: &[LatticeVector],
        equations: &[LatticeVector],
    ) -> Result<Self> {
        check_rank(dim, inequalities, "cone inequality")?;
        check_rank(dim, equations, "cone equation")?;
        let g = h_to_v(dim, inequalities, equations);
        Ok(Self::assemble(dim, g.lineality, g.rays))
    }

    /// The cone generated by `rays` and the linear span of `lineality`.
    pub fn from_generators(
        dim: usize,
        rays: &[LatticeVector],
        lineality: &[LatticeVector],
    ) -> Result<Self> {
        check_rank(dim, rays, "cone generator")?;
        check_rank(dim, lineality, "cone lineality generator")?;
        let dual = h_to_v(dim, rays, lineality);
        let g = h_to_v(dim, &dual.rays, &dual.lineality);
        Ok(Self::assemble(dim, g.lineality, g.rays))
    }

    pub fn from_rays(dim: usize, rays: &[LatticeVector]) -> Result<Self> {
        Self::from_generators(dim, rays, &[])
    }

    pub fn zero(dim: usize) -> Self {
        Self::assemble(dim, Vec::new(), Vec::new())
    }

    pub fn full(dim: usize) -> Self {
        Self::assemble(
            dim,
            (0..dim).map(|i| LatticeVector::unit(dim, i)).collect(),
            Vec::new(),
        )
    }

    /// Readable identifier from the canonical rays, e.g. `<(1,0),(1,1)>`; lineality is not shown.
    pub fn id(&self) -> String {
        let rays: Vec<String> = self
            .rays
            .iter()
            .map(|r| {
                format!(
                    "({})",
                    r.coords()
                        .iter()
                        .map(|c| c.to_string())
                        .collect::<Vec<_>>()
                        .join(",")
                )
            })
            .collect();
        if rays.is_empty() {
            "0".to_string()
        } else {
            format!("<{}>", rays.join(","))
        }
    }

    pub fn ambient_rank(&self) -> usize {
        self.dim
    }

    pub fn rays(&self) -> &[LatticeVector] {
        &self.rays
    }

    pub fn lineality(&self) -> &[LatticeVector] {
        &self.lineality
    }

    pub fn facets(&self) -> &[LatticeVector] {
        &self.facets
    }

    pub fn equations(&self) -> &[LatticeVector] {
        &self.equations
    }

    /// Rays followed by both orientations of each lineality generator.
    pub fn generators(&self) -> Vec<LatticeVector> {
        let mut g = self.rays.clone();
        for l in &self.lineality {
            g.push(l.clone());
            g.push(l.neg());
        }
        g
    }

    pub fn dimension(&self) -> usize {
        self.dim - self.equations.len()
    }

    pub fn is_pointed(&self) -> bool {
        self.lineality.is_empty()
    }

    pub fn is_full_dimensional(&self) -> bool {
        self.equations.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.rays.is_empty() && self.lineality.is_empty()
    }

    pub fn contains(&self, v: &LatticeVector) -> bool {
        self.equations.iter().all(|e| e.dot(v).is_zero())
            && self.facets.iter().all(|f| !f.dot(v).is_negative())
    }

    pub fn contains_relative_interior(&self, v: &LatticeVector) -> bool {
        self.equations.iter().all(|e| e.dot(v).is_zero())
            && self.facets.iter().all(|f| f.dot(v).is_positive())
    }

    pub fn contains_cone(&self, other: &Cone) -> bool {
        other.generators().iter().all(|g| self.contains(g))
    }

    /// Sum of the rays: a point in the relative interior.
    pub fn relative_interior_point(&self) -> LatticeVector {
        self.rays
            .iter()
            .fold(LatticeVector::zeros(self.dim), |acc, r| acc.add(r))
    }

    /// The H-description used for intersections and substitutions.
    pub fn inequalities(&self) -> (Vec<LatticeVector>, Vec<LatticeVector>) {
        (self.facets.clone(), self.equations.clone())
    }

    pub fn intersect(&self, other: &Cone) -> Result<Cone> {
        if self.dim != other.dim {
            return Err(Error::RankMismatch {
                context: "cone intersection",
                expected: self.dim,
                found: other.dim,
            });
        }
        let mut ineqs = self.facets.clone();
        ineqs.extend(other.facets.iter().cloned());
        let mut eqs = self.equations.clone();
        eqs.extend(other.equations.iter().cloned());
        Cone::from_inequalities(self.dim, &ineqs, &eqs)
    }

    /// The dual cone `{u : u·x ≥ 0 for x in self}`.
    pub fn dual(&self) -> Cone {
        Cone {
            dim: self.dim,
            lineality: self.equations.clone(),
            rays: self.facets.clone(),
            equations: self.lineality.clone(),
            facets: self.rays.clone(),
        }
    }

    /// The smallest face containing every vector of `points` (all assumed in the cone).
    pub fn face_containing(&self, points: &[LatticeVector]) -> Cone {
        let mut eqs = self.equations.clone();
        let mut ineqs = Vec::new();
        for f in &self.facets {
            if points.iter().all(|p| f.dot(p).is_zero()) {
                eqs.push(f.clone());
            } else {
                ineqs.push(f.clone());
            }
        }
        Cone::from_inequalities(self.dim, &ineqs, &eqs).expect("ranks agree")
    }

    pub fn is_face_of(&self, other: &Cone) -> bool {
        self.dim == other.dim
            && other.contains_cone(self)
            && other.face_containing(&self.generators()) == *self
    }

    /// All faces, including the cone itself and its minimal face.
    pub fn faces(&self) -> BTreeSet<Cone> {
        let mut out = BTreeSet::new();
        let mut todo = vec![self.clone()];
        while let Some(c) = todo.pop() {
            if out.contains(&c) {
                continue;
            }
            for f in c.facets.iter() {
                let mut eqs = c.equations.clone();
                eqs.push(f.clone());
                let face = Cone::from_inequalities(c.dim, &c.facets, &eqs).expect("ranks agree");
                if !out.contains(&face) {
                    todo.push(face);
                }
            }
            out.insert(c);
        }
        out
    }

    /// The facets of the cone as cones.
    pub fn facet_cones(&self) -> Vec<Cone> {
        self.facets
            .iter()
            .map(|f| {
                let mut eqs = self.equations.clone();
                eqs.push(f.clone());
                Cone::from_inequalities(self.dim, &self.facets, &eqs).expect("ranks agree")
            })
            .collect()
    }

    pub fn image(&self, map: &LatticeMap) -> Result<Cone> {
        if map.cols() != self.dim {
            return Err(Error::RankMismatch {
                context: "cone image",
                expected: map.cols(),
                found: self.dim,
            });
        }
        let rays: Vec<LatticeVector> = self.rays.iter().map(|r| map.apply(r)).collect();
        let lin: Vec<LatticeVector> = self.lineality.iter().map(|l| map.apply(l)).collect();
        Cone::from_generators(map.rows(), &rays, &lin)
    }

    /// `{x : map(x) ∈ self}`.
    pub fn preimage(&self, map: &LatticeMap) -> Result<Cone> {
        if map.rows() != self.dim {
            return Err(Error::RankMismatch {
                context: "cone preimage",
                expected: map.rows(),
                found: self.dim,
            });
        }
        let t = map.transpose();
        let ineqs: Vec<LatticeVector> = self.facets.iter().map(|f| t.apply(f)).collect();
        let eqs: Vec<LatticeVector> = self.equations.iter().map(|e| t.apply(e)).collect();
        Cone::from_inequalities(map.cols(), &ineqs, &eqs)
    }

    /// Whether the relative interiors of the two cones meet.
    pub fn relative_interiors_meet(&self, other: &Cone) -> bool {
        let both = self.intersect(other).expect("ranks agree");
        let p = both.relative_interior_point();
        self.contains_relative_interior(&p) && other.contains_relative_interior(&p)
    }

    /// Linear functionals vanishing on the cone; empty for full-dimensional cones.
    pub fn orthogonal_complement(&self) -> Vec<LatticeVector> {
        nullspace(&self.generators(), self.dim)
    }
}

impl fmt::Display for Cone {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "{{0}}");
        }
        write!(f, "cone(")?;
        let mut first = true;
        for r in &self.rays {
            if !first {
                write!(f, ", ")?;
            }
            first = false;
            write!(f, "{r}")?;
        }
        for l in &self.lineality {
            if !first {
                write!(f, ", ")?;
            }
            first = false;
            write!(f, "±{l}")?;
        }
        write!(f, ")")
    }
}

use std::fmt;

use num_traits::{One, Signed, Zero};

use super::cone::Cone;
use crate::error::{Error, Result};
use crate::lattice::{ExactScalar, LatticeVector, SplitSequence};

/// A rational polyhedron in `Q^dim`, or the empty set.
///
/// A nonempty polyhedron `P` is stored as its homogenization, the closure of
/// `{(t x, t) : x ∈ P, t > 0}` in `Q^{dim+1}`. Canonical cones make equality exact.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Polyhedron {
    dim: usize,
    cone: Option<Cone>,
}

/// Minimum of a linear functional on a polyhedron.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum MinValue {
    NegInfinity,
    Finite(ExactScalar),
}

impl fmt::Display for MinValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MinValue::NegInfinity => write!(f, "-∞"),
            MinValue::Finite(v) => write!(f, "{v}"),
        }
    }
}

fn lift(v: &LatticeVector, t: ExactScalar) -> LatticeVector {
    v.concat(&LatticeVector::new(vec![t]))
}

impl Polyhedron {
    pub fn empty(dim: usize) -> Self {
        Polyhedron { dim, cone: None }
    }

    fn from_homogenized(dim: usize, cone: Cone) -> Self {
        if cone.rays().iter().any(|r| r[dim].is_positive()) {
            Polyhedron {
                dim,
                cone: Some(cone),
            }
        } else {
            Polyhedron::empty(dim)
        }
    }

    /// `conv(vertices) + cone(tail_rays) + span(tail_lineality)`; no vertices means empty.
    pub fn from_generators(
        dim: usize,
        vertices: &[LatticeVector],
        tail_rays: &[LatticeVector],
        tail_lineality: &[LatticeVector],
    ) -> Result<Self> {
        for v in vertices.iter().chain(tail_rays).chain(tail_lineality) {
            if v.rank() != dim {
                return Err(Error::RankMismatch {
                    context: "polyhedron generator",
                    expected: dim,
                    found: v.rank(),
                });
            }
        }
        if vertices.is_empty() {
            return Ok(Polyhedron::empty(dim));
        }
        let mut rays: Vec<LatticeVector> = vertices
            .iter()
            .map(|v| lift(v, ExactScalar::one()))
            .collect();
        rays.extend(tail_rays.iter().map(|r| lift(r, ExactScalar::zero())));
        let lin: Vec<LatticeVector> = tail_lineality
            .iter()
            .map(|l| lift(l, ExactScalar::zero()))
            .collect();
        Ok(Self::from_homogenized(
            dim,
            Cone::from_generators(dim + 1, &rays, &lin)?,
        ))
    }

    pub fn point(v: &LatticeVector) -> Self {
        Self::from_generators(v.rank(), std::slice::from_ref(v), &[], &[]).expect("consistent rank")
    }

    /// `v + tail`
    pub fn shifted_cone(v: &LatticeVector, tail: &Cone) -> Result<Self> {
        Self::from_generators(
            tail.ambient_rank(),
            std::slice::from_ref(v),
            tail.rays(),
            tail.lineality(),
        )
    }

    pub fn from_cone(tail: &Cone) -> Self {
        Self::shifted_cone(&LatticeVector::zeros(tail.ambient_rank()), tail)
            .expect("consistent rank")
    }

    /// `{x : a·x ≥ b for (a, b) in inequalities, e·x = f for (e, f) in equations}`.
    pub fn from_inequalities(
        dim: usize,
        inequalities: &[(LatticeVector, ExactScalar)],
        equations: &[(LatticeVector, ExactScalar)],
    ) -> Result<Self> {
        let mut ineqs: Vec<LatticeVector> = inequalities
            .iter()
            .map(|(a, b)| lift(a, -b.clone()))
            .collect();
        ineqs.push(LatticeVector::unit(dim + 1, dim));
        let eqs: Vec<LatticeVector> = equations.iter().map(|(e, f)| lift(e, -f.clone())).collect();
        for v in ineqs.iter().chain(&eqs) {
            if v.rank() != dim + 1 {
                return Err(Error::RankMismatch {
                    context: "polyhedron inequality",
                    expected: dim + 1,
                    found: v.rank() - 1,
                });
            }
        }
        Ok(Self::from_homogenized(
            dim,
            Cone::from_inequalities(dim + 1, &ineqs, &eqs)?,
        ))
    }

    /// A one-dimensional interval; `None` marks an infinite end.
    pub fn interval(lo: Option<ExactScalar>, hi: Option<ExactScalar>) -> Self {
        let x = LatticeVector::unit(1, 0);
        let mut ineqs = Vec::new();
        if let Some(lo) = lo {
            ineqs.push((x.clone(), lo));
        }
        if let Some(hi) = hi {
            ineqs.push((x.neg(), -hi));
        }
        Self::from_inequalities(1, &ineqs, &[]).expect("rank one")
    }

    pub fn ambient_rank(&self) -> usize {
        self.dim
    }

    pub fn is_empty(&self) -> bool {
        self.cone.is_none()
    }

    pub fn homogenization(&self) -> Option<&Cone> {
        self.cone.as_ref()
    }

    fn cone_or_err(&self) -> Result<&Cone> {
        self.cone.as_ref().ok_or(Error::EmptyPolyhedron)
    }

    /// Representatives of the minimal faces; the vertices when the tail is pointed.
    pub fn vertices(&self) -> Vec<LatticeVector> {
        let Some(c) = &self.cone else {
            return Vec::new();
        };
        c.rays()
            .iter()
            .filter(|r| r[self.dim].is_positive())
            .map(|r| {
                let t = r[self.dim].clone();
                LatticeVector::new(r.coords()[..self.dim].iter().map(|x| x / &t).collect())
            })
            .collect()
    }

    pub fn tail_cone(&self) -> Result<Cone> {
        let c = self.cone_or_err()?;
        let rays: Vec<LatticeVector> = c
            .rays()
            .iter()
            .filter(|r| r[self.dim].is_zero())
            .map(|r| LatticeVector::new(r.coords()[..self.dim].to_vec()))
            .collect();
        let lin: Vec<LatticeVector> = c
            .lineality()
            .iter()
            .map(|l| LatticeVector::new(l.coords()[..self.dim].to_vec()))
            .collect();
        Cone::from_generators(self.dim, &rays, &lin)
    }

    pub fn is_bounded(&self) -> bool {
        self.tail_cone().map_or(true, |t| t.is_zero())
    }

    /// Minkowski sum; the empty set absorbs.
    pub fn minkowski_sum(&self, other: &Polyhedron) -> Result<Polyhedron> {
        if self.dim != other.dim {
            return Err(Error::RankMismatch {
                context: "minkowski sum",
                expected: self.dim,
                found: other.dim,
            });
        }
        if self.is_empty() || other.is_empty() {
            return Ok(Polyhedron::empty(self.dim));
        }
        let (t1, t2) = (self.tail_cone()?, other.tail_cone()?);
        let mut vertices = Vec::new();
        for a in self.vertices() {
            for b in other.vertices() {
                vertices.push(a.add(&b));
            }
        }
        let mut rays = t1.rays().to_vec();
        rays.extend(t2.rays().iter().cloned());
        let mut lin = t1.lineality().to_vec();
        lin.extend(t2.lineality().iter().cloned());
        Polyhedron::from_generators(self.dim, &vertices, &rays, &lin)
    }

    pub fn translate(&self, v: &LatticeVector) -> Result<Polyhedron> {
        self.minkowski_sum(&Polyhedron::point(v))
    }

    pub fn intersect(&self, other: &Polyhedron) -> Result<Polyhedron> {
        if self.dim != other.dim {
            return Err(Error::RankMismatch {
                context: "polyhedron intersection",
                expected: self.dim,
                found: other.dim,
            });
        }
        match (&self.cone, &other.cone) {
            (Some(a), Some(b)) => Ok(Self::from_homogenized(self.dim, a.intersect(b)?)),
            _ => Ok(Polyhedron::empty(self.dim)),
        }
    }

    pub fn contains(&self, x: &LatticeVector) -> bool {
        self.cone
            .as_ref()
            .is_some_and(|c| c.contains(&lift(x, ExactScalar::one())))
    }

    pub fn contains_polyhedron(&self, other: &Polyhedron) -> bool {
        match (&self.cone, &other.cone) {
            (_, None) => true,
            (None, Some(_)) => false,
            (Some(a), Some(b)) => a.contains_cone(b),
        }
    }

    /// Whether `self` is a face of `p`. The empty set is a face of everything.
    pub fn is_face_of(&self, p: &Polyhedron) -> bool {
        match (&self.cone, &p.cone) {
            (None, _) => true,
            (Some(_), None) => false,
            (Some(f), Some(c)) => f.is_face_of(c),
        }
    }

    /// Nonempty faces of a nonempty polyhedron.
    pub fn faces(&self) -> Vec<Polyhedron> {
        let Some(c) = &self.cone else {
            return Vec::new();
        };
        c.faces()
            .into_iter()
            .filter(|f| f.rays().iter().any(|r| r[self.dim].is_positive()))
            .map(|f| Polyhedron {
                dim: self.dim,
                cone: Some(f),
            })
            .collect()
    }

    pub fn min_eval(&self, u: &LatticeVector) -> Result<MinValue> {
        let c = self.cone_or_err()?;
        if u.rank() != self.dim {
            return Err(Error::RankMismatch {
                context: "evaluation functional",
                expected: self.dim,
                found: u.rank(),
            });
        }
        let lifted = lift(u, ExactScalar::zero());
        if c.lineality().iter().any(|l| !lifted.dot(l).is_zero()) {
            return Ok(MinValue::NegInfinity);
        }
        if c.rays()
            .iter()
            .any(|r| r[self.dim].is_zero() && lifted.dot(r).is_negative())
        {
            return Ok(MinValue::NegInfinity);
        }
        let min = self
            .vertices()
            .iter()
            .map(|v| u.dot(v))
            .min()
            .expect("nonempty polyhedron has a vertex");
        Ok(MinValue::Finite(min))
    }

    /// The face where `u` attains its minimum.
    pub fn min_face(&self, u: &LatticeVector) -> Result<Polyhedron> {
        match self.min_eval(u)? {
            MinValue::NegInfinity => Err(Error::UnboundedEvaluation),
            MinValue::Finite(m) => self.intersect(&Polyhedron::from_inequalities(
                self.dim,
                &[],
                &[(u.clone(), m)],
            )?),
        }
    }

    /// Applies an invertible linear change of coordinates `x ↦ A x`, given by its rows.
    pub fn map_linear(&self, rows: &[LatticeVector]) -> Result<Polyhedron> {
        if self.is_empty() {
            return Ok(Polyhedron::empty(rows.len()));
        }
        let apply = |v: &LatticeVector| LatticeVector::new(rows.iter().map(|r| r.dot(v)).collect());
        let tail = self.tail_cone()?;
        let verts: Vec<_> = self.vertices().iter().map(apply).collect();
        let rays: Vec<_> = tail.rays().iter().map(apply).collect();
        let lin: Vec<_> = tail.lineality().iter().map(apply).collect();
        Polyhedron::from_generators(rows.len(), &verts, &rays, &lin)
    }

    /// Rank-one polyhedra as `(lo, hi)` with `None` at infinite ends.
    pub fn as_interval(&self) -> Option<(Option<ExactScalar>, Option<ExactScalar>)> {
        if self.dim != 1 || self.is_empty() {
            return None;
        }
        let x = LatticeVector::unit(1, 0);
        let lo = match self.min_eval(&x).ok()? {
            MinValue::Finite(v) => Some(v),
            MinValue::NegInfinity => None,
        };
        let hi = match self.min_eval(&x.neg()).ok()? {
            MinValue::Finite(v) => Some(-v),
            MinValue::NegInfinity => None,
        };
        Some((lo, hi))
    }
}

/// `{y ∈ N_Q : s(a) + i(y) ∈ C}`, the fiber of `C` over `a` identified with `N_Q`.
pub fn fiber_slice(c: &Cone, split: &SplitSequence, a: &LatticeVector) -> Result<Polyhedron> {
    if c.ambient_rank() != split.middle_rank() {
        return Err(Error::RankMismatch {
            context: "fiber cone",
            expected: split.middle_rank(),
            found: c.ambient_rank(),
        });
    }
    if a.rank() != split.quotient_rank() {
        return Err(Error::RankMismatch {
            context: "fiber base point",
            expected: split.quotient_rank(),
            found: a.rank(),
        });
    }
    let base = split.section()?.apply(a);
    let it = split.inclusion().transpose();
    let ineqs: Vec<(LatticeVector, ExactScalar)> = c
        .facets()
        .iter()
        .map(|f| (it.apply(f), -f.dot(&base)))
        .collect();
    let eqs: Vec<(LatticeVector, ExactScalar)> = c
        .equations()
        .iter()
        .map(|e| (it.apply(e), -e.dot(&base)))
        .collect();
    Polyhedron::from_inequalities(split.kernel_rank(), &ineqs, &eqs)
}

fn fmt_end(v: &ExactScalar) -> String {
    if v.is_negative() {
        format!("−{}", -v)
    } else {
        v.to_string()
    }
}

impl fmt::Display for Polyhedron {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_empty() {
            return write!(f, "∅");
        }
        if let Some((lo, hi)) = self.as_interval() {
            return match (lo, hi) {
                (Some(a), Some(b)) if a == b => write!(f, "{{{}}}", fmt_end(&a)),
                (Some(a), Some(b)) => write!(f, "[{},{}]", fmt_end(&a), fmt_end(&b)),
                (Some(a), None) => write!(f, "[{},∞)", fmt_end(&a)),
                (None, Some(b)) => write!(f, "(−∞,{}]", fmt_end(&b)),
                (None, None) => write!(f, "(−∞,∞)"),
            };
        }
        let tail = self.tail_cone().map_err(|_| fmt::Error)?;
        write!(f, "conv(")?;
        for (k, v) in self.vertices().iter().enumerate() {
            if k > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{v}")?;
        }
        write!(f, ") + {tail}")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::{frac, int, LatticeMap};

    fn iv(lo: Option<i64>, hi: Option<i64>) -> Polyhedron {
        Polyhedron::interval(lo.map(int), hi.map(int))
    }

    #[test]
    fn tail_cones() {
        assert!(iv(Some(0), Some(1)).tail_cone().unwrap().is_zero());
        assert_eq!(
            iv(Some(1), None).tail_cone().unwrap(),
            Cone::from_rays(1, &[LatticeVector::from_ints(&[1])]).unwrap()
        );
        assert!(Polyhedron::point(&LatticeVector::from_ints(&[3, 4]))
            .tail_cone()
            .unwrap()
            .is_zero());
        assert!(matches!(
            Polyhedron::empty(1).tail_cone(),
            Err(Error::EmptyPolyhedron)
        ));
    }

    #[test]
    fn minkowski() {
        assert_eq!(
            iv(Some(0), Some(1))
                .minkowski_sum(&iv(Some(0), None))
                .unwrap(),
            iv(Some(0), None)
        );
        assert_eq!(
            iv(Some(-1), Some(-1))
                .minkowski_sum(&iv(Some(1), None))
                .unwrap(),
            iv(Some(0), None)
        );
        assert!(Polyhedron::empty(1)
            .minkowski_sum(&iv(Some(0), Some(1)))
            .unwrap()
            .is_empty());
    }

    #[test]
    fn faces() {
        assert!(iv(Some(0), Some(0)).is_face_of(&iv(Some(0), Some(1))));
        assert!(!iv(Some(0), Some(1)).is_face_of(&iv(Some(0), None)));
        assert!(iv(Some(0), Some(0)).is_face_of(&iv(Some(0), None)));
        assert!(Polyhedron::empty(1).is_face_of(&iv(Some(0), None)));
        assert_eq!(iv(Some(0), None).faces().len(), 2);
    }

    #[test]
    fn evaluation() {
        let x = LatticeVector::from_ints(&[1]);
        assert_eq!(
            iv(Some(1), None).min_eval(&x).unwrap(),
            MinValue::Finite(int(1))
        );
        assert_eq!(
            iv(Some(0), Some(1)).min_eval(&x.neg()).unwrap(),
            MinValue::Finite(int(-1))
        );
        assert_eq!(
            iv(Some(1), None).min_eval(&x.neg()).unwrap(),
            MinValue::NegInfinity
        );
        assert_eq!(
            iv(Some(5), None)
                .min_eval(&LatticeVector::zeros(1))
                .unwrap(),
            MinValue::Finite(int(0))
        );
    }

    #[test]
    fn rendering() {
        assert_eq!(iv(None, Some(-1)).to_string(), "(−∞,−1]");
        assert_eq!(
            Polyhedron::interval(Some(frac(2, 3)), Some(int(1))).to_string(),
            "[2/3,1]"
        );
        assert_eq!(Polyhedron::empty(1).to_string(), "∅");
    }

    fn gl2_split() -> SplitSequence {
        SplitSequence::from_projection(
            LatticeMap::from_rows(&[vec![1, -1]], 2).unwrap(),
            LatticeMap::from_rows(&[vec![0, -1]], 2).unwrap(),
        )
        .unwrap()
    }

    #[test]
    fn gl2_fibers() {
        let c = Cone::from_rays(
            2,
            &[
                LatticeVector::from_ints(&[1, 0]),
                LatticeVector::from_ints(&[1, 1]),
            ],
        )
        .unwrap();
        let s = gl2_split();
        assert_eq!(
            fiber_slice(&c, &s, &LatticeVector::from_ints(&[0])).unwrap(),
            iv(None, Some(0))
        );
        assert_eq!(
            fiber_slice(&c, &s, &LatticeVector::from_ints(&[1])).unwrap(),
            iv(None, Some(0))
        );
        assert!(fiber_slice(&c, &s, &LatticeVector::from_ints(&[-1]))
            .unwrap()
            .is_empty());
    }
}

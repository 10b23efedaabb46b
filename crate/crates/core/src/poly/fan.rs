use std::collections::BTreeSet;

use num_traits::{Signed, Zero};

use super::cone::Cone;
use crate::error::{Error, Result};
use crate::lattice::{LatticeMap, LatticeVector};

/// A fan given by its maximal cones, kept sorted and free of redundancy.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Fan {
    dim: usize,
    maximal: Vec<Cone>,
}

impl Fan {
    /// Keeps the inclusion-maximal cones among `cones`; no fan check is made.
    pub fn from_cones(dim: usize, cones: impl IntoIterator<Item = Cone>) -> Result<Self> {
        let set: BTreeSet<Cone> = cones.into_iter().collect();
        if let Some(c) = set.iter().find(|c| c.ambient_rank() != dim) {
            return Err(Error::RankMismatch {
                context: "fan cone",
                expected: dim,
                found: c.ambient_rank(),
            });
        }
        let all: Vec<Cone> = set.into_iter().collect();
        let maximal = all
            .iter()
            .filter(|c| !all.iter().any(|d| d != *c && d.contains_cone(c)))
            .cloned()
            .collect();
        Ok(Fan { dim, maximal })
    }

    /// The fan `{0}`.
    pub fn trivial(dim: usize) -> Self {
        Fan {
            dim,
            maximal: vec![Cone::zero(dim)],
        }
    }

    pub fn ambient_rank(&self) -> usize {
        self.dim
    }

    pub fn maximal_cones(&self) -> &[Cone] {
        &self.maximal
    }

    /// All cones of the fan, faces included.
    pub fn cones(&self) -> BTreeSet<Cone> {
        self.maximal.iter().flat_map(|c| c.faces()).collect()
    }

    /// Primitive generators of the one-dimensional cones.
    pub fn rays(&self) -> Vec<LatticeVector> {
        let set: BTreeSet<LatticeVector> = self
            .cones()
            .into_iter()
            .filter(|c| c.is_pointed() && c.rays().len() == 1)
            .map(|c| c.rays()[0].clone())
            .collect();
        set.into_iter().collect()
    }

    /// Pairs of maximal cones whose intersection is not a common face.
    pub fn face_violations(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for i in 0..self.maximal.len() {
            for j in i + 1..self.maximal.len() {
                let (a, b) = (&self.maximal[i], &self.maximal[j]);
                let m = a.intersect(b).expect("same rank");
                if !m.is_face_of(a) || !m.is_face_of(b) {
                    out.push((i, j));
                }
            }
        }
        out
    }

    pub fn is_fan(&self) -> bool {
        self.face_violations().is_empty()
    }

    /// The maximal cone containing `v` in its relative interior, if any.
    pub fn cone_containing(&self, v: &LatticeVector) -> Option<Cone> {
        self.cones()
            .into_iter()
            .find(|c| c.contains_relative_interior(v))
    }

    pub fn preimage(&self, map: &LatticeMap) -> Result<Fan> {
        let cones = self
            .maximal
            .iter()
            .map(|c| c.preimage(map))
            .collect::<Result<Vec<_>>>()?;
        Fan::from_cones(map.cols(), cones)
    }
}

/// Maximal cones of `{C ∩ C′ : C ∈ f, C′ ∈ g}`.
pub fn common_refinement(f: &Fan, g: &Fan) -> Result<Fan> {
    if f.dim != g.dim {
        return Err(Error::RankMismatch {
            context: "common refinement",
            expected: f.dim,
            found: g.dim,
        });
    }
    let mut cones = Vec::new();
    for a in &f.maximal {
        for b in &g.maximal {
            cones.push(a.intersect(b)?);
        }
    }
    Fan::from_cones(f.dim, cones)
}

/// Output of [`image_fan`]: the fan and, per maximal cone, the indices of the
/// input cones (in the order of `Fan::cones`) whose image contains it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ImageFan {
    pub fan: Fan,
    pub sources: Vec<Cone>,
    pub incidence: Vec<BTreeSet<usize>>,
}

fn split_by(piece: &Cone, h: &LatticeVector) -> Vec<Cone> {
    let gens = piece.generators();
    let pos = gens.iter().any(|g| h.dot(g).is_positive());
    let neg = gens.iter().any(|g| h.dot(g).is_negative());
    if !(pos && neg) {
        return vec![piece.clone()];
    }
    let (ineqs, eqs) = piece.inequalities();
    let mut up = ineqs.clone();
    up.push(h.clone());
    let mut down = ineqs;
    down.push(h.neg());
    vec![
        Cone::from_inequalities(piece.ambient_rank(), &up, &eqs).expect("same rank"),
        Cone::from_inequalities(piece.ambient_rank(), &down, &eqs).expect("same rank"),
    ]
}

/// Settles `a ∩ b` from dot products alone where possible: `Some(true)` when
/// one contains the other or a facet of either meets the other only in `0`.
fn quick_meet(a: &Cone, b: &Cone) -> Option<bool> {
    if !a.is_pointed() || !b.is_pointed() {
        return None;
    }
    let strictly_below =
        |h: &LatticeVector, c: &Cone| c.rays().iter().all(|r| h.dot(r).is_negative());
    let separated = |x: &Cone, y: &Cone| {
        x.facets().iter().any(|h| strictly_below(h, y))
            || x.equations()
                .iter()
                .any(|e| strictly_below(e, y) || strictly_below(&e.neg(), y))
    };
    if separated(a, b) || separated(b, a) {
        return Some(true);
    }
    None
}

/// Whether `im ∩ u` is a face of `u`.
fn meets_in_face(im: &Cone, u: &Cone) -> bool {
    if im.contains_cone(u) || quick_meet(im, u) == Some(true) {
        return true;
    }
    im.intersect(u).expect("same rank").is_face_of(u)
}

fn meets_as_face(a: &Cone, b: &Cone) -> bool {
    if quick_meet(a, b) == Some(true) {
        return true;
    }
    let m = a.intersect(b).expect("same rank");
    m.is_face_of(a) && m.is_face_of(b)
}

/// The common facet normal of two adjacent cells of equal dimension, oriented towards `a`.
fn separating_facet(a: &Cone, b: &Cone) -> Option<LatticeVector> {
    if a.dimension() != b.dimension() || a.equations() != b.equations() {
        return None;
    }
    let m = a.intersect(b).expect("same rank");
    if m.dimension() + 1 != a.dimension() {
        return None;
    }
    a.facets()
        .iter()
        .find(|f| m.generators().iter().all(|g| f.dot(g).is_zero()))
        .cloned()
}

fn try_merge(a: &Cone, b: &Cone) -> Option<Cone> {
    let h = separating_facet(a, b)?;
    let mut gens = a.generators();
    gens.extend(b.generators());
    let u = Cone::from_generators(a.ambient_rank(), &gens, &[]).expect("same rank");
    let (ineqs, eqs) = u.inequalities();
    let mut up = ineqs.clone();
    up.push(h.clone());
    let mut down = ineqs;
    down.push(h.neg());
    let upper = Cone::from_inequalities(u.ambient_rank(), &up, &eqs).expect("same rank");
    let lower = Cone::from_inequalities(u.ambient_rank(), &down, &eqs).expect("same rank");
    (upper == *a && lower == *b).then_some(u)
}

/// Cheap necessary test for two cells to share a facet.
fn adjacent(a: &Cone, b: &Cone) -> bool {
    a.dimension() == b.dimension()
        && a.equations() == b.equations()
        && a.facets().iter().any(|h| b.facets().contains(&h.neg()))
        && separating_facet(a, b).is_some()
}

fn is_fan_set(cells: &[Cone]) -> bool {
    (0..cells.len()).all(|i| (i + 1..cells.len()).all(|j| meets_as_face(&cells[i], &cells[j])))
}

/// Replaces every connected group of adjacent cells with equal membership by
/// its union; `None` if some union is not convex.
fn merge_components(cells: &[Cone], members: &[BTreeSet<usize>]) -> Option<Vec<Cone>> {
    let n = cells.len();
    let mut component: Vec<usize> = (0..n).collect();
    fn root(c: &mut [usize], mut i: usize) -> usize {
        while c[i] != i {
            c[i] = c[c[i]];
            i = c[i];
        }
        i
    }
    for i in 0..n {
        for j in i + 1..n {
            if members[i] == members[j]
                && root(&mut component, i) != root(&mut component, j)
                && adjacent(&cells[i], &cells[j])
            {
                let (a, b) = (root(&mut component, i), root(&mut component, j));
                component[b] = a;
            }
        }
    }
    let mut groups: std::collections::BTreeMap<usize, Vec<usize>> = Default::default();
    for i in 0..n {
        groups.entry(root(&mut component, i)).or_default().push(i);
    }
    let mut out = Vec::new();
    for group in groups.values() {
        if group.len() == 1 {
            out.push(cells[group[0]].clone());
            continue;
        }
        let gens: Vec<LatticeVector> = group.iter().flat_map(|&i| cells[i].generators()).collect();
        let u =
            Cone::from_generators(cells[group[0]].ambient_rank(), &gens, &[]).expect("same rank");
        let foreign = (0..n).filter(|i| !group.contains(i));
        let convex = foreign.into_iter().all(|i| {
            !u.contains_relative_interior(&cells[i].relative_interior_point())
                || u.dimension() != cells[i].dimension()
        });
        if !convex {
            return None;
        }
        out.push(u);
    }
    Some(out)
}

fn merge_greedy(
    mut cells: Vec<Cone>,
    mut members: Vec<BTreeSet<usize>>,
    images_ok: &dyn Fn(&Cone) -> bool,
) -> Vec<Cone> {
    'merge: loop {
        for i in 0..cells.len() {
            for j in i + 1..cells.len() {
                if members[i] != members[j] || !adjacent(&cells[i], &cells[j]) {
                    continue;
                }
                let Some(u) = try_merge(&cells[i], &cells[j]) else {
                    continue;
                };
                let fan_ok = cells
                    .iter()
                    .enumerate()
                    .all(|(k, x)| k == i || k == j || meets_as_face(x, &u));
                if fan_ok && images_ok(&u) {
                    cells.remove(j);
                    members.remove(j);
                    cells[i] = u;
                    continue 'merge;
                }
            }
        }
        return cells;
    }
}

/// `Σ bʲ·gⱼ` for the first base `b` at which no hyperplane in `avoid` vanishes.
fn generic_combination(gens: &[LatticeVector], avoid: &[&LatticeVector]) -> Option<LatticeVector> {
    let rank = gens.first()?.rank();
    (2..64i64).find_map(|b| {
        let mut x = LatticeVector::zeros(rank);
        let mut w = crate::lattice::int(1);
        for g in gens {
            x = x.add(&g.scale(&w));
            w *= crate::lattice::int(b);
        }
        avoid.iter().all(|h| !h.dot(&x).is_zero()).then_some(x)
    })
}

/// Chambers `⋂ {im : y ∈ im}` for generic `y`, found by walking across facets
/// from a generic point of every image. Returns `None` unless all maximal
/// images are full-dimensional.
fn chamber_walk(images: &[Cone], tops: &BTreeSet<Cone>, k: usize) -> Option<Vec<Cone>> {
    if k == 0 || tops.iter().any(|t| !t.is_full_dimensional()) {
        return None;
    }
    let full: Vec<&Cone> = images
        .iter()
        .filter(|im| im.is_full_dimensional())
        .collect();
    let mut normals: BTreeSet<LatticeVector> = BTreeSet::new();
    for im in images {
        normals.extend(im.facets().iter().chain(im.equations()).cloned());
    }
    let normals: Vec<LatticeVector> = normals.into_iter().collect();
    let chamber = |x: &LatticeVector| -> Option<Cone> {
        let mut ineqs = Vec::new();
        for im in full.iter().filter(|im| im.contains(x)) {
            ineqs.extend(im.facets().iter().cloned());
        }
        if full.iter().all(|im| !im.contains(x)) {
            return None;
        }
        Cone::from_inequalities(k, &ineqs, &[]).ok()
    };
    let all: Vec<&LatticeVector> = normals.iter().collect();
    let mut found: BTreeSet<Cone> = BTreeSet::new();
    let mut queue: Vec<Cone> = Vec::new();
    for t in tops {
        let x = generic_combination(&t.generators(), &all)?;
        if let Some(c) = chamber(&x) {
            if found.insert(c.clone()) {
                queue.push(c);
            }
        }
    }
    while let Some(c) = queue.pop() {
        if !c.is_pointed() {
            return None;
        }
        for h in c.facets() {
            let on: Vec<LatticeVector> = c
                .rays()
                .iter()
                .filter(|r| h.dot(r).is_zero())
                .cloned()
                .collect();
            let avoid: Vec<&LatticeVector> =
                normals.iter().filter(|g| !is_parallel(g, h)).collect();
            let r = if on.is_empty() {
                LatticeVector::zeros(k)
            } else {
                generic_combination(&on, &avoid)?
            };
            let mut t = crate::lattice::int(1);
            for g in &avoid {
                let (gr, gh) = (g.dot(&r), g.dot(h));
                if !gh.is_zero() && !gr.is_zero() {
                    let bound = (gr / gh).abs() / crate::lattice::int(2);
                    if bound < t {
                        t = bound;
                    }
                }
            }
            let x = r.sub(&h.scale(&t));
            if let Some(d) = chamber(&x) {
                if found.insert(d.clone()) {
                    queue.push(d);
                }
            }
        }
    }
    Some(found.into_iter().collect())
}

fn is_parallel(a: &LatticeVector, b: &LatticeVector) -> bool {
    let (ab, aa, bb) = (a.dot(b), a.dot(a), b.dot(b));
    ab.clone() * ab == aa * bb
}

/// The coarsest fan supported on the union of the images `p(C)`, `C ∈ f`, in
/// which every image is a union of cones. A given `support` must be pointed
/// and contain every image.
///
/// When every maximal image is full-dimensional the cells are the chambers of
/// the facet hyperplanes that actually bound something, found by walking from
/// chamber to chamber across their facets. Otherwise, or if the walk does not
/// give a fan, images are cut by every facet hyperplane of every image and
/// cells lying in the same images are merged while the result stays a fan
/// refining all images.
pub fn image_fan(f: &Fan, p: &LatticeMap, support: Option<&Cone>) -> Result<ImageFan> {
    if p.cols() != f.dim {
        return Err(Error::RankMismatch {
            context: "image fan map domain",
            expected: f.dim,
            found: p.cols(),
        });
    }
    if let Some(support) = support {
        if support.ambient_rank() != p.rows() {
            return Err(Error::RankMismatch {
                context: "image fan support",
                expected: p.rows(),
                found: support.ambient_rank(),
            });
        }
        if !support.is_pointed() {
            return Err(Error::NonPointedSupport);
        }
    }
    let k = p.rows();
    let sources: Vec<Cone> = f.cones().into_iter().collect();
    let images = sources
        .iter()
        .map(|c| c.image(p))
        .collect::<Result<Vec<_>>>()?;
    if support.is_some_and(|s| images.iter().any(|im| !s.contains_cone(im))) {
        return Err(Error::ImageOutsideSupport);
    }

    let mut hyperplanes: BTreeSet<LatticeVector> = BTreeSet::new();
    for im in &images {
        for h in im.facets().iter().chain(im.equations()) {
            hyperplanes.insert(h.clone());
        }
    }
    let tops: BTreeSet<Cone> = images
        .iter()
        .filter(|im| !images.iter().any(|o| o != *im && o.contains_cone(im)))
        .cloned()
        .collect();
    let images_ok = |u: &Cone| images.iter().all(|im| meets_in_face(im, u));
    if let Some(cells) = chamber_walk(&images, &tops, k) {
        if cells.iter().all(&images_ok) && is_fan_set(&cells) {
            return finish(k, cells, sources, &images);
        }
    }
    let mut pieces: BTreeSet<Cone> = BTreeSet::new();
    for top in tops {
        let mut current = vec![top];
        for h in &hyperplanes {
            current = current.iter().flat_map(|c| split_by(c, h)).collect();
        }
        pieces.extend(current);
    }
    let all: Vec<Cone> = pieces.into_iter().collect();
    let cells: Vec<Cone> = all
        .iter()
        .filter(|c| !all.iter().any(|d| d != *c && d.contains_cone(c)))
        .cloned()
        .collect();
    if cells.iter().any(|c| !c.is_pointed()) {
        return Err(Error::NonPointedSupport);
    }

    let membership = |c: &Cone| -> BTreeSet<usize> {
        images
            .iter()
            .enumerate()
            .filter(|(_, im)| im.contains_cone(c))
            .map(|(i, _)| i)
            .collect()
    };
    let members: Vec<BTreeSet<usize>> = cells.iter().map(membership).collect();
    let cells = match merge_components(&cells, &members) {
        Some(merged) if merged.iter().all(&images_ok) && is_fan_set(&merged) => merged,
        _ => merge_greedy(cells, members, &images_ok),
    };
    finish(k, cells, sources, &images)
}

fn finish(k: usize, cells: Vec<Cone>, sources: Vec<Cone>, images: &[Cone]) -> Result<ImageFan> {
    let fan = if cells.is_empty() {
        Fan::trivial(k)
    } else {
        Fan::from_cones(k, cells)?
    };
    let incidence = fan
        .maximal
        .iter()
        .map(|c| {
            images
                .iter()
                .enumerate()
                .filter(|(_, im)| im.contains_cone(c))
                .map(|(i, _)| i)
                .collect()
        })
        .collect();
    Ok(ImageFan {
        fan,
        sources,
        incidence,
    })
}

/// Sort key for the counterclockwise angle of a nonzero plane vector, used by tests.
#[cfg(test)]
pub(crate) fn angle_key(v: &LatticeVector) -> (u8, u8, num_rational::BigRational) {
    let (x, y) = (v[0].clone(), v[1].clone());
    let half = if y.is_positive() || (y.is_zero() && x.is_positive()) {
        0
    } else {
        1
    };
    if y.is_zero() {
        (half, 0, num_rational::BigRational::zero())
    } else {
        (half, 1, -(x / y))
    }
}

//! Brute-force oracles shared by the property tests and the acceptance suite.
#![allow(dead_code)]

use std::cmp::Ordering;
use std::collections::BTreeSet;

use divfan_core::construction::{build_general, build_toroidal, check_shifted_tails};
use divfan_core::corpus::CorpusEntry;
use divfan_core::lattice::int;
use divfan_core::poly::image_fan;
use divfan_core::{
    equal_canonical, Cone, Fan, LatticeMap, LatticeVector, MinValue, Polyhedron, WeylGroup,
};

pub type P2 = [i64; 2];

fn v2(p: P2) -> LatticeVector {
    LatticeVector::from_ints(&p)
}

/// `min⟨Δ, ·⟩` is concave and homogeneous on the dual of the tail cone, and
/// agrees with the minimum over the vertices.
///
/// `u_coef` and `v_coef` are coordinates in the generators of that dual cone.
pub fn check_concavity(
    vertices: &[P2],
    tail: &[P2],
    u_coef: &[i64],
    v_coef: &[i64],
) -> Result<(), String> {
    let verts: Vec<LatticeVector> = vertices.iter().map(|&p| v2(p)).collect();
    let rays: Vec<LatticeVector> = tail
        .iter()
        .filter(|r| **r != [0, 0])
        .map(|&p| v2(p))
        .collect();
    let delta = Polyhedron::from_generators(2, &verts, &rays, &[]).map_err(|e| e.to_string())?;
    let sigma = Cone::from_generators(2, &rays, &[]).map_err(|e| e.to_string())?;
    let dual = sigma.dual();
    let mut gens: Vec<LatticeVector> = dual.rays().to_vec();
    for l in dual.lineality() {
        gens.push(l.clone());
        gens.push(l.neg());
    }
    let combo = |c: &[i64]| {
        gens.iter()
            .zip(c.iter().cycle())
            .fold(LatticeVector::zeros(2), |acc, (g, &k)| {
                acc.add_scaled(&int(k), g)
            })
    };
    let (u, v) = (combo(u_coef), combo(v_coef));
    let brute = |w: &LatticeVector| verts.iter().map(|x| x.dot(w)).min().expect("nonempty");
    let h = |w: &LatticeVector| match delta.min_eval(w) {
        Ok(MinValue::Finite(x)) => Ok(x),
        other => Err(format!("min_eval({w}) = {other:?}")),
    };
    for w in [&u, &v, &u.add(&v)] {
        if h(w)? != brute(w) {
            return Err(format!(
                "min_eval({w}) = {} but vertex minimum is {}",
                h(w)?,
                brute(w)
            ));
        }
    }
    if h(&u.add(&v))? < h(&u)? + h(&v)? {
        return Err(format!("not concave at u={u}, v={v}"));
    }
    if h(&u.scale(&int(3)))? != h(&u)? * int(3) {
        return Err(format!("not homogeneous at u={u}"));
    }
    Ok(())
}

fn cross(a: P2, b: P2) -> i64 {
    a[0] * b[1] - a[1] * b[0]
}

fn primitive(a: P2) -> P2 {
    let g = num_gcd(a[0].abs(), a[1].abs());
    [a[0] / g, a[1] / g]
}

fn num_gcd(a: i64, b: i64) -> i64 {
    if b == 0 {
        a
    } else {
        num_gcd(b, a % b)
    }
}

fn half(a: P2) -> u8 {
    if a[1] > 0 || (a[1] == 0 && a[0] > 0) {
        0
    } else {
        1
    }
}

fn by_angle(a: &P2, b: &P2) -> Ordering {
    half(*a).cmp(&half(*b)).then_with(|| 0.cmp(&cross(*a, *b)))
}

/// A cone in the plane, described by its boundary.
#[derive(Clone, Debug)]
enum Planar {
    Zero,
    Ray(P2),
    Line(P2),
    /// Generators lie counterclockwise from `from` to `to`, with an angle below π.
    Sector {
        from: P2,
        to: P2,
    },
    /// The closed half-plane to the left of `from`; `from` and `-from` bound it.
    Half {
        from: P2,
    },
    Plane,
}

impl Planar {
    fn of(gens: &[P2]) -> Planar {
        let mut dirs: Vec<P2> = gens
            .iter()
            .filter(|g| **g != [0, 0])
            .map(|g| primitive(*g))
            .collect();
        dirs.sort_by(by_angle);
        dirs.dedup();
        match dirs.len() {
            0 => return Planar::Zero,
            1 => return Planar::Ray(dirs[0]),
            _ => {}
        }
        if dirs.iter().all(|d| cross(dirs[0], *d) == 0) {
            return if dirs.len() == 1 {
                Planar::Ray(dirs[0])
            } else {
                Planar::Line(dirs[0])
            };
        }
        // the widest empty gap decides the shape
        let n = dirs.len();
        for i in 0..n {
            let (a, b) = (dirs[i], dirs[(i + 1) % n]);
            let c = cross(a, b);
            if c < 0 {
                return Planar::Sector { from: b, to: a };
            }
            if c == 0 && a != b {
                return Planar::Half { from: b };
            }
        }
        Planar::Plane
    }

    fn boundary(&self) -> Vec<P2> {
        match *self {
            Planar::Zero | Planar::Plane => vec![],
            Planar::Ray(r) => vec![r],
            Planar::Line(r) | Planar::Half { from: r } => vec![r, [-r[0], -r[1]]],
            Planar::Sector { from, to } => vec![from, to],
        }
    }

    fn is_full(&self) -> bool {
        matches!(
            self,
            Planar::Sector { .. } | Planar::Half { .. } | Planar::Plane
        )
    }

    fn contains(&self, x: P2) -> bool {
        match *self {
            Planar::Zero => x == [0, 0],
            Planar::Ray(r) => cross(r, x) == 0 && r[0] * x[0] + r[1] * x[1] >= 0,
            Planar::Line(r) => cross(r, x) == 0,
            Planar::Sector { from, to } => cross(from, x) >= 0 && cross(x, to) >= 0,
            Planar::Half { from } => cross(from, x) >= 0,
            Planar::Plane => true,
        }
    }
}

/// Cones over a fan triangulation of the star-shaped polygon through `points`
/// in the plane `z = 1`, keeping the triangles flagged in `keep`, optionally
/// with the ray `-e₃`.
pub fn pyramid_fan(points: &[P2], keep: &[bool], down_ray: bool) -> Option<Fan> {
    let mut pts: Vec<P2> = points
        .iter()
        .filter(|p| **p != [0, 0])
        .map(|p| primitive(*p))
        .collect();
    pts.sort_by(by_angle);
    pts.dedup();
    let n = pts.len();
    if n < 3 || (0..n).any(|i| cross(pts[i], pts[(i + 1) % n]) <= 0) {
        return None;
    }
    let lift = |p: P2| LatticeVector::from_ints(&[p[0], p[1], 1]);
    let mut cones = Vec::new();
    for i in 0..n {
        if keep.get(i).copied().unwrap_or(true) {
            let rays = [
                lift(pts[i]),
                lift(pts[(i + 1) % n]),
                LatticeVector::from_ints(&[0, 0, 1]),
            ];
            cones.push(Cone::from_rays(3, &rays).ok()?);
        }
    }
    if down_ray {
        cones.push(Cone::from_rays(3, &[LatticeVector::from_ints(&[0, 0, -1])]).ok()?);
    }
    if cones.is_empty() {
        return None;
    }
    Fan::from_cones(3, cones).ok()
}

fn as_p2(v: &LatticeVector) -> P2 {
    let c = v.coords();
    let to_i = |x: &divfan_core::ExactScalar| -> i64 { x.to_integer().try_into().expect("small") };
    [to_i(&c[0]), to_i(&c[1])]
}

/// The coarsest fan in the plane refining the images of all cones of `fan`,
/// computed from angular sweeps; `None` where no pointed fan exists.
pub fn planar_image_fan_oracle(fan: &Fan, p: &LatticeMap) -> Option<BTreeSet<Cone>> {
    let images: Vec<Planar> = fan
        .cones()
        .iter()
        .map(|c| {
            Planar::of(
                &c.rays()
                    .iter()
                    .map(|r| as_p2(&p.apply(r)))
                    .collect::<Vec<_>>(),
            )
        })
        .collect();
    let mut rays: Vec<P2> = images.iter().flat_map(|im| im.boundary()).collect();
    rays.sort_by(by_angle);
    rays.dedup();
    let covered = |x: P2| images.iter().any(|im| im.is_full() && im.contains(x));
    let mut cones = BTreeSet::new();
    if rays.is_empty() {
        if covered([1, 0]) {
            return None;
        }
        cones.insert(Cone::zero(2));
        return Some(cones);
    }
    let n = rays.len();
    let mut used = vec![false; n];
    for i in 0..n {
        let (a, b) = (rays[i], rays[(i + 1) % n]);
        let c = cross(a, b);
        let inside = if n == 1 {
            [-a[0], -a[1]]
        } else if c > 0 {
            [a[0] + b[0], a[1] + b[1]]
        } else if c == 0 {
            [-a[1], a[0]]
        } else {
            [-(a[0] + b[0]), -(a[1] + b[1])]
        };
        if !covered(inside) {
            continue;
        }
        if n == 1 || c <= 0 {
            return None;
        }
        cones.insert(Cone::from_rays(2, &[v2(a), v2(b)]).expect("rank 2"));
        used[i] = true;
        used[(i + 1) % n] = true;
    }
    for i in (0..n).filter(|&i| !used[i]) {
        cones.insert(Cone::from_rays(2, &[v2(rays[i])]).expect("rank 2"));
    }
    Some(cones)
}

/// Compares `image_fan` with the sweep oracle and checks that every image is a
/// union of cones of the result.
pub fn check_image_fan(fan: &Fan, p: &LatticeMap) -> Result<(), String> {
    let oracle = planar_image_fan_oracle(fan, p);
    let got = image_fan(fan, p, None);
    match (oracle, got) {
        (None, Err(_)) => Ok(()),
        (None, Ok(out)) => Err(format!(
            "oracle finds no pointed fan, image_fan gave {:?}",
            out.fan.maximal_cones()
        )),
        (Some(want), Err(e)) => Err(format!("image_fan failed with {e}, expected {want:?}")),
        (Some(want), Ok(out)) => {
            let have: BTreeSet<Cone> = out.fan.maximal_cones().iter().cloned().collect();
            if have != want {
                return Err(format!("image_fan {have:?}, expected {want:?}"));
            }
            if !out.fan.is_fan() {
                return Err("result is not a fan".into());
            }
            // faces of a cell inherit the property, so maximal cells suffice
            for c in fan.cones() {
                let im = c.image(p).map_err(|e| e.to_string())?;
                for cell in out.fan.maximal_cones() {
                    if !im.contains_cone(cell)
                        && !im
                            .intersect(cell)
                            .map_err(|e| e.to_string())?
                            .is_face_of(cell)
                    {
                        return Err(format!("image {im} cuts through {cell}"));
                    }
                }
            }
            Ok(())
        }
    }
}

/// Every left coset `w W_I` has exactly one element in `W^I`, and that element
/// is strictly shorter than the rest of the coset; checked for every `I`.
pub fn check_coset_representatives(cartan_type: &str) -> Result<usize, String> {
    let w = WeylGroup::from_cartan_type(cartan_type, 1000).map_err(|e| e.to_string())?;
    let r = w.rank();
    let mut checked = 0;
    for mask in 0..(1u32 << r) {
        let roots: BTreeSet<usize> = (0..r).filter(|i| mask & (1 << i) != 0).collect();
        let reps: BTreeSet<usize> = w.min_coset_reps(&roots).into_iter().collect();
        let sub = w.parabolic_subgroup(&roots).len();
        if reps.len() * sub != w.order() {
            return Err(format!(
                "{cartan_type} I={roots:?}: {} representatives for {} cosets",
                reps.len(),
                w.order() / sub
            ));
        }
        for e in w.elements() {
            let coset = w.coset(e, &roots);
            let inside: Vec<usize> = coset.iter().copied().filter(|x| reps.contains(x)).collect();
            if inside.len() != 1 {
                return Err(format!(
                    "{cartan_type} I={roots:?}: coset of {:?} meets W^I in {inside:?}",
                    w.word(e)
                ));
            }
            let m = inside[0];
            if coset.iter().any(|&x| x != m && w.length(x) <= w.length(m)) {
                return Err(format!(
                    "{cartan_type} I={roots:?}: {:?} is not the unique shortest",
                    w.word(m)
                ));
            }
            checked += 1;
        }
    }
    Ok(checked)
}

/// The general construction and the toroidal one agree on the toroidalization.
pub fn check_toroidal_agreement(e: &CorpusEntry) -> Result<(), String> {
    let (Some(d), Some(cf)) = (&e.datum, &e.colored_fan) else {
        return Ok(());
    };
    let t = cf.toroidalize(d).map_err(|x| x.to_string())?;
    let a = build_general(&t, d).map_err(|x| x.to_string())?.fan;
    let b = build_toroidal(&t, d).map_err(|x| x.to_string())?.fan;
    if !equal_canonical(&a, &b, None) || a.labels() != b.labels() {
        return Err(format!(
            "{}: general and toroidal constructions differ",
            e.name
        ));
    }
    Ok(())
}

/// Every color coefficient of the constructed fan is a shift of its tail cone.
pub fn check_color_tails(e: &CorpusEntry) -> Result<(), String> {
    let (Some(d), Some(cf)) = (&e.datum, &e.colored_fan) else {
        return Ok(());
    };
    let fan = build_general(cf, d).map_err(|x| x.to_string())?.fan;
    let report = check_shifted_tails(&fan);
    if report.ok() {
        Ok(())
    } else {
        Err(format!("{}: {:?}", e.name, report.violations))
    }
}

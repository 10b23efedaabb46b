//! Spherical homogeneous spaces through their combinatorial data, and colored fans.

use std::collections::{BTreeMap, BTreeSet};

use num_traits::Zero;
use serde_json::json;

use crate::divisorial::{DivisorLabel, Word};
use crate::error::{Error, Report, Result, ViolationKind};
use crate::lattice::{LatticeVector, SplitSequence};
use crate::poly::{Cone, Fan};
use crate::weyl::WeylGroup;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Color {
    pub name: String,
    pub rho: LatticeVector,
    /// Indices of the simple roots `α` with `P_α D = D`.
    pub stabilizer_roots: BTreeSet<usize>,
}

/// The datum of `G/H` together with the split sequence to `G/H′`.
#[derive(Clone, Debug)]
pub struct SphericalDatum {
    pub valuation_cone: Cone,
    pub colors: Vec<Color>,
    pub weyl: WeylGroup,
    pub split: SplitSequence,
    /// Optional identification of translated colors, keyed by element index.
    pub color_action: Option<BTreeMap<(usize, String), DivisorLabel>>,
}

impl SphericalDatum {
    pub fn rank(&self) -> usize {
        self.split.middle_rank()
    }

    pub fn color(&self, name: &str) -> Result<&Color> {
        self.colors
            .iter()
            .find(|c| c.name == name)
            .ok_or_else(|| Error::UnknownColor(name.to_string()))
    }

    pub fn color_names(&self) -> BTreeSet<String> {
        self.colors.iter().map(|c| c.name.clone()).collect()
    }

    /// `p(𝒱)`, the valuation cone of `G/H′`.
    pub fn quotient_valuation_cone(&self) -> Result<Cone> {
        self.valuation_cone.image(self.split.projection())
    }

    /// Checks the splitting and `𝒱 = p⁻¹(p(𝒱))` with `p(𝒱)` pointed.
    pub fn validate(&self) -> Result<Report> {
        let mut report = self.split.verify();
        if self.valuation_cone.ambient_rank() != self.rank() {
            return Err(Error::RankMismatch {
                context: "valuation cone",
                expected: self.rank(),
                found: self.valuation_cone.ambient_rank(),
            });
        }
        for c in &self.colors {
            if c.rho.rank() != self.rank() {
                return Err(Error::RankMismatch {
                    context: "color valuation",
                    expected: self.rank(),
                    found: c.rho.rank(),
                });
            }
            if let Some(i) = c.stabilizer_roots.iter().find(|&&i| i >= self.weyl.rank()) {
                return Err(Error::Schema(format!(
                    "color {} names simple root {i} of a rank {} system",
                    c.name,
                    self.weyl.rank()
                )));
            }
        }
        let image = self.quotient_valuation_cone()?;
        if !image.is_pointed() {
            report.push(
                ViolationKind::ConeNotPointed,
                "image of the valuation cone is not pointed",
                json!({ "image": image.to_string() }),
            );
        } else if image.preimage(self.split.projection())? != self.valuation_cone {
            report.push(
                ViolationKind::Splitting,
                "valuation cone is not the full preimage of its image",
                json!({ "valuation_cone": self.valuation_cone.to_string(), "image": image.to_string() }),
            );
        }
        Ok(report)
    }

    /// The label of `w D̄′` on the base, after the identification table if present.
    pub fn act_on_color(&self, w: usize, color: &str) -> Result<DivisorLabel> {
        match &self.color_action {
            None => Ok(DivisorLabel::translated(self.weyl.word(w).clone(), color)),
            Some(table) => table.get(&(w, color.to_string())).cloned().ok_or_else(|| {
                Error::MissingColorAction {
                    word: crate::divisorial::format_word(self.weyl.word(w)),
                    color: color.to_string(),
                }
            }),
        }
    }

    /// `I(ℱ) = ∩_{D ∉ ℱ} J(D)`; all simple roots when every color is in `ℱ`.
    pub fn parabolic_index(&self, colors: &BTreeSet<String>) -> BTreeSet<usize> {
        let mut out: BTreeSet<usize> = (0..self.weyl.rank()).collect();
        for c in self.colors.iter().filter(|c| !colors.contains(&c.name)) {
            out = out.intersection(&c.stabilizer_roots).copied().collect();
        }
        out
    }

    /// `W_C = {w : w(Colors ∖ ℱ) = Colors ∖ ℱ}`, checked against `W_{I(ℱ)}`.
    pub fn stabilizer_subgroup_wc(&self, colors: &BTreeSet<String>) -> Result<Vec<usize>> {
        let outside: Vec<&Color> = self
            .colors
            .iter()
            .filter(|c| !colors.contains(&c.name))
            .collect();
        let untranslated: BTreeSet<DivisorLabel> = outside
            .iter()
            .map(|c| self.act_on_color(0, &c.name))
            .collect::<Result<_>>()?;
        let mut wc = Vec::new();
        for w in self.weyl.elements() {
            let image: BTreeSet<DivisorLabel> = outside
                .iter()
                .map(|c| self.act_on_color(w, &c.name))
                .collect::<Result<_>>()?;
            if image == untranslated {
                wc.push(w);
            }
        }
        let wi = self.weyl.parabolic_subgroup(&self.parabolic_index(colors));
        if wc != wi {
            let words = |v: &[usize]| -> Vec<String> {
                v.iter()
                    .map(|&e| crate::divisorial::format_word(self.weyl.word(e)))
                    .collect()
            };
            let mut r = Report::default();
            r.push(
                ViolationKind::WeylStabilizer,
                "stabilizer of the colors outside the cone differs from the parabolic subgroup",
                json!({ "colors": colors, "w_c": words(&wc), "w_i": words(&wi) }),
            );
            return Err(Error::Validation(r));
        }
        Ok(wc)
    }

    pub fn min_coset_reps(&self, colors: &BTreeSet<String>) -> Vec<usize> {
        self.weyl.min_coset_reps(&self.parabolic_index(colors))
    }

    pub fn word(&self, w: usize) -> &Word {
        self.weyl.word(w)
    }
}

/// A cone in `𝒳*_Q` with a set of colors.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ColoredCone {
    pub cone: Cone,
    pub colors: BTreeSet<String>,
}

impl ColoredCone {
    pub fn new(cone: Cone, colors: impl IntoIterator<Item = impl Into<String>>) -> Self {
        ColoredCone {
            cone,
            colors: colors.into_iter().map(Into::into).collect(),
        }
    }

    /// A readable identifier built from the canonical ray list.
    pub fn id(&self) -> String {
        self.cone.id()
    }

    pub fn is_toroidal(&self) -> bool {
        self.colors.is_empty()
    }

    /// Colored faces: `(F, ℱ ∩ {D : ρ_D ∈ F})`.
    pub fn faces(&self, datum: &SphericalDatum) -> Result<Vec<ColoredCone>> {
        let mut out = Vec::new();
        for f in self.cone.faces() {
            let mut colors = BTreeSet::new();
            for name in &self.colors {
                if f.contains(&datum.color(name)?.rho) {
                    colors.insert(name.clone());
                }
            }
            out.push(ColoredCone { cone: f, colors });
        }
        Ok(out)
    }
}

/// A colored fan given by its maximal colored cones.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ColoredFan {
    pub cones: Vec<ColoredCone>,
}

fn lies_on_colored_ray(ray: &LatticeVector, rho: &LatticeVector) -> bool {
    !rho.is_zero() && rho.primitive_direction() == *ray
}

pub fn validate_colored_cone(cc: &ColoredCone, datum: &SphericalDatum) -> Result<Report> {
    let mut report = Report::default();
    let c = &cc.cone;
    if !c.is_pointed() {
        report.push(
            ViolationKind::ConeNotPointed,
            "colored cone is not pointed",
            json!({ "cone": c.to_string() }),
        );
    }
    let mut rhos = Vec::new();
    for name in &cc.colors {
        let color = datum.color(name)?;
        if color.rho.is_zero() {
            report.push(
                ViolationKind::ZeroColorValuation,
                format!("color {name} has valuation 0"),
                json!({ "color": name }),
            );
            continue;
        }
        if !c.contains(&color.rho) {
            report.push(
                ViolationKind::ColorNotInCone,
                format!("valuation of color {name} is not in the cone"),
                json!({ "color": name, "rho": color.rho.to_string(), "cone": c.to_string() }),
            );
        }
        rhos.push(color.rho.clone());
    }
    for ray in c.rays() {
        if !datum.valuation_cone.contains(ray) && !rhos.iter().any(|r| lies_on_colored_ray(ray, r))
        {
            report.push(
                ViolationKind::ConeNotGenerated,
                "ray is neither in the valuation cone nor a color valuation",
                json!({ "ray": ray.to_string(), "cone": c.to_string() }),
            );
        }
    }
    let inside = c.intersect(&datum.valuation_cone)?;
    let witness = inside.relative_interior_point();
    if !c.contains_relative_interior(&witness) {
        report.push(
            ViolationKind::InteriorMissesValuationCone,
            "relative interior of the cone misses the valuation cone",
            json!({ "cone": c.to_string(), "cone_meet_valuation_cone": inside.to_string() }),
        );
    }
    Ok(report)
}

/// A point of `relint(a) ∩ relint(b) ∩ 𝒱`, if there is one.
fn interior_overlap(a: &Cone, b: &Cone, v: &Cone) -> Option<LatticeVector> {
    let k = a.intersect(b).ok()?;
    let p = k.relative_interior_point();
    if !a.contains_relative_interior(&p) || !b.contains_relative_interior(&p) {
        return None;
    }
    let q = k.intersect(v).ok()?.relative_interior_point();
    k.contains_relative_interior(&q).then_some(q)
}

impl ColoredFan {
    pub fn new(cones: Vec<ColoredCone>) -> Self {
        ColoredFan { cones }
    }

    /// Every colored cone of the fan, faces included.
    pub fn all_cones(&self, datum: &SphericalDatum) -> Result<BTreeSet<ColoredCone>> {
        let mut out = BTreeSet::new();
        for cc in &self.cones {
            out.extend(cc.faces(datum)?);
        }
        Ok(out)
    }

    /// The given cones that are not faces of other given cones.
    pub fn maximal(&self) -> Vec<&ColoredCone> {
        let mut seen = BTreeSet::new();
        self.cones
            .iter()
            .filter(|c| {
                !self.cones.iter().any(|o| {
                    o.cone != c.cone && c.cone.is_face_of(&o.cone) && c.colors.is_subset(&o.colors)
                })
            })
            .filter(|c| seen.insert((*c).clone()))
            .collect()
    }

    pub fn is_toroidal(&self) -> bool {
        self.cones.iter().all(ColoredCone::is_toroidal)
    }

    pub fn validate(&self, datum: &SphericalDatum) -> Result<Report> {
        let mut report = Report::default();
        for cc in &self.cones {
            report.extend(validate_colored_cone(cc, datum)?);
        }
        let all: Vec<ColoredCone> = self.all_cones(datum)?.into_iter().collect();
        for i in 0..all.len() {
            for j in i + 1..all.len() {
                if let Some(w) = interior_overlap(&all[i].cone, &all[j].cone, &datum.valuation_cone)
                {
                    report.push(
                        ViolationKind::InteriorOverlap,
                        "two colored cones share a relative interior point of the valuation cone",
                        json!({
                            "first": all[i].id(),
                            "first_colors": all[i].colors,
                            "second": all[j].id(),
                            "second_colors": all[j].colors,
                            "point": w.to_string(),
                        }),
                    );
                }
            }
        }
        Ok(report)
    }

    /// Whether the support contains the valuation cone.
    pub fn is_complete(&self, datum: &SphericalDatum) -> Result<bool> {
        let v = &datum.valuation_cone;
        let cells: Vec<Cone> = self
            .cones
            .iter()
            .map(|c| c.cone.intersect(v))
            .collect::<Result<Vec<_>>>()?
            .into_iter()
            .filter(|c| c.dimension() == v.dimension())
            .collect();
        if v.dimension() == 0 {
            return Ok(true);
        }
        if cells.is_empty() {
            return Ok(false);
        }
        for cell in &cells {
            for (h, facet) in cell.facets().iter().zip(cell.facet_cones()) {
                let gens = facet.generators();
                let on_boundary = v
                    .facets()
                    .iter()
                    .any(|g| gens.iter().all(|x| g.dot(x).is_zero()));
                if on_boundary {
                    continue;
                }
                let covered = cells.iter().any(|o| {
                    o != cell
                        && o.contains_cone(&facet)
                        && o.generators().iter().any(|x| h.dot(x) < Zero::zero())
                });
                if !covered {
                    return Ok(false);
                }
            }
        }
        Ok(true)
    }

    /// Replaces every `(C, ℱ)` by `(C ∩ 𝒱, ∅)`.
    pub fn toroidalize(&self, datum: &SphericalDatum) -> Result<ColoredFan> {
        let fan = self.uncolored_fan(datum)?;
        Ok(ColoredFan {
            cones: fan
                .maximal_cones()
                .iter()
                .map(|c| ColoredCone {
                    cone: c.clone(),
                    colors: BTreeSet::new(),
                })
                .collect(),
        })
    }

    /// `ℱ_X = {C ∩ 𝒱}`.
    pub fn uncolored_fan(&self, datum: &SphericalDatum) -> Result<Fan> {
        let cones = self
            .cones
            .iter()
            .map(|c| c.cone.intersect(&datum.valuation_cone))
            .collect::<Result<Vec<_>>>()?;
        if cones.is_empty() {
            return Ok(Fan::trivial(datum.rank()));
        }
        Fan::from_cones(datum.rank(), cones)
    }

    /// Every colored cone maps into a colored cone of `other`, with colors by name.
    pub fn dominates(
        &self,
        other: &ColoredFan,
        map: Option<&crate::lattice::LatticeMap>,
    ) -> Result<bool> {
        for cc in &self.cones {
            let image = match map {
                Some(p) => cc.cone.image(p)?,
                None => cc.cone.clone(),
            };
            if !other
                .cones
                .iter()
                .any(|o| o.cone.contains_cone(&image) && cc.colors.is_subset(&o.colors))
            {
                return Ok(false);
            }
        }
        Ok(true)
    }
}

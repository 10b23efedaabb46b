//! Toric downgrades: a fan in `N̄` restricted to a subtorus `N`, described as a
//! divisorial fan over the toric variety of the image fan.

use std::collections::{BTreeMap, BTreeSet};

use crate::construction::build_general;
use crate::divisorial::{diff_canonical, ChartLabel, DivisorLabel, DivisorialFan, PDivisor};
use crate::error::{Error, Result};
use crate::lattice::{LatticeMap, LatticeVector, SplitSequence};
use crate::poly::{common_refinement, fiber_slice, image_fan, Cone, Fan};
use crate::spherical::{ColoredFan, SphericalDatum};

#[derive(Clone, Debug)]
pub struct DowngradeInput {
    pub fan: Fan,
    pub split: SplitSequence,
    /// Rays added to the image fan, e.g. to complete the base to `ℙ¹`; their
    /// divisors carry empty coefficients wherever no cone reaches them.
    pub extra_base_rays: Vec<LatticeVector>,
}

#[derive(Clone, Debug)]
pub struct Downgrade {
    pub base_fan: Fan,
    pub refined_fan: Fan,
    pub fan: DivisorialFan,
}

impl DowngradeInput {
    pub fn validate(&self) -> Result<()> {
        self.split.verify().into_result()?;
        if self.fan.ambient_rank() != self.split.middle_rank() {
            return Err(Error::RankMismatch {
                context: "downgrade fan",
                expected: self.split.middle_rank(),
                found: self.fan.ambient_rank(),
            });
        }
        if let Some(r) = self
            .extra_base_rays
            .iter()
            .find(|r| r.rank() != self.split.quotient_rank())
        {
            return Err(Error::RankMismatch {
                context: "extra base ray",
                expected: self.split.quotient_rank(),
                found: r.rank(),
            });
        }
        let bad = self.fan.face_violations();
        if !bad.is_empty() {
            return Err(Error::Schema(format!(
                "input is not a fan: cones {bad:?} meet outside a common face"
            )));
        }
        Ok(())
    }
}

pub fn downgrade(input: &DowngradeInput) -> Result<Downgrade> {
    input.validate()?;
    let split = &input.split;
    let p = split.projection();
    let image = image_fan(&input.fan, p, None)?.fan;
    let mut base_cones: Vec<Cone> = image.maximal_cones().to_vec();
    for r in &input.extra_base_rays {
        base_cones.push(Cone::from_rays(split.quotient_rank(), &[r.primitive()?])?);
    }
    let base = Fan::from_cones(split.quotient_rank(), base_cones)?;
    let refined = common_refinement(&input.fan, &base.preimage(p)?)?;
    let rays = base.rays();
    let labels: BTreeSet<DivisorLabel> = rays
        .iter()
        .cloned()
        .map(DivisorLabel::OrbitClosure)
        .collect();
    let zero = LatticeVector::zeros(split.quotient_rank());
    let mut members = Vec::new();
    for c in input.fan.maximal_cones() {
        let tail = fiber_slice(c, split, &zero)?.tail_cone()?;
        let mut coefficients = BTreeMap::new();
        for a in &rays {
            coefficients.insert(
                DivisorLabel::OrbitClosure(a.clone()),
                fiber_slice(c, split, a)?,
            );
        }
        members.push(PDivisor::new(
            tail,
            coefficients,
            Some(ChartLabel::new(c.id(), Vec::new())),
        )?);
    }
    let fan = DivisorialFan::build(split.kernel_rank(), labels, members, None)?;
    Ok(Downgrade {
        base_fan: base,
        refined_fan: refined,
        fan,
    })
}

/// The toric model of a spherical homogeneous space together with the
/// identifications needed to compare its downgrade with the construction.
#[derive(Clone, Debug)]
pub struct ToricModel {
    pub input: DowngradeInput,
    /// Orbit closures of the model mapped to divisor labels of the construction.
    pub relabel: BTreeMap<DivisorLabel, DivisorLabel>,
    /// Optional isomorphism from the model's `N` to the kernel lattice of the datum.
    pub lattice: Option<LatticeMap>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Crosscheck {
    pub equal: bool,
    /// Members present on only one side, after relabeling the downgrade.
    pub diff: Vec<String>,
}

/// Compares the construction for `(datum, cf)` with the downgrade of the toric model.
pub fn crosscheck(
    datum: &SphericalDatum,
    cf: &ColoredFan,
    model: &ToricModel,
) -> Result<Crosscheck> {
    let constructed = build_general(cf, datum)?.fan;
    let mut down = downgrade(&model.input)?.fan;
    for d in down.labels() {
        if !constructed
            .labels()
            .contains(model.relabel.get(d).unwrap_or(d))
        {
            return Err(Error::MissingCorrespondence);
        }
    }
    if let Some(m) = &model.lattice {
        down = down.map_lattice(m)?;
    }
    let down = down.relabel(&model.relabel);
    let diff = diff_canonical(&down, &constructed);
    Ok(Crosscheck {
        equal: diff.is_empty() && down.rank() == constructed.rank(),
        diff,
    })
}

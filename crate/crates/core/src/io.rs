//! The `divfan/1` JSON schema. Rationals are written as strings such as `"-1/2"`;
//! integers are also accepted as plain numbers on input.

use std::collections::{BTreeMap, BTreeSet};
use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::ToPrimitive;
use serde::{Deserialize, Serialize};

use crate::divisorial::{ChartLabel, DivisorLabel, DivisorialFan, PDivisor, Word};
use crate::downgrade::DowngradeInput;
use crate::error::{Error, Result};
use crate::lattice::{ExactScalar, LatticeMap, LatticeVector, SplitSequence};
use crate::poly::{Cone, Fan, Polyhedron};
use crate::spherical::{Color, ColoredCone, ColoredFan, SphericalDatum};
use crate::weyl::{WeylGroup, DEFAULT_BOUND};

pub const SCHEMA: &str = "divfan/1";

fn schema_err(msg: impl Into<String>) -> Error {
    Error::Schema(msg.into())
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum ScalarJson {
    Int(i64),
    Text(String),
}

pub type VectorJson = Vec<ScalarJson>;

pub fn parse_scalar(s: &ScalarJson) -> Result<ExactScalar> {
    match s {
        ScalarJson::Int(n) => Ok(ExactScalar::from_integer(BigInt::from(*n))),
        ScalarJson::Text(t) => {
            let t = t.trim().replace('−', "-");
            ExactScalar::from_str(&t).map_err(|_| schema_err(format!("malformed rational `{t}`")))
        }
    }
}

pub fn emit_scalar(x: &ExactScalar) -> ScalarJson {
    ScalarJson::Text(x.to_string())
}

pub fn parse_vector(v: &[ScalarJson]) -> Result<LatticeVector> {
    Ok(LatticeVector::new(
        v.iter().map(parse_scalar).collect::<Result<_>>()?,
    ))
}

pub fn emit_vector(v: &LatticeVector) -> VectorJson {
    v.coords().iter().map(emit_scalar).collect()
}

fn parse_vectors(vs: &[VectorJson], rank: usize, what: &str) -> Result<Vec<LatticeVector>> {
    vs.iter()
        .map(|v| {
            let v = parse_vector(v)?;
            if v.rank() != rank {
                return Err(schema_err(format!(
                    "{what} has rank {}, expected {rank}",
                    v.rank()
                )));
            }
            Ok(v)
        })
        .collect()
}

/// A cone by generators or by inequalities `a·x ≥ 0` and equations `e·x = 0`.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct ConeJson {
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub rays: Vec<VectorJson>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub lineality: Vec<VectorJson>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub inequalities: Vec<VectorJson>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub equations: Vec<VectorJson>,
}

impl ConeJson {
    pub fn parse(&self, rank: usize) -> Result<Cone> {
        let by_gens = !self.rays.is_empty() || !self.lineality.is_empty();
        let by_ineqs = !self.inequalities.is_empty() || !self.equations.is_empty();
        if by_gens && by_ineqs {
            return Err(schema_err(
                "a cone is given either by generators or by inequalities",
            ));
        }
        if by_ineqs {
            Cone::from_inequalities(
                rank,
                &parse_vectors(&self.inequalities, rank, "inequality")?,
                &parse_vectors(&self.equations, rank, "equation")?,
            )
        } else {
            Cone::from_generators(
                rank,
                &parse_vectors(&self.rays, rank, "ray")?,
                &parse_vectors(&self.lineality, rank, "lineality vector")?,
            )
        }
    }

    pub fn emit(c: &Cone) -> Self {
        ConeJson {
            rays: c.rays().iter().map(emit_vector).collect(),
            lineality: c.lineality().iter().map(emit_vector).collect(),
            ..Default::default()
        }
    }
}

/// `"EMPTY"`, an interval such as `"[1/2,inf)"` or `"{3}"` in rank one, or generators.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum PolyhedronJson {
    Text(String),
    Generators {
        vertices: Vec<VectorJson>,
        #[serde(default, skip_serializing_if = "Vec::is_empty")]
        rays: Vec<VectorJson>,
        #[serde(default, skip_serializing_if = "Vec::is_empty")]
        lineality: Vec<VectorJson>,
    },
}

fn parse_bound(s: &str, infinite: &[&str]) -> Result<Option<ExactScalar>> {
    let s = s.trim();
    if infinite.contains(&s) {
        return Ok(None);
    }
    parse_scalar(&ScalarJson::Text(s.to_string())).map(Some)
}

pub fn parse_interval(text: &str) -> Result<Polyhedron> {
    let t = text.trim();
    if t == "EMPTY" || t == "∅" {
        return Ok(Polyhedron::empty(1));
    }
    if let Some(x) = t.strip_prefix('{').and_then(|r| r.strip_suffix('}')) {
        return Ok(Polyhedron::point(&LatticeVector::new(vec![parse_scalar(
            &ScalarJson::Text(x.to_string()),
        )?])));
    }
    let bad = || schema_err(format!("malformed interval `{t}`"));
    let (open_lo, rest) = match t.chars().next() {
        Some('[') => (false, &t[1..]),
        Some('(') => (true, &t[1..]),
        _ => return Err(bad()),
    };
    let (open_hi, rest) = match rest.chars().last() {
        Some(']') => (false, &rest[..rest.len() - 1]),
        Some(')') => (true, &rest[..rest.len() - 1]),
        _ => return Err(bad()),
    };
    let (lo, hi) = rest.split_once(',').ok_or_else(bad)?;
    let lo = parse_bound(lo, &["-inf", "−∞", "-∞"])?;
    let hi = parse_bound(hi, &["inf", "∞", "+inf"])?;
    // closed polyhedra only: open ends must be infinite and vice versa
    if open_lo != lo.is_none() || open_hi != hi.is_none() {
        return Err(bad());
    }
    if let (Some(a), Some(b)) = (&lo, &hi) {
        if a > b {
            return Err(bad());
        }
    }
    Ok(Polyhedron::interval(lo, hi))
}

pub fn emit_interval(p: &Polyhedron) -> Option<String> {
    if p.ambient_rank() != 1 {
        return None;
    }
    if p.is_empty() {
        return Some("EMPTY".to_string());
    }
    let (lo, hi) = p.as_interval()?;
    Some(match (lo, hi) {
        (Some(a), Some(b)) if a == b => format!("{{{a}}}"),
        (Some(a), Some(b)) => format!("[{a},{b}]"),
        (Some(a), None) => format!("[{a},inf)"),
        (None, Some(b)) => format!("(-inf,{b}]"),
        (None, None) => "(-inf,inf)".to_string(),
    })
}

impl PolyhedronJson {
    pub fn parse(&self, rank: usize) -> Result<Polyhedron> {
        match self {
            PolyhedronJson::Text(t) if t.trim() == "EMPTY" => Ok(Polyhedron::empty(rank)),
            PolyhedronJson::Text(t) if rank == 1 => parse_interval(t),
            PolyhedronJson::Text(t) => Err(schema_err(format!(
                "interval notation `{t}` needs rank one"
            ))),
            PolyhedronJson::Generators {
                vertices,
                rays,
                lineality,
            } => {
                let vs = parse_vectors(vertices, rank, "vertex")?;
                if vs.is_empty() {
                    return Err(schema_err(
                        "a nonempty polyhedron needs a vertex; use \"EMPTY\"",
                    ));
                }
                Polyhedron::from_generators(
                    rank,
                    &vs,
                    &parse_vectors(rays, rank, "ray")?,
                    &parse_vectors(lineality, rank, "lineality vector")?,
                )
            }
        }
    }

    pub fn emit(p: &Polyhedron) -> Self {
        if let Some(t) = emit_interval(p) {
            return PolyhedronJson::Text(t);
        }
        if p.is_empty() {
            return PolyhedronJson::Text("EMPTY".to_string());
        }
        let tail = p.tail_cone().expect("nonempty");
        PolyhedronJson::Generators {
            vertices: p.vertices().iter().map(emit_vector).collect(),
            rays: tail.rays().iter().map(emit_vector).collect(),
            lineality: tail.lineality().iter().map(emit_vector).collect(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ChartLabelJson {
    pub cone_id: String,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub weyl: Vec<Word>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PDivisorJson {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub label: Option<ChartLabelJson>,
    /// Needed only when every coefficient is empty.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tail: Option<ConeJson>,
    pub coefficients: BTreeMap<String, PolyhedronJson>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DivisorialFanJson {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub schema: Option<String>,
    pub rank: usize,
    #[serde(default)]
    pub labels: Vec<String>,
    pub maximal: Vec<PDivisorJson>,
}

pub fn parse_label(s: &str) -> Result<DivisorLabel> {
    DivisorLabel::from_str(s)
}

impl PDivisorJson {
    pub fn parse(&self, rank: usize) -> Result<PDivisor> {
        let mut coefficients = BTreeMap::new();
        for (d, p) in &self.coefficients {
            coefficients.insert(parse_label(d)?, p.parse(rank)?);
        }
        let label = self
            .label
            .as_ref()
            .map(|l| ChartLabel::new(l.cone_id.clone(), l.weyl.clone()));
        match &self.tail {
            Some(t) => PDivisor::new(t.parse(rank)?, coefficients, label),
            None => PDivisor::from_coefficients(rank, coefficients, label),
        }
    }

    pub fn emit(d: &PDivisor) -> Self {
        PDivisorJson {
            label: d.label().map(|l| ChartLabelJson {
                cone_id: l.cone.clone(),
                weyl: l.weyl.clone(),
            }),
            tail: Some(ConeJson::emit(d.tail())),
            coefficients: d
                .coefficients()
                .iter()
                .map(|(k, p)| (k.to_string(), PolyhedronJson::emit(p)))
                .collect(),
        }
    }
}

impl DivisorialFanJson {
    /// Parses and validates with singleton incidence.
    pub fn parse(&self) -> Result<DivisorialFan> {
        self.parse_with(None)
    }

    pub fn parse_with(
        &self,
        incidence: Option<&crate::divisorial::Incidence>,
    ) -> Result<DivisorialFan> {
        if let Some(s) = &self.schema {
            check_schema(s)?;
        }
        let labels = self
            .labels
            .iter()
            .map(|l| parse_label(l))
            .collect::<Result<BTreeSet<_>>>()?;
        let maximal = self
            .maximal
            .iter()
            .map(|m| m.parse(self.rank))
            .collect::<Result<Vec<_>>>()?;
        DivisorialFan::build(self.rank, labels, maximal, incidence)
    }

    pub fn emit(f: &DivisorialFan) -> Self {
        DivisorialFanJson {
            schema: Some(SCHEMA.to_string()),
            rank: f.rank(),
            labels: f.labels().iter().map(|l| l.to_string()).collect(),
            maximal: f.maximal().iter().map(PDivisorJson::emit).collect(),
        }
    }
}

pub fn check_schema(s: &str) -> Result<()> {
    if s == SCHEMA {
        Ok(())
    } else {
        Err(schema_err(format!(
            "unsupported schema `{s}`, expected `{SCHEMA}`"
        )))
    }
}

/// Integer matrix as a list of rows; `cols` is required when there are no rows.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SplitJson {
    /// Rank of the middle lattice.
    pub rank: usize,
    pub projection: Vec<Vec<i64>>,
    pub cosection: Vec<Vec<i64>>,
}

fn map_rows(m: &LatticeMap) -> Result<Vec<Vec<i64>>> {
    m.to_rows()
        .iter()
        .map(|r| {
            r.iter()
                .map(|x| {
                    x.to_i64()
                        .ok_or_else(|| schema_err("matrix entry exceeds 64 bits"))
                })
                .collect()
        })
        .collect()
}

impl SplitJson {
    pub fn parse(&self) -> Result<SplitSequence> {
        let p = LatticeMap::from_rows(&self.projection, self.rank)?;
        let q = LatticeMap::from_rows(&self.cosection, self.rank)?;
        SplitSequence::from_projection(p, q)
    }

    pub fn emit(s: &SplitSequence) -> Result<Self> {
        Ok(SplitJson {
            rank: s.middle_rank(),
            projection: map_rows(s.projection())?,
            cosection: map_rows(s.cosection())?,
        })
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ColorJson {
    pub name: String,
    pub rho: VectorJson,
    #[serde(default)]
    pub stabilizer_roots: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ColorActionJson {
    pub word: Word,
    pub color: String,
    pub label: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DatumJson {
    pub cartan_type: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub weyl_bound: Option<usize>,
    pub valuation_cone: ConeJson,
    pub colors: Vec<ColorJson>,
    pub split: SplitJson,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub color_action: Option<Vec<ColorActionJson>>,
}

impl DatumJson {
    pub fn parse(&self) -> Result<SphericalDatum> {
        let split = self.split.parse()?;
        let rank = split.middle_rank();
        let weyl = WeylGroup::from_cartan_type(
            &self.cartan_type,
            self.weyl_bound.unwrap_or(DEFAULT_BOUND),
        )?;
        let colors = self
            .colors
            .iter()
            .map(|c| {
                let rho = parse_vector(&c.rho)?;
                if rho.rank() != rank {
                    return Err(schema_err(format!(
                        "valuation of color {} has rank {}, expected {rank}",
                        c.name,
                        rho.rank()
                    )));
                }
                Ok(Color {
                    name: c.name.clone(),
                    rho,
                    stabilizer_roots: c.stabilizer_roots.iter().copied().collect(),
                })
            })
            .collect::<Result<Vec<_>>>()?;
        let color_action = match &self.color_action {
            None => None,
            Some(entries) => {
                let mut table = BTreeMap::new();
                for e in entries {
                    let w = weyl.element_of(&e.word)?;
                    if table
                        .insert((w, e.color.clone()), parse_label(&e.label)?)
                        .is_some()
                    {
                        return Err(schema_err(format!(
                            "color action lists element {:?} on {} twice",
                            e.word, e.color
                        )));
                    }
                }
                Some(table)
            }
        };
        Ok(SphericalDatum {
            valuation_cone: self.valuation_cone.parse(rank)?,
            colors,
            weyl,
            split,
            color_action,
        })
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ColoredConeJson {
    #[serde(flatten)]
    pub cone: ConeJson,
    #[serde(default)]
    pub colors: Vec<String>,
}

pub fn parse_colored_fan(cones: &[ColoredConeJson], rank: usize) -> Result<ColoredFan> {
    Ok(ColoredFan::new(
        cones
            .iter()
            .map(|c| {
                Ok(ColoredCone::new(
                    c.cone.parse(rank)?,
                    c.colors.iter().cloned(),
                ))
            })
            .collect::<Result<Vec<_>>>()?,
    ))
}

pub fn emit_colored_fan(cf: &ColoredFan) -> Vec<ColoredConeJson> {
    cf.cones
        .iter()
        .map(|c| ColoredConeJson {
            cone: ConeJson::emit(&c.cone),
            colors: c.colors.iter().cloned().collect(),
        })
        .collect()
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ToricJson {
    /// Maximal cones of the fan in `N̄`.
    pub fan: Vec<ConeJson>,
    pub split: SplitJson,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub extra_base_rays: Vec<VectorJson>,
}

impl ToricJson {
    pub fn parse(&self) -> Result<DowngradeInput> {
        let split = self.split.parse()?;
        let rank = split.middle_rank();
        let cones = self
            .fan
            .iter()
            .map(|c| c.parse(rank))
            .collect::<Result<Vec<_>>>()?;
        let fan = if cones.is_empty() {
            Fan::trivial(rank)
        } else {
            Fan::from_cones(rank, cones)?
        };
        Ok(DowngradeInput {
            fan,
            extra_base_rays: parse_vectors(
                &self.extra_base_rays,
                split.quotient_rank(),
                "extra base ray",
            )?,
            split,
        })
    }

    pub fn emit(input: &DowngradeInput) -> Result<Self> {
        Ok(ToricJson {
            fan: input
                .fan
                .maximal_cones()
                .iter()
                .map(ConeJson::emit)
                .collect(),
            split: SplitJson::emit(&input.split)?,
            extra_base_rays: input.extra_base_rays.iter().map(emit_vector).collect(),
        })
    }
}

pub fn parse_relabel(
    map: &BTreeMap<String, String>,
) -> Result<BTreeMap<DivisorLabel, DivisorLabel>> {
    map.iter()
        .map(|(k, v)| Ok((parse_label(k)?, parse_label(v)?)))
        .collect()
}

pub fn emit_relabel(map: &BTreeMap<DivisorLabel, DivisorLabel>) -> BTreeMap<String, String> {
    map.iter()
        .map(|(k, v)| (k.to_string(), v.to_string()))
        .collect()
}

/// Incidence file: a list of label sets that meet.
pub fn parse_incidence(sets: &[Vec<String>]) -> Result<crate::divisorial::Incidence> {
    sets.iter()
        .map(|s| {
            s.iter()
                .map(|l| parse_label(l))
                .collect::<Result<BTreeSet<_>>>()
        })
        .collect()
}

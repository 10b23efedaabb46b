//! Polyhedral divisors over a symbolic base and divisorial fans.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::str::FromStr;

use serde_json::json;

use crate::error::{Error, Report, Result, ViolationKind};
use crate::lattice::{ExactScalar, LatticeMap, LatticeVector};
use crate::poly::{Cone, Fan, MinValue, Polyhedron};

/// A Weyl group element as a word in the simple reflections, by index.
pub type Word = Vec<usize>;

pub fn format_word(w: &[usize]) -> String {
    let parts: Vec<String> = w.iter().map(|i| i.to_string()).collect();
    format!("[{}]", parts.join(","))
}

fn parse_word(s: &str) -> Option<Word> {
    let inner = s.strip_prefix('[')?.strip_suffix(']')?;
    if inner.trim().is_empty() {
        return Some(Vec::new());
    }
    inner.split(',').map(|p| p.trim().parse().ok()).collect()
}

fn parse_ints(s: &str) -> Option<LatticeVector> {
    let coords: Option<Vec<i64>> = s.split(',').map(|p| p.trim().parse().ok()).collect();
    Some(LatticeVector::from_ints(&coords?))
}

/// A prime divisor of the base.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum DivisorLabel {
    /// `D_a` for a ray `a` of the base fan.
    Invariant(LatticeVector),
    Color(String),
    /// `w D̄′`; never built with the identity word, see [`DivisorLabel::translated`].
    TranslatedColor(Word, String),
    /// Orbit closure of a ray of the base fan of a toric downgrade.
    OrbitClosure(LatticeVector),
    Named(String),
}

impl DivisorLabel {
    pub fn translated(word: Word, color: impl Into<String>) -> Self {
        if word.is_empty() {
            DivisorLabel::Color(color.into())
        } else {
            DivisorLabel::TranslatedColor(word, color.into())
        }
    }

    /// Whether the label is a color or a translate of one.
    pub fn is_color(&self) -> bool {
        matches!(
            self,
            DivisorLabel::Color(_) | DivisorLabel::TranslatedColor(..)
        )
    }
}

fn fmt_ints(v: &LatticeVector) -> String {
    v.coords()
        .iter()
        .map(|c| c.to_string())
        .collect::<Vec<_>>()
        .join(",")
}

impl fmt::Display for DivisorLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            DivisorLabel::Invariant(a) => write!(f, "inv({})", fmt_ints(a)),
            DivisorLabel::Color(c) => write!(f, "col({c})"),
            DivisorLabel::TranslatedColor(w, c) => write!(f, "tcol({},{c})", format_word(w)),
            DivisorLabel::OrbitClosure(a) => write!(f, "orb({})", fmt_ints(a)),
            DivisorLabel::Named(s) => write!(f, "{s}"),
        }
    }
}

impl FromStr for DivisorLabel {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let inside = |prefix: &str| s.strip_prefix(prefix).and_then(|r| r.strip_suffix(')'));
        let bad = || Error::Schema(format!("malformed divisor label `{s}`"));
        if let Some(r) = inside("inv(") {
            return parse_ints(r).map(DivisorLabel::Invariant).ok_or_else(bad);
        }
        if let Some(r) = inside("orb(") {
            return parse_ints(r)
                .map(DivisorLabel::OrbitClosure)
                .ok_or_else(bad);
        }
        if let Some(r) = inside("col(") {
            return Ok(DivisorLabel::Color(r.to_string()));
        }
        if let Some(r) = inside("tcol(") {
            let close = r.find(']').ok_or_else(bad)?;
            let word = parse_word(&r[..=close]).ok_or_else(bad)?;
            let name = r[close + 1..].strip_prefix(',').ok_or_else(bad)?;
            return Ok(DivisorLabel::translated(word, name));
        }
        Ok(DivisorLabel::Named(s.to_string()))
    }
}

/// Identifies a maximal p-divisor: a maximal cone and the Weyl group
/// elements of the chart (one element, or a whole merged coset).
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ChartLabel {
    pub cone: String,
    pub weyl: Vec<Word>,
}

impl ChartLabel {
    pub fn new(cone: impl Into<String>, weyl: Vec<Word>) -> Self {
        ChartLabel {
            cone: cone.into(),
            weyl,
        }
    }
}

impl fmt::Display for ChartLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.weyl.is_empty() {
            return write!(f, "{}", self.cone);
        }
        let ws: Vec<String> = self.weyl.iter().map(|w| format_word(w)).collect();
        write!(f, "({}, {{{}}})", self.cone, ws.join(","))
    }
}

/// Finitely supported rational combination of prime divisors.
pub type RationalDivisor = BTreeMap<DivisorLabel, ExactScalar>;

/// `Σ Δ_D ⊗ D` with a common tail cone. Labels without a coefficient carry the tail.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct PDivisor {
    tail: Cone,
    coefficients: BTreeMap<DivisorLabel, Polyhedron>,
    label: Option<ChartLabel>,
}

/// Whether `p` is empty or `v + tail` for a single point `v`.
pub fn is_shifted_tail(p: &Polyhedron, tail: &Cone) -> bool {
    p.is_empty() || (p.vertices().len() == 1 && p.tail_cone().is_ok_and(|t| &t == tail))
}

impl PDivisor {
    pub fn new(
        tail: Cone,
        coefficients: BTreeMap<DivisorLabel, Polyhedron>,
        label: Option<ChartLabel>,
    ) -> Result<Self> {
        let mut report = Report::default();
        for (d, p) in &coefficients {
            if p.ambient_rank() != tail.ambient_rank() {
                return Err(Error::RankMismatch {
                    context: "p-divisor coefficient",
                    expected: tail.ambient_rank(),
                    found: p.ambient_rank(),
                });
            }
            if !p.is_empty() && p.tail_cone()? != tail {
                report.push(
                    ViolationKind::TailMismatch,
                    format!("coefficient at {d} has tail cone different from {tail}"),
                    json!({ "label": d.to_string(), "coefficient": p.to_string(), "tail": tail.to_string() }),
                );
            }
        }
        report.into_result()?;
        Ok(PDivisor {
            tail,
            coefficients,
            label,
        })
    }

    /// Infers the tail from the first nonempty coefficient; `rank` is used when there is none.
    pub fn from_coefficients(
        rank: usize,
        coefficients: BTreeMap<DivisorLabel, Polyhedron>,
        label: Option<ChartLabel>,
    ) -> Result<Self> {
        let tail = match coefficients.values().find(|p| !p.is_empty()) {
            Some(p) => p.tail_cone()?,
            None => Cone::zero(rank),
        };
        Self::new(tail, coefficients, label)
    }

    pub fn tail(&self) -> &Cone {
        &self.tail
    }

    pub fn rank(&self) -> usize {
        self.tail.ambient_rank()
    }

    pub fn label(&self) -> Option<&ChartLabel> {
        self.label.as_ref()
    }

    pub fn with_label(mut self, label: Option<ChartLabel>) -> Self {
        self.label = label;
        self
    }

    pub fn coefficients(&self) -> &BTreeMap<DivisorLabel, Polyhedron> {
        &self.coefficients
    }

    /// The coefficient at `d`, the tail when none is listed.
    pub fn coefficient(&self, d: &DivisorLabel) -> Polyhedron {
        self.coefficients
            .get(d)
            .cloned()
            .unwrap_or_else(|| Polyhedron::from_cone(&self.tail))
    }

    /// Drops coefficients equal to the tail cone.
    pub fn normalize(&self) -> PDivisor {
        let trivial = Polyhedron::from_cone(&self.tail);
        PDivisor {
            tail: self.tail.clone(),
            coefficients: self
                .coefficients
                .iter()
                .filter(|(_, p)| **p != trivial)
                .map(|(d, p)| (d.clone(), p.clone()))
                .collect(),
            label: self.label.clone(),
        }
    }

    /// `𝔇(u) = Σ min⟨Δ_D, u⟩ D` over nonempty coefficients.
    pub fn evaluate(&self, u: &LatticeVector) -> Result<RationalDivisor> {
        if !self.tail.dual().contains(u) {
            return Err(Error::UnboundedEvaluation);
        }
        let mut out = RationalDivisor::new();
        for (d, p) in &self.coefficients {
            if p.is_empty() {
                continue;
            }
            match p.min_eval(u)? {
                MinValue::Finite(v) => {
                    out.insert(d.clone(), v);
                }
                MinValue::NegInfinity => return Err(Error::UnboundedEvaluation),
            }
        }
        Ok(out)
    }

    /// Labels whose coefficient is empty; the locus is the base minus these.
    pub fn locus(&self) -> BTreeSet<DivisorLabel> {
        self.coefficients
            .iter()
            .filter(|(_, p)| p.is_empty())
            .map(|(d, _)| d.clone())
            .collect()
    }

    /// Coefficient-wise intersection.
    pub fn intersect(&self, other: &PDivisor) -> Result<PDivisor> {
        let tail = self.tail.intersect(&other.tail)?;
        let labels: BTreeSet<&DivisorLabel> = self
            .coefficients
            .keys()
            .chain(other.coefficients.keys())
            .collect();
        let mut coefficients = BTreeMap::new();
        for d in labels {
            coefficients.insert(
                d.clone(),
                self.coefficient(d).intersect(&other.coefficient(d))?,
            );
        }
        Ok(PDivisor {
            tail,
            coefficients,
            label: None,
        })
    }

    fn sum_over(&self, labels: &BTreeSet<DivisorLabel>) -> Result<Polyhedron> {
        let mut acc = Polyhedron::point(&LatticeVector::zeros(self.rank()));
        for d in labels {
            acc = acc.minkowski_sum(&self.coefficient(d))?;
        }
        Ok(acc)
    }

    /// Applies a lattice automorphism of `N` to every coefficient and the tail.
    pub fn map_lattice(&self, m: &LatticeMap) -> Result<PDivisor> {
        let rows: Vec<LatticeVector> = (0..m.rows()).map(|r| m.row(r)).collect();
        let coefficients = self
            .coefficients
            .iter()
            .map(|(d, p)| Ok((d.clone(), p.map_linear(&rows)?)))
            .collect::<Result<_>>()?;
        Ok(PDivisor {
            tail: self.tail.image(m)?,
            coefficients,
            label: self.label.clone(),
        })
    }

    /// Renames base divisors; labels missing from `map` are kept.
    pub fn relabel(&self, map: &BTreeMap<DivisorLabel, DivisorLabel>) -> PDivisor {
        PDivisor {
            tail: self.tail.clone(),
            coefficients: self
                .coefficients
                .iter()
                .map(|(d, p)| (map.get(d).cloned().unwrap_or_else(|| d.clone()), p.clone()))
                .collect(),
            label: self.label.clone(),
        }
    }
}

impl fmt::Display for PDivisor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.coefficients.is_empty() {
            return write!(f, "0 (tail {})", self.tail);
        }
        let terms: Vec<String> = self
            .coefficients
            .iter()
            .map(|(d, p)| format!("{p}⊗{d}"))
            .collect();
        write!(f, "{}", terms.join(" + "))
    }
}

/// Sets of base divisors with a common point; singletons when none are supplied.
pub type Incidence = Vec<BTreeSet<DivisorLabel>>;

fn face_report(
    small: &PDivisor,
    big: &PDivisor,
    incidence: Option<&Incidence>,
    universe: &BTreeSet<DivisorLabel>,
) -> Result<Vec<(String, serde_json::Value)>> {
    let mut failures = Vec::new();
    if !small.tail.is_face_of(&big.tail) {
        failures.push((
            "tail cone is not a face".to_string(),
            json!({ "face": small.tail.to_string(), "cone": big.tail.to_string() }),
        ));
    }
    let singletons: Incidence;
    let sets = match incidence {
        Some(sets) => sets,
        None => {
            let mut all: BTreeSet<DivisorLabel> = universe.clone();
            all.extend(small.coefficients.keys().cloned());
            all.extend(big.coefficients.keys().cloned());
            singletons = all.into_iter().map(|d| BTreeSet::from([d])).collect();
            &singletons
        }
    };
    for set in sets {
        let a = small.sum_over(set)?;
        let b = big.sum_over(set)?;
        if !a.is_face_of(&b) {
            let names: Vec<String> = set.iter().map(|d| d.to_string()).collect();
            failures.push((
                format!("coefficient sum over {{{}}} is not a face", names.join(",")),
                json!({ "labels": names, "face": a.to_string(), "polyhedron": b.to_string() }),
            ));
        }
    }
    Ok(failures)
}

/// Whether `small` is a face of `big` in the sense of divisorial fans.
pub fn face_check(small: &PDivisor, big: &PDivisor, incidence: Option<&Incidence>) -> Result<bool> {
    Ok(face_report(small, big, incidence, &BTreeSet::new())?.is_empty())
}

/// One cell of a slice with the maximal p-divisors (by index) whose coefficient contains it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SliceCell {
    pub cell: Polyhedron,
    pub members: BTreeSet<usize>,
}

/// The polyhedral subdivision formed by all coefficients at one base divisor.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SliceComplex {
    pub cells: Vec<SliceCell>,
}

impl SliceComplex {
    /// Cells not contained in another cell.
    pub fn maximal_cells(&self) -> Vec<&SliceCell> {
        self.cells
            .iter()
            .filter(|c| {
                !self
                    .cells
                    .iter()
                    .any(|o| o.cell != c.cell && o.cell.contains_polyhedron(&c.cell))
            })
            .collect()
    }

    /// Vertices of a rank-one slice in increasing order, as in `(−∞,0,1,∞)`.
    pub fn breakpoints(&self) -> Vec<ExactScalar> {
        let set: BTreeSet<ExactScalar> = self
            .cells
            .iter()
            .flat_map(|c| c.cell.vertices())
            .filter(|v| v.rank() == 1)
            .map(|v| v[0].clone())
            .collect();
        set.into_iter().collect()
    }
}

/// A finite family of p-divisors on a common base whose pairwise intersections are faces.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DivisorialFan {
    rank: usize,
    labels: BTreeSet<DivisorLabel>,
    maximal: Vec<PDivisor>,
}

impl DivisorialFan {
    /// Validates pairwise face relations and assembles the fan.
    pub fn build(
        rank: usize,
        labels: BTreeSet<DivisorLabel>,
        maximal: Vec<PDivisor>,
        incidence: Option<&Incidence>,
    ) -> Result<Self> {
        if let Some(d) = maximal.iter().find(|d| d.rank() != rank) {
            return Err(Error::RankMismatch {
                context: "divisorial fan member",
                expected: rank,
                found: d.rank(),
            });
        }
        let fan = Self::unchecked(rank, labels, maximal);
        fan.validate(incidence)?.into_result()?;
        Ok(fan)
    }

    /// Assembles without checking face relations.
    pub fn unchecked(
        rank: usize,
        mut labels: BTreeSet<DivisorLabel>,
        maximal: Vec<PDivisor>,
    ) -> Self {
        for d in &maximal {
            labels.extend(d.coefficients.keys().cloned());
        }
        DivisorialFan {
            rank,
            labels,
            maximal,
        }
    }

    pub fn validate(&self, incidence: Option<&Incidence>) -> Result<Report> {
        let mut report = Report::default();
        for i in 0..self.maximal.len() {
            for j in i + 1..self.maximal.len() {
                let (a, b) = (&self.maximal[i], &self.maximal[j]);
                let m = a.intersect(b)?;
                for (side, big) in [(i, a), (j, b)] {
                    for (msg, witness) in face_report(&m, big, incidence, &self.labels)? {
                        report.push(
                            ViolationKind::FaceCriterion,
                            format!("intersection of members {i} and {j}: {msg} of member {side}"),
                            json!({
                                "pair": [self.member_name(i), self.member_name(j)],
                                "member": self.member_name(side),
                                "detail": witness,
                            }),
                        );
                    }
                }
            }
        }
        Ok(report)
    }

    fn member_name(&self, i: usize) -> String {
        self.maximal[i]
            .label
            .as_ref()
            .map_or_else(|| format!("#{i}"), |l| l.to_string())
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn labels(&self) -> &BTreeSet<DivisorLabel> {
        &self.labels
    }

    pub fn maximal(&self) -> &[PDivisor] {
        &self.maximal
    }

    pub fn tail_fan(&self) -> Result<Fan> {
        if self.maximal.is_empty() {
            return Ok(Fan::trivial(self.rank));
        }
        Fan::from_cones(self.rank, self.maximal.iter().map(|d| d.tail.clone()))
    }

    pub fn slice(&self, d: &DivisorLabel) -> SliceComplex {
        let coefficients: Vec<Polyhedron> = self.maximal.iter().map(|m| m.coefficient(d)).collect();
        let mut cells: BTreeSet<Polyhedron> = BTreeSet::new();
        for c in &coefficients {
            cells.extend(c.faces());
        }
        SliceComplex {
            cells: cells
                .into_iter()
                .map(|cell| SliceCell {
                    members: coefficients
                        .iter()
                        .enumerate()
                        .filter(|(_, c)| c.contains_polyhedron(&cell))
                        .map(|(i, _)| i)
                        .collect(),
                    cell,
                })
                .collect(),
        }
    }

    pub fn slices(&self) -> BTreeMap<DivisorLabel, SliceComplex> {
        self.labels
            .iter()
            .map(|d| (d.clone(), self.slice(d)))
            .collect()
    }

    pub fn normalize(&self) -> DivisorialFan {
        DivisorialFan {
            rank: self.rank,
            labels: self.labels.clone(),
            maximal: self.maximal.iter().map(PDivisor::normalize).collect(),
        }
    }

    pub fn relabel(&self, map: &BTreeMap<DivisorLabel, DivisorLabel>) -> DivisorialFan {
        DivisorialFan {
            rank: self.rank,
            labels: self
                .labels
                .iter()
                .map(|d| map.get(d).cloned().unwrap_or_else(|| d.clone()))
                .collect(),
            maximal: self.maximal.iter().map(|d| d.relabel(map)).collect(),
        }
    }

    pub fn map_lattice(&self, m: &LatticeMap) -> Result<DivisorialFan> {
        Ok(DivisorialFan {
            rank: m.rows(),
            labels: self.labels.clone(),
            maximal: self
                .maximal
                .iter()
                .map(|d| d.map_lattice(m))
                .collect::<Result<_>>()?,
        })
    }

    /// Sorted normalized members with chart labels erased.
    pub fn canonical_members(&self) -> Vec<(Cone, BTreeMap<DivisorLabel, Polyhedron>)> {
        let mut out: Vec<_> = self
            .maximal
            .iter()
            .map(|d| {
                let n = d.normalize();
                (n.tail, n.coefficients)
            })
            .collect();
        out.sort();
        out
    }
}

/// Equality of normalized maximal members after renaming the divisors of `a`.
pub fn equal_canonical(
    a: &DivisorialFan,
    b: &DivisorialFan,
    relabel: Option<&BTreeMap<DivisorLabel, DivisorLabel>>,
) -> bool {
    let a = match relabel {
        Some(map) => a.relabel(map),
        None => a.clone(),
    };
    a.rank == b.rank && a.canonical_members() == b.canonical_members()
}

/// Per-member differences between two fans, for diagnostics.
pub fn diff_canonical(a: &DivisorialFan, b: &DivisorialFan) -> Vec<String> {
    let (ma, mb) = (a.canonical_members(), b.canonical_members());
    let show = |(t, c): &(Cone, BTreeMap<DivisorLabel, Polyhedron>)| {
        let terms: Vec<String> = c.iter().map(|(d, p)| format!("{p}⊗{d}")).collect();
        format!("tail {t}: {}", terms.join(" + "))
    };
    let mut out = Vec::new();
    for m in &ma {
        if !mb.contains(m) {
            out.push(format!("only left: {}", show(m)));
        }
    }
    for m in &mb {
        if !ma.contains(m) {
            out.push(format!("only right: {}", show(m)));
        }
    }
    out
}

//! The divisorial fan of a spherical embedding, seen as a torus variety over
//! the toroidal base.

use std::collections::{BTreeMap, BTreeSet};

use serde_json::json;

use crate::divisorial::{
    format_word, is_shifted_tail, ChartLabel, DivisorLabel, DivisorialFan, PDivisor, Word,
};
use crate::error::{Error, Report, Result, ViolationKind};
use crate::lattice::LatticeVector;
use crate::poly::{common_refinement, fiber_slice, image_fan, Cone, Fan, Polyhedron};
use crate::spherical::{ColoredFan, SphericalDatum};

/// Everything the construction produces besides the divisorial fan itself.
#[derive(Clone, Debug)]
pub struct ConstructionResult {
    pub base_fan: Fan,
    pub invariant_labels: BTreeMap<LatticeVector, DivisorLabel>,
    pub shift_vectors: BTreeMap<String, LatticeVector>,
    pub fan: DivisorialFan,
    pub refined_fan: Fan,
}

/// `σ(D′) = q(ρ_D)`.
pub fn shift_vector(color: &str, datum: &SphericalDatum) -> Result<LatticeVector> {
    Ok(datum.split.cosect(&datum.color(color)?.rho))
}

/// The image of the uncolored fan in `𝒳*(G/H′)` with one invariant divisor per ray.
pub fn base_fan(
    cf: &ColoredFan,
    datum: &SphericalDatum,
) -> Result<(Fan, BTreeMap<LatticeVector, DivisorLabel>)> {
    let uncolored = cf.uncolored_fan(datum)?;
    let support = datum.quotient_valuation_cone()?;
    let fan = image_fan(&uncolored, datum.split.projection(), Some(&support))?.fan;
    let labels = fan
        .rays()
        .into_iter()
        .map(|a| (a.clone(), DivisorLabel::Invariant(a)))
        .collect();
    Ok((fan, labels))
}

/// `ℱ_X̃`, the refinement of the uncolored fan by the preimage of the base fan.
pub fn refined_fan(cf: &ColoredFan, datum: &SphericalDatum, base: &Fan) -> Result<Fan> {
    let uncolored = cf.uncolored_fan(datum)?;
    common_refinement(&uncolored, &base.preimage(datum.split.projection())?)
}

struct Setup {
    base: Fan,
    invariant: BTreeMap<LatticeVector, DivisorLabel>,
    shifts: BTreeMap<String, LatticeVector>,
    universe: BTreeSet<DivisorLabel>,
}

fn setup(cf: &ColoredFan, datum: &SphericalDatum) -> Result<Setup> {
    datum.validate()?.into_result()?;
    cf.validate(datum)?.into_result()?;
    let (base, invariant) = base_fan(cf, datum)?;
    let mut shifts = BTreeMap::new();
    let mut universe: BTreeSet<DivisorLabel> = invariant.values().cloned().collect();
    for c in &datum.colors {
        shifts.insert(c.name.clone(), shift_vector(&c.name, datum)?);
        for w in datum.weyl.elements() {
            universe.insert(datum.act_on_color(w, &c.name)?);
        }
    }
    Ok(Setup {
        base,
        invariant,
        shifts,
        universe,
    })
}

/// The part `𝒵` shared by all charts of one cone: fibers over the base rays and
/// shifted tails over the colors.
fn common_part(
    c: &Cone,
    datum: &SphericalDatum,
    s: &Setup,
) -> Result<(Cone, BTreeMap<DivisorLabel, Polyhedron>)> {
    let n = datum.split.kernel_rank();
    let tail_poly = fiber_slice(
        c,
        &datum.split,
        &LatticeVector::zeros(datum.split.quotient_rank()),
    )?;
    let tail = tail_poly.tail_cone()?;
    let mut coefficients = BTreeMap::new();
    for (a, label) in &s.invariant {
        coefficients.insert(label.clone(), fiber_slice(c, &datum.split, a)?);
    }
    for color in &datum.colors {
        let label = datum.act_on_color(0, &color.name)?;
        let shifted = Polyhedron::shifted_cone(&s.shifts[&color.name], &tail)?;
        debug_assert_eq!(shifted.ambient_rank(), n);
        coefficients.insert(label, shifted);
    }
    Ok((tail, coefficients))
}

/// Adds `∅ ⊗ w D̄′` for the given colors.
fn chart(
    tail: &Cone,
    common: &BTreeMap<DivisorLabel, Polyhedron>,
    w: usize,
    excluded: &[&str],
    datum: &SphericalDatum,
    label: ChartLabel,
) -> Result<PDivisor> {
    let mut coefficients = common.clone();
    for name in excluded {
        coefficients.insert(
            datum.act_on_color(w, name)?,
            Polyhedron::empty(tail.ambient_rank()),
        );
    }
    PDivisor::new(tail.clone(), coefficients, Some(label))
}

fn finish(
    cf: &ColoredFan,
    datum: &SphericalDatum,
    s: Setup,
    members: Vec<PDivisor>,
) -> Result<ConstructionResult> {
    let fan = DivisorialFan::build(datum.split.kernel_rank(), s.universe, members, None)?;
    let refined = refined_fan(cf, datum, &s.base)?;
    Ok(ConstructionResult {
        base_fan: s.base,
        invariant_labels: s.invariant,
        shift_vectors: s.shifts,
        fan,
        refined_fan: refined,
    })
}

/// One chart `(C, w)` per maximal cone and Weyl group element; colors are all removed.
pub fn build_toroidal(cf: &ColoredFan, datum: &SphericalDatum) -> Result<ConstructionResult> {
    if !cf.is_toroidal() {
        return Err(Error::NotToroidal);
    }
    let s = setup(cf, datum)?;
    let names: Vec<&str> = datum.colors.iter().map(|c| c.name.as_str()).collect();
    let mut members = Vec::new();
    for cc in cf.maximal() {
        let (tail, common) = common_part(&cc.cone, datum, &s)?;
        for w in datum.weyl.elements() {
            let label = ChartLabel::new(cc.id(), vec![datum.word(w).clone()]);
            members.push(chart(&tail, &common, w, &names, datum, label)?);
        }
    }
    finish(cf, datum, s, members)
}

/// One chart per maximal colored cone `(C, ℱ)` and coset `w W_I`, `I = I(ℱ)`;
/// only colors outside `ℱ` are removed.
pub fn build_general(cf: &ColoredFan, datum: &SphericalDatum) -> Result<ConstructionResult> {
    let s = setup(cf, datum)?;
    let mut members = Vec::new();
    for cc in cf.maximal() {
        let roots = datum.parabolic_index(&cc.colors);
        datum.stabilizer_subgroup_wc(&cc.colors)?;
        let (tail, common) = common_part(&cc.cone, datum, &s)?;
        let outside: Vec<&str> = datum
            .colors
            .iter()
            .filter(|c| !cc.colors.contains(&c.name))
            .map(|c| c.name.as_str())
            .collect();
        for w in datum.weyl.min_coset_reps(&roots) {
            let coset: Vec<Word> = datum
                .weyl
                .coset(w, &roots)
                .into_iter()
                .map(|e| datum.word(e).clone())
                .collect();
            let label = ChartLabel::new(cc.id(), coset);
            members.push(chart(&tail, &common, w, &outside, datum, label)?);
        }
    }
    finish(cf, datum, s, members)
}

/// The label-free description of `X̃`: per base divisor, the maximal cells of its slice.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TildeDescription {
    pub tail_fan: Fan,
    pub slices: BTreeMap<DivisorLabel, BTreeSet<Polyhedron>>,
}

pub fn build_tilde(cf: &ColoredFan, datum: &SphericalDatum) -> Result<TildeDescription> {
    let (base, invariant) = base_fan(cf, datum)?;
    let refined = refined_fan(cf, datum, &base)?;
    let zero = LatticeVector::zeros(datum.split.quotient_rank());
    let n = datum.split.kernel_rank();
    let mut tails = Vec::new();
    for c in refined.maximal_cones() {
        let t = fiber_slice(c, &datum.split, &zero)?;
        if !t.is_empty() {
            tails.push(t.tail_cone()?);
        }
    }
    let tail_fan = if tails.is_empty() {
        Fan::trivial(n)
    } else {
        Fan::from_cones(n, tails)?
    };
    let mut slices = BTreeMap::new();
    for (a, label) in &invariant {
        let cells: Vec<Polyhedron> = refined
            .maximal_cones()
            .iter()
            .map(|c| fiber_slice(c, &datum.split, a))
            .collect::<Result<Vec<_>>>()?
            .into_iter()
            .filter(|p| !p.is_empty())
            .collect();
        slices.insert(label.clone(), maximal_polyhedra(cells));
    }
    for color in &datum.colors {
        let shift = shift_vector(&color.name, datum)?;
        let cells = tail_fan
            .maximal_cones()
            .iter()
            .map(|t| Polyhedron::shifted_cone(&shift, t))
            .collect::<Result<Vec<_>>>()?;
        slices.insert(
            datum.act_on_color(0, &color.name)?,
            maximal_polyhedra(cells),
        );
    }
    Ok(TildeDescription { tail_fan, slices })
}

fn maximal_polyhedra(cells: Vec<Polyhedron>) -> BTreeSet<Polyhedron> {
    cells
        .iter()
        .filter(|c| !cells.iter().any(|o| o != *c && o.contains_polyhedron(c)))
        .cloned()
        .collect()
}

/// Every coefficient at a non-invariant divisor is empty or a shifted tail cone.
pub fn check_shifted_tails(fan: &DivisorialFan) -> Report {
    let mut report = Report::default();
    for (k, m) in fan.maximal().iter().enumerate() {
        for (d, p) in m.coefficients() {
            let invariant = matches!(
                d,
                DivisorLabel::Invariant(_) | DivisorLabel::OrbitClosure(_)
            );
            if !invariant && !is_shifted_tail(p, m.tail()) {
                report.push(
                    ViolationKind::TailMismatch,
                    format!("coefficient at {d} of member {k} is not a shifted tail cone"),
                    json!({ "label": d.to_string(), "coefficient": p.to_string(), "tail": m.tail().to_string() }),
                );
            }
        }
    }
    report
}

/// Rows are base divisors, columns are tail cones; each cell lists the charts.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Table {
    /// Maximal cones of the tail fan, the column headers.
    pub columns: Vec<Polyhedron>,
    pub rows: Vec<TableRow>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TableRow {
    pub divisor: DivisorLabel,
    /// Breakpoints of the slice.
    pub v: Vec<crate::lattice::ExactScalar>,
    /// Per column, the names of the members whose coefficient is `v + column`.
    pub cells: Vec<BTreeSet<String>>,
}

/// Names a chart by its Weyl group elements, using `names` where given.
pub fn chart_name(
    label: Option<&ChartLabel>,
    index: usize,
    names: &BTreeMap<Word, String>,
) -> String {
    let Some(l) = label else {
        return format!("#{index}");
    };
    if l.weyl.is_empty() {
        return l.cone.clone();
    }
    let parts: Vec<String> = l
        .weyl
        .iter()
        .map(|w| names.get(w).cloned().unwrap_or_else(|| format_word(w)))
        .collect();
    if parts.len() == 1 {
        parts[0].clone()
    } else {
        format!("{{{}}}", parts.join(","))
    }
}

/// Tabulates a divisorial fan on a rank-one lattice.
///
/// Columns are the maximal tail cones; members with a smaller tail are left
/// out, use [`DivisorialFan::slice`] for those.
pub fn table(
    fan: &DivisorialFan,
    names: &BTreeMap<Word, String>,
    rows: Option<&[DivisorLabel]>,
) -> Result<Table> {
    if fan.rank() != 1 {
        return Err(Error::RankMismatch {
            context: "table rendering",
            expected: 1,
            found: fan.rank(),
        });
    }
    let mut columns: Vec<Polyhedron> = fan
        .tail_fan()?
        .maximal_cones()
        .iter()
        .map(Polyhedron::from_cone)
        .collect();
    columns.sort_by_key(|c| c.as_interval());
    let labels: Vec<DivisorLabel> = match rows {
        Some(r) => r.to_vec(),
        None => fan.labels().iter().cloned().collect(),
    };
    let mut out = Vec::new();
    for d in labels {
        let slice = fan.slice(&d);
        let mut cells = vec![BTreeSet::new(); columns.len()];
        for (k, m) in fan.maximal().iter().enumerate() {
            let coef = m.coefficient(&d);
            if coef.is_empty() {
                continue;
            }
            let tail = Polyhedron::from_cone(m.tail());
            if let Some(col) = columns.iter().position(|c| *c == tail) {
                cells[col].insert(chart_name(m.label(), k, names));
            }
        }
        out.push(TableRow {
            divisor: d,
            v: slice.breakpoints(),
            cells,
        });
    }
    Ok(Table { columns, rows: out })
}

/// Text rendering of a [`Table`]; `row_names` overrides the divisor column.
pub fn render_table(t: &Table, row_names: &BTreeMap<DivisorLabel, String>) -> String {
    let mut lines = Vec::new();
    let mut header = vec![String::new(), "v".to_string()];
    header.extend(t.columns.iter().map(|c| c.to_string()));
    lines.push(header);
    for r in &t.rows {
        let mut line = vec![
            row_names
                .get(&r.divisor)
                .cloned()
                .unwrap_or_else(|| r.divisor.to_string()),
            r.v.iter()
                .map(|x| x.to_string())
                .collect::<Vec<_>>()
                .join(","),
        ];
        line.extend(
            r.cells
                .iter()
                .map(|c| c.iter().cloned().collect::<Vec<_>>().join(",")),
        );
        lines.push(line);
    }
    let widths: Vec<usize> = (0..lines[0].len())
        .map(|i| {
            lines
                .iter()
                .map(|l| l.get(i).map_or(0, |s| s.chars().count()))
                .max()
                .unwrap_or(0)
        })
        .collect();
    let mut out = String::new();
    for (k, l) in lines.iter().enumerate() {
        let cells: Vec<String> = l
            .iter()
            .zip(&widths)
            .map(|(s, w)| format!("{s}{}", " ".repeat(w - s.chars().count())))
            .collect();
        out.push_str(cells.join(" | ").trim_end());
        out.push('\n');
        if k == 0 {
            let rule: Vec<String> = widths.iter().map(|w| "-".repeat(*w)).collect();
            out.push_str(&rule.join("-+-"));
            out.push('\n');
        }
    }
    out
}

/// Lists the maximal members; used for fans of any rank.
pub fn render_listing(fan: &DivisorialFan, names: &BTreeMap<Word, String>) -> String {
    let mut out = String::new();
    for (k, m) in fan.maximal().iter().enumerate() {
        out.push_str(&format!(
            "{}: {}\n",
            chart_name(m.label(), k, names),
            m.normalize()
        ));
    }
    out
}

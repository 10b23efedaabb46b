//! The golden examples shipped with the library.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::construction::{build_general, table, Table};
use crate::divisorial::{equal_canonical, DivisorLabel, DivisorialFan, Word};
use crate::downgrade::{crosscheck, downgrade, Crosscheck, DowngradeInput, ToricModel};
use crate::error::{Error, Result};
use crate::io::{
    check_schema, emit_colored_fan, emit_relabel, emit_scalar, parse_colored_fan, parse_label,
    parse_relabel, parse_scalar, ColoredConeJson, DatumJson, DivisorialFanJson, ScalarJson,
    ToricJson, SCHEMA,
};
use crate::lattice::{ExactScalar, LatticeMap};
use crate::spherical::{ColoredFan, SphericalDatum};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TableRowJson {
    pub divisor: String,
    pub v: Vec<ScalarJson>,
    pub cells: Vec<Vec<String>>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TableJson {
    pub rows: Vec<String>,
    #[serde(default)]
    pub row_names: BTreeMap<String, String>,
    /// Weyl group element names keyed by reduced word, e.g. `"[1,0]": "βα"`.
    #[serde(default)]
    pub element_names: BTreeMap<String, String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub expected: Option<Vec<TableRowJson>>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CorpusEntryJson {
    pub schema: String,
    #[serde(default)]
    pub name: String,
    #[serde(default)]
    pub description: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub datum: Option<DatumJson>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub colored_fan: Option<Vec<ColoredConeJson>>,
    /// A toric downgrade: the example itself, or the toric model of a spherical one.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub toric: Option<ToricJson>,
    /// Renames orbit closures of the downgrade.
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub relabel: BTreeMap<String, String>,
    /// Isomorphism from the downgrade's `N` to the datum's kernel lattice.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub lattice: Option<Vec<Vec<i64>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub expected: Option<DivisorialFanJson>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub table: Option<TableJson>,
}

#[derive(Clone, Debug)]
pub struct TableSpec {
    pub rows: Vec<DivisorLabel>,
    pub row_names: BTreeMap<DivisorLabel, String>,
    pub element_names: BTreeMap<Word, String>,
    pub expected: Option<Vec<ExpectedRow>>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExpectedRow {
    pub divisor: DivisorLabel,
    pub v: Vec<ExactScalar>,
    pub cells: Vec<Vec<String>>,
}

#[derive(Clone, Debug)]
pub struct CorpusEntry {
    pub name: String,
    pub description: String,
    pub datum: Option<SphericalDatum>,
    pub colored_fan: Option<ColoredFan>,
    pub toric: Option<DowngradeInput>,
    pub relabel: BTreeMap<DivisorLabel, DivisorLabel>,
    pub lattice: Option<LatticeMap>,
    pub expected: Option<DivisorialFan>,
    pub table: Option<TableSpec>,
    pub source: CorpusEntryJson,
}

fn parse_word_key(s: &str) -> Result<Word> {
    serde_json::from_str(s).map_err(|_| Error::Schema(format!("malformed word `{s}`")))
}

impl CorpusEntryJson {
    pub fn parse(&self) -> Result<CorpusEntry> {
        check_schema(&self.schema)?;
        let datum = self.datum.as_ref().map(DatumJson::parse).transpose()?;
        let colored_fan = match (&self.colored_fan, &datum) {
            (Some(cf), Some(d)) => Some(parse_colored_fan(cf, d.rank())?),
            (Some(_), None) => return Err(Error::Schema("a colored fan needs a datum".into())),
            _ => None,
        };
        let toric = self.toric.as_ref().map(ToricJson::parse).transpose()?;
        let lattice = match &self.lattice {
            Some(rows) => Some(LatticeMap::from_rows(rows, rows.len())?),
            None => None,
        };
        let table = match &self.table {
            None => None,
            Some(t) => Some(TableSpec {
                rows: t
                    .rows
                    .iter()
                    .map(|r| parse_label(r))
                    .collect::<Result<_>>()?,
                row_names: t
                    .row_names
                    .iter()
                    .map(|(k, v)| Ok((parse_label(k)?, v.clone())))
                    .collect::<Result<_>>()?,
                element_names: t
                    .element_names
                    .iter()
                    .map(|(k, v)| Ok((parse_word_key(k)?, v.clone())))
                    .collect::<Result<_>>()?,
                expected: t
                    .expected
                    .as_ref()
                    .map(|rows| {
                        rows.iter()
                            .map(|r| {
                                Ok(ExpectedRow {
                                    divisor: parse_label(&r.divisor)?,
                                    v: r.v.iter().map(parse_scalar).collect::<Result<_>>()?,
                                    cells: r.cells.clone(),
                                })
                            })
                            .collect::<Result<Vec<_>>>()
                    })
                    .transpose()?,
            }),
        };
        Ok(CorpusEntry {
            name: self.name.clone(),
            description: self.description.clone(),
            datum,
            colored_fan,
            toric,
            relabel: parse_relabel(&self.relabel)?,
            lattice,
            expected: self
                .expected
                .as_ref()
                .map(DivisorialFanJson::parse)
                .transpose()?,
            table,
            source: self.clone(),
        })
    }
}

impl CorpusEntry {
    pub fn from_json(text: &str) -> Result<Self> {
        let j: CorpusEntryJson =
            serde_json::from_str(text).map_err(|e| Error::Schema(e.to_string()))?;
        j.parse()
    }

    /// Spherical examples with a toric model.
    pub fn is_toric_downgradable(&self) -> bool {
        self.datum.is_some() && self.toric.is_some()
    }

    pub fn is_spherical(&self) -> bool {
        self.datum.is_some() && self.colored_fan.is_some()
    }

    /// The divisorial fan the entry describes: the construction for spherical
    /// entries, the relabeled downgrade otherwise.
    pub fn compute(&self) -> Result<DivisorialFan> {
        match (&self.datum, &self.colored_fan, &self.toric) {
            (Some(d), Some(cf), _) => Ok(build_general(cf, d)?.fan),
            (None, _, Some(_)) => self.downgraded(&self.relabel),
            _ => Err(Error::Schema(format!(
                "corpus entry {} has nothing to compute",
                self.name
            ))),
        }
    }

    /// The downgrade of the toric part, moved to the datum's lattice and relabeled.
    pub fn downgraded(
        &self,
        relabel: &BTreeMap<DivisorLabel, DivisorLabel>,
    ) -> Result<DivisorialFan> {
        let t = self.toric.as_ref().ok_or_else(|| {
            Error::Schema(format!("corpus entry {} has no toric part", self.name))
        })?;
        let mut f = downgrade(t)?.fan;
        if let Some(m) = &self.lattice {
            f = f.map_lattice(m)?;
        }
        Ok(f.relabel(relabel))
    }

    /// Whether [`CorpusEntry::compute`] matches the frozen expectation.
    pub fn matches_expected(&self) -> Result<Option<bool>> {
        match &self.expected {
            None => Ok(None),
            Some(e) => Ok(Some(equal_canonical(&self.compute()?, e, None))),
        }
    }

    pub fn toric_model(&self) -> Option<ToricModel> {
        Some(ToricModel {
            input: self.toric.clone()?,
            relabel: self.relabel.clone(),
            lattice: self.lattice.clone(),
        })
    }

    pub fn crosscheck(&self) -> Result<Crosscheck> {
        let (Some(d), Some(cf), Some(model)) = (&self.datum, &self.colored_fan, self.toric_model())
        else {
            return Err(Error::MissingCorrespondence);
        };
        crosscheck(d, cf, &model)
    }

    pub fn table(&self) -> Result<Option<Table>> {
        let Some(spec) = &self.table else {
            return Ok(None);
        };
        let fan = self.compute()?;
        table(&fan, &spec.element_names, Some(&spec.rows)).map(Some)
    }

    /// Differences between the computed table and the shipped one, with cells
    /// compared as sets; `None` when no expected table is shipped.
    pub fn table_mismatches(&self) -> Result<Option<Vec<String>>> {
        let Some(expected) = self.table.as_ref().and_then(|t| t.expected.as_ref()) else {
            return Ok(None);
        };
        let got = self.table()?.expect("table spec present");
        let mut out = Vec::new();
        if got.rows.len() != expected.len() {
            out.push(format!(
                "{} rows computed, {} expected",
                got.rows.len(),
                expected.len()
            ));
        }
        for (g, e) in got.rows.iter().zip(expected) {
            if g.divisor != e.divisor {
                out.push(format!("row {}: found {}", e.divisor, g.divisor));
                continue;
            }
            if g.v != e.v {
                out.push(format!("row {}: v {:?} expected {:?}", e.divisor, g.v, e.v));
            }
            let want: Vec<std::collections::BTreeSet<String>> = e
                .cells
                .iter()
                .map(|c| c.iter().cloned().collect())
                .collect();
            if g.cells != want {
                out.push(format!(
                    "row {}: cells {:?} expected {:?}",
                    e.divisor, g.cells, want
                ));
            }
        }
        Ok(Some(out))
    }

    pub fn to_json(&self) -> CorpusEntryJson {
        let mut j = self.source.clone();
        if let Some(cf) = &self.colored_fan {
            j.colored_fan = Some(emit_colored_fan(cf));
        }
        if let Some(t) = &self.toric {
            j.toric = ToricJson::emit(t).ok().or(j.toric);
        }
        j.relabel = emit_relabel(&self.relabel);
        if let Some(e) = &self.expected {
            j.expected = Some(DivisorialFanJson::emit(e));
        }
        j
    }
}

const FILES: &[(&str, &str)] = &[
    ("c2_parabolic", include_str!("../corpus/c2_parabolic.json")),
    ("c2_elliptic", include_str!("../corpus/c2_elliptic.json")),
    (
        "c2_hyperbolic",
        include_str!("../corpus/c2_hyperbolic.json"),
    ),
    ("p2_102", include_str!("../corpus/p2_102.json")),
    ("sl2u_a", include_str!("../corpus/sl2u_a.json")),
    ("sl2u_b", include_str!("../corpus/sl2u_b.json")),
    ("sl2u_c", include_str!("../corpus/sl2u_c.json")),
    ("sl2u_d", include_str!("../corpus/sl2u_d.json")),
    ("sl2u_e", include_str!("../corpus/sl2u_e.json")),
    ("sl3_a", include_str!("../corpus/sl3_a.json")),
    ("sl3_b", include_str!("../corpus/sl3_b.json")),
    ("gl2_c4", include_str!("../corpus/gl2_c4.json")),
    ("gl2_blc4", include_str!("../corpus/gl2_blc4.json")),
    ("gl2_p4", include_str!("../corpus/gl2_p4.json")),
    ("gl2_blp4", include_str!("../corpus/gl2_blp4.json")),
    ("grass24", include_str!("../corpus/grass24.json")),
];

/// Default fiber degree of the line bundle examples.
pub const DEFAULT_BUNDLE_DEGREE: i64 = 2;

/// Raw JSON of a shipped file by name.
pub fn corpus_source(name: &str) -> Option<&'static str> {
    FILES.iter().find(|(n, _)| *n == name).map(|(_, t)| *t)
}

pub fn corpus_names() -> Vec<String> {
    let mut names: Vec<String> = FILES.iter().map(|(n, _)| n.to_string()).collect();
    names.extend(["o_n_bundle_1".to_string(), "o_n_bundle_2".to_string()]);
    names
}

/// Every shipped example; the line bundle pair uses [`DEFAULT_BUNDLE_DEGREE`].
pub fn load_corpus() -> Result<Vec<CorpusEntry>> {
    let mut out = FILES
        .iter()
        .map(|(name, text)| {
            let e = CorpusEntry::from_json(text)
                .map_err(|err| Error::Schema(format!("corpus file {name}: {err}")))?;
            if e.name != *name {
                return Err(Error::Schema(format!(
                    "corpus file {name} declares name {}",
                    e.name
                )));
            }
            Ok(e)
        })
        .collect::<Result<Vec<_>>>()?;
    out.push(o_n_bundle(DEFAULT_BUNDLE_DEGREE, 1)?);
    out.push(o_n_bundle(DEFAULT_BUNDLE_DEGREE, 2)?);
    Ok(out)
}

pub fn corpus_entry(name: &str, params: &BTreeMap<String, i64>) -> Result<CorpusEntry> {
    let n = params.get("n").copied().unwrap_or(DEFAULT_BUNDLE_DEGREE);
    match name {
        "o_n_bundle_1" => o_n_bundle(n, 1),
        "o_n_bundle_2" => o_n_bundle(n, 2),
        _ => {
            let text = corpus_source(name)
                .ok_or_else(|| Error::Schema(format!("no corpus entry named {name}")))?;
            CorpusEntry::from_json(text)
        }
    }
}

/// The total space of `𝒪(n)` over `ℙ¹` with `ℂ*` acting on the fibers only
/// (`action = 1`) or on fibers and zero section (`action = 2`).
pub fn o_n_bundle(n: i64, action: u8) -> Result<CorpusEntry> {
    if n < 0 {
        return Err(Error::Schema(format!(
            "bundle degree must be nonnegative, got {n}"
        )));
    }
    let s = |x: i64| ScalarJson::Text(x.to_string());
    let q = |num: i64, den: i64| emit_scalar(&ExactScalar::new(num.into(), den.into()));
    let (projection, cosection, relabel, d1, d2) = match action {
        // D¹ = [n,∞)⊗0 + ∅⊗∞, D² = ∅⊗0 + [0,∞)⊗∞
        1 => (
            vec![vec![1, 0]],
            vec![vec![0, 1]],
            [("orb(-1)", "0"), ("orb(1)", "∞")],
            serde_json::json!({"0": format!("[{n},inf)"), "∞": "EMPTY"}),
            serde_json::json!({"0": "EMPTY", "∞": "[0,inf)"}),
        ),
        // D¹ = [0,∞)⊗0 + [1,∞)⊗∞, D² = ∅⊗0 + [n/(n+1),1]⊗∞
        2 => {
            let ScalarJson::Text(lo) = q(n, n + 1) else {
                unreachable!()
            };
            (
                vec![vec![1, -1]],
                vec![vec![0, 1]],
                [("orb(1)", "0"), ("orb(-1)", "∞")],
                serde_json::json!({"0": "[0,inf)", "∞": "[1,inf)"}),
                serde_json::json!({"0": "EMPTY", "∞": format!("[{lo},1]")}),
            )
        }
        _ => return Err(Error::Schema(format!("unknown bundle action {action}"))),
    };
    let ray = |a: i64, b: i64| vec![s(a), s(b)];
    let entry = serde_json::json!({
        "schema": SCHEMA,
        "name": format!("o_n_bundle_{action}"),
        "description": format!("C* acting on the total space of O({n}) over P^1, action {action}"),
        "toric": {
            "fan": [
                {"rays": [ray(1, 0), ray(0, 1)]},
                {"rays": [ray(-1, n), ray(0, 1)]},
            ],
            "split": {"rank": 2, "projection": projection, "cosection": cosection},
        },
        "relabel": relabel.iter().map(|(k, v)| (k.to_string(), v.to_string())).collect::<BTreeMap<_, _>>(),
        "expected": {
            "rank": 1,
            "labels": ["0", "∞"],
            "maximal": [{"coefficients": d1}, {"coefficients": d2}],
        },
    });
    let j: CorpusEntryJson =
        serde_json::from_value(entry).map_err(|e| Error::Schema(e.to_string()))?;
    j.parse()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bundles_for_several_degrees() {
        for n in 0..5 {
            for action in [1, 2] {
                let e = o_n_bundle(n, action).unwrap();
                assert_eq!(
                    e.matches_expected().unwrap(),
                    Some(true),
                    "n={n} action={action}"
                );
            }
        }
        assert!(o_n_bundle(-1, 1).is_err());
        assert!(o_n_bundle(2, 3).is_err());
    }
}

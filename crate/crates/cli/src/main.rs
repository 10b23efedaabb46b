//! `divfan`: divisorial fans of spherical embeddings and toric downgrades from JSON.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde_json::{json, Value};

use divfan_core::construction::{build_general, render_listing, render_table, table};
use divfan_core::corpus::{corpus_entry, corpus_names, CorpusEntry, CorpusEntryJson};
use divfan_core::divisorial::{Incidence, Word};
use divfan_core::downgrade::{crosscheck, downgrade, ToricModel};
use divfan_core::io::{
    emit_scalar, parse_incidence, parse_relabel, DivisorialFanJson, PolyhedronJson, ToricJson,
};
use divfan_core::{DivisorLabel, DivisorialFan, Error, Report, ViolationKind};

#[derive(Parser)]
#[command(
    name = "divfan",
    version,
    about = "Divisorial fans of spherical embeddings and toric downgrades"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Common {
    /// JSON file, or the name of a shipped example.
    input: String,
    /// Example parameters such as `n=3`.
    #[arg(long = "param", value_name = "KEY=VALUE")]
    params: Vec<String>,
    /// Write the result here instead of stdout.
    #[arg(long, short)]
    output: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// Check a datum, colored fan, toric fan or divisorial fan.
    Validate {
        #[command(flatten)]
        common: Common,
        /// Label sets with a common point, as a JSON list of lists.
        #[arg(long)]
        incidence: Option<PathBuf>,
        /// Also fail on face conditions that cannot be checked without incidence data.
        #[arg(long)]
        strict: bool,
    },
    /// Divisorial fan of a spherical embedding.
    Construct {
        #[command(flatten)]
        common: Common,
        /// Print the slice table instead of JSON.
        #[arg(long)]
        table: bool,
    },
    /// Divisorial fan of a toric variety under a subtorus.
    Downgrade {
        #[command(flatten)]
        common: Common,
        /// Orbit closure renaming, as a JSON object.
        #[arg(long)]
        relabel: Option<PathBuf>,
        #[arg(long)]
        table: bool,
    },
    /// Compare the construction with the downgrade of the toric model.
    Crosscheck {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        relabel: Option<PathBuf>,
    },
    /// Slices of the divisorial fan at every base divisor.
    Slices {
        #[command(flatten)]
        common: Common,
    },
    /// Text listing of a divisorial fan.
    Render {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        table: bool,
    },
    /// List the shipped examples, print one, or write all of them to a directory.
    Examples {
        /// Print this example instead of listing the names
        name: Option<String>,
        /// Example parameters such as `n=3`
        #[arg(long = "param", value_name = "KEY=VALUE")]
        params: Vec<String>,
        /// Write every example into this directory
        #[arg(long)]
        dir: Option<PathBuf>,
    },
}

enum Failure {
    Schema(String),
    Core(Error),
    Mismatch(Value),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Core(e)
    }
}

type CliResult<T> = Result<T, Failure>;

fn error_kind(e: &Error) -> (&'static str, u8) {
    match e {
        Error::Schema(_) => ("schema", 1),
        Error::RankMismatch { .. } => ("rank_mismatch", 1),
        Error::UnknownColor(_) => ("unknown_color", 1),
        Error::UnsupportedCartanType(_) => ("unsupported_cartan_type", 1),
        Error::MissingColorAction { .. } => ("missing_color_action", 1),
        Error::MissingCorrespondence => ("missing_correspondence", 1),
        Error::Validation(_) => ("validation", 2),
        Error::ZeroVector => ("zero_vector", 2),
        Error::EmptyPolyhedron => ("empty_polyhedron", 2),
        Error::UnboundedEvaluation => ("unbounded_evaluation", 2),
        Error::NonPointedSupport => ("non_pointed_support", 2),
        Error::ImageOutsideSupport => ("image_outside_support", 2),
        Error::NotToroidal => ("not_toroidal", 2),
        Error::WeylGroupTooLarge(_) => ("weyl_group_too_large", 2),
    }
}

fn report(f: Failure) -> ExitCode {
    let (body, code) = match f {
        Failure::Schema(m) => (
            json!({ "error": "schema", "kind": "schema", "message": m }),
            1,
        ),
        Failure::Core(e) => {
            let (kind, code) = error_kind(&e);
            let mut body = json!({ "error": if code == 1 { "schema" } else { "math" }, "kind": kind, "message": e.to_string() });
            if let Error::Validation(r) = &e {
                body["violations"] = serde_json::to_value(&r.violations).unwrap_or(Value::Null);
            }
            (body, code)
        }
        Failure::Mismatch(v) => (
            json!({ "error": "math", "kind": "mismatch", "detail": v }),
            2,
        ),
    };
    eprintln!("{body}");
    ExitCode::from(code)
}

fn parse_params(raw: &[String]) -> CliResult<BTreeMap<String, i64>> {
    raw.iter()
        .map(|p| {
            let (k, v) = p
                .split_once('=')
                .ok_or_else(|| Failure::Schema(format!("parameter `{p}` is not KEY=VALUE")))?;
            let v = v
                .trim()
                .parse()
                .map_err(|_| Failure::Schema(format!("parameter `{k}` needs an integer value")))?;
            Ok((k.trim().to_string(), v))
        })
        .collect()
}

fn read_json(path: &Path) -> CliResult<Value> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Failure::Schema(format!("cannot read {}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| Failure::Schema(format!("{}: {e}", path.display())))
}

fn from_value<T: serde::de::DeserializeOwned>(v: Value) -> CliResult<T> {
    serde_json::from_value(v).map_err(|e| Failure::Schema(e.to_string()))
}

enum Input {
    Entry(Box<CorpusEntry>),
    Fan(DivisorialFanJson),
    Toric(ToricJson),
}

fn load(common: &Common) -> CliResult<Input> {
    let params = parse_params(&common.params)?;
    let path = Path::new(&common.input);
    if !path.exists() {
        if corpus_names().contains(&common.input) {
            return Ok(Input::Entry(Box::new(corpus_entry(
                &common.input,
                &params,
            )?)));
        }
        return Err(Failure::Schema(format!(
            "no file or example named `{}`",
            common.input
        )));
    }
    let v = read_json(path)?;
    if v.get("maximal").is_some() {
        Ok(Input::Fan(from_value(v)?))
    } else if v.get("fan").is_some() && v.get("split").is_some() {
        Ok(Input::Toric(from_value(v)?))
    } else {
        let j: CorpusEntryJson = from_value(v)?;
        Ok(Input::Entry(Box::new(j.parse()?)))
    }
}

fn entry(common: &Common) -> CliResult<CorpusEntry> {
    match load(common)? {
        Input::Entry(e) => Ok(*e),
        _ => Err(Failure::Schema(
            "expected an example with a datum, colored fan or toric part".into(),
        )),
    }
}

fn fan_of(common: &Common) -> CliResult<(DivisorialFan, Option<CorpusEntry>)> {
    Ok(match load(common)? {
        Input::Fan(j) => (j.parse()?, None),
        Input::Toric(t) => (downgrade(&t.parse()?)?.fan, None),
        Input::Entry(e) => (e.compute()?, Some(*e)),
    })
}

fn relabel_file(path: Option<&PathBuf>) -> CliResult<Option<BTreeMap<DivisorLabel, DivisorLabel>>> {
    path.map(|p| Ok(parse_relabel(&from_value(read_json(p)?)?)?))
        .transpose()
}

fn emit(common: &Common, text: String) -> CliResult<()> {
    match &common.output {
        Some(p) => std::fs::write(p, text)
            .map_err(|e| Failure::Schema(format!("cannot write {}: {e}", p.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn pretty(v: &impl serde::Serialize) -> String {
    serde_json::to_string_pretty(v).expect("serializable") + "\n"
}

fn table_text(fan: &DivisorialFan, e: Option<&CorpusEntry>) -> CliResult<String> {
    let spec = e.and_then(|e| e.table.as_ref());
    let empty = BTreeMap::new();
    let names: &BTreeMap<Word, String> = spec.map_or(&empty, |s| &s.element_names);
    let t = table(fan, names, spec.map(|s| s.rows.as_slice()))?;
    Ok(render_table(
        &t,
        &spec.map(|s| s.row_names.clone()).unwrap_or_default(),
    ))
}

fn validate(common: &Common, incidence: Option<&PathBuf>, strict: bool) -> CliResult<()> {
    let incidence: Option<Incidence> = incidence
        .map(|p| {
            let sets: Vec<Vec<String>> = from_value(read_json(p)?)?;
            Ok::<_, Failure>(parse_incidence(&sets)?)
        })
        .transpose()?;
    let mut r = Report::default();
    let mut checked = Vec::new();
    let mut fans = Vec::new();
    match load(common)? {
        Input::Fan(j) => {
            fans.push(j.parse_with(incidence.as_ref())?);
            checked.push("divisorial_fan");
        }
        Input::Toric(t) => {
            t.parse()?.validate()?;
            checked.push("toric_fan");
        }
        Input::Entry(e) => {
            if let Some(d) = &e.datum {
                r.extend(d.validate()?);
                checked.push("datum");
                if let Some(cf) = &e.colored_fan {
                    r.extend(cf.validate(d)?);
                    checked.push("colored_fan");
                }
            }
            if let Some(t) = &e.toric {
                t.validate()?;
                checked.push("toric_fan");
            }
            if let Some(x) = &e.expected {
                x.validate(incidence.as_ref())?.into_result()?;
                fans.push(x.clone());
                checked.push("expected");
            }
        }
    }
    if strict && incidence.is_none() {
        for f in &fans {
            let wide: Vec<String> = f
                .labels()
                .iter()
                .filter(|l| matches!(l, DivisorLabel::OrbitClosure(v) | DivisorLabel::Invariant(v) if v.rank() > 1))
                .map(|l| l.to_string())
                .collect();
            if !wide.is_empty() {
                r.push(
                    ViolationKind::Unverifiable,
                    "the base has dimension above one; face conditions on intersections of labels need --incidence",
                    json!({ "labels": wide }),
                );
            }
        }
    }
    r.into_result()?;
    emit(common, pretty(&json!({ "ok": true, "checked": checked })))
}

fn construct(common: &Common, as_table: bool) -> CliResult<()> {
    let e = entry(common)?;
    let (Some(d), Some(cf)) = (&e.datum, &e.colored_fan) else {
        return Err(Failure::Schema(
            "construct needs a datum and a colored fan".into(),
        ));
    };
    let fan = build_general(cf, d)?.fan;
    if as_table {
        emit(common, table_text(&fan, Some(&e))?)
    } else {
        emit(common, pretty(&DivisorialFanJson::emit(&fan)))
    }
}

fn run_downgrade(common: &Common, relabel: Option<&PathBuf>, as_table: bool) -> CliResult<()> {
    let relabel = relabel_file(relabel)?;
    let (fan, e) = match load(common)? {
        Input::Toric(t) => (
            downgrade(&t.parse()?)?
                .fan
                .relabel(&relabel.unwrap_or_default()),
            None,
        ),
        Input::Entry(e) => {
            let fan = e.downgraded(relabel.as_ref().unwrap_or(&e.relabel))?;
            (fan, Some(*e))
        }
        Input::Fan(_) => {
            return Err(Failure::Schema(
                "downgrade needs a toric fan and a split".into(),
            ))
        }
    };
    if as_table {
        emit(common, table_text(&fan, e.as_ref())?)
    } else {
        emit(common, pretty(&DivisorialFanJson::emit(&fan)))
    }
}

fn run_crosscheck(common: &Common, relabel: Option<&PathBuf>) -> CliResult<()> {
    let e = entry(common)?;
    let (Some(d), Some(cf), Some(mut model)) = (&e.datum, &e.colored_fan, e.toric_model()) else {
        return Err(Failure::Schema(
            "crosscheck needs a datum, a colored fan and a toric model".into(),
        ));
    };
    if let Some(r) = relabel_file(relabel)? {
        model = ToricModel {
            relabel: r,
            ..model
        };
    }
    let c = crosscheck(d, cf, &model)?;
    let out = json!({ "equal": c.equal, "diff": c.diff });
    emit(common, pretty(&out))?;
    if c.equal {
        Ok(())
    } else {
        Err(Failure::Mismatch(out))
    }
}

fn slices(common: &Common) -> CliResult<()> {
    let (fan, e) = fan_of(common)?;
    let names = e
        .as_ref()
        .and_then(|e| e.table.as_ref())
        .map(|t| t.element_names.clone())
        .unwrap_or_default();
    let member =
        |i: usize| divfan_core::construction::chart_name(fan.maximal()[i].label(), i, &names);
    let mut out = serde_json::Map::new();
    for (label, s) in fan.slices() {
        let cells: Vec<Value> = s
            .maximal_cells()
            .iter()
            .map(|c| {
                json!({
                    "cell": PolyhedronJson::emit(&c.cell),
                    "members": c.members.iter().map(|&i| member(i)).collect::<Vec<_>>(),
                })
            })
            .collect();
        let mut entry = json!({ "cells": cells });
        if fan.rank() == 1 {
            entry["breakpoints"] =
                json!(s.breakpoints().iter().map(emit_scalar).collect::<Vec<_>>());
        }
        out.insert(label.to_string(), entry);
    }
    emit(common, pretty(&out))
}

fn render(common: &Common, as_table: bool) -> CliResult<()> {
    let (fan, e) = fan_of(common)?;
    if as_table {
        return emit(common, table_text(&fan, e.as_ref())?);
    }
    let names = e
        .as_ref()
        .and_then(|e| e.table.as_ref())
        .map(|t| t.element_names.clone())
        .unwrap_or_default();
    emit(common, render_listing(&fan, &names))
}

fn examples(name: Option<&str>, params: &[String], dir: Option<&PathBuf>) -> CliResult<()> {
    let params = parse_params(params)?;
    if let Some(dir) = dir {
        std::fs::create_dir_all(dir)
            .map_err(|e| Failure::Schema(format!("cannot create {}: {e}", dir.display())))?;
        let names = name.map_or_else(corpus_names, |n| vec![n.to_string()]);
        for n in names {
            let e = corpus_entry(&n, &params)?;
            let path = dir.join(format!("{n}.json"));
            std::fs::write(&path, pretty(&e.to_json())).map_err(|err| {
                Failure::Schema(format!("cannot write {}: {err}", path.display()))
            })?;
        }
        return Ok(());
    }
    match name {
        None => {
            for n in corpus_names() {
                println!("{n}");
            }
        }
        Some(n) => print!("{}", pretty(&corpus_entry(n, &params)?.to_json())),
    }
    Ok(())
}

fn run(cli: Cli) -> CliResult<()> {
    match &cli.command {
        Command::Validate {
            common,
            incidence,
            strict,
        } => validate(common, incidence.as_ref(), *strict),
        Command::Construct { common, table } => construct(common, *table),
        Command::Downgrade {
            common,
            relabel,
            table,
        } => run_downgrade(common, relabel.as_ref(), *table),
        Command::Crosscheck { common, relabel } => run_crosscheck(common, relabel.as_ref()),
        Command::Slices { common } => slices(common),
        Command::Render { common, table } => render(common, *table),
        Command::Examples { name, params, dir } => examples(name.as_deref(), params, dir.as_ref()),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    std::panic::set_hook(Box::new(|_| {}));
    match std::panic::catch_unwind(|| run(cli)) {
        Ok(Ok(())) => ExitCode::SUCCESS,
        Ok(Err(f)) => report(f),
        Err(p) => {
            let msg = p
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_else(|| "unknown panic".into());
            eprintln!(
                "{}",
                json!({ "error": "internal", "kind": "internal", "message": msg })
            );
            ExitCode::from(3)
        }
    }
}

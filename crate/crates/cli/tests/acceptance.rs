//! One pass/fail line per acceptance criterion; exits non-zero if any fails.

#[path = "../../core/tests/support/mod.rs"]
mod support;

use std::collections::{BTreeMap, BTreeSet};
use std::path::{Path, PathBuf};
use std::process::{Command, Output};
use std::time::{Duration, Instant};

use divfan_core::construction::{
    base_fan, build_general, render_table, shift_vector, Table, TableRow,
};
use divfan_core::corpus::{corpus_entry, load_corpus, CorpusEntry};
use divfan_core::downgrade::downgrade;
use divfan_core::io::DivisorialFanJson;
use divfan_core::lattice::{frac, int};
use divfan_core::{equal_canonical, DivisorLabel, DivisorialFan, LatticeMap, Polyhedron};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::Value;

type Outcome = Result<String, String>;

fn divfan(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_divfan"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout_of(args: &[&str]) -> Result<String, String> {
    let out = divfan(args);
    if !out.status.success() {
        return Err(format!(
            "divfan {} exited with {:?}: {}",
            args.join(" "),
            out.status.code(),
            String::from_utf8_lossy(&out.stderr)
        ));
    }
    Ok(String::from_utf8(out.stdout).expect("utf-8"))
}

fn fan_from_cli(args: &[&str]) -> Result<DivisorialFan, String> {
    let text = stdout_of(args)?;
    let j: DivisorialFanJson = serde_json::from_str(&text).map_err(|e| e.to_string())?;
    j.parse().map_err(|e| e.to_string())
}

fn entry(name: &str) -> CorpusEntry {
    corpus_entry(name, &BTreeMap::new()).expect("shipped example")
}

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn label(s: &str) -> DivisorLabel {
    s.parse().expect("label")
}

fn sl2u() -> Outcome {
    let mut counts = Vec::new();
    for k in ["a", "b", "c", "d", "e"] {
        let name = format!("sl2u_{k}");
        let got = fan_from_cli(&["construct", &name])?;
        let want = entry(&name).expected.expect("frozen");
        ensure(equal_canonical(&got, &want, None), || {
            format!("{name} differs from the frozen list")
        })?;
        counts.push(got.maximal().len());
    }
    ensure(counts == [2, 1, 2, 4, 3], || {
        format!("element counts {counts:?}")
    })?;
    let listing = stdout_of(&["render", "sl2u_a"])?;
    ensure(listing.contains("[1,∞)⊗0 + ∅⊗∞"), || {
        format!("sl2u_a listing:\n{listing}")
    })?;
    Ok(format!("element counts {counts:?}"))
}

fn toric_tables() -> Outcome {
    for name in ["c2_parabolic", "c2_elliptic", "c2_hyperbolic", "p2_102"] {
        let got = fan_from_cli(&["downgrade", name])?;
        ensure(
            equal_canonical(&got, &entry(name).expected.expect("frozen"), None),
            || format!("{name} table differs"),
        )?;
    }
    for n in [1i64, 3, 7] {
        let param = format!("n={n}");
        for action in ["o_n_bundle_1", "o_n_bundle_2"] {
            let got = fan_from_cli(&["downgrade", action, "--param", &param])?;
            let want = corpus_entry(action, &BTreeMap::from([("n".to_string(), n)]))
                .expect("bundle")
                .expected
                .expect("frozen");
            ensure(equal_canonical(&got, &want, None), || {
                format!("{action} with n={n} differs")
            })?;
        }
        let second = fan_from_cli(&["downgrade", "o_n_bundle_2", "--param", &param])?;
        let d2 = second.maximal().iter().any(|m| {
            m.coefficient(&label("0")).is_empty()
                && m.coefficient(&label("∞"))
                    == Polyhedron::interval(Some(frac(n, n + 1)), Some(int(1)))
        });
        ensure(d2, || format!("no member ∅⊗0 + [{n}/{},1]⊗∞", n + 1))?;
    }
    Ok("three C² rows, P² table, both bundle presentations at n = 1, 3, 7".into())
}

fn gl2() -> Outcome {
    let p4 = entry("gl2_p4");
    let blp4 = entry("gl2_blp4");
    let datum = blp4.datum.as_ref().expect("datum");
    let shift = shift_vector("D", datum).map_err(|e| e.to_string())?;
    ensure(
        shift == divfan_core::LatticeVector::from_ints(&[-1]),
        || format!("shift {shift}"),
    )?;
    let (base, _) =
        base_fan(blp4.colored_fan.as_ref().expect("fan"), datum).map_err(|e| e.to_string())?;
    ensure(base.rays().len() == 1, || {
        format!("base fan rays {:?}", base.rays())
    })?;

    // the datum's N is the model's N with the opposite orientation
    let to_model = LatticeMap::from_rows(&[vec![-1]], 1).expect("1x1");
    let fan = build_general(blp4.colored_fan.as_ref().expect("fan"), datum)
        .map_err(|e| e.to_string())?
        .fan;
    let fan = fan.map_lattice(&to_model).map_err(|e| e.to_string())?;
    let side = |m: &divfan_core::PDivisor| {
        m.tail()
            .contains(&divfan_core::LatticeVector::from_ints(&[1]))
    };
    for (d, slice) in fan.slices() {
        let bp = slice.breakpoints();
        ensure(bp == [int(1)] || bp == [int(0)], || {
            format!("slice at {d} has breakpoints {bp:?}")
        })?;
        for right in [false, true] {
            let members: Vec<usize> = (0..fan.maximal().len())
                .filter(|&i| side(&fan.maximal()[i]) == right)
                .collect();
            let empty = members
                .iter()
                .filter(|&&i| fan.maximal()[i].coefficient(&d).is_empty())
                .count();
            let cell = slice
                .maximal_cells()
                .into_iter()
                .find(|c| c.members.iter().all(|i| side(&fan.maximal()[*i]) == right))
                .map_or(0, |c| c.members.len());
            ensure(members.len() == 4 && cell + empty == 4, || {
                format!(
                    "slice at {d}: {cell} labels and {empty} empty of {}",
                    members.len()
                )
            })?;
        }
    }

    let collapsed = build_general(p4.colored_fan.as_ref().expect("fan"), datum)
        .map_err(|e| e.to_string())?
        .fan;
    let merged: Vec<_> = collapsed
        .maximal()
        .iter()
        .filter(|m| m.label().is_some_and(|l| l.weyl.len() == 4))
        .collect();
    ensure(merged.len() == 1, || {
        format!("P⁴ has {} merged charts", merged.len())
    })?;
    for name in ["gl2_c4", "gl2_blc4", "gl2_p4", "gl2_blp4"] {
        let c = entry(name).crosscheck().map_err(|e| e.to_string())?;
        ensure(c.equal, || format!("{name} crosscheck: {:?}", c.diff))?;
    }
    Ok(
        "shift −1, one base ray, 4+4 labels per slice, P⁴ colored side merged, crosscheck ×4"
            .into(),
    )
}

fn grass() -> Outcome {
    let e = entry("grass24");
    let d = downgrade(e.toric.as_ref().expect("toric")).map_err(|x| x.to_string())?;
    let fan = d.fan.relabel(&e.relabel);
    // 𝔇ᵏ is the chart omitting the k-th ray, e₀ = −Σeᵢ first
    let ray_names = [
        "(-1,-1,-1,-1,-1)",
        "(1,0,0,0,0)",
        "(0,1,0,0,0)",
        "(0,0,1,0,0)",
        "(0,0,0,1,0)",
        "(0,0,0,0,1)",
    ];
    let chart: Vec<usize> = fan
        .maximal()
        .iter()
        .map(|m| {
            let id = &m.label().expect("chart label").cone;
            (0..6)
                .find(|&k| !id.contains(ray_names[k]))
                .expect("one ray omitted")
        })
        .collect();
    let want: BTreeMap<&str, Vec<i64>> = BTreeMap::from([
        ("A", vec![0, 1]),
        ("H_1", vec![0]),
        ("H_2", vec![0]),
        ("H_3", vec![0]),
        ("H_4", vec![-1]),
    ]);
    for (name, bp) in &want {
        let s = fan.slice(&label(name));
        let got = s.breakpoints();
        ensure(
            got == bp.iter().map(|&x| int(x)).collect::<Vec<_>>(),
            || format!("Ξ_{name} breakpoints {got:?}"),
        )?;
        for c in s.maximal_cells() {
            let members: BTreeSet<usize> = c.members.iter().map(|&i| chart[i]).collect();
            let (lo, hi) = c.cell.as_interval().expect("interval");
            let expect: BTreeSet<usize> = match (lo, hi) {
                (None, _) => BTreeSet::from([0]),
                (_, None) => BTreeSet::from([5]),
                _ => {
                    let i = name
                        .strip_prefix("H_")
                        .map_or(0, |k| k.parse().expect("index"));
                    (1..5).filter(|&k| k != i).collect()
                }
            };
            ensure(members == expect, || {
                format!("Ξ_{name} cell {} labeled {members:?}", c.cell)
            })?;
        }
        // vertices of Ξ_Hᵢ are middle cells too
        if let Some(i) = name
            .strip_prefix("H_")
            .map(|k| k.parse::<usize>().expect("index"))
        {
            let point = Polyhedron::interval(Some(int(bp[0])), Some(int(bp[0])));
            let at: BTreeSet<usize> = (0..fan.maximal().len())
                .filter(|&m| fan.maximal()[m].coefficient(&label(name)) == point)
                .map(|m| chart[m])
                .collect();
            let expect: BTreeSet<usize> = (1..5).filter(|&k| k != i).collect();
            ensure(at == expect, || {
                format!("vertex of Ξ_{name} labeled {at:?}")
            })?;
            let empty: Vec<usize> = (0..fan.maximal().len())
                .filter(|&m| fan.maximal()[m].coefficient(&label(name)).is_empty())
                .map(|m| chart[m])
                .collect();
            ensure(empty == [i], || {
                format!("Ξ_{name}: empty coefficient in {empty:?}")
            })?;
        }
    }
    ensure(
        equal_canonical(&fan, e.expected.as_ref().expect("frozen"), None),
        || "grass24 differs from the frozen fan".into(),
    )?;
    Ok(
        "Ξ_A=(−∞,0,1,∞), Ξ_H₁..₃=(−∞,0,∞), Ξ_H₄=(−∞,−1,∞), 𝔇⁰ left, 𝔇⁵ right, middle {𝔇¹..𝔇⁴}∖𝔇ⁱ"
            .into(),
    )
}

fn sl3_tables() -> Outcome {
    for name in ["sl3_a", "sl3_b"] {
        let e = entry(name);
        let spec = e.table.as_ref().expect("table spec");
        let expected = spec.expected.as_ref().expect("frozen table");
        let got = stdout_of(&["construct", name, "--table"])?;
        // the frozen table laid out by the same renderer
        let columns = vec![
            Polyhedron::interval(None, Some(int(0))),
            Polyhedron::interval(Some(int(0)), None),
        ];
        let rows = expected
            .iter()
            .map(|r| TableRow {
                divisor: r.divisor.clone(),
                v: r.v.clone(),
                cells: r
                    .cells
                    .iter()
                    .map(|c| c.iter().cloned().collect())
                    .collect(),
            })
            .collect();
        let want = render_table(&Table { columns, rows }, &spec.row_names);
        ensure(got == want, || format!("{name}:\n{got}expected:\n{want}"))?;
        let v: Vec<_> = expected.iter().map(|r| r.v.clone()).collect();
        ensure(
            v == [[int(1)], [int(0)], [int(-1)], [int(0)], [int(0)], [int(0)]],
            || format!("{name} v column {v:?}"),
        )?;
    }
    Ok("both tables, v column 1/0/−1/0/0/0".into())
}

fn properties() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    let p2 = |rng: &mut ChaCha8Rng| [rng.gen_range(-5..=5), rng.gen_range(-5..=5)];
    let mut triples = 0;
    while triples < 1000 {
        let verts: Vec<[i64; 2]> = (0..rng.gen_range(1..5)).map(|_| p2(&mut rng)).collect();
        let tail: Vec<[i64; 2]> = (0..rng.gen_range(0..3)).map(|_| p2(&mut rng)).collect();
        let pointed = tail.iter().all(|a| {
            tail.iter()
                .all(|b| a[0] * b[1] != a[1] * b[0] || a[0] * b[0] + a[1] * b[1] >= 0)
        });
        if !pointed {
            continue;
        }
        let u: Vec<i64> = (0..4).map(|_| rng.gen_range(0..4)).collect();
        let v: Vec<i64> = (0..4).map(|_| rng.gen_range(0..4)).collect();
        support::check_concavity(&verts, &tail, &u, &v)?;
        triples += 1;
    }
    let mut instances = 0;
    while instances < 100 {
        let points: Vec<[i64; 2]> = (0..rng.gen_range(3..7)).map(|_| p2(&mut rng)).collect();
        let keep: Vec<bool> = (0..6).map(|_| rng.gen()).collect();
        let Some(fan) = support::pyramid_fan(&points, &keep, rng.gen()) else {
            continue;
        };
        let rows: Vec<Vec<i64>> = (0..2)
            .map(|_| (0..3).map(|_| rng.gen_range(-6..=6)).collect())
            .collect();
        support::check_image_fan(&fan, &LatticeMap::from_rows(&rows, 3).expect("2x3"))?;
        instances += 1;
    }
    let mut cosets = 0;
    for t in ["A1", "A1xA1", "A2"] {
        cosets += support::check_coset_representatives(t)?;
    }
    let corpus = load_corpus().map_err(|e| e.to_string())?;
    let mut spherical = 0;
    for e in &corpus {
        support::check_toroidal_agreement(e)?;
        support::check_color_tails(e)?;
        spherical += usize::from(e.is_spherical());
    }
    Ok(format!(
        "{triples} concavity triples, {instances} image fans, {cosets} cosets, {spherical} spherical examples"
    ))
}

fn scratch_dir() -> PathBuf {
    let dir = std::env::temp_dir().join(format!("divfan-acceptance-{}", std::process::id()));
    std::fs::create_dir_all(&dir).expect("temp dir");
    dir
}

fn rejected_with(file: &Path, kind: &str) -> Result<Value, String> {
    let out = divfan(&["validate", file.to_str().expect("utf-8 path")]);
    ensure(out.status.code() == Some(2), || {
        format!("{}: exit {:?}", file.display(), out.status.code())
    })?;
    let err: Value =
        serde_json::from_slice(&out.stderr).map_err(|e| format!("stderr is not JSON: {e}"))?;
    let hit = err["violations"]
        .as_array()
        .into_iter()
        .flatten()
        .find(|v| v["kind"] == kind && !v["witness"].is_null())
        .cloned();
    hit.ok_or_else(|| format!("{}: no {kind} witness in {err}", file.display()))
}

fn negative_controls() -> Outcome {
    let dir = scratch_dir();
    let gl2: Value =
        serde_json::from_str(&stdout_of(&["examples", "gl2_c4"])?).map_err(|e| e.to_string())?;
    let colored = |cones: Value| serde_json::json!({ "schema": "divfan/1", "name": "bad", "datum": gl2["datum"].clone(), "colored_fan": cones });
    let outside = dir.join("outside.json");
    let bad = colored(serde_json::json!([{ "rays": [["-1", "1"], ["0", "1"]] }]));
    std::fs::write(&outside, bad.to_string()).expect("write");
    let w1 = rejected_with(&outside, "interior_misses_valuation_cone")?;

    let overlap = dir.join("overlap.json");
    let bad = colored(
        serde_json::json!([{ "rays": [["1", "0"], ["1", "1"]] }, { "rays": [["1", "0"], ["2", "1"]] }]),
    );
    std::fs::write(&overlap, bad.to_string()).expect("write");
    let w2 = rejected_with(&overlap, "interior_overlap")?;

    let faces = dir.join("faces.json");
    let bad = serde_json::json!({
        "schema": "divfan/1", "rank": 1, "labels": ["P"],
        "maximal": [
            { "tail": { "rays": [["1"]] }, "coefficients": { "P": "[0,inf)" } },
            { "tail": { "rays": [["1"]] }, "coefficients": { "P": "[1,inf)" } },
        ],
    });
    std::fs::write(&faces, bad.to_string()).expect("write");
    let w3 = rejected_with(&faces, "face_criterion")?;
    let _ = std::fs::remove_dir_all(&dir);
    Ok(format!(
        "witnesses {} | {} | {}",
        w1["witness"], w2["witness"], w3["witness"]
    ))
}

type Criterion = (&'static str, fn() -> Outcome);

fn main() {
    let criteria: [Criterion; 7] = [
        ("SL₂/U corpus", sl2u),
        ("toric tables", toric_tables),
        ("GL₂ suite", gl2),
        ("Grass(2,4)", grass),
        ("SL₃ tables", sl3_tables),
        ("property suites", properties),
        ("negative controls", negative_controls),
    ];
    let mut failed = 0;
    for (i, (name, f)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let mut outcome = f();
        let took = start.elapsed();
        if outcome.is_ok() && took > Duration::from_secs(5) {
            outcome = Err(format!("took {took:.2?}, limit 5s"));
        }
        match outcome {
            Ok(detail) => println!("PASS {}. {name} ({took:.2?}): {detail}", i + 1),
            Err(why) => {
                failed += 1;
                println!("FAIL {}. {name} ({took:.2?}): {why}", i + 1);
            }
        }
    }
    println!(
        "acceptance: {} of {} criteria passed",
        criteria.len() - failed,
        criteria.len()
    );
    if failed > 0 {
        std::process::exit(1);
    }
}

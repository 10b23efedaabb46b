use criterion::{black_box, criterion_group, criterion_main, Criterion};
use divfan_core::construction::build_general;
use divfan_core::corpus::{load_corpus, CorpusEntry};
use divfan_core::downgrade::downgrade;
use divfan_core::poly::image_fan;

fn entry(name: &str) -> CorpusEntry {
    load_corpus()
        .expect("corpus loads")
        .into_iter()
        .find(|e| e.name == name)
        .unwrap_or_else(|| panic!("no corpus entry {name}"))
}

fn image_fans(c: &mut Criterion) {
    let grass = entry("grass24");
    let t = grass.toric.as_ref().expect("toric part");
    c.bench_function("image_fan/grass24", |b| {
        b.iter(|| image_fan(black_box(&t.fan), black_box(t.split.projection()), None).unwrap())
    });
}

fn constructions(c: &mut Criterion) {
    let sl3 = entry("sl3_b");
    let (d, cf) = (
        sl3.datum.as_ref().unwrap(),
        sl3.colored_fan.as_ref().unwrap(),
    );
    c.bench_function("build_general/sl3_b", |b| {
        b.iter(|| build_general(black_box(cf), black_box(d)).unwrap())
    });

    let gl2 = entry("gl2_blp4");
    let t = gl2.toric.as_ref().expect("toric part");
    c.bench_function("downgrade/gl2_blp4", |b| {
        b.iter(|| downgrade(black_box(t)).unwrap())
    });
}

criterion_group!(benches, image_fans, constructions);
criterion_main!(benches);

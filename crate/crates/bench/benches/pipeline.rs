use std::path::Path;

use criterion::{black_box, criterion_group, criterion_main, Criterion};
use dummymark::opaque::{run_observation, Algorithm, PredicateGroup, PredicateWorld, WorldShape};
use dummymark::{embed, verify, ClassFile, Codebook, WatermarkConfig};

const MESSAGE: &str = "ITS SURABAYA";

fn fixture(name: &str) -> Vec<u8> {
    let p = Path::new(env!("CARGO_MANIFEST_DIR")).join(format!("../core/tests/fixtures/classes/{name}.class"));
    std::fs::read(p).expect("fixture")
}

fn config() -> WatermarkConfig {
    WatermarkConfig { codebook: Codebook::extended(), ..Default::default() }
}

fn classfile(c: &mut Criterion) {
    let bytes = fixture("Stylepad");
    c.bench_function("parse", |b| b.iter(|| ClassFile::parse(black_box(&bytes)).unwrap()));
    let cf = ClassFile::parse(&bytes).unwrap();
    c.bench_function("serialize", |b| b.iter(|| black_box(&cf).to_bytes().unwrap()));
}

fn watermark(c: &mut Criterion) {
    let config = config();
    let cf = ClassFile::parse(&fixture("Stylepad")).unwrap();
    let i = cf.method_index("Z", None).unwrap();
    c.bench_function("embed", |b| b.iter(|| embed(black_box(&cf), i, MESSAGE, &config).unwrap()));
    let marked = embed(&cf, i, MESSAGE, &config).unwrap().0.to_bytes().unwrap();
    c.bench_function("verify", |b| {
        b.iter(|| verify([("Stylepad", black_box(marked.as_slice()))], MESSAGE, &config).unwrap())
    });
}

fn simulate(c: &mut Criterion) {
    let world = PredicateWorld::new(WorldShape::Listing);
    let groups = [PredicateGroup::listing(Algorithm::I), PredicateGroup::listing(Algorithm::II)];
    c.bench_function("simulate 10x100", |b| b.iter(|| run_observation(&world, &groups, black_box(1), 10, 100)));
}

criterion_group!(benches, classfile, watermark, simulate);
criterion_main!(benches);

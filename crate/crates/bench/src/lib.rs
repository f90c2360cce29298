//! Criterion benchmarks for parsing, embedding, verification and the
//! predicate simulation live in `benches/pipeline.rs`.

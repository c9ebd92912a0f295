//! Criterion benchmarks for the `consonance` crate; see `benches/`.

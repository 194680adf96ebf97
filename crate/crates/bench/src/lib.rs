//! Criterion benchmarks for the painleve crate live under `benches/`.

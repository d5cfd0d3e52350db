//! Criterion benchmarks for the localization pipeline; see `benches/`.

//! Criterion benchmarks for eur-core; see `benches/`.

//! Criterion benchmarks for the matbeta engines; see `benches/`.

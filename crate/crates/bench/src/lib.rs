//! Criterion benchmarks for the fidsamp samplers live in `benches/`.

//! Criterion benchmarks for the extended-quotient engine; see `benches/`.

//! Criterion benchmarks for the `k3walls` library live in `benches/`.

//! Criterion benchmarks for the core kernels; see `benches/`.

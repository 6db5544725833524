//! Criterion benchmarks for the germ kernels; see `benches/kernels.rs`.

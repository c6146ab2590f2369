//! Criterion benchmarks for divmod, system construction and the Lax check; see `benches/`.

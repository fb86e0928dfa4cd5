//! Benchmarks for the gamecheck engines; see `benches/`.

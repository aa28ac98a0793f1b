//! Criterion benchmarks for `lattice-optima` live under `benches/`.

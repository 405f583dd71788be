//! Criterion benchmarks for the metric and the BFS oracle; see `benches/`.

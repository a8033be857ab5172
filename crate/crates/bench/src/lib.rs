//! Criterion benchmarks for the constructions in `subfib`; see `benches/`.

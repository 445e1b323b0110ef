//! Criterion benchmarks for `sunalg` live in `benches/`; run them with
//! `cargo bench -p sunalg-bench`.

//! Criterion benchmarks for the sparseconv workspace live in `benches/`;
//! run them with `cargo bench -p sparseconv-bench`. This crate has no
//! library code of its own.

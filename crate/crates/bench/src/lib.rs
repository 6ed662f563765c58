//! Criterion benchmarks for `abc-core`; run with `cargo bench -p abc-bench`.

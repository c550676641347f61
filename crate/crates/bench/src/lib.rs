//! Benchmarks for the estimators; see benches/.

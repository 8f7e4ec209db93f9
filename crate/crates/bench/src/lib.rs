//! Benchmark-only crate; see `benches/evolution.rs` for the hot-path
//! measurements of the walk kernel and the stationarity check.

//! Benchmark-only crate; see `benches/core_routes.rs`.

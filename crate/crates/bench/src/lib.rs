//! Benchmarks only; see `benches/transfer.rs`.

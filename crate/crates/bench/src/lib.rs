//! Synthetic corpus generators for benchmarks.

//! Benchmark-only crate; see `benches/solvers.rs`. The three hot paths are
//! the AGM elliptic-integral kernel, the extrapolated finite-difference
//! eigensolve, and the Floquet discriminant integration.

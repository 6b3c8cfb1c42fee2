//! Multiway Cut toolkit: the simplex-embedding LP relaxation, randomized
//! rounding schemes (exponential clocks plus three families of threshold
//! sweeps), closed-form cut-density formulas, and grid-based certification
//! of the approximation factors 1.309017, 1.30217 and 1.2965.
//!
//! The crate is organized as a library; `examples/` holds one runnable
//! program per capability and the `mwcut` binary exposes the same
//! workflows as subcommands with JSON output.
//!
//! Entry points:
//! - [`geometry`]: simplex points, edges, embeddings, labelings, graphs.
//! - [`density`]: piecewise-polynomial densities and the published
//!   threshold distributions.
//! - [`schemes`]: executable rounding schemes and their mixtures.
//! - [`analytic`]: closed-form cut densities per scheme and case.
//! - [`certify`]: grid scans with a discretization-error bound.
//! - [`lp`]: a self-contained dense simplex solver.
//! - [`optimize`]: re-derivation of the mixing parameters by LP.
//! - [`ckr`]: the relaxation for concrete graphs plus a brute-force oracle.
//! - [`adversary`]: the two tight-example lower-bound games.
//! - [`pairwise`]: pairwise-realizable distributions (sampler, PSD check,
//!   decomposition heuristic).
//! - [`montecarlo`]: empirical cut-density estimation with common random
//!   numbers.

pub mod adversary;
pub mod analytic;
pub mod certify;
pub mod ckr;
pub mod density;
pub mod error;
pub mod geometry;
pub mod lp;
pub mod montecarlo;
pub mod optimize;
pub mod pairwise;
pub mod rng;
pub mod schemes;

pub use error::Error;

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;

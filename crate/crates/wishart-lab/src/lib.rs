//! wishart-lab: a Monte Carlo laboratory for hollow Wishart ensembles.
//!
//! The library samples Wishart matrices with removed diagonal built from
//! standardized log-concave entry laws, compares them against the hollow
//! Gaussian Wigner ensemble, and evaluates the closed-form bounds and
//! moment identities that govern when the two ensembles merge (empirically,
//! around d ≍ n³).
//!
//! Module map:
//! - [`distributions`] — the standardized log-concave entry laws.
//! - [`ensembles`] — data-matrix / hollow-matrix samplers and RNG streams.
//! - [`spectra`] — deterministic linear algebra on samples.
//! - [`bounds`] — closed-form bound and moment evaluators.
//! - [`calculus1d`] — OU semigroup, Fisher information, de Bruijn identity,
//!   and the variational Fisher inequality on small instances.
//! - [`estimators`] — the parallel Monte Carlo engine, empirical TV lower
//!   bounds, k-NN entropy, and tail curves.
//! - [`cli`] — config parsing, experiment dispatch, CSV reports.

pub mod bounds;
pub mod calculus1d;
pub mod cli;
pub mod distributions;
pub mod ensembles;
pub mod estimators;
mod quad;
pub mod spectra;

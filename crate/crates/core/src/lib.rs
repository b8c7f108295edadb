//! Computations with finitely generated integer matrix groups.
//!
//! The crate is organised by experiment:
//!
//! * [`exact`]: arbitrary-precision matrices, characteristic polynomials,
//!   cyclotomic factorization and invariant bilinear forms.
//! * [`group`]: generating sets, balls, random walks, relation search and
//!   characteristic-polynomial statistics.
//! * [`congruence`]: reduction mod `q`, closure in `SL_n(Z/q)`, congruence
//!   Cayley graphs and their spectra.
//! * [`monodromy`]: integral hypergeometric monodromy groups and the
//!   classification of their Zariski closures.
//! * [`lattice`]: Cartan roots and involutions of hyperbolic lattices and the
//!   minimum-distance graph.
//! * [`rotation`]: rotation groups acting on spherical harmonics and the
//!   spectral gap of their averaging operator.
//! * [`diophantine`]: Zaremba scans and Apollonian curvature orbits.

pub mod congruence;
pub mod diophantine;
pub mod error;
pub mod exact;
pub mod group;
pub mod lattice;
pub mod monodromy;
pub mod rotation;
pub mod spectral;

pub use error::{Error, Result};
pub use exact::{IntMatrix, IntPoly, RatScalar};
pub use group::GenSet;

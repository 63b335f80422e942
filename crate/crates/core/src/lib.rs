//! Exact one-dimensional Earth Mover's Distance.
//!
//! * [`numerics`]: rationals, polynomials in `t`, truncated `(z, t)` series.
//! * [`emd`]: compositions, the closed-form distance, the transport oracle,
//!   chain repair and the word bijection.
//! * [`genfun`]: the bivariate generating function of distances and the
//!   numerator polynomials derived from it.
//! * [`expectation`]: limiting expected distances and Monte Carlo checks.
//! * [`graph`]: threshold graphs, components, Laplacian spectra and bounds.
//! * [`ingest`] and [`render`]: CSV input and exact decimal output.

pub mod emd;
pub mod expectation;
pub mod genfun;
pub mod graph;
pub mod ingest;
pub mod numerics;
pub mod render;
